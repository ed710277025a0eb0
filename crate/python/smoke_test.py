"""Smoke test for the `opuc` extension module.

Build and install first:

    pip install maturin
    maturin build --release -m crates/python/Cargo.toml -o dist
    pip install dist/opuc-*.whl
"""

import math

import opuc


def close(a, b, tol):
    assert abs(a - b) <= tol, (a, b)


def main():
    # alpha = (1/2, 1/3) <-> c = 0, m = (0, 1/4, 1/3)
    pair = opuc.verblunsky_to_pair([0.5, 1 / 3])
    close(pair.m[1], 0.25, 1e-15)
    close(pair.m[2], 1 / 3, 1e-15)
    back = pair.verblunsky()
    close(back[0], 0.5, 1e-15)
    close(back[1], 1 / 3, 1e-15)

    p = opuc.SequencePair(c=[0.0, 0.0], d=[0.5, 0.25])
    theta = p.zero_angles(2)
    close(theta[0], 2 * math.pi / 3, 1e-12)
    close(theta[1], 4 * math.pi / 3, 1e-12)

    q = p.quadrature(2)
    assert len(q) == 3 and all(w > 0 for w in q.weights)
    close(q.total(), 1.0, 1e-14)
    close(q.cdf(2 * math.pi), 1.0, 0.0)

    fam = opuc.ExampleFamily(1.0, 0.3, 0.5)
    (t1, m1), (t2, m2) = fam.masses()
    close(m1, 8 / 15, 1e-15)
    close(m2, 2 / 15, 1e-15)
    close(t2, 1.5 * math.pi, 1e-15)

    spectrum = opuc.analyze_periodic(list(fam.alpha()))
    masses = [pt["mass"] for pt in spectrum["pure_points"]]
    close(masses[0], 8 / 15, 1e-12)
    close(masses[1], 2 / 15, 1e-12)
    close(spectrum["total_mass"], 1.0, 1e-9)
    for edge, ref in zip(sorted(spectrum["plus_solutions"] + spectrum["minus_solutions"]), fam.bands()):
        close(edge, ref, 1e-10)

    long = fam.pair(10)
    assert long.interlacing_margin(20) > 0
    gap = long.support_gap(20)
    assert gap["min_distance"] >= 0
    beta, alpha_tilde, unfolded, consistency = long.unfold()
    assert consistency < 1e-10 and all(abs(c - 1.0) < 1e-14 for c in unfolded.c)

    try:
        opuc.SequencePair(c=[0.0], m=[1.5])
    except ValueError:
        pass
    else:
        raise AssertionError("m outside [0, 1) accepted")

    print("smoke test passed")


if __name__ == "__main__":
    main()
