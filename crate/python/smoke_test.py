"""Smoke test for the `prym` extension module.

Build and install first:
    pip install --no-build-isolation ./crates/python
"""

import json
import math
from pathlib import Path

import prym

FIXTURES = Path(__file__).resolve().parent.parent / "fixtures"


def load(rel):
    return json.loads((FIXTURES / rel).read_text())


def main():
    # theta graph with unit lengths: w0 = 3, I2 = 5 sqrt(3) / 18
    jac = prym.jacobian_moments(load("graphs/theta.json"), at="x=1,y=1,z=1")
    assert jac["w0"] == "x*y + x*z + y*z", jac["w0"]
    assert math.isclose(jac["value"]["decimal"], 5 * math.sqrt(3) / 18, rel_tol=1e-12)

    # string input works too
    text = (FIXTURES / "covers/dumbbell.json").read_text()
    pr = prym.prym_moments(text, at="")
    assert pr["torus_rank"] == 1
    assert pr["value"]["scaled_numerator"] == "3" and pr["value"]["radicand"] == "6"

    assert prym.fs_edge_sets(load("covers/genus3-fs2.json")) == [["e", "f"]]

    tower = prym.check_tower(load("towers/genus3-fs2.json"))
    assert tower["volume_ok"] and tower["moment_ok"], tower

    counts = prym.enumeration_counts(2)
    assert [counts[k] for k in ("trees", "typed", "monodromy", "generic", "covers")] == [4, 32, 140, 121, 363]

    report = prym.verify(2)
    assert report["all_passed"], report

    cover = load("covers/k4-odd.json")
    exact = prym.prym_moments(cover, at="")["value"]["decimal"]
    mc = prym.monte_carlo(cover=cover, samples=200_000, seed=1)
    assert abs(mc["i2"] - exact) <= 4 * mc["std_error"], (mc, exact)

    try:
        prym.prym_moments(load("invalid/sign-zero.json"))
    except ValueError as e:
        assert "sign" in str(e)
    else:
        raise AssertionError("invalid cover accepted")

    print("smoke test passed")


if __name__ == "__main__":
    main()
