"""Smoke test for the Python bindings.

Build and install with `maturin develop -m crates/python/Cargo.toml`, or
copy the built library next to this file as `subcount.so`.
"""
from fractions import Fraction
import json

import subcount as sc

edge = sc.Graph.builtin("edge")
tri = sc.Graph.builtin("triangle", "simple")
assert edge.n == 2 and edge.m == 1
assert tri.aut_count() == 6
assert sc.Graph.builtin("double-edge").canonical_copies() == 4
assert tri.density() == Fraction(1)

# all four (2,1)-multigraphs: two loops, two proper edges
d = sc.oracle_distribution(2, 1, [edge])
assert d["total"] == 4 and d["distinguished_total"] == 2
assert sc.distinguished_total(2, 1, [edge]) == 2
assert sc.expected_count(3, 3, [tri]) == 1
assert sc.exactly_t_distribution(2, 1, edge) == {0: 2, 1: 2}

g = sc.sample(10, 12, seed=1)
assert g.m == 12 and g == sc.sample(10, 12, seed=1)
k4 = sc.Graph(4, [(1, 2), (1, 3), (1, 4), (2, 3), (2, 4), (3, 4)], "simple")
assert k4.count(tri) == 4

assert abs(sc.solve_tuning("exp", 2.5) - 2.5) < 1e-10
lam = sc.poisson_lambda(sc.Graph.builtin("double-edge"), 0.5)
assert abs(lam["value"] - 0.25) < 1e-12
assert sc.threshold_exponent(tri) == Fraction(1)

report = sc.run_experiment(json.dumps({
    "model": "uniform-multi", "n": 50, "m": 25, "pattern": "loop",
    "replicates": 200, "seed": 3,
}), workers=1)
assert report["replicates"] == 200
print("smoke test ok")
