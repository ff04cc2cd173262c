"""Exit criteria for the package, one test per criterion.

Each test records a PASS/FAIL line that is printed in the pytest terminal
summary.  Tolerances are fixed here and never tuned after the fact.
"""

import math
import time

import numpy as np
import pytest

from realized_cumulants.cli import main
from realized_cumulants.models import (
    BrownianMartingale,
    ExponentialMartingale,
    PoissonMartingale,
    TreeModel,
    increment_bell_residuals,
    tree_backward_induction,
)
from realized_cumulants.realized import (
    aggregation_residual_tree,
    aggregation_triples,
    expected_realized_cumulant_tree,
    unbiasedness_mc,
)
from realized_cumulants.recursion import recursion_check
from realized_cumulants.suites import bell_identity_suite, conversion_suite

from conftest import ACCEPTANCE_LINES

E = math.e
SEED = 20240607


def record(criterion, ok, detail):
    ACCEPTANCE_LINES.append(f"{'PASS' if ok else 'FAIL'} [{criterion}] {detail}")
    assert ok, detail


@pytest.fixture(scope="module")
def tree3():
    return TreeModel.binomial_walk(3)


def test_c1_bell_identities():
    start = time.perf_counter()
    reports = bell_identity_suite(seed=SEED, n_inputs=100, max_order=8)
    elapsed = time.perf_counter() - start
    worst = max(r.estimate for r in reports[:4])
    ok = all(r.passed for r in reports) and reports[4].details["got"] == [1, 2, 5, 15, 52, 203]
    ok = ok and all(r.abs_tol <= 1e-10 for r in reports) and elapsed < 5
    record("C1 bell identities", ok, f"worst rel err {worst:.2e} <= 1e-10, Bell numbers ok, {elapsed:.2f}s < 5s")


def test_c2_moment_cumulant_round_trip():
    reports = conversion_suite(seed=SEED, n_inputs=100, max_order=8)
    worst = max(r.estimate for r in reports)
    ok = all(r.passed for r in reports) and all(r.abs_tol <= 1e-10 for r in reports)
    record("C2 moment<->cumulant", ok, f"worst rel err {worst:.2e} <= 1e-10 (round trips, Poisson(1), N(0,1))")


def test_c3_exact_tree_suite(tree3):
    start = time.perf_counter()
    ct = tree_backward_induction(tree3, 4)
    incr = float(np.max(increment_bell_residuals(tree3, ct)))
    agg = 0.0
    for n in (1, 2, 3):
        ctn = tree_backward_induction(tree3, n + 1)
        for s, t, u in aggregation_triples(3):
            agg = max(agg, float(np.max(np.abs(aggregation_residual_tree(tree3, n, s, t, u, ctn)))))
    expected = {1: 3.0, 2: 0.0, 3: -6.0}
    got = {n: expected_realized_cumulant_tree(tree3, n) for n in expected}
    exp_err = max(abs(got[n] - expected[n]) for n in expected)
    elapsed = time.perf_counter() - start
    ok = incr <= 1e-12 and agg <= 1e-12 and exp_err <= 1e-12 and elapsed < 1
    record("C3 exact tree", ok,
           f"E[B_k(increment)] {incr:.1e}, aggregation {agg:.1e}, E[realized] orders 2,3,4 = "
           f"{got[1]:g},{got[2]:g},{got[3]:g} (err {exp_err:.1e}), {elapsed:.2f}s < 1s")


def test_c4_poisson_unbiasedness():
    start = time.perf_counter()
    model = PoissonMartingale(1.0, 1.0)
    skew = unbiasedness_mc(model, 2, 100_000, 16, seed=SEED, z=4.0)
    kurt = unbiasedness_mc(model, 3, 100_000, 16, seed=SEED, z=4.0)
    elapsed = time.perf_counter() - start
    ok = skew.passed and kurt.passed and skew.target == 1.0 and kurt.target == 1.0 and elapsed < 60
    record("C4 Poisson unbiased", ok,
           f"skew {skew.estimate:.4f}+-{skew.standard_error:.4f}, kurt {kurt.estimate:.4f}+-"
           f"{kurt.standard_error:.4f} vs 1 within 4 SE, {elapsed:.1f}s < 60s")


def test_c5_expmart_unbiasedness():
    start = time.perf_counter()
    model = ExponentialMartingale(1.0)
    var = unbiasedness_mc(model, 1, 100_000, 64, seed=SEED, z=4.0)
    skew = unbiasedness_mc(model, 2, 100_000, 64, seed=SEED, z=4.0)
    elapsed = time.perf_counter() - start
    targets_ok = abs(var.target - (E - 1)) < 1e-12 and abs(skew.target - (E**3 - 3 * E + 2)) < 1e-10
    ok = var.passed and skew.passed and targets_ok and elapsed < 120
    record("C5 expmart unbiased", ok,
           f"RV {var.estimate:.4f}+-{var.standard_error:.4f} vs {var.target:.5f}, skew {skew.estimate:.3f}+-"
           f"{skew.standard_error:.3f} vs {skew.target:.3f}, {elapsed:.1f}s < 120s")


def test_c6_recursion_formula():
    start = time.perf_counter()
    cases = [
        ("brownian n=1", BrownianMartingale(1.0), 1, 1.0),
        ("expmart n=1", ExponentialMartingale(1.0), 1, E - 1),
        ("expmart n=2", ExponentialMartingale(1.0), 2, E**3 - 3 * E + 2),
        ("poisson n=2", PoissonMartingale(1.0, 1.0), 2, 1.0),
    ]
    parts, ok = [], True
    for label, model, n, target in cases:
        r = recursion_check(model, n, 10_000, 512, seed=SEED, z=4.0)
        ok = ok and r.passed and abs(r.target - target) < 1e-10
        parts.append(f"{label}: {r.estimate:.4f} vs {target:.4f} (gate {r.gate:.3g})")
    poisson = recursion_check(PoissonMartingale(1.0, 1.0), 2, 10_000, 512, seed=SEED)
    ok = ok and poisson.details["jump_subtotal"] > 10 * poisson.details["bracket_subtotal"]
    elapsed = time.perf_counter() - start
    ok = ok and elapsed < 180
    record("C6 recursion", ok, "; ".join(parts) + f"; {elapsed:.1f}s < 180s")


def test_c7_refinement_invariance(tree3):
    ct = tree_backward_induction(tree3, 4)
    worst = 0.0
    for n in (1, 2, 3):
        vals = [expected_realized_cumulant_tree(tree3, n, partition=p, ct=ct)
                for p in ([0, 3], [0, 1, 3], [0, 1, 2, 3])]
        worst = max(worst, max(vals) - min(vals))
    record("C7 refinement invariance", worst <= 1e-12, f"max spread over partitions {worst:.1e} <= 1e-12")


def test_c8_determinism_across_workers(tmp_path):
    outputs = []
    for workers in (1, 3):
        out = tmp_path / f"w{workers}.json"
        code = main(["verify", "unbiased", "--model", "poisson", "--order", "2", "--paths", "20000",
                     "--grid", "16", "--seed", "42", "--workers", str(workers), "--out", str(out)])
        assert code == 0
        outputs.append(out.read_bytes())
    record("C8 determinism", outputs[0] == outputs[1],
           f"verify unbiased JSON byte-identical for 1 and 3 workers ({len(outputs[0])} bytes)")
