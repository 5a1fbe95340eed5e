"""Acceptance suite: ten end-to-end checks of the package's central claims.

Each test prints a single ``ACCEPTANCE k: PASS/FAIL`` line (visible even under
captured output) and then asserts. Two criteria are expected to fail and do so
honestly, with the measured evidence in the printed line:

* Criterion 4 mandates the sampled decision at accuracy eps = 1e-3 for
  d in {3..6}. The sample-set size grows like n / eps^(d-1), which is beyond
  any feasible budget there (about 4e12 points already at d = 3); the
  implementation refuses to build it. The guarantee itself is demonstrated at
  coarser accuracy where the construction is feasible.
* Criterion 7 demands that the candidate-set size stays within 2x of a fitted
  C * (n/eps^3) * log(1/eps) curve across (n, eps) in {10,100} x {0.5, 0.25,
  0.125}. The model has no constant term for the cone count, which saturates
  in n, so the measured ratios spread far beyond any single constant's 2x
  band. The table of ratios is printed.
"""
import math
import time

import numpy as np
import pytest

import betaplurality as bp
from betaplurality.approx_best import (
    approx_best_point,
    candidate_count,
    candidate_set,
    exponential_grid,
)
from betaplurality.oracles import oracle_best_point, oracle_decide

SQRT3 = math.sqrt(3.0)


def _report(capsys, num: int, ok: bool, detail: str) -> None:
    with capsys.disabled():
        print(f"\nACCEPTANCE {num}: {'PASS' if ok else 'FAIL'} - {detail}")
    assert ok, f"criterion {num}: {detail}"


def _voters(rng, n, d=2):
    return bp.VoterSet.from_array(rng.uniform(0.0, 1.0, (n, d)))


def test_acceptance_01_equilateral_golden(equilateral, eq_center, capsys):
    t0 = time.perf_counter()
    br = bp.exact_beta_of_point_2d(equilateral, eq_center, tol=1e-7)
    dt = time.perf_counter() - t0
    err = abs(br.mid - SQRT3 / 2)
    ok = err <= 1e-6 and dt < 1.0
    _report(capsys, 1, ok, f"center beta within {err:.2e} of sqrt(3)/2 in {dt * 1e3:.1f} ms")


def test_acceptance_02_equilateral_upper_bound(equilateral, eq_center, capsys):
    rng = np.random.default_rng(2022)
    beta = SQRT3 / 2 + 1e-4
    violations = 0
    for _ in range(1000):
        p = bp.Point((float(rng.uniform(-0.5, 2.5)), float(rng.uniform(-0.5, 2.2))))
        if p.coords == eq_center.coords:
            continue
        if bp.exact_decide_2d(equilateral, p, beta).is_yes:
            violations += 1
    _report(
        capsys, 2, violations == 0,
        f"{violations} of 1000 off-center points exceeded sqrt(3)/2 + 1e-4",
    )


def test_acceptance_03_planar_construction(capsys):
    rng = np.random.default_rng(3033)
    beta = SQRT3 / 2 - 1e-6
    failures = 0
    for t in range(200):
        n = (11, 101, 1001)[t % 3]
        V = _voters(rng, n)
        if not bp.exact_decide_2d(V, bp.planar_point(V), beta).is_yes:
            failures += 1
    times = {}
    for n in (1_000, 10_000, 100_000):
        V = _voters(rng, n)
        best = math.inf
        for _ in range(3):
            t0 = time.perf_counter()
            bp.planar_point(V)
            best = min(best, time.perf_counter() - t0)
        times[n] = best
    ns = np.log(np.array(sorted(times)))
    ts = np.log(np.array([times[n] for n in sorted(times)]))
    slope = float(np.polyfit(ns, ts, 1)[0])
    ok = failures == 0 and times[100_000] < 10.0 and slope <= 1.2
    _report(
        capsys, 3, ok,
        f"{failures}/200 construction failures; t(1e5) = {times[100_000]:.2f} s; "
        f"log-log slope {slope:.2f}",
    )


def test_acceptance_04_median_guarantee(capsys):
    rng = np.random.default_rng(4044)
    # d = 2: the exact decision at the mandated level
    fail2 = 0
    for _ in range(40):
        V = _voters(rng, int(rng.integers(1, 200)))
        beta = (1.0 / math.sqrt(2.0)) * (1.0 - 1e-3)
        if not bp.exact_decide_2d(V, bp.median_point(V), beta).is_yes:
            fail2 += 1

    # d >= 3 at the mandated accuracy eps = 1e-3: infeasible by construction
    blocked = {}
    for d in (3, 4, 5, 6):
        V = _voters(rng, 11, d)
        beta = (1.0 / math.sqrt(d)) * (1.0 - 1e-3)
        try:
            bp.approx_decide(V, bp.median_point(V), beta, 1e-3)
            blocked[d] = None
        except ValueError as e:
            blocked[d] = str(e)

    # the guarantee itself, shown where the sample sets are buildable
    coarse_fail = 0
    for _ in range(10):
        V = _voters(rng, int(rng.integers(3, 42)), 3)
        beta = (1.0 / math.sqrt(3.0)) * (1.0 - 1e-3)
        if not bp.approx_decide(V, bp.median_point(V), beta, 0.2).is_yes:
            coarse_fail += 1
    V = _voters(rng, 9, 4)
    beta4 = (1.0 / 2.0) * (1.0 - 1e-3)
    if not bp.approx_decide(V, bp.median_point(V), beta4, 0.25).is_yes:
        coarse_fail += 1

    # linear-runtime doubling check
    times = []
    for n in (1_000_000, 2_000_000):
        V = _voters(rng, n, 3)
        best = math.inf
        for _ in range(5):
            t0 = time.perf_counter()
            bp.median_point(V)
            best = min(best, time.perf_counter() - t0)
        times.append(best)
    ratio = times[1] / times[0]

    infeasible = sorted(d for d, msg in blocked.items() if msg is not None)
    ok = fail2 == 0 and coarse_fail == 0 and not infeasible and ratio <= 2.4
    _report(
        capsys, 4, ok,
        f"d=2 exact: {fail2}/40 failures; doubling ratio {ratio:.2f} (limit 2.4); "
        f"coarse-accuracy demonstrations (d=3 eps=0.2, d=4 eps=0.25): "
        f"{coarse_fail} failures; mandated eps=1e-3 decision infeasible for "
        f"d in {infeasible}: the sample set needs ~n/eps^(d-1) points "
        f"(~4e12 at d=3, n=11) and is refused by the size guard. The "
        f"guarantee is accuracy-independent and holds wherever the decision "
        f"is buildable.",
    )


def test_acceptance_05_approx_best_vs_oracle(capsys):
    rng = np.random.default_rng(5055)
    eps = 0.2
    violations = 0
    worst = math.inf
    for _ in range(50):
        V = _voters(rng, int(rng.integers(3, 16)))
        res = approx_best_point(V, eps)
        oracle = oracle_best_point(V)
        achieved = bp.exact_beta_of_point_2d(V, res.point, tol=1e-9).lo
        margin = achieved - (1.0 - eps) * oracle.beta_hat
        worst = min(worst, margin)
        if margin < -1e-6:
            violations += 1
    _report(
        capsys, 5, violations == 0,
        f"{violations}/50 instances below (1 - 0.2) * oracle optimum; "
        f"worst margin {worst:+.4f}",
    )


def test_acceptance_06_decision_sandwich(capsys):
    rng = np.random.default_rng(6066)
    yes_viol = no_viol = 0
    for _ in range(1000):
        V = _voters(rng, int(rng.integers(3, 13)))
        p = bp.Point(tuple(rng.uniform(0.0, 1.0, 2)))
        beta = float(rng.uniform(1.0 / math.sqrt(2.0), 1.0))
        eps = float(rng.choice([0.05, 0.2, 0.5]))
        got = bp.approx_decide(V, p, beta, eps)
        if bp.exact_decide_2d(V, p, beta).is_yes and not got.is_yes:
            yes_viol += 1
        if not bp.exact_decide_2d(V, p, (1.0 - eps) * beta).is_yes and got.is_yes:
            no_viol += 1
    _report(
        capsys, 6, yes_viol == 0 and no_viol == 0,
        f"1000 trials: {yes_viol} missed sure-yes, {no_viol} missed sure-no",
    )


def test_acceptance_07_candidate_size_regression(capsys):
    rng = np.random.default_rng(7077)
    rows = []
    for n in (10, 100):
        V = _voters(rng, n)
        for eps in (0.5, 0.25, 0.125):
            size = candidate_count(V, eps)
            model = (n / eps**3) * math.log(1.0 / eps)
            rows.append((n, eps, size, size / model))
    ratios = np.array([r[3] for r in rows])
    C = float(np.exp(np.mean(np.log(ratios))))  # least-squares fit in log space
    rel = ratios / C
    spread = float(rel.max() / rel.min())
    ok = bool(rel.max() <= 2.0 and rel.min() >= 0.5)
    table = "; ".join(f"n={n} eps={e}: {s} ({q / C:.2f}x fit)" for n, e, s, q in rows)
    _report(
        capsys, 7, ok,
        f"sizes vs C*(n/eps^3)*log(1/eps) with C = {C:.1f}: {table}. "
        f"Total spread {spread:.1f}x exceeds the two-sided 2x band: the model "
        f"omits the cone count's saturation in n, so small-n/small-eps cells "
        f"sit far below the fit while large-n cells sit above it. No single "
        f"constant can satisfy the criterion as stated.",
    )


def test_acceptance_08_grid_covering_bounds(capsys):
    rng = np.random.default_rng(8088)
    eps = 0.25
    star_viol = dist_viol = star_checked = 0

    for seed in range(3):
        V = _voters(np.random.default_rng(800 + seed), 5)
        P = candidate_set(V, eps).coords
        grids = [exponential_grid(V, i, eps) for i in range(V.n)]

        probes = []
        # random probes plus the three constructed regimes: near-coincident
        # with a voter, mid-shell, and far outside every shell
        for _ in range(334):
            probes.append(rng.uniform(-0.5, 1.5, 2))
        for i in range(V.n):
            g = grids[i]
            dmin = min(g.d_C) if g.d_C else 1.0
            vi = V.array[i]
            u = rng.normal(size=2)
            u /= np.linalg.norm(u)
            probes.append(vi + 0.25 * eps * dmin * u)          # inside every shell
            probes.append(vi + 2.0 * dmin * u)                 # mid-shell
            probes.append(vi + 10.0 * max(g.d_C) / eps * u)    # beyond every shell
        while len(probes) < 1000:
            probes.append(rng.uniform(-2.0, 3.0, 2))
        probes = np.asarray(probes)

        for q in probes:
            dists = np.linalg.norm(V.array - q, axis=1)
            i = int(np.argmin(dists))
            g = grids[i]
            r = dists[i]
            if r > 0.0 and any(
                eps * dc <= r <= dc / eps for dc in g.d_C
            ):
                star_checked += 1
                gap = float(np.linalg.norm(g.vertices - q, axis=1).min())
                if gap > eps * r * (1.0 + 1e-9):
                    star_viol += 1
            # the full voter-distance bound, over the whole candidate set
            with np.errstate(divide="ignore", invalid="ignore"):
                ratio = np.linalg.norm(P[:, None, :] - V.array[None, :, :], axis=2) / dists[None, :]
            ratio = np.where(np.isnan(ratio), 0.0, ratio)
            best = float(ratio.max(axis=1).min())
            if best > (1.0 + 2.0 * eps) * (1.0 + 1e-9):
                dist_viol += 1

    ok = star_viol == 0 and dist_viol == 0 and star_checked >= 500
    _report(
        capsys, 8, ok,
        f"shell-covering bound: {star_viol} violations over {star_checked} "
        f"in-shell probes; (1+2*eps) voter-distance bound: {dist_viol} "
        f"violations over 3000 probes incl. constructed near/mid/far cases",
    )


def test_acceptance_09_monotonicity(capsys):
    rng = np.random.default_rng(9099)
    violations = 0
    for _ in range(1000):
        V = _voters(rng, int(rng.integers(3, 15)))
        p = bp.Point(tuple(rng.uniform(0.0, 1.0, 2)))
        b1, b2 = np.sort(rng.uniform(0.3, 1.0, 2))
        if bp.exact_decide_2d(V, p, float(b2)).is_yes and not bp.exact_decide_2d(
            V, p, float(b1)
        ).is_yes:
            violations += 1
    _report(capsys, 9, violations == 0, f"{violations}/1000 monotonicity violations")


def test_acceptance_10_oracle_concordance(capsys):
    rng = np.random.default_rng(1010)
    disagreements = checked = 0
    while checked < 500:
        V = _voters(rng, int(rng.integers(3, 10)))
        p = bp.Point(tuple(rng.uniform(0.2, 0.8, 2)))
        beta = float(rng.uniform(0.3, 1.0))
        mid = bp.exact_beta_of_point_2d(V, p, tol=1e-6).mid
        if abs(beta - mid) <= 1e-3:
            continue  # inside the threshold band: resolution-dependent
        checked += 1
        exact = bp.exact_decide_2d(V, p, beta).is_yes
        if oracle_decide(V, p, beta, grid_res=400).is_yes != exact:
            disagreements += 1
    _report(
        capsys, 10, disagreements == 0,
        f"{disagreements}/500 disagreements outside the 1e-3 band",
    )
