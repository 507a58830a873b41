"""Batch verification suites: one named check per theorem or module
invariant, runnable at smoke or full scale from the CLI.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass
from typing import Callable

from .certificates import ENLARGEMENT_FACTOR, certify, common_point
from .crossing import (
    convex_diagonal_matching,
    find_pairwise_crossing,
    halfplane_balance,
    is_pairwise_crossing,
    verify_globally_maximum,
)
from .generators import (
    LOWER_BOUNDS,
    MinerConfig,
    gen_circle_alternating,
    gen_convex,
    gen_intersecting_disks,
    gen_random,
    gen_tangent_disks,
    mine_low_ratio,
)
from .geometry import Point, distance
from .matching import (
    cycle_decomposition,
    enumerate_matchings,
    is_k_local_max,
    is_k_local_min,
    k_local_search,
    optimal_matching,
    weight,
)

__all__ = ["SuiteScale", "SMOKE", "FULL", "run_suite", "CHECKS"]


@dataclass(frozen=True)
class SuiteScale:
    name: str
    oracle_instances: int
    klocal_instances: int
    local2_instances: int
    local3_instances: int
    disk_families: int
    lemma_grid: int
    lemma_trials: int
    crossing_instances: int
    miner_budget: int
    miner_restarts: int


SMOKE = SuiteScale(
    name="smoke",
    oracle_instances=40,
    klocal_instances=8,
    local2_instances=12,
    local3_instances=12,
    disk_families=60,
    lemma_grid=20_000,
    lemma_trials=2_000,
    crossing_instances=50,
    miner_budget=200,
    miner_restarts=2,
)

FULL = SuiteScale(
    name="full",
    oracle_instances=500,
    klocal_instances=200,
    local2_instances=300,
    local3_instances=300,
    disk_families=1000,
    lemma_grid=100_000,
    lemma_trials=10_000,
    crossing_instances=500,
    miner_budget=3000,
    miner_restarts=4,
)


def _sizes(count: int, lo: int = 4, hi: int = 10):
    span = [n for n in range(lo, hi + 1) if n % 2 == 0]
    for i in range(count):
        yield span[i % len(span)]


def check_oracle_equivalence(scale: SuiteScale) -> tuple[bool, str]:
    worst = 0.0
    for i, n in enumerate(_sizes(scale.oracle_instances)):
        ps = gen_random(n, seed=1000 + i)
        w_dp = weight(optimal_matching(ps, "maximize"), ps)
        w_enum = max(weight(m, ps) for m in enumerate_matchings(ps))
        worst = max(worst, abs(w_dp - w_enum) / max(1.0, w_enum))
    ok = worst <= 1e-9
    return ok, f"{scale.oracle_instances} instances, max relative gap {worst:.3e}"


def check_k_local_theorem(scale: SuiteScale) -> tuple[bool, str]:
    worst_ratio_margin = math.inf
    worst_cycle_margin = math.inf
    checked = 0
    for k in (2, 3, 4):
        for i, n in enumerate(_sizes(scale.klocal_instances, lo=6, hi=12)):
            ps = gen_random(n, seed=2000 + 97 * k + i)
            m = k_local_search(ps, k)
            opt = optimal_matching(ps, "maximize")
            ratio = weight(m, ps) / weight(opt, ps)
            worst_ratio_margin = min(worst_ratio_margin, ratio - (k - 1) / k)
            for cycle in cycle_decomposition(m, opt).cycles:
                w_m = sum(ps.dist[i2][j2] for i2, j2 in cycle.first_edges())
                w_star = sum(ps.dist[i2][j2] for i2, j2 in cycle.second_edges())
                worst_cycle_margin = min(worst_cycle_margin, k * w_m - (k - 1) * w_star)
            checked += 1
    ok = worst_ratio_margin >= -1e-9 and worst_cycle_margin >= -1e-9
    return ok, (
        f"{checked} searches, min ratio margin {worst_ratio_margin:.3e}, "
        f"min cycle margin {worst_cycle_margin:.3e}"
    )


def _certify_many(scale_count: int, k: int, kinds, seed0: int):
    bound = LOWER_BOUNDS[k]
    worst_ratio = math.inf
    worst_edge_margin = math.inf
    for i, n in enumerate(_sizes(scale_count, lo=6, hi=12)):
        ps = gen_random(n, seed=seed0 + i)
        m = k_local_search(ps, k)
        ratio = weight(m, ps) / weight(optimal_matching(ps, "maximize"), ps)
        worst_ratio = min(worst_ratio, ratio)
        for kind in kinds:
            cert = certify(ps, m, kind)
            for _, lhs, rhs in cert.per_edge_checks:
                worst_edge_margin = min(worst_edge_margin, rhs + 1e-7 - lhs)
    ok = worst_ratio >= bound - 1e-9 and worst_edge_margin >= 0.0
    return ok, worst_ratio, worst_edge_margin


def check_local2(scale: SuiteScale) -> tuple[bool, str]:
    ok, worst_ratio, worst_edge = _certify_many(
        scale.local2_instances, 2, ("local2",), 3000
    )
    return ok, (
        f"{scale.local2_instances} instances, min ratio {worst_ratio:.6f} "
        f"(bound {LOWER_BOUNDS[2]:.6f}), min per-edge margin {worst_edge:.3e}"
    )


def check_local3(scale: SuiteScale) -> tuple[bool, str]:
    ok, worst_ratio, worst_edge = _certify_many(
        scale.local3_instances, 3, ("local3_sqrt2", "local3_fingerhut"), 4000
    )
    return ok, (
        f"{scale.local3_instances} instances, min ratio {worst_ratio:.6f} "
        f"(bound {LOWER_BOUNDS[3]:.6f}), min per-edge margin {worst_edge:.3e}"
    )


def check_stretch_lemma(scale: SuiteScale) -> tuple[bool, str]:
    worst_slack = -math.inf
    for i in range(scale.disk_families):
        df = gen_intersecting_disks(3 + i % 8, seed=5000 + i)
        witness = common_point(df.rescaled(ENLARGEMENT_FACTOR))
        worst_slack = max(worst_slack, witness.slack)
    tangent = gen_tangent_disks()
    tight = common_point(tangent.rescaled(ENLARGEMENT_FACTOR))
    shy = common_point(tangent.rescaled(ENLARGEMENT_FACTOR - 1e-3))
    target = Point(1.0, 1.0 / math.sqrt(3.0))
    ok = (
        worst_slack <= 1e-7
        and tight.slack <= 1e-7
        and distance(tight.point, target) <= 1e-5
        and shy.slack > 1e-4
    )
    return ok, (
        f"{scale.disk_families} families, max enlarged slack {worst_slack:.3e}; "
        f"tangent slack {tight.slack:.3e}, under-scaled slack {shy.slack:.3e}"
    )


def check_extremal_lemmas(scale: SuiteScale) -> tuple[bool, str]:
    import numpy as np

    rng = np.random.default_rng(77)
    worst = 0.0
    for r in (0.5, 1.0, 2.0 / math.sqrt(3.0), 2.0, 4.0):
        xs = np.linspace(0.0, r, scale.lemma_grid // 5)
        s = r * r + 1.0
        vals = np.sqrt(s + 2.0 * xs) + np.sqrt(s - 2.0 * xs)
        worst = max(worst, float(vals.max()) - 2.0 * math.sqrt(s))
    alphas = np.linspace(0.0, math.pi, scale.lemma_grid)
    dvals = 2.0 * np.sin((4.0 * math.pi - 3.0 * alphas) / 6.0) / math.sqrt(3.0)
    worst = max(worst, float(dvals.max()) - 2.0 / math.sqrt(3.0))
    stmt_worst = 0.0
    for _ in range(scale.lemma_trials):
        ax, ay, bx, by = rng.uniform(-1.0, 1.0, size=4)
        if math.hypot(ax - bx, ay - by) < 1e-3:
            continue
        a = Point(float(ax), float(ay))
        b = Point(float(bx), float(by))
        r = float(rng.uniform(0.05, 3.0))
        ab = distance(a, b)
        theta = float(rng.uniform(0.0, 2.0 * math.pi))
        rho = float(rng.uniform(0.0, 1.0)) * r * ab / 2.0
        p = Point(
            (a.x + b.x) / 2.0 + rho * math.cos(theta),
            (a.y + b.y) / 2.0 + rho * math.sin(theta),
        )
        stmt_worst = max(
            stmt_worst, distance(p, a) + distance(p, b) - math.sqrt(r * r + 1.0) * ab
        )
    ok = worst <= 1e-9 and stmt_worst <= 1e-9
    return ok, (
        f"grid max excess {worst:.3e}, statement max excess {stmt_worst:.3e} "
        f"over {scale.lemma_trials} trials"
    )


def check_crossing(scale: SuiteScale) -> tuple[bool, str]:
    counts = {0: 0, 1: 0}
    bad = 0
    for i, n in enumerate(_sizes(scale.crossing_instances)):
        ps = gen_random(n, seed=6000 + i)
        found, count = find_pairwise_crossing(ps)
        if count > 1:
            bad += 1
            continue
        counts[count] += 1
        if found is not None:
            if not halfplane_balance(ps, found):
                bad += 1
            if not is_k_local_max(ps, found, 2).is_local_max:
                bad += 1
            if not verify_globally_maximum(ps, found):
                bad += 1
    convex_ok = 0
    n_convex = max(10, scale.crossing_instances // 10)
    for i in range(n_convex):
        ps = gen_convex(4 + 2 * (i % 4), seed=6500 + i)
        m = convex_diagonal_matching(ps)
        report = is_pairwise_crossing(ps, m)
        _, count = find_pairwise_crossing(ps)
        if report.is_pairwise_crossing and count == 1:
            convex_ok += 1
    ok = bad == 0 and convex_ok == n_convex
    return ok, (
        f"{scale.crossing_instances} random sets: {counts[1]} with a crossing matching, "
        f"{counts[0]} without, {bad} violations; convex {convex_ok}/{n_convex}"
    )


def check_circle_construction(scale: SuiteScale) -> tuple[bool, str]:
    ps, red = gen_circle_alternating(20, 0.01)
    lengths = [
        distance(ps[i], ps[(i + 1) % len(ps)]) for i in range(len(ps))
    ]
    alternation = max(
        abs(lengths[i] - (1.0 if i % 2 == 0 else 0.01)) for i in range(len(ps))
    )
    red_weight = weight(red, ps)
    eps_weight = sum(
        distance(ps[2 * i + 1], ps[(2 * i + 2) % len(ps)]) for i in range(20)
    )
    ratio = red_weight / eps_weight
    # The 2-local-minimum property needs n large enough for the chord gap
    # to close; n = 24 at eps = 0.01 is safely above the threshold.
    ps24, red24 = gen_circle_alternating(24, 0.01)
    local_min = is_k_local_min(ps24, red24, 2).is_local_max
    ok = alternation <= 1e-9 and ratio >= 10.0 and local_min
    return ok, (
        f"alternation error {alternation:.3e}, min-side ratio {ratio:.1f}, "
        f"2-local-min at n=24: {local_min}"
    )


def check_miner(scale: SuiteScale) -> tuple[bool, str]:
    cfg = MinerConfig(
        k=2,
        num_points=6,
        budget_iterations=scale.miner_budget,
        restarts=scale.miner_restarts,
        seed=11,
    )
    mined = mine_low_ratio(cfg)
    again = mine_low_ratio(cfg)
    deterministic = (
        mined.ratio == again.ratio
        and mined.point_set.points == again.point_set.points
        and mined.local_matching.pairs == again.local_matching.pairs
    )
    verified = is_k_local_max(mined.point_set, mined.local_matching, 2).is_local_max
    bound_ok = mined.ratio >= LOWER_BOUNDS[2] - 1e-9
    ok = deterministic and verified and bound_ok
    return ok, (
        f"best ratio {mined.ratio:.6f} (soft target < 0.94), deterministic: "
        f"{deterministic}, locality verified: {verified}"
    )


CHECKS: list[tuple[str, Callable[[SuiteScale], tuple[bool, str]]]] = [
    ("oracle_equivalence", check_oracle_equivalence),
    ("k_local_theorem", check_k_local_theorem),
    ("local2_bound_and_certificates", check_local2),
    ("local3_bounds_and_certificates", check_local3),
    ("disk_enlargement", check_stretch_lemma),
    ("extremal_lemmas", check_extremal_lemmas),
    ("pairwise_crossing", check_crossing),
    ("circle_construction", check_circle_construction),
    ("miner", check_miner),
]


def run_suite(scale: SuiteScale, out=print) -> tuple[list[dict], int]:
    results = []
    failures = 0
    for name, fn in CHECKS:
        start = time.perf_counter()
        try:
            ok, msg = fn(scale)
        except Exception as exc:  # a crash is a failure, not an abort
            ok, msg = False, f"error: {exc}"
        elapsed = time.perf_counter() - start
        if not ok:
            failures += 1
        out(f"{'PASS' if ok else 'FAIL'} {name}: {msg} [{elapsed:.1f}s]")
        results.append({"name": name, "passed": ok, "message": msg, "seconds": elapsed})
    return results, failures
