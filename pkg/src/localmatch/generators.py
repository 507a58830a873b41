"""Instance generators for the constructions used throughout the library,
plus an adversarial miner that hill-climbs point coordinates toward
low-ratio k-local maximum matchings.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .certificates import DiskFamily
from .geometry import DEFAULT_TOL, Disk, Point, Tolerance, orientation
from .matching import (
    DEFAULT_ORACLE_CAP,
    Matching,
    PointSet,
    k_local_search,
    optimal_matching,
    weight,
)

__all__ = [
    "gen_random",
    "gen_convex",
    "gen_circle_alternating",
    "gen_tangent_disks",
    "gen_intersecting_disks",
    "MinerConfig",
    "MinedInstance",
    "mine_low_ratio",
    "LOWER_BOUNDS",
]

# Proved locality ratio lower bounds, by k.
LOWER_BOUNDS = {2: math.sqrt(3.0 / 7.0), 3: math.sqrt(3.0) / 2.0}


def _in_general_position(points: list[Point]) -> bool:
    n = len(points)
    for a in range(n):
        for b in range(a + 1, n):
            for c in range(b + 1, n):
                if orientation(points[a], points[b], points[c]) == 0:
                    return False
    return True


def _distinct(points: list[Point], eps: float) -> bool:
    n = len(points)
    for i in range(n):
        for j in range(i + 1, n):
            if math.hypot(points[i].x - points[j].x, points[i].y - points[j].y) <= eps:
                return False
    return True


def _random_points(rng: np.random.Generator, n: int, bbox: float, tol: Tolerance) -> PointSet:
    while True:
        raw = rng.uniform(0.0, bbox, size=(n, 2))
        points = [Point(float(x), float(y)) for x, y in raw]
        if _distinct(points, tol.eps_geom) and _in_general_position(points):
            return PointSet(points, tol)


def gen_random(n: int, seed: int, bbox: float = 1.0, tol: Tolerance = DEFAULT_TOL) -> PointSet:
    """n i.i.d. uniform points in [0, bbox]^2, resampled until pairwise
    distinct and free of collinear triples; deterministic per seed."""
    if n < 2 or n % 2:
        raise ValueError(f"n must be even and at least 2, got {n}")
    rng = np.random.default_rng(seed)
    return _random_points(rng, n, bbox, tol)


def gen_convex(n: int, seed: int, tol: Tolerance = DEFAULT_TOL) -> PointSet:
    """n points in convex position on a radially perturbed circle, sorted
    by angle; strict convexity is verified before returning."""
    if n < 4 or n % 2:
        raise ValueError(f"n must be even and at least 4, got {n}")
    rng = np.random.default_rng(seed)
    min_gap = 2.0 * math.pi / (4.0 * n)
    while True:
        angles = np.sort(rng.uniform(0.0, 2.0 * math.pi, size=n))
        gaps = np.diff(angles, append=angles[0] + 2.0 * math.pi)
        if gaps.min() < min_gap:
            continue
        radii = rng.uniform(0.95, 1.05, size=n)
        points = [
            Point(float(r * math.cos(a)), float(r * math.sin(a)))
            for a, r in zip(angles, radii)
        ]
        if not _distinct(points, tol.eps_geom):
            continue
        convex = all(
            orientation(points[i], points[(i + 1) % n], points[(i + 2) % n]) > 0
            for i in range(n)
        )
        if convex:
            return PointSet(points, tol)


def gen_circle_alternating(n: int, eps: float) -> tuple[PointSet, Matching]:
    """2n points on a circle with consecutive chord lengths alternating
    between 1 and eps; the returned matching pairs up the unit chords.

    The circle radius solves n * (theta_1 + theta_eps) = 2*pi by bisection,
    where chord(theta) = 2R sin(theta/2).
    """
    if n < 3:
        raise ValueError(f"need at least 3 pairs, got {n}")
    if not (0.0 < eps < 0.1):
        raise ValueError(f"eps must lie in (0, 0.1), got {eps}")

    def angle_excess(R: float) -> float:
        t1 = 2.0 * math.asin(1.0 / (2.0 * R))
        t2 = 2.0 * math.asin(eps / (2.0 * R))
        return n * (t1 + t2) - 2.0 * math.pi

    lo = 0.5 + 1e-12
    if angle_excess(lo) <= 0.0:
        raise ValueError(f"no circle fits n={n}, eps={eps}")
    hi = 1.0
    while angle_excess(hi) > 0.0:
        hi *= 2.0
        if hi > 1e9:
            raise ValueError(f"no circle fits n={n}, eps={eps}")
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if angle_excess(mid) > 0.0:
            lo = mid
        else:
            hi = mid
    R = 0.5 * (lo + hi)
    t1 = 2.0 * math.asin(1.0 / (2.0 * R))
    t2 = 2.0 * math.asin(eps / (2.0 * R))
    points = []
    phi = 0.0
    for _ in range(n):
        points.append(Point(R * math.cos(phi), R * math.sin(phi)))
        phi += t1
        points.append(Point(R * math.cos(phi), R * math.sin(phi)))
        phi += t2
    ps = PointSet(points)
    matching = Matching((2 * i, 2 * i + 1) for i in range(n))
    return ps, matching


def gen_tangent_disks() -> DiskFamily:
    """Three pairwise tangent unit disks: the tight instance for the
    2/sqrt(3) disk enlargement factor."""
    return DiskFamily(
        (
            Disk(Point(0.0, 0.0), 1.0),
            Disk(Point(2.0, 0.0), 1.0),
            Disk(Point(1.0, math.sqrt(3.0)), 1.0),
        ),
        scale=1.0,
    )


def gen_intersecting_disks(count: int, seed: int, tangent_pair: bool | None = None) -> DiskFamily:
    """Random pairwise-intersecting disk family of the given size.

    Radii are drawn at random and then rescaled so the worst pair is
    exactly tangent; unless tangent_pair is True a further random margin
    is applied, yielding families between barely and comfortably
    pairwise intersecting.
    """
    if count < 2:
        raise ValueError(f"need at least 2 disks, got {count}")
    rng = np.random.default_rng(seed)
    while True:
        centers = rng.uniform(0.0, 1.0, size=(count, 2))
        span = np.hypot(
            centers[:, None, 0] - centers[None, :, 0],
            centers[:, None, 1] - centers[None, :, 1],
        )
        if span[np.triu_indices(count, k=1)].min() > 1e-3:
            break
    base = rng.uniform(0.1, 0.6, size=count)
    need = span / np.add.outer(base, base)
    factor = float(need[np.triu_indices(count, k=1)].max())
    if tangent_pair is None:
        tangent_pair = bool(rng.uniform() < 0.25)
    margin = 1.0 if tangent_pair else float(rng.uniform(1.0, 1.3))
    radii = base * factor * margin
    disks = tuple(
        Disk(Point(float(x), float(y)), float(r)) for (x, y), r in zip(centers, radii)
    )
    return DiskFamily(disks, scale=1.0)


@dataclass(frozen=True)
class MinerConfig:
    k: int
    num_points: int
    budget_iterations: int
    restarts: int = 8
    step_scale: float = 0.08
    seed: int = 0
    bbox: float = 1.0

    def __post_init__(self) -> None:
        if self.k < 1:
            raise ValueError(f"k must be at least 1, got {self.k}")
        if self.num_points % 2 or self.num_points < 2:
            raise ValueError(f"num_points must be even >= 2, got {self.num_points}")
        if self.num_points > 2 * DEFAULT_ORACLE_CAP:
            raise ValueError(
                f"num_points {self.num_points} exceeds the oracle cap {2 * DEFAULT_ORACLE_CAP}"
            )
        if self.budget_iterations <= 0:
            raise ValueError("budget_iterations must be positive")
        if self.restarts < 1:
            raise ValueError("restarts must be at least 1")
        if self.step_scale <= 0.0:
            raise ValueError("step_scale must be positive")


@dataclass(frozen=True)
class MinedInstance:
    point_set: PointSet
    local_matching: Matching
    k: int
    ratio: float
    rng_seed: int
    iterations_used: int


def _search_ratio(
    ps: PointSet, k: int, init, tol: Tolerance
) -> tuple[Matching, float]:
    try:
        m = k_local_search(ps, k, init, tol)
    except ValueError:
        m = k_local_search(ps, k, "greedy", tol)
    w_opt = weight(optimal_matching(ps, "maximize"), ps)
    return m, weight(m, ps) / w_opt


def mine_low_ratio(
    cfg: MinerConfig, tol: Tolerance = DEFAULT_TOL, progress=None
) -> MinedInstance:
    """Hill-climb point coordinates toward low locality ratios.

    Each restart owns the stream np.random.default_rng([seed, restart]).
    One random coordinate is perturbed per step by Gaussian noise whose
    scale anneals by 0.99 per 100 accepted steps; the k-local search is
    re-run warm-started from the previous local matching and a step is
    accepted only when the ratio strictly decreases.  Returns the best
    instance over all restarts (ties broken by restart index); a spent
    budget is not an error.
    """
    best: tuple[float, int, PointSet, Matching] | None = None
    total_iterations = 0
    for restart in range(cfg.restarts):
        rng = np.random.default_rng([cfg.seed, restart])
        ps = _random_points(rng, cfg.num_points, cfg.bbox, tol)
        m, ratio = _search_ratio(ps, cfg.k, "greedy", tol)
        accepted = 0
        for _ in range(cfg.budget_iterations):
            total_iterations += 1
            coord = int(rng.integers(0, 2 * cfg.num_points))
            noise = float(rng.normal(0.0, cfg.step_scale * cfg.bbox * 0.99 ** (accepted // 100)))
            pts = list(ps.points)
            p = pts[coord // 2]
            moved = (
                Point(p.x + noise, p.y) if coord % 2 == 0 else Point(p.x, p.y + noise)
            )
            pts[coord // 2] = moved
            try:
                cand = PointSet(pts, tol)
            except ValueError:
                continue
            cand_m, cand_ratio = _search_ratio(cand, cfg.k, m, tol)
            if cand_ratio < ratio:
                ps, m, ratio = cand, cand_m, cand_ratio
                accepted += 1
                if progress is not None:
                    progress(restart, total_iterations, ratio)
        if best is None or (ratio, restart) < (best[0], best[1]):
            best = (ratio, restart, ps, m)
    assert best is not None
    ratio, _, ps, m = best
    bound = LOWER_BOUNDS.get(cfg.k, (cfg.k - 1) / cfg.k if cfg.k >= 2 else 0.0)
    if ratio < bound - 1e-9:
        raise RuntimeError(
            f"mined ratio {ratio:.12f} violates the proved lower bound {bound:.12f}"
        )
    return MinedInstance(
        point_set=ps,
        local_matching=m,
        k=cfg.k,
        ratio=ratio,
        rng_seed=cfg.seed,
        iterations_used=total_iterations,
    )
