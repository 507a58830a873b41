"""Geometric witnesses behind the locality ratio bounds.

A certificate is a point c together with the per-edge inequality chain
|ca| + |cb| <= beta * |ab|, which sandwiches any rival matching between the
star around c and beta times the certified matching.  Witness points are
found by minimizing a convex pointwise-maximum objective (disk slack or
normalized ellipse radius) with multi-start Polyak subgradient descent,
then polished and certified optimal through the active-set KKT conditions.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Literal, Optional, Sequence

from .geometry import DEFAULT_TOL, Disk, Point, Segment, Tolerance, diametral_disk, distance
from .matching import (
    DEFAULT_ORACLE_CAP,
    Matching,
    PointSet,
    is_k_local_max,
    optimal_matching,
    weight,
)

__all__ = [
    "DiskFamily",
    "CenterWitness",
    "Certificate",
    "CertificateError",
    "LocalityError",
    "WitnessError",
    "ENLARGEMENT_FACTOR",
    "CERTIFICATE_KINDS",
    "diametral_family",
    "common_point",
    "fingerhut_center",
    "star_weight",
    "certify",
]

ENLARGEMENT_FACTOR = 2.0 / math.sqrt(3.0)

CertificateKind = Literal["local2", "local3_sqrt2", "local3_fingerhut"]
CERTIFICATE_KINDS: tuple[str, ...] = ("local2", "local3_sqrt2", "local3_fingerhut")

WitnessKind = Literal["diametral", "enlarged", "fingerhut"]


class CertificateError(ValueError):
    """Certificate construction failed."""


class LocalityError(CertificateError):
    """The matching is not k-local maximum, so no certificate applies."""

    def __init__(self, k: int, violating_subset):
        self.k = k
        self.violating_subset = tuple(violating_subset)
        super().__init__(
            f"matching is not {k}-local maximum; violating subset {self.violating_subset}"
        )


class WitnessError(CertificateError):
    """No witness point within tolerance was found."""


@dataclass(frozen=True)
class DiskFamily:
    """Base disks plus a radius scale factor applied uniformly on read."""

    disks: tuple[Disk, ...]
    scale: float = 1.0

    def __post_init__(self) -> None:
        if not (math.isfinite(self.scale) and self.scale > 0.0):
            raise ValueError(f"scale must be a positive real, got {self.scale}")

    def __len__(self) -> int:
        return len(self.disks)

    def scaled_disks(self) -> tuple[Disk, ...]:
        return tuple(d.scaled(self.scale) for d in self.disks)

    def rescaled(self, scale: float) -> "DiskFamily":
        return DiskFamily(self.disks, scale)


@dataclass(frozen=True)
class CenterWitness:
    point: Point
    slack: float
    kind: WitnessKind


@dataclass(frozen=True)
class Certificate:
    kind: CertificateKind
    witness: CenterWitness
    star_weight: float
    matching_weight: float
    beta: float
    per_edge_checks: tuple[tuple[tuple[int, int], float, float], ...]
    oracle_weight: Optional[float] = None


# ---------------------------------------------------------------------------
# Convex pointwise-max solver
# ---------------------------------------------------------------------------


class _DiskSlackObjective:
    """max_i (|x - c_i| - r_i): negative iff x lies in every closed disk."""

    def __init__(self, disks: Sequence[Disk]):
        self.cx = [d.center.x for d in disks]
        self.cy = [d.center.y for d in disks]
        self.r = [d.radius for d in disks]
        self.n = len(self.r)

    def scale_hint(self) -> float:
        span = max(self.cx) - min(self.cx) + max(self.cy) - min(self.cy)
        return max(span, max(self.r), 1e-9)

    def values(self, x: float, y: float) -> list[float]:
        return [
            math.hypot(x - self.cx[i], y - self.cy[i]) - self.r[i] for i in range(self.n)
        ]

    def gradient(self, i: int, x: float, y: float) -> tuple[float, float]:
        dx = x - self.cx[i]
        dy = y - self.cy[i]
        d = math.hypot(dx, dy)
        if d <= 1e-300:
            return 0.0, 0.0
        return dx / d, dy / d

    def hessian(self, i: int, x: float, y: float) -> tuple[float, float, float]:
        dx = x - self.cx[i]
        dy = y - self.cy[i]
        d = math.hypot(dx, dy)
        if d <= 1e-300:
            return 0.0, 0.0, 0.0
        ux, uy = dx / d, dy / d
        return (1.0 - ux * ux) / d, -ux * uy / d, (1.0 - uy * uy) / d

    def piece_argmin(self, i: int, x: float, y: float) -> tuple[float, float]:
        return self.cx[i], self.cy[i]

    def starts(self) -> list[tuple[float, float]]:
        pts = list(zip(self.cx, self.cy))
        pts.append((sum(self.cx) / self.n, sum(self.cy) / self.n))
        return pts


class _EllipseRatioObjective:
    """max_i (|x - a_i| + |x - b_i|) / |a_i b_i| over the matching's edges."""

    def __init__(self, edges: Sequence[tuple[Point, Point]]):
        self.ax = [a.x for a, _ in edges]
        self.ay = [a.y for a, _ in edges]
        self.bx = [b.x for _, b in edges]
        self.by = [b.y for _, b in edges]
        self.len = [
            math.hypot(self.ax[i] - self.bx[i], self.ay[i] - self.by[i])
            for i in range(len(edges))
        ]
        self.n = len(edges)

    def scale_hint(self) -> float:
        xs = self.ax + self.bx
        ys = self.ay + self.by
        return max(max(xs) - min(xs) + max(ys) - min(ys), 1e-9)

    def values(self, x: float, y: float) -> list[float]:
        return [
            (
                math.hypot(x - self.ax[i], y - self.ay[i])
                + math.hypot(x - self.bx[i], y - self.by[i])
            )
            / self.len[i]
            for i in range(self.n)
        ]

    def _unit(self, x: float, y: float, px: float, py: float) -> tuple[float, float]:
        dx = x - px
        dy = y - py
        d = math.hypot(dx, dy)
        if d <= 1e-300:
            return 0.0, 0.0
        return dx / d, dy / d

    def gradient(self, i: int, x: float, y: float) -> tuple[float, float]:
        uax, uay = self._unit(x, y, self.ax[i], self.ay[i])
        ubx, uby = self._unit(x, y, self.bx[i], self.by[i])
        return (uax + ubx) / self.len[i], (uay + uby) / self.len[i]

    def hessian(self, i: int, x: float, y: float) -> tuple[float, float, float]:
        hxx = hxy = hyy = 0.0
        for px, py in ((self.ax[i], self.ay[i]), (self.bx[i], self.by[i])):
            dx = x - px
            dy = y - py
            d = math.hypot(dx, dy)
            if d <= 1e-300:
                continue
            ux, uy = dx / d, dy / d
            hxx += (1.0 - ux * ux) / d
            hxy += -ux * uy / d
            hyy += (1.0 - uy * uy) / d
        L = self.len[i]
        return hxx / L, hxy / L, hyy / L

    def piece_argmin(self, i: int, x: float, y: float) -> tuple[float, float]:
        # Any point of segment a_i b_i minimizes the piece; take the clamped
        # projection of (x, y) to stay close to the current iterate.
        axi, ayi, bxi, byi = self.ax[i], self.ay[i], self.bx[i], self.by[i]
        vx, vy = bxi - axi, byi - ayi
        denom = vx * vx + vy * vy
        t = ((x - axi) * vx + (y - ayi) * vy) / denom if denom > 0 else 0.0
        t = min(1.0, max(0.0, t))
        return axi + t * vx, ayi + t * vy

    def starts(self) -> list[tuple[float, float]]:
        pts = [
            ((self.ax[i] + self.bx[i]) / 2.0, (self.ay[i] + self.by[i]) / 2.0)
            for i in range(self.n)
        ]
        xs = self.ax + self.bx
        ys = self.ay + self.by
        pts.append((sum(xs) / len(xs), sum(ys) / len(ys)))
        return pts


def _solve2(a11, a12, a21, a22, b1, b2):
    det = a11 * a22 - a12 * a21
    if abs(det) <= 1e-300:
        return None
    return (b1 * a22 - b2 * a12) / det, (a11 * b2 - a21 * b1) / det


def _solve3(m, b):
    det = (
        m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
        - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
        + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
    )
    if abs(det) <= 1e-300:
        return None
    out = []
    for col in range(3):
        mc = [list(row) for row in m]
        for r in range(3):
            mc[r][col] = b[r]
        d = (
            mc[0][0] * (mc[1][1] * mc[2][2] - mc[1][2] * mc[2][1])
            - mc[0][1] * (mc[1][0] * mc[2][2] - mc[1][2] * mc[2][0])
            + mc[0][2] * (mc[1][0] * mc[2][1] - mc[1][1] * mc[2][0])
        )
        out.append(d / det)
    return out


def _polyak_descent(obj, x0, y0, eps_opt, max_iter, patience):
    """Polyak-target subgradient descent with a geometric target schedule."""
    x, y = x0, y0
    vals = obj.values(x, y)
    fbest = max(vals)
    xb, yb = x, y
    scale = obj.scale_hint()
    delta = max(10.0 * eps_opt, 0.25 * (fbest - min(vals)), 1e-3 * scale)
    fref = fbest
    stall = 0
    it = 0
    while it < max_iter:
        it += 1
        vals = obj.values(x, y)
        i = max(range(len(vals)), key=vals.__getitem__)
        f = vals[i]
        if f < fbest:
            fbest = f
            xb, yb = x, y
        if fref - fbest > 0.1 * eps_opt:
            fref = fbest
            stall = 0
        else:
            stall += 1
        if stall >= patience:
            stall = 0
            delta *= 0.25
            x, y = xb, yb
            if delta < 0.05 * eps_opt:
                break
            continue
        gx, gy = obj.gradient(i, x, y)
        gn2 = gx * gx + gy * gy
        if gn2 <= 1e-30:
            break
        step = (f - (fbest - delta)) / gn2
        x -= step * gx
        y -= step * gy
    return xb, yb, fbest, it


def _newton_equalize3(obj, idx, x, y, scale):
    """Newton iteration for f_i = f_j = f_k on three pieces."""
    i, j, k = idx
    for _ in range(50):
        vals = obj.values(x, y)
        g1 = vals[i] - vals[k]
        g2 = vals[j] - vals[k]
        gi = obj.gradient(i, x, y)
        gj = obj.gradient(j, x, y)
        gk = obj.gradient(k, x, y)
        sol = _solve2(
            gi[0] - gk[0], gi[1] - gk[1], gj[0] - gk[0], gj[1] - gk[1], -g1, -g2
        )
        if sol is None:
            return None
        dx, dy = sol
        x += dx
        y += dy
        if math.hypot(dx, dy) <= 1e-15 * scale:
            break
    return x, y


def _newton_kkt2(obj, idx, x, y, scale):
    """Newton on the two-piece KKT system: lam*grad_i + (1-lam)*grad_j = 0,
    f_i = f_j."""
    i, j = idx
    lam = 0.5
    for _ in range(50):
        vals = obj.values(x, y)
        gi = obj.gradient(i, x, y)
        gj = obj.gradient(j, x, y)
        hi = obj.hessian(i, x, y)
        hj = obj.hessian(j, x, y)
        r1 = lam * gi[0] + (1.0 - lam) * gj[0]
        r2 = lam * gi[1] + (1.0 - lam) * gj[1]
        r3 = vals[i] - vals[j]
        hxx = lam * hi[0] + (1.0 - lam) * hj[0]
        hxy = lam * hi[1] + (1.0 - lam) * hj[1]
        hyy = lam * hi[2] + (1.0 - lam) * hj[2]
        m = [
            [hxx, hxy, gi[0] - gj[0]],
            [hxy, hyy, gi[1] - gj[1]],
            [gi[0] - gj[0], gi[1] - gj[1], 0.0],
        ]
        sol = _solve3(m, [-r1, -r2, -r3])
        if sol is None:
            return None
        dx, dy, dlam = sol
        x += dx
        y += dy
        lam = min(1.5, max(-0.5, lam + dlam))
        if math.hypot(dx, dy) <= 1e-15 * scale and abs(dlam) <= 1e-12:
            break
    if not (-1e-9 <= lam <= 1.0 + 1e-9):
        return None
    return x, y


def _active_set(vals, f, scale):
    tol = max(1e-7 * scale, 1e-12)
    order = sorted(range(len(vals)), key=lambda i: -vals[i])
    return [i for i in order if f - vals[i] <= tol]


def _is_kkt_point(obj, x, y, scale) -> bool:
    """Sufficient optimality check: 0 in the convex hull of active gradients."""
    vals = obj.values(x, y)
    f = max(vals)
    active = _active_set(vals, f, scale)
    grads = [obj.gradient(i, x, y) for i in active]
    gtol = 1e-8
    for g in grads:
        if math.hypot(*g) <= gtol:
            return True
    for a in range(len(grads)):
        for b in range(a + 1, len(grads)):
            g1, g2 = grads[a], grads[b]
            d1, d2 = g1[0] - g2[0], g1[1] - g2[1]
            denom = d1 * d1 + d2 * d2
            if denom <= 1e-300:
                continue
            lam = -(g2[0] * d1 + g2[1] * d2) / denom
            if -1e-9 <= lam <= 1.0 + 1e-9:
                rx = lam * g1[0] + (1.0 - lam) * g2[0]
                ry = lam * g1[1] + (1.0 - lam) * g2[1]
                if math.hypot(rx, ry) <= gtol:
                    return True
    for a in range(len(grads)):
        for b in range(a + 1, len(grads)):
            for c in range(b + 1, len(grads)):
                g1, g2, g3 = grads[a], grads[b], grads[c]
                m = [[g1[0], g2[0], g3[0]], [g1[1], g2[1], g3[1]], [1.0, 1.0, 1.0]]
                sol = _solve3(m, [0.0, 0.0, 1.0])
                if sol is None:
                    continue
                if all(l >= -1e-9 for l in sol):
                    return True
    return False


def _polish(obj, x, y, scale):
    """Active-set candidates refined by Newton; returns (x, y, f) best among
    the current point and all successfully polished candidates."""
    vals = obj.values(x, y)
    f = max(vals)
    order = sorted(range(len(vals)), key=lambda i: -vals[i])
    candidates: list[tuple[float, float]] = []
    if len(order) >= 3:
        got = _newton_equalize3(obj, order[:3], x, y, scale)
        if got is not None:
            candidates.append(got)
    if len(order) >= 2:
        got = _newton_kkt2(obj, order[:2], x, y, scale)
        if got is not None:
            candidates.append(got)
    candidates.append(obj.piece_argmin(order[0], x, y))
    best = (x, y, f)
    for cx, cy in candidates:
        if not (math.isfinite(cx) and math.isfinite(cy)):
            continue
        cf = max(obj.values(cx, cy))
        if cf < best[2]:
            best = (cx, cy, cf)
    return best


def _minimize_max(obj, eps_opt, max_iter=100_000, patience=100):
    """Multi-start minimization of a convex pointwise-max objective.

    Each start runs Polyak subgradient descent followed by an active-set
    Newton polish; a start whose result passes the KKT optimality check
    settles the (convex) problem and the remaining starts are skipped.
    Otherwise the best point over all starts is returned, with ties broken
    lexicographically on the point.
    """
    scale = obj.scale_hint()
    best: Optional[tuple[float, float, float]] = None
    for sx, sy in obj.starts():
        x, y, _, _ = _polyak_descent(obj, sx, sy, eps_opt, max_iter, patience)
        x, y, f = _polish(obj, x, y, scale)
        if (
            best is None
            or f < best[2]
            or (f == best[2] and (x, y) < (best[0], best[1]))
        ):
            best = (x, y, f)
        if _is_kkt_point(obj, x, y, scale):
            break
    assert best is not None
    return Point(best[0], best[1]), best[2]


# ---------------------------------------------------------------------------
# Public operations
# ---------------------------------------------------------------------------


def diametral_family(m: Matching, ps: PointSet, scale: float = 1.0) -> DiskFamily:
    """Diametral disk of every matching edge, radii scaled by `scale`."""
    if scale < 1.0:
        raise ValueError(f"scale must be at least 1, got {scale}")
    disks = []
    for i, j in m.pairs:
        disks.append(diametral_disk(Segment(ps[i], ps[j])))
    return DiskFamily(tuple(disks), scale)


def common_point(df: DiskFamily, tol: Tolerance = DEFAULT_TOL) -> CenterWitness:
    """Point minimizing the maximum scaled-disk slack max_i(|xc_i| - r_i).

    A slack at most eps_opt certifies that the scaled family has a common
    point; positive slack beyond that means the intersection is empty.
    """
    if len(df) == 0:
        raise ValueError("common_point requires a nonempty disk family")
    obj = _DiskSlackObjective(df.scaled_disks())
    point, slack = _minimize_max(obj, tol.eps_opt)
    kind: WitnessKind = "diametral" if df.scale == 1.0 else "enlarged"
    return CenterWitness(point=point, slack=slack, kind=kind)


def fingerhut_center(m: Matching, ps: PointSet, tol: Tolerance = DEFAULT_TOL) -> CenterWitness:
    """Point minimizing max_i (|xa_i| + |xb_i|) / |a_i b_i| over the edges.

    Slack is the achieved maximum minus 2/sqrt(3); a 3-local maximum
    matching always admits a point with nonpositive slack.
    """
    if len(m) == 0:
        raise ValueError("fingerhut_center requires a nonempty matching")
    edges = [(ps[i], ps[j]) for i, j in m.pairs]
    obj = _EllipseRatioObjective(edges)
    point, value = _minimize_max(obj, tol.eps_opt)
    return CenterWitness(point=point, slack=value - ENLARGEMENT_FACTOR, kind="fingerhut")


def star_weight(c: Point, ps: PointSet) -> float:
    """Total length of the star connecting c to every point."""
    return sum(distance(c, p) for p in ps.points)


_KIND_SETTINGS = {
    "local2": dict(k=2, beta=math.sqrt(7.0 / 3.0)),
    "local3_sqrt2": dict(k=3, beta=math.sqrt(2.0)),
    "local3_fingerhut": dict(k=3, beta=ENLARGEMENT_FACTOR),
}


def certify(
    ps: PointSet,
    m: Matching,
    kind: CertificateKind,
    tol: Tolerance = DEFAULT_TOL,
    cap: int = DEFAULT_ORACLE_CAP,
) -> Certificate:
    """Build and validate the full inequality chain for a k-local maximum
    matching: w(M*) <= w(S) <= beta * w(M).

    The locality precondition is checked here (LocalityError reports the
    violating subset); a witness whose slack exceeds eps_opt raises
    WitnessError.  When the instance fits the oracle cap the left side of
    the chain is verified against the exact maximum matching.
    """
    if kind not in _KIND_SETTINGS:
        raise ValueError(f"unknown certificate kind {kind!r}")
    settings = _KIND_SETTINGS[kind]
    k = min(settings["k"], len(m))
    beta = settings["beta"]
    locality = is_k_local_max(ps, m, k, tol)
    if not locality.is_local_max:
        raise LocalityError(k, locality.violating_subset)
    if kind == "local2":
        witness = common_point(diametral_family(m, ps, ENLARGEMENT_FACTOR), tol)
    elif kind == "local3_sqrt2":
        witness = common_point(diametral_family(m, ps, 1.0), tol)
    else:
        witness = fingerhut_center(m, ps, tol)
    if witness.slack > tol.eps_opt:
        raise WitnessError(
            f"witness slack {witness.slack:.3e} exceeds eps_opt {tol.eps_opt:.1e} for kind {kind}"
        )
    c = witness.point
    checks = []
    for i, j in m.pairs:
        lhs = distance(c, ps[i]) + distance(c, ps[j])
        rhs = beta * ps.dist[i][j]
        if lhs > rhs + tol.eps_opt:
            raise WitnessError(
                f"per-edge bound violated on ({i}, {j}): {lhs:.12f} > {rhs:.12f} + eps"
            )
        checks.append(((i, j), lhs, rhs))
    w_star = star_weight(c, ps)
    w_m = weight(m, ps)
    if w_star > beta * w_m + tol.eps_opt * max(1.0, w_m):
        raise WitnessError(f"star weight {w_star:.12f} exceeds beta * w(M) = {beta * w_m:.12f}")
    oracle_weight: Optional[float] = None
    if len(ps) <= 2 * cap:
        opt = optimal_matching(ps, "maximize", cap)
        oracle_weight = weight(opt, ps)
        if oracle_weight > w_star + tol.eps_geom * max(1.0, oracle_weight):
            raise WitnessError(
                f"triangle-inequality step failed: w(M*) = {oracle_weight:.12f} "
                f"> w(S) = {w_star:.12f}"
            )
    return Certificate(
        kind=kind,
        witness=witness,
        star_weight=w_star,
        matching_weight=w_m,
        beta=beta,
        per_edge_checks=tuple(checks),
        oracle_weight=oracle_weight,
    )
