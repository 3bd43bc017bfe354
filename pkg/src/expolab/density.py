"""Separation, Beurling density, thickenings and phi-approximate orthogonality.

Densities are reported as points per unit volume, ``#(A n B(x, r)) / |B(x, r)|``.
Because the balls B(a, alpha/2) around the points of A are disjoint, the
matching packing bound is

    #(A n B(x, r)) / |B(x, r)| <= ((r + alpha/2) / r)^d / |B_d(alpha/2)|.

For the thickening E_delta the disjoint-union identity gives

    |E_delta n B(x, r)| <= |B_d(delta)| * #(A n B(x, r + delta)).
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field

import numpy as np
from scipy.spatial import cKDTree
from scipy.spatial.distance import pdist

from .bessel import ZeroTable, zero_table_for
from .errors import DimensionMismatchError, TableCoverageError
from .indicator_ft import ball_volume, envelope_constant, ft_ball_radial
from .witness import FrequencySet

LATTICE_EPS = 0.05
LATTICE_R_MIN = 5.0
BRUTE_FORCE_LIMIT = 2000
MC_SAMPLES = 4096


# --------------------------------------------------------------------------
# decay profiles

@dataclass(frozen=True)
class PowerLaw:
    """phi(t) = c (1 + t)^(-p)."""

    c: float
    p: float

    def __post_init__(self):
        if self.c < 0 or self.p < 0:
            raise ValueError("power-law profile needs c >= 0 and p >= 0")

    def __call__(self, t):
        return self.c * (1.0 + np.asarray(t, dtype=float)) ** (-self.p)

    def satisfies_phismall(self, d: int) -> bool:
        """(1 + t)^((d+1)/2) phi(t) -> 0 as t -> infinity."""
        return self.c == 0 or self.p > (d + 1) / 2

    def to_dict(self) -> dict:
        return {"kind": "power_law", "c": self.c, "p": self.p}


@dataclass(frozen=True)
class Tabulated:
    """Piecewise-linear profile through sorted knots, constant past the last."""

    knots: tuple  # of (t, phi)

    def __post_init__(self):
        knots = tuple((float(t), float(v)) for t, v in self.knots)
        if not knots:
            raise ValueError("tabulated profile needs at least one knot")
        ts = [t for t, _ in knots]
        if any(b <= a for a, b in zip(ts, ts[1:])) or ts[0] < 0:
            raise ValueError("knots must be strictly increasing in t >= 0")
        if any(v < 0 or not math.isfinite(v) for _, v in knots):
            raise ValueError("phi must be finite and nonnegative")
        object.__setattr__(self, "knots", knots)

    def __call__(self, t):
        ts, vs = zip(*self.knots)
        return np.interp(np.asarray(t, dtype=float), ts, vs)

    def satisfies_phismall(self, d: int) -> bool:
        # last-value extension: the weighted tail only vanishes if phi ends at 0
        return self.knots[-1][1] == 0.0

    def to_dict(self) -> dict:
        return {"kind": "tabulated", "knots": [list(k) for k in self.knots]}


PhiProfile = PowerLaw | Tabulated


def envelope_profile(d: int) -> PowerLaw:
    """The calibrated uniform decay bound of the ball transform as a profile."""
    return PowerLaw(envelope_constant(d), (d + 1) / 2)


# --------------------------------------------------------------------------
# separation and density

def _pairs(A: FrequencySet):
    n = len(A)
    i, j = np.triu_indices(n, k=1)
    return i, j, pdist(A.points) if n >= 2 else np.empty(0)


def separation(A: FrequencySet) -> float:
    """Minimum pairwise distance."""
    if len(A) < 2:
        raise ValueError("separation needs at least two points")
    if len(A) <= BRUTE_FORCE_LIMIT:
        return float(pdist(A.points).min())
    dist, _ = cKDTree(A.points).query(A.points, k=2)
    return float(dist[:, 1].min())


def packing_bound(r: float, alpha: float, d: int) -> float:
    """Upper bound on points per unit volume in a ball of radius r."""
    return ((r + alpha / 2) / r) ** d / ball_volume(d) / (alpha / 2) ** d


@dataclass(frozen=True)
class DensityEstimate:
    r: float
    best_center: tuple
    count: int
    count_ratio: float


def upper_beurling_density(A: FrequencySet, radii, center_grid_step: float) -> list[DensityEstimate]:
    """For each radius, the largest count per unit volume over a grid of centres.

    The grid covers the bounding box of A padded by the largest radius.
    """
    radii = [float(r) for r in radii]
    if any(r <= 0 for r in radii) or any(b <= a for a, b in zip(radii, radii[1:])):
        raise ValueError("radii must be positive and increasing")
    if center_grid_step <= 0:
        raise ValueError("center_grid_step must be positive")
    d = A.dim
    if len(A) == 0:
        return [DensityEstimate(r, (0.0,) * d, 0, 0.0) for r in radii]
    pad = radii[-1]
    lo, hi = A.points.min(axis=0) - pad, A.points.max(axis=0) + pad
    axes = [np.arange(a, b + 0.5 * center_grid_step, center_grid_step) for a, b in zip(lo, hi)]
    centres = np.stack(np.meshgrid(*axes, indexing="ij"), axis=-1).reshape(-1, d)
    tree = cKDTree(A.points)
    out = []
    for r in radii:
        counts = tree.query_ball_point(centres, r, return_length=True)
        i = int(np.argmax(counts))
        out.append(DensityEstimate(r, tuple(float(v) for v in centres[i]), int(counts[i]),
                                   float(counts[i]) / (ball_volume(d) * r ** d)))
    return out


# --------------------------------------------------------------------------
# thickening

def _uniform_in_ball(rng, n: int, d: int) -> np.ndarray:
    v = rng.standard_normal((n, d))
    v /= np.linalg.norm(v, axis=1, keepdims=True)
    return v * rng.random((n, 1)) ** (1.0 / d)


@dataclass(frozen=True)
class Thickening:
    """E_delta: the union of the closed balls B(a, delta), a in A."""

    A: FrequencySet
    delta: float
    _tree: cKDTree = field(repr=False, compare=False, default=None)

    @property
    def dim(self) -> int:
        return self.A.dim

    def contains(self, x) -> bool:
        x = np.asarray(x, dtype=float)
        if len(self.A) == 0:
            return False
        dist, _ = self._tree.query(x)
        return bool(dist <= self.delta)

    def measure_in_ball(self, center, r: float, samples: int = MC_SAMPLES,
                        seed: int = 0) -> tuple[float, float]:
        """|E_delta n B(center, r)| and its Monte Carlo standard error.

        Balls inside or outside the query ball contribute exactly; only the
        partially overlapping ones are sampled.
        """
        center = np.asarray(center, dtype=float)
        d, delta = self.dim, self.delta
        vol = ball_volume(d) * delta ** d
        if len(self.A) == 0:
            return 0.0, 0.0
        dist = np.linalg.norm(self.A.points - center, axis=1)
        inside = dist + delta <= r
        partial = ~inside & (dist < r + delta)
        measure = vol * float(inside.sum())
        var = 0.0
        if partial.any():
            rng = np.random.default_rng(seed)
            for a in self.A.points[partial]:
                pts = a + delta * _uniform_in_ball(rng, samples, d)
                hit = np.linalg.norm(pts - center, axis=1) <= r
                frac = float(hit.mean())
                measure += vol * frac
                var += vol ** 2 * frac * (1 - frac) / samples
        return float(measure), math.sqrt(var)

    def count_bound(self, center, r: float) -> float:
        """|B_d(delta)| * #(A n B(center, r + delta))."""
        center = np.asarray(center, dtype=float)
        n = int(np.sum(np.linalg.norm(self.A.points - center, axis=1) < r + self.delta))
        return ball_volume(self.dim) * self.delta ** self.dim * n


def thicken(A: FrequencySet, delta: float) -> Thickening:
    if delta <= 0:
        raise ValueError("delta must be positive")
    if len(A) >= 2 and delta >= separation(A):
        raise ValueError("delta must be below the separation so the balls stay disjoint")
    tree = cKDTree(A.points) if len(A) else None
    return Thickening(A, float(delta), tree)


@dataclass
class DensityReport:
    separation: float
    upper_density_estimates: list
    delta: float
    thickened_measure_ratio: list  # of (r, ratio)

    def to_dict(self) -> dict:
        return {"separation": self.separation,
                "upper_density_estimates": [
                    {"r": e.r, "best_center": list(e.best_center), "count": e.count,
                     "count_ratio": e.count_ratio,
                     "packing_bound": packing_bound(e.r, self.separation, len(e.best_center))}
                    for e in self.upper_density_estimates],
                "delta": self.delta,
                "thickened_measure_ratio": [list(t) for t in self.thickened_measure_ratio]}


def density_report(A: FrequencySet, radii, center_grid_step: float,
                   delta: float | None = None) -> DensityReport:
    alpha = separation(A)
    delta = alpha / 2 if delta is None else delta
    est = upper_beurling_density(A, radii, center_grid_step)
    E = thicken(A, delta)
    ratios = []
    for e in est:
        m, _ = E.measure_in_ball(e.best_center, e.r)
        ratios.append((e.r, m / (ball_volume(A.dim) * e.r ** A.dim)))
    return DensityReport(alpha, est, delta, ratios)


# --------------------------------------------------------------------------
# phi audit and distance lattice

@dataclass
class AuditReport:
    pairs_checked: int
    violations: list = field(default_factory=list)  # (i, j, distance, |ft|, phi)

    @property
    def passed(self) -> bool:
        return not self.violations

    def to_dict(self) -> dict:
        return {"passed": self.passed, "pairs_checked": self.pairs_checked,
                "violations": [{"pair_i": i, "pair_j": j, "distance": dist, "ft_abs": f, "phi": p}
                               for i, j, dist, f, p in self.violations]}


def phi_audit(A: FrequencySet, phi: PhiProfile, d: int | None = None,
              table: ZeroTable | None = None) -> AuditReport:
    """Check |ft_ball(a - a')| <= phi(|a - a'|) for every pair of distinct points.

    The transform is symmetric in a - a', so each unordered pair is checked
    once.  Distances inside a zero-table enclosure count as exact zeros.
    """
    d = A.dim if d is None else d
    if d != A.dim:
        raise DimensionMismatchError("audit dimension differs from the set")
    i, j, dist = _pairs(A)
    if dist.size == 0:
        return AuditReport(0)
    if table is None:
        table = zero_table_for(d, float(dist.max()))
    elif table.order.two_nu != d:
        raise DimensionMismatchError("zero table order does not match the dimension")
    elif dist.max() > table.span:
        raise TableCoverageError(f"pair distance {dist.max():.4g} beyond table span {table.span:.4g}")
    ft = np.abs(ft_ball_radial(d, dist))
    k = np.clip(np.searchsorted(table.hi, dist), 0, len(table) - 1)
    exact = (table.lo[k] <= dist) & (dist <= table.hi[k])
    ft[exact] = 0.0
    bound = phi(dist)
    bad = np.nonzero(ft > bound)[0]
    return AuditReport(len(dist), [(int(i[t]), int(j[t]), float(dist[t]), float(ft[t]), float(bound[t]))
                                   for t in bad])


def lattice_gap(distance, d: int) -> np.ndarray:
    """Distance to the nearest point of {k/2 + (d-1)/8 : k >= 1}."""
    distance = np.asarray(distance, dtype=float)
    shift = (d - 1) / 8
    k = np.maximum(np.round((distance - shift) * 2), 1)
    return np.abs(distance - (k / 2 + shift))


@dataclass
class LatticeReport:
    r_min: float
    eps: float
    pairs_considered: int
    max_gap: float
    offending: list  # (i, j, distance, gap)

    def to_dict(self) -> dict:
        return {"r_min": self.r_min, "eps": self.eps, "pairs_considered": self.pairs_considered,
                "max_gap": self.max_gap,
                "offending": [{"pair_i": i, "pair_j": j, "distance": dist, "gap": g}
                              for i, j, dist, g in self.offending]}


def distance_lattice_check(A: FrequencySet, d: int | None = None, R_min: float = LATTICE_R_MIN,
                           eps: float = LATTICE_EPS) -> LatticeReport:
    """Gaps between the pair distances above R_min and the lattice k/2 + (d-1)/8."""
    d = A.dim if d is None else d
    if R_min <= 0 or eps <= 0:
        raise ValueError("R_min and eps must be positive")
    i, j, dist = _pairs(A)
    far = dist > R_min
    i, j, dist = i[far], j[far], dist[far]
    gap = lattice_gap(dist, d)
    bad = np.nonzero(gap > eps)[0]
    return LatticeReport(float(R_min), float(eps), int(len(dist)),
                         float(gap.max()) if gap.size else 0.0,
                         [(int(i[t]), int(j[t]), float(dist[t]), float(gap[t])) for t in bad])


@dataclass(frozen=True)
class RealizedDistance:
    L: float
    realized: bool
    best_pair: tuple | None
    best_error: float


def realized_distance_scan(region, L_values, tol: float) -> list[RealizedDistance]:
    """Whether each distance L is realised (to within tol) by two points of the set.

    For a thickening E_delta the two points may sit anywhere in their balls,
    so pairs of centres qualify within ``tol + 2 delta``.
    """
    if isinstance(region, Thickening):
        A, slack = region.A, tol + 2 * region.delta
    else:
        A, slack = region, tol
    if tol < 0:
        raise ValueError("tol must be nonnegative")
    i, j, dist = _pairs(A)
    order = np.argsort(dist, kind="stable")
    sd = dist[order]
    out = []
    for L in L_values:
        if L <= 0:
            raise ValueError("distances must be positive")
        if sd.size == 0:
            out.append(RealizedDistance(float(L), False, None, math.inf))
            continue
        k = int(np.searchsorted(sd, L))
        cand = [c for c in (k - 1, k) if 0 <= c < sd.size]
        c = min(cand, key=lambda c: abs(sd[c] - L))
        err = float(abs(sd[c] - L))
        t = order[c]
        out.append(RealizedDistance(float(L), err <= slack, (int(i[t]), int(j[t])), err))
    return out


def write_pairs_csv(path_or_file, rows) -> None:
    """CSV with fixed columns pair_i, pair_j, distance, bound_or_gap."""
    close = isinstance(path_or_file, str)
    fh = open(path_or_file, "w", newline="") if close else path_or_file
    try:
        w = csv.writer(fh)
        w.writerow(["pair_i", "pair_j", "distance", "bound_or_gap"])
        for i, j, dist, val in rows:
            w.writerow([i, j, f"{dist:.17g}", f"{val:.17g}"])
    finally:
        if close:
            fh.close()
