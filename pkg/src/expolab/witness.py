"""Completeness decisions and incompleteness witnesses for E(A) over Q_d and B_d.

A frequency ``b`` is a witness of incompleteness when ``ft(a - b) = 0`` for
every ``a`` in ``A``.  On the cube that means ``b - a`` has a nonzero integer
coordinate for every ``a``; on the ball it means every distance ``|b - a|``
is a zero of ``r -> J_{d/2}(2 pi r)``.
"""

from __future__ import annotations

import json
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import least_squares

from .bessel import ZeroTable, zero_table_for
from .errors import (
    ConstructionError,
    DegenerateConfigurationError,
    DimensionMismatchError,
    ResourceLimitError,
    TableCoverageError,
)
from .indicator_ft import (
    INTEGRALITY_TOL,
    DomainKind,
    DomainSpec,
    ft_ball_radial,
    ft_cube,
)

ZERO_TOL = 1e-8
GAP_TOL = 1e-6
DEFAULT_CUTOFF = 50.0
MAX_SCAN_CELLS = 20_000_000
SAMPLE_LOW, SAMPLE_HIGH = 0.0, 10.0
RANK_TOL = 1e-9


# --------------------------------------------------------------------------
# data types

@dataclass(frozen=True, eq=False)
class FrequencySet:
    dim: int
    points: np.ndarray  # shape (N, dim)

    def __post_init__(self):
        pts = np.array(self.points, dtype=float)
        if pts.size == 0:
            pts = pts.reshape(0, self.dim)
        if pts.ndim != 2 or pts.shape[1] != self.dim:
            raise DimensionMismatchError(f"points must have shape (N, {self.dim})")
        if not np.all(np.isfinite(pts)):
            raise ValueError("points must be finite")
        if len({tuple(p) for p in pts}) != len(pts):
            raise ValueError("points of a frequency set must be distinct")
        pts.flags.writeable = False
        object.__setattr__(self, "points", pts)
        object.__setattr__(self, "dim", int(self.dim))

    def __len__(self):
        return len(self.points)

    def __eq__(self, other):
        return (isinstance(other, FrequencySet) and self.dim == other.dim
                and np.array_equal(self.points, other.points))

    def to_dict(self) -> dict:
        return {"dim": self.dim, "points": self.points.tolist()}

    def to_json(self) -> str:
        return json.dumps(self.to_dict())

    @classmethod
    def from_dict(cls, doc: dict) -> "FrequencySet":
        return cls(int(doc["dim"]), doc["points"])

    @classmethod
    def from_json(cls, text: str) -> "FrequencySet":
        return cls.from_dict(json.loads(text))


@dataclass(frozen=True)
class CubeAssignmentInfeasible:
    classes: tuple  # per coordinate: tuple of congruence classes (point indices)
    nodes_explored: int
    assignments_total: int
    kind: str = field(default="cube_assignment_infeasible", init=False)

    def to_dict(self) -> dict:
        return {"kind": self.kind,
                "classes": [[list(c) for c in coord] for coord in self.classes],
                "nodes_explored": self.nodes_explored,
                "assignments_total": self.assignments_total}


@dataclass(frozen=True)
class BallForbiddenAlpha:
    min_gap: float
    cutoff: float
    gaps: tuple = ()
    forbidden_count: int = 0
    kind: str = field(default="ball_forbidden_alpha", init=False)

    def to_dict(self) -> dict:
        return {"kind": self.kind, "min_gap": self.min_gap, "cutoff": self.cutoff,
                "gaps": list(self.gaps), "forbidden_count": self.forbidden_count}


@dataclass(frozen=True)
class Incomplete:
    witness: tuple
    residuals: tuple
    verdict: str = field(default="incomplete", init=False)

    def to_dict(self) -> dict:
        return {"verdict": self.verdict, "witness": list(self.witness),
                "residuals": list(self.residuals)}


@dataclass(frozen=True)
class CompleteCertified:
    evidence: CubeAssignmentInfeasible | BallForbiddenAlpha
    verdict: str = field(default="complete_certified", init=False)

    def to_dict(self) -> dict:
        return {"verdict": self.verdict, "evidence": self.evidence.to_dict()}


@dataclass(frozen=True)
class Inconclusive:
    search_bound: float
    verdict: str = field(default="inconclusive", init=False)

    def to_dict(self) -> dict:
        return {"verdict": self.verdict, "search_bound": self.search_bound}


Certificate = Incomplete | CompleteCertified | Inconclusive


def certificate_from_dict(doc: dict) -> Certificate:
    v = doc["verdict"]
    if v == "incomplete":
        return Incomplete(tuple(doc["witness"]), tuple(doc["residuals"]))
    if v == "inconclusive":
        return Inconclusive(float(doc["search_bound"]))
    ev = doc["evidence"]
    if ev["kind"] == "cube_assignment_infeasible":
        classes = tuple(tuple(tuple(c) for c in coord) for coord in ev["classes"])
        evidence = CubeAssignmentInfeasible(classes, ev["nodes_explored"], ev["assignments_total"])
    else:
        evidence = BallForbiddenAlpha(ev["min_gap"], ev["cutoff"], tuple(ev["gaps"]),
                                      ev["forbidden_count"])
    return CompleteCertified(evidence)


# --------------------------------------------------------------------------
# residuals and pair tests

def _table(d: int, r_max: float, table: ZeroTable | None) -> ZeroTable:
    if table is None:
        return zero_table_for(d, r_max)
    if table.order.two_nu != d:
        raise DimensionMismatchError(f"zero table of order {table.order.two_nu}/2, need {d}/2")
    return table


def witness_residuals(domain: DomainSpec, A: FrequencySet, b) -> np.ndarray:
    """|ft(a - b)| for every a in A, recomputed from the transform formulas.

    The cube uses its exact-zero path; the ball is evaluated directly,
    without any zero-table shortcut.
    """
    b = np.asarray(b, dtype=float)
    if A.dim != domain.dim or b.shape != (domain.dim,):
        raise DimensionMismatchError("witness and set dimensions differ")
    if domain.kind is DomainKind.CUBE:
        return np.array([abs(ft_cube(domain.dim, a - b)) for a in A.points])
    return np.abs(ft_ball_radial(domain.dim, np.linalg.norm(A.points - b, axis=1)))


def _incomplete(domain: DomainSpec, A: FrequencySet, b, zero_tol: float) -> Incomplete:
    res = witness_residuals(domain, A, b)
    if res.size and res.max() > zero_tol:
        raise ConstructionError(f"witness residual {res.max():.3g} exceeds {zero_tol:g}")
    return Incomplete(tuple(float(v) for v in b), tuple(float(v) for v in res))


def is_orthogonal_pair(domain: DomainSpec, a, a2, table: ZeroTable | None = None,
                       zero_tol: float = ZERO_TOL) -> bool:
    """Whether e(a) and e(a2) are orthogonal in L^2(domain)."""
    a = np.asarray(a, dtype=float)
    a2 = np.asarray(a2, dtype=float)
    if a.shape != (domain.dim,) or a2.shape != (domain.dim,):
        raise DimensionMismatchError("frequencies must match the domain dimension")
    if np.array_equal(a, a2):
        raise ValueError("a pair of identical frequencies is never orthogonal")
    if domain.kind is DomainKind.CUBE:
        return abs(ft_cube(domain.dim, a - a2)) <= zero_tol
    rho = float(np.linalg.norm(a - a2))
    table = _table(domain.dim, rho, table)
    if table.contains(rho):
        return True
    return abs(float(ft_ball_radial(domain.dim, rho))) <= zero_tol


# --------------------------------------------------------------------------
# cube: exhaustive coordinate assignment

def _congruent(x: float, y: float, tol: float) -> bool:
    t = x - y
    return abs(t - round(t)) <= tol


def _congruence_classes(values: np.ndarray, tol: float) -> tuple:
    classes: list[list[int]] = []
    for j, v in enumerate(values):
        for c in classes:
            if _congruent(v, values[c[0]], tol):
                c.append(j)
                break
        else:
            classes.append([j])
    return tuple(tuple(c) for c in classes)


def cube_incompleteness_witness(A: FrequencySet, integrality_tol: float = INTEGRALITY_TOL,
                                zero_tol: float = ZERO_TOL) -> Certificate:
    """Exact completeness decision for E(A) over [0,1]^d.

    Searches assignments sigma: point j -> coordinate k such that all points
    sent to coordinate k agree mod 1 there.  The first feasible assignment in
    lexicographic order gives the witness; when none exists the search tree
    is the certificate.
    """
    d, pts = A.dim, A.points
    n = len(pts)
    domain = DomainSpec.cube(d)
    if n == 0:
        return _incomplete(domain, A, np.zeros(d), zero_tol)

    sigma = [0] * n
    members: list[list[int]] = [[] for _ in range(d)]
    nodes = 0

    def place(j: int) -> bool:
        nonlocal nodes
        if j == n:
            return True
        for k in range(d):
            nodes += 1
            if all(_congruent(pts[j, k], pts[i, k], integrality_tol) for i in members[k]):
                members[k].append(j)
                sigma[j] = k
                if place(j + 1):
                    return True
                members[k].pop()
        return False

    if not place(0):
        classes = tuple(_congruence_classes(pts[:, k], integrality_tol) for k in range(d))
        return CompleteCertified(CubeAssignmentInfeasible(classes, nodes, d ** n))

    b = np.zeros(d)
    for k in range(d):
        if not members[k]:
            continue
        ref = pts[members[k][0], k]
        # b_k - a^j_k = shift - offset_j must be a nonzero integer for all j
        offsets = [round(pts[j, k] - ref) for j in members[k]]
        b[k] = ref + max(offsets) + 1
    return _incomplete(domain, A, b, zero_tol)


# --------------------------------------------------------------------------
# ball: equidistant flat

def _first_zero_at_least(table: ZeroTable, r: float) -> float:
    mids = table.midpoints
    i = int(np.searchsorted(mids, r))
    if i >= len(mids):
        raise TableCoverageError(f"zero table ends at {mids[-1]:.4g}, need a zero >= {r:.4g}")
    return float(mids[i])


def equidistant_flat(A: FrequencySet) -> tuple[np.ndarray, float, np.ndarray]:
    """Circumcentre ``c``, circumradius and an orthonormal basis of directions
    along which every point of the flat ``c + span`` is equidistant from A.

    Covers any set lying on a common sphere of its affine hull, provided the
    hull is a proper flat; affinely independent sets of at most d points
    always qualify.  Raises DegenerateConfigurationError otherwise.
    """
    pts, d = A.points, A.dim
    n = len(pts)
    if n == 0:
        raise ValueError("equidistant flat needs at least one point")
    if n == 1:
        return pts[0].copy(), 0.0, np.eye(d)
    U = pts[1:] - pts[0]
    _, s, vt = np.linalg.svd(U, full_matrices=True)
    rank = int(np.sum(s > RANK_TOL * max(1.0, s[0])))
    if rank == d:
        raise DegenerateConfigurationError("affine hull is the whole space")
    # 2 u_j . y = |u_j|^2, least-norm solution lies in the hull directions
    rhs = np.sum(U * U, axis=1)
    y, *_ = np.linalg.lstsq(2.0 * U, rhs, rcond=None)
    if np.max(np.abs(2.0 * U @ y - rhs)) > RANK_TOL * max(1.0, float(rhs.max())):
        raise DegenerateConfigurationError("points do not lie on a common sphere of their hull")
    null = vt[rank:]
    for row in null:
        lead = row[np.argmax(np.abs(row) > 1e-12)]
        if lead < 0:
            row *= -1
    return pts[0] + y, float(np.linalg.norm(y)), null


def ball_equidistant_witness(A: FrequencySet, table: ZeroTable | None = None,
                             zero_tol: float = ZERO_TOL) -> Certificate:
    """Witness on the equidistant flat of a cospherical set (see equidistant_flat).

    Every point ``c + t v`` of the flat is at distance ``sqrt(rho^2 + t^2)``
    from all of A; walking t from 0 outward, the first table zero at or
    beyond the circumradius rho is hit at ``t = sqrt(R^2 - rho^2)``.
    """
    d = A.dim
    c, rho, null = equidistant_flat(A)
    table = _table(d, rho + 1.0, table)
    R = _first_zero_at_least(table, rho)
    b = c + math.sqrt(max(R * R - rho * rho, 0.0)) * null[0]
    return _incomplete(DomainSpec.ball(d), A, b, zero_tol)


def ball_equatorial_witness(N: int, d: int, table: ZeroTable | None = None,
                            zero_tol: float = ZERO_TOL) -> tuple[FrequencySet, np.ndarray]:
    """N points on the unit (d-2)-sphere in {x_d = 0} and a witness on the x_d axis.

    The points are placed at equal angles on the great circle in the
    (x_1, x_2) plane.
    """
    if d < 3:
        raise ValueError("the equatorial construction needs d >= 3")
    if N < 1:
        raise ValueError("N must be >= 1")
    theta = 2 * math.pi * np.arange(N) / N
    pts = np.zeros((N, d))
    pts[:, 0] = np.cos(theta)
    pts[:, 1] = np.sin(theta)
    A = FrequencySet(d, pts)
    table = _table(d, 2.0, table)
    R = _first_zero_at_least(table, 1.0)
    b = np.zeros(d)
    b[-1] = math.sqrt(R * R - 1.0)
    _incomplete(DomainSpec.ball(d), A, b, zero_tol)
    return A, b


def _bisect(f, lo: float, hi: float, iters: int = 200) -> float:
    flo = f(lo) > 0
    for _ in range(iters):
        mid = 0.5 * (lo + hi)
        if mid in (lo, hi):
            break
        if (f(mid) > 0) == flo:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def ball_planar_witness(N: int, table: ZeroTable | None = None,
                        zero_tol: float = ZERO_TOL) -> tuple[FrequencySet, np.ndarray]:
    """Planar construction: a^1 = 0, witness b = (0, R) with R a table zero.

    Further points come in mirror pairs across the x_2 axis (the last one
    unpaired when N is even).  Each pair has
    its own radius r about the origin; the angle of the third-quadrant point
    is bisected until its distance to b lands on a table zero.
    """
    if N < 1:
        raise ValueError("N must be >= 1")
    n_pairs = N // 2
    if table is None:
        table = zero_table_for(2, max(12.0, 1.0 + 1.5 * n_pairs))
    table = _table(2, 0.0, table)
    mids, lo_e, hi_e = table.midpoints, table.lo, table.hi
    # radii stay in (R, 2R], so distances to b stay below 3R
    fit = mids[mids <= table.span / 3.2]
    if len(fit) == 0 or fit[-1] < 1.5:
        raise TableCoverageError("zero table too short for the planar construction")
    R = float(fit[-1])
    b = np.array([0.0, R])
    pts = [np.zeros(2)]
    for p in range(1, n_pairs + 1):
        r = R * (1 + p / (n_pairs + 1))
        near, far = math.hypot(r, R), r + R
        ok = np.nonzero((lo_e > near + 1e-3) & (hi_e < far - 1e-3))[0]
        if len(ok) == 0:
            raise TableCoverageError("no zero between the extreme distances; use a longer table")
        target = float(mids[ok[0]])

        def excess(theta, r=r, target=target):
            return math.sqrt(r * r + R * R - 2 * r * R * math.sin(theta)) - target

        theta = _bisect(excess, math.pi, 1.5 * math.pi)
        a = np.array([r * math.cos(theta), r * math.sin(theta)])
        pts.append(a)
        if len(pts) < N:
            pts.append(np.array([-a[0], a[1]]))
    A = FrequencySet(2, np.array(pts[:N]))
    _incomplete(DomainSpec.ball(2), A, b, zero_tol)
    return A, b


# --------------------------------------------------------------------------
# ball: collinear configurations and the forbidden alpha set

def forbidden_alphas(table: ZeroTable, cutoff: float, unit: float = 1.0) -> np.ndarray:
    """Sorted positions alpha for which {0, unit e1, alpha e1} admits a witness
    with all three distances among the table zeros up to ``cutoff``.

    With b = (b1, rho, 0, ...) and distances r1, r2, rk to 0, unit e1,
    alpha e1: b1 = (r1^2 - r2^2 + unit^2) / (2 unit), rho^2 = r1^2 - b1^2
    and alpha = b1 +- sqrt(rk^2 - rho^2), i.e. the roots of
    alpha^2 + alpha (r2^2 - r1^2 - unit^2)/unit - (rk^2 - r1^2) = 0.
    Pairs (r1, r2) with no real b (rho^2 < 0) are skipped.
    """
    if table.hi[-1] < cutoff:
        raise TableCoverageError(f"zero table ends at {table.hi[-1]:.4g} < cutoff {cutoff:g}")
    z = table.midpoints
    z = z[z <= cutoff]
    r1, r2 = np.meshgrid(z, z, indexing="ij")
    r1, r2 = r1.ravel(), r2.ravel()
    b1 = (r1 ** 2 - r2 ** 2 + unit ** 2) / (2 * unit)
    rho2 = r1 ** 2 - b1 ** 2
    keep = rho2 >= -1e-12
    b1, rho2 = b1[keep], np.maximum(rho2[keep], 0.0)
    disc = z[None, :] ** 2 - rho2[:, None]
    ok = disc >= 0
    root = np.sqrt(np.where(ok, disc, 0.0))
    vals = np.concatenate([(b1[:, None] + root)[ok], (b1[:, None] - root)[ok]])
    return np.unique(vals)


def _gap(values: np.ndarray, x: float) -> tuple[float, float]:
    i = int(np.searchsorted(values, x))
    best = (math.inf, math.nan)
    for j in (i - 1, i):
        if 0 <= j < len(values):
            g = abs(values[j] - x)
            if g < best[0]:
                best = (g, float(values[j]))
    return best


def ball_collinear_analysis(alphas, table: ZeroTable | None = None,
                            cutoff: float = DEFAULT_CUTOFF, gap_tolerance: float = GAP_TOL,
                            unit: float = 1.0, dim: int = 3) -> Certificate:
    """Cutoff-relative completeness certificate for {0, e1, alpha_3 e1, ...} in B_d, d >= 3.

    CompleteCertified when every alpha_k is farther than ``gap_tolerance``
    from the forbidden set; Inconclusive otherwise.
    """
    alphas = [float(a) for a in alphas]
    if not alphas:
        raise ValueError("at least one alpha is required")
    if len(set(alphas)) != len(alphas) or any(a in (0.0, unit) for a in alphas):
        raise ValueError("alphas must be distinct and differ from 0 and 1")
    if cutoff <= max(unit, max(abs(a) for a in alphas)):
        raise ValueError("cutoff must exceed the length scale of the configuration")
    if table is None:
        table = zero_table_for(dim, cutoff + 0.5)
    if table.order.two_nu < 3:
        raise ValueError("the collinear obstruction applies in dimension >= 3")
    forbidden = forbidden_alphas(table, cutoff, unit)
    gaps = tuple(float(_gap(forbidden, a)[0]) for a in alphas)
    min_gap = float(min(gaps))
    if min_gap > gap_tolerance:
        return CompleteCertified(BallForbiddenAlpha(min_gap, float(cutoff), gaps, int(len(forbidden))))
    return Inconclusive(float(cutoff))


def choose_certified_alphas(count: int, table: ZeroTable | None = None,
                            cutoff: float = DEFAULT_CUTOFF, window: tuple = (1.5, 4.0),
                            dim: int = 3) -> list[float]:
    """``count`` alphas placed at the midpoints of the widest forbidden-set gaps."""
    if table is None:
        table = zero_table_for(dim, cutoff + 0.5)
    forb = forbidden_alphas(table, cutoff)
    inside = forb[(forb > window[0]) & (forb < window[1])]
    edges = np.concatenate(([window[0]], inside, [window[1]]))
    widths = np.diff(edges)
    order = np.argsort(-widths, kind="stable")[:count]
    return sorted(float(0.5 * (edges[i] + edges[i + 1])) for i in order)


def collinear_configuration(alphas, dim: int = 3) -> FrequencySet:
    """{0, e1, alpha_3 e1, ...} padded with zeros up to ``dim`` coordinates."""
    pts = np.zeros((2 + len(alphas), dim))
    pts[1, 0] = 1.0
    pts[2:, 0] = alphas
    return FrequencySet(dim, pts)


# --------------------------------------------------------------------------
# generic scan

def _hull_frame(pts: np.ndarray):
    c = pts.mean(axis=0)
    X = pts - c
    _, s, vt = np.linalg.svd(X, full_matrices=True)
    scale = max(1.0, float(s[0]) if s.size else 1.0)
    k = int(np.sum(s > RANK_TOL * scale))
    return c, vt[:k], vt[k:]


def completeness_scan(domain: DomainSpec, A: FrequencySet, radius: float, grid_step: float,
                      table: ZeroTable | None = None, zero_tol: float = ZERO_TOL,
                      max_cells: int = MAX_SCAN_CELLS) -> Certificate:
    """Search for a witness; never certifies completeness on the ball.

    Cube: defers to the exact decision.  Ball: first the equidistant flat
    (when A lies on a sphere of a proper affine hull), then a grid over the
    reduced coordinates of b: its projection onto the affine hull of A
    (relative to the centroid) and its distance h from that hull, which
    determine every |b - a|.  Grid points whose distances are all within a
    cell half-diagonal of table zeros are refined by least squares and kept
    only if the residuals verify.
    """
    if radius <= 0 or grid_step <= 0:
        raise ValueError("radius and grid_step must be positive")
    if A.dim != domain.dim:
        raise DimensionMismatchError("set and domain dimensions differ")
    if domain.kind is DomainKind.CUBE:
        return cube_incompleteness_witness(A, zero_tol=zero_tol)
    d, pts = domain.dim, A.points
    if len(pts) == 0:
        return Incomplete(tuple(np.zeros(d)), ())

    try:
        return ball_equidistant_witness(A, table, zero_tol)
    except DegenerateConfigurationError:
        pass

    c, along, normal = _hull_frame(pts)
    k = len(along)
    has_h = len(normal) > 0
    n_axis = int(math.floor(radius / grid_step))
    axis = grid_step * np.arange(-n_axis, n_axis + 1)
    h_axis = grid_step * np.arange(0, n_axis + 1)
    cells = len(axis) ** k * (len(h_axis) if has_h else 1)
    if cells > max_cells:
        raise ResourceLimitError(f"scan grid of {cells} cells exceeds the limit {max_cells}")

    P = (pts - c) @ along.T  # (N, k)
    reach = radius * math.sqrt(k + 1) + float(np.abs(P).max(initial=0.0)) + 1.0
    table = _table(d, reach, table)
    mids = table.midpoints
    slack = 0.5 * grid_step * math.sqrt(k + (1 if has_h else 0)) * 1.001

    axes = [axis] * k + ([h_axis] if has_h else [])
    candidates: dict[tuple, tuple[float, np.ndarray]] = {}
    chunk = 1 << 16
    for start in range(0, cells, chunk):
        idx = np.arange(start, min(cells, start + chunk))
        coords = np.stack(np.unravel_index(idx, [len(a) for a in axes]), axis=1)
        g = np.stack([axes[i][coords[:, i]] for i in range(len(axes))], axis=1)
        sq = ((g[:, None, :k] - P[None, :, :]) ** 2).sum(axis=2)
        if has_h:
            sq += g[:, k, None] ** 2
        dist = np.sqrt(sq)
        j = np.clip(np.searchsorted(mids, dist), 1, len(mids) - 1)
        left, right = mids[j - 1], mids[j]
        pick = np.where(np.abs(dist - left) <= np.abs(dist - right), j - 1, j)
        gap = np.abs(dist - mids[pick]).max(axis=1)
        for row in np.nonzero(gap <= slack)[0]:
            key = tuple(pick[row])
            if key not in candidates or gap[row] < candidates[key][0]:
                candidates[key] = (float(gap[row]), g[row])

    domain_ball = DomainSpec.ball(d)
    for key, (_, start) in sorted(candidates.items(), key=lambda kv: kv[1][0]):
        target = mids[list(key)]

        def resid(x):
            p = x[:k]
            h = x[k] if has_h else 0.0
            return np.sqrt(((p - P) ** 2).sum(axis=1) + h * h) - target

        lower = [-np.inf] * k + ([0.0] if has_h else [])
        sol = least_squares(resid, start, bounds=(lower, [np.inf] * len(start)),
                            xtol=1e-15, ftol=1e-15, gtol=1e-15)
        x = sol.x
        b = c + x[:k] @ along + ((x[k] * normal[0]) if has_h else 0.0)
        res = witness_residuals(domain_ball, A, b)
        if res.max() <= zero_tol:
            return Incomplete(tuple(float(v) for v in b), tuple(float(v) for v in res))
    return Inconclusive(float(radius))


def decide(domain: DomainSpec, A: FrequencySet, table: ZeroTable | None = None,
           cutoff: float = DEFAULT_CUTOFF, zero_tol: float = ZERO_TOL,
           gap_tolerance: float = GAP_TOL, scan_radius: float = 5.0,
           scan_step: float = 1e-2) -> Certificate:
    """Dispatch to the construction that applies to the shape of A."""
    if domain.kind is DomainKind.CUBE:
        return cube_incompleteness_witness(A, zero_tol=zero_tol)
    d, pts = domain.dim, A.points
    if len(pts):
        try:
            return ball_equidistant_witness(A, table, zero_tol)
        except DegenerateConfigurationError:
            pass
    if d >= 3 and len(pts) >= 3:
        _, along, _ = _hull_frame(pts)
        if len(along) == 1:
            u = pts[1] - pts[0]
            unit = float(np.linalg.norm(u))
            u = u / unit
            alphas = (pts[2:] - pts[0]) @ u
            # the canonical form {0, unit e1, alpha e1} only needs 1D positions
            reach = max(cutoff, unit, float(np.abs(alphas).max())) + 0.5
            ctable = table if table is not None and table.hi[-1] >= reach else zero_table_for(d, reach)
            if cutoff > max(unit, float(np.abs(alphas).max())):
                cert = ball_collinear_analysis(alphas, ctable, cutoff, gap_tolerance, unit=unit, dim=d)
                if isinstance(cert, CompleteCertified):
                    return cert
    return completeness_scan(domain, A, scan_radius, scan_step, table, zero_tol)


# --------------------------------------------------------------------------
# random experiments

@dataclass
class ExperimentSummary:
    domain: str
    dim: int
    n_points: int
    trials: int
    seed: int
    complete_certified: int
    incomplete: int
    inconclusive: int

    @property
    def fraction_complete(self) -> float:
        return self.complete_certified / self.trials

    @property
    def fraction_no_witness(self) -> float:
        return (self.trials - self.incomplete) / self.trials

    def to_dict(self) -> dict:
        return {"domain": self.domain, "dim": self.dim, "n_points": self.n_points,
                "trials": self.trials, "seed": self.seed,
                "complete_certified": self.complete_certified, "incomplete": self.incomplete,
                "inconclusive": self.inconclusive,
                "fraction_complete": self.fraction_complete,
                "fraction_no_witness": self.fraction_no_witness}


def sample_tuples(d: int, N: int, trials: int, seed: int) -> np.ndarray:
    """``trials`` tuples of N points, coordinates uniform on [0, 10), numpy PCG64."""
    rng = np.random.default_rng(seed)
    return rng.uniform(SAMPLE_LOW, SAMPLE_HIGH, size=(trials, N, d))


def random_tuple_experiment(domain: DomainSpec, N: int, trials: int, seed: int = 0,
                            scan_radius: float = 5.0, scan_step: float = 2e-2,
                            threads: int = 1) -> ExperimentSummary:
    """Run the completeness decision on seeded random N-tuples."""
    if trials < 1 or N < 1:
        raise ValueError("trials and N must be >= 1")
    d = domain.dim
    samples = sample_tuples(d, N, trials, seed)
    table = zero_table_for(d, 2 * scan_radius + SAMPLE_HIGH * math.sqrt(d) + 2) \
        if domain.kind is DomainKind.BALL else None

    def run(pts):
        A = FrequencySet(d, pts)
        if domain.kind is DomainKind.CUBE:
            return cube_incompleteness_witness(A)
        return completeness_scan(domain, A, scan_radius, scan_step, table)

    if threads == 1:
        certs = [run(s) for s in samples]
    else:
        with ThreadPoolExecutor(max_workers=None if threads == 0 else threads) as pool:
            certs = list(pool.map(run, samples))
    count = {t: sum(isinstance(c, t) for c in certs) for t in (CompleteCertified, Incomplete, Inconclusive)}
    return ExperimentSummary(domain.kind.value, d, N, trials, seed, count[CompleteCertified],
                             count[Incomplete], count[Inconclusive])
