"""Bessel functions J_nu of order nu = d/2 and certified zero tables.

Orders are stored as ``two_nu = 2 * nu`` so that integer and half-integer
orders are told apart exactly.

Evaluation paths for ``J_nu(x)``:

* half-integer orders (odd ``two_nu``): the closed spherical-Bessel form,
  i.e. the Hankel expansion, which terminates after ``nu - 1/2`` terms.
  Used for ``x >= 2 nu``; below that the ascending series is used because
  the closed form cancels badly near the origin.
* integer orders (even ``two_nu``): ascending power series, summed in
  extended precision, for ``x <= crossover(nu) = max(16, 2 nu)`` and the
  Hankel large-argument expansion (optimally truncated) beyond.

Both sides of the integer crossover are accurate to a few 1e-15 for the
supported orders (``two_nu <= 16``); the zero tables rely on that.

The zeros of ``r -> J_{d/2}(2 pi r)`` are bracketed from the asymptotic seed
``m/2 + (d-1)/8`` and refined by bisection.  A fine sign-change scan over
``(0, r_max]`` certifies that entry ``m`` really is the m-th positive zero.
"""

from __future__ import annotations

import json
import logging
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import BesselDomainError, OutOfRangeError, ZeroTableError

log = logging.getLogger(__name__)

MAX_TWO_NU = 16
MAX_ARGUMENT = 1.0e6
CROSSOVER_BASE = 16.0
DEFAULT_TOLERANCE = 1e-10
SEED_WINDOW = 0.2
# Consecutive zeros of J_nu(2 pi r), nu >= 1/2, are at least 1/2 apart in r;
# a 0.05 grid therefore sees every zero as a single sign change.
SCAN_STEP = 0.05
# |midpoint(m) - seed(m)| * m must stay below asymptotic_bound(d) for
# m >= ASYMPTOTIC_FROM.  The leading O(1/m) coefficient is (d^2-1)/(16 pi^2),
# which stays under 1 up to d = 12.
ASYMPTOTIC_CONSTANT = 1.0
ASYMPTOTIC_FROM = 5


def asymptotic_bound(two_nu: int) -> float:
    return max(ASYMPTOTIC_CONSTANT, 1.25 * (two_nu ** 2 - 1) / (16 * math.pi ** 2))


@dataclass(frozen=True)
class BesselOrder:
    two_nu: int

    def __post_init__(self):
        if not isinstance(self.two_nu, (int, np.integer)) or isinstance(self.two_nu, bool):
            raise TypeError("two_nu must be an integer")
        if not 1 <= self.two_nu <= MAX_TWO_NU:
            raise ValueError(f"two_nu must lie in [1, {MAX_TWO_NU}], got {self.two_nu}")
        object.__setattr__(self, "two_nu", int(self.two_nu))

    @classmethod
    def for_dimension(cls, d: int) -> "BesselOrder":
        """Order d/2 of the ball transform in dimension d."""
        return cls(int(d))

    @property
    def nu(self) -> float:
        return self.two_nu / 2

    @property
    def is_half_integer(self) -> bool:
        return self.two_nu % 2 == 1

    @property
    def crossover(self) -> float:
        return max(CROSSOVER_BASE, float(self.two_nu))


def _as_order(order) -> BesselOrder:
    return order if isinstance(order, BesselOrder) else BesselOrder(int(order))


def _series(nu: float, x: np.ndarray) -> np.ndarray:
    # sum_k (-x^2/4)^k / (k! (nu+1)_k), accumulated in long double; the
    # prefactor (x/2)^nu / Gamma(nu+1) is applied afterwards in double.
    xl = x.astype(np.longdouble)
    q = -(xl * xl) / 4
    term = np.ones_like(xl)
    total = np.ones_like(xl)
    nul = np.longdouble(nu)
    for k in range(1, 200):
        term = term * q / (k * (k + nul))
        total = total + term
        if np.all(np.abs(term) <= 1e-21 * np.maximum(np.abs(total), 1e-300)):
            break
    pref = np.exp(nu * np.log(np.where(x > 0, x / 2, 1.0)) - math.lgamma(nu + 1))
    return np.where(x > 0, pref * total.astype(float), 0.0)


def _hankel(nu: float, x: np.ndarray, terminating: bool) -> np.ndarray:
    mu = 4.0 * nu * nu
    P = np.ones_like(x)
    Q = np.zeros_like(x)
    smallest = np.full(x.shape, np.inf)
    active = np.ones(x.shape, dtype=bool)
    term = np.ones_like(x)
    kmax = int(nu - 0.5) if terminating else 80
    for k in range(1, kmax + 1):
        term = term * ((mu - (2 * k - 1) ** 2) / (8.0 * k)) / x
        t = term
        if not terminating:
            # stop each lane at its smallest term (optimal truncation)
            mag = np.abs(t)
            active = active & (mag < smallest)
            smallest = np.where(active, mag, smallest)
            t = np.where(active, t, 0.0)
            if not active.any():
                break
        sign = -1.0 if (k // 2) % 2 else 1.0
        if k % 2:
            Q = Q + sign * t
        else:
            P = P + sign * t
    phase = (2.0 * nu + 1.0) * math.pi / 4.0
    c, s = np.cos(x), np.sin(x)
    cos_w = c * math.cos(phase) + s * math.sin(phase)
    sin_w = s * math.cos(phase) - c * math.sin(phase)
    return np.sqrt(2.0 / (math.pi * x)) * (P * cos_w - Q * sin_w)


def jv(order, x) -> np.ndarray:
    """Vectorised J_nu(x) for x >= 0; returns a float array shaped like ``x``."""
    order = _as_order(order)
    x = np.asarray(x, dtype=float)
    if np.any(x < 0) or np.any(np.isnan(x)):
        raise ValueError("J_nu is only evaluated for x >= 0")
    if np.any(x > MAX_ARGUMENT):
        raise BesselDomainError(f"argument exceeds supported range {MAX_ARGUMENT:g}")
    nu = order.nu
    out = np.zeros_like(x)
    if order.is_half_integer:
        big = x >= order.two_nu
        if big.any():
            out[big] = _hankel(nu, x[big], terminating=True)
        small = ~big
    else:
        big = x > order.crossover
        if big.any():
            out[big] = _hankel(nu, x[big], terminating=False)
        small = ~big
    if small.any():
        out[small] = _series(nu, x[small])
    return out


def jv_series(order, x) -> np.ndarray:
    """Ascending-series path alone (used for cross-checks)."""
    order = _as_order(order)
    return _series(order.nu, np.asarray(x, dtype=float))


def jv_asymptotic(order, x) -> np.ndarray:
    """Large-argument path alone (used for cross-checks)."""
    order = _as_order(order)
    x = np.asarray(x, dtype=float)
    return _hankel(order.nu, x, terminating=order.is_half_integer)


def eval_bessel(order, x: float) -> float:
    """J_nu(x) for a single nonnegative x, absolute error below 1e-12 for x <= 1e4."""
    return float(jv(order, np.array([x], dtype=float))[0])


def _radial(order: BesselOrder, r) -> np.ndarray:
    return jv(order, 2.0 * math.pi * np.asarray(r, dtype=float))


@dataclass(frozen=True)
class ZeroTable:
    """Enclosures [lo, hi] of the zeros r_1 < r_2 < ... of r -> J_nu(2 pi r)."""

    order: BesselOrder
    zeros: tuple  # of (m, lo, hi)
    tolerance: float
    _lo: np.ndarray = field(init=False, repr=False, compare=False)
    _hi: np.ndarray = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        zeros = tuple((int(m), float(lo), float(hi)) for m, lo, hi in self.zeros)
        object.__setattr__(self, "zeros", zeros)
        for name, col in (("_lo", 1), ("_hi", 2)):
            arr = np.array([z[col] for z in zeros], dtype=float)
            arr.flags.writeable = False
            object.__setattr__(self, name, arr)

    def __len__(self):
        return len(self.zeros)

    @property
    def dim(self) -> int:
        return self.order.two_nu

    @property
    def lo(self) -> np.ndarray:
        return self._lo

    @property
    def hi(self) -> np.ndarray:
        return self._hi

    @property
    def midpoints(self) -> np.ndarray:
        return 0.5 * (self._lo + self._hi)

    @property
    def span(self) -> float:
        """Largest r for which :func:`nearest_zero` is guaranteed correct."""
        return float(self.midpoints[-1]) + 0.25

    def midpoint(self, m: int) -> float:
        _, lo, hi = self.zeros[m - 1]
        return 0.5 * (lo + hi)

    def seed(self, m) -> np.ndarray:
        return np.asarray(m) / 2 + (self.order.two_nu - 1) / 8

    def contains(self, r: float) -> bool:
        """True when r lies inside one of the enclosures."""
        lo, hi = self.lo, self.hi
        i = int(np.searchsorted(hi, r))
        return i < len(lo) and lo[i] <= r <= hi[i]

    def asymptotic_deviation(self) -> np.ndarray:
        """|midpoint(m) - m/2 - (d-1)/8| * m for every entry."""
        m = np.arange(1, len(self.zeros) + 1)
        return np.abs(self.midpoints - self.seed(m)) * m

    def validate(self) -> None:
        """Re-check every table invariant; raises ZeroTableError on failure."""
        if not self.zeros:
            raise ZeroTableError("empty table")
        lo, hi = self.lo, self.hi
        idx = [z[0] for z in self.zeros]
        if idx != list(range(1, len(idx) + 1)):
            raise ZeroTableError("indices must run 1..m_max")
        if np.any(lo >= hi) or np.any(hi - lo > self.tolerance):
            raise ZeroTableError("enclosure wider than tolerance or empty")
        if np.any(hi[:-1] >= lo[1:]):
            raise ZeroTableError("enclosures are not strictly increasing")
        flo, fhi = _radial(self.order, lo), _radial(self.order, hi)
        if np.any((flo > 0) == (fhi > 0)):
            raise ZeroTableError("enclosure without a sign change")
        dev = self.asymptotic_deviation()[ASYMPTOTIC_FROM - 1:]
        if dev.size and dev.max() >= asymptotic_bound(self.order.two_nu):
            raise ZeroTableError(f"asymptotic deviation {dev.max():.3g} too large")

    def to_json(self) -> str:
        """Serialise with fixed field order and 17 significant digits."""
        rows = ", ".join(f"[{m}, {lo:.17g}, {hi:.17g}]" for m, lo, hi in self.zeros)
        return (f'{{"two_nu": {self.order.two_nu}, "tolerance": {self.tolerance:.17g}, '
                f'"zeros": [{rows}]}}')

    @classmethod
    def from_json(cls, text: str, validate: bool = True) -> "ZeroTable":
        doc = json.loads(text)
        table = cls(BesselOrder(int(doc["two_nu"])), tuple(map(tuple, doc["zeros"])),
                    float(doc["tolerance"]))
        if validate:
            table.validate()
        return table


def _sign_change_brackets(order: BesselOrder, count: int) -> np.ndarray:
    """Grid brackets (lo, hi) of the first ``count`` sign changes of J(2 pi r)."""
    r_end = count / 2 + order.two_nu / 2 + 2.0
    while True:
        grid = np.arange(1, int(math.ceil(r_end / SCAN_STEP)) + 1) * SCAN_STEP
        pos = _radial(order, grid) > 0
        # J_nu(x) > 0 on (0, first zero), so the grid starts on the positive side
        pos = np.concatenate(([True], pos))
        grid = np.concatenate(([0.0], grid))
        flips = np.nonzero(pos[:-1] != pos[1:])[0]
        if len(flips) >= count:
            flips = flips[:count]
            return np.stack([grid[flips], grid[flips + 1]], axis=1)
        r_end *= 1.5


def build_zero_table(order, m_max: int, tolerance: float = DEFAULT_TOLERANCE) -> ZeroTable:
    """Certified enclosures of the first ``m_max`` zeros of r -> J_nu(2 pi r)."""
    order = _as_order(order)
    if m_max < 1:
        raise ValueError("m_max must be >= 1")
    if not tolerance > 0:
        raise ValueError("tolerance must be positive")
    m = np.arange(1, m_max + 1)
    seeds = m / 2 + (order.two_nu - 1) / 8
    lo = np.maximum(seeds - SEED_WINDOW, 1e-12)
    hi = seeds + SEED_WINDOW
    if tolerance < 8 * np.spacing(hi[-1] + 1.0):
        raise ValueError(f"tolerance {tolerance:g} below float resolution at r={hi[-1]:.3g}")
    seeded = (_radial(order, lo) > 0) != (_radial(order, hi) > 0)

    # index certification: the m-th sign change of a fine scan must sit
    # inside the m-th seed window, otherwise the seed is replaced
    scan = _sign_change_brackets(order, m_max)
    inside = seeded & (scan[:, 0] < hi) & (scan[:, 1] > lo)
    if not inside.all():
        log.debug("seed window missed %d zeros for two_nu=%d; using scan brackets",
                  int((~inside).sum()), order.two_nu)
    lo = np.where(inside, np.maximum(lo, scan[:, 0]), scan[:, 0])
    hi = np.where(inside, np.minimum(hi, scan[:, 1]), scan[:, 1])
    if np.any(hi[:-1] > lo[1:]):
        raise ZeroTableError("two seeds collapsed into one bracket")

    flo = _radial(order, lo) > 0
    for _ in range(400):
        wide = hi - lo > tolerance
        if not wide.any():
            break
        mid = 0.5 * (lo + hi)
        fmid = _radial(order, mid) > 0
        left = wide & (fmid == flo)
        right = wide & ~left
        lo = np.where(left, mid, lo)
        hi = np.where(right, mid, hi)
    else:
        raise ZeroTableError("bisection did not converge")

    table = ZeroTable(order, tuple(zip(m, lo, hi)), float(tolerance))
    table.validate()
    return table


def nearest_zero(table: ZeroTable, r: float) -> tuple[int, float]:
    """Index m minimising |r - midpoint(m)|, and that distance.

    Ties (within the table tolerance) go to the smaller index.
    """
    if not table.zeros:
        raise ValueError("empty zero table")
    if r < 0 or r > table.span:
        raise OutOfRangeError(f"r={r:g} outside table span [0, {table.span:.6g}]; extend the table")
    mids = table.midpoints
    i = int(np.searchsorted(mids, r))
    best = None
    for j in (i - 1, i):
        if 0 <= j < len(mids):
            dist = float(abs(r - mids[j]))
            if best is None or dist < best[1] - table.tolerance:
                best = (j + 1, dist)
    return best


_TABLES: dict = {}


def zero_table_for(two_nu: int, r_max: float, tolerance: float = DEFAULT_TOLERANCE) -> ZeroTable:
    """Process-wide cached table covering at least radius ``r_max``."""
    order = _as_order(two_nu)
    key = (order.two_nu, float(tolerance))
    table = _TABLES.get(key)
    if table is None or table.span < r_max:
        m_max = int(math.ceil(2 * (r_max + 1))) + 4
        if table is not None:
            m_max = max(m_max, 2 * len(table))
        table = build_zero_table(order, m_max, tolerance)
        _TABLES[key] = table
    return table
