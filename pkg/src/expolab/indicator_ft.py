"""Fourier transforms of the indicators of the unit cube and the unit ball.

Convention: ``ft(xi) = int_Omega exp(-2 pi i x . xi) dx``.  Both domains
are symmetric up to translation, so |ft| and its zero set do not depend on
the sign in the exponent; every zero test in the package goes through the
magnitude.

Cube: Q_d = [0, 1]^d, a product of one-dimensional factors.
Ball: unit ball B_d, ``ft(xi) = |xi|^(-d/2) J_{d/2}(2 pi |xi|)``.
"""

from __future__ import annotations

import csv
import enum
import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .bessel import ZeroTable, jv
from .errors import DimensionMismatchError

INTEGRALITY_TOL = 1e-9
HEADROOM = 1.5
HERZ_GRID = (5.0, 200.0, 0.1)
ENVELOPE_GRID = (0.0, 200.0, 0.01)


class DomainKind(str, enum.Enum):
    BALL = "ball"
    CUBE = "cube"


@dataclass(frozen=True)
class DomainSpec:
    kind: DomainKind
    dim: int

    def __post_init__(self):
        object.__setattr__(self, "kind", DomainKind(self.kind))
        if int(self.dim) != self.dim or self.dim < 2:
            raise ValueError(f"dimension must be an integer >= 2, got {self.dim}")
        object.__setattr__(self, "dim", int(self.dim))

    @classmethod
    def ball(cls, d: int) -> "DomainSpec":
        return cls(DomainKind.BALL, d)

    @classmethod
    def cube(cls, d: int) -> "DomainSpec":
        return cls(DomainKind.CUBE, d)


def _frequency(d: int, xi) -> np.ndarray:
    xi = np.asarray(xi, dtype=float).reshape(-1)
    if xi.shape[0] != d:
        raise DimensionMismatchError(f"expected {d} coordinates, got {xi.shape[0]}")
    return xi


def is_nonzero_integer(t: float, tol: float = INTEGRALITY_TOL) -> bool:
    k = round(t)
    return k != 0 and abs(t - k) <= tol


def ball_volume(d: int) -> float:
    """pi^(d/2) / Gamma(d/2 + 1) via the recurrence V_d = 2 pi V_{d-2} / d."""
    vol = 1.0 if d % 2 == 0 else 2.0
    for k in range(2 if d % 2 == 0 else 3, d + 1, 2):
        vol *= 2.0 * math.pi / k
    return vol


def ft_cube(d: int, xi, integrality_tol: float = INTEGRALITY_TOL) -> complex:
    """Transform of the indicator of [0,1]^d at ``xi``.

    Returns an exact ``0j`` as soon as one coordinate is a nonzero integer
    within ``integrality_tol``.
    """
    xi = _frequency(d, xi)
    value = 1.0 + 0.0j
    for t in xi:
        if t == 0.0:
            continue
        if is_nonzero_integer(t, integrality_tol):
            return 0j
        # int_0^1 e^{-2 pi i x t} dx = e^{-i pi t} sin(pi t) / (pi t)
        value *= complex(math.cos(math.pi * t), -math.sin(math.pi * t)) * float(np.sinc(t))
    return value


def ft_ball_radial(d: int, rho) -> np.ndarray:
    """Vectorised |xi|^(-d/2) J_{d/2}(2 pi |xi|) with the volume at rho = 0."""
    rho = np.asarray(rho, dtype=float)
    out = np.full(rho.shape, ball_volume(d))
    nz = rho > 0
    if nz.any():
        r = rho[nz]
        out[nz] = jv(d, 2.0 * math.pi * r) * r ** (-d / 2)
    return out


def ft_ball(d: int, xi, table: ZeroTable | None = None) -> float:
    """Transform of the indicator of the unit ball at ``xi`` (real-valued).

    With a zero table, returns an exact 0.0 when |xi| lies inside one of
    its enclosures.
    """
    xi = _frequency(d, xi)
    rho = float(np.linalg.norm(xi))
    if table is not None:
        if table.order.two_nu != d:
            raise DimensionMismatchError(f"table of order {table.order.two_nu}/2 used for d={d}")
        if rho > 0 and table.contains(rho):
            return 0.0
    return float(ft_ball_radial(d, np.array([rho]))[0])


def _herz_main(d: int, rho: np.ndarray) -> np.ndarray:
    # kappa = 1 for the unit sphere and rho*(xi) = |xi|; the 1/pi comes from
    # the amplitude sqrt(2 / (pi x)) of J_nu at x = 2 pi rho.
    return np.sin(2 * math.pi * (rho - (d - 1) / 8)) * rho ** (-(d + 1) / 2) / math.pi


def herz_grid(start: float, stop: float, step: float) -> np.ndarray:
    n = int(round((stop - start) / step))
    return start + step * np.arange(n + 1)


@lru_cache(maxsize=None)
def herz_constant(d: int) -> float:
    """C_K: headroom times the largest scaled remainder on the calibration grid."""
    rho = herz_grid(*HERZ_GRID)
    rem = np.abs(ft_ball_radial(d, rho) - _herz_main(d, rho)) * rho ** ((d + 3) / 2)
    return HEADROOM * float(rem.max())


def ft_ball_herz(d: int, xi) -> tuple[float, float]:
    """Main oscillatory term of the ball transform and a remainder bound."""
    xi = _frequency(d, xi)
    rho = float(np.linalg.norm(xi))
    if rho < 1:
        raise ValueError("the Herz expansion is only used for |xi| >= 1")
    main = float(_herz_main(d, np.array([rho]))[0])
    return main, herz_constant(d) * rho ** (-(d + 3) / 2)


@lru_cache(maxsize=None)
def envelope_constant(d: int) -> float:
    """C with |ft_ball(xi)| <= C (1 + |xi|)^(-(d+1)/2), calibrated on a grid.

    Past the grid the transform is dominated by the Herz main term, whose
    amplitude 1/pi is far below the constant (which is at least the volume).
    """
    rho = herz_grid(*ENVELOPE_GRID)
    scaled = np.abs(ft_ball_radial(d, rho)) * (1 + rho) ** ((d + 1) / 2)
    return HEADROOM * float(scaled.max())


def decay_envelope(d: int, xi) -> float:
    rho = float(np.linalg.norm(np.asarray(xi, dtype=float)))
    return envelope_constant(d) * (1 + rho) ** (-(d + 1) / 2)


def envelope_samples(d: int, radii) -> list[tuple[float, float, float]]:
    """Rows (xi_norm, ft_value, envelope) along a ray, for plotting."""
    radii = np.asarray(radii, dtype=float)
    ft = ft_ball_radial(d, radii)
    env = envelope_constant(d) * (1 + radii) ** (-(d + 1) / 2)
    return [(float(r), float(f), float(e)) for r, f, e in zip(radii, ft, env)]


def write_envelope_csv(path_or_file, d: int, radii) -> None:
    close = isinstance(path_or_file, str)
    fh = open(path_or_file, "w", newline="") if close else path_or_file
    try:
        w = csv.writer(fh)
        w.writerow(["xi_norm", "ft_value", "envelope"])
        for row in envelope_samples(d, radii):
            w.writerow([f"{v:.17g}" for v in row])
    finally:
        if close:
            fh.close()


def ft_indicator(domain: DomainSpec, xi, table: ZeroTable | None = None) -> complex:
    if domain.kind is DomainKind.CUBE:
        return ft_cube(domain.dim, xi)
    return complex(ft_ball(domain.dim, xi, table))
