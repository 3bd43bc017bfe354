"""Independent reference computations used by the tests.

Nothing here calls into expolab.
"""

import math

import mpmath
import numpy as np


def bessel_series_mp(two_nu, x, dps=60):
    """J_{two_nu/2}(x) from the ascending series in high precision."""
    with mpmath.workdps(dps):
        nu = mpmath.mpf(two_nu) / 2
        x = mpmath.mpf(x)
        h = (x / 2) ** 2
        term = (x / 2) ** nu / mpmath.gamma(nu + 1)
        total = term
        k = 0
        while abs(term) > mpmath.mpf(10) ** (-dps + 5) * max(1, abs(total)):
            k += 1
            term *= -h / (k * (k + nu))
            total += term
        return total


def series_zeros(two_nu, count):
    """Zeros of r -> J_nu(2 pi r) by bisection on the high-precision series."""
    def f(r):
        return bessel_series_mp(two_nu, 2 * mpmath.pi * r)

    out = []
    step = 0.05
    r, fr = step, f(step)
    while len(out) < count:
        r2 = r + step
        fr2 = f(r2)
        if fr * fr2 < 0:
            lo, hi = mpmath.mpf(r), mpmath.mpf(r2)
            flo = fr
            for _ in range(60):
                mid = (lo + hi) / 2
                fm = f(mid)
                if (fm > 0) == (flo > 0):
                    lo, flo = mid, fm
                else:
                    hi = mid
            out.append(float((lo + hi) / 2))
        r, fr = r2, fr2
    return np.array(out)


def tan_zeros(count):
    """Zeros of J_{3/2}(2 pi r): 2 pi r solves tan x = x on (m pi, m pi + pi/2)."""
    def f(x):
        return math.sin(x) - x * math.cos(x)

    out = []
    for m in range(1, count + 1):
        lo, hi = m * math.pi, m * math.pi + math.pi / 2
        left = f(lo) > 0
        for _ in range(200):
            mid = 0.5 * (lo + hi)
            if (f(mid) > 0) == left:
                lo = mid
            else:
                hi = mid
        out.append(0.5 * (lo + hi) / (2 * math.pi))
    return np.array(out)


def cube_quadrature(xi, nodes=48):
    """Tensor Gauss-Legendre quadrature of exp(-2 pi i x.xi) over [0,1]^d."""
    xi = np.asarray(xi, dtype=float)
    x, w = np.polynomial.legendre.leggauss(nodes)
    x, w = 0.5 * (x + 1), 0.5 * w
    grids = np.meshgrid(*([x] * len(xi)), indexing="ij")
    weights = np.prod(np.meshgrid(*([w] * len(xi)), indexing="ij"), axis=0)
    phase = sum(g * t for g, t in zip(grids, xi))
    return complex(np.sum(weights * np.exp(-2j * np.pi * phase)))


def ball_quadrature(xi, nodes=64):
    """Radial quadrature of exp(-2 pi i x.xi) over the unit ball, d = 2 or 3."""
    xi = np.asarray(xi, dtype=float)
    rho = float(np.linalg.norm(xi))
    r, wr = np.polynomial.legendre.leggauss(nodes)
    r, wr = 0.5 * (r + 1), 0.5 * wr
    if len(xi) == 2:
        theta = 2 * np.pi * np.arange(4 * nodes) / (4 * nodes)
        vals = np.exp(-2j * np.pi * rho * np.outer(r, np.cos(theta)))
        return complex(np.sum(wr[:, None] * r[:, None] * vals) * 2 * np.pi / (4 * nodes))
    if len(xi) == 3:
        u, wu = np.polynomial.legendre.leggauss(nodes)
        vals = np.exp(-2j * np.pi * rho * np.outer(r, u))
        return complex(2 * np.pi * np.sum((wr * r * r)[:, None] * wu[None, :] * vals))
    raise ValueError("ball quadrature oracle covers d = 2, 3")
