"""Independent oracles for expected values.

Each helper computes its quantity by a route disjoint from the library path it
checks: interpolation instead of polynomial matrix products, dense banded
solves instead of Weyl seeds, plain numpy products instead of scaled scans.
"""

from __future__ import annotations

import cmath
import math

import numpy as np
from scipy.linalg import solve_banded

from jbv import coefficient_arrays, discriminant_value, spectral_bracket


def interp_discriminant_coeffs(P) -> np.ndarray:
    """Monomial coefficients from trace samples at q+1 Chebyshev nodes."""
    lo, hi = spectral_bracket(P)
    lo, hi = lo - 0.5, hi + 0.5
    q = P.q
    nodes = [0.5 * (lo + hi) + 0.5 * (hi - lo) * math.cos(math.pi * i / q)
             for i in range(q + 1)]
    vand = np.vander(nodes, q + 1, increasing=True)
    vals = [discriminant_value(P, x).real for x in nodes]
    return np.linalg.solve(vand, vals)


def comb2_band_edges(w: float) -> list[float]:
    """Band edges of the period-2 comb block, by the quadratic formula on
    x^2 - w x - 2 = -+2."""
    lo_out = 0.5 * (w - math.sqrt(w * w + 16.0))
    hi_out = 0.5 * (w + math.sqrt(w * w + 16.0))
    return [lo_out, 0.0, w, hi_out]


def free_density(x: float) -> float:
    return math.sqrt(4.0 - x * x) / (2.0 * math.pi)


def free_m(z: complex) -> complex:
    """Weyl function of the free half-line matrix, branch with m ~ -1/z."""
    z = complex(z)
    w = cmath.sqrt(z * z - 4.0)
    if (w.imag > 0.0) != (z.imag > 0.0):
        w = -w
    return 0.5 * (-z + w)


def resolvent_density(aspec, x: float, eps: float = 1e-3, size: int = 10 ** 4) -> float:
    """pi^{-1} Im <e_1, (J_trunc - x - i eps)^{-1} e_1>, extrapolated to eps = 0.

    Richardson on (eps, 2 eps) kills the linear term; band edges leave an
    eps^{3/2} residue, removed by a second exponent-3/2 level over
    (eps, 2 eps, 4 eps).  The median over three base eps values damps the
    oscillatory boundary-reflection error of the finite truncation.
    """
    spec = aspec.as_spec()
    a, b = coefficient_arrays(spec, 1, size + 1)

    def g(e: float) -> float:
        z = x + 1j * e
        ab = np.zeros((3, size), dtype=complex)
        ab[0, 1:] = a[:-1]
        ab[1, :] = b - z
        ab[2, :-1] = a[:-1]
        rhs = np.zeros(size, dtype=complex)
        rhs[0] = 1.0
        sol = solve_banded((1, 1), ab, rhs)
        return sol[0].imag / math.pi

    def richardson(e: float) -> float:
        return 2.0 * g(e) - g(2.0 * e)

    c = 2.0 ** 1.5
    estimates = [(c * richardson(e) - richardson(2.0 * e)) / (c - 1.0)
                 for e in (eps, 1.5 * eps, 2.0 * eps)]
    return sorted(estimates)[1]


def resolvent_m(aspec, z: complex, size: int = 10 ** 4) -> complex:
    """<e_1, (J_trunc - z)^{-1} e_1> by a dense banded solve."""
    spec = aspec.as_spec()
    a, b = coefficient_arrays(spec, 1, size + 1)
    ab = np.zeros((3, size), dtype=complex)
    ab[0, 1:] = a[:-1]
    ab[1, :] = b - z
    ab[2, :-1] = a[:-1]
    rhs = np.zeros(size, dtype=complex)
    rhs[0] = 1.0
    sol = solve_banded((1, 1), ab, rhs)
    return complex(sol[0])


def naive_product(spec, m: int, n: int, x: float) -> np.ndarray:
    """Plain numpy ordered product, no scaling; overflows for long products."""
    a, b = coefficient_arrays(spec, m, n + 1)
    t = np.eye(2)
    for ai, bi in zip(a, b):
        t = np.array([[(x - bi) / ai, -1.0 / ai], [ai, 0.0]]) @ t
    return t


def chebu_sine(n: int, x: float) -> float:
    """sin((n+1)t)/sin(t) with x = 2 cos t, valid for |x| < 2."""
    t = math.acos(0.5 * x)
    return math.sin((n + 1) * t) / math.sin(t)


def free_truncation_eigs(n: int) -> list[float]:
    """Eigenvalues 2 cos(k pi/(n+1)) of the free n-by-n truncation."""
    return sorted(2.0 * math.cos(k * math.pi / (n + 1)) for k in range(1, n + 1))
