"""Independent checks: the three-term Frobenius recurrence at z = 0 and the
pointwise residual of the confluent Heun equation."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .che import CheParams
from .ghf import SeriesCoefficients


class DomainError(ValueError):
    pass


class ResonanceError(ValueError):
    pass


@dataclass
class FrobeniusExpansion:
    params: CheParams
    coeffs: SeriesCoefficients
    mu: complex = 0j
    convergence_radius: float = 1.0


def recurrence_coefficients(p: CheParams, n: int):
    """R_n, Q_n, P_n of the exponent-0 recurrence R_n c_n + Q_{n-1} c_{n-1} + P_{n-2} c_{n-2} = 0."""
    g, d, eps, a, q = p.gamma, p.delta, p.epsilon, p.alpha, p.q
    R = (g - 1 + n) * n
    Q = q - (g + d - eps - 1 + n) * n
    P = -(a + eps * n)
    return R, Q, P


def frobenius_coefficients(p: CheParams, count: int) -> FrobeniusExpansion:
    if p.q is None:
        raise ValueError("accessory parameter q must be set")
    c = np.zeros(count + 1, dtype=complex)
    c[0] = 1.0
    for n in range(1, count + 1):
        R = recurrence_coefficients(p, n)[0]
        if abs(R) == 0:
            raise ResonanceError(f"R_{n} = 0: gamma={p.gamma} is a non-positive integer")
        Qm1 = recurrence_coefficients(p, n - 1)[1]
        acc = Qm1 * c[n - 1]
        if n >= 2:
            acc += recurrence_coefficients(p, n - 2)[2] * c[n - 2]
        c[n] = -acc / R
    return FrobeniusExpansion(p, SeriesCoefficients(c, count, float(abs(c[-1]))))


def recurrence_residuals(f: FrobeniusExpansion) -> np.ndarray:
    """|R_n c_n + Q_{n-1} c_{n-1} + P_{n-2} c_{n-2}| over the sum of term magnitudes."""
    c = f.coeffs.coeffs
    out = np.zeros(c.size)
    for n in range(1, c.size):
        R = recurrence_coefficients(f.params, n)[0]
        terms = [R * c[n], recurrence_coefficients(f.params, n - 1)[1] * c[n - 1]]
        if n >= 2:
            terms.append(recurrence_coefficients(f.params, n - 2)[2] * c[n - 2])
        scale = sum(abs(t) for t in terms)
        out[n] = abs(sum(terms)) / scale if scale else 0.0
    return out


def frobenius_eval(f: FrobeniusExpansion, z: complex, tol: float = 1e-12) -> complex:
    """Partial sum; raises if |z| > 0.9 or the geometric tail estimate exceeds ``tol``."""
    z = complex(z)
    if abs(z) > 0.9 * f.convergence_radius:
        raise DomainError(f"|z|={abs(z):.3g} outside the accuracy disc |z| <= 0.9")
    c = f.coeffs.coeffs
    total = np.polynomial.polynomial.polyval(z, c)
    r = abs(z)
    M = c.size - 1
    # Bound the tail by the largest of the last few terms, continued geometrically.
    last = max(abs(c[k]) * r**k for k in range(max(0, M - 4), M + 1))
    tail = last * r / (1 - r) if r else 0.0
    if tail > tol * max(1.0, abs(total)):
        raise DomainError(f"truncation tail {tail:.2e} exceeds tolerance; use more terms")
    return complex(total)


def ode_residual(u: complex, du: complex, d2u: complex, p: CheParams, z: complex) -> complex:
    """u'' + (g/z + d/(z-1) + eps) u' + (alpha z - q)/(z(z-1)) u, divided by
    max(|u''|, |u'|, |u|, 1)."""
    z = complex(z)
    if z == 0 or z == 1:
        raise DomainError(f"z={z} is a singular point")
    r = (d2u + (p.gamma / z + p.delta / (z - 1) + p.epsilon) * du
         + (p.alpha * z - p.q) / (z * (z - 1)) * u)
    return r / max(abs(d2u), abs(du), abs(u), 1.0)
