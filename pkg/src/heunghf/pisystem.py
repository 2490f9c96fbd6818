"""Accessory-parameter spectrum of the confluent Heun equation with delta = -N.

The auxiliary parameters e_1..e_N are carried as their elementary symmetric
values sigma_1..sigma_N, so that

    L_j(n) = prod_k (e_k - j + n) = sum_i sigma_i (n - j)^(N - i),  sigma_0 = 1.

The compatibility polynomial

    Pi(n) = (alpha + eps (n-1)) L_0(n) + Q(n) L_1(n) - (n-1)(gamma-2+n) L_2(n),
    Q(n)  = -q + (n-1)(n-2+gamma+delta-eps),

has degree N in n when delta = -N, so it vanishes identically iff it
vanishes at n = 0..N.  For fixed q those N+1 conditions are linear in sigma;
the determinant of the augmented system is a degree-(N+1) polynomial in q.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence

import numpy as np

from .che import CheParams, nearest_integer
from .poly import Poly, cluster_roots, interpolate_poly, roots_of_poly

CONSISTENCY_TOL = 1e-8
HAZARD_TOL = 1e-7


class StructuralError(RuntimeError):
    """The accessory polynomial came out with the wrong degree."""


@dataclass
class RootSolution:
    q: complex
    sigma: np.ndarray
    e: np.ndarray
    multiplicity: int = 1
    residual: float = 0.0
    flags: dict = field(default_factory=dict)

    @property
    def valid(self) -> bool:
        return not (
            self.flags.get("denominator_hazard")
            or self.flags.get("degenerate")
            or self.residual > CONSISTENCY_TOL
        )


@dataclass
class AccessorySpectrum:
    n_value: int
    params: CheParams
    q_poly: Poly
    roots: list[RootSolution]

    @property
    def valid_roots(self) -> list[RootSolution]:
        return [r for r in self.roots if r.valid]


def _n_of(p: CheParams) -> int:
    d = nearest_integer(p.delta)
    if d is None or d > 0:
        raise ValueError(f"delta must be a non-positive integer, got {p.delta}")
    return -d


def _L(sigma: np.ndarray, x):
    """sum_i sigma_i x^(N-i) with sigma_0 = 1."""
    acc = 1.0 + 0j
    for s in sigma:
        acc = acc * x + s
    return acc


def _pi_terms(p: CheParams, q: complex, sigma, n):
    g, d, eps, a = p.gamma, p.delta, p.epsilon, p.alpha
    Q = -q + (n - 1) * (n - 2 + g + d - eps)
    return (
        (a + eps * (n - 1)) * _L(sigma, n),
        Q * _L(sigma, n - 1),
        -(n - 1) * (g - 2 + n) * _L(sigma, n - 2),
    )


def evaluate_pi(p: CheParams, q: complex, sigma: Sequence[complex], n: complex,
                n_value: Optional[int] = None) -> complex:
    """Pi(n) for the given q and symmetric values ``sigma``.

    ``delta`` is taken from ``p`` as is, so non-integer probes are allowed.
    """
    sigma = np.asarray(sigma, dtype=complex)
    if n_value is not None and sigma.size != n_value:
        raise ValueError(f"sigma has length {sigma.size}, expected {n_value}")
    return sum(_pi_terms(p, q, sigma, n))


def _system_parts(p: CheParams, n_value: int, dtype=complex):
    """Split the node conditions as (M0 + q M1) sigma = r0 + q r1."""
    g, d, eps, a = (np.asarray(v, dtype=dtype) for v in (p.gamma, p.delta, p.epsilon, p.alpha))
    N = n_value
    nodes = np.arange(N + 1)
    powers = np.arange(N - 1, -1, -1)  # exponent of sigma_1..sigma_N
    M0 = np.empty((N + 1, N), dtype=dtype)
    M1 = np.empty((N + 1, N), dtype=dtype)
    r0 = np.empty(N + 1, dtype=dtype)
    r1 = np.empty(N + 1, dtype=dtype)
    for j, n in enumerate(nodes):
        c0 = a + eps * (n - 1)
        cq = (n - 1) * (n - 2 + g + d - eps)
        c2 = -(n - 1) * (g - 2 + n)
        M0[j] = c0 * n**powers + cq * (n - 1) ** powers + c2 * (n - 2) ** powers
        M1[j] = -((n - 1) ** powers)
        r0[j] = -(c0 * n**N + cq * (n - 1) ** N + c2 * (n - 2) ** N)
        r1[j] = (n - 1) ** N
    return M0, M1, r0, r1


def sigma_linear_system(p: CheParams, q: complex, n_value: Optional[int] = None):
    """The (N+1) x N matrix and right-hand side of the node conditions at fixed q."""
    N = _n_of(p) if n_value is None else n_value
    M0, M1, r0, r1 = _system_parts(p, N)
    return M0 + q * M1, r0 + q * r1


def _augmented(parts, q):
    M0, M1, r0, r1 = parts
    return np.column_stack([M0 + q * M1, -(r0 + q * r1)])


def interpolation_radius(p: CheParams) -> float:
    return max(1.0, abs(p.alpha), abs(p.gamma), abs(p.epsilon))


def accessory_polynomial(p: CheParams, n_value: Optional[int] = None) -> Poly:
    """Monic degree-(N+1) polynomial whose roots are the admissible q."""
    N = _n_of(p) if n_value is None else n_value
    if N == 0:
        return Poly([-p.alpha, 1.0])
    parts = _system_parts(p, N)
    r = interpolation_radius(p)
    nodes = r * np.exp(2j * np.pi * np.arange(N + 2) / (N + 2))
    values = [np.linalg.det(_augmented(parts, qn)) for qn in nodes]
    poly = interpolate_poly(nodes, values)
    c = np.zeros(N + 2, dtype=complex)
    c[: poly.coeffs.size] = poly.coeffs
    weighted = np.abs(c) * r ** np.arange(N + 2)
    if weighted[-1] <= 1e-10 * weighted.max():
        raise StructuralError(
            f"accessory polynomial has degree < {N + 1} (leading term "
            f"{weighted[-1]:.3e} vs scale {weighted.max():.3e})"
        )
    return Poly(c / c[-1])


def _newton_polish(p, N, q, sigma, max_iter=10):
    # Residuals in extended precision (where the platform has it), so the
    # iteration refines past the conditioning of the monomial sigma basis.
    M0, M1, r0, r1 = _system_parts(p, N, dtype=np.clongdouble)
    x = np.concatenate([[q], sigma]).astype(np.clongdouble)
    for _ in range(max_iter):
        q, s = x[0], x[1:]
        F = (M0 + q * M1) @ s - (r0 + q * r1)
        J = np.column_stack([M1 @ s - r1, M0 + q * M1]).astype(complex)
        # Column equilibration of the Jacobian.
        cs = np.linalg.norm(J, axis=0)
        cs[cs == 0] = 1.0
        try:
            step = np.linalg.solve(J / cs, F.astype(complex)) / cs
        except np.linalg.LinAlgError:
            break
        x = x - step
        if np.abs(step).max() <= 1e-17 * max(1.0, float(np.abs(x).max())):
            break
    x = x.astype(complex)
    return x[0], x[1:]


def _node_residual(p, q, sigma, N):
    worst = 0.0
    for n in range(N + 1):
        t = _pi_terms(p, q, sigma, n)
        scale = max(sum(abs(v) for v in t), 1.0)
        worst = max(worst, abs(sum(t)) / scale)
    return worst


def _hazards(p: CheParams, e: np.ndarray) -> dict:
    flags = {}
    bad = [complex(x) for x in e if (k := nearest_integer(x, HAZARD_TOL)) is not None and k <= 0]
    if bad:
        flags["denominator_hazard"] = bad
    coinc = [complex(x) for x in e if abs(p.epsilon * x - p.alpha) <= HAZARD_TOL * max(1.0, abs(p.alpha))]
    if coinc:
        flags["coincidence_hazard"] = coinc
    return flags


def e_from_sigma(sigma: Sequence[complex]) -> np.ndarray:
    """Roots of prod_k (t - e_k) = sum_j (-1)^j sigma_j t^(N-j)."""
    sigma = np.asarray(sigma, dtype=complex)
    if sigma.size == 0:
        return np.zeros(0, dtype=complex)
    signs = (-1.0) ** np.arange(1, sigma.size + 1)
    desc = np.concatenate([[1.0], signs * sigma])
    return roots_of_poly(Poly(desc[::-1]))


def solve_auxiliary_parameters(p: CheParams, q_root: complex,
                               n_value: Optional[int] = None,
                               polish: bool = True,
                               multiplicity: int = 1) -> RootSolution:
    """Recover sigma and e_1..e_N for an accessory root ``q_root``.

    The overdetermined system is solved by least squares; with ``polish``
    the pair (q, sigma) is then refined by Newton on the square bilinear
    system, which is well posed for simple roots.
    """
    N = _n_of(p) if n_value is None else n_value
    q = complex(q_root)
    if N == 0:
        res = abs(q - p.alpha) / max(1.0, abs(p.alpha))
        return RootSolution(q, np.zeros(0, complex), np.zeros(0, complex), multiplicity, res)
    parts = _system_parts(p, N)
    M0, M1, r0, r1 = parts
    M, rhs = M0 + q * M1, r0 + q * r1
    sigma = np.linalg.lstsq(M, rhs, rcond=None)[0]
    flags = {}
    sv = np.linalg.svd(M, compute_uv=False)
    if sv[-1] <= 1e-10 * sv[0]:
        flags["degenerate"] = True
        flags["singular_values"] = sv.tolist()
    if polish and multiplicity == 1 and not flags:
        q, sigma = _newton_polish(p, N, q, sigma)
    e = e_from_sigma(sigma)
    flags.update(_hazards(p, e))
    if multiplicity > 1:
        flags["multiplicity"] = multiplicity
    res = _node_residual(p, q, sigma, N)
    return RootSolution(q, sigma, e, multiplicity, res, flags)


def accessory_spectrum(p: CheParams, n_value: Optional[int] = None) -> AccessorySpectrum:
    N = _n_of(p) if n_value is None else n_value
    qpoly = accessory_polynomial(p, N)
    found = []
    for q, mult in cluster_roots(roots_of_poly(qpoly)):
        found.append(solve_auxiliary_parameters(p, q, N, multiplicity=mult))
    found.sort(key=lambda r: (round(r.q.real, 12), round(r.q.imag, 12)))
    return AccessorySpectrum(N, p, qpoly, found)


def consistency_relations(p: CheParams, q: complex, e: Sequence[complex]):
    """Residuals of the three closed-form identities tying q to e_1..e_N.

    1. q = alpha * prod (1 + e_k) / e_k
    2. prod e_k (1 - gamma + e_k) / (eps e_k - alpha) = 1   (empirical)
    3. q = alpha - sum_n (e_n + n - gamma - eps)

    Each is |lhs - rhs| / max(1, |rhs|); ``None`` where a division fails.
    """
    e = np.asarray(e, dtype=complex)
    g, eps, a = p.gamma, p.epsilon, p.alpha
    q = complex(q)

    def rel(lhs, rhs):
        return float(abs(lhs - rhs) / max(1.0, abs(rhs)))

    if np.any(e == 0):
        r1 = None
    else:
        r1 = rel(q, a * np.prod((1 + e) / e))
    den = eps * e - a
    if np.any(np.abs(den) <= HAZARD_TOL * max(1.0, abs(a))):
        r2 = None
    else:
        r2 = rel(np.prod(e * (1 - g + e) / den), 1.0)
    idx = np.arange(1, e.size + 1)
    r3 = rel(q, a - np.sum(e + idx - g - eps))
    return r1, r2, r3


# Closed-form accessory conditions for N = 0..3, for eps != 0 and
# eps = 0.  Used as golden references; they match the determinant up to a
# constant factor.

def _golden_eps(N: int, g, eps, a) -> Callable[[complex], complex]:
    def quad(q, shift):
        return q**2 - (2 * a + g - shift + eps) * q + a * (a + g + eps)

    if N == 0:
        return lambda q: q - a
    if N == 1:
        return lambda q: quad(q, 1)
    if N == 2:
        return lambda q: 2 * (q - a) * (a + eps) + (q - a - 2 * (g - 1 + eps)) * quad(q, 2)
    if N == 3:
        return lambda q: (
            3 * (a + 2 * eps) * quad(q, 3)
            + (q - a - 3 * (g - 1 + eps))
            * (4 * (q - a) * (a + eps) + (q - a - 2 * (g - 2 + eps)) * quad(q, 3))
        )
    raise ValueError("closed forms exist for N <= 3 only")


def _golden_eps0(N: int, g, a) -> Callable[[complex], complex]:
    def quad(q, shift):
        return q**2 - (2 * a + g - shift) * q + a * (a + g)

    if N == 0:
        return lambda q: q - a
    if N == 1:
        return lambda q: quad(q, 1)
    if N == 2:
        return lambda q: 2 * (q - a) * a + (2 + q - a - 2 * g) * quad(q, 2)
    if N == 3:
        return lambda q: (
            3 * a * quad(q, 3)
            + (q - a - 3 * (g - 1))
            * (4 * (q - a) * a + (q - a - 2 * (g - 2)) * quad(q, 3))
        )
    raise ValueError("closed forms exist for N <= 3 only")


def golden_accessory_condition(p: CheParams, n_value: Optional[int] = None) -> Callable[[complex], complex]:
    N = _n_of(p) if n_value is None else n_value
    if p.epsilon == 0:
        return _golden_eps0(N, p.gamma, p.alpha)
    return _golden_eps(N, p.gamma, p.epsilon, p.alpha)


def golden_ratio_spread(p: CheParams, qpoly: Poly, probes: Sequence[complex],
                        n_value: Optional[int] = None) -> float:
    """Relative spread of qpoly(q) / golden(q) over the probe points."""
    f = golden_accessory_condition(p, n_value)
    ratios = np.array([qpoly(q) / f(q) for q in probes])
    return float(np.abs(ratios - ratios[0]).max() / abs(ratios[0]))
