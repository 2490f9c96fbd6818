"""Generalized confluent hypergeometric solutions: descriptors, coefficients,
adaptive evaluation, and the construction pipeline from CHE parameters."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from . import che
from .che import CaseKind, CheParams, classify, nearest_integer
from .pisystem import RootSolution, accessory_spectrum, solve_auxiliary_parameters

SERIES_CAP = 10_000
CANCELLATION_LIMIT = 1e4


class UnsupportedCaseError(ValueError):
    def __init__(self, message: str, kind: CaseKind = CaseKind.UNSUPPORTED):
        super().__init__(message)
        self.kind = kind


class NotOnSpectrumError(ValueError):
    pass


class SeriesCapError(RuntimeError):
    def __init__(self, message: str, partial):
        super().__init__(message)
        self.partial = partial


@dataclass(frozen=True)
class GhfSolution:
    """u(z) = (z - prefactor_center)^prefactor_exponent * F(z - base_point),

    F(x) = sum_n c_n x^n with c_0 = 1 and
    c_n / c_{n-1} = scale * prod(a_k - 1 + n) / (n * prod(b_k - 1 + n)).
    """

    numerator_params: tuple
    denominator_params: tuple
    scale: complex
    base_point: complex = 0j
    prefactor_exponent: complex = 0j
    prefactor_center: complex = 1 + 0j

    def __post_init__(self):
        object.__setattr__(self, "numerator_params", tuple(complex(a) for a in self.numerator_params))
        object.__setattr__(self, "denominator_params", tuple(complex(b) for b in self.denominator_params))
        for name in ("scale", "base_point", "prefactor_exponent", "prefactor_center"):
            object.__setattr__(self, name, complex(getattr(self, name)))

    @property
    def shape(self) -> tuple[int, int]:
        return len(self.numerator_params), len(self.denominator_params)

    def check(self):
        for b in self.denominator_params:
            k = nearest_integer(b, 1e-12)
            if k is not None and k <= 0:
                raise ValueError(f"denominator parameter {b} is zero or a negative integer")

    def ratio(self, n: int) -> complex:
        """c_n / c_{n-1}."""
        num = np.prod([a - 1 + n for a in self.numerator_params]) if self.numerator_params else 1.0
        den = np.prod([b - 1 + n for b in self.denominator_params])
        return complex(self.scale * num / (n * den))


@dataclass
class SeriesCoefficients:
    coeffs: np.ndarray
    truncation_order: int
    tail_estimate: float = 0.0


def ghf_coefficients(sol: GhfSolution, count: int, radius: float = 1.0) -> SeriesCoefficients:
    """c_0..c_count; ``tail_estimate`` is |c_count| radius^count."""
    sol.check()
    c = np.empty(count + 1, dtype=complex)
    c[0] = 1.0
    for n in range(1, count + 1):
        c[n] = c[n - 1] * sol.ratio(n)
    return SeriesCoefficients(c, count, float(abs(c[-1]) * radius**count))


def _prefactor(sol: GhfSolution, z: complex):
    k = sol.prefactor_exponent
    if k == 0:
        return 1.0, 0.0, 0.0
    w = z - sol.prefactor_center
    ki = nearest_integer(k, 0.0)
    if ki is not None:
        return w**ki, ki * w ** (ki - 1), ki * (ki - 1) * w ** (ki - 2)
    return w**k, k * w ** (k - 1), k * (k - 1) * w ** (k - 2)


def _sum_series(sol: GhfSolution, x, rel_tol: float, cap: int, dtype):
    one = dtype(1)
    num = [dtype(a) - 1 for a in sol.numerator_params]
    den = [dtype(b) - 1 for b in sol.denominator_params]
    scale, x = dtype(sol.scale), dtype(x)
    s0 = s1 = s2 = dtype(0)
    c = xp = one
    n_min = 2 * abs(complex(sol.scale) * complex(x)) + 2
    quiet = 0
    peak = 0.0
    for n in range(cap + 1):
        if n > 0:
            r = scale / n
            for a in num:
                r = r * (a + n)
            for b in den:
                r = r / (b + n)
            c = c * r
            xp = xp * x
        t0 = c * xp
        t1 = n * t0 / x
        t2 = (n - 1) * t1 / x
        s0 += t0
        s1 += t1
        s2 += t2
        peak = max(peak, float(abs(t0)))
        small = (
            abs(t0) <= rel_tol * abs(s0)
            and abs(t1) <= rel_tol * abs(s1)
            and abs(t2) <= rel_tol * abs(s2)
        ) or t0 == 0
        quiet = quiet + 1 if small else 0
        if quiet >= 2 and n >= n_min:
            return (complex(s0), complex(s1), complex(s2)), peak
    raise SeriesCapError(f"series not converged after {cap} terms at x={complex(x)}",
                         (complex(s0), complex(s1), complex(s2)))


def series_eval(sol: GhfSolution, x: complex, rel_tol: float = 1e-16, cap: int = SERIES_CAP):
    """F(x), F'(x), F''(x) by summing until two consecutive terms of all three
    sums are negligible and the term ratio is past its peak.

    When the largest term exceeds the sum by more than CANCELLATION_LIMIT the
    sum is redone in extended precision.
    """
    sol.check()
    x = complex(x)
    if x == 0:
        c1 = sol.ratio(1)
        return 1.0 + 0j, c1, 2 * c1 * sol.ratio(2)
    sums, peak = _sum_series(sol, x, rel_tol, cap, complex)
    if peak > CANCELLATION_LIMIT * max(abs(sums[0]), 1e-300):
        sums, _ = _sum_series(sol, x, rel_tol, cap, np.clongdouble)
    return sums


def ghf_eval(sol: GhfSolution, z: complex, rel_tol: float = 1e-16, cap: int = SERIES_CAP):
    """Value, first and second derivative of the full u(z), prefactor included."""
    z = complex(z)
    F, F1, F2 = series_eval(sol, z - sol.base_point, rel_tol, cap)
    P, P1, P2 = _prefactor(sol, z)
    return P * F, P1 * F + P * F1, P2 * F + 2 * P1 * F1 + P * F2


@dataclass
class ConstructedSolution:
    """One accessory root of an input equation with its series solution.

    ``canonical`` is the delta = -N problem actually solved and
    ``canonical_ghf`` the same series in that problem's own variable
    (base point 0, no prefactor); ``ghf`` is mapped back to the input z.
    """

    params: CheParams
    q: complex
    ghf: GhfSolution
    canonical: CheParams
    canonical_ghf: GhfSolution
    root: RootSolution
    case: che.CaseClass
    steps: tuple = ()
    flags: dict = field(default_factory=dict)

    @property
    def e(self) -> np.ndarray:
        return self.root.e

    @property
    def solved_params(self) -> CheParams:
        return self.params.with_q(self.q)


def canonical_ghf(p: CheParams, e: Sequence[complex]) -> GhfSolution:
    """The series solving a delta = -N equation at its origin."""
    e = [complex(x) for x in e]
    num = [1 + x for x in e]
    den = e + [p.gamma]
    if p.epsilon == 0:
        return GhfSolution(num, den, -p.alpha)
    return GhfSolution(num + [p.alpha / p.epsilon], den, -p.epsilon)


def _reduce(p: CheParams, case: che.CaseClass):
    """Map ``p`` to its delta = -N form; returns (params, steps, exponent)."""
    cur = CheParams(p.gamma, p.delta, p.epsilon, p.alpha)
    steps = []
    k = 0
    if case.kind is CaseKind.NEEDS_SWAP:
        cur = che.swap_singularities(cur)
        steps.append("swap")
    d = nearest_integer(cur.delta, case.int_tol)
    if d is not None and d >= 2:
        cur, k = che.shift_delta_exponent(cur)
        k = int(round(k.real))
        steps.append("shift")
    eps = 0j if abs(cur.epsilon) <= case.int_tol else cur.epsilon
    cur = CheParams(cur.gamma, -case.n_value, eps, cur.alpha)
    return cur, tuple(steps), k


def _map_back_q(p: CheParams, steps, k: int, q_canon: complex) -> complex:
    q = q_canon
    if "shift" in steps:
        # Undo q' = q - (1 - delta) gamma of the shifted equation.
        g = p.delta if "swap" in steps else p.gamma
        q = q + k * g
    if "swap" in steps:
        q = q + p.alpha
    return q


def _map_back_ghf(base: GhfSolution, steps, k: int) -> GhfSolution:
    if "swap" in steps:
        # s = 1 - z: F(x_s) with x_s = -(z - 1); prefactor (s - 1)^k = (-1)^k z^k.
        return GhfSolution(base.numerator_params, base.denominator_params, -base.scale,
                           base_point=1, prefactor_exponent=k, prefactor_center=0)
    return GhfSolution(base.numerator_params, base.denominator_params, base.scale,
                       base_point=0, prefactor_exponent=k, prefactor_center=1)


def construct_solutions(p: CheParams, int_tol: float = che.DEFAULT_INT_TOL,
                        include_invalid: bool = False,
                        q_tol: float = 1e-8) -> list[ConstructedSolution]:
    """All single-series solutions of ``p`` over its accessory spectrum.

    When ``p.q`` is given only the matching root is returned, and
    :class:`NotOnSpectrumError` is raised if there is none.
    """
    case = classify(p, int_tol)
    if case.kind in (CaseKind.EXCEPTIONAL, CaseKind.UNSUPPORTED):
        raise UnsupportedCaseError(
            "no generalized hypergeometric construction: "
            + ("delta = 1 with no integer gamma != 1 is the exceptional case"
               if case.kind is CaseKind.EXCEPTIONAL
               else "neither delta nor gamma is a usable integer"),
            case.kind,
        )
    canon, steps, k = _reduce(p, case)
    N = case.n_value
    if canon.epsilon == 0 and canon.alpha == 0 and N > 0:
        raise UnsupportedCaseError("eps = alpha = 0 reduces to the Gauss equation")
    g = nearest_integer(canon.gamma, int_tol)
    gamma_hazard = g is not None and g <= 0
    if N == 0:
        roots = [solve_auxiliary_parameters(canon, canon.alpha, 0)]
    else:
        roots = accessory_spectrum(canon, N).roots
    alpha_zero = canon.epsilon != 0 and abs(canon.alpha) <= int_tol and N > 0
    out = []
    for root in roots:
        if alpha_zero and abs(root.q) <= q_tol:
            # alpha/eps = 0 terminates the series: u = 1 solves at q = 0, while
            # the auxiliary parameters are 0/0.
            root = RootSolution(0j, np.zeros(0, complex), np.zeros(0, complex),
                                root.multiplicity, 0.0, {"terminating": True})
        flags = dict(root.flags)
        if gamma_hazard:
            flags["gamma_hazard"] = complex(canon.gamma)
        ok = root.valid and not gamma_hazard
        if not (ok or include_invalid):
            continue
        base = canonical_ghf(canon, root.e)
        q = _map_back_q(p, steps, k, root.q)
        flags["valid"] = ok
        out.append(ConstructedSolution(p, q, _map_back_ghf(base, steps, k), canon.with_q(root.q),
                                       base, root, case, steps, flags))
    if p.q is not None:
        out = [s for s in out if abs(s.q - p.q) <= q_tol * max(1.0, abs(p.q))]
        if not out:
            raise NotOnSpectrumError(f"q={p.q} is not on the accessory spectrum")
    return out
