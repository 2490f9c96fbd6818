"""Confluent Heun equation parameters, case classification and the two
parameter maps (z -> 1 - z, and the power change at z = 1).

The equation is

    u'' + (gamma/z + delta/(z-1) + epsilon) u' + (alpha z - q)/(z(z-1)) u = 0.
"""

from __future__ import annotations

import cmath
import enum
from dataclasses import dataclass, replace
from typing import Optional

DEFAULT_INT_TOL = 1e-9


@dataclass(frozen=True)
class CheParams:
    gamma: complex
    delta: complex
    epsilon: complex
    alpha: complex
    q: Optional[complex] = None

    def __post_init__(self):
        for name in ("gamma", "delta", "epsilon", "alpha", "q"):
            v = getattr(self, name)
            if v is not None:
                object.__setattr__(self, name, complex(v))

    def with_q(self, q: complex) -> "CheParams":
        return replace(self, q=complex(q))

    @property
    def exponents_at_0(self) -> tuple[complex, complex]:
        return 0j, 1 - self.gamma

    @property
    def exponents_at_1(self) -> tuple[complex, complex]:
        return 0j, 1 - self.delta

    def as_tuple(self):
        return (self.gamma, self.delta, self.epsilon, self.alpha, self.q)


class CaseKind(str, enum.Enum):
    KUMMER = "KUMMER"
    BESSEL = "BESSEL"
    GHF_DELTA = "GHF_DELTA"
    GHF_DELTA_EPS0 = "GHF_DELTA_EPS0"
    NEEDS_DELTA_SHIFT = "NEEDS_DELTA_SHIFT"
    NEEDS_SWAP = "NEEDS_SWAP"
    EXCEPTIONAL = "EXCEPTIONAL"
    UNSUPPORTED = "UNSUPPORTED"


@dataclass(frozen=True)
class CaseClass:
    kind: CaseKind
    n_value: Optional[int]
    int_tol: float


def nearest_integer(x: complex, tol: float = DEFAULT_INT_TOL) -> Optional[int]:
    """The integer within ``tol`` of ``x``, or None."""
    x = complex(x)
    if not (cmath.isfinite(x)):
        return None
    k = round(x.real)
    return int(k) if abs(x - k) <= tol else None


def _is_zero(x: complex, tol: float) -> bool:
    return abs(x) <= tol


def classify(p: CheParams, int_tol: float = DEFAULT_INT_TOL) -> CaseClass:
    """Pick the construction route for ``p``; the delta route wins ties."""
    d = nearest_integer(p.delta, int_tol)
    eps0 = _is_zero(p.epsilon, int_tol)
    if d is not None and d <= 0:
        n = -d
        if n == 0:
            kind = CaseKind.BESSEL if eps0 else CaseKind.KUMMER
        else:
            kind = CaseKind.GHF_DELTA_EPS0 if eps0 else CaseKind.GHF_DELTA
        return CaseClass(kind, n, int_tol)
    if d is not None and d >= 2:
        return CaseClass(CaseKind.NEEDS_DELTA_SHIFT, d - 2, int_tol)
    g = nearest_integer(p.gamma, int_tol)
    if g is not None and g != 1:
        # N counts the auxiliary parameters after the swap (and shift if g >= 2).
        n = -g if g <= 0 else g - 2
        return CaseClass(CaseKind.NEEDS_SWAP, n, int_tol)
    if d == 1:
        return CaseClass(CaseKind.EXCEPTIONAL, None, int_tol)
    return CaseClass(CaseKind.UNSUPPORTED, None, int_tol)


def swap_singularities(p: CheParams) -> CheParams:
    """Parameters of the equation satisfied by w(s) = u(1 - s)."""
    q = None if p.q is None else p.q - p.alpha
    return CheParams(p.delta, p.gamma, -p.epsilon, -p.alpha, q)


def shift_delta_exponent(p: CheParams) -> tuple[CheParams, complex]:
    """Power change u = (z-1)^(1-delta) w.

    Returns the parameters of the equation for ``w`` and the exponent
    ``1 - delta``.  Applying it twice restores ``p`` exactly.
    """
    s = 1 - p.delta
    q = None if p.q is None else p.q - s * p.gamma
    return CheParams(p.gamma, 2 - p.delta, p.epsilon, p.alpha + s * p.epsilon, q), s


def validate_params(p: CheParams, int_tol: float = DEFAULT_INT_TOL) -> list[str]:
    diags = []
    for name, v in zip(("gamma", "delta", "epsilon", "alpha", "q"), p.as_tuple()):
        if v is not None and not cmath.isfinite(v):
            diags.append(f"non-finite parameter {name}={v}")
    if diags:
        return diags
    g = nearest_integer(p.gamma, int_tol)
    kind = classify(p, int_tol).kind
    if g is not None and g <= 0:
        diags.append(
            f"gamma={g} is a non-positive integer: denominator-parameter hazard "
            "for series expanded at z=0"
        )
    if kind is CaseKind.EXCEPTIONAL:
        diags.append(
            "delta=1: both exponents at z=1 vanish and gamma offers no integer "
            "escape; no generalized hypergeometric solution is known"
        )
    return diags
