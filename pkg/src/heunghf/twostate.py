"""Two-state quantum system driven through an asymmetric level crossing.

Constant Rabi frequency U0 and detuning rate

    delta_t(t) = delta0 - (delta0 + delta1) / (1 + W(exp(-t/tau))),

with W the principal Lambert function.  In the variable z = -W(exp(-t/tau))
and with a2 = (-z)^alpha1 exp(alpha0 z) u(z), the amplitude equation
becomes a confluent Heun equation with delta = -1 whose accessory parameter
sits on its spectrum, so u is a single 2F2.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field, replace

import numpy as np

from .che import CheParams
from .ghf import (ConstructedSolution, GhfSolution, NotOnSpectrumError, canonical_ghf,
                  construct_solutions, ghf_eval)
from .pisystem import golden_accessory_condition


class ConfigurationError(ValueError):
    pass


@dataclass(frozen=True)
class TwoStateConfig:
    U0: float
    delta0: float
    delta1: float
    tau: float = 1.0
    sign1: int = 1
    sign0: int = 1

    def __post_init__(self):
        if not self.tau > 0:
            raise ConfigurationError("tau must be positive")
        if self.U0 < 0:
            raise ConfigurationError("U0 must be non-negative")
        if self.sign1 not in (1, -1) or self.sign0 not in (1, -1):
            raise ConfigurationError("signs must be +1 or -1")


def lambert_w(x: float) -> float:
    """Principal branch W(x) for real x >= -1/e, by Halley iteration."""
    x = float(x)
    if x < -1 / math.e:
        if x > -1 / math.e - 1e-15:
            return -1.0
        raise ValueError(f"W is real only for x >= -1/e, got {x}")
    if x == 0:
        return 0.0
    if x < -0.25:
        p = math.sqrt(max(2 * (math.e * x + 1), 0.0))
        w = -1 + p - p * p / 3 + 11 / 72 * p**3
    elif x < 3:
        w = math.log1p(x) * (1 - math.log1p(math.log1p(x)) / (2 + math.log1p(x)))
    else:
        L1 = math.log(x)
        L2 = math.log(L1)
        w = L1 - L2 + L2 / L1
    for _ in range(50):
        ew = math.exp(w)
        f = w * ew - x
        if w == -1:
            break
        step = f / (ew * (w + 1) - (w + 2) * f / (2 * w + 2))
        w -= step
        if abs(step) <= 2e-16 * (1 + abs(w)):
            break
    return w


def lambert_w_exp(y: float) -> float:
    """W(exp(y)) without forming exp(y); Newton on w + log(w) = y."""
    if y < 1:
        return lambert_w(math.exp(y))
    w = y - math.log(y)
    for _ in range(50):
        step = (w + math.log(w) - y) / (1 + 1 / w)
        w -= step
        if abs(step) <= 2e-16 * w:
            break
    return w


def field_configuration(c: TwoStateConfig, t: float) -> tuple[float, float]:
    """(U, delta_t) at time t."""
    w = lambert_w_exp(-t / c.tau)
    return c.U0, c.delta0 - (c.delta0 + c.delta1) / (1 + w)


def crossing_time(c: TwoStateConfig) -> float:
    """Resonance time for delta0, delta1 > 0."""
    r = c.delta1 / c.delta0
    return c.tau * (-r - math.log(r))


@dataclass
class TwoStateDerived:
    alpha1: complex
    alpha0: complex
    che: CheParams
    ghf: GhfSolution
    e_param: complex
    a_param: complex
    solution: ConstructedSolution
    quadratic_residual: float
    closed_form: dict = field(default_factory=dict)


def reduction_exponents(c: TwoStateConfig) -> tuple[complex, complex]:
    it = 1j * c.tau
    a1 = it / 2 * (c.delta1 + c.sign1 * math.sqrt(c.delta1**2 + 4 * c.U0**2))
    a0 = it / 2 * (c.delta0 + c.sign0 * math.sqrt(c.delta0**2 + 4 * c.U0**2))
    return a1, a0


def two_state_reduction(c: TwoStateConfig) -> TwoStateDerived:
    """Confluent Heun parameters of the reduced amplitude equation.

    gamma and epsilon follow from the exponents directly; alpha and q are
    collected from the 1/z terms of the transformed equation.  The pair must
    match a root of the accessory spectrum, whose auxiliary parameter agrees
    with e = alpha / (alpha0 + alpha1).
    """
    a1, a0 = reduction_exponents(c)
    it = 1j * c.tau
    k = (c.U0 * c.tau) ** 2
    gamma = 1 + 2 * a1 - it * c.delta1
    eps = 2 * a0 - it * c.delta0
    C = -2 * k + (1 - it * c.delta1) * a0 - it * c.delta0 * a1 + 2 * a1 * a0
    alpha = C - a0
    q = C + a1
    che = CheParams(gamma, -1, eps, alpha, q)
    quad_res = abs(golden_accessory_condition(che, 1)(q)) / max(1.0, abs(q) ** 2)
    try:
        sols = construct_solutions(che, q_tol=1e-7)
    except NotOnSpectrumError as exc:
        raise ConfigurationError(
            f"reduced equation is off the accessory spectrum (quadratic condition residual {quad_res:.2e})"
        ) from exc
    sol = sols[0]
    closed_form = {"spectrum_q": sol.q, "spectrum_e": complex(sol.e[0]) if sol.e.size else None}
    if sol.e.size and a0 + a1 != 0:
        # Exact in closed form; the polished root loses accuracy at double roots.
        e = alpha / (a0 + a1)
        ghf = canonical_ghf(che, [e])
    else:
        e, ghf = complex("nan"), sol.ghf
    if eps != 0:
        closed_form["a"] = (c.delta0 * c.delta1 - 4 * c.U0**2) / (2 * eps / c.tau**2) + (gamma - 1) / 2
        closed_form["e"] = a1 - it * c.delta1 + a0 - it * c.delta0
    a_param = alpha / eps if eps != 0 else complex("nan")
    return TwoStateDerived(a1, a0, che, ghf, e, a_param, sol, quad_res, closed_form)


def z_of_t(c: TwoStateConfig, t: float) -> float:
    return -lambert_w_exp(-t / c.tau)


def phase(c: TwoStateConfig, t: float) -> float:
    """delta(t) = integral_0^t delta_t, in closed form tau (delta0 z + delta1 log(-z))."""
    z, z0 = z_of_t(c, t), z_of_t(c, 0.0)
    return c.tau * (c.delta0 * (z - z0) + c.delta1 * math.log(z / z0))


def amplitude_a2(d: TwoStateDerived, c: TwoStateConfig, t: float):
    """a2(t) and its time derivative."""
    z = z_of_t(c, t)
    u, du, _ = ghf_eval(d.ghf, z)
    g = cmath.exp(d.alpha1 * math.log(-z) + d.alpha0 * z)
    a2 = g * u
    da2_dz = g * ((d.alpha1 / z + d.alpha0) * u + du)
    dz_dt = z / (c.tau * (z - 1))
    return a2, da2_dz * dz_dt


def amplitude_pair(d: TwoStateDerived, c: TwoStateConfig, t: float) -> tuple[complex, complex]:
    if c.U0 == 0:
        raise ConfigurationError("a1 cannot be recovered from a2 when U0 = 0")
    a2, a2dot = amplitude_a2(d, c, t)
    a1 = 1j * a2dot * cmath.exp(-1j * phase(c, t)) / c.U0
    return a1, a2


def amplitude_residual(d: TwoStateDerived, c: TwoStateConfig, t: float, h: float | None = None) -> float:
    """Relative residual of a2'' - i delta_t a2' + U0^2 a2 with five-point
    finite differences in t."""
    h = 1e-2 * c.tau if h is None else h
    v = [amplitude_a2(d, c, t + k * h)[0] for k in (-2, -1, 0, 1, 2)]
    d1 = (v[0] - 8 * v[1] + 8 * v[3] - v[4]) / (12 * h)
    d2 = (-v[0] + 16 * v[1] - 30 * v[2] + 16 * v[3] - v[4]) / (12 * h * h)
    _, dt = field_configuration(c, t)
    terms = (d2, -1j * dt * d1, c.U0**2 * v[2])
    return abs(sum(terms)) / max(abs(x) for x in terms)


def norm_drift(d: TwoStateDerived, c: TwoStateConfig, t_grid) -> float:
    norms = []
    for t in t_grid:
        a1, a2 = amplitude_pair(d, c, t)
        norms.append(abs(a1) ** 2 + abs(a2) ** 2)
    norms = np.asarray(norms)
    return float(np.abs(norms - norms[0]).max() / norms[0])


class InitialValueSolution:
    """Amplitudes with prescribed (a1, a2) at t0, built from the two
    fundamental solutions with opposite alpha1 signs."""

    def __init__(self, c: TwoStateConfig, t0: float, a1_0: complex, a2_0: complex):
        self.config = c
        self.configs = [replace(c, sign1=s) for s in (1, -1)]
        self.derived = [two_state_reduction(cfg) for cfg in self.configs]
        M = np.array([amplitude_pair(d, cfg, t0) for d, cfg in zip(self.derived, self.configs)]).T
        if abs(np.linalg.det(M)) <= 1e-12 * np.abs(M).max() ** 2:
            raise ConfigurationError("fundamental solutions are not independent at t0")
        self.weights = np.linalg.solve(M, [a1_0, a2_0])

    def __call__(self, t: float) -> tuple[complex, complex]:
        a1 = a2 = 0j
        for w, d, cfg in zip(self.weights, self.derived, self.configs):
            b1, b2 = amplitude_pair(d, cfg, t)
            a1 += w * b1
            a2 += w * b2
        return a1, a2
