"""Acceptance gate: one test per criterion, each printing a PASS/FAIL line.

Run with ``pytest tests/test_acceptance.py`` (lines appear in the terminal
summary) or ``python3 tests/test_acceptance.py``.
"""

import math
import time

import numpy as np
from scipy.integrate import solve_ivp
from scipy.special import gamma as gamma_fn, jv

from heunghf.che import CheParams
from heunghf.cli import main
from heunghf.ghf import construct_solutions, ghf_eval
from heunghf.pisystem import (accessory_polynomial, accessory_spectrum, consistency_relations, evaluate_pi,
                              golden_accessory_condition, golden_ratio_spread, sigma_linear_system)
from heunghf.poly import interpolate_poly
from heunghf.twostate import (InitialValueSolution, TwoStateConfig, amplitude_pair, crossing_time, amplitude_residual,
                              field_configuration, norm_drift, phase, two_state_reduction)
from heunghf.verify import coefficient_deviation, max_ode_residual

RESULTS: list[str] = []
PROBES = (0.37 + 0.11j, -0.52 + 0.8j, 1.3 - 0.4j, -1.1 - 0.9j, 0.05 + 1.7j, 2.2 + 0.3j)
SEED = 7


def report(k: int, ok: bool, detail: str):
    line = f"criterion {k}: {'PASS' if ok else 'FAIL'}  {detail}"
    RESULTS.append(line)
    print(line)


def unit(rng) -> complex:
    return complex(rng.uniform(0.3, 1.5) * np.exp(1j * rng.uniform(0, 2 * np.pi)))


def draw(rng, N, eps0=False) -> CheParams:
    return CheParams(1 + unit(rng), -N, 0 if eps0 else unit(rng), unit(rng))


def _golden(k, eps0):
    rng = np.random.default_rng(SEED + k)
    t0 = time.perf_counter()
    worst_exact = worst_spread = 0.0
    for N in range(4):
        for _ in range(5):
            p = draw(rng, N, eps0)
            qp = accessory_polynomial(p)
            if N == 0:
                worst_exact = max(worst_exact, float(np.abs(qp.coeffs - [-p.alpha, 1]).max()))
            else:
                worst_spread = max(worst_spread, golden_ratio_spread(p, qp, PROBES, N))
    dt = time.perf_counter() - t0
    ok = worst_exact == 0 and worst_spread <= 1e-8 and dt < 1
    report(k, ok, f"N=0 exact diff {worst_exact:.1e}, ratio spread {worst_spread:.1e} (tol 1e-8), {dt:.2f}s")
    return ok


def test_criterion_1_golden_eps():
    assert _golden(1, eps0=False)


def test_criterion_2_golden_eps0():
    assert _golden(2, eps0=True)


def test_criterion_3_degree():
    rng = np.random.default_rng(SEED + 3)
    bad = []
    worst_lead = 0.0
    for N in range(7):
        for _ in range(10):
            p = draw(rng, N, eps0=rng.random() < 0.3)
            if N > 0:
                nodes = 2.0 * np.exp(2j * np.pi * np.arange(N + 4) / (N + 4))
                dets = [np.linalg.det(np.column_stack([M, -r])) for M, r in
                        (sigma_linear_system(p, qn) for qn in nodes)]
                c = interpolate_poly(nodes, dets).coeffs
                c = np.concatenate([c, np.zeros(N + 4 - c.size)])
                w = np.abs(c) * 2.0 ** np.arange(N + 4)
                if not (w[N + 1] > 1e-6 * w.max() and w[N + 2:].max() < 1e-10 * w.max()):
                    bad.append(N)
            if accessory_polynomial(p).degree != N + 1:
                bad.append(N)
            # n^(N+1) coefficient of Pi at a non-integer delta
            delta = -N + 0.5 * unit(rng)
            pp = CheParams(p.gamma, delta, p.epsilon, p.alpha)
            sigma = [unit(rng) for _ in range(N)]
            q = unit(rng)
            nodes = 3.0 * np.exp(2j * np.pi * np.arange(N + 4) / (N + 4))
            c = interpolate_poly(nodes, [evaluate_pi(pp, q, sigma, n) for n in nodes]).coeffs
            c = np.concatenate([c, np.zeros(N + 4 - c.size)])
            worst_lead = max(worst_lead, abs(c[N + 1] - (N + delta)) / max(1, abs(N + delta)))
    ok = not bad and worst_lead <= 1e-9
    report(3, ok, f"degree failures {sorted(set(bad))}, n^(N+1) coefficient error {worst_lead:.1e} (tol 1e-9)")
    assert ok


def _sweep():
    rng = np.random.default_rng(SEED + 4)
    out = []
    for N in range(7):
        for eps0 in (False, True):
            for _ in range(2):
                out.append((N, eps0, construct_solutions(draw(rng, N, eps0))))
    return out


def test_criterion_4_oracle_equivalence():
    t0 = time.perf_counter()
    dev = res = 0.0
    count = 0
    for N, eps0, sols in _sweep():
        for s in sols:
            dev = max(dev, coefficient_deviation(s, 50))
            res = max(res, max_ode_residual(s))
            count += 1
    dt = time.perf_counter() - t0
    ok = dev <= 1e-10 and res < 1e-8 and dt < 10 and count > 0
    report(4, ok, f"{count} roots: coefficient deviation {dev:.1e} (tol 1e-10), "
                  f"ODE residual {res:.1e} (tol 1e-8), {dt:.2f}s")
    assert ok


def test_criterion_5_relations():
    r13 = 0.0
    r2_worst = {}
    for N, eps0, sols in _sweep():
        for s in sols:
            r1, r2, r3 = consistency_relations(s.canonical, s.canonical.q, s.e)
            r13 = max(r13, r1 or 0.0, r3)
            if r2 is not None:
                r2_worst[(N, eps0)] = max(r2_worst.get((N, eps0), 0.0), r2)
    # relation 2 is also probed at N = 7
    rng = np.random.default_rng(SEED + 5)
    for eps0 in (False, True):
        for s in construct_solutions(draw(rng, 7, eps0)):
            r2 = consistency_relations(s.canonical, s.canonical.q, s.e)[1]
            if r2 is not None:
                r2_worst[(7, eps0)] = max(r2_worst.get((7, eps0), 0.0), r2)
    ok = r13 <= 1e-9
    report(5, ok, f"relations 1 and 3 max {r13:.1e} (tol 1e-9)")
    off = {k: v for k, v in r2_worst.items() if v > 1e-7}
    if off:
        worst = ", ".join(f"N={n}{' eps=0' if e else ''}: {v:.1e}" for (n, e), v in sorted(off.items()))
        line = f"criterion 5: WARNING relation 2 above 1e-7 (conjecture check, not enforced): {worst}"
    else:
        line = f"criterion 5: relation 2 max {max(r2_worst.values()):.1e} (tol 1e-7)"
    RESULTS.append(line)
    print(line)
    assert ok


def test_criterion_6_transformations():
    rng = np.random.default_rng(SEED + 6)
    worst = 0.0
    empty = []
    for d in (2, 3, 4):
        for _ in range(3):
            p = CheParams(1 + unit(rng), d, unit(rng), unit(rng))
            sols = construct_solutions(p)
            empty += [] if sols else [("delta", d)]
            worst = max([worst] + [max_ode_residual(s) for s in sols])
    for g in (-2, -1, 0, 2, 3):
        for _ in range(3):
            p = CheParams(g, 0.5 + 0.3 * unit(rng), unit(rng), unit(rng))
            sols = construct_solutions(p)
            empty += [] if sols else [("gamma", g)]
            worst = max([worst] + [max_ode_residual(s) for s in sols])
    ok = worst < 1e-8 and not empty
    report(6, ok, f"max ODE residual at mapped points {worst:.1e} (tol 1e-8), cases without roots {empty}")
    assert ok


def test_criterion_7_bessel():
    worst = 0.0
    for g in (1.5, 2.5):
        for a in (1, 2):
            sol = construct_solutions(CheParams(g, 0, 0, a))[0]
            for z in (0.1, 0.3, 1.0):
                # the series is normalized to 1 at z = 0, hence the Gamma(gamma)
                ref = gamma_fn(g) * (a * z) ** ((1 - g) / 2) * jv(g - 1, 2 * math.sqrt(a * z))
                worst = max(worst, abs(ghf_eval(sol.ghf, z)[0] - ref) / max(1, abs(ref)))
    ok = worst <= 1e-10
    report(7, ok, f"max deviation from Gamma(gamma)-normalized Bessel form {worst:.1e} (tol 1e-10)")
    assert ok


def _system46(c):
    def f(t, y):
        a1, a2 = y[0] + 1j * y[1], y[2] + 1j * y[3]
        U, dt = field_configuration(c, t)
        d1 = -1j * U * np.exp(-1j * y[4]) * a2
        d2 = -1j * U * np.exp(1j * y[4]) * a1
        return [d1.real, d1.imag, d2.real, d2.imag, dt]
    return f


def test_criterion_8_two_state():
    t0 = time.perf_counter()
    quad_res = fd = drift = dev = 0.0
    grid = np.linspace(-10, 10, 200)
    for s1 in (1, -1):
        for s0 in (1, -1):
            c = TwoStateConfig(1, 2, 1, 1, s1, s0)
            d = two_state_reduction(c)
            quad_res = max(quad_res, abs(golden_accessory_condition(d.che, 1)(d.che.q)))
            tc = crossing_time(c)
            fd = max(fd, max(amplitude_residual(d, c, t) for t in np.linspace(tc - 3, tc + 3, 20)))
            drift = max(drift, norm_drift(d, c, grid))
            a1, a2 = amplitude_pair(d, c, -10.0)
            y0 = [a1.real, a1.imag, a2.real, a2.imag, phase(c, -10.0)]
            t_eval = np.linspace(-10, 10, 41)
            sol = solve_ivp(_system46(c), (-10, 10), y0, method="DOP853", t_eval=t_eval,
                            rtol=1e-11, atol=1e-12)
            for k, t in enumerate(t_eval):
                b1, b2 = amplitude_pair(d, c, t)
                dev = max(dev, abs(b1 - (sol.y[0, k] + 1j * sol.y[1, k])),
                          abs(b2 - (sol.y[2, k] + 1j * sol.y[3, k])))
    dt = time.perf_counter() - t0
    ok = quad_res <= 1e-9 and fd < 1e-6 and drift < 1e-6 and dev < 1e-5 and dt < 5
    report(8, ok, f"quadratic condition {quad_res:.1e}, FD residual {fd:.1e}, norm drift {drift:.1e}, "
                  f"integrator deviation {dev:.1e}, {dt:.2f}s")
    assert ok


def test_criterion_9_negative_controls():
    rng = np.random.default_rng(SEED + 9)
    weakest = math.inf
    for N in (0, 1, 2, 3):
        for s in construct_solutions(draw(rng, N)):
            weakest = min(weakest, max_ode_residual(s, q=s.q + 1e-2, points=[0.5]))
    code = main(["spectrum", "--gamma", "0.5", "--delta", "1", "--epsilon", "1", "--alpha", "1"])
    ok = weakest > 1e-4 and code == 3
    report(9, ok, f"smallest off-spectrum residual {weakest:.1e} (must exceed 1e-4), exceptional exit code {code}")
    assert ok


if __name__ == "__main__":
    import sys
    failed = 0
    for name, fn in list(globals().items()):
        if name.startswith("test_criterion_"):
            try:
                fn()
            except AssertionError:
                failed += 1
    sys.exit(1 if failed else 0)
