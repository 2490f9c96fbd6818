"""Per-root verification reports combining the Frobenius oracle, the ODE
residual, the closed-form identities and the low-order accessory conditions."""

from __future__ import annotations

from typing import Optional

import numpy as np

from .frobenius import frobenius_coefficients, ode_residual
from .ghf import ConstructedSolution, ghf_coefficients, ghf_eval
from .pisystem import consistency_relations, golden_ratio_spread, accessory_polynomial

SAMPLE_POINTS = (0.1, 0.25, 0.5, 0.7, 0.9)
GOLDEN_PROBES = (0.37 + 0.11j, -0.52 + 0.8j, 1.3 - 0.4j, -1.1 - 0.9j, 0.05 + 1.7j, 2.2 + 0.3j)

COEFF_TOL = 1e-10
RESIDUAL_TOL = 1e-8
RELATION_TOL = 1e-9
CONJECTURE_TOL = 1e-7
GOLDEN_TOL = 1e-8


def sample_points(sol: ConstructedSolution) -> list[complex]:
    """Canonical sample points, reflected to 1 - t for base-point-1 series."""
    if sol.ghf.base_point == 1:
        return [1 - t for t in SAMPLE_POINTS]
    return list(SAMPLE_POINTS)


def coefficient_deviation(sol: ConstructedSolution, count: int = 50, q_shift: complex = 0) -> float:
    """max_n |frobenius_n - ghf_n| / max_n |ghf_n| over n <= count."""
    canon = sol.canonical.with_q(sol.canonical.q + q_shift)
    f = frobenius_coefficients(canon, count).coeffs.coeffs
    g = ghf_coefficients(sol.canonical_ghf, count).coeffs
    return float(np.abs(f - g).max() / np.abs(g).max())


def max_ode_residual(sol: ConstructedSolution, q: Optional[complex] = None, points=None) -> float:
    p = sol.params.with_q(sol.q if q is None else q)
    pts = sample_points(sol) if points is None else points
    return max(abs(ode_residual(*ghf_eval(sol.ghf, z), p, z)) for z in pts)


def verify_solution(sol: ConstructedSolution, q_override: Optional[complex] = None) -> dict:
    """Run every check on one constructed root; ``report["pass"]`` is the verdict.

    With ``q_override`` the residual and Frobenius checks use that q instead
    of the root, which a correct checker must reject.
    """
    q = sol.q if q_override is None else complex(q_override)
    shift = q - sol.q
    report: dict = {"q": sol.q, "checked_q": q, "warnings": []}
    checks = {}

    dev = coefficient_deviation(sol, q_shift=shift)
    checks["frobenius_coefficients"] = {"value": dev, "tol": COEFF_TOL, "pass": dev <= COEFF_TOL}

    res = max_ode_residual(sol, q)
    checks["ode_residual"] = {"value": res, "tol": RESIDUAL_TOL, "pass": res <= RESIDUAL_TOL,
                              "points": sample_points(sol)}

    canon = sol.canonical
    if sol.flags.get("terminating"):
        rel = (None, None, None)
    else:
        rel = consistency_relations(canon, canon.q, sol.e)
    for name, value in zip(("relation_product", "relation_sum"), (rel[0], rel[2])):
        if value is not None:
            checks[name] = {"value": value, "tol": RELATION_TOL, "pass": value <= RELATION_TOL}
    report["relation_conjecture"] = rel[1]
    if rel[1] is not None and rel[1] > CONJECTURE_TOL:
        report["warnings"].append(
            f"empirical product identity off by {rel[1]:.2e} (reported, not enforced)"
        )

    N = sol.case.n_value
    if N is not None and N <= 3:
        spread = golden_ratio_spread(canon, accessory_polynomial(canon, N), GOLDEN_PROBES, N)
        checks["golden_polynomial"] = {"value": spread, "tol": GOLDEN_TOL, "pass": spread <= GOLDEN_TOL}

    report["checks"] = checks
    report["pass"] = all(c["pass"] for c in checks.values())
    return report
