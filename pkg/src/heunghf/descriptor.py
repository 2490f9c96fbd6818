"""JSON documents for solutions and spectra.

Complex numbers are stored as ``[re, im]`` pairs of JSON numbers; Python
writes floats with their shortest round-tripping repr, so decoding is
bit-exact.
"""

from __future__ import annotations

import json
from typing import Any

import numpy as np

from .che import CaseClass, CaseKind, CheParams
from .ghf import ConstructedSolution, GhfSolution
from .pisystem import consistency_relations

SOLUTION_SCHEMA = "heunghf.solution/1"
SPECTRUM_SCHEMA = "heunghf.spectrum/1"


class DescriptorError(ValueError):
    pass


def to_jsonable(obj: Any):
    if isinstance(obj, (complex, np.complexfloating)):
        return [float(obj.real), float(obj.imag)]
    if isinstance(obj, (np.floating, np.integer, np.bool_)):
        return obj.item()
    if isinstance(obj, np.ndarray):
        return [to_jsonable(x) for x in obj.tolist()]
    if isinstance(obj, dict):
        return {str(k): to_jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [to_jsonable(x) for x in obj]
    if isinstance(obj, CaseKind):
        return obj.value
    return obj


def _c(v) -> complex:
    try:
        re, im = v
        return complex(float(re), float(im))
    except (TypeError, ValueError) as exc:
        raise DescriptorError(f"expected [re, im], got {v!r}") from exc


def params_doc(p: CheParams) -> dict:
    d = {k: to_jsonable(v) for k, v in zip(("gamma", "delta", "epsilon", "alpha"), p.as_tuple())}
    d["q"] = None if p.q is None else to_jsonable(p.q)
    return d


def params_from_doc(d: dict) -> CheParams:
    try:
        q = d.get("q")
        return CheParams(_c(d["gamma"]), _c(d["delta"]), _c(d["epsilon"]), _c(d["alpha"]),
                         None if q is None else _c(q))
    except (KeyError, TypeError, AttributeError) as exc:
        raise DescriptorError(f"malformed parameter block: {exc}") from exc


def ghf_doc(g: GhfSolution) -> dict:
    return {
        "numerator_params": to_jsonable(g.numerator_params),
        "denominator_params": to_jsonable(g.denominator_params),
        "scale": to_jsonable(g.scale),
        "base_point": to_jsonable(g.base_point),
        "prefactor_exponent": to_jsonable(g.prefactor_exponent),
        "prefactor_center": to_jsonable(g.prefactor_center),
    }


def ghf_from_doc(d: dict) -> GhfSolution:
    try:
        return GhfSolution(
            [_c(a) for a in d["numerator_params"]],
            [_c(b) for b in d["denominator_params"]],
            _c(d["scale"]),
            _c(d["base_point"]),
            _c(d["prefactor_exponent"]),
            _c(d["prefactor_center"]),
        )
    except (KeyError, TypeError) as exc:
        raise DescriptorError(f"malformed ghf block: {exc}") from exc


def solution_doc(sol: ConstructedSolution, residuals: dict | None = None) -> dict:
    canon = sol.canonical
    rel = (None, None, None) if sol.flags.get("terminating") else consistency_relations(canon, canon.q, sol.e)
    return to_jsonable({
        "schema": SOLUTION_SCHEMA,
        "params": params_doc(sol.params),
        "case": {"kind": sol.case.kind, "n_value": sol.case.n_value, "int_tol": sol.case.int_tol},
        "q": sol.q,
        "e": sol.e,
        "sigma": sol.root.sigma,
        "multiplicity": sol.root.multiplicity,
        "ghf": ghf_doc(sol.ghf),
        "canonical": params_doc(canon),
        "steps": list(sol.steps),
        "flags": sol.flags,
        "relations": {"product": rel[0], "conjecture": rel[1], "sum": rel[2]},
        "residuals": residuals or {},
    })


def spectrum_doc(params: CheParams, case: CaseClass, canonical: CheParams,
                 q_poly_coeffs, solutions: list[dict]) -> dict:
    return to_jsonable({
        "schema": SPECTRUM_SCHEMA,
        "params": params_doc(params),
        "case": {"kind": case.kind, "n_value": case.n_value, "int_tol": case.int_tol},
        "canonical": params_doc(canonical),
        "accessory_polynomial": q_poly_coeffs,
        "roots": [s["q"] for s in solutions],
        "solutions": solutions,
    })


def load_solution(doc: dict, index: int = 0) -> tuple[CheParams, GhfSolution]:
    """(params with q, series) from a solution or spectrum document."""
    if not isinstance(doc, dict):
        raise DescriptorError("descriptor must be a JSON object")
    schema = doc.get("schema")
    if schema == SPECTRUM_SCHEMA:
        sols = doc.get("solutions") or []
        if not 0 <= index < len(sols):
            raise DescriptorError(f"root index {index} out of range ({len(sols)} solutions)")
        doc = sols[index]
        schema = doc.get("schema")
    if schema != SOLUTION_SCHEMA:
        raise DescriptorError(f"unknown schema {schema!r}")
    p = params_from_doc(doc.get("params", {}))
    return p.with_q(_c(doc.get("q"))), ghf_from_doc(doc.get("ghf", {}))


def dumps(doc: dict) -> str:
    return json.dumps(doc, indent=2)
