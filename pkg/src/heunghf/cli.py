"""Command-line interface: ``heunghf {spectrum,eval,verify,demo}``.

Exit codes: 0 ok, 1 verification failure, 2 usage error, 3 unsupported or
exceptional case.
"""

from __future__ import annotations

import argparse
import csv
import json
import math
import sys

import numpy as np

from . import descriptor as desc
from .che import CaseKind, CheParams, classify
from .frobenius import DomainError, ode_residual
from .ghf import NotOnSpectrumError, UnsupportedCaseError, construct_solutions, ghf_eval
from .pisystem import accessory_polynomial
from .twostate import (ConfigurationError, InitialValueSolution, TwoStateConfig, amplitude_pair,
                       amplitude_residual, two_state_reduction, z_of_t)
from .verify import verify_solution

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_UNSUPPORTED = 0, 1, 2, 3

COMPLEX_HELP = "complex literal: 're', 're+imi' or 'imi' (write --flag=-1+2i for a leading minus)"


def parse_complex(text: str) -> complex:
    s = text.strip().replace(" ", "")
    if s.endswith("i"):
        s = s[:-1] + "j"
    if s in ("j", "+j", "-j"):
        s = s.replace("j", "1j")
    try:
        return complex(s)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a complex number: {text!r}") from None


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        sys.exit(EXIT_USAGE)


def _add_params(sp, q_flag: bool = False):
    for name in ("gamma", "delta", "epsilon", "alpha"):
        sp.add_argument(f"--{name}", type=parse_complex, required=True, help=COMPLEX_HELP)
    sp.add_argument("--int-tol", type=float, default=1e-9, help="integer detection tolerance")
    if q_flag:
        sp.add_argument("--q", type=parse_complex, default=None,
                        help="check the nearest root against this q instead (negative control)")


def _params(args) -> CheParams:
    return CheParams(args.gamma, args.delta, args.epsilon, args.alpha)


def _solutions(p: CheParams, int_tol: float):
    case = classify(p, int_tol)
    if case.kind is CaseKind.EXCEPTIONAL:
        raise UnsupportedCaseError(
            "delta = 1 and gamma is not an integer != 1: both exponents at z = 1 vanish "
            "and no generalized hypergeometric solution is known for this case",
            case.kind,
        )
    sols = construct_solutions(p, int_tol, include_invalid=True)
    return case, sols


def cmd_spectrum(args) -> int:
    p = _params(args)
    case, sols = _solutions(p, args.int_tol)
    canon = sols[0].canonical if sols else p
    qpoly = accessory_polynomial(canon.with_q(0), case.n_value).coeffs if sols else []
    docs = [desc.solution_doc(s) for s in sols]
    print(desc.dumps(desc.spectrum_doc(p, case, canon, qpoly, docs)))
    return EXIT_OK


def cmd_verify(args) -> int:
    p = _params(args)
    case, sols = _solutions(p, args.int_tol)
    valid = [s for s in sols if s.flags.get("valid")]
    if args.q is not None:
        valid = [min(valid, key=lambda s: abs(s.q - args.q))] if valid else []
    reports = []
    for s in valid:
        rep = verify_solution(s, args.q)
        rep["e"] = s.e
        reports.append(rep)
    skipped = [{"q": s.q, "flags": s.flags} for s in sols if not s.flags.get("valid")]
    ok = bool(reports) and all(r["pass"] for r in reports)
    doc = {
        "params": desc.params_doc(p),
        "case": {"kind": case.kind, "n_value": case.n_value},
        "roots": reports,
        "skipped": skipped,
        "pass": ok,
    }
    print(json.dumps(desc.to_jsonable(doc), indent=2))
    return EXIT_OK if ok else EXIT_FAIL


def _grid(start: complex, stop: complex, count: int):
    if count < 1:
        raise ValueError("count must be >= 1")
    if count == 1:
        return [start]
    return list(np.linspace(start, stop, count))


def cmd_eval(args) -> int:
    if args.descriptor:
        try:
            with open(args.descriptor) as fh:
                doc = json.load(fh)
        except (OSError, json.JSONDecodeError) as exc:
            raise desc.DescriptorError(f"cannot read descriptor: {exc}") from exc
        p, ghf = desc.load_solution(doc, args.root)
    else:
        missing = [n for n in ("gamma", "delta", "epsilon", "alpha") if getattr(args, n) is None]
        if missing:
            raise desc.DescriptorError("give --descriptor or all of --gamma --delta --epsilon --alpha")
        p0 = CheParams(args.gamma, args.delta, args.epsilon, args.alpha)
        _, sols = _solutions(p0, args.int_tol)
        sols = [s for s in sols if s.flags.get("valid")]
        if not 0 <= args.root < len(sols):
            raise desc.DescriptorError(f"root index {args.root} out of range ({len(sols)} roots)")
        p, ghf = sols[args.root].solved_params, sols[args.root].ghf
    rows = []
    for z in _grid(args.start, args.stop, args.count):
        z = complex(z)
        u, du, d2u = ghf_eval(ghf, z)
        try:
            res = abs(ode_residual(u, du, d2u, p, z))
        except DomainError:
            print(f"warning: z={z} is a singular point; residual not evaluated", file=sys.stderr)
            res = math.nan
        rows.append((z.real, z.imag, u.real, u.imag, res))
    if args.format == "json":
        print(json.dumps([dict(zip(("z_re", "z_im", "u_re", "u_im", "residual"), r)) for r in rows]))
    else:
        w = csv.writer(sys.stdout, lineterminator="\n")
        w.writerow(["z_re", "z_im", "u_re", "u_im", "residual"])
        w.writerows([[repr(v) for v in r] for r in rows])
    return EXIT_OK


def cmd_demo(args) -> int:
    if args.U0 == 0:
        raise ConfigurationError("U0 = 0 leaves a1 undefined")
    c = TwoStateConfig(args.U0, args.delta0, args.delta1, args.tau, args.sign1, args.sign0)
    times = np.linspace(args.t_start * c.tau, args.t_stop * c.tau, args.count)
    d = two_state_reduction(c)
    if args.initial is not None:
        a1_0, a2_0 = args.initial
        iv = InitialValueSolution(c, args.t0 * c.tau, a1_0, a2_0)
        amp = iv
        resid = lambda t: max(amplitude_residual(dd, cc, t) for dd, cc in zip(iv.derived, iv.configs))
    else:
        a1, a2 = amplitude_pair(d, c, times[0])
        n0 = math.sqrt(abs(a1) ** 2 + abs(a2) ** 2)
        amp = lambda t: tuple(x / n0 for x in amplitude_pair(d, c, t))
        resid = lambda t: amplitude_residual(d, c, t)
    rows = []
    for t in times:
        a1, a2 = amp(t)
        rows.append((t, z_of_t(c, t), a1.real, a1.imag, a2.real, a2.imag,
                     abs(a1) ** 2 + abs(a2) ** 2, resid(t)))
    w = csv.writer(sys.stdout, lineterminator="\n")
    w.writerow(["t", "z", "a1_re", "a1_im", "a2_re", "a2_im", "norm", "residual"])
    w.writerows([[repr(float(v)) for v in r] for r in rows])
    norms = np.array([r[6] for r in rows])
    drift = float(np.abs(norms - norms[0]).max() / norms[0])
    print(f"# norm_drift={drift!r}")
    print(f"# quadratic_residual={d.quadratic_residual!r}")
    print(f"# che gamma={d.che.gamma!r} epsilon={d.che.epsilon!r} alpha={d.che.alpha!r} "
          f"q={d.che.q!r} e={d.e_param!r}")
    return EXIT_OK


def _pair(text: str):
    parts = text.split(",")
    if len(parts) != 2:
        raise argparse.ArgumentTypeError("expected 'a1,a2'")
    return tuple(parse_complex(x) for x in parts)


def build_parser() -> argparse.ArgumentParser:
    ap = _Parser(prog="heunghf", description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    sub = ap.add_subparsers(dest="command", required=True, parser_class=_Parser)

    sp = sub.add_parser("spectrum", help="accessory polynomial, roots and series parameters")
    _add_params(sp)
    sp.set_defaults(func=cmd_spectrum)

    vp = sub.add_parser("verify", help="check every root against the Frobenius oracle and residuals")
    _add_params(vp, q_flag=True)
    vp.set_defaults(func=cmd_verify)

    ep = sub.add_parser("eval", help="evaluate a solution on a straight-line grid (CSV)")
    ep.add_argument("--descriptor", help="solution or spectrum JSON document")
    ep.add_argument("--root", type=int, default=0, help="solution index within a spectrum")
    for name in ("gamma", "delta", "epsilon", "alpha"):
        ep.add_argument(f"--{name}", type=parse_complex, default=None, help=COMPLEX_HELP)
    ep.add_argument("--int-tol", type=float, default=1e-9)
    ep.add_argument("--start", type=parse_complex, default=0.1)
    ep.add_argument("--stop", type=parse_complex, default=0.9)
    ep.add_argument("--count", type=int, default=41)
    ep.add_argument("--format", choices=("csv", "json"), default="csv")
    ep.set_defaults(func=cmd_eval)

    dp = sub.add_parser("demo", help="two-state amplitudes for the Lambert-W crossing (CSV)")
    dp.add_argument("--U0", type=float, default=1.0)
    dp.add_argument("--delta0", type=float, default=2.0)
    dp.add_argument("--delta1", type=float, default=1.0)
    dp.add_argument("--tau", type=float, default=1.0)
    dp.add_argument("--sign1", type=int, choices=(1, -1), default=1)
    dp.add_argument("--sign0", type=int, choices=(1, -1), default=1)
    dp.add_argument("--t-start", type=float, default=-10.0, help="in units of tau")
    dp.add_argument("--t-stop", type=float, default=10.0, help="in units of tau")
    dp.add_argument("--count", type=int, default=200)
    dp.add_argument("--initial", type=_pair, default=None,
                    help="'a1,a2' at --t0: superpose both fundamental solutions to match it")
    dp.add_argument("--t0", type=float, default=0.0, help="in units of tau")
    dp.set_defaults(func=cmd_demo)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except UnsupportedCaseError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_UNSUPPORTED
    except (desc.DescriptorError, ConfigurationError, NotOnSpectrumError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
