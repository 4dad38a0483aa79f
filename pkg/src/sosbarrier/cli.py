"""Command-line front end.

Subcommands: ``synth`` (synthesize and verify a certificate), ``check``
(verify an externally supplied certificate), ``plotdata`` (emit CSV plot
data), ``bench`` (run the benchmark registry), ``export-sdpa`` (write the
assembled feasibility SDP in sparse SDPA text form).

Exit codes for synth/check: 0 proved-exact, 2 passed-numeric-only,
3 infeasible (or unchecked), 4 refuted, 1 usage/internal error.
"""

from __future__ import annotations

import argparse
import sys
from fractions import Fraction
from pathlib import Path

from .bench import format_table, run_bench
from .plotdata import GridSpec, level_set_csv, theta_curves_csv, vector_field_csv
from .problemfile import (
    Problem,
    format_certificate,
    parse_certificate,
    parse_problem,
)
from .synth import (
    SynthOptions,
    SynthReport,
    iterative_synth,
    synth_combined,
    synth_gbc,
    synth_hybrid,
    synth_hybrid_combined,
)
from .system import PsiFunction
from .verify import verify_certificate

EXIT_PROVED_EXACT = 0
EXIT_ERROR = 1
EXIT_NUMERIC = 2
EXIT_INFEASIBLE = 3
EXIT_REFUTED = 4


def _verdict_exit(overall: str) -> int:
    return {
        "proved-exact": EXIT_PROVED_EXACT,
        "passed-numeric-only": EXIT_NUMERIC,
        "refuted": EXIT_REFUTED,
        "unchecked": EXIT_INFEASIBLE,
    }.get(overall, EXIT_ERROR)


def _psi_from_args(args, problem: Problem) -> PsiFunction:
    if args.alpha is not None or args.beta is not None:
        alpha = Fraction(args.alpha) if args.alpha is not None else Fraction(0)
        beta = Fraction(args.beta) if args.beta is not None else Fraction(0)
        return PsiFunction.quadratic(alpha, beta)
    psi = problem.psi_for(problem.automaton.mode_ids[0])
    if psi is None:
        raise SystemExit("no psi given: pass --alpha/--beta or add a psi line "
                         "to the problem file")
    return psi


def _options_from_args(args) -> SynthOptions:
    opts = SynthOptions()
    if args.mult_degree is not None:
        opts.mult_degree = args.mult_degree
    if args.epsilon is not None:
        opts.epsilon = Fraction(args.epsilon)
    if getattr(args, "no_exact", False):
        opts.exact = False
    if getattr(args, "jump_scale", None) is not None:
        opts.fixed_jump_scale = float(Fraction(args.jump_scale))
    return opts


def _outdir(args) -> Path:
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    return out


def cmd_synth(args) -> int:
    problem = parse_problem(args.problem)
    diags = problem.diagnostics()
    if diags:
        for d in diags:
            print(f"problem diagnostic: {d}", file=sys.stderr)
        return EXIT_ERROR
    psi = _psi_from_args(args, problem)
    degree = args.degree or problem.template_degree or 2
    opts = _options_from_args(args)
    pipeline = args.pipeline or ("hybrid" if problem.is_hybrid else "single")

    if pipeline == "single":
        rep = synth_gbc(problem.single_system, psi, degree, opts,
                        mode_id=problem.automaton.mode_ids[0])
    elif pipeline == "combined":
        rep = synth_combined(problem.single_system, psi, psi, degree, opts,
                             mode_id=problem.automaton.mode_ids[0])
    elif pipeline == "hybrid":
        rep = synth_hybrid(problem.automaton, psi, degree, opts)
    elif pipeline == "hybrid-combined":
        rep = synth_hybrid_combined(problem.automaton, psi, psi, degree, opts)
    elif pipeline == "iterative":
        rep = iterative_synth(problem.single_system, psi, degree, opts,
                              mode_id=problem.automaton.mode_ids[0])
    else:
        raise SystemExit(f"unknown pipeline {pipeline!r}")

    for msg in rep.messages:
        print(f"note: {msg}")
    if not rep.ok:
        print(f"infeasible: no certificate at these settings "
              f"(best margin {rep.margin:.3e}); this is not a nonexistence proof")
        return EXIT_INFEASIBLE

    out = _outdir(args)
    cert_path = out / "certificate.cert"
    report_path = out / "report.json"
    cert_path.write_text(format_certificate(rep.certificate, problem.nvars))
    report_path.write_text(rep.verification.to_json(sort_keys=True) + "\n")
    overall = rep.verification.overall
    print(f"status: feasible; verification: {overall}")
    print(f"wrote {cert_path} and {report_path}")
    return _verdict_exit(overall)


def cmd_check(args) -> int:
    problem = parse_problem(args.problem)
    cert = parse_certificate(args.certificate)
    report = verify_certificate(cert, problem.automaton,
                                exact=not args.no_exact)
    out = _outdir(args)
    report_path = out / "report.json"
    report_path.write_text(report.to_json(sort_keys=True) + "\n")
    print(f"verification: {report.overall}")
    for e in report.entries:
        line = f"  {e.cid}: {e.verdict}"
        if e.witness is not None:
            pt = ", ".join(f"{float(v):.6g}" for v in e.witness.point)
            line += f"  witness=({pt}) violation={float(e.witness.value):.3e}"
        print(line)
    print(f"wrote {report_path}")
    return _verdict_exit(report.overall)


def cmd_plotdata(args) -> int:
    problem = parse_problem(args.problem)
    out = _outdir(args)
    grid = GridSpec(args.xmin, args.xmax, args.ymin, args.ymax, args.resolution)

    made = []
    if problem.nvars == 2:
        q0, system = problem.automaton.modes[0]
        (out / "vector_field.csv").write_text(vector_field_csv(system, grid))
        made.append("vector_field.csv")
    elif args.certificate is None and args.theta is None:
        raise SystemExit("phase-plane output needs a 2-variable system")

    if args.certificate:
        cert = parse_certificate(args.certificate)
        for q, phi in cert.phi.items():
            name = f"level_set_{q}.csv"
            (out / name).write_text(level_set_csv(phi, grid))
            made.append(name)

    if args.theta:
        pairs = []
        for chunk in args.theta.split(";"):
            a, b = chunk.split(",")
            pairs.append((float(Fraction(a)), float(Fraction(b))))
        (out / "theta_curves.csv").write_text(
            theta_curves_csv(pairs, theta0=args.theta0, t_end=args.t_end))
        made.append("theta_curves.csv")

    print("wrote " + ", ".join(made) if made else "nothing to write")
    return 0


def cmd_bench(args) -> int:
    results = run_bench(args.filter or "", include_slow=args.slow,
                        workers=args.workers)
    print(format_table(results))
    bad = [r for r in results if not r.ok]
    return EXIT_ERROR if bad else 0


def cmd_export_sdpa(args) -> int:
    from .poly import FLOAT, Polynomial
    from .sdp import write_sdpa
    from .synth import LinearizedPsi, ModeRoundSpec, _encode_round

    problem = parse_problem(args.problem)
    psi = _psi_from_args(args, problem)
    degree = args.degree or problem.template_degree or 2
    opts = _options_from_args(args)
    systems = dict(problem.automaton.modes)
    specs = []
    zero = Polynomial.zero(problem.nvars, FLOAT)
    for q in problem.automaton.mode_ids:
        # the exported SDP uses the final linearization round's shape
        lin = LinearizedPsi.exact_linear(psi, problem.nvars) \
            if psi.poly.degree <= 1 else \
            LinearizedPsi.round_formula(psi.poly, zero, psi.poly.degree)
        specs.append(ModeRoundSpec(q, systems[q], lin, degree))
    prog, _, _ = _encode_round(specs, [], opts)
    sdp, _ = prog.assemble()
    out = Path(args.out) if args.out else Path(".")
    out.mkdir(parents=True, exist_ok=True)
    path = out / "problem.dat-s"
    path.write_text(write_sdpa(sdp))
    print(f"wrote {path} ({sdp.m} constraints, blocks {list(sdp.dims)[:8]}...)")
    return 0


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="sosbarrier",
        description="synthesize and soundly verify barrier certificates for "
                    "polynomial continuous and hybrid systems")
    sub = ap.add_subparsers(dest="command", required=True)

    def common(p, with_synth_flags=True):
        p.add_argument("problem", help="problem file")
        p.add_argument("--out", default="out", help="output directory")
        if with_synth_flags:
            p.add_argument("--alpha", help="linear comparison coefficient")
            p.add_argument("--beta", help="quadratic comparison coefficient")
            p.add_argument("--degree", type=int, help="certificate template degree")
            p.add_argument("--mult-degree", type=int, dest="mult_degree",
                           help="multiplier degree (even)")
            p.add_argument("--epsilon", help="strictness margin for the unsafe set")
            p.add_argument("--pipeline", choices=[
                "single", "combined", "hybrid", "hybrid-combined", "iterative"])
            p.add_argument("--jump-scale", dest="jump_scale",
                           help="fix the jump constant instead of the grid sweep")
            p.add_argument("--no-exact", action="store_true", dest="no_exact",
                           help="skip the exact rational reconstruction")

    p = sub.add_parser("synth", help="synthesize a certificate")
    common(p)
    p.set_defaults(fn=cmd_synth)

    p = sub.add_parser("check", help="verify an external certificate")
    p.add_argument("problem")
    p.add_argument("certificate")
    p.add_argument("--out", default="out")
    p.add_argument("--no-exact", action="store_true", dest="no_exact")
    p.set_defaults(fn=cmd_check)

    p = sub.add_parser("plotdata", help="emit CSV plot data")
    p.add_argument("problem")
    p.add_argument("--certificate")
    p.add_argument("--theta", help="semicolon-separated alpha,beta pairs, "
                                   "e.g. '-1,0;-1,2;-4,1.5'")
    p.add_argument("--theta0", type=float, default=-1.0)
    p.add_argument("--t-end", type=float, default=5.0, dest="t_end")
    p.add_argument("--xmin", type=float, default=-3.0)
    p.add_argument("--xmax", type=float, default=3.0)
    p.add_argument("--ymin", type=float, default=-3.0)
    p.add_argument("--ymax", type=float, default=3.0)
    p.add_argument("--resolution", type=int, default=41)
    p.add_argument("--out", default="out")
    p.set_defaults(fn=cmd_plotdata)

    p = sub.add_parser("bench", help="run the benchmark registry")
    p.add_argument("--filter", default="", help="substring case filter")
    p.add_argument("--slow", action="store_true", help="include slow cases")
    p.add_argument("--workers", type=int, default=None,
                   help=f"parallel workers (default ${''}SOSBARRIER_WORKERS or 1)")
    p.set_defaults(fn=cmd_bench)

    p = sub.add_parser("export-sdpa", help="write the assembled SDP (SDPA sparse)")
    common(p)
    p.set_defaults(fn=cmd_export_sdpa)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.fn(args)
    except SystemExit:
        raise
    except FileNotFoundError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR
    except Exception as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
