"""Benchmark registry reproducing the shipped example problems.

Each case runs one synthesis pipeline on a problem file from the package
data and compares the outcome against the expected status and certificate
degree.  Wall-clock numbers are printed for information only; they are never
asserted (they are machine-bound).  Cases marked ``report_only`` (the
literal set readings, whose unsafe regions are empty) and ``slow`` never
fail the run unless explicitly selected.
"""

from __future__ import annotations

import os
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field as dc_field
from importlib import resources
from typing import Optional

from .problemfile import Problem, parse_problem_text
from .synth import SynthOptions, SynthReport, synth_combined, synth_gbc, \
    synth_hybrid, synth_hybrid_combined

WORKER_ENV = "SOSBARRIER_WORKERS"


@dataclass(frozen=True)
class BenchmarkCase:
    case_id: str
    problem: str                 # package data file name
    pipeline: str                # single | combined | hybrid | hybrid-combined
    expected_status: str         # feasible | infeasible
    expected_degree: Optional[int] = None  # only for feasible cases
    psi_override: Optional[tuple] = None   # (alpha, beta) overriding the file
    degree_override: Optional[int] = None
    variant: str = "squared"     # set-reading variant
    report_only: bool = False
    slow: bool = False
    source: str = ""

    def __post_init__(self):
        if self.expected_status != "feasible" and self.expected_degree is not None:
            raise ValueError("expected degree only applies to feasible cases")


REGISTRY: tuple[BenchmarkCase, ...] = (
    BenchmarkCase("e1-single", "example1.prob", "single", "feasible", 2,
                  source="planar cubic-interaction system, quadratic comparison"),
    BenchmarkCase("e2-combined", "example2.prob", "combined", "feasible", 8,
                  slow=True,
                  source="quadratic-interaction system, combined certificate"),
    BenchmarkCase("e2-single-contrast", "example2.prob", "single", "infeasible",
                  slow=True,
                  source="no single certificate at the same settings"),
    BenchmarkCase("e2-literal", "example2-literal.prob", "combined", "feasible", 8,
                  variant="literal", report_only=True,
                  source="literal set reading (empty unsafe region)"),
    BenchmarkCase("e3-single", "example3.prob", "single", "feasible", 6,
                  source="farther unsafe ball, quadratic comparison"),
    BenchmarkCase("e3-exp-deg6", "example3.prob", "single", "infeasible",
                  psi_override=(-4, 0),
                  source="linear comparison fails at degree 6"),
    BenchmarkCase("e3-exp-deg8", "example3.prob", "single", "feasible", 8,
                  psi_override=(-4, 0), degree_override=8,
                  source="linear comparison needs degree 8"),
    BenchmarkCase("e3-literal", "example3-literal.prob", "single", "feasible", 6,
                  variant="literal", report_only=True,
                  source="literal set reading (empty unsafe region)"),
    BenchmarkCase("e4-combined", "example4.prob", "combined", "feasible", 4,
                  source="Duffing-like oscillator, combined certificate"),
    BenchmarkCase("e5-hybrid-combined", "example5.prob", "hybrid-combined",
                  "feasible", 2,
                  source="two-mode automaton with shell guards"),
)


@dataclass
class BenchResult:
    case_id: str
    status: str
    expected_status: str
    degree: Optional[int]
    expected_degree: Optional[int]
    synth_seconds: float
    check_seconds: float
    verdict: Optional[str]
    report_only: bool
    error: Optional[str] = None

    @property
    def ok(self) -> bool:
        if self.report_only:
            return True
        if self.error:
            return False
        if self.status != self.expected_status:
            return False
        if self.expected_degree is not None and self.degree is not None:
            return self.degree <= self.expected_degree
        return True


def load_problem(name: str) -> Problem:
    text = resources.files("sosbarrier").joinpath("problems", name).read_text()
    return parse_problem_text(text)


def run_case(case: BenchmarkCase, opts: SynthOptions | None = None) -> BenchResult:
    try:
        problem = load_problem(case.problem)
        degree = case.degree_override or problem.template_degree or 2
        if case.psi_override is not None:
            from .system import PsiFunction
            psi = PsiFunction.quadratic(*case.psi_override)
        else:
            psi = problem.psi_for(problem.automaton.mode_ids[0])
        opts = opts or SynthOptions()
        t0 = time.perf_counter()
        if case.pipeline == "single":
            rep = synth_gbc(problem.single_system, psi, degree, opts,
                            mode_id=problem.automaton.mode_ids[0])
        elif case.pipeline == "combined":
            rep = synth_combined(problem.single_system, psi, psi, degree, opts,
                                 mode_id=problem.automaton.mode_ids[0])
        elif case.pipeline == "hybrid":
            rep = synth_hybrid(problem.automaton, psi, degree, opts)
        elif case.pipeline == "hybrid-combined":
            rep = synth_hybrid_combined(problem.automaton, psi, psi, degree, opts)
        else:
            raise ValueError(f"unknown pipeline {case.pipeline!r}")
        synth_s = time.perf_counter() - t0

        achieved = None
        verdict = None
        check_s = 0.0
        if rep.ok:
            from .verify import verify_certificate
            achieved = max(p.degree for p in rep.certificate.phi.values())
            t1 = time.perf_counter()
            verification = verify_certificate(rep.certificate, problem.automaton,
                                              exact=opts.exact)
            check_s = time.perf_counter() - t1
            verdict = verification.overall
        return BenchResult(case.case_id, rep.status, case.expected_status,
                           achieved, case.expected_degree, synth_s, check_s,
                           verdict, case.report_only)
    except Exception as exc:  # collected, not fatal
        return BenchResult(case.case_id, "error", case.expected_status, None,
                           case.expected_degree, 0.0, 0.0, None,
                           case.report_only, error=f"{type(exc).__name__}: {exc}")


def select_cases(pattern: str = "", include_slow: bool = True) -> list[BenchmarkCase]:
    out = []
    for case in REGISTRY:
        if pattern and pattern not in case.case_id:
            continue
        if case.slow and not include_slow and pattern not in (case.case_id,):
            continue
        out.append(case)
    return out


def run_bench(pattern: str = "", include_slow: bool = False,
              workers: Optional[int] = None,
              opts: SynthOptions | None = None) -> list[BenchResult]:
    """Run matching cases (in parallel when workers > 1); results are ordered
    by case id regardless of completion order."""
    cases = select_cases(pattern, include_slow)
    if workers is None:
        workers = int(os.environ.get(WORKER_ENV, "1") or "1")
    if workers > 1 and len(cases) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(run_case, cases))
    else:
        results = [run_case(c, opts) for c in cases]
    return sorted(results, key=lambda r: r.case_id)


def format_table(results: list[BenchResult]) -> str:
    header = f"{'case':24s} {'status':12s} {'expect':12s} {'deg':5s} {'want':5s} " \
             f"{'synth(s)':9s} {'verdict':20s} ok"
    lines = [header, "-" * len(header)]
    for r in results:
        deg = "-" if r.degree is None else str(r.degree)
        want = "-" if r.expected_degree is None else str(r.expected_degree)
        flag = "ok" if r.ok else ("info" if r.report_only else "FAIL")
        verdict = r.verdict or (r.error or "-")
        lines.append(f"{r.case_id:24s} {r.status:12s} {r.expected_status:12s} "
                     f"{deg:5s} {want:5s} {r.synth_seconds:9.2f} {verdict[:20]:20s} {flag}")
    return "\n".join(lines)
