"""Certificate synthesis pipelines.

Four pipelines share one round engine:

  * ``synth_gbc``            -- single certificate phi for a continuous system,
  * ``synth_combined``       -- pair (chi, phi) with SOS coupling delta,
  * ``synth_hybrid``         -- per-mode phi_q with jump conditions,
  * ``synth_hybrid_combined``-- per-mode (chi_q, phi_q, delta_q) with four jump
                                condition families per edge.

The flow inequality ``L_f(phi) - psi(phi) <= 0`` is affine in phi's
coefficients only when psi is linear.  For the quadratic family the engine
follows the iterative scheme: round j replaces the term ``a_i theta^i`` by
``a_i * theta * anchor^(i-1)`` with the anchor taken from the previous round
(round 0 starts from the zero anchor), each round being one SDP.  Rounds are
solved in soft-margin mode so an infeasible intermediate round still yields
an anchor; the final candidate is always re-verified against the true
nonlinear psi.  For beta > 0 a sound polish pass replaces ``beta*phi^2`` by
its tangent minorant ``beta*(2*phi*anchor - anchor^2)`` (the difference is
the square ``beta*(phi-anchor)^2``), so a polished round that closes with a
positive margin certifies the true condition outright.  Degree-2 problems
whose initial set is a centered ball get a final deterministic fallback that
sweeps the level r of ``sum (x_i - c_i)^2 - r``.

The coupling products that are not affine -- delta*chi in the combined
conditions and c_e*phi in the jump conditions -- are handled by the
two-stage scheme (synthesize the chi family first, then (phi, delta) with
chi fixed) and by a deterministic grid over the shared jump constant.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from typing import Optional, Sequence

import numpy as np

from .poly import (
    FLOAT,
    RATIONAL,
    Polynomial,
    UnivariatePoly,
    compose,
    lie_derivative,
    monomial_basis,
)
from .sdp import SolverSettings, solve
from .sosprog import (
    GramBlock,
    ParametricPolynomial,
    SOSProgram,
    StructurallyInfeasible,
    extract,
)
from .system import (
    ContinuousSystem,
    Edge,
    HybridAutomaton,
    PsiFunction,
    SemialgebraicSet,
    psi_admissible,
)
from .verify import (
    Condition,
    VerificationReport,
    check_condition,
    min_on_set_samples,
)

DEFAULT_EPSILON = Fraction(1, 100_000)
JUMP_SCALE_GRID = (0.0, 0.25, 0.5, 1.0, 2.0, 4.0)
FEAS_EPS = 1e-7


@dataclass
class SynthOptions:
    mult_degree: Optional[int] = None      # default: template degree rounded up to even
    epsilon: Fraction = DEFAULT_EPSILON
    # separation strictness used inside synthesis rounds; for beta >= 0 any
    # certificate scales up to meet it, so a strong working value costs no
    # generality and keeps the scale of candidates pinned away from zero
    working_epsilon: float = 0.1
    polish_rounds: int = 25
    shape_grid: int = 23                   # levels for the centered degree-2 fallback
    jump_scales: Sequence[float] = JUMP_SCALE_GRID
    fixed_jump_scale: Optional[float] = None
    alternations: int = 1
    assume_psi_admissible: bool = False
    sample_budget: int = 2048
    verify_budget: int = 4096
    decision_trace_penalty: float = 1e-4
    probe_margin: float = 1e-4
    solver: SolverSettings = dc_field(default_factory=SolverSettings)
    snap_denominator: int = 2**20
    exact: bool = True                     # attempt exact reconstruction at the end
    pin_chi_zero: bool = False             # degeneration switch for combined kinds
    pin_multiplier_one: bool = False       # fix set multipliers to the constant 1
    trace_cap: float = 1e5

    def mult_degree_for(self, template_degree: int) -> int:
        if self.mult_degree is not None:
            return self.mult_degree
        return template_degree + (template_degree % 2)


@dataclass
class Certificate:
    """Synthesized (or externally supplied) certificate data, exact where
    possible; ``gram_data`` carries solver Grams keyed by condition id for
    the verifier's first exact attempt."""

    kind: str  # single | combined | hybrid | hybrid-combined
    phi: dict[str, Polynomial]
    psi: dict[str, PsiFunction]
    chi: dict[str, Polynomial] = dc_field(default_factory=dict)
    delta: dict[str, Polynomial] = dc_field(default_factory=dict)
    psi_chi: dict[str, PsiFunction] = dc_field(default_factory=dict)
    jump_constants: dict[str, tuple[Fraction, ...]] = dc_field(default_factory=dict)
    epsilon: Fraction = DEFAULT_EPSILON
    gram_data: dict = dc_field(default_factory=dict)
    meta: dict = dc_field(default_factory=dict)

    @property
    def is_combined(self) -> bool:
        return self.kind in ("combined", "hybrid-combined")


@dataclass
class SynthReport:
    status: str  # feasible | infeasible
    certificate: Optional[Certificate]
    verification: Optional[VerificationReport]
    margin: float
    messages: list[str] = dc_field(default_factory=list)
    rounds: list[dict] = dc_field(default_factory=list)

    @property
    def ok(self) -> bool:
        return self.status == "feasible" and self.certificate is not None


class SynthesisError(ValueError):
    pass


def edge_key(automaton: HybridAutomaton, idx: int) -> str:
    e = automaton.edges[idx]
    return f"{e.source}->{e.target}#{idx}"


# ----------------------------------------------------------------------
# comparison-function plumbing

@dataclass
class LinearizedPsi:
    """psi'(theta) = const(x) + sum_k coeff_k * mult_k(x) * theta."""

    terms: tuple[tuple[float, Polynomial], ...]
    const: Polynomial

    @classmethod
    def exact_linear(cls, psi: PsiFunction, nvars: int) -> "LinearizedPsi":
        one = Polynomial.constant(nvars, 1.0, FLOAT)
        a0 = float(psi.poly.coefficient(0))
        terms = []
        a1 = float(psi.poly.coefficient(1))
        if a1:
            terms.append((a1, one))
        return cls(tuple(terms), Polynomial.constant(nvars, a0, FLOAT))

    @classmethod
    def round_formula(cls, psi: UnivariatePoly, anchor: Polynomial, upto: int) -> "LinearizedPsi":
        """Round-j substitute: a_0 kept verbatim, a_i theta^i -> a_i theta
        anchor^(i-1) for 1 <= i <= upto."""
        nvars = anchor.nvars
        anchor = anchor.to_float()
        terms = []
        power = Polynomial.constant(nvars, 1.0, FLOAT)
        for i in range(1, upto + 1):
            a_i = float(psi.coefficient(i))
            if a_i:
                terms.append((a_i, power))
            power = power * anchor
        return cls(tuple(terms), Polynomial.constant(nvars, float(psi.coefficient(0)), FLOAT))

    @classmethod
    def tangent(cls, psi: PsiFunction, anchor: Polynomial) -> "LinearizedPsi":
        """Sound minorant of alpha t + beta t^2 at the anchor, for beta > 0."""
        alpha, beta = float(psi.alpha), float(psi.beta)
        if beta <= 0:
            raise SynthesisError("tangent linearization needs beta > 0")
        anchor = anchor.to_float()
        nvars = anchor.nvars
        one = Polynomial.constant(nvars, 1.0, FLOAT)
        terms = [(alpha, one), (2.0 * beta, anchor)]
        return cls(tuple(terms), (anchor * anchor).scale(-beta))

    def apply(self, phi: ParametricPolynomial) -> ParametricPolynomial:
        out = ParametricPolynomial.known(self.const)
        for coeff, mult in self.terms:
            out = out + phi.mul_known(mult).scale(coeff)
        return out


def gbc_residual(phi: Polynomial, psi: PsiFunction, system: ContinuousSystem) -> Polynomial:
    """Flow-condition polynomial -L_f(phi) + psi(phi); nonneg on the domain
    means the relaxed inductiveness inequality holds."""
    return -lie_derivative(phi, system.field_vec) + compose(psi.poly, phi)


def _check_psi(psi: PsiFunction, opts: SynthOptions) -> None:
    try:
        ok = psi_admissible(psi)
    except Exception:
        if opts.assume_psi_admissible:
            return
        raise
    if not ok:
        raise SynthesisError(
            "psi is not admissible (alpha must be negative in the quadratic family)"
        )


# ----------------------------------------------------------------------
# round engine

@dataclass
class ModeRoundSpec:
    mode: str
    system: ContinuousSystem
    lin_psi: LinearizedPsi
    template_degree: Optional[int] = None      # None -> phi is known
    known_phi: Optional[Polynomial] = None
    chi: Optional[Polynomial] = None           # known chi for the delta coupling
    delta_degree: Optional[int] = None         # half-degree basis comes from this
    separation: str = "hard"                   # hard | soft | none
    fixed_separation: Optional[float] = None   # pins the soft level (phase B)


@dataclass
class JumpRoundSpec:
    edge: Edge
    name: str
    scale: float
    src_mode: Optional[str]                    # None -> known source polynomial
    tgt_mode: Optional[str]
    src_known: Optional[Polynomial] = None
    tgt_known: Optional[Polynomial] = None


@dataclass
class RoundResult:
    feasible: bool
    margin: float
    separation: Optional[float]
    phi: dict[str, Polynomial]
    delta: dict[str, Polynomial]
    grams: dict[str, list]
    counts: tuple[int, int]  # (blocks, constraints)
    status: str


def _phi_templates(prog: SOSProgram, specs: Sequence[ModeRoundSpec]) -> dict[str, ParametricPolynomial]:
    out = {}
    for ms in specs:
        if ms.template_degree is not None:
            out[ms.mode] = prog.new_template(f"phi[{ms.mode}]", ms.template_degree)
        else:
            out[ms.mode] = ParametricPolynomial.known(ms.known_phi.to_float())
    return out


def _encode_round(
    specs: Sequence[ModeRoundSpec],
    jumps: Sequence[JumpRoundSpec],
    opts: SynthOptions,
    fixed_margin: float = 0.0,
) -> tuple[SOSProgram, dict[str, ParametricPolynomial], dict[str, GramBlock]]:
    nvars = specs[0].system.nvars
    if fixed_margin > 0.0:
        # polishing phase: interior cushion pinned, coefficient norm minimized
        prog = SOSProgram(nvars, margin_mode="none", trace_cap=opts.trace_cap,
                          trace_penalty=1.0)
    else:
        # decision phase: margin maximization, regularized by a trace penalty
        # (ambiguous small-margin reads get a pinned-margin probe afterwards)
        prog = SOSProgram(nvars, margin_mode="soft", trace_cap=opts.trace_cap,
                          trace_penalty=opts.decision_trace_penalty)
    phis = _phi_templates(prog, specs)
    delta_blocks: dict[str, GramBlock] = {}
    fm = fixed_margin

    for ms in specs:
        q = ms.mode
        sysq = ms.system
        tdeg = ms.template_degree if ms.template_degree is not None else max(ms.known_phi.degree, 1)
        mdeg = opts.mult_degree_for(tdeg)
        phi = phis[q]
        if sysq.init is not None:
            prog.encode_nonneg_on_set(
                phi.scale(-1.0), sysq.init, 0 if opts.pin_multiplier_one else mdeg,
                f"init[{q}]", fixed_margin=fm)
        fvec = [f.to_float() for f in sysq.field_vec]
        flow = phi.map_linear(lambda p: -lie_derivative(p, fvec)) \
            + ms.lin_psi.apply(phi)
        ident = prog.encode_nonneg_on_set(
            flow, sysq.domain, mdeg, f"flow[{q}]", fixed_margin=fm)
        if ms.chi is not None and ms.delta_degree is not None and not ms.chi.to_float().is_zero():
            half = max(0, ms.delta_degree // 2)
            delta_blocks[q] = prog.add_extra_gram(
                ident, f"flow[{q}]/delta",
                monomial_basis(nvars, half),
                ms.chi.to_float().scale(-1.0),
            )
        if sysq.unsafe is not None and ms.separation != "none":
            if ms.fixed_separation is not None:
                level = float(ms.fixed_separation)
            else:
                level = max(float(opts.epsilon), float(opts.working_epsilon))
            sep_pp = phi - Polynomial.constant(nvars, level, FLOAT)
            prog.encode_nonneg_on_set(
                sep_pp, sysq.unsafe, mdeg, f"separation[{q}]", fixed_margin=fm)

    for js in jumps:
        nm = js.name
        src = phis[js.src_mode] if js.src_mode is not None else \
            ParametricPolynomial.known(js.src_known.to_float())
        tgt = phis[js.tgt_mode] if js.tgt_mode is not None else \
            ParametricPolynomial.known(js.tgt_known.to_float())
        resets = [r.to_float() for r in js.edge.reset]
        if js.edge.is_identity_reset:
            tgt_sub = tgt
        else:
            tgt_sub = ParametricPolynomial(
                tgt.nvars,
                tgt.fixed.substitute(resets),
                {k: v.substitute(resets) for k, v in tgt.patterns.items()},
            )
        expr = src.scale(js.scale) - tgt_sub
        if expr.is_known and expr.fixed.is_zero():
            continue  # e.g. zero jump constant against a zero chi
        mdeg = opts.mult_degree_for(max(2, expr.degree + (expr.degree % 2)))
        prog.encode_nonneg_on_set(expr, js.edge.guard, mdeg, f"jump[{nm}]",
                                  fixed_margin=fm)

    return prog, phis, delta_blocks


def _run_encoded(prog, phis, delta_blocks, opts, margin_override=None):
    try:
        problem, info = prog.assemble()
    except StructurallyInfeasible as exc:
        return None, RoundResult(False, -math.inf, None, {}, {}, {},
                                 (0, 0), f"structurally infeasible: {exc}")
    sol = solve(problem, opts.solver)
    if sol.status == "numerical-failure":
        # one retry with a gentler schedule before giving up on the round
        gentle = SolverSettings(
            threshold=max(opts.solver.threshold, 1e-8),
            shrink=0.6, max_inner=40, tol=opts.solver.tol,
            step_frac=0.9, corrector=opts.solver.corrector,
        )
        sol = solve(problem, gentle)
    if sol.status not in ("optimal", "feasible"):
        return None, RoundResult(False, -math.inf, None, {}, {}, {},
                                 (len(problem.dims), problem.m), sol.status)
    ext = extract(sol, prog, info)
    phi_out = {q: ext.instantiate(pp) for q, pp in phis.items()}
    delta_out = {}
    for q, blk in delta_blocks.items():
        gv = ext.grams[blk.name]
        delta_out[q] = _gram_sos_poly(gv.basis, gv.matrix)
    grams: dict[str, list] = {}
    for ident in prog.identities:
        grams[ident.name] = [
            (ext.grams[gb.name].basis, ext.grams[gb.name].matrix, gb.multiplicand)
            for gb in ident.grams
        ]
    margin = ext.margin if margin_override is None else margin_override
    out = RoundResult(True, margin, None, phi_out, delta_out, grams,
                      (len(problem.dims), problem.m), sol.status)
    return ext, out


def _solve_round(
    specs: Sequence[ModeRoundSpec],
    jumps: Sequence[JumpRoundSpec],
    opts: SynthOptions,
) -> RoundResult:
    """Margin decision, then certificate polishing.

    Phase A maximizes the shared margin under a stabilizing trace penalty.
    The penalty can only under-report the achievable margin, so a small read
    gets a second chance: phase A' pins a tiny margin cushion and minimizes
    the coefficient norm (a well-behaved objective), and its clean success
    certifies feasibility.  A feasible decision is finished by the same
    pinned re-solve at half the read margin, which yields moderate
    coefficients for rounding."""
    prog, phis, delta_blocks = _encode_round(specs, jumps, opts)
    ext, rr = _run_encoded(prog, phis, delta_blocks, opts)
    margin_read = rr.margin if ext is not None else -math.inf

    def pinned(tau: float):
        prog2, phis2, delta2 = _encode_round(specs, jumps, opts, fixed_margin=tau)
        return _run_encoded(prog2, phis2, delta2, opts, margin_override=tau)

    if margin_read >= FEAS_EPS:
        ext2, rr2 = pinned(min(margin_read, 1.0) / 2.0)
        if ext2 is None:
            rr.feasible = True
            return rr
        rr2.feasible = True
        rr2.margin = margin_read
        return rr2

    # the penalized read can mask a feasible instance; probe a pinned cushion
    # (the posterior verification gauntlet guards against optimistic accepts)
    ext1, rr1 = pinned(float(opts.probe_margin))
    if ext1 is not None and rr1.status in ("optimal", "feasible"):
        rr1.feasible = True
        return rr1

    if ext is None:
        return rr
    rr.feasible = False
    return rr


def _gram_sos_poly(basis, matrix) -> Polynomial:
    n = basis[0].nvars
    terms: dict[tuple[int, ...], float] = {}
    k = len(basis)
    for a in range(k):
        for b in range(a, k):
            c = float(matrix[a, b]) * (1.0 if a == b else 2.0)
            if c == 0.0:
                continue
            mono = basis[a].mul(basis[b]).exponents
            terms[mono] = terms.get(mono, 0.0) + c
    return Polynomial(n, terms, FLOAT)


def structural_counts(
    specs: Sequence[ModeRoundSpec],
    jumps: Sequence[JumpRoundSpec],
    opts: SynthOptions,
) -> tuple[int, int]:
    """(block count, constraint count) of the assembled SDP; used by the
    degeneration-equivalence checks."""
    prog, _, _ = _encode_round(specs, jumps, opts)
    problem, _ = prog.assemble()
    return len(problem.dims), problem.m


# ----------------------------------------------------------------------
# candidate handling: snapping, quick numeric screening, packaging

def snap_polynomial(p: Polynomial, max_denom: int) -> Polynomial:
    """Round float coefficients to small rationals (tiny noise snaps to 0)."""
    if p.field == RATIONAL:
        return p
    terms = {}
    for e, c in p.terms.items():
        f = Fraction(float(c)).limit_denominator(max_denom)
        if f != 0:
            terms[e] = f
    return Polynomial(p.nvars, terms, RATIONAL)


def _mode_systems(automaton: HybridAutomaton) -> dict[str, ContinuousSystem]:
    return {q: s for q, s in automaton.modes}


def _flow_target(phi: Polynomial, psi: PsiFunction, system: ContinuousSystem,
                 chi: Optional[Polynomial] = None,
                 delta: Optional[Polynomial] = None) -> Polynomial:
    t = gbc_residual(phi, psi, system)
    if chi is not None and delta is not None:
        t = t + delta * chi
    return t


def _screen_certificate(cert: "Certificate", automaton: HybridAutomaton,
                        budget: int, tol: float = -1e-7) -> tuple[bool, str]:
    """Cheap sampled screening of every certificate condition."""
    from .verify import certificate_conditions

    for cond in certificate_conditions(cert, automaton):
        smin, _, _ = min_on_set_samples(cond.target, cond.region, budget)
        if smin is not math.inf and smin < tol:
            return False, f"{cond.cid}: sampled minimum {smin:.3e}"
    return True, ""


def _snap_cert(cert: Certificate, max_denom: int) -> Certificate:
    return Certificate(
        kind=cert.kind,
        phi={q: snap_polynomial(p, max_denom) for q, p in cert.phi.items()},
        psi=cert.psi,
        chi={q: snap_polynomial(p, max_denom) for q, p in cert.chi.items()},
        delta={q: snap_polynomial(p, max_denom) for q, p in cert.delta.items()},
        psi_chi=cert.psi_chi,
        jump_constants=cert.jump_constants,
        epsilon=cert.epsilon,
        gram_data=cert.gram_data,
        meta=dict(cert.meta),
    )


def _exactify_cert(cert: Certificate) -> Certificate:
    """Fallback when snapping breaks margins: floats are exact dyadics."""
    return Certificate(
        kind=cert.kind,
        phi={q: p.to_rational() for q, p in cert.phi.items()},
        psi=cert.psi,
        chi={q: p.to_rational() for q, p in cert.chi.items()},
        delta={q: p.to_rational() for q, p in cert.delta.items()},
        psi_chi=cert.psi_chi,
        jump_constants=cert.jump_constants,
        epsilon=cert.epsilon,
        gram_data=cert.gram_data,
        meta=dict(cert.meta),
    )


def _package(
    raw: Certificate,
    automaton: HybridAutomaton,
    opts: SynthOptions,
    rounds: list[dict],
    margin: float,
    messages: list[str],
) -> SynthReport:
    """Snap to rationals, re-screen, verify; only verified output ships."""
    from .verify import verify_certificate

    candidates = []
    for denom in (opts.snap_denominator, opts.snap_denominator * 2**12, 2**40):
        snapped = _snap_cert(raw, denom)
        ok, why = _screen_certificate(snapped, automaton, opts.sample_budget)
        if ok:
            candidates.append(snapped)
            break
    if not candidates:
        snapped = _exactify_cert(raw)
        ok, why = _screen_certificate(snapped, automaton, opts.sample_budget)
        if ok:
            candidates.append(snapped)
        else:
            messages.append(f"candidate failed post-snap screening ({why})")
            return SynthReport("infeasible", None, None, margin, messages, rounds)

    cert = candidates[0]
    report = verify_certificate(cert, automaton, budget=opts.verify_budget,
                                exact=opts.exact, solver=opts.solver)
    if report.overall in ("refuted", "unchecked"):
        messages.append(f"posterior verification verdict: {report.overall}")
        return SynthReport("infeasible", None, report, margin, messages, rounds)
    return SynthReport("feasible", cert, report, margin, messages, rounds)


# ----------------------------------------------------------------------
# geometric anchor seeds and the centered-shape fallback

def _detect_center(region: Optional[SemialgebraicSet]) -> Optional[tuple[Fraction, ...]]:
    """Center of a single-inequality ball-like region c0 - sum a_i (x_i-c_i)^2."""
    if region is None or len(region.inequalities) != 1:
        return None
    g = region.inequalities[0].to_rational()
    n = g.nvars
    center = []
    for i in range(n):
        e2 = tuple(2 if k == i else 0 for k in range(n))
        a = g.terms.get(e2)
        if a is None or a >= 0:
            return None
        e1 = tuple(1 if k == i else 0 for k in range(n))
        b_ = g.terms.get(e1, Fraction(0))
        center.append(-b_ / (2 * a))
    for e in g.terms:
        if sum(e) > 2 or sum(e) == 2 and max(e) != 2:
            return None  # cross terms or higher degree: not a plain ball
    return tuple(center)


def _shape_levels(system: ContinuousSystem, center: Sequence[Fraction],
                  count: int, budget: int = 512) -> list[Fraction]:
    """Grid of levels r between the init and unsafe extents of the shape
    sum (x_i - c_i)^2, snapped to small rationals."""
    n = system.nvars
    shape = Polynomial.zero(n, RATIONAL)
    for i, c in enumerate(center):
        xi = Polynomial.variable(n, i) - Polynomial.constant(n, c)
        shape = shape + xi * xi
    lo = -math.inf
    hi = math.inf
    if system.init is not None:
        smin, pt, _ = min_on_set_samples(shape.scale(-1), system.init, budget)
        if smin is not math.inf:
            lo = -smin  # max of shape over init
    if system.unsafe is not None:
        smin, pt, _ = min_on_set_samples(shape, system.unsafe, budget)
        if smin is not math.inf:
            hi = smin  # min of shape over unsafe
    if not (math.isfinite(lo) and math.isfinite(hi) and lo < hi):
        return []
    out = []
    for k in range(1, count + 1):
        level = lo + (hi - lo) * k / (count + 1)
        out.append(Fraction(level).limit_denominator(1000))
    return out


def _shape_polynomial(nvars: int, center: Sequence[Fraction], level: Fraction) -> Polynomial:
    shape = Polynomial.constant(nvars, -level)
    for i, c in enumerate(center):
        xi = Polynomial.variable(nvars, i) - Polynomial.constant(nvars, c)
        shape = shape + xi * xi
    return shape


# ----------------------------------------------------------------------
# single-certificate pipeline

def synth_gbc(
    system: ContinuousSystem,
    psi: PsiFunction,
    template_degree: int,
    opts: SynthOptions | None = None,
    mode_id: str = "q0",
) -> SynthReport:
    """Synthesize a single certificate for the relaxed flow condition."""
    opts = opts or SynthOptions()
    if template_degree < 1:
        raise SynthesisError("template degree must be >= 1")
    _check_psi(psi, opts)
    automaton = HybridAutomaton.single_mode(system, mode_id)
    rounds: list[dict] = []
    messages: list[str] = []

    def attempt(lin: LinearizedPsi, label: str) -> RoundResult:
        rr = _solve_round(
            [ModeRoundSpec(mode_id, system, lin, template_degree)], [], opts)
        rounds.append({"label": label, "margin": rr.margin, "status": rr.status})
        return rr

    def finish(rr: RoundResult, how: str) -> SynthReport:
        cert = Certificate(
            kind="single", phi={mode_id: rr.phi[mode_id]}, psi={mode_id: psi},
            epsilon=opts.epsilon, gram_data=_remap_grams(rr.grams),
            meta={"pipeline": "single", "method": how, "degree": template_degree},
        )
        return _package(cert, automaton, opts, rounds, rr.margin, messages)

    nonlinear = psi.poly.degree >= 2
    if not nonlinear:
        lin = LinearizedPsi.exact_linear(psi, system.nvars)
        rr = attempt(lin, "affine")
        if rr.feasible:
            return finish(rr, "affine")
        messages.append(f"no certificate at these settings (margin {rr.margin:.3e})")
        return SynthReport("infeasible", None, None, rr.margin, messages, rounds)

    # literal iterative rounds (s+1 of them), soft margins throughout
    s = psi.poly.degree
    anchor = Polynomial.zero(system.nvars, FLOAT)
    rr = None
    for j in range(s + 1):
        lin = LinearizedPsi.round_formula(psi.poly, anchor, j)
        rr = attempt(lin, f"iterative[{j}]")
        if rr.status not in ("optimal", "feasible"):
            messages.append(f"iterative round {j} failed: {rr.status}")
            break
        anchor = rr.phi[mode_id]
    if rr is not None and rr.feasible and rr.phi:
        cand = Certificate(
            kind="single", phi={mode_id: rr.phi[mode_id]}, psi={mode_id: psi},
            epsilon=opts.epsilon, meta={})
        ok, why = _screen_certificate(cand, automaton, opts.sample_budget)
        if ok:
            return finish(rr, "iterative")
        messages.append(f"iterative candidate fails the true flow condition ({why})")

    beta = float(psi.beta) if psi.in_quadratic_family else 0.0
    if beta > 0:
        got = _tangent_polish(system, psi, template_degree, anchor, opts, rounds,
                              messages, mode_id)
        if got is not None:
            return finish(got, "tangent-polish")

    if template_degree == 2:
        got = _shape_fallback(system, psi, opts, rounds, messages, mode_id)
        if got is not None:
            return finish(got, "shape-grid")

    last_margin = rounds[-1]["margin"] if rounds else -math.inf
    messages.append("no certificate at these settings")
    return SynthReport("infeasible", None, None, last_margin, messages, rounds)


def _tangent_polish(system, psi, template_degree, start_anchor, opts, rounds,
                    messages, mode_id) -> Optional[RoundResult]:
    """Convex-concave polish: each round solves the sound tangent restriction
    anchored at the previous candidate; a positive margin certifies the true
    flow condition because the dropped term beta*(phi-anchor)^2 is a square."""
    anchors: list[Polynomial] = []
    if start_anchor is not None and not start_anchor.is_zero():
        anchors.append(start_anchor)
    center = _detect_center(system.init)
    if center is not None:
        for level in _shape_levels(system, center, 3):
            anchors.append(_shape_polynomial(system.nvars, center, level).to_float())
    if not anchors:
        anchors.append(Polynomial.zero(system.nvars, FLOAT))
    for seed_idx, anchor in enumerate(anchors):
        best = -math.inf
        for it in range(opts.polish_rounds):
            lin = LinearizedPsi.tangent(psi, anchor)
            rr = _solve_round(
                [ModeRoundSpec(mode_id, system, lin, template_degree)], [], opts)
            rounds.append({"label": f"tangent[{seed_idx}.{it}]", "margin": rr.margin,
                           "status": rr.status})
            if rr.status not in ("optimal", "feasible"):
                break
            if rr.margin >= FEAS_EPS:
                return rr
            if rr.margin <= best + 1e-9:
                break
            best = rr.margin
            anchor = rr.phi[mode_id]
    return None


def _shape_fallback(system, psi, opts, rounds, messages, mode_id) -> Optional[RoundResult]:
    """Deterministic sweep of centered quadratic certificates (known phi)."""
    center = _detect_center(system.init)
    if center is None or system.unsafe is None:
        return None
    levels = _shape_levels(system, center, opts.shape_grid)
    for level in levels:
        phi = _shape_polynomial(system.nvars, center, level)
        # phi fixed, so the true psi keeps the round affine
        lin = LinearizedPsi(tuple(), compose(psi.poly, phi).to_float())
        rr = _solve_round(
            [ModeRoundSpec(mode_id, system, lin, None, known_phi=phi)], [], opts)
        rounds.append({"label": f"shape[r={level}]", "margin": rr.margin,
                       "status": rr.status})
        if rr.feasible:
            return rr
    return None


def _remap_grams(grams: dict[str, list], renames: dict[str, str] | None = None) -> dict:
    if not renames:
        return dict(grams)
    out = {}
    for k, v in grams.items():
        out[renames.get(k, k)] = v
    return out


# ----------------------------------------------------------------------
# literal iterative pipeline (the nonlinear-psi handler, exposed directly)

def iterative_synth(
    system: ContinuousSystem,
    psi: PsiFunction | UnivariatePoly,
    template_degree: int,
    opts: SynthOptions | None = None,
    mode_id: str = "q0",
) -> SynthReport:
    """Run the s+1 linearization rounds for psi of degree s and verify the
    last round's candidate against the true nonlinear psi.

    Round j uses a_0 + sum_{i=1..j} a_i*theta*anchor^(i-1) with the anchor
    from round j-1 (anchor 0 initially); the i = 0 term is kept verbatim
    because the literal theta*anchor^(-1) reading is undefined.  Rounds are
    soft: an intermediate round with negative margin still anchors the next
    one, and only a solver failure stops the loop early.
    """
    opts = opts or SynthOptions()
    if isinstance(psi, UnivariatePoly):
        psi = PsiFunction(psi)
    if psi.poly.coefficient(0) != 0:
        raise SynthesisError("unsupported psi: nonzero constant term "
                             "(outside the admissible family)")
    _check_psi(psi, opts)
    automaton = HybridAutomaton.single_mode(system, mode_id)
    s = max(psi.poly.degree, 0)
    rounds: list[dict] = []
    messages: list[str] = ["linearized-round pipeline; i>=1 terms anchored, "
                           "constant term kept verbatim"]
    anchor = Polynomial.zero(system.nvars, FLOAT)
    rr = None
    for j in range(s + 1):
        lin = LinearizedPsi.round_formula(psi.poly, anchor, j)
        rr = _solve_round([ModeRoundSpec(mode_id, system, lin, template_degree)], [], opts)
        rounds.append({"label": f"round[{j}]", "margin": rr.margin, "status": rr.status})
        if rr.status not in ("optimal", "feasible"):
            messages.append(f"round {j} infeasible: {rr.status}")
            return SynthReport("infeasible", None, None, rr.margin, messages, rounds)
        anchor = rr.phi[mode_id]
    cert = Certificate(
        kind="single", phi={mode_id: anchor}, psi={mode_id: psi},
        epsilon=opts.epsilon, gram_data={},
        meta={"pipeline": "iterative", "rounds": s + 1, "degree": template_degree},
    )
    ok, why = _screen_certificate(cert, automaton, opts.sample_budget)
    if not ok:
        messages.append(f"iterative fixed point not a certificate ({why})")
        return SynthReport("infeasible", None, None, rr.margin, messages, rounds)
    return _package(cert, automaton, opts, rounds, rr.margin, messages)


# ----------------------------------------------------------------------
# hybrid single-certificate pipeline

def _as_psi_map(psi, automaton: HybridAutomaton) -> dict[str, PsiFunction]:
    if isinstance(psi, PsiFunction):
        return {q: psi for q in automaton.mode_ids}
    return dict(psi)


def _as_degree_map(degree, automaton: HybridAutomaton) -> dict[str, int]:
    if isinstance(degree, int):
        return {q: degree for q in automaton.mode_ids}
    return dict(degree)


def _jump_specs_phi(automaton: HybridAutomaton, scale: float) -> list[JumpRoundSpec]:
    out = []
    for idx, e in enumerate(automaton.edges):
        out.append(JumpRoundSpec(
            edge=e, name=f"{edge_key(automaton, idx)}:phi-phi", scale=scale,
            src_mode=e.source, tgt_mode=e.target))
    return out


def _hybrid_candidate(
    automaton: HybridAutomaton,
    psis: dict[str, PsiFunction],
    degrees: dict[str, int],
    scale: float,
    opts: SynthOptions,
    rounds: list[dict],
) -> Optional[RoundResult]:
    """Literal rounds over all modes jointly, then tangent polish if needed."""
    systems = _mode_systems(automaton)
    s = max((max(p.poly.degree, 0) for p in psis.values()), default=0)
    anchors = {q: Polynomial.zero(automaton.nvars, FLOAT) for q in automaton.mode_ids}
    jumps = _jump_specs_phi(automaton, scale)
    rr = None
    for j in range(s + 1):
        specs = [
            ModeRoundSpec(q, systems[q],
                          LinearizedPsi.round_formula(psis[q].poly, anchors[q], j),
                          degrees[q])
            for q in automaton.mode_ids
        ]
        rr = _solve_round(specs, jumps, opts)
        rounds.append({"label": f"c={scale}:iterative[{j}]", "margin": rr.margin,
                       "status": rr.status})
        if rr.status not in ("optimal", "feasible"):
            return None
        anchors = dict(rr.phi)
    if rr.feasible:
        return rr
    # tangent polish for quadratic positive-beta modes
    if all(p.in_quadratic_family and float(p.beta) > 0 for p in psis.values()):
        best = -math.inf
        for it in range(opts.polish_rounds):
            specs = [
                ModeRoundSpec(q, systems[q], LinearizedPsi.tangent(psis[q], anchors[q]),
                              degrees[q])
                for q in automaton.mode_ids
            ]
            rr = _solve_round(specs, jumps, opts)
            rounds.append({"label": f"c={scale}:tangent[{it}]", "margin": rr.margin,
                           "status": rr.status})
            if rr.status not in ("optimal", "feasible"):
                return None
            if rr.margin >= FEAS_EPS:
                return rr
            if rr.margin <= best + 1e-9:
                return None
            best = rr.margin
            anchors = dict(rr.phi)
    return None


def synth_hybrid(
    automaton: HybridAutomaton,
    psi,
    degree,
    opts: SynthOptions | None = None,
) -> SynthReport:
    """Per-mode certificates with jump conditions c*phi_src - phi_tgt(reset) >= 0.

    The jump constant is bilinear against the unknown templates, so a shared
    value is swept over a deterministic grid (or fixed via options)."""
    opts = opts or SynthOptions()
    psis = _as_psi_map(psi, automaton)
    degrees = _as_degree_map(degree, automaton)
    for q, p in psis.items():
        _check_psi(p, opts)
    rounds: list[dict] = []
    messages: list[str] = []
    scales = ([opts.fixed_jump_scale] if opts.fixed_jump_scale is not None
              else list(opts.jump_scales))
    if not automaton.edges:
        scales = [0.0]
    for scale in scales:
        rr = _hybrid_candidate(automaton, psis, degrees, scale, opts, rounds)
        if rr is None:
            continue
        cert = Certificate(
            kind="hybrid", phi=dict(rr.phi), psi=psis,
            jump_constants={
                edge_key(automaton, i): (Fraction(scale).limit_denominator(64),)
                for i in range(len(automaton.edges))
            },
            epsilon=opts.epsilon, gram_data=_remap_grams(rr.grams),
            meta={"pipeline": "hybrid", "jump_scale": scale, "degrees": degrees},
        )
        report = _package(cert, automaton, opts, rounds, rr.margin, messages)
        if report.ok:
            return report
        messages.append(f"candidate at jump scale {scale} failed verification")
    messages.append("no certificate at these settings")
    return SynthReport("infeasible", None, None,
                       max((r["margin"] for r in rounds), default=-math.inf),
                       messages, rounds)


# ----------------------------------------------------------------------
# combined pipelines (two-stage: chi family first, then phi with delta*chi)

SEPARATION_LADDER = (0.1, 0.01, -0.05, -0.25, -1.0)


def _stage1_chi(
    automaton: HybridAutomaton,
    psis1: dict[str, PsiFunction],
    chi_degrees: dict[str, int],
    scale: float,
    opts: SynthOptions,
    rounds: list[dict],
) -> Optional[dict[str, Polynomial]]:
    """Synthesize the reach-set over-approximations chi_q.

    Validity (initial-set and flow conditions) is hard; usefulness is pursued
    by a descending ladder of pinned separation levels on the unsafe sets --
    negative rungs admit partially separating chi like the genuinely combined
    cases need.  The first rung whose round chain closes wins; the caller
    falls back to chi = 0 when every rung fails."""
    systems = _mode_systems(automaton)
    s = max((max(p.poly.degree, 0) for p in psis1.values()), default=0)
    jumps = []
    for idx, e in enumerate(automaton.edges):
        jumps.append(JumpRoundSpec(
            edge=e, name=f"{edge_key(automaton, idx)}:chi-chi", scale=scale,
            src_mode=e.source, tgt_mode=e.target))

    for rung in SEPARATION_LADDER:
        anchors = {q: Polynomial.zero(automaton.nvars, FLOAT) for q in automaton.mode_ids}
        rr = None
        for j in range(s + 1):
            specs = [
                ModeRoundSpec(q, systems[q],
                              LinearizedPsi.round_formula(psis1[q].poly, anchors[q], j),
                              chi_degrees[q], separation="soft", fixed_separation=rung)
                for q in automaton.mode_ids
            ]
            rr = _solve_round(specs, jumps, opts)
            rounds.append({"label": f"c={scale}:chi@{rung}[{j}]", "margin": rr.margin,
                           "status": rr.status})
            if rr.status not in ("optimal", "feasible"):
                rr = None
                break
            anchors = dict(rr.phi)
        if rr is None or not rr.feasible:
            continue
        # the chi candidate must satisfy its own true flow conditions
        ok = True
        for q in automaton.mode_ids:
            target = _flow_target(anchors[q].to_rational(), psis1[q], systems[q])
            smin, _, _ = min_on_set_samples(target, systems[q].domain, opts.sample_budget)
            if smin is not math.inf and smin < -1e-7:
                rounds.append({"label": f"c={scale}:chi-reject[{q}]", "margin": smin,
                               "status": "true-flow violated"})
                ok = False
                break
        if ok:
            return anchors
    return None


def synth_combined(
    system: ContinuousSystem,
    psi1: PsiFunction,
    psi2: PsiFunction,
    degrees: int | tuple[int, int, int],
    opts: SynthOptions | None = None,
    mode_id: str = "q0",
) -> SynthReport:
    """Combined certificate (chi, phi) with SOS coupling delta for one mode."""
    automaton = HybridAutomaton.single_mode(system, mode_id)
    return _combined_engine(automaton, {mode_id: psi1}, {mode_id: psi2},
                            degrees, opts, kind="combined")


def synth_hybrid_combined(
    automaton: HybridAutomaton,
    psi1,
    psi2,
    degrees,
    opts: SynthOptions | None = None,
) -> SynthReport:
    """Per-mode combined certificates with the four jump families per edge."""
    psis1 = _as_psi_map(psi1, automaton)
    psis2 = _as_psi_map(psi2, automaton)
    return _combined_engine(automaton, psis1, psis2, degrees, opts,
                            kind="hybrid-combined")


def _combined_degrees(degrees, automaton) -> tuple[dict, dict, dict]:
    if isinstance(degrees, tuple):
        dphi, dchi, ddelta = degrees
    else:
        dphi = dchi = ddelta = int(degrees)
    return (_as_degree_map(dphi, automaton), _as_degree_map(dchi, automaton),
            _as_degree_map(ddelta, automaton))


def _combined_engine(
    automaton: HybridAutomaton,
    psis1: dict[str, PsiFunction],
    psis2: dict[str, PsiFunction],
    degrees,
    opts: SynthOptions | None,
    kind: str,
) -> SynthReport:
    opts = opts or SynthOptions()
    for p in list(psis1.values()) + list(psis2.values()):
        _check_psi(p, opts)
    deg_phi, deg_chi, deg_delta = _combined_degrees(degrees, automaton)
    systems = _mode_systems(automaton)
    rounds: list[dict] = []
    messages: list[str] = []

    if opts.pin_chi_zero:
        zero = Polynomial.zero(automaton.nvars, RATIONAL)
        chis = {q: zero for q in automaton.mode_ids}
        return _stage2_and_package(automaton, psis1, psis2, chis, deg_phi, deg_delta,
                                   opts, kind, rounds, messages, pinned=True)

    scales = ([opts.fixed_jump_scale] if opts.fixed_jump_scale is not None
              else list(opts.jump_scales))
    if not automaton.edges:
        scales = [0.0]
    for scale in scales:
        chis_f = _stage1_chi(automaton, psis1, deg_chi, scale, opts, rounds)
        if chis_f is None:
            continue
        chis = {q: snap_polynomial(p, opts.snap_denominator) for q, p in chis_f.items()}
        report = _stage2_and_package(automaton, psis1, psis2, chis, deg_phi, deg_delta,
                                     opts, kind, rounds, messages, scale=scale)
        if report.ok:
            return report
        # alternation fallback: retry with the trivial over-approximation
        if opts.alternations >= 1:
            zero = Polynomial.zero(automaton.nvars, RATIONAL)
            chis0 = {q: zero for q in automaton.mode_ids}
            report = _stage2_and_package(automaton, psis1, psis2, chis0, deg_phi,
                                         deg_delta, opts, kind, rounds, messages,
                                         scale=scale)
            if report.ok:
                return report
    messages.append("no certificate at these settings")
    return SynthReport("infeasible", None, None,
                       max((r["margin"] for r in rounds), default=-math.inf),
                       messages, rounds)


def _stage2_and_package(
    automaton: HybridAutomaton,
    psis1: dict[str, PsiFunction],
    psis2: dict[str, PsiFunction],
    chis: dict[str, Polynomial],
    deg_phi: dict[str, int],
    deg_delta: dict[str, int],
    opts: SynthOptions,
    kind: str,
    rounds: list[dict],
    messages: list[str],
    scale: float = 0.0,
    pinned: bool = False,
) -> SynthReport:
    systems = _mode_systems(automaton)
    s = max((max(p.poly.degree, 0) for p in psis2.values()), default=0)
    anchors = {q: Polynomial.zero(automaton.nvars, FLOAT) for q in automaton.mode_ids}

    jumps: list[JumpRoundSpec] = []
    for idx, e in enumerate(automaton.edges):
        key = edge_key(automaton, idx)
        jumps.append(JumpRoundSpec(e, f"{key}:phi-phi", scale, e.source, e.target))
        if not pinned:
            jumps.append(JumpRoundSpec(e, f"{key}:phi-chi", scale, e.source, None,
                                       tgt_known=chis[e.target]))
            jumps.append(JumpRoundSpec(e, f"{key}:chi-phi", scale, None, e.target,
                                       src_known=chis[e.source]))

    def specs_for(lin_builder):
        out = []
        for q in automaton.mode_ids:
            chi_q = None if pinned or chis[q].is_zero() else chis[q]
            out.append(ModeRoundSpec(
                q, systems[q], lin_builder(q), deg_phi[q],
                chi=chi_q, delta_degree=None if chi_q is None else deg_delta[q]))
        return out

    rr = None
    best_rr = None
    for j in range(s + 1):
        specs = specs_for(lambda q: LinearizedPsi.round_formula(
            psis2[q].poly, anchors[q], j))
        rr = _solve_round(specs, jumps, opts)
        rounds.append({"label": f"c={scale}:phi[{j}]", "margin": rr.margin,
                       "status": rr.status})
        if rr.status not in ("optimal", "feasible"):
            messages.append(f"stage-2 round {j} failed: {rr.status}")
            rr = None
            break
        anchors = dict(rr.phi)
        best_rr = rr
    if (rr is None or not rr.feasible) and all(
            p.in_quadratic_family and float(p.beta) > 0 for p in psis2.values()):
        seeds = [dict(anchors)]
        for q, system in automaton.modes:
            center = _detect_center(system.init)
            if center is not None:
                for level in _shape_levels(system, center, 2):
                    seed = dict(anchors)
                    seed[q] = _shape_polynomial(automaton.nvars, center, level).to_float()
                    seeds.append(seed)
        for sd_idx, seed in enumerate(seeds):
            cur = dict(seed)
            best = -math.inf
            for it in range(opts.polish_rounds):
                specs = specs_for(lambda q: LinearizedPsi.tangent(psis2[q], cur[q]))
                cand = _solve_round(specs, jumps, opts)
                rounds.append({"label": f"c={scale}:phi-tangent[{sd_idx}.{it}]",
                               "margin": cand.margin, "status": cand.status})
                if cand.status not in ("optimal", "feasible"):
                    break
                best_rr = cand if cand.feasible else best_rr
                if cand.feasible:
                    break
                if cand.margin <= best + 1e-9:
                    break
                best = cand.margin
                cur = dict(cand.phi)
            if best_rr is not None and best_rr.feasible:
                break
        rr = best_rr
    if rr is None or not rr.feasible:
        messages.append("stage-2 margin negative")
        return SynthReport("infeasible", None, None,
                           rr.margin if rr else -math.inf, messages, rounds)

    zero = Polynomial.zero(automaton.nvars, RATIONAL)
    deltas = {q: rr.delta.get(q, zero.to_float()) for q in automaton.mode_ids}
    njump = 4 if kind in ("combined", "hybrid-combined") else 1
    cert = Certificate(
        kind=kind,
        phi=dict(rr.phi),
        psi=psis2,
        chi=dict(chis),
        delta=deltas,
        psi_chi=psis1,
        jump_constants={
            edge_key(automaton, i): tuple([Fraction(scale).limit_denominator(64)] * njump)
            for i in range(len(automaton.edges))
        },
        epsilon=opts.epsilon,
        gram_data=_remap_grams(rr.grams),
        meta={"pipeline": kind, "jump_scale": scale, "pinned_chi": pinned},
    )
    return _package(cert, automaton, opts, rounds, rr.margin, messages)
