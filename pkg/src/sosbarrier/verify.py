"""Sound posterior checking of candidate certificates.

The numeric SDP layer can wrongly accept certificates (its output is only
feasible up to solver tolerance), so every condition of a candidate
certificate gets three independent treatments here:

  * a sampling falsifier that hunts for a counterexample point and only
    reports one after re-evaluation in exact rational arithmetic,
  * an exact sum-of-squares reconstruction: round the numeric Gram matrices
    to rationals, push the exact residual back into the Gram entries, and
    decide positive semidefiniteness by exact LDL^T -- a machine-checkable
    proof when it succeeds,
  * a plain numeric pass (fresh SOS feasibility + sample minimum) used when
    the exact route fails.

Verdicts: ``proved-exact`` > ``passed-numeric-only`` > ``unchecked``;
``refuted`` always carries an exactly-confirmed witness point.  The exact
route is sufficient-only: a nonnegative polynomial without an SOS
representation is downgraded, never wrongly accepted.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from typing import Optional, Sequence

import numpy as np
from scipy.stats import qmc

from .poly import RATIONAL, Monomial, Polynomial
from .sdp import SolverSettings, solve
from .sosprog import SOSProgram, extract, identity_residual
from .system import SemialgebraicSet

REFUTE_TOL = -1e-7
NUMERIC_TOL = -1e-9
DEFAULT_BUDGET = 4096
GRID_CAP = 100_000
FALLBACK_BOX = 10.0


# ----------------------------------------------------------------------
# exact PSD test

def psd_exact_rational(Q: Sequence[Sequence[Fraction]]) -> bool:
    """Exact PSD decision for a symmetric rational matrix via LDL^T.

    Pivots only on positive diagonal entries; a zero diagonal entry in a PSD
    matrix forces its whole row to vanish, which is checked exactly.  No
    floating arithmetic is involved anywhere.
    """
    n = len(Q)
    A = [[Fraction(Q[i][j]) for j in range(n)] for i in range(n)]
    for i in range(n):
        for j in range(i + 1, n):
            if A[i][j] != A[j][i]:
                raise ValueError("matrix is not symmetric")
    active = list(range(n))
    while active:
        pivot = None
        for k in active:
            if A[k][k] > 0:
                pivot = k
                break
        if pivot is None:
            # all remaining diagonal entries are <= 0
            for k in active:
                if A[k][k] < 0:
                    return False
                if any(A[k][j] != 0 for j in active):
                    return False
            return True
        active.remove(pivot)
        d = A[pivot][pivot]
        col = {j: A[j][pivot] for j in active}
        for i_ in active:
            ci = col[i_]
            if ci == 0:
                continue
            row_i = A[i_]
            for j_ in active:
                cj = col[j_]
                if cj != 0:
                    row_i[j_] -= ci * cj / d
    return True


def numeric_min_eig(Q: np.ndarray) -> float:
    return float(np.linalg.eigvalsh(0.5 * (Q + Q.T))[0]) if Q.size else math.inf


# ----------------------------------------------------------------------
# rational rounding of numeric Gram certificates

def _round_scalar(x: float, max_denom: int) -> Fraction:
    # dyadic rounding first (floats round cleanly to powers of two), then
    # a continued-fraction fallback through limit_denominator
    d = 1
    while d < max_denom:
        d <<= 1
    f = Fraction(round(x * d), d)
    g = Fraction(x).limit_denominator(max_denom)
    return f if abs(f - x) <= abs(g - x) else g


def round_matrix(Q: np.ndarray, max_denom: int) -> list[list[Fraction]]:
    n = Q.shape[0]
    out = [[Fraction(0)] * n for _ in range(n)]
    for i in range(n):
        for j in range(i, n):
            v = _round_scalar(float(0.5 * (Q[i, j] + Q[j, i])), max_denom)
            out[i][j] = v
            out[j][i] = v
    return out


def gram_polynomial_exact(
    Q: Sequence[Sequence[Fraction]], basis: Sequence[Monomial]
) -> Polynomial:
    """Exact expansion of m^T Q m."""
    n = basis[0].nvars
    terms: dict[tuple[int, ...], Fraction] = {}
    k = len(basis)
    for a in range(k):
        for b in range(a, k):
            c = Q[a][b] * (1 if a == b else 2)
            if c == 0:
                continue
            mono = basis[a].mul(basis[b]).exponents
            terms[mono] = terms.get(mono, Fraction(0)) + c
    return Polynomial(n, terms, RATIONAL)


def round_to_rational_sos(
    p_target: Polynomial,
    gram: np.ndarray,
    basis: Sequence[Monomial],
    max_denom: int = 2**40,
) -> Optional[list[list[Fraction]]]:
    """Round a numeric Gram matrix into an exact SOS witness for p_target.

    The exact residual p_target - m^T Q~ m is spread back over the Gram
    entries that generate each residual monomial (diagonal entries included),
    then the corrected matrix must pass :func:`psd_exact_rational` and
    reproduce p_target identically.  Returns None on failure.
    """
    if p_target.field != RATIONAL:
        raise ValueError("p_target must be exact rational")
    k = len(basis)
    if gram.shape != (k, k):
        raise ValueError("gram shape disagrees with basis size")
    Q = round_matrix(gram, max_denom)

    positions: dict[tuple[int, ...], list[tuple[int, int]]] = {}
    for a in range(k):
        for b in range(a, k):
            positions.setdefault(basis[a].mul(basis[b]).exponents, []).append((a, b))

    residual = p_target - gram_polynomial_exact(Q, basis)
    for mono, c in residual.terms.items():
        pos = positions.get(mono)
        if not pos:
            return None  # monomial cannot be generated by this basis
        share = Fraction(c, len(pos))
        for a, b in pos:
            if a == b:
                Q[a][a] += share
            else:
                Q[a][b] += share / 2
                Q[b][a] += share / 2
    check = p_target - gram_polynomial_exact(Q, basis)
    if not check.is_zero():
        return None
    if not psd_exact_rational(Q):
        return None
    return Q


# ----------------------------------------------------------------------
# sampling falsifier

@dataclass
class Witness:
    point: tuple[Fraction, ...]
    value: Fraction  # exact value of the condition polynomial at the point
    numeric_value: float

    def point_floats(self) -> tuple[float, ...]:
        return tuple(float(v) for v in self.point)


def _axis_bounds(region: SemialgebraicSet) -> tuple[np.ndarray, np.ndarray, bool]:
    """Interval enclosure of the region from single-variable-bounding
    inequalities of the form c - sum q_i (x_i - c_i)^2 >= 0; falls back to
    [-FALLBACK_BOX, FALLBACK_BOX]^n (flagged) when an axis stays unbounded."""
    n = region.nvars
    lo = np.full(n, -math.inf)
    hi = np.full(n, math.inf)
    for g in region.inequalities:
        gf = g.to_float()
        # quadratic per-axis bound: coefficient of x_i^2 negative and no
        # cross terms involving x_i of higher order
        for i in range(n):
            e2 = tuple(2 if k == i else 0 for k in range(n))
            a = float(gf.terms.get(e2, 0.0))
            if a >= 0:
                continue
            pure = all(
                sum(e) == e[i] or e[i] == 0
                for e in gf.terms
            )
            if not pure:
                continue
            e1 = tuple(1 if k == i else 0 for k in range(n))
            b_ = float(gf.terms.get(e1, 0.0))
            rest = sum(
                abs(c) for e, c in gf.terms.items() if e[i] == 0 and sum(e) > 0
            )
            c0 = float(gf.terms.get((0,) * n, 0.0)) + rest
            # a x^2 + b x + c0 >= 0 with a < 0 bounds x to the root interval
            disc = b_ * b_ - 4 * a * c0
            if disc <= 0:
                continue
            r1 = (-b_ + math.sqrt(disc)) / (2 * a)
            r2 = (-b_ - math.sqrt(disc)) / (2 * a)
            lo[i] = max(lo[i], min(r1, r2))
            hi[i] = min(hi[i], max(r1, r2))
    fell_back = False
    for i in range(n):
        if not math.isfinite(lo[i]) or not math.isfinite(hi[i]) or lo[i] >= hi[i]:
            lo[i], hi[i] = -FALLBACK_BOX, FALLBACK_BOX
            fell_back = True
    return lo, hi, fell_back


def _sample_points(region: SemialgebraicSet, budget: int) -> tuple[np.ndarray, bool]:
    n = region.nvars
    lo, hi, fell_back = _axis_bounds(region)
    pow2 = max(4, 1 << (max(budget, 1) - 1).bit_length())
    sob = qmc.Sobol(d=n, scramble=False)
    pts = sob.random(pow2)[:budget]
    pts = lo + pts * (hi - lo)
    per_axis = 11
    if per_axis**n <= GRID_CAP:
        axes = [np.linspace(lo[i], hi[i], per_axis) for i in range(n)]
        grid = np.array(np.meshgrid(*axes)).reshape(n, -1).T
        pts = np.vstack([pts, grid])
    return pts, fell_back


def min_on_set_samples(
    p: Polynomial, region: SemialgebraicSet, budget: int = DEFAULT_BUDGET
) -> tuple[float, Optional[tuple[float, ...]], bool]:
    """Sampled minimum of p over the region (numeric); None when no sample
    lands inside the region."""
    pts, fell_back = _sample_points(region, budget)
    pf = p.to_float()
    best = math.inf
    best_pt = None
    for row in pts:
        x = tuple(float(v) for v in row)
        if not region.contains(x):
            continue
        v = pf.evaluate(x)
        if v < best:
            best, best_pt = v, x
    return best, best_pt, fell_back


def falsify_by_sampling(
    p: Polynomial,
    region: SemialgebraicSet,
    budget: int = DEFAULT_BUDGET,
    refute_tol: float = REFUTE_TOL,
) -> Optional[Witness]:
    """Hunt for a point of the region with p < 0; sound by exact re-check.

    Candidate points below ``refute_tol`` (and gray-zone points below
    -1e-9) are re-evaluated in exact rational arithmetic, including exact
    region membership; only an exact violation is returned.
    """
    if budget < 1:
        raise ValueError("budget must be >= 1")
    pts, _ = _sample_points(region, budget)
    pf = p.to_float()
    scored: list[tuple[float, tuple[float, ...]]] = []
    for row in pts:
        x = tuple(float(v) for v in row)
        if not region.contains(x):
            continue
        v = pf.evaluate(x)
        if v < NUMERIC_TOL:
            scored.append((v, x))
    scored.sort()
    p_exact = p.to_rational()
    region_exact = region.to_rational()
    for v, x in scored[:64]:
        # gray zone (-1e-7, -1e-9) is settled by the exact re-evaluation too
        pt = tuple(Fraction(c) for c in x)
        if not region_exact.contains_exact(pt):
            continue
        exact_v = p_exact.evaluate(pt)
        if exact_v < 0:
            return Witness(point=pt, value=exact_v, numeric_value=v)
    return None


# ----------------------------------------------------------------------
# condition-level checking

@dataclass
class Condition:
    """One polynomial nonnegativity claim: target >= 0 on region."""

    cid: str
    description: str
    target: Polynomial  # exact rational
    region: SemialgebraicSet
    mult_degree: int = 2


@dataclass
class ConditionReport:
    cid: str
    description: str
    verdict: str  # proved-exact | passed-numeric-only | refuted | unchecked
    witness: Optional[Witness] = None
    sample_min: Optional[float] = None
    residual_norm: Optional[float] = None
    notes: list[str] = dc_field(default_factory=list)

    def to_dict(self) -> dict:
        d = {
            "condition": self.cid,
            "description": self.description,
            "verdict": self.verdict,
            "sample_min": self.sample_min,
            "residual_norm": self.residual_norm,
            "notes": self.notes,
        }
        if self.witness is not None:
            d["witness"] = {
                "point": [str(v) for v in self.witness.point],
                "point_float": [float(v) for v in self.witness.point],
                "violation": str(self.witness.value),
            }
        return d


@dataclass
class VerificationReport:
    entries: list[ConditionReport]

    @property
    def overall(self) -> str:
        verdicts = [e.verdict for e in self.entries]
        if any(v == "refuted" for v in verdicts):
            return "refuted"
        if all(v == "proved-exact" for v in verdicts):
            return "proved-exact"
        if any(v == "unchecked" for v in verdicts):
            return "unchecked"
        return "passed-numeric-only"

    def entry(self, cid: str) -> ConditionReport:
        for e in self.entries:
            if e.cid == cid:
                return e
        raise KeyError(cid)

    def to_json(self, **kw) -> str:
        return json.dumps(
            {"overall": self.overall, "conditions": [e.to_dict() for e in self.entries]},
            indent=2, **kw,
        )


def check_condition(
    cond: Condition,
    budget: int = DEFAULT_BUDGET,
    carried_grams=None,
    exact: bool = True,
    numeric_tol: float = NUMERIC_TOL,
    solver_settings: SolverSettings | None = None,
) -> ConditionReport:
    """Run falsifier, exact reconstruction ladder, then numeric fallback."""
    rep = ConditionReport(cond.cid, cond.description, "unchecked")
    wit = falsify_by_sampling(cond.target, cond.region, budget)
    if wit is not None:
        rep.verdict = "refuted"
        rep.witness = wit
        rep.sample_min = wit.numeric_value
        return rep
    smin, _, fell_back = min_on_set_samples(cond.target, cond.region, budget)
    rep.sample_min = None if smin is math.inf else smin
    if fell_back:
        rep.notes.append("sampling box heuristic fell back to the default box")

    if exact and _exact_condition_proof(cond, rep, carried_grams, solver_settings):
        rep.verdict = "proved-exact"
        return rep

    # numeric fallback: fresh SOS feasibility at float precision
    ok_numeric = _numeric_condition_pass(cond, rep, solver_settings)
    sample_ok = rep.sample_min is None or rep.sample_min >= numeric_tol
    if ok_numeric and sample_ok:
        rep.verdict = "passed-numeric-only"
    elif sample_ok and rep.sample_min is not None:
        rep.verdict = "passed-numeric-only"
        rep.notes.append("no SOS representation found; sampling only")
    else:
        rep.verdict = "unchecked"
    return rep


def _fresh_sos_solve(cond: Condition, settings: SolverSettings | None):
    prog = SOSProgram(cond.target.nvars, margin_mode="soft")
    ident = prog.encode_nonneg_on_set(
        cond.target.to_float(), cond.region, cond.mult_degree, "cond"
    )
    try:
        problem, info = prog.assemble()
    except Exception:
        return None
    sol = solve(problem, settings or SolverSettings())
    if sol.status not in ("optimal", "feasible"):
        return None
    ext = extract(sol, prog, info)
    if ext.margin < 1e-9:
        return None
    return ident, ext


def _exact_condition_proof(
    cond: Condition, rep: ConditionReport, carried_grams, settings
) -> bool:
    """Try carried Gram data first, then fresh margin solves, with a
    denominator ladder; success means every block passes the exact tests."""
    attempts = []
    if carried_grams:
        attempts.append(carried_grams)
    fresh = _fresh_sos_solve(cond, settings=settings)
    if fresh is not None:
        ident, ext = fresh
        attempts.append([(ext.grams[gb.name].basis, ext.grams[gb.name].matrix,
                          gb.multiplicand) for gb in ident.grams])
    target = cond.target.to_rational()
    for grams in attempts:
        for max_denom in (2**24, 2**40, 2**56):
            ok = _exact_round_multi(target, grams, max_denom)
            if ok:
                rep.residual_norm = 0.0
                rep.notes.append("exact SOS witness reconstructed")
                return True
    return False


def _exact_round_multi(target: Polynomial, grams, max_denom: int) -> bool:
    """Round every Gram block to rationals, then eliminate the exact residual
    by cascading corrections in descending graded-lex order: each residual
    monomial is removed through a Gram position whose product with the
    multiplicand's leading monomial hits it, which only introduces strictly
    smaller monomials, so the sweep terminates.  All corrected blocks must
    then pass the exact PSD test."""
    if not grams:
        return False
    blocks = []
    for basis, mat, mult in grams:
        arr = np.asarray(mat, dtype=float)
        # nudge away from the PSD boundary before rounding so the exact test
        # has room for the correction sweep below
        lam = numeric_min_eig(arr)
        if -1e-5 < lam < 1e-9:
            arr = arr + (1e-9 - lam) * np.eye(arr.shape[0])
        elif lam <= -1e-5:
            return False
        Q = round_matrix(arr, max_denom)
        blocks.append([list(basis), Q, mult.to_rational()])

    def grlex_key(e):
        return (sum(e), e)

    residual = target
    for basis, Q, mult in blocks:
        residual = residual - gram_polynomial_exact(Q, basis) * mult

    # per-block: leading monomial of the multiplicand and the pair-product map
    info = []
    for basis, Q, mult in blocks:
        if mult.is_zero():
            info.append(None)
            continue
        lead = max(mult.terms, key=grlex_key)
        lead_c = mult.terms[lead]
        pairs: dict[tuple[int, ...], list[tuple[int, int]]] = {}
        for a in range(len(basis)):
            for b in range(a, len(basis)):
                pairs.setdefault(basis[a].mul(basis[b]).exponents, []).append((a, b))
        info.append((lead, lead_c, pairs))

    guard = 0
    max_steps = 40 * (len(target.terms) + sum(len(b[0]) ** 2 for b in blocks) + 8)
    while not residual.is_zero():
        guard += 1
        if guard > max_steps:
            return False
        mono = max(residual.terms, key=grlex_key)
        coeff = residual.terms[mono]
        hit = None
        for bi, inf in enumerate(info):
            if inf is None:
                continue
            lead, lead_c, pairs = inf
            prod = tuple(m - l for m, l in zip(mono, lead))
            if any(v < 0 for v in prod):
                continue
            pos = pairs.get(prod)
            if pos:
                hit = (bi, pos, lead_c)
                break
        if hit is None:
            return False
        bi, pos, lead_c = hit
        basis, Q, mult = blocks[bi]
        share = Fraction(coeff, len(pos)) / lead_c
        correction = Polynomial.zero(target.nvars, RATIONAL)
        for a, b in pos:
            entry = share if a == b else share / 2
            Q[a][b] += entry
            if a != b:
                Q[b][a] += entry
            pair_poly = Polynomial.from_monomial(basis[a].mul(basis[b]), share)
            correction = correction + pair_poly
        residual = residual - correction * mult

    return all(psd_exact_rational(Q) for _, Q, _ in blocks)


def _psd_repair(Q: list[list[Fraction]]) -> Optional[list[list[Fraction]]]:
    """Clip a slightly indefinite rounded multiplier by adding a small
    diagonal shift; only worthwhile when the shift is tiny."""
    arr = np.array([[float(v) for v in row] for row in Q])
    lam = numeric_min_eig(arr)
    if lam >= 0 or lam < -1e-6:
        return None
    shift = Fraction(int(math.ceil(-lam * 2**40 * 4)), 2**40)
    n = len(Q)
    out = [row[:] for row in Q]
    for i in range(n):
        out[i][i] += shift
    return out if psd_exact_rational(out) else None


def _numeric_condition_pass(cond: Condition, rep: ConditionReport, settings) -> bool:
    got = _fresh_sos_solve(cond, settings=settings)
    if got is None:
        return False
    ident, ext = got
    res = identity_residual(ident, ext)
    rep.residual_norm = res.max_abs_coeff()
    min_eigs = [numeric_min_eig(ext.grams[gb.name].matrix) for gb in ident.grams]
    return rep.residual_norm <= 1e-6 and min(min_eigs) >= -1e-7


# ----------------------------------------------------------------------
# whole-certificate checking

def _exact_psi(psi) -> "UnivariatePoly":
    from .poly import UnivariatePoly

    return UnivariatePoly([Fraction(c) for c in psi.poly.coeffs])


def _flow_target_exact(phi, psi, system, chi=None, delta=None) -> Polynomial:
    from .poly import compose, lie_derivative

    phi = phi.to_rational()
    t = -lie_derivative(phi, [f.to_rational() for f in system.field_vec]) \
        + compose(_exact_psi(psi), phi)
    if chi is not None and delta is not None and not chi.is_zero():
        t = t + delta.to_rational() * chi.to_rational()
    return t


def _even_up(d: int) -> int:
    d = max(d, 2)
    return d + (d % 2)


def certificate_conditions(cert, problem) -> list[Condition]:
    """Map every theorem condition of the certificate to one Condition.

    ``cert`` is duck-typed (kind, phi, chi, delta, psi, psi_chi,
    jump_constants, epsilon); ``problem`` is a ContinuousSystem or
    HybridAutomaton.  Comparison-function admissibility and jump-constant
    sign entries are handled by :func:`verify_certificate` directly.
    """
    from .system import HybridAutomaton

    automaton = problem if isinstance(problem, HybridAutomaton) \
        else HybridAutomaton.single_mode(problem)
    combined = cert.kind in ("combined", "hybrid-combined")
    n = automaton.nvars
    whole = SemialgebraicSet.whole_space(n)
    conds: list[Condition] = []
    eps = Fraction(cert.epsilon)

    for q, system in automaton.modes:
        phi = cert.phi[q].to_rational()
        md = _even_up(phi.degree)
        if system.init is not None:
            conds.append(Condition(
                f"init[{q}]", "certificate nonpositive on the initial set",
                -phi, system.init, md))
        chi = cert.chi.get(q) if combined else None
        delta = cert.delta.get(q) if combined else None
        conds.append(Condition(
            f"flow[{q}]", "relaxed flow inequality on the mode domain",
            _flow_target_exact(phi, cert.psi[q], system, chi, delta),
            system.domain, md))
        if system.unsafe is not None:
            conds.append(Condition(
                f"separation[{q}]", "certificate strictly positive on the unsafe set",
                phi - Polynomial.constant(n, eps), system.unsafe, md))
        if combined:
            chi_q = cert.chi[q].to_rational()
            mdc = _even_up(max(chi_q.degree, 2))
            if system.init is not None:
                conds.append(Condition(
                    f"chi-init[{q}]", "over-approximation nonpositive on the initial set",
                    -chi_q, system.init, mdc))
            conds.append(Condition(
                f"chi-flow[{q}]", "over-approximation flow inequality",
                _flow_target_exact(chi_q, cert.psi_chi[q], system),
                system.domain, mdc))
            delta_q = cert.delta.get(q)
            if delta_q is not None:
                conds.append(Condition(
                    f"delta-sos[{q}]", "coupling multiplier is a sum of squares",
                    delta_q.to_rational(), whole, _even_up(delta_q.degree)))

    for idx, e in enumerate(automaton.edges):
        key = f"{e.source}->{e.target}#{idx}"
        cs = cert.jump_constants.get(key)
        if cs is None:
            raise KeyError(f"certificate lacks jump constants for edge {key}")
        resets = [r.to_rational() for r in e.reset]

        def across(p: Polynomial) -> Polynomial:
            return p.to_rational().substitute(resets)

        phi_s = cert.phi[e.source].to_rational()
        phi_t = across(cert.phi[e.target])
        md = _even_up(max(phi_s.degree, phi_t.degree))
        conds.append(Condition(
            f"jump[{key}:phi-phi]", "jump compatibility of the certificates",
            phi_s.scale(Fraction(cs[0])) - phi_t, e.guard, md))
        if combined:
            chi_s = cert.chi[e.source].to_rational()
            chi_t = across(cert.chi[e.target])
            pairs = [
                ("phi-chi", phi_s, chi_t, Fraction(cs[1])),
                ("chi-phi", chi_s, phi_t, Fraction(cs[2])),
                ("chi-chi", chi_s, chi_t, Fraction(cs[3])),
            ]
            for tag, src, tgt, c in pairs:
                mdx = _even_up(max(src.degree, tgt.degree))
                conds.append(Condition(
                    f"jump[{key}:{tag}]", "jump compatibility of the certificates",
                    src.scale(c) - tgt, e.guard, mdx))
    return conds


def _psi_entry(cid: str, psi, assume: bool) -> ConditionReport:
    from .system import UnsupportedPsi, psi_admissible

    rep = ConditionReport(cid, "comparison-function admissibility", "unchecked")
    try:
        ok = psi_admissible(psi)
    except UnsupportedPsi:
        if assume:
            rep.notes.append("outside the quadratic family; admissibility "
                             "asserted by the caller")
        else:
            rep.notes.append("outside the quadratic family; no admissibility proof")
        return rep
    if ok:
        rep.verdict = "proved-exact"
        rep.notes.append("discharged by the quadratic comparison family "
                         "(negative linear coefficient)")
    else:
        rep.notes.append("not admissible: linear coefficient must be negative")
    return rep


def verify_certificate(
    cert,
    problem,
    budget: int = DEFAULT_BUDGET,
    exact: bool = True,
    solver: SolverSettings | None = None,
    numeric_tol: float = NUMERIC_TOL,
    assume_psi_admissible: bool = False,
) -> VerificationReport:
    """Check every condition of the certificate; exact path first, numeric
    fallback second, the sampling falsifier always."""
    from .system import HybridAutomaton

    automaton = problem if isinstance(problem, HybridAutomaton) \
        else HybridAutomaton.single_mode(problem)
    entries: list[ConditionReport] = []
    carried = getattr(cert, "gram_data", {}) or {}
    for cond in certificate_conditions(cert, automaton):
        if cond.target.is_zero():
            entries.append(ConditionReport(
                cond.cid, cond.description, "proved-exact",
                sample_min=0.0, residual_norm=0.0,
                notes=["target is identically zero"]))
            continue
        entries.append(check_condition(
            cond, budget=budget, carried_grams=carried.get(cond.cid),
            exact=exact, numeric_tol=numeric_tol, solver_settings=solver))

    combined = cert.kind in ("combined", "hybrid-combined")
    for q, _ in automaton.modes:
        entries.append(_psi_entry(f"comparison[{q}]", cert.psi[q], assume_psi_admissible))
        if combined:
            entries.append(_psi_entry(f"comparison-chi[{q}]", cert.psi_chi[q],
                                      assume_psi_admissible))
    for key, cs in sorted(cert.jump_constants.items()):
        rep = ConditionReport(f"jump-constant[{key}]",
                              "jump constants are nonnegative", "proved-exact")
        if any(Fraction(c) < 0 for c in cs):
            rep.verdict = "unchecked"
            rep.notes.append("negative jump constant: conditions do not apply")
        entries.append(rep)
    return VerificationReport(entries)
