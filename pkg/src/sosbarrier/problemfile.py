"""Plain-text problem and certificate formats.

Problem files are line oriented; indentation is ignored and ``#`` starts a
comment.  All coefficients parse as exact rationals (decimals included).

::

    vars x1 x2
    mode q1
      field x1: x1^2 - 2*x1 + x2
      field x2: x1 + x2^2 - 2*x2
      domain 1 - x1^2 >= 0          # zero or more lines; none = R^n
      init  0.01 - x1^2 - x2^2 >= 0 # none = empty initial region
      unsafe x1^2 + x2^2 - 0.25 >= 0
    edge q1 -> q2
      guard x1 - 1 >= 0             # zero or more lines
      reset x1: x1                  # omitted resets default to identity
    psi alpha=-1 beta=2             # optional; "psi q1 ..." / "psi q1 chi ..."
    template degree=2

Variables must be named ``x1..xn`` in order.  Inequalities end in ``>= 0``
or ``> 0`` (strict).  Certificates use a similar grammar (see
:func:`format_certificate`).
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from typing import Optional

from .poly import ParseError, Polynomial, parse_polynomial
from .synth import DEFAULT_EPSILON, Certificate
from .system import (
    ContinuousSystem,
    Edge,
    HybridAutomaton,
    PsiFunction,
    SemialgebraicSet,
    validate,
)


class ProblemFormatError(ValueError):
    def __init__(self, message: str, line: int):
        super().__init__(f"line {line}: {message}")
        self.line = line


@dataclass
class PsiSetting:
    alpha: Fraction
    beta: Fraction

    def to_psi(self) -> PsiFunction:
        return PsiFunction.quadratic(self.alpha, self.beta)


@dataclass
class Problem:
    """Parsed safety problem: a (possibly single-mode) automaton plus the
    optional psi and template defaults carried in the file."""

    varnames: tuple[str, ...]
    automaton: HybridAutomaton
    psi_default: Optional[PsiSetting] = None
    psi_by_mode: dict = dc_field(default_factory=dict)   # (mode, slot) -> PsiSetting
    template_degree: Optional[int] = None

    @property
    def nvars(self) -> int:
        return len(self.varnames)

    @property
    def is_hybrid(self) -> bool:
        return len(self.automaton.modes) > 1 or bool(self.automaton.edges)

    @property
    def single_system(self) -> ContinuousSystem:
        if self.is_hybrid:
            raise ValueError("problem has several modes; use .automaton")
        return self.automaton.modes[0][1]

    def psi_for(self, mode: str, slot: str = "phi") -> Optional[PsiFunction]:
        st = self.psi_by_mode.get((mode, slot)) or self.psi_by_mode.get((mode, "both")) \
            or self.psi_default
        return st.to_psi() if st else None

    def diagnostics(self) -> list[str]:
        return validate(self.automaton)


@dataclass
class _ModeAcc:
    name: str
    fields: dict = dc_field(default_factory=dict)
    domain: list = dc_field(default_factory=list)
    init: list = dc_field(default_factory=list)
    unsafe: list = dc_field(default_factory=list)


@dataclass
class _EdgeAcc:
    source: str
    target: str
    guard: list = dc_field(default_factory=list)
    resets: dict = dc_field(default_factory=dict)


def _parse_inequality(text: str, nvars: int, lineno: int) -> tuple[Polynomial, bool]:
    strict = False
    if ">=" in text:
        expr, rhs = text.rsplit(">=", 1)
    elif ">" in text:
        expr, rhs = text.rsplit(">", 1)
        strict = True
    else:
        raise ProblemFormatError("inequality must end in '>= 0' or '> 0'", lineno)
    if rhs.strip() != "0":
        raise ProblemFormatError("inequalities must be written against 0", lineno)
    try:
        return parse_polynomial(expr.strip(), nvars), strict
    except ParseError as exc:
        raise ProblemFormatError(str(exc), lineno) from exc


def _kv(tokens: list[str], key: str, lineno: int) -> Fraction:
    for t in tokens:
        if t.startswith(key + "="):
            try:
                v = t.split("=", 1)[1]
                return Fraction(v) if "/" in v or "." not in v else Fraction(v)
            except ValueError as exc:
                raise ProblemFormatError(f"bad value for {key}", lineno) from exc
    raise ProblemFormatError(f"missing {key}=...", lineno)


def parse_problem_text(text: str) -> Problem:
    varnames: Optional[tuple[str, ...]] = None
    modes: list[_ModeAcc] = []
    edges: list[_EdgeAcc] = []
    psi_default: Optional[PsiSetting] = None
    psi_by_mode: dict = {}
    template_degree: Optional[int] = None
    current: Optional[object] = None

    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        tokens = line.split()
        head = tokens[0]

        if head == "vars":
            names = tokens[1:]
            if not names:
                raise ProblemFormatError("no variables named", lineno)
            for i, nm in enumerate(names):
                if nm != f"x{i + 1}":
                    raise ProblemFormatError(
                        f"variables must be x1..xn in order (got {nm!r})", lineno)
            varnames = tuple(names)
        elif head == "mode":
            if varnames is None:
                raise ProblemFormatError("vars must come before modes", lineno)
            if len(tokens) != 2:
                raise ProblemFormatError("usage: mode <id>", lineno)
            current = _ModeAcc(tokens[1])
            modes.append(current)
        elif head == "edge":
            if len(tokens) != 4 or tokens[2] != "->":
                raise ProblemFormatError("usage: edge <src> -> <tgt>", lineno)
            current = _EdgeAcc(tokens[1], tokens[3])
            edges.append(current)
        elif head == "field":
            if not isinstance(current, _ModeAcc):
                raise ProblemFormatError("field outside a mode block", lineno)
            rest = line[len("field"):].strip()
            if ":" not in rest:
                raise ProblemFormatError("usage: field xk: <polynomial>", lineno)
            var, expr = rest.split(":", 1)
            var = var.strip()
            if varnames is None or var not in varnames:
                raise ProblemFormatError(f"unknown variable {var!r}", lineno)
            try:
                current.fields[var] = parse_polynomial(expr.strip(), len(varnames))
            except ParseError as exc:
                raise ProblemFormatError(str(exc), lineno) from exc
        elif head in ("domain", "init", "unsafe"):
            if not isinstance(current, _ModeAcc):
                raise ProblemFormatError(f"{head} outside a mode block", lineno)
            g = _parse_inequality(line[len(head):].strip(), len(varnames), lineno)
            getattr(current, head).append(g)
        elif head == "guard":
            if not isinstance(current, _EdgeAcc):
                raise ProblemFormatError("guard outside an edge block", lineno)
            current.guard.append(
                _parse_inequality(line[len("guard"):].strip(), len(varnames), lineno))
        elif head == "reset":
            if not isinstance(current, _EdgeAcc):
                raise ProblemFormatError("reset outside an edge block", lineno)
            rest = line[len("reset"):].strip()
            if ":" not in rest:
                raise ProblemFormatError("usage: reset xk: <polynomial>", lineno)
            var, expr = rest.split(":", 1)
            var = var.strip()
            if varnames is None or var not in varnames:
                raise ProblemFormatError(f"unknown variable {var!r}", lineno)
            try:
                current.resets[var] = parse_polynomial(expr.strip(), len(varnames))
            except ParseError as exc:
                raise ProblemFormatError(str(exc), lineno) from exc
        elif head == "psi":
            rest = tokens[1:]
            mode_id = None
            slot = "both"
            while rest and "=" not in rest[0]:
                if rest[0] in ("chi", "phi"):
                    slot = rest[0]
                else:
                    mode_id = rest[0]
                rest = rest[1:]
            setting = PsiSetting(_kv(rest, "alpha", lineno), _kv(rest, "beta", lineno))
            if mode_id is None:
                if slot == "both":
                    psi_default = setting
                else:
                    raise ProblemFormatError("slot-specific psi needs a mode id", lineno)
            else:
                psi_by_mode[(mode_id, slot)] = setting
        elif head == "template":
            template_degree = int(_kv(tokens[1:], "degree", lineno))
        else:
            raise ProblemFormatError(f"unknown directive {head!r}", lineno)

    if varnames is None:
        raise ProblemFormatError("missing vars line", 1)
    if not modes:
        raise ProblemFormatError("no modes declared", 1)

    n = len(varnames)
    built_modes = []
    for acc in modes:
        missing = [v for v in varnames if v not in acc.fields]
        if missing:
            raise ProblemFormatError(
                f"mode {acc.name}: missing field for {', '.join(missing)}", 1)

        def mkset(items) -> Optional[SemialgebraicSet]:
            if not items:
                return None
            return SemialgebraicSet(n, tuple(g for g, _ in items),
                                    tuple(s for _, s in items))

        domain = mkset(acc.domain) or SemialgebraicSet.whole_space(n)
        built_modes.append((acc.name, ContinuousSystem(
            field_vec=tuple(acc.fields[v] for v in varnames),
            domain=domain, init=mkset(acc.init), unsafe=mkset(acc.unsafe))))

    built_edges = []
    for acc in edges:
        guard = SemialgebraicSet(n, tuple(g for g, _ in acc.guard),
                                 tuple(s for _, s in acc.guard)) \
            if acc.guard else SemialgebraicSet.whole_space(n)
        resets = tuple(acc.resets.get(v, Polynomial.variable(n, i))
                       for i, v in enumerate(varnames))
        built_edges.append(Edge(acc.source, acc.target, guard, resets))

    automaton = HybridAutomaton(tuple(built_modes), tuple(built_edges))
    return Problem(varnames, automaton, psi_default, psi_by_mode, template_degree)


def parse_problem(path) -> Problem:
    """Parse a problem file; errors carry the offending line number."""
    with open(path, "r", encoding="utf-8") as fh:
        return parse_problem_text(fh.read())


# ----------------------------------------------------------------------
# certificate files

def format_certificate(cert: Certificate, nvars: int) -> str:
    lines = [f"certificate {cert.kind}", f"vars {nvars}",
             f"epsilon {Fraction(cert.epsilon)}"]
    for q in cert.phi:
        lines.append(f"mode {q}")
        lines.append(f"  phi {cert.phi[q]}")
        psi = cert.psi[q]
        lines.append(f"  psi alpha={Fraction(psi.alpha)} beta={Fraction(psi.beta)}")
        if cert.is_combined:
            lines.append(f"  chi {cert.chi[q]}")
            lines.append(f"  delta {cert.delta[q]}")
            p1 = cert.psi_chi[q]
            lines.append(f"  psi1 alpha={Fraction(p1.alpha)} beta={Fraction(p1.beta)}")
    for key, cs in sorted(cert.jump_constants.items()):
        lines.append(f"jump {key} c " + " ".join(str(Fraction(c)) for c in cs))
    return "\n".join(lines) + "\n"


def parse_certificate_text(text: str) -> Certificate:
    kind = None
    nvars = None
    epsilon = DEFAULT_EPSILON
    phi, chi, delta, psi, psi1 = {}, {}, {}, {}, {}
    jumps = {}
    mode = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        tokens = line.split()
        head = tokens[0]
        try:
            if head == "certificate":
                kind = tokens[1]
            elif head == "vars":
                nvars = int(tokens[1])
            elif head == "epsilon":
                epsilon = Fraction(tokens[1])
            elif head == "mode":
                mode = tokens[1]
            elif head in ("phi", "chi", "delta"):
                if mode is None or nvars is None:
                    raise ProblemFormatError("mode/vars must come first", lineno)
                poly = parse_polynomial(line[len(head):].strip(), nvars)
                {"phi": phi, "chi": chi, "delta": delta}[head][mode] = poly
            elif head in ("psi", "psi1"):
                setting = PsiFunction.quadratic(_kv(tokens[1:], "alpha", lineno),
                                                _kv(tokens[1:], "beta", lineno))
                (psi if head == "psi" else psi1)[mode] = setting
            elif head == "jump":
                key = tokens[1]
                idx = tokens.index("c")
                jumps[key] = tuple(Fraction(t) for t in tokens[idx + 1:])
            else:
                raise ProblemFormatError(f"unknown directive {head!r}", lineno)
        except (IndexError, ValueError, ParseError) as exc:
            if isinstance(exc, ProblemFormatError):
                raise
            raise ProblemFormatError(str(exc), lineno) from exc
    if kind is None or not phi:
        raise ProblemFormatError("certificate lacks kind or phi data", 1)
    return Certificate(kind=kind, phi=phi, psi=psi, chi=chi, delta=delta,
                       psi_chi=psi1, jump_constants=jumps, epsilon=epsilon)


def parse_certificate(path) -> Certificate:
    with open(path, "r", encoding="utf-8") as fh:
        return parse_certificate_text(fh.read())
