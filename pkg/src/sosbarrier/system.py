"""Continuous systems, hybrid automata, comparison functions, and the RK4 oracle.

The comparison function psi drives the relaxed flow inequality
``L_f(phi) - psi(phi) <= 0``.  Only the quadratic family
``psi(t) = alpha*t + beta*t^2`` (plus its degenerate members ``psi = 0`` and
``psi = alpha*t``) is accepted as automatically admissible: for alpha < 0 the
scalar comparison ODE ``theta' = alpha*theta + beta*theta^2`` keeps
nonpositive initial values nonpositive, and for beta > 0 it has the closed
form solution implemented in :func:`theta_closed_form`.  Anything outside the
family requires the caller to vouch for admissibility explicitly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

from .poly import (
    FLOAT,
    RATIONAL,
    DimensionMismatch,
    Polynomial,
    Scalar,
    UnivariatePoly,
)

STRICT_MARGIN = 1e-9  # numeric stand-in for strict inequalities


class UnsupportedPsi(ValueError):
    """psi outside the quadratic family; admissibility cannot be decided here."""


@dataclass(frozen=True)
class SemialgebraicSet:
    """Conjunction of polynomial inequalities g_i(x) >= 0 (or > 0 if strict).

    An empty inequality list denotes all of R^n.
    """

    nvars: int
    inequalities: tuple[Polynomial, ...] = ()
    strict: tuple[bool, ...] = ()

    def __post_init__(self):
        if len(self.strict) != len(self.inequalities):
            object.__setattr__(self, "strict", tuple(False for _ in self.inequalities))
        for g in self.inequalities:
            if g.nvars != self.nvars:
                raise DimensionMismatch(
                    f"set inequality has {g.nvars} variables, expected {self.nvars}"
                )

    @classmethod
    def whole_space(cls, nvars: int) -> "SemialgebraicSet":
        return cls(nvars)

    @classmethod
    def of(cls, *gs: Polynomial, strict: Sequence[bool] | None = None) -> "SemialgebraicSet":
        if not gs:
            raise ValueError("use whole_space for the empty conjunction")
        return cls(gs[0].nvars, tuple(gs), tuple(strict) if strict else ())

    @property
    def is_whole_space(self) -> bool:
        return not self.inequalities

    def contains(self, point: Sequence[float], margin: float = STRICT_MARGIN) -> bool:
        """Numeric membership; strict inequalities are sampled with a margin."""
        for g, s in zip(self.inequalities, self.strict):
            v = float(g.to_float().evaluate(point))
            if v < (margin if s else -margin):
                return False
        return True

    def contains_exact(self, point: Sequence[Fraction]) -> bool:
        """Exact membership for rational points (strict handled strictly)."""
        pt = [Fraction(p) for p in point]
        for g, s in zip(self.inequalities, self.strict):
            v = g.to_rational().evaluate(pt)
            if (v <= 0) if s else (v < 0):
                return False
        return True

    def to_rational(self) -> "SemialgebraicSet":
        return SemialgebraicSet(
            self.nvars, tuple(g.to_rational() for g in self.inequalities), self.strict
        )


@dataclass(frozen=True)
class ContinuousSystem:
    """Polynomial vector field with domain, initial and unsafe regions.

    ``init`` / ``unsafe`` may be None, meaning the respective region is empty
    and the corresponding certificate condition is vacuous (used by hybrid
    modes that cannot start or are never unsafe).
    """

    field_vec: tuple[Polynomial, ...]
    domain: SemialgebraicSet
    init: Optional[SemialgebraicSet] = None
    unsafe: Optional[SemialgebraicSet] = None

    def __post_init__(self):
        n = self.nvars
        for f in self.field_vec:
            if f.nvars != n:
                raise DimensionMismatch("field components disagree on variable count")
        for s in (self.domain, self.init, self.unsafe):
            if s is not None and s.nvars != n:
                raise DimensionMismatch("set variable count != field arity")

    @property
    def nvars(self) -> int:
        return len(self.field_vec)


@dataclass(frozen=True)
class Edge:
    source: str
    target: str
    guard: SemialgebraicSet
    reset: tuple[Polynomial, ...]

    @property
    def is_identity_reset(self) -> bool:
        n = len(self.reset)
        return all(r == Polynomial.variable(n, i, r.field) for i, r in enumerate(self.reset))


@dataclass(frozen=True)
class HybridAutomaton:
    """Finite modes with per-mode dynamics and guarded, reset discrete jumps."""

    modes: tuple[tuple[str, ContinuousSystem], ...]
    edges: tuple[Edge, ...] = ()

    def __post_init__(self):
        ids = [q for q, _ in self.modes]
        if len(set(ids)) != len(ids):
            raise ValueError("duplicate mode ids")

    @property
    def nvars(self) -> int:
        return self.modes[0][1].nvars

    @property
    def mode_ids(self) -> list[str]:
        return [q for q, _ in self.modes]

    def mode(self, q: str) -> ContinuousSystem:
        for mid, sys in self.modes:
            if mid == q:
                return sys
        raise KeyError(f"unknown mode {q!r}")

    @classmethod
    def single_mode(cls, system: ContinuousSystem, mode_id: str = "q0") -> "HybridAutomaton":
        return cls(((mode_id, system),))


@dataclass(frozen=True)
class PsiFunction:
    """Comparison function, normally alpha*t + beta*t^2 from the admissible family."""

    poly: UnivariatePoly

    @classmethod
    def quadratic(cls, alpha: Scalar, beta: Scalar) -> "PsiFunction":
        # floats are exact dyadic rationals, so this conversion is lossless
        return cls(UnivariatePoly([0, Fraction(alpha), Fraction(beta)]))

    @classmethod
    def linear(cls, alpha: Scalar) -> "PsiFunction":
        return cls(UnivariatePoly([0, Fraction(alpha)]))

    @classmethod
    def zero(cls) -> "PsiFunction":
        return cls(UnivariatePoly([]))

    @property
    def alpha(self) -> Scalar:
        return self.poly.coefficient(1)

    @property
    def beta(self) -> Scalar:
        return self.poly.coefficient(2)

    @property
    def in_quadratic_family(self) -> bool:
        return self.poly.degree <= 2 and self.poly.coefficient(0) == 0

    def __call__(self, t: Scalar) -> Scalar:
        return self.poly(t)

    def __str__(self) -> str:
        return f"psi(t) = {self.poly}" if not self.poly.is_zero() else "psi(t) = 0"


def psi_admissible(psi: PsiFunction) -> bool:
    """Decide admissibility inside the supported family.

    psi == 0 is the classical convex condition and is admissible; otherwise
    psi must be alpha*t + beta*t^2 with alpha < 0 (any beta).  Outside the
    family an :class:`UnsupportedPsi` is raised -- the caller must then supply
    its own admissibility argument.
    """
    if psi.poly.is_zero():
        return True
    if not psi.in_quadratic_family:
        raise UnsupportedPsi(
            "unsupported psi: only alpha*t + beta*t^2 (zero constant term, "
            "degree <= 2) is auto-admissible"
        )
    return psi.alpha < 0


def theta_closed_form(psi: PsiFunction, theta0: Scalar, t: Scalar) -> float:
    """Solution theta(t) of theta' = psi(theta), theta(0) = theta0 <= 0.

    beta > 0 uses the logistic-style closed form with lambda = alpha/beta;
    beta = 0 is the plain exponential; beta < 0 falls back to RK4 integration
    (no closed form is exposed; the ODE can blow up to -inf in finite time,
    in which case -inf is returned).
    """
    if not psi_admissible(psi):
        raise ValueError("psi is not admissible (need alpha < 0 in the family)")
    th0 = float(theta0)
    tt = float(t)
    if th0 > 0:
        raise ValueError("theta0 must be <= 0")
    if tt < 0:
        raise ValueError("t must be >= 0")
    if psi.poly.is_zero():
        return th0
    alpha = float(psi.alpha)
    beta = float(psi.beta)
    if tt == 0 or th0 == 0.0:
        return th0
    if beta == 0:
        return th0 * math.exp(alpha * tt)
    if beta > 0:
        lam = alpha / beta
        ratio = th0 / (lam + th0)
        return (1.0 / (1.0 - ratio * math.exp(alpha * tt)) - 1.0) * lam
    return _rk4_scalar(lambda v: alpha * v + beta * v * v, th0, tt)


def _rk4_scalar(fn, y0: float, t_end: float, h: float = 1e-3) -> float:
    steps = max(1, math.ceil(t_end / h))
    dt = t_end / steps
    y = y0
    for _ in range(steps):
        k1 = fn(y)
        k2 = fn(y + 0.5 * dt * k1)
        k3 = fn(y + 0.5 * dt * k2)
        k4 = fn(y + dt * k3)
        y = y + dt / 6.0 * (k1 + 2 * k2 + 2 * k3 + k4)
        if not math.isfinite(y) or abs(y) > 1e12:
            return float("-inf") if y < 0 else float("inf")
    return y


@dataclass
class Trajectory:
    """RK4 sample path; ``truncated`` flags an early stop and why."""

    times: list[float]
    states: list[tuple[float, ...]]
    truncated: bool = False
    reason: Optional[str] = None

    @property
    def samples(self) -> list[tuple[float, tuple[float, ...]]]:
        return list(zip(self.times, self.states))


def simulate(
    system: ContinuousSystem,
    x0: Sequence[float],
    t_end: float,
    h: float,
    stop_outside_domain: bool = True,
) -> Trajectory:
    """Classical fixed-step RK4 trajectory of the system from x0.

    Stops early (flagged) when the state leaves the domain or becomes
    non-finite; never raises on blow-up.
    """
    if h <= 0:
        raise ValueError("step size must be positive")
    if t_end < 0:
        raise ValueError("t_end must be >= 0")
    n = system.nvars
    if len(x0) != n:
        raise DimensionMismatch("x0 length != variable count")
    fs = [f.to_float() for f in system.field_vec]

    def deriv(x: tuple[float, ...]) -> list[float]:
        return [f.evaluate(x) for f in fs]

    times = [0.0]
    states = [tuple(float(v) for v in x0)]
    steps = max(1, math.ceil(t_end / h))
    dt = t_end / steps
    x = states[0]
    for k in range(steps):
        k1 = deriv(x)
        k2 = deriv(tuple(xi + 0.5 * dt * d for xi, d in zip(x, k1)))
        k3 = deriv(tuple(xi + 0.5 * dt * d for xi, d in zip(x, k2)))
        k4 = deriv(tuple(xi + dt * d for xi, d in zip(x, k3)))
        x = tuple(
            xi + dt / 6.0 * (a + 2 * b + 2 * c + d)
            for xi, a, b, c, d in zip(x, k1, k2, k3, k4)
        )
        if any(not math.isfinite(v) or abs(v) > 1e12 for v in x):
            return Trajectory(times, states, truncated=True, reason="blow-up")
        times.append((k + 1) * dt)
        states.append(x)
        if stop_outside_domain and not system.domain.contains(x):
            return Trajectory(times, states, truncated=True, reason="left domain")
    return Trajectory(times, states)


def validate(obj: ContinuousSystem | HybridAutomaton) -> list[str]:
    """Structural diagnostics: dimension mismatches, dangling edges,
    trivially empty conjunctions.  Returns messages, never raises."""
    diags: list[str] = []
    if isinstance(obj, ContinuousSystem):
        _validate_system(obj, "system", diags)
        return diags
    n = obj.nvars
    ids = set(obj.mode_ids)
    for q, sys in obj.modes:
        if sys.nvars != n:
            diags.append(f"mode {q}: {sys.nvars} variables, expected {n}")
        _validate_system(sys, f"mode {q}", diags)
    for e in obj.edges:
        if e.source not in ids:
            diags.append(f"edge {e.source}->{e.target}: unknown source mode {e.source!r}")
        if e.target not in ids:
            diags.append(f"edge {e.source}->{e.target}: unknown target mode {e.target!r}")
        if len(e.reset) != n:
            diags.append(
                f"edge {e.source}->{e.target}: reset has {len(e.reset)} components, expected {n}"
            )
        _check_empty(e.guard, f"edge {e.source}->{e.target} guard", diags)
    return diags


def _validate_system(sys: ContinuousSystem, label: str, diags: list[str]) -> None:
    n = sys.nvars
    for name, s in (("domain", sys.domain), ("init", sys.init), ("unsafe", sys.unsafe)):
        if s is None:
            continue
        if s.nvars != n:
            diags.append(f"{label}: {name} has {s.nvars} variables, field arity is {n}")
        _check_empty(s, f"{label} {name}", diags)


def _check_empty(s: SemialgebraicSet, label: str, diags: list[str]) -> None:
    """Flag conjunctions empty for the syntactic reason g >= 0 and -g-c >= 0."""
    gs = s.inequalities
    for i in range(len(gs)):
        for j in range(i + 1, len(gs)):
            total = gs[i] + gs[j]
            if total.degree <= 0 and (total.is_zero() is False):
                c = total.coefficient((0,) * s.nvars)
                if c < 0:
                    diags.append(f"{label}: inequalities {i} and {j} are jointly unsatisfiable")
