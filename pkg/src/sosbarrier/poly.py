"""Sparse multivariate polynomial arithmetic over exact rationals or floats.

A polynomial is a map from exponent tuples to coefficients, kept in canonical
form (no stored zero coefficients).  Two coefficient fields are supported:

  * ``rational`` -- exact ``fractions.Fraction`` coefficients; decimal
    literals parse exactly (``0.04`` becomes ``1/25``),
  * ``float`` -- binary doubles, used inside the numeric SDP layer.

Arithmetic never mixes fields implicitly; ``to_float``/``to_rational`` are the
explicit conversions.  Monomials are ordered graded-lexicographically with
plain tuple comparison breaking degree ties, so ``monomial_basis(2, 1)`` is
``[1, x2, x1]``.  All values are immutable; operations are pure.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations_with_replacement
from typing import Iterable, Mapping, Sequence, Union

RATIONAL = "rational"
FLOAT = "float"

Exponent = tuple[int, ...]
Scalar = Union[int, float, Fraction]


class PolynomialError(ValueError):
    """Base error for polynomial construction and arithmetic."""


class DimensionMismatch(PolynomialError):
    """Operands disagree on the ambient variable count."""


class FieldMismatch(PolynomialError):
    """Operands live in different coefficient fields."""


def _as_field(value: Scalar, field: str) -> Fraction | float:
    if field == RATIONAL:
        if isinstance(value, float):
            # floats are exact dyadic rationals; conversion is lossless
            return Fraction(value)
        return Fraction(value)
    return float(value)


@dataclass(frozen=True)
class Monomial:
    """A power product x1^e1 * ... * xn^en, one exponent per variable."""

    exponents: Exponent

    def __post_init__(self) -> None:
        if any(e < 0 for e in self.exponents):
            raise PolynomialError(f"negative exponent in {self.exponents}")

    @property
    def nvars(self) -> int:
        return len(self.exponents)

    @property
    def degree(self) -> int:
        return sum(self.exponents)

    def sort_key(self) -> tuple[int, Exponent]:
        return (self.degree, self.exponents)

    def mul(self, other: "Monomial") -> "Monomial":
        if len(self.exponents) != len(other.exponents):
            raise DimensionMismatch("monomial variable counts differ")
        return Monomial(tuple(a + b for a, b in zip(self.exponents, other.exponents)))

    def evaluate(self, point: Sequence[Scalar]) -> Scalar:
        if len(point) != len(self.exponents):
            raise DimensionMismatch("point length != variable count")
        out: Scalar = 1
        for v, e in zip(point, self.exponents):
            if e:
                out *= v**e
        return out

    def __str__(self) -> str:
        parts = []
        for i, e in enumerate(self.exponents):
            if e == 1:
                parts.append(f"x{i + 1}")
            elif e > 1:
                parts.append(f"x{i + 1}^{e}")
        return "*".join(parts) if parts else "1"


def monomial_basis(nvars: int, max_degree: int) -> list[Monomial]:
    """All monomials of total degree <= max_degree, graded-lex ascending."""
    if nvars < 1:
        raise PolynomialError("need at least one variable")
    if max_degree < 0:
        raise PolynomialError("max_degree must be >= 0")
    out: list[Monomial] = []
    for d in range(max_degree + 1):
        exps = []
        for combo in combinations_with_replacement(range(nvars), d):
            e = [0] * nvars
            for idx in combo:
                e[idx] += 1
            exps.append(tuple(e))
        out.extend(Monomial(e) for e in sorted(exps))
    assert len(out) == math.comb(nvars + max_degree, max_degree)
    return out


class Polynomial:
    """Immutable sparse polynomial in canonical form.

    ``terms`` maps exponent tuples to nonzero coefficients of the declared
    field.  Equality is exact equality of (nvars, field, terms).
    """

    __slots__ = ("nvars", "field", "terms")

    def __init__(self, nvars: int, terms: Mapping[Exponent, Scalar], field: str = RATIONAL):
        if field not in (RATIONAL, FLOAT):
            raise PolynomialError(f"unknown coefficient field {field!r}")
        if nvars < 1:
            raise PolynomialError("need at least one variable")
        canon: dict[Exponent, Fraction | float] = {}
        for exp, c in terms.items():
            if len(exp) != nvars:
                raise DimensionMismatch(f"exponent {exp} does not have {nvars} entries")
            if any(e < 0 for e in exp):
                raise PolynomialError(f"negative exponent in {exp}")
            cc = _as_field(c, field)
            if cc != 0:
                acc = canon.get(exp)
                if acc is None:
                    canon[exp] = cc
                else:
                    s = acc + cc
                    if s == 0:
                        del canon[exp]
                    else:
                        canon[exp] = s
        object.__setattr__(self, "nvars", nvars)
        object.__setattr__(self, "field", field)
        object.__setattr__(self, "terms", canon)

    def __setattr__(self, *a):  # pragma: no cover - immutability guard
        raise AttributeError("Polynomial is immutable")

    # ------------------------------------------------------------------
    # constructors
    @classmethod
    def zero(cls, nvars: int, field: str = RATIONAL) -> "Polynomial":
        return cls(nvars, {}, field)

    @classmethod
    def constant(cls, nvars: int, c: Scalar, field: str = RATIONAL) -> "Polynomial":
        return cls(nvars, {(0,) * nvars: c}, field)

    @classmethod
    def variable(cls, nvars: int, index: int, field: str = RATIONAL) -> "Polynomial":
        if not 0 <= index < nvars:
            raise PolynomialError(f"variable index {index} out of range")
        e = [0] * nvars
        e[index] = 1
        return cls(nvars, {tuple(e): 1}, field)

    @classmethod
    def from_monomial(cls, mono: Monomial, c: Scalar = 1, field: str = RATIONAL) -> "Polynomial":
        return cls(mono.nvars, {mono.exponents: c}, field)

    # ------------------------------------------------------------------
    # structure
    def is_zero(self) -> bool:
        return not self.terms

    @property
    def degree(self) -> int:
        """Total degree; -1 for the zero polynomial."""
        if not self.terms:
            return -1
        return max(sum(e) for e in self.terms)

    def coefficient(self, exp: Exponent) -> Fraction | float:
        zero = Fraction(0) if self.field == RATIONAL else 0.0
        return self.terms.get(tuple(exp), zero)

    def monomials(self) -> list[Monomial]:
        return [Monomial(e) for e in sorted(self.terms, key=lambda e: (sum(e), e))]

    def max_abs_coeff(self) -> float:
        if not self.terms:
            return 0.0
        return max(abs(float(c)) for c in self.terms.values())

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Polynomial):
            return NotImplemented
        return (
            self.nvars == other.nvars
            and self.field == other.field
            and self.terms == other.terms
        )

    def __hash__(self) -> int:
        return hash((self.nvars, self.field, frozenset(self.terms.items())))

    def _check_compatible(self, other: "Polynomial") -> None:
        if self.nvars != other.nvars:
            raise DimensionMismatch(
                f"variable counts differ: {self.nvars} vs {other.nvars}"
            )
        if self.field != other.field:
            raise FieldMismatch(f"fields differ: {self.field} vs {other.field}")

    # ------------------------------------------------------------------
    # arithmetic
    def __add__(self, other: "Polynomial") -> "Polynomial":
        if not isinstance(other, Polynomial):
            return NotImplemented
        self._check_compatible(other)
        terms = dict(self.terms)
        for e, c in other.terms.items():
            s = terms.get(e, 0) + c
            if s == 0:
                terms.pop(e, None)
            else:
                terms[e] = s
        return Polynomial(self.nvars, terms, self.field)

    def __neg__(self) -> "Polynomial":
        return Polynomial(self.nvars, {e: -c for e, c in self.terms.items()}, self.field)

    def __sub__(self, other: "Polynomial") -> "Polynomial":
        if not isinstance(other, Polynomial):
            return NotImplemented
        return self + (-other)

    def __mul__(self, other: "Polynomial | Scalar") -> "Polynomial":
        if isinstance(other, (int, float, Fraction)):
            return self.scale(other)
        if not isinstance(other, Polynomial):
            return NotImplemented
        self._check_compatible(other)
        out: dict[Exponent, Scalar] = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                c = c1 * c2
                s = out.get(e, 0) + c
                if s == 0:
                    out.pop(e, None)
                else:
                    out[e] = s
        return Polynomial(self.nvars, out, self.field)

    __rmul__ = __mul__

    def scale(self, c: Scalar) -> "Polynomial":
        cc = _as_field(c, self.field)
        if cc == 0:
            return Polynomial.zero(self.nvars, self.field)
        return Polynomial(self.nvars, {e: v * cc for e, v in self.terms.items()}, self.field)

    def __pow__(self, k: int) -> "Polynomial":
        if not isinstance(k, int) or k < 0:
            raise PolynomialError("exponent must be a non-negative integer")
        result = Polynomial.constant(self.nvars, 1, self.field)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base if k > 1 else base
            k >>= 1
        return result

    def partial(self, index: int) -> "Polynomial":
        """Partial derivative with respect to variable ``index``."""
        if not 0 <= index < self.nvars:
            raise PolynomialError(f"variable index {index} out of range")
        out: dict[Exponent, Scalar] = {}
        for e, c in self.terms.items():
            k = e[index]
            if k:
                ne = list(e)
                ne[index] = k - 1
                out[tuple(ne)] = c * k
        return Polynomial(self.nvars, out, self.field)

    def evaluate(self, point: Sequence[Scalar]) -> Fraction | float:
        if len(point) != self.nvars:
            raise DimensionMismatch("point length != variable count")
        if self.field == RATIONAL:
            pt = [Fraction(p) for p in point]
            total = Fraction(0)
        else:
            pt = [float(p) for p in point]
            total = 0.0
        for e, c in self.terms.items():
            term = c
            for v, k in zip(pt, e):
                if k:
                    term = term * v**k
            total += term
        return total

    def substitute(self, replacements: Sequence["Polynomial"]) -> "Polynomial":
        """Substitute each variable x_i by replacements[i] (exact expansion)."""
        if len(replacements) != self.nvars:
            raise DimensionMismatch("need one replacement polynomial per variable")
        for r in replacements:
            if r.field != self.field:
                raise FieldMismatch("replacement field differs")
        nv = replacements[0].nvars
        if any(r.nvars != nv for r in replacements):
            raise DimensionMismatch("replacement polynomials disagree on variables")
        # cache powers of each replacement
        powers: list[dict[int, Polynomial]] = [
            {0: Polynomial.constant(nv, 1, self.field)} for _ in range(self.nvars)
        ]
        result = Polynomial.zero(nv, self.field)
        for e, c in self.terms.items():
            term = Polynomial.constant(nv, c, self.field)
            for i, k in enumerate(e):
                if k:
                    cache = powers[i]
                    if k not in cache:
                        top = max(cache)
                        acc = cache[top]
                        for j in range(top + 1, k + 1):
                            acc = acc * replacements[i]
                            cache[j] = acc
                    term = term * cache[k]
            result = result + term
        return result

    # ------------------------------------------------------------------
    # field conversion
    def to_float(self) -> "Polynomial":
        if self.field == FLOAT:
            return self
        return Polynomial(self.nvars, {e: float(c) for e, c in self.terms.items()}, FLOAT)

    def to_rational(self) -> "Polynomial":
        """Exact conversion; float coefficients map to their dyadic values."""
        if self.field == RATIONAL:
            return self
        return Polynomial(
            self.nvars, {e: Fraction(c) for e, c in self.terms.items()}, RATIONAL
        )

    # ------------------------------------------------------------------
    # printing
    def __str__(self) -> str:
        return format_polynomial(self)

    def __repr__(self) -> str:
        return f"Polynomial({self.nvars}, {format_polynomial(self)!r}, field={self.field!r})"


def lie_derivative(phi: Polynomial, field_vec: Sequence[Polynomial]) -> Polynomial:
    """Derivative of phi along the vector field: sum_i (dphi/dx_i) * f_i."""
    if len(field_vec) != phi.nvars:
        raise DimensionMismatch("vector field length != variable count of phi")
    out = Polynomial.zero(phi.nvars, phi.field)
    for i, f_i in enumerate(field_vec):
        out = out + phi.partial(i) * f_i
    return out


class UnivariatePoly:
    """psi(t) = a_0 + a_1 t + ... + a_s t^s with a trailing nonzero coefficient."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable[Scalar]):
        cs = [c if isinstance(c, (int, float, Fraction)) else Fraction(c) for c in coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        object.__setattr__(self, "coeffs", tuple(cs))

    def __setattr__(self, *a):  # pragma: no cover
        raise AttributeError("UnivariatePoly is immutable")

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1 if self.coeffs else -1

    def coefficient(self, i: int) -> Scalar:
        return self.coeffs[i] if 0 <= i < len(self.coeffs) else 0

    def is_zero(self) -> bool:
        return not self.coeffs

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, UnivariatePoly):
            return NotImplemented
        return len(self.coeffs) == len(other.coeffs) and all(
            a == b for a, b in zip(self.coeffs, other.coeffs)
        )

    def __hash__(self) -> int:
        return hash(self.coeffs)

    def __call__(self, t: Scalar) -> Scalar:
        out: Scalar = 0
        for c in reversed(self.coeffs):
            out = out * t + c
        return out

    def __str__(self) -> str:
        if not self.coeffs:
            return "0"
        parts = []
        for i, c in enumerate(self.coeffs):
            if c == 0:
                continue
            if i == 0:
                parts.append(str(c))
            elif i == 1:
                parts.append(f"{c}*t")
            else:
                parts.append(f"{c}*t^{i}")
        return " + ".join(parts).replace("+ -", "- ")


def compose(psi: UnivariatePoly, phi: Polynomial) -> Polynomial:
    """Exact polynomial expansion of psi(phi(x)) by Horner evaluation."""
    result = Polynomial.zero(phi.nvars, phi.field)
    for c in reversed(psi.coeffs):
        if phi.field == RATIONAL and isinstance(c, float):
            raise FieldMismatch("float psi coefficient with rational phi")
        result = result * phi + Polynomial.constant(phi.nvars, c, phi.field)
    return result


# ----------------------------------------------------------------------
# text grammar: terms like ``3/2*x1^2*x2 - 0.04``; '*' between coefficient
# and variables is optional; variables are x1..xn.

_TOKEN = re.compile(
    r"""\s*(?:
        (?P<num>\d+/\d+|\d+\.\d+(?:[eE][+-]?\d+)?|\.\d+(?:[eE][+-]?\d+)?|\d+(?:[eE][+-]?\d+)?)
      | (?P<var>x\d+)
      | (?P<op>[-+*^()])
    )""",
    re.VERBOSE,
)


class ParseError(PolynomialError):
    """Raised on malformed polynomial text, with the offending position."""

    def __init__(self, message: str, pos: int):
        super().__init__(f"{message} (column {pos + 1})")
        self.pos = pos


def _tokenize(text: str):
    pos = 0
    out = []
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m or m.end() == m.start():
            if text[pos:].strip() == "":
                break
            raise ParseError(f"unexpected character {text[pos]!r}", pos)
        if m.lastgroup is not None:
            out.append((m.lastgroup, m.group(m.lastgroup), m.start()))
        pos = m.end()
    return out


def _parse_number(tok: str, field: str) -> Scalar:
    if field == RATIONAL:
        if "/" in tok:
            return Fraction(tok)
        return Fraction(tok.replace("E", "e"))  # Fraction parses decimals exactly
    return float(Fraction(tok)) if "/" in tok else float(tok)


def parse_polynomial(text: str, nvars: int | None = None, field: str = RATIONAL) -> Polynomial:
    """Parse the polynomial grammar into canonical form.

    When ``nvars`` is None the variable count is inferred from the largest
    variable index that occurs (at least 1).
    """
    tokens = _tokenize(text)
    if nvars is None:
        indices = [int(t[1][1:]) for t in tokens if t[0] == "var"]
        nvars = max(indices) if indices else 1

    terms: dict[Exponent, Scalar] = {}
    i = 0
    n = len(tokens)

    def fail(msg: str) -> ParseError:
        pos = tokens[i][2] if i < n else (tokens[-1][2] + len(tokens[-1][1]) if tokens else 0)
        return ParseError(msg, pos)

    if n == 0:
        raise ParseError("empty polynomial", 0)

    while i < n:
        sign = 1
        while i < n and tokens[i][0] == "op" and tokens[i][1] in "+-":
            if tokens[i][1] == "-":
                sign = -sign
            i += 1
        if i >= n:
            raise fail("dangling sign")

        coeff: Scalar | None = None
        exps = [0] * nvars
        saw_factor = False
        expect_factor = True
        while i < n:
            kind, val, pos = tokens[i]
            if kind == "num":
                if not expect_factor:
                    break
                c = _parse_number(val, field)
                i += 1
                if i < n and tokens[i][0] == "op" and tokens[i][1] == "^":
                    i += 1
                    if i >= n or tokens[i][0] != "num" or "/" in tokens[i][1] or "." in tokens[i][1]:
                        raise fail("expected integer exponent after '^'")
                    c = c ** int(tokens[i][1])
                    i += 1
                coeff = c if coeff is None else coeff * c
                saw_factor = True
                expect_factor = False
            elif kind == "var":
                if not expect_factor and tokens[i - 1][0] == "var":
                    # implicit product of adjacent variables is allowed
                    pass
                idx = int(val[1:]) - 1
                if idx < 0 or idx >= nvars:
                    raise ParseError(f"variable {val} out of range (nvars={nvars})", pos)
                i += 1
                power = 1
                if i < n and tokens[i][0] == "op" and tokens[i][1] == "^":
                    i += 1
                    if i >= n or tokens[i][0] != "num" or "/" in tokens[i][1] or "." in tokens[i][1]:
                        raise fail("expected integer exponent after '^'")
                    power = int(tokens[i][1])
                    i += 1
                exps[idx] += power
                saw_factor = True
                expect_factor = False
            elif kind == "op" and val == "*":
                if expect_factor:
                    raise fail("unexpected '*'")
                expect_factor = True
                i += 1
            else:
                break
        if not saw_factor:
            raise fail("expected a term")
        if expect_factor:
            raise fail("dangling '*'")
        c = coeff if coeff is not None else (Fraction(1) if field == RATIONAL else 1.0)
        e = tuple(exps)
        terms[e] = terms.get(e, 0) + sign * c

    return Polynomial(nvars, terms, field)


def _format_coeff(c: Fraction | float) -> str:
    if isinstance(c, Fraction):
        return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"
    return repr(c)


def format_polynomial(p: Polynomial) -> str:
    """Canonical text form; graded-lex descending, round-trips via parse."""
    if not p.terms:
        return "0"
    parts = []
    for e in sorted(p.terms, key=lambda e: (sum(e), e), reverse=True):
        c = p.terms[e]
        mono = Monomial(e)
        neg = c < 0
        mag = -c if neg else c
        if mono.degree == 0:
            body = _format_coeff(mag)
        elif mag == 1:
            body = str(mono)
        else:
            body = f"{_format_coeff(mag)}*{mono}"
        if not parts:
            parts.append(f"-{body}" if neg else body)
        else:
            parts.append(f"- {body}" if neg else f"+ {body}")
    return " ".join(parts)
