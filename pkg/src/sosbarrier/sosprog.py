"""Compile nonnegativity-on-set constraints into one standard-form SDP.

A constraint ``p(x) >= 0 on {g_1 >= 0, ..., g_k >= 0}`` becomes the identity

    p(x) == sigma_0(x) + sum_j sigma_j(x) * g_j(x)      (+ t * ||m_0(x)||^2)

with fresh unknown SOS blocks sigma_j = m_j^T Q_j m_j and, optionally, a
shared scalar margin t added to sigma_0's Gram diagonal.  Identities must be
affine in all unknowns (scalar template parameters and Gram entries); any
attempt to multiply two parametric objects is rejected at construction.

``assemble`` turns the program into the standard primal SDP: one equality
per monomial per identity, Gram blocks as PSD blocks, scalar parameters as
1x1 blocks (free scalars split into differences of two nonnegative blocks),
plus an optional generous total-trace cap that keeps margin maximization
bounded.  Assembly is deterministic: identical programs yield bit-identical
problems.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from typing import Optional, Sequence

import numpy as np

from .poly import FLOAT, Exponent, Monomial, Polynomial, monomial_basis
from .sdp import Entry, SDPProblem, SDPSolution
from .system import SemialgebraicSet

MARGIN = "__margin__"


class BilinearityError(TypeError):
    """Raised when two parameter-carrying objects are multiplied."""


class BalanceError(ValueError):
    """An identity's degrees cannot be balanced as requested."""


class StructurallyInfeasible(Exception):
    """A monomial equation has no unknowns and a nonzero target."""

    def __init__(self, identity: str, monomial: Monomial, value: float):
        super().__init__(
            f"identity {identity!r}: monomial {monomial} must equal {value} "
            "but no unknown can produce it"
        )
        self.identity = identity


@dataclass
class ParametricPolynomial:
    """fixed(x) + sum_s s * pattern_s(x), affine in the scalar parameters."""

    nvars: int
    fixed: Polynomial
    patterns: dict[str, Polynomial] = dc_field(default_factory=dict)

    def __post_init__(self):
        if self.fixed.field != FLOAT:
            self.fixed = self.fixed.to_float()
        self.patterns = {k: v.to_float() for k, v in self.patterns.items()
                         if not v.to_float().is_zero()}

    @classmethod
    def known(cls, p: Polynomial) -> "ParametricPolynomial":
        return cls(p.nvars, p.to_float())

    @property
    def is_known(self) -> bool:
        return not self.patterns

    @property
    def degree(self) -> int:
        d = self.fixed.degree
        for p in self.patterns.values():
            d = max(d, p.degree)
        return d

    def map_linear(self, fn) -> "ParametricPolynomial":
        """Apply a linear polynomial map (e.g. a Lie derivative) termwise."""
        return ParametricPolynomial(
            self.nvars, fn(self.fixed), {k: fn(v) for k, v in self.patterns.items()}
        )

    def __add__(self, other: "ParametricPolynomial | Polynomial") -> "ParametricPolynomial":
        if isinstance(other, Polynomial):
            other = ParametricPolynomial.known(other)
        pats = dict(self.patterns)
        for k, v in other.patterns.items():
            pats[k] = pats[k] + v if k in pats else v
        return ParametricPolynomial(self.nvars, self.fixed + other.fixed, pats)

    def __sub__(self, other: "ParametricPolynomial | Polynomial") -> "ParametricPolynomial":
        if isinstance(other, Polynomial):
            other = ParametricPolynomial.known(other)
        return self + other.scale(-1.0)

    def scale(self, c: float) -> "ParametricPolynomial":
        return ParametricPolynomial(
            self.nvars, self.fixed.scale(c), {k: v.scale(c) for k, v in self.patterns.items()}
        )

    def mul_known(self, p: "Polynomial | ParametricPolynomial") -> "ParametricPolynomial":
        """Multiply by a known polynomial; parametric*parametric is bilinear."""
        if isinstance(p, ParametricPolynomial):
            if not p.is_known:
                raise BilinearityError(
                    "product of two parametric polynomials is not affine in the unknowns"
                )
            p = p.fixed
        p = p.to_float()
        return ParametricPolynomial(
            self.nvars, self.fixed * p, {k: v * p for k, v in self.patterns.items()}
        )

    def __mul__(self, other):
        if isinstance(other, (int, float)):
            return self.scale(float(other))
        if isinstance(other, Polynomial):
            return self.mul_known(other)
        if isinstance(other, ParametricPolynomial):
            if self.is_known:
                return other.mul_known(self.fixed)
            return self.mul_known(other)  # raises unless other is known
        return NotImplemented

    __rmul__ = __mul__

    def instantiate(self, values: dict[str, float]) -> Polynomial:
        out = self.fixed
        for k, pat in self.patterns.items():
            out = out + pat.scale(values[k])
        return out


@dataclass
class GramBlock:
    """sigma(x) = m^T Q m times a known multiplicand, with Q PSD unknown."""

    name: str
    basis: tuple[Monomial, ...]
    multiplicand: Polynomial  # known polynomial (1 for the free SOS term)

    @property
    def dimension(self) -> int:
        return len(self.basis)


@dataclass
class Identity:
    """lhs(x) == sum of the gram-block polynomials (+ margin on grams[0]).

    The margin term t * sum m_k^2 ranges only over sigma_0 basis monomials
    with 2*deg(m_k) <= deg(lhs); higher squares would pin t <= 0 whenever the
    left side cannot reach their degree."""

    name: str
    lhs: ParametricPolynomial
    grams: list[GramBlock]
    margin: bool = True
    balanced_degree: int = 0
    margin_degree: int = 0  # half-degree bound for the margin squares
    fixed_margin: float = 0.0  # pinned cushion baked into the left side


@dataclass
class AssemblyInfo:
    """Mapping from SDP blocks back to program objects, for extraction."""

    block_of_gram: dict[str, int]
    scalar_blocks: dict[str, tuple[int, Optional[int]]]  # name -> (plus, minus or None)
    row_count: int
    margin_name: Optional[str]


class SOSProgram:
    """A set of polynomial identities affine in scalar + Gram unknowns."""

    def __init__(
        self,
        nvars: int,
        margin_mode: str = "soft",
        trace_cap: float | None = 1e5,
        margin_objective_weight: float = 1.0,
        trace_penalty: float = 1e-4,
    ):
        if margin_mode not in ("soft", "hard", "none"):
            raise ValueError("margin_mode must be soft, hard or none")
        self.nvars = nvars
        self.margin_mode = margin_mode
        self.trace_cap = trace_cap
        self.trace_penalty = trace_penalty
        self.identities: list[Identity] = []
        self.scalars: dict[str, bool] = {}  # name -> nonneg
        self.objective_terms: dict[str, float] = {}  # maximize sum coeff*scalar
        self.scalar_caps: dict[str, float] = {}  # upper bounds on maximized scalars
        self._gram_names: set[str] = set()
        if margin_mode != "none":
            self.scalars[MARGIN] = margin_mode == "hard"
            self.objective_terms[MARGIN] = margin_objective_weight
            self.scalar_caps[MARGIN] = 1.0

    # ------------------------------------------------------------------
    def new_scalar(self, name: str, nonneg: bool = False) -> ParametricPolynomial:
        if name in self.scalars:
            raise ValueError(f"duplicate scalar parameter {name!r}")
        self.scalars[name] = nonneg
        return ParametricPolynomial(
            self.nvars,
            Polynomial.zero(self.nvars, FLOAT),
            {name: Polynomial.constant(self.nvars, 1.0, FLOAT)},
        )

    def new_template(self, prefix: str, degree: int) -> ParametricPolynomial:
        """Dense polynomial template of the given total degree."""
        pats: dict[str, Polynomial] = {}
        for mono in monomial_basis(self.nvars, degree):
            name = f"{prefix}[{','.join(map(str, mono.exponents))}]"
            if name in self.scalars:
                raise ValueError(f"duplicate template parameter {name!r}")
            self.scalars[name] = False
            pats[name] = Polynomial.from_monomial(mono, 1.0, FLOAT)
        return ParametricPolynomial(self.nvars, Polynomial.zero(self.nvars, FLOAT), pats)

    def add_objective(self, name: str, coeff: float) -> None:
        """Add coeff * scalar to the maximized objective."""
        if name not in self.scalars:
            raise ValueError(f"unknown scalar {name!r}")
        self.objective_terms[name] = self.objective_terms.get(name, 0.0) + coeff

    # ------------------------------------------------------------------
    def encode_nonneg_on_set(
        self,
        p: "ParametricPolynomial | Polynomial",
        region: SemialgebraicSet,
        mult_degree: int,
        name: str,
        margin: bool = True,
        fixed_margin: float = 0.0,
    ) -> Identity:
        """Emit p = sigma_0 + sum_j sigma_j g_j with degree balancing.

        sigma_0 spans squares up to deg(p) (floor basis: a larger basis would
        force structurally zero Gram rows and strip the problem's interior);
        odd top degrees are reachable through the multiplier terms, whose
        bases are clipped so no right-hand term exceeds deg(p).
        """
        if mult_degree < 0 or mult_degree % 2:
            raise BalanceError(f"identity {name!r}: mult_degree must be even and >= 0")
        if isinstance(p, Polynomial):
            p = ParametricPolynomial.known(p)
        if p.nvars != self.nvars:
            raise BalanceError(f"identity {name!r}: wrong variable count")
        target = max(p.degree, 0)
        grams = [GramBlock(
            f"{name}/sigma0",
            tuple(monomial_basis(self.nvars, target // 2)),
            Polynomial.constant(self.nvars, 1.0, FLOAT),
        )]
        for j, g in enumerate(region.inequalities):
            gd = g.degree
            if gd > target:
                raise BalanceError(
                    f"identity {name!r}: multiplier for inequality {j} of degree {gd} "
                    f"cannot fit inside the balanced degree {target}"
                )
            half = min(mult_degree, target - gd) // 2
            grams.append(GramBlock(
                f"{name}/sigma{j + 1}",
                tuple(monomial_basis(self.nvars, half)),
                g.to_float(),
            ))
        # margin squares are capped at degree one: 1 + sum x_i^2 keeps the
        # cushion at the problem's natural scale instead of being swamped by
        # towering top-degree squares far from the sets of interest
        margin_half = min(target // 2, 1)
        if fixed_margin:
            # pinned interior cushion: lhs - tau * sum m_k^2 over the margin
            # squares, folded back onto sigma_0's diagonal at extraction
            shift: dict[Exponent, float] = {}
            for mb in grams[0].basis:
                if mb.degree <= margin_half:
                    mono = mb.mul(mb).exponents
                    shift[mono] = shift.get(mono, 0.0) - float(fixed_margin)
            p = p + Polynomial(self.nvars, shift, FLOAT)
        ident = Identity(name, p, grams, margin=margin and self.margin_mode != "none",
                         balanced_degree=target, margin_degree=margin_half)
        ident.fixed_margin = float(fixed_margin)
        for gb in grams:
            if gb.name in self._gram_names:
                raise ValueError(f"duplicate gram block {gb.name!r}")
            self._gram_names.add(gb.name)
        self.identities.append(ident)
        return ident

    def add_extra_gram(
        self, ident: Identity, name: str, basis: Sequence[Monomial], multiplicand: Polynomial
    ) -> GramBlock:
        """Attach one more unknown SOS block (times a known multiplicand) to
        an identity's right-hand side; used for coupling terms like delta*chi."""
        if name in self._gram_names:
            raise ValueError(f"duplicate gram block {name!r}")
        blk = GramBlock(name, tuple(basis), multiplicand.to_float())
        ident.grams.append(blk)
        self._gram_names.add(name)
        return blk

    def encode_strict_pos_on_set(
        self,
        p: "ParametricPolynomial | Polynomial",
        region: SemialgebraicSet,
        mult_degree: int,
        name: str,
        epsilon: float = 1e-5,
        margin: bool = True,
    ) -> Identity:
        """Strict positivity via an explicit margin: encode p - epsilon >= 0."""
        if epsilon <= 0:
            raise ValueError("epsilon must be positive")
        if isinstance(p, Polynomial):
            p = ParametricPolynomial.known(p)
        shifted = p - Polynomial.constant(self.nvars, epsilon, FLOAT)
        return self.encode_nonneg_on_set(shifted, region, mult_degree, name, margin=margin)

    # ------------------------------------------------------------------
    def assemble(self) -> tuple[SDPProblem, AssemblyInfo]:
        """Build the standard-form SDP; see the module docstring for layout."""
        dims: list[int] = []
        block_of_gram: dict[str, int] = {}
        for ident in self.identities:
            for gb in ident.grams:
                block_of_gram[gb.name] = len(dims)
                dims.append(gb.dimension)
        scalar_blocks: dict[str, tuple[int, Optional[int]]] = {}
        for sname in self.scalars:
            if self.scalars[sname]:
                scalar_blocks[sname] = (len(dims), None)
                dims.append(1)
            else:
                scalar_blocks[sname] = (len(dims), len(dims) + 1)
                dims.extend((1, 1))
        scalar_cap_rows: list[tuple[str, float, int]] = []
        for sname, cap in self.scalar_caps.items():
            if sname in self.scalars:
                scalar_cap_rows.append((sname, cap, len(dims)))
                dims.append(1)  # slack making "scalar <= cap" an equality
        cap_slack = None
        if self.trace_cap is not None:
            cap_slack = len(dims)
            dims.append(1)

        rows: list[dict[int, list[Entry]]] = []
        rhs: list[float] = []

        for ident in self.identities:
            # gather coefficient maps: monomial -> contributions
            gram_coeff: dict[tuple[int, ...], list[tuple[int, int, int, float]]] = {}
            for gb in ident.grams:
                bi = block_of_gram[gb.name]
                basis = gb.basis
                for a in range(len(basis)):
                    for b_ in range(a, len(basis)):
                        prod = basis[a].mul(basis[b_])
                        for ge, gc in gb.multiplicand.terms.items():
                            mono = tuple(x + y for x, y in zip(prod.exponents, ge))
                            gram_coeff.setdefault(mono, []).append((bi, a, b_, float(gc)))
            margin_sq: dict[tuple[int, ...], float] = {}
            if ident.margin:
                for mb in ident.grams[0].basis:
                    if mb.degree > ident.margin_degree:
                        continue
                    mono = mb.mul(mb).exponents
                    margin_sq[mono] = margin_sq.get(mono, 0.0) + 1.0

            support: set[tuple[int, ...]] = set(gram_coeff)
            support.update(margin_sq)
            support.update(ident.lhs.fixed.terms)
            for pat in ident.lhs.patterns.values():
                support.update(pat.terms)

            for mono in sorted(support, key=lambda e: (sum(e), e)):
                entries: dict[int, dict[tuple[int, int], float]] = {}
                for bi, a, b_, gc in gram_coeff.get(mono, ()):
                    blk = entries.setdefault(bi, {})
                    key = (a, b_)
                    # the polynomial m^T Q m doubles off-diagonal Gram entries,
                    # exactly like <A, Q> doubles off-diagonal A entries, so the
                    # stored entry is the raw multiplicand coefficient either way
                    blk[key] = blk.get(key, 0.0) + gc
                if mono in margin_sq:
                    pb, mb_ = scalar_blocks[MARGIN]
                    entries.setdefault(pb, {})[(0, 0)] = (
                        entries.get(pb, {}).get((0, 0), 0.0) + margin_sq[mono]
                    )
                    if mb_ is not None:
                        entries.setdefault(mb_, {})[(0, 0)] = (
                            entries.get(mb_, {}).get((0, 0), 0.0) - margin_sq[mono]
                        )
                for sname, pat in ident.lhs.patterns.items():
                    c = pat.terms.get(mono)
                    if c:
                        pb, mb_ = scalar_blocks[sname]
                        entries.setdefault(pb, {})[(0, 0)] = (
                            entries.get(pb, {}).get((0, 0), 0.0) - float(c)
                        )
                        if mb_ is not None:
                            entries.setdefault(mb_, {})[(0, 0)] = (
                                entries.get(mb_, {}).get((0, 0), 0.0) + float(c)
                            )
                bval = float(ident.lhs.fixed.terms.get(mono, 0.0))
                if not entries:
                    if abs(bval) > 0.0:
                        raise StructurallyInfeasible(ident.name, Monomial(mono), bval)
                    continue
                rows.append({bi: [(i, j, v) for (i, j), v in sorted(es.items()) if v != 0.0]
                             for bi, es in sorted(entries.items())})
                rhs.append(bval)

        for sname, cap, slack_bi in scalar_cap_rows:
            pb, mb_ = scalar_blocks[sname]
            row: dict[int, list[Entry]] = {pb: [(0, 0, 1.0)], slack_bi: [(0, 0, 1.0)]}
            if mb_ is not None:
                row[mb_] = [(0, 0, -1.0)]
            rows.append(row)
            rhs.append(float(cap))

        if cap_slack is not None:
            cap_row: dict[int, list[Entry]] = {}
            for bi, d in enumerate(dims):
                cap_row[bi] = [(i, i, 1.0) for i in range(d)]
            rows.append(cap_row)
            rhs.append(float(self.trace_cap))

        c_entries: dict[int, list[Entry]] = {}
        if self.trace_penalty:
            # small pull toward low-norm solutions: penalize Gram and scalar
            # block traces (slack blocks excluded so caps stay neutral)
            lam = float(self.trace_penalty)
            for gname, bi in block_of_gram.items():
                d = dims[bi]
                c_entries[bi] = [(i, i, lam) for i in range(d)]
            for sname, (pb, mb_) in scalar_blocks.items():
                c_entries.setdefault(pb, []).append((0, 0, lam))
                if mb_ is not None:
                    c_entries.setdefault(mb_, []).append((0, 0, lam))
        for sname, coeff in self.objective_terms.items():
            if coeff == 0.0:
                continue
            pb, mb_ = scalar_blocks[sname]
            # maximize sum coeff*s  <->  min -coeff*s
            c_entries.setdefault(pb, []).append((0, 0, -coeff))
            if mb_ is not None:
                c_entries.setdefault(mb_, []).append((0, 0, coeff))

        for bi in list(c_entries):
            merged: dict[tuple[int, int], float] = {}
            for i, j, v in c_entries[bi]:
                merged[(i, j)] = merged.get((i, j), 0.0) + v
            c_entries[bi] = [(i, j, v) for (i, j), v in sorted(merged.items()) if v != 0.0]

        problem = SDPProblem(tuple(dims), c_entries, rows, np.array(rhs))
        info = AssemblyInfo(
            block_of_gram=block_of_gram,
            scalar_blocks=scalar_blocks,
            row_count=len(rows),
            margin_name=MARGIN if self.margin_mode != "none" else None,
        )
        return problem, info


@dataclass
class GramValue:
    basis: tuple[Monomial, ...]
    matrix: np.ndarray
    multiplicand: Polynomial

    def polynomial(self) -> Polynomial:
        """Expand m^T Q m * multiplicand as a float polynomial."""
        n = self.basis[0].nvars if self.basis else self.multiplicand.nvars
        terms: dict[tuple[int, ...], float] = {}
        k = len(self.basis)
        for a in range(k):
            for b in range(a, k):
                coeff = self.matrix[a, b] * (1.0 if a == b else 2.0)
                if coeff == 0.0:
                    continue
                mono = self.basis[a].mul(self.basis[b]).exponents
                terms[mono] = terms.get(mono, 0.0) + float(coeff)
        base = Polynomial(self.multiplicand.nvars, terms, FLOAT)
        return base * self.multiplicand


@dataclass
class Extraction:
    scalars: dict[str, float]
    grams: dict[str, GramValue]  # by gram block name (margin folded into sigma0)
    margin: float

    def value(self, name: str) -> float:
        return self.scalars[name]

    def instantiate(self, pp: ParametricPolynomial) -> Polynomial:
        return pp.instantiate(self.scalars)


def extract(solution: SDPSolution, program: SOSProgram, info: AssemblyInfo) -> Extraction:
    """Read scalar parameters and Gram matrices out of a solved SDP.

    The shared margin t is folded back onto each margined identity's sigma_0
    Gram diagonal, so the returned Gram data reproduces the identities as
    stated (and inherits t as an interior PSD cushion).
    """
    if solution.status not in ("optimal", "feasible"):
        raise ValueError(f"no extraction from status {solution.status!r}")
    scalars: dict[str, float] = {}
    for sname, (pb, mb_) in info.scalar_blocks.items():
        v = float(solution.X.blocks[pb][0, 0])
        if mb_ is not None:
            v -= float(solution.X.blocks[mb_][0, 0])
        scalars[sname] = v
    margin = scalars.get(MARGIN, 0.0)
    grams: dict[str, GramValue] = {}
    for ident in program.identities:
        for pos, gb in enumerate(ident.grams):
            Q = np.array(solution.X.blocks[info.block_of_gram[gb.name]], dtype=float)
            Q = 0.5 * (Q + Q.T)
            if pos == 0:
                bump = (margin if ident.margin else 0.0) + ident.fixed_margin
                if bump:
                    cushion = np.array([1.0 if m.degree <= ident.margin_degree
                                        else 0.0 for m in gb.basis])
                    Q = Q + bump * np.diag(cushion)
            grams[gb.name] = GramValue(gb.basis, Q, gb.multiplicand)
    return Extraction(scalars=scalars, grams=grams, margin=margin)


def identity_residual(ident: Identity, ext: Extraction) -> Polynomial:
    """lhs - sum of extracted gram polynomials (float); zero when satisfied."""
    lhs = ext.instantiate(ident.lhs)
    rhs = Polynomial.zero(lhs.nvars, FLOAT)
    for gb in ident.grams:
        rhs = rhs + ext.grams[gb.name].polynomial()
    return lhs - rhs
