"""Primal-dual path-following interior-point solver for block-diagonal SDPs.

Standard primal form:

    min <C, X>   s.t.   <A_j, X> = b_j  (j = 1..m),   X >= 0 (PSD)

with block-diagonal symmetric matrices.  The solver follows the classic
path-following loop -- shrink the barrier parameter mu geometrically by a
fixed factor gamma, then take Newton steps toward the point of the central
path with X S = mu I -- using the HKM direction and a fractional-to-the-
boundary step rule (factor 0.98).  The start point X = S = rho*I, y = 0 is
generally infeasible in the equality constraints; the equality residuals are
folded into the Newton system and driven to zero along the way, which
replaces any separate phase-I.

Everything is dense per block and fully deterministic: identical problems and
settings produce bit-identical iterate sequences.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field as dc_field
from typing import Optional, Sequence

import numpy as np

Entry = tuple[int, int, float]  # (row, col, value) with row <= col


class SDPStructureError(ValueError):
    """Matrices disagree with the declared block structure."""


@dataclass
class SymMatrix:
    """Block-diagonal symmetric matrix: one dense symmetric array per block."""

    dims: tuple[int, ...]
    blocks: list[np.ndarray]

    @classmethod
    def zeros(cls, dims: Sequence[int]) -> "SymMatrix":
        return cls(tuple(dims), [np.zeros((d, d)) for d in dims])

    @classmethod
    def identity(cls, dims: Sequence[int], scale: float = 1.0) -> "SymMatrix":
        return cls(tuple(dims), [scale * np.eye(d) for d in dims])

    @classmethod
    def from_entries(cls, dims: Sequence[int], entries: dict[int, list[Entry]]) -> "SymMatrix":
        m = cls.zeros(dims)
        for bi, es in entries.items():
            B = m.blocks[bi]
            for i, j, v in es:
                B[i, j] += v
                if i != j:
                    B[j, i] += v
        return m

    def copy(self) -> "SymMatrix":
        return SymMatrix(self.dims, [b.copy() for b in self.blocks])

    def check_structure(self, other: "SymMatrix") -> None:
        if self.dims != other.dims:
            raise SDPStructureError(f"block structure mismatch: {self.dims} vs {other.dims}")

    def norm_inf(self) -> float:
        return max((float(np.max(np.abs(b))) if b.size else 0.0) for b in self.blocks)

    def trace(self) -> float:
        return float(sum(np.trace(b) for b in self.blocks))


def inner_product(a: SymMatrix, b: SymMatrix) -> float:
    """<A, B> = sum_ij a_ij b_ij (the trace inner product)."""
    a.check_structure(b)
    return float(sum(np.sum(x * y) for x, y in zip(a.blocks, b.blocks)))


@dataclass
class SDPProblem:
    """min <C,X> s.t. <A_j,X> = b_j, X PSD, block-diagonal with ``dims``.

    Constraint matrices are kept sparse as per-block entry lists with
    row <= col; an entry (i, j, v) with i < j denotes the symmetric pair
    A[i,j] = A[j,i] = v.
    """

    dims: tuple[int, ...]
    c_entries: dict[int, list[Entry]]
    constraints: list[dict[int, list[Entry]]]
    b: np.ndarray

    def __post_init__(self):
        if len(self.constraints) != len(self.b):
            raise SDPStructureError("constraint count != len(b)")

    @property
    def m(self) -> int:
        return len(self.constraints)

    @property
    def total_dim(self) -> int:
        return int(sum(self.dims))

    def C(self) -> SymMatrix:
        return SymMatrix.from_entries(self.dims, self.c_entries)

    def A(self, j: int) -> SymMatrix:
        return SymMatrix.from_entries(self.dims, self.constraints[j])


@dataclass
class SolverSettings:
    """Path-following parameters.

    ``threshold`` is the stopping barrier value c (loop runs while mu > c);
    ``shrink`` is the geometric factor gamma in (0, 1); ``tol`` bounds the
    final primal/dual equality residuals.
    """

    threshold: float = 1e-9
    shrink: float = 0.3
    max_outer: int = 200
    max_inner: int = 20
    tol: float = 1e-8
    step_frac: float = 0.98
    corrector: bool = True  # second-order correction at the fixed mu target
    init_scale: Optional[float] = None  # starting X = S-ish scale; None = heuristic
    trace: bool = False

    def __post_init__(self):
        if not 0 < self.shrink < 1:
            raise ValueError("shrink factor gamma must lie in (0, 1)")
        if self.threshold <= 0:
            raise ValueError("threshold c must be positive")


@dataclass
class IterRecord:
    outer: int
    inner: int
    mu: float
    gap: float
    primal_res: float
    dual_res: float
    min_eig_x: float
    min_eig_s: float


@dataclass
class SDPSolution:
    X: SymMatrix
    y: np.ndarray
    S: SymMatrix
    status: str  # optimal | feasible | infeasible | numerical-failure | iteration-limit
    gap: float
    mu: float
    primal_res: float
    dual_res: float
    iterations: int
    objective: float = 0.0
    trace_records: list[IterRecord] = dc_field(default_factory=list)

    @property
    def is_usable(self) -> bool:
        return self.status in ("optimal", "feasible")


class _Workspace:
    """Stacked dense constraint data for vectorized Schur assembly.

    Constraint rows are normalized to unit Frobenius norm (b scaled along),
    which evens out the wildly mixed scales of coefficient-matching rows."""

    def __init__(self, prob: SDPProblem):
        self.dims = prob.dims
        self.dense_idx = [i for i, d in enumerate(prob.dims) if d > 1]
        self.diag_idx = [i for i, d in enumerate(prob.dims) if d == 1]
        m = prob.m
        self.a_dense: list[np.ndarray] = []
        for bi in self.dense_idx:
            d = prob.dims[bi]
            stack = np.zeros((m, d, d))
            for j, cons in enumerate(prob.constraints):
                for i, k, v in cons.get(bi, ()):
                    stack[j, i, k] += v
                    if i != k:
                        stack[j, k, i] += v
            self.a_dense.append(stack)
        nd = len(self.diag_idx)
        self.a_diag = np.zeros((m, nd))
        pos = {bi: p for p, bi in enumerate(self.diag_idx)}
        for j, cons in enumerate(prob.constraints):
            for bi in self.diag_idx:
                for i, k, v in cons.get(bi, ()):
                    self.a_diag[j, pos[bi]] += v

        sq = np.zeros(m)
        for stack in self.a_dense:
            sq += np.einsum("jab,jab->j", stack, stack)
        if self.a_diag.size:
            sq += np.einsum("jk,jk->j", self.a_diag, self.a_diag)
        self.row_scale = np.sqrt(np.maximum(sq, 1e-30))
        inv = 1.0 / self.row_scale
        self.a_dense = [stack * inv[:, None, None] for stack in self.a_dense]
        if self.a_diag.size:
            self.a_diag = self.a_diag * inv[:, None]

        self.c_dense = []
        for n_, bi in enumerate(self.dense_idx):
            d = prob.dims[bi]
            Cb = np.zeros((d, d))
            for i, k, v in prob.c_entries.get(bi, ()):
                Cb[i, k] += v
                if i != k:
                    Cb[k, i] += v
            self.c_dense.append(Cb)
        self.c_diag = np.zeros(nd)
        for bi in self.diag_idx:
            for i, k, v in prob.c_entries.get(bi, ()):
                self.c_diag[pos[bi]] += v

    def apply_A(self, xd: list[np.ndarray], xg: np.ndarray) -> np.ndarray:
        """Evaluate the constraint map: out_j = <A_j, X>."""
        m = self.a_diag.shape[0]
        out = np.zeros(m)
        for stack, xb in zip(self.a_dense, xd):
            out += stack.reshape(m, -1) @ xb.reshape(-1)
        if self.a_diag.shape[1]:
            out += self.a_diag @ xg
        return out

    def apply_At(self, y: np.ndarray) -> tuple[list[np.ndarray], np.ndarray]:
        """Adjoint: sum_j y_j A_j, split into dense blocks and diagonal part."""
        dense = [np.tensordot(y, stack, axes=1) for stack in self.a_dense]
        diag = self.a_diag.T @ y if self.a_diag.shape[1] else np.zeros(0)
        return dense, diag


def _min_eig(block: np.ndarray) -> float:
    if block.size == 0:
        return math.inf
    return float(np.linalg.eigvalsh(block)[0])


def _max_step(blocks: list[np.ndarray], deltas: list[np.ndarray], diag: np.ndarray,
              ddiag: np.ndarray) -> float:
    """Largest a with blocks + a*deltas still PSD (matrix pencil per block)."""
    alpha = math.inf
    for B, D in zip(blocks, deltas):
        try:
            L = np.linalg.cholesky(B)
        except np.linalg.LinAlgError:
            return 0.0
        Li = np.linalg.inv(L)
        W = Li @ D @ Li.T
        lam = float(np.linalg.eigvalsh(0.5 * (W + W.T))[0])
        if lam < 0:
            alpha = min(alpha, -1.0 / lam)
    if diag.size:
        neg = ddiag < 0
        if np.any(neg):
            alpha = min(alpha, float(np.min(-diag[neg] / ddiag[neg])))
    return alpha


class PresolveInfeasible(Exception):
    """A constraint row reduced to 0 == b with b nonzero."""


def _facial_presolve(problem: SDPProblem):
    """Diagonal facial reduction.

    A row with zero right-hand side whose entries all sit on PSD-block
    diagonals with one sign forces those diagonal entries -- hence their whole
    rows and columns -- to zero.  Eliminating them (repeatedly) removes the
    structurally degenerate directions that otherwise pin the interior-point
    iterates to the cone boundary.  Returns the reduced problem plus the
    per-block index maps needed to re-inflate a solution.
    """
    keep = [list(range(d)) for d in problem.dims]
    rows = [dict((bi, list(es)) for bi, es in cons.items()) for cons in problem.constraints]
    b = [float(v) for v in problem.b]
    dead: set[tuple[int, int]] = set()
    drop_rows: set[int] = set()

    changed = True
    while changed:
        changed = False
        for j, cons in enumerate(rows):
            if j in drop_rows:
                continue
            entries = [(bi, i, k, v) for bi, es in cons.items() for (i, k, v) in es]
            if not entries:
                if abs(b[j]) > 0.0:
                    raise PresolveInfeasible(f"row {j}: 0 == {b[j]}")
                drop_rows.add(j)
                changed = True
                continue
            if b[j] != 0.0:
                continue
            if all(i == k for _, i, k, _ in entries):
                signs = {v > 0 for _, _, _, v in entries if v != 0.0}
                if len(signs) == 1:
                    for bi, i, _, v in entries:
                        if v != 0.0 and (bi, i) not in dead:
                            dead.add((bi, i))
                            changed = True
                    drop_rows.add(j)
        if changed and dead:
            for j, cons in enumerate(rows):
                if j in drop_rows:
                    continue
                for bi in list(cons):
                    es = [(i, k, v) for (i, k, v) in cons[bi]
                          if (bi, i) not in dead and (bi, k) not in dead]
                    if es:
                        cons[bi] = es
                    else:
                        del cons[bi]

    if not dead and not drop_rows:
        return problem, None, None

    keep = [[i for i in range(d) if (bi, i) not in dead]
            for bi, d in enumerate(problem.dims)]
    remap = [{old: new for new, old in enumerate(ks)} for ks in keep]
    new_dims = tuple(len(ks) for ks in keep if len(ks) > 0)
    block_map = []
    nb = 0
    for bi, ks in enumerate(keep):
        block_map.append(nb if ks else None)
        if ks:
            nb += 1

    def remap_entries(es_by_block):
        out: dict[int, list[Entry]] = {}
        for bi, es in es_by_block.items():
            tgt = block_map[bi]
            if tgt is None:
                continue
            lst = []
            for i, k, v in es:
                if (bi, i) in dead or (bi, k) in dead:
                    continue
                lst.append((remap[bi][i], remap[bi][k], v))
            if lst:
                out[tgt] = lst
        return out

    new_cons = []
    new_b = []
    for j, cons in enumerate(rows):
        if j in drop_rows:
            continue
        new_cons.append(remap_entries(cons))
        new_b.append(b[j])
    reduced = SDPProblem(new_dims, remap_entries(problem.c_entries), new_cons,
                         np.array(new_b))
    return reduced, (keep, block_map), [j for j in range(len(rows)) if j not in drop_rows]


def solve(problem: SDPProblem, settings: SolverSettings | None = None) -> SDPSolution:
    """Run the path-following loop; see the module docstring for the scheme.

    The barrier target mu only shrinks (by exactly gamma) once the iterate is
    centered at the current target -- equality residuals small relative to mu
    and duality gap near n*mu -- so feasibility can never be outrun.  When a
    target resists centering for ``max_inner`` Newton steps the shrink is
    forced; repeated forced shrinks end in ``numerical-failure``.
    """
    st = settings or SolverSettings()
    if not problem.dims:
        return SDPSolution(
            X=SymMatrix.zeros(()), y=np.zeros(problem.m), S=SymMatrix.zeros(()),
            status="optimal", gap=0.0, mu=0.0, primal_res=0.0, dual_res=0.0,
            iterations=0)
    try:
        reduced, inflate, kept_rows = _facial_presolve(problem)
    except PresolveInfeasible:
        empty = SymMatrix.zeros(problem.dims)
        return SDPSolution(
            X=empty, y=np.zeros(problem.m), S=SymMatrix.identity(problem.dims),
            status="infeasible", gap=0.0, mu=0.0, primal_res=math.inf,
            dual_res=0.0, iterations=0)
    if inflate is not None:
        sol = solve(reduced, st)
        keep, block_map = inflate
        X_full = SymMatrix.zeros(problem.dims)
        S_full = SymMatrix.identity(problem.dims)
        for bi, ks in enumerate(keep):
            tgt = block_map[bi]
            if tgt is None:
                continue
            for a, oa in enumerate(ks):
                for c, oc in enumerate(ks):
                    X_full.blocks[bi][oa, oc] = sol.X.blocks[tgt][a, c]
                    S_full.blocks[bi][oa, oc] = sol.S.blocks[tgt][a, c]
        y_full = np.zeros(problem.m)
        for pos, j in enumerate(kept_rows):
            y_full[j] = sol.y[pos]
        return SDPSolution(
            X=X_full, y=y_full, S=S_full, status=sol.status, gap=sol.gap,
            mu=sol.mu, primal_res=sol.primal_res, dual_res=sol.dual_res,
            iterations=sol.iterations, objective=sol.objective,
            trace_records=sol.trace_records)
    ws = _Workspace(problem)
    m = problem.m
    b = np.asarray(problem.b, dtype=float)
    if not np.all(np.isfinite(b)):
        raise ValueError("b must be finite")
    b = b / ws.row_scale  # rows are unit-normalized inside the workspace

    n_total = max(problem.total_dim, 1)
    a_scale = max([1.0] + [float(np.max(np.abs(s))) if s.size else 0.0 for s in ws.a_dense]
                  + ([float(np.max(np.abs(ws.a_diag)))] if ws.a_diag.size else []))
    c_scale = max([1.0] + [float(np.max(np.abs(c))) if c.size else 0.0 for c in ws.c_dense]
                  + ([float(np.max(np.abs(ws.c_diag)))] if ws.c_diag.size else []))
    if st.init_scale is not None:
        rho_x = float(st.init_scale)
    else:
        rho_x = 10.0 * min(max(1.0, float(np.max(np.abs(b))) / a_scale if m else 1.0), 1e3)
    rho_s = max(1.0, c_scale)
    b_den = 1.0 + np.abs(b)

    Xd = [rho_x * np.eye(problem.dims[bi]) for bi in ws.dense_idx]
    Xg = rho_x * np.ones(len(ws.diag_idx))
    Sd = [rho_s * np.eye(problem.dims[bi]) for bi in ws.dense_idx]
    Sg = rho_s * np.ones(len(ws.diag_idx))
    y = np.zeros(m)

    mu0 = (sum(float(np.sum(X * S)) for X, S in zip(Xd, Sd)) + float(Xg @ Sg)) / n_total
    mu = mu0
    records: list[IterRecord] = []
    total_newton = 0

    def gap_now() -> float:
        return sum(float(np.sum(X * S)) for X, S in zip(Xd, Sd)) + float(Xg @ Sg)

    def residuals() -> tuple[np.ndarray, list[np.ndarray], np.ndarray, float, float]:
        rp = b - ws.apply_A(Xd, Xg)
        aty_d, aty_g = ws.apply_At(y)
        rd_d = [C - S - A for C, S, A in zip(ws.c_dense, Sd, aty_d)]
        rd_g = ws.c_diag - Sg - aty_g
        prel = float(np.max(np.abs(rp) / b_den)) if m else 0.0
        drel = max([0.0] + [float(np.max(np.abs(R))) for R in rd_d if R.size]
                   + ([float(np.max(np.abs(rd_g)))] if rd_g.size else [])) / (1.0 + c_scale)
        return rp, rd_d, rd_g, prel, drel

    def centered(prel: float, drel: float, gap: float) -> bool:
        mu_rel = mu / max(1.0, mu0)
        gate = max(st.tol, 1e-3 * mu_rel)
        return (prel <= gate and drel <= gate
                and abs(gap / n_total - mu) <= 0.5 * mu + st.threshold)

    fail = None
    outer = 0
    inner = 0
    forced_shrinks = 0
    while True:
        rp, rd_d, rd_g, prel, drel = residuals()
        gap = gap_now()
        if st.trace:
            records.append(IterRecord(
                outer, inner, mu, gap, prel, drel,
                min([_min_eig(Bk) for Bk in Xd] + ([float(np.min(Xg))] if Xg.size else [math.inf])),
                min([_min_eig(Bk) for Bk in Sd] + ([float(np.min(Sg))] if Sg.size else [math.inf])),
            ))
        is_centered = centered(prel, drel, gap)
        if is_centered and mu <= st.threshold:
            break
        if is_centered or inner >= st.max_inner:
            if not is_centered:
                forced_shrinks += 1
                if forced_shrinks >= 8:
                    fail = "inner stall"
                    break
            if outer >= st.max_outer:
                break
            outer += 1
            inner = 0
            mu = st.shrink * mu
            continue

        inner += 1
        total_newton += 1
        try:
            Sinv_d = [np.linalg.inv(S) for S in Sd]
        except np.linalg.LinAlgError:
            fail = "singular S"
            break
        Sinv_g = 1.0 / Sg if Sg.size else Sg

        # Schur complement M[i,j] = tr(A_i X A_j S^-1), symmetrized
        M = np.zeros((m, m))
        for stack, X, Si in zip(ws.a_dense, Xd, Sinv_d):
            T = np.einsum("ab,jbc,cd->jad", X, stack, Si, optimize=True)
            M += stack.reshape(m, -1) @ T.reshape(m, -1).T
        if ws.a_diag.size:
            M += (ws.a_diag * (Xg * Sinv_g)) @ ws.a_diag.T
        M = 0.5 * (M + M.T)

        chol = None
        jitter = 0.0
        base = max(1e-14, 1e-14 * float(np.max(np.abs(M))) if M.size else 1e-14)
        for attempt in range(6):
            try:
                chol = np.linalg.cholesky(M + jitter * np.eye(m))
                break
            except np.linalg.LinAlgError:
                jitter = base * (10.0 ** (attempt * 2 + 2))
        if chol is None:
            fail = "singular Newton system"
            break

        def schur_solve(rhs: np.ndarray) -> np.ndarray:
            dy = np.linalg.solve(chol.T, np.linalg.solve(chol, rhs))
            for _ in range(2):  # iterative refinement against M's conditioning
                r = rhs - M @ dy
                if float(np.max(np.abs(r), initial=0.0)) <= 1e-13 * max(1.0, float(np.max(np.abs(rhs), initial=0.0))):
                    break
                dy = dy + np.linalg.solve(chol.T, np.linalg.solve(chol, r))
            return dy

        def direction(tgt_d, tgt_g):
            """HKM direction toward the complementarity target X S = T."""
            rhs = b - ws.apply_A([T_ @ Si for T_, Si in zip(tgt_d, Sinv_d)],
                                 tgt_g * Sinv_g) \
                + ws.apply_A([X @ R @ Si for X, R, Si in zip(Xd, rd_d, Sinv_d)],
                             Xg * rd_g * Sinv_g)
            dy = schur_solve(rhs)
            daty_d, daty_g = ws.apply_At(dy)
            dS_d = [R - A for R, A in zip(rd_d, daty_d)]
            dS_g = rd_g - daty_g
            dX_d = []
            for X, Si, dS, T_ in zip(Xd, Sinv_d, dS_d, tgt_d):
                V = T_ @ Si - X - X @ dS @ Si
                dX_d.append(0.5 * (V + V.T))
            dX_g = (tgt_g * Sinv_g - Xg - Xg * dS_g * Sinv_g) if Xg.size else Xg
            return dy, dS_d, dS_g, dX_d, dX_g

        mu_tgt_d = [mu * np.eye(problem.dims[bi]) for bi in ws.dense_idx]
        mu_tgt_g = mu * np.ones(len(ws.diag_idx))
        dy, dS_d, dS_g, dX_d, dX_g = direction(mu_tgt_d, mu_tgt_g)
        if st.corrector:
            # second-order correction at the same (fixed) mu target, skipped
            # while the cross term would swamp the target
            cross = max([float(np.max(np.abs(dX @ dS))) if dX.size else 0.0
                         for dX, dS in zip(dX_d, dS_d)]
                        + ([float(np.max(np.abs(dX_g * dS_g)))] if Xg.size else [0.0]))
            if cross <= 10.0 * mu:
                corr_d = [T_ - dX @ dS for T_, dX, dS in zip(mu_tgt_d, dX_d, dS_d)]
                corr_g = mu_tgt_g - dX_g * dS_g if Xg.size else mu_tgt_g
                dy, dS_d, dS_g, dX_d, dX_g = direction(corr_d, corr_g)

        ap = _max_step(Xd, dX_d, Xg, dX_g)
        ad = _max_step(Sd, dS_d, Sg, dS_g)
        ap = min(1.0, st.step_frac * ap)
        ad = min(1.0, st.step_frac * ad)
        if ap <= 1e-14 and ad <= 1e-14:
            fail = "step length collapsed"
            break
        Xd = [X + ap * D for X, D in zip(Xd, dX_d)]
        Xg = Xg + ap * dX_g
        Sd = [S + ad * D for S, D in zip(Sd, dS_d)]
        Sg = Sg + ad * dS_g
        y = y + ad * dy

        # blow-up heuristics: a primal blow-up suggests infeasibility (never a
        # proof); dual/multiplier blow-up is merely a numerical breakdown
        if max(float(np.max(np.abs(B))) if B.size else 0.0
               for B in Xd + [np.atleast_2d(Xg)]) > 1e13:
            fail = "divergence"
            break
        if (max(float(np.max(np.abs(B))) if B.size else 0.0
                for B in Sd + [np.atleast_2d(Sg)]) > 1e13
                or float(np.max(np.abs(y), initial=0.0)) > 1e13):
            fail = "dual blow-up"
            break

    rp, rd_d, rd_g, pres, dres = residuals()
    gap = gap_now()
    mu_final = gap / n_total
    if fail == "divergence":
        status = "infeasible"
    elif mu <= st.threshold and fail is None and pres <= st.tol * 10 and dres <= st.tol * 10:
        status = "optimal"
    elif pres <= 3e-6 and dres <= 3e-6:
        # a late-stage breakdown after the point became essentially feasible
        # still yields a usable (sub-optimal) iterate
        status = "feasible"
    elif fail is not None:
        status = "numerical-failure"
    else:
        status = "iteration-limit"

    dims = problem.dims
    X_full = SymMatrix.zeros(dims)
    S_full = SymMatrix.zeros(dims)
    for p, bi in enumerate(ws.dense_idx):
        X_full.blocks[bi] = Xd[p]
        S_full.blocks[bi] = Sd[p]
    for p, bi in enumerate(ws.diag_idx):
        X_full.blocks[bi] = np.array([[Xg[p]]])
        S_full.blocks[bi] = np.array([[Sg[p]]])

    return SDPSolution(
        X=X_full, y=(y / ws.row_scale), S=S_full, status=status, gap=gap, mu=mu_final,
        primal_res=pres, dual_res=dres, iterations=total_newton,
        objective=inner_product(problem.C(), X_full), trace_records=records,
    )


def trace_to_csv(records: list[IterRecord]) -> str:
    lines = ["iter,mu,gap,primal_res,dual_res"]
    for k, r in enumerate(records):
        lines.append(f"{k},{r.mu!r},{r.gap!r},{r.primal_res!r},{r.dual_res!r}")
    return "\n".join(lines) + "\n"


# ----------------------------------------------------------------------
# Sparse SDPA text format (.dat-s).  The file stores our primal data
# directly: the objective line is b, matrix 0 is -C, matrix j is A_j.
# A reader solving the file in SDPA's own convention sees the standard dual
# pairing of this problem.

def write_sdpa(problem: SDPProblem) -> str:
    out = [f"{problem.m} =mdim", f"{len(problem.dims)} =nblocks"]
    out.append(" ".join(str(d if d > 1 else -1) for d in problem.dims))
    out.append(" ".join(repr(float(v)) for v in problem.b))
    lines = []
    for bi in sorted(problem.c_entries):
        for i, j, v in sorted(problem.c_entries[bi]):
            if v != 0.0:
                lines.append(f"0 {bi + 1} {i + 1} {j + 1} {-v!r}")
    for jdx, cons in enumerate(problem.constraints):
        for bi in sorted(cons):
            for i, j, v in sorted(cons[bi]):
                if v != 0.0:
                    lines.append(f"{jdx + 1} {bi + 1} {i + 1} {j + 1} {v!r}")
    return "\n".join(out + lines) + "\n"


def read_sdpa(text: str) -> SDPProblem:
    rows: list[str] = []
    for raw in text.splitlines():
        line = raw.split("*")[0].split('"')[0].strip()
        if line:
            rows.append(line)
    if len(rows) < 4:
        raise ValueError("truncated SDPA input")
    m = int(rows[0].split()[0])
    nblocks = int(rows[1].split()[0])
    raw_dims = [int(t) for t in rows[2].replace(",", " ").split()[:nblocks]]
    b = np.array([float(t) for t in rows[3].replace(",", " ").split()[:m]])

    # expand diagonal blocks (negative sizes) into singleton blocks
    dims: list[int] = []
    remap: dict[tuple[int, int], int] = {}  # (orig block, row) -> new block
    for bi, d in enumerate(raw_dims):
        if d > 1:
            remap[(bi, -1)] = len(dims)
            dims.append(d)
        else:
            for r in range(abs(d)):
                remap[(bi, r)] = len(dims)
                dims.append(1)

    def place(store: dict[int, list[Entry]], blk: int, i: int, j: int, v: float) -> None:
        if raw_dims[blk] > 1:
            store.setdefault(remap[(blk, -1)], []).append((i, j, v))
        else:
            if i != j:
                raise ValueError("off-diagonal entry in a diagonal SDPA block")
            store.setdefault(remap[(blk, i)], []).append((0, 0, v))

    c_entries: dict[int, list[Entry]] = {}
    constraints: list[dict[int, list[Entry]]] = [dict() for _ in range(m)]
    for line in rows[4:]:
        t = line.replace(",", " ").split()
        if len(t) != 5:
            raise ValueError(f"bad SDPA entry line: {line!r}")
        mat, blk, i, j, v = int(t[0]), int(t[1]) - 1, int(t[2]) - 1, int(t[3]) - 1, float(t[4])
        i, j = min(i, j), max(i, j)
        if mat == 0:
            place(c_entries, blk, i, j, -v)
        else:
            place(constraints[mat - 1], blk, i, j, v)
    return SDPProblem(tuple(dims), c_entries, constraints, b)
