"""Matrices over K[x]: shifted weak-Popov/Popov forms and vector remainders.

Reduction is iterative (Mulders-Storjohann style simple transformations, with
full pivot divisions per step) followed by a normalization pass; this trades
the asymptotically fast algorithms for straightforward code, which only
affects precomputation cost.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from . import _kernel as K
from .errors import PreconditionError, RankDeficiencyError
from .ff import NEG_INF, FieldCtx
from .bipoly import BiPoly
from .upoly import UniPoly

Row = list[UniPoly]


class PolyMatrix:
    """Rectangular matrix of univariate polynomials over one context."""

    __slots__ = ("ctx", "rows")

    def __init__(self, ctx: FieldCtx, rows: Sequence[Sequence[UniPoly]]):
        self.ctx = ctx
        self.rows = [list(r) for r in rows]
        ncols = {len(r) for r in self.rows}
        if len(ncols) > 1:
            raise PreconditionError("ragged matrix")
        for r in self.rows:
            for e in r:
                if e.ctx != ctx:
                    raise PreconditionError("entry over a different context")

    @property
    def nrows(self) -> int:
        return len(self.rows)

    @property
    def ncols(self) -> int:
        return len(self.rows[0]) if self.rows else 0

    def copy_rows(self) -> list[Row]:
        return [list(r) for r in self.rows]

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, PolyMatrix)
            and self.ctx == other.ctx
            and self.rows == other.rows
        )

    def __repr__(self) -> str:
        return f"PolyMatrix({self.nrows}x{self.ncols})"

    def to_text(self) -> str:
        lines = [f"{self.nrows} {self.ncols}"]
        for r in self.rows:
            lines.extend(e.to_line() for e in r)
        return "\n".join(lines)

    @classmethod
    def from_text(cls, ctx: FieldCtx, text: str) -> "PolyMatrix":
        lines = [ln for ln in text.splitlines() if ln.strip()]
        nr, nc = (int(t) for t in lines[0].split())
        if len(lines) != 1 + nr * nc:
            raise PreconditionError("matrix text has the wrong number of entries")
        rows = []
        k = 1
        for _ in range(nr):
            row = []
            for _ in range(nc):
                row.append(UniPoly.from_line(ctx, lines[k]))
                k += 1
            rows.append(row)
        return cls(ctx, rows)


@dataclass(frozen=True)
class Shift:
    """Per-column non-negative degree weights."""

    weights: tuple[int, ...]

    def __post_init__(self):
        if any(w < 0 for w in self.weights):
            raise PreconditionError("shift weights must be non-negative")

    @classmethod
    def zero(cls, n: int) -> "Shift":
        return cls((0,) * n)

    @classmethod
    def hermite(cls, n: int, step: int) -> "Shift":
        """(0, step, 2*step, ...): forces the s-Popov form to be triangular."""
        return cls(tuple(i * step for i in range(n)))


@dataclass(frozen=True)
class PopovCert:
    """Pivot structure of a (shifted) Popov matrix."""

    pivot_cols: tuple[int, ...]
    row_degrees: tuple[int, ...]
    degdet: int


# ---------------------------------------------------------------------------
# phi: bivariate polynomials of bounded y-degree <-> row vectors


def phi_map(f: BiPoly, delta: int) -> Row:
    if f.deg_y >= delta:
        raise PreconditionError(f"deg_y {f.deg_y} >= delta {delta}")
    return [f.ycoeff(j) for j in range(delta)]


def phi_inv(v: Sequence[UniPoly]) -> BiPoly:
    if not v:
        raise PreconditionError("empty row vector")
    return BiPoly(v[0].ctx, list(v))


# ---------------------------------------------------------------------------
# weak Popov reduction


def _pivot(row: Row, shift: Shift) -> tuple[int | None, int]:
    """(rightmost column attaining the max shifted degree, that degree)."""
    best = None
    bestdeg = -1
    for j, e in enumerate(row):
        if e.is_zero:
            continue
        d = int(e.deg) + shift.weights[j]
        if best is None or d >= bestdeg:
            best = j
            bestdeg = d
    return best, bestdeg


def _weak_popov(
    ctx: FieldCtx, rows: list[Row], shift: Shift, drop_zero_rows: bool
) -> tuple[list[Row], list[int]]:
    """In-place MS reduction until all pivot columns are distinct.

    Returns the reduced rows and their pivot columns.  A row vanishing during
    reduction is dropped when ``drop_zero_rows`` (generating-set reduction),
    otherwise it is a rank deficiency.
    """
    pivots: list[int | None] = []
    alive: list[Row] = []
    for r in rows:
        pv, _ = _pivot(r, shift)
        if pv is None:
            if not drop_zero_rows:
                raise RankDeficiencyError("zero row in matrix")
            continue
        alive.append(r)
        pivots.append(pv)
    while True:
        bycol: dict[int, int] = {}
        clash = None
        for i, pv in enumerate(pivots):
            if pv in bycol:
                clash = (bycol[pv], i)
                break
            bycol[pv] = i
        if clash is None:
            break
        i1, i2 = clash
        col = pivots[i1]
        d1 = int(alive[i1][col].deg)
        d2 = int(alive[i2][col].deg)
        # reduce the row with the larger pivot-entry degree (ties: larger index)
        hi, lo = (i1, i2) if (d1, i1) > (d2, i2) else (i2, i1)
        q, _ = alive[hi][col].divrem(alive[lo][col])
        alive[hi] = [a - q * b for a, b in zip(alive[hi], alive[lo])]
        pv, _ = _pivot(alive[hi], shift)
        if pv is None:
            if not drop_zero_rows:
                raise RankDeficiencyError("matrix is singular")
            del alive[hi]
            del pivots[hi]
        else:
            pivots[hi] = pv
    return alive, [p for p in pivots]


def _normalize_popov(ctx: FieldCtx, rows: list[Row], pivots: list[int], shift: Shift) -> tuple[list[Row], list[int]]:
    """Weak Popov -> (shifted) Popov: monic pivots, dominant pivot columns, sorted rows."""
    n = len(rows)
    piv_deg = {pivots[i]: int(rows[i][pivots[i]].deg) for i in range(n)}
    piv_row = {pivots[i]: i for i in range(n)}
    for i in range(n):
        lead = rows[i][pivots[i]].lc
        if lead != ctx.one():
            inv = lead.inverse()
            rows[i] = [e.scale(inv) for e in rows[i]]
    for i in range(n):
        # reduce entries of row i sitting in other rows' pivot columns;
        # always pick the violation with the largest shifted degree,
        # rightmost first, which strictly decreases and terminates
        while True:
            best = None
            bestkey = None
            for col, m in piv_row.items():
                if m == i:
                    continue
                e = rows[i][col]
                if e.is_zero or int(e.deg) < piv_deg[col]:
                    continue
                key = (int(e.deg) + shift.weights[col], col)
                if best is None or key > bestkey:
                    best = col
                    bestkey = key
            if best is None:
                break
            m = piv_row[best]
            q, _ = rows[i][best].divrem(rows[m][best])
            rows[i] = [a - q * b for a, b in zip(rows[i], rows[m])]
    order = sorted(range(n), key=lambda i: pivots[i])
    return [rows[i] for i in order], [pivots[i] for i in order]


def popov_form(B: PolyMatrix, s: Shift | None = None) -> tuple[PolyMatrix, PopovCert]:
    """The unique s-shifted Popov basis of the row space of a nonsingular B.

    With the Hermite shift (0, step, 2*step, ...) and a large enough step the
    output is the lower-triangular Hermite basis.  Raises on singular input.
    """
    if B.nrows != B.ncols:
        raise PreconditionError("popov_form expects a square matrix")
    if s is None:
        s = Shift.zero(B.ncols)
    if len(s.weights) != B.ncols:
        raise PreconditionError("shift length does not match column count")
    rows, pivots = _weak_popov(B.ctx, B.copy_rows(), s, drop_zero_rows=False)
    rows, pivots = _normalize_popov(B.ctx, rows, pivots, s)
    degs = tuple(int(rows[i][pivots[i]].deg) for i in range(len(rows)))
    cert = PopovCert(tuple(pivots), degs, sum(degs))
    return PolyMatrix(B.ctx, rows), cert


def reduce_generating_set(ctx: FieldCtx, rows: list[Row], s: Shift | None = None) -> tuple[list[Row], list[int]]:
    """Weak-Popov reduction of a (possibly redundant) generating set.

    Dependent rows reduce to zero and are dropped; the survivors form a
    row-reduced basis of the generated module.
    """
    if not rows:
        return [], []
    if s is None:
        s = Shift.zero(len(rows[0]))
    reduced, pivots = _weak_popov(ctx, [list(r) for r in rows], s, drop_zero_rows=True)
    return reduced, pivots


def popov_from_generators(ctx: FieldCtx, rows: list[Row]) -> tuple[PolyMatrix, PopovCert] | None:
    """Popov basis of the module generated by ``rows`` (redundancy allowed).

    Returns None when the surviving rows do not form a square basis with a
    full pivot permutation; callers decide whether that is an error.
    """
    reduced, pivots = reduce_generating_set(ctx, rows)
    if not reduced:
        return None
    ncols = len(reduced[0])
    if len(reduced) != ncols or sorted(pivots) != list(range(ncols)):
        return None
    shift = Shift.zero(ncols)
    normed, pivots = _normalize_popov(ctx, reduced, pivots, shift)
    degs = tuple(int(normed[i][pivots[i]].deg) for i in range(len(normed)))
    cert = PopovCert(tuple(pivots), degs, sum(degs))
    return PolyMatrix(ctx, normed), cert


def is_popov(P: PolyMatrix) -> bool:
    """Unshifted Popov predicate: monic dominant diagonal pivots."""
    n = P.nrows
    if n != P.ncols:
        return False
    for i in range(n):
        e = P.rows[i][i]
        if e.is_zero or e.lc != P.ctx.one():
            return False
        pv, _ = _pivot(P.rows[i], Shift.zero(n))
        if pv != i:
            return False
        for j in range(n):
            if j != i and P.rows[j][i].deg >= e.deg:
                return False
    return True


def rem_popov(v: Sequence[UniPoly], P: PolyMatrix) -> Row:
    """The unique u in v + rowspace(P) with cdeg(u) < cdeg(P) entrywise.

    P must be in unshifted Popov form.  Works top slice by top slice: with
    monic pivots strictly dominating their columns, subtracting
    sum_j lc(u_j) * x^E * row_j cancels the entire degree-(d_j + E) layer at
    once, so the common excess E drops every round.  Oversized inputs
    (beyond the cdeg precondition) are handled by the same loop.
    """
    if not is_popov(P):
        raise PreconditionError("matrix is not in Popov form")
    if len(v) != P.ncols:
        raise PreconditionError("vector length does not match matrix")
    ctx = P.ctx
    m = P.ncols
    piv = [int(P.rows[j][j].deg) for j in range(m)]
    if K.dtype_for(ctx) is np.int64:
        return _rem_popov_int64(ctx, v, P, piv)
    u = list(v)
    while True:
        excess = max(
            (int(u[j].deg) - piv[j] for j in range(m) if not u[j].is_zero),
            default=-1,
        )
        if excess < 0:
            return u
        z = []
        for j in range(m):
            if not u[j].is_zero and int(u[j].deg) - piv[j] == excess:
                z.append(u[j].coeff(int(u[j].deg)))
            else:
                z.append(ctx.zero())
        for k in range(m):
            acc = UniPoly.zero(ctx)
            for j in range(m):
                if not z[j].is_zero:
                    acc = acc + P.rows[j][k].scale(z[j])
            if not acc.is_zero:
                u[k] = u[k] - acc.shift(excess)


def _rem_popov_int64(ctx: FieldCtx, v: Sequence[UniPoly], P: PolyMatrix, piv: list[int]) -> Row:
    """Vectorized slice elimination on padded coefficient blocks."""
    p = ctx.p
    m = P.ncols
    ext = ctx.ext is not None
    plen = max(max(len(e._c) for e in row) for row in P.rows)
    e0 = max(
        (len(x._c) - 1 - piv[j] for j, x in enumerate(v) if not x.is_zero),
        default=-1,
    )
    # the largest write index is E0 + plen - 1; E only decreases afterwards
    ulen = max(
        max((len(x._c) for x in v), default=1),
        max(e0, 0) + plen,
        max(piv) + 1,
    )
    if ext:
        pm = np.zeros((m, m, plen, 2), dtype=np.int64)
        u = np.zeros((m, ulen, 2), dtype=np.int64)
    else:
        pm = np.zeros((m, m, plen), dtype=np.int64)
        u = np.zeros((m, ulen), dtype=np.int64)
    for j in range(m):
        for k in range(m):
            e = P.rows[j][k]._c
            pm[j, k, : len(e)] = e
    for j, x in enumerate(v):
        u[j, : len(x._c)] = x._c
    pivarr = np.array(piv)

    def row_degs():
        if ext:
            nz = (u[:, :, 0] != 0) | (u[:, :, 1] != 0)
        else:
            nz = u != 0
        has = nz.any(axis=1)
        degs = np.where(has, ulen - 1 - np.argmax(nz[:, ::-1], axis=1), -(10**9))
        return degs

    while True:
        degs = row_degs()
        exc = degs - pivarr
        E = int(exc.max())
        if E < 0:
            break
        sel = exc == E
        idx = np.nonzero(sel)[0]
        if ext:
            z0 = np.zeros(m, dtype=np.int64)
            z1 = np.zeros(m, dtype=np.int64)
            for j in idx:
                z0[j] = u[j, degs[j], 0]
                z1[j] = u[j, degs[j], 1]
            c = ctx.ext
            t0 = (z0[:, None, None] * pm[:, :, :, 0] + c * (z1[:, None, None] * pm[:, :, :, 1] % p)) % p
            t1 = (z0[:, None, None] * pm[:, :, :, 1] + z1[:, None, None] * pm[:, :, :, 0] % p) % p
            acc0 = t0.sum(axis=0) % p
            acc1 = t1.sum(axis=0) % p
            u[:, E : E + plen, 0] = (u[:, E : E + plen, 0] - acc0) % p
            u[:, E : E + plen, 1] = (u[:, E : E + plen, 1] - acc1) % p
        else:
            z = np.zeros(m, dtype=np.int64)
            for j in idx:
                z[j] = u[j, degs[j]]
            acc = (z[:, None, None] * pm % p).sum(axis=0) % p
            u[:, E : E + plen] = (u[:, E : E + plen] - acc) % p
    return [UniPoly(ctx, u[k].copy()) for k in range(m)]


def degdet_check(B: PolyMatrix) -> int | float:
    """Degree of det(B) via weak-Popov pivot degrees; -inf when singular."""
    if B.nrows != B.ncols:
        raise PreconditionError("degdet of a non-square matrix")
    try:
        rows, pivots = _weak_popov(B.ctx, B.copy_rows(), Shift.zero(B.ncols), drop_zero_rows=False)
    except RankDeficiencyError:
        return NEG_INF
    if len(rows) < B.nrows:
        return NEG_INF
    return sum(int(rows[i][pivots[i]].deg) for i in range(len(rows)))
