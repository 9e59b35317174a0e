"""The two ideal families the reshaping machinery works against.

Vanishing ideals of point sets come with their reduced lex (x < y) Groebner
basis and the module bases of bounded y-degree slices; <M, y-A> ideals come
with the explicit triangular slice bases.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from typing import Iterable, Sequence

from .bipoly import BiPoly, bi_eval
from .errors import DistinctnessError, PreconditionError
from .ff import FieldCtx, FieldElement, parse_element
from .polymat import PolyMatrix, Shift, phi_inv, phi_map, popov_form
from .upoly import SubproductTree, UniPoly, uni_interp


class PointSet:
    """Pairwise-distinct points in the affine plane over one context."""

    __slots__ = ("ctx", "points")

    def __init__(self, ctx: FieldCtx, points: Iterable[tuple[FieldElement, FieldElement]]):
        self.ctx = ctx
        self.points = list(points)
        seen = set()
        for a, b in self.points:
            if a.ctx != ctx or b.ctx != ctx:
                raise PreconditionError("point coordinate over a different context")
            key = (a.a0, a.a1, b.a0, b.a1)
            if key in seen:
                raise DistinctnessError(f"duplicate point ({a}, {b})")
            seen.add(key)

    def __len__(self) -> int:
        return len(self.points)

    def __iter__(self):
        return iter(self.points)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, PointSet)
            and self.ctx == other.ctx
            and self.points == other.points
        )

    def transpose(self) -> "PointSet":
        return PointSet(self.ctx, [(b, a) for a, b in self.points])

    def to_text(self) -> str:
        return "\n".join(f"{a} {b}" for a, b in self.points)

    @classmethod
    def from_text(cls, ctx: FieldCtx, text: str) -> "PointSet":
        pts = []
        for ln in text.splitlines():
            ln = ln.strip()
            if not ln:
                continue
            ta, tb = ln.split()
            pts.append((parse_element(ctx, ta), parse_element(ctx, tb)))
        return cls(ctx, pts)


def x_valency(P: PointSet) -> int:
    """Largest number of points sharing one x-coordinate (0 for empty sets)."""
    if not P.points:
        return 0
    return max(Counter((a.a0, a.a1) for a, _ in P).values())


def y_valency(P: PointSet) -> int:
    """Symmetric counterpart of x_valency, over the y-coordinates."""
    if not P.points:
        return 0
    return max(Counter((b.a0, b.a1) for _, b in P).values())


@dataclass(frozen=True)
class LexGB:
    """Lex (x < y) Groebner basis, sorted by increasing y-degree."""

    elements: tuple[BiPoly, ...]
    minimal: bool = True
    reduced: bool = True

    def __iter__(self):
        return iter(self.elements)

    def __len__(self) -> int:
        return len(self.elements)

    @property
    def ctx(self) -> FieldCtx:
        return self.elements[0].ctx

    def y_degrees(self) -> list[int]:
        return [int(g.deg_y) for g in self.elements]

    def to_text(self) -> str:
        lines = [str(len(self.elements))]
        lines.extend(g.to_block() for g in self.elements)
        return "\n".join(lines)

    @classmethod
    def from_text(cls, ctx: FieldCtx, text: str) -> "LexGB":
        lines = [ln for ln in text.splitlines() if ln.strip()]
        count = int(lines[0])
        out = []
        pos = 1
        for _ in range(count):
            g, pos = BiPoly.from_lines(ctx, lines, pos)
            out.append(g)
        return cls(tuple(out))


def is_reduced_gb(G: LexGB) -> bool:
    """No term of any element is divisible by another element's leading term."""
    lts = [g.lex_lt() for g in G]
    for gi, g in enumerate(G):
        for j, c in enumerate(g.ycoeffs):
            for k, (dy, dx) in enumerate(lts):
                if k == gi:
                    continue
                if dy <= j and not c.is_zero and dx <= c.deg:
                    return False
    return True


# ---------------------------------------------------------------------------
# Vanishing ideals


def _incremental_gamma_rows(
    ctx: FieldCtx, points: Sequence[tuple[FieldElement, FieldElement]], m: int, step: int
) -> list[list[UniPoly]]:
    """Basis rows of the module of y-degree-<m vanishing vectors.

    Koetter-style insertion on raw coefficient pairs: per point, evaluate all
    rows, eliminate the nonzero ones against the row of minimal shifted
    degree, and multiply that row by (x - alpha).
    """
    p = ctx.p
    # row i, entry j: list of (a0, a1) coefficient pairs, low degree first
    rows: list[list[list[tuple[int, int]]]] = [
        [[(1, 0)] if j == i else [] for j in range(m)] for i in range(m)
    ]
    shifts = [j * step for j in range(m)]

    def rdeg(row) -> int:
        return max(
            (len(e) - 1 + shifts[j] for j, e in enumerate(row) if e),
            default=-1,
        )

    for a, b in points:
        ra = (a.a0, a.a1)
        rb = (b.a0, b.a1)
        evals = []
        for row in rows:
            acc = (0, 0)
            pw = (1, 0)
            for j, e in enumerate(row):
                if e:
                    # Horner over the entry, then fold with b^j
                    h = (0, 0)
                    for c in reversed(e):
                        h = ctx.raw_mul(h, ra)
                        h = ((h[0] + c[0]) % p, (h[1] + c[1]) % p)
                    t = ctx.raw_mul(h, pw)
                    acc = ((acc[0] + t[0]) % p, (acc[1] + t[1]) % p)
                pw = ctx.raw_mul(pw, rb)
            evals.append(acc)
        nz = [i for i, ev in enumerate(evals) if ev != (0, 0)]
        if not nz:
            continue
        pivot = min(nz, key=lambda i: (rdeg(rows[i]), i))
        inv = ctx.raw_inv(evals[pivot])
        prow = rows[pivot]
        for i in nz:
            if i == pivot:
                continue
            c = ctx.raw_mul(evals[i], inv)
            cneg = ((p - c[0]) % p, (p - c[1]) % p)
            row = rows[i]
            for j in range(m):
                src = prow[j]
                if not src:
                    continue
                dst = row[j]
                if len(dst) < len(src):
                    dst.extend([(0, 0)] * (len(src) - len(dst)))
                for t, cc in enumerate(src):
                    d = ctx.raw_mul(cneg, cc)
                    dst[t] = ((dst[t][0] + d[0]) % p, (dst[t][1] + d[1]) % p)
                while dst and dst[-1] == (0, 0):
                    dst.pop()
        # pivot row *= (x - a)
        na = ((p - ra[0]) % p, (p - ra[1]) % p)
        for j in range(m):
            e = prow[j]
            if not e:
                continue
            out = [(0, 0)] * (len(e) + 1)
            for t, cc in enumerate(e):
                d = ctx.raw_mul(na, cc)
                out[t] = ((out[t][0] + d[0]) % p, (out[t][1] + d[1]) % p)
                out[t + 1] = ((out[t + 1][0] + cc[0]) % p, (out[t + 1][1] + cc[1]) % p)
            while out and out[-1] == (0, 0):
                out.pop()
            prow[j] = out
    return [[UniPoly(ctx, e) for e in row] for row in rows]


def vanishing_gb(P: PointSet) -> LexGB:
    """Reduced lex Groebner basis of the ideal of polynomials vanishing on P.

    Distinct x-coordinates admit the two-element basis {prod(x - a_i), y - u}
    with u the interpolant through the points; the general case builds the
    y-degree-bounded module incrementally and normalizes it with the Hermite
    shift.  Both paths return the same (unique) reduced basis.
    """
    if not P.points:
        raise PreconditionError("vanishing ideal of an empty point set")
    ctx = P.ctx
    n = len(P.points)
    nu = x_valency(P)
    if nu == 1:
        tree = SubproductTree(ctx, [a for a, _ in P])
        u = uni_interp(P.points, tree=tree)
        m_poly = tree.root
        if u.is_zero:
            g1 = BiPoly.y_power(ctx, 1)
        else:
            g1 = BiPoly(ctx, [-u, UniPoly.one(ctx)])
        return LexGB((BiPoly.from_uni(m_poly), g1))
    m = nu + 1
    rows = _incremental_gamma_rows(ctx, P.points, m, n)
    H, _ = popov_form(PolyMatrix(ctx, rows), Shift.hermite(m, n))
    cand = [phi_inv(r) for r in H.rows]
    keep = []
    for g in cand:
        dy, dx = g.lex_lt()
        dominated = any(
            int(h.deg_y) < dy and h.lex_lt()[1] <= dx for h in cand if h is not g
        )
        if not dominated:
            keep.append(g)
    keep.sort(key=lambda g: int(g.deg_y))
    return LexGB(tuple(keep))


def gamma_module_basis(G: LexGB, delta: int) -> PolyMatrix:
    """delta x delta basis of the y-degree-<delta slice of the ideal of G.

    Rows are the phi images of y^j * b_i in increasing y-degree order; the
    matrix is triangular up to column permutation.
    """
    if delta <= 0:
        raise PreconditionError("delta must be positive")
    degs = G.y_degrees()
    if degs[0] != 0:
        raise PreconditionError("basis has no univariate element (d0 != 0)")
    usable = [(g, d) for g, d in zip(G.elements, degs) if d < delta]
    rows = []
    for idx, (g, d) in enumerate(usable):
        nxt = usable[idx + 1][1] if idx + 1 < len(usable) else delta
        for j in range(nxt - d):
            rows.append(phi_map(g.shift_y(j), delta))
    return PolyMatrix(G.ctx, rows)


def modcomp_basis(M: UniPoly, A: UniPoly, delta: int) -> tuple[LexGB, PolyMatrix]:
    """Reduced basis {M, y - (A rem M)} of <M, y - A> plus its slice basis.

    M is normalized monic and A reduced mod M once; the slice basis is lower
    triangular with diagonal (M, 1, ..., 1) and degdet equal to deg M.
    """
    if M.is_zero:
        raise PreconditionError("zero modulus")
    if int(M.deg) < 1:
        raise PreconditionError("modulus must have positive degree")
    if delta < 1:
        raise PreconditionError("delta must be positive")
    M = M.monic()
    A = A.rem(M)
    if A.is_zero:
        g1 = BiPoly.y_power(M.ctx, 1)
    else:
        g1 = BiPoly(M.ctx, [-A, UniPoly.one(M.ctx)])
    G = LexGB((BiPoly.from_uni(M), g1))
    return G, gamma_module_basis(G, delta)
