"""Bivariate polynomials, dense in y with univariate x-coefficients.

Multiplication packs through Kronecker substitution y -> x^(2*dx+1) so a
single univariate product suffices.  ``rem_gb`` is the multivariate division
normal form against a lex (x < y) Groebner basis whose first element is
univariate in x.
"""

from __future__ import annotations

from typing import Iterable, Sequence

import numpy as np

from . import _kernel as K
from .errors import ContextMismatchError, PreconditionError
from .ff import NEG_INF, FieldCtx, FieldElement
from .upoly import UniPoly, taylor_shift


class BiPoly:
    """sum_j ycoeffs[j](x) * y^j, normalized so the top y-coefficient is nonzero."""

    __slots__ = ("ctx", "ycoeffs")

    def __init__(self, ctx: FieldCtx, ycoeffs: Iterable[UniPoly] = ()):
        self.ctx = ctx
        cs = list(ycoeffs)
        for c in cs:
            if c.ctx != ctx:
                raise ContextMismatchError("y-coefficient over a different context")
        while cs and cs[-1].is_zero:
            cs.pop()
        self.ycoeffs = cs

    # -- constructors ------------------------------------------------------

    @classmethod
    def zero(cls, ctx: FieldCtx) -> "BiPoly":
        return cls(ctx)

    @classmethod
    def one(cls, ctx: FieldCtx) -> "BiPoly":
        return cls(ctx, [UniPoly.one(ctx)])

    @classmethod
    def from_uni(cls, f: UniPoly) -> "BiPoly":
        return cls(f.ctx, [f])

    @classmethod
    def y_power(cls, ctx: FieldCtx, k: int) -> "BiPoly":
        return cls(ctx, [UniPoly.zero(ctx)] * k + [UniPoly.one(ctx)])

    @classmethod
    def from_y_poly(cls, u: UniPoly) -> "BiPoly":
        """Interpret a univariate polynomial as a polynomial in y."""
        return cls(u.ctx, [UniPoly(u.ctx, [c]) for c in u.coeffs])

    @classmethod
    def random(cls, ctx: FieldCtx, deg_x: int, deg_y: int, rng) -> "BiPoly":
        rows = [UniPoly.random(ctx, rng.randrange(-1, deg_x + 1), rng) for _ in range(deg_y + 1)]
        rows[-1] = UniPoly.random(ctx, deg_x if deg_x >= 0 else 0, rng)
        return cls(ctx, rows)

    # -- queries -------------------------------------------------------------

    @property
    def deg_y(self):
        return len(self.ycoeffs) - 1 if self.ycoeffs else NEG_INF

    @property
    def deg_x(self):
        if not self.ycoeffs:
            return NEG_INF
        return max(c.deg for c in self.ycoeffs)

    @property
    def is_zero(self) -> bool:
        return not self.ycoeffs

    def ycoeff(self, j: int) -> UniPoly:
        if j < 0 or j >= len(self.ycoeffs):
            return UniPoly.zero(self.ctx)
        return self.ycoeffs[j]

    @property
    def lc_y(self) -> UniPoly:
        """Leading coefficient with respect to y (an element of K[x])."""
        if self.is_zero:
            raise PreconditionError("zero polynomial has no y-leading coefficient")
        return self.ycoeffs[-1]

    def lex_lt(self) -> tuple[int, int]:
        """(deg_y, deg_x-of-LC) of the lex (x < y) leading term."""
        if self.is_zero:
            raise PreconditionError("zero polynomial has no leading term")
        return (len(self.ycoeffs) - 1, int(self.lc_y.deg))

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, BiPoly)
            and self.ctx == other.ctx
            and self.ycoeffs == other.ycoeffs
        )

    def __hash__(self) -> int:
        return hash((self.ctx, tuple(self.ycoeffs)))

    def __repr__(self) -> str:
        return f"BiPoly(ydeg={self.deg_y}, xdeg={self.deg_x})"

    def _check(self, other: "BiPoly") -> None:
        if self.ctx != other.ctx:
            raise ContextMismatchError("polynomials over different contexts")

    # -- arithmetic ------------------------------------------------------------

    def __add__(self, other: "BiPoly") -> "BiPoly":
        self._check(other)
        n = max(len(self.ycoeffs), len(other.ycoeffs))
        return BiPoly(self.ctx, [self.ycoeff(j) + other.ycoeff(j) for j in range(n)])

    def __sub__(self, other: "BiPoly") -> "BiPoly":
        self._check(other)
        n = max(len(self.ycoeffs), len(other.ycoeffs))
        return BiPoly(self.ctx, [self.ycoeff(j) - other.ycoeff(j) for j in range(n)])

    def __neg__(self) -> "BiPoly":
        return BiPoly(self.ctx, [-c for c in self.ycoeffs])

    def __mul__(self, other: "BiPoly") -> "BiPoly":
        return bi_mul(self, other)

    def scale(self, s: FieldElement) -> "BiPoly":
        return BiPoly(self.ctx, [c.scale(s) for c in self.ycoeffs])

    def mul_uni(self, u: UniPoly) -> "BiPoly":
        return BiPoly(self.ctx, [c * u for c in self.ycoeffs])

    def shift_y(self, k: int) -> "BiPoly":
        """Multiply by y^k."""
        if self.is_zero or k == 0:
            return self
        return BiPoly(self.ctx, [UniPoly.zero(self.ctx)] * k + self.ycoeffs)

    def transpose(self) -> "BiPoly":
        """Swap the roles of x and y: returns f(y, x)."""
        if self.is_zero:
            return self
        dx = int(self.deg_x)
        rows = []
        for i in range(dx + 1):
            rows.append(UniPoly(self.ctx, [c.coeff(i) for c in self.ycoeffs]))
        return BiPoly(self.ctx, rows)

    def lift(self, ext_ctx: FieldCtx) -> "BiPoly":
        """Embed a base-field polynomial into an extension context."""
        out = []
        for c in self.ycoeffs:
            out.append(UniPoly(ext_ctx, [ext_ctx.lift(e) for e in c.coeffs]))
        return BiPoly(ext_ctx, out)

    def components(self) -> tuple["BiPoly", "BiPoly"]:
        """Split an extension polynomial as s0 + t*s1 with s0, s1 over the base."""
        base = self.ctx.base()
        s0, s1 = [], []
        for c in self.ycoeffs:
            s0.append(UniPoly(base, [e.a0 for e in c.coeffs]))
            s1.append(UniPoly(base, [e.a1 for e in c.coeffs]))
        return BiPoly(base, s0), BiPoly(base, s1)

    # -- serialization -----------------------------------------------------------

    def to_block(self) -> str:
        lines = [f"ydeg {len(self.ycoeffs) - 1}"]
        lines.extend(c.to_line() for c in self.ycoeffs)
        return "\n".join(lines)

    @classmethod
    def from_lines(cls, ctx: FieldCtx, lines: list[str], pos: int = 0) -> tuple["BiPoly", int]:
        head = lines[pos].split()
        if len(head) != 2 or head[0] != "ydeg":
            raise PreconditionError(f"expected 'ydeg <k>' header, got {lines[pos]!r}")
        k = int(head[1])
        pos += 1
        if k < 0:
            return cls(ctx), pos
        cs = []
        for _ in range(k + 1):
            cs.append(UniPoly.from_line(ctx, lines[pos]))
            pos += 1
        return cls(ctx, cs), pos


# ---------------------------------------------------------------------------
# Operations


def bi_mul(f: BiPoly, g: BiPoly) -> BiPoly:
    """Exact product via Kronecker substitution into one univariate product."""
    f._check(g)
    if f.is_zero or g.is_zero:
        return BiPoly.zero(f.ctx)
    ctx = f.ctx
    dx = max(int(f.deg_x), int(g.deg_x))
    w = 2 * dx + 1  # packing width: product x-degrees stay below w
    fp = _kron_pack(f, w)
    gp = _kron_pack(g, w)
    prod = fp * gp
    out_dy = len(f.ycoeffs) + len(g.ycoeffs) - 1
    rows = []
    arr = prod._c
    for j in range(out_dy):
        seg = arr[j * w : (j + 1) * w]
        rows.append(UniPoly(ctx, seg.copy()))
    return BiPoly(ctx, rows)


def _kron_pack(f: BiPoly, w: int) -> UniPoly:
    arr = K.zeros(f.ctx, w * len(f.ycoeffs))
    for j, c in enumerate(f.ycoeffs):
        if not c.is_zero:
            arr[j * w : j * w + len(c._c)] = c._c
    return UniPoly(f.ctx, arr)


def y_split(f: BiPoly, eta: int) -> tuple[BiPoly, BiPoly]:
    """(f1, f0) with f = f1*y^eta + f0 and deg_y f0 < eta; pure re-indexing."""
    if eta < 0:
        raise PreconditionError("split threshold must be non-negative")
    lo = BiPoly(f.ctx, f.ycoeffs[:eta])
    hi = BiPoly(f.ctx, f.ycoeffs[eta:])
    return hi, lo


def shear_poly(f: BiPoly, a: FieldElement, b: FieldElement) -> BiPoly:
    """f(a*x + b*y, y), built from Taylor shifts of homogeneous components.

    The result has deg_x <= deg_x f and deg_y <= deg_x f + deg_y f.  The
    re-assembly y^t * s_t(x/y) is pure coefficient placement: coefficient i of
    s_t lands on the monomial x^i y^(t-i).
    """
    if f.is_zero:
        return f
    ctx = f.ctx
    dx, dy = int(f.deg_x), int(f.deg_y)
    out_rows = [K.zeros(ctx, dx + 1) for _ in range(dx + dy + 1)]
    for t in range(dx + dy + 1):
        lo = max(0, t - dy)
        hi = min(t, dx)
        if lo > hi:
            continue
        h = K.zeros(ctx, hi + 1)
        for i in range(lo, hi + 1):
            c = f.ycoeff(t - i)
            if i < len(c._c):
                h[i] = c._c[i]
        st = taylor_shift(UniPoly(ctx, h), a, b)
        for i in range(len(st._c)):
            # z^i of s_t -> x^i y^(t-i)
            if t - i <= dx + dy:
                out_rows[t - i][i] = st._c[i]
    return BiPoly(ctx, [UniPoly(ctx, row) for row in out_rows])


def bi_eval(f: BiPoly, alpha: FieldElement, beta: FieldElement) -> FieldElement:
    """f(alpha, beta) by Horner in y over Horner-in-x coefficient values."""
    acc = f.ctx.zero()
    for c in reversed(f.ycoeffs):
        acc = acc * beta + c(alpha)
    return acc


def check_gb_shape(G: Sequence[BiPoly]) -> None:
    """Validate the basis shape rem_gb relies on.

    Sorted by strictly increasing y-degree, first element univariate in x,
    and each y-leading coefficient divides the previous one.
    """
    if not G:
        raise PreconditionError("empty basis")
    if any(g.is_zero for g in G):
        raise PreconditionError("zero element in basis")
    if int(G[0].deg_y) != 0:
        raise PreconditionError("first basis element must be univariate in x")
    degs = [int(g.deg_y) for g in G]
    if any(d2 <= d1 for d1, d2 in zip(degs, degs[1:])):
        raise PreconditionError("basis not sorted by strictly increasing y-degree")
    for g1, g2 in zip(G, G[1:]):
        if not g1.lc_y.rem(g2.lc_y).is_zero:
            raise PreconditionError("y-leading coefficients do not form a divisibility chain")


def rem_gb(f: BiPoly, G: Sequence[BiPoly]) -> BiPoly:
    """Normal form of f modulo the ideal of G (lex order, x < y).

    Reduces the leading term by the greatest applicable basis index until no
    term of the remainder is divisible by any lex leading term of G.
    """
    check_gb_shape(G)
    ctx = f.ctx
    lts = [g.lex_lt() for g in G]
    lcs = [g.lc_y for g in G]
    # mutable working copy: one coefficient list per y-degree
    work = [c for c in f.ycoeffs]

    def norm():
        while work and work[-1].is_zero:
            work.pop()

    out_rows: dict[int, UniPoly] = {}
    norm()
    while work:
        j = len(work) - 1
        cur = work[j]
        # pick the greatest index whose leading term divides x^(deg cur) y^j;
        # all candidates with d_i <= j are tried from the top down
        reduced = False
        for i in range(len(G) - 1, -1, -1):
            dy_i, dx_i = lts[i]
            if dy_i > j:
                continue
            if dx_i > cur.deg:
                continue
            # one full division: kill every reducible coefficient of level j
            # against b_i in a single pass
            q, r = cur.divrem(lcs[i])
            if q.is_zero:
                continue
            # subtract q * x^0 y^(j - dy_i) * b_i
            for t, bt in enumerate(G[i].ycoeffs):
                lvl = j - dy_i + t
                upd = work[lvl] - q * bt if lvl < len(work) else -(q * bt)
                while lvl >= len(work):
                    work.append(UniPoly.zero(ctx))
                work[lvl] = upd
            reduced = True
            break
        if not reduced:
            # the whole level-j coefficient is in normal form; set it aside
            out_rows[j] = out_rows.get(j, UniPoly.zero(ctx)) + cur
            work[j] = UniPoly.zero(ctx)
        norm()
    max_j = max(out_rows) if out_rows else -1
    rows = [out_rows.get(j, UniPoly.zero(ctx)) for j in range(max_j + 1)]
    return BiPoly(ctx, rows)
