"""Dense univariate polynomials with quasi-linear arithmetic.

Multiplication uses a radix-2 NTT whenever the context supports the required
transform length, and divide-and-conquer (Karatsuba) otherwise; both paths
produce identical coefficients.  Multi-point evaluation and interpolation go
through a subproduct tree above 32 points and plain Horner below.
"""

from __future__ import annotations

from typing import Iterable, Sequence

import numpy as np

from . import _kernel as K
from .errors import ContextMismatchError, DistinctnessError, PreconditionError
from .ff import NEG_INF, FieldCtx, FieldElement, parse_element

_HORNER_CUTOFF = 32
_NEWTON_CUTOFF = 64


def _raw(x: FieldElement) -> tuple[int, int]:
    return (x.a0, x.a1)


class UniPoly:
    """Polynomial over a field context, coefficient i belongs to x^i.

    Normalized: the internal vector carries no trailing zeros, so the zero
    polynomial is the empty vector and ``deg`` of zero is minus infinity.
    Instances are immutable by convention; operations return new values.
    """

    __slots__ = ("ctx", "_c")

    def __init__(self, ctx: FieldCtx, coeffs: Iterable = ()):
        self.ctx = ctx
        if isinstance(coeffs, np.ndarray):
            self._c = K.trim(coeffs)
            return
        vals = []
        for c in coeffs:
            if isinstance(c, FieldElement):
                if c.ctx != ctx:
                    raise ContextMismatchError("coefficient from a different context")
                vals.append((c.a0, c.a1))
            elif isinstance(c, tuple):
                vals.append((c[0] % ctx.p, c[1] % ctx.p))
            else:
                vals.append((int(c) % ctx.p, 0))
        arr = K.zeros(ctx, len(vals))
        for i, (a0, a1) in enumerate(vals):
            if ctx.ext is None:
                if a1:
                    raise PreconditionError("base-field context has no t component")
                arr[i] = a0
            else:
                arr[i, 0] = a0
                arr[i, 1] = a1
        self._c = K.trim(arr)

    # -- constructors ----------------------------------------------------

    @classmethod
    def zero(cls, ctx: FieldCtx) -> "UniPoly":
        return cls(ctx)

    @classmethod
    def one(cls, ctx: FieldCtx) -> "UniPoly":
        return cls(ctx, [1])

    @classmethod
    def x_power(cls, ctx: FieldCtx, k: int, coeff: int = 1) -> "UniPoly":
        arr = K.zeros(ctx, k + 1)
        if ctx.ext is None:
            arr[k] = coeff % ctx.p
        else:
            arr[k, 0] = coeff % ctx.p
        return cls(ctx, arr)

    @classmethod
    def random(cls, ctx: FieldCtx, deg: int, rng) -> "UniPoly":
        """Uniformly random polynomial of exact degree deg (deg < 0: zero)."""
        if deg < 0:
            return cls(ctx)
        arr = K.zeros(ctx, deg + 1)
        for i in range(deg + 1):
            a0 = rng.randrange(ctx.p)
            if ctx.ext is None:
                arr[i] = a0
            else:
                arr[i, 0] = a0
                arr[i, 1] = rng.randrange(ctx.p)
        # force the leading coefficient nonzero
        if ctx.ext is None:
            arr[deg] = 1 + rng.randrange(ctx.p - 1)
        else:
            arr[deg, 0] = 1 + rng.randrange(ctx.p - 1)
        return cls(ctx, arr)

    # -- basic queries -----------------------------------------------------

    @property
    def deg(self):
        return len(self._c) - 1 if len(self._c) else NEG_INF

    @property
    def is_zero(self) -> bool:
        return len(self._c) == 0

    def coeff(self, i: int) -> FieldElement:
        if i < 0 or i >= len(self._c):
            return self.ctx.zero()
        if self.ctx.ext is None:
            return FieldElement(self.ctx, int(self._c[i]))
        return FieldElement(self.ctx, int(self._c[i, 0]), int(self._c[i, 1]))

    @property
    def coeffs(self) -> list[FieldElement]:
        return [self.coeff(i) for i in range(len(self._c))]

    @property
    def lc(self) -> FieldElement:
        if self.is_zero:
            raise PreconditionError("zero polynomial has no leading coefficient")
        return self.coeff(len(self._c) - 1)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, UniPoly)
            and self.ctx == other.ctx
            and len(self._c) == len(other._c)
            and bool(np.array_equal(self._c, other._c))
        )

    def __hash__(self) -> int:
        return hash((self.ctx, self._c.tobytes() if self._c.dtype != object else tuple(self._c.ravel())))

    def __repr__(self) -> str:
        return f"UniPoly({self.to_line()})"

    def _check(self, other: "UniPoly") -> None:
        if self.ctx != other.ctx:
            raise ContextMismatchError("polynomials over different contexts")

    # -- ring operations ---------------------------------------------------

    def __add__(self, other: "UniPoly") -> "UniPoly":
        self._check(other)
        return UniPoly(self.ctx, K.addv(self.ctx.p, self._c, other._c))

    def __sub__(self, other: "UniPoly") -> "UniPoly":
        self._check(other)
        return UniPoly(self.ctx, K.subv(self.ctx.p, self._c, other._c))

    def __neg__(self) -> "UniPoly":
        return UniPoly(self.ctx, (-self._c) % self.ctx.p)

    def __mul__(self, other: "UniPoly") -> "UniPoly":
        self._check(other)
        return UniPoly(self.ctx, K.conv(self.ctx, self._c, other._c))

    def scale(self, s: FieldElement) -> "UniPoly":
        if s.is_zero:
            return UniPoly(self.ctx)
        return UniPoly(self.ctx, K.scale(self.ctx, self._c, _raw(s)))

    def shift(self, k: int) -> "UniPoly":
        """Multiply by x^k."""
        if self.is_zero or k == 0:
            return self if k >= 0 else UniPoly(self.ctx, self._c[-k:])
        if k < 0:
            return UniPoly(self.ctx, self._c[-k:])
        out = K.zeros(self.ctx, len(self._c) + k)
        out[k:] = self._c
        return UniPoly(self.ctx, out)

    def truncate(self, n: int) -> "UniPoly":
        """Coefficients of degree < n."""
        return UniPoly(self.ctx, self._c[:n].copy())

    def monic(self) -> "UniPoly":
        if self.is_zero:
            raise PreconditionError("cannot normalize the zero polynomial")
        return self.scale(self.lc.inverse())

    def derivative(self) -> "UniPoly":
        if len(self._c) <= 1:
            return UniPoly(self.ctx)
        idx = np.arange(1, len(self._c))
        if self.ctx.ext is None:
            return UniPoly(self.ctx, self._c[1:] * idx % self.ctx.p)
        return UniPoly(self.ctx, self._c[1:] * idx[:, None] % self.ctx.p)

    # -- evaluation --------------------------------------------------------

    def __call__(self, x: FieldElement) -> FieldElement:
        if x.ctx != self.ctx:
            raise ContextMismatchError("evaluation point from a different context")
        acc = (0, 0)
        raw = _raw(x)
        ctx = self.ctx
        for i in range(len(self._c) - 1, -1, -1):
            acc = ctx.raw_mul(acc, raw)
            if ctx.ext is None:
                acc = ((acc[0] + int(self._c[i])) % ctx.p, 0)
            else:
                acc = ((acc[0] + int(self._c[i, 0])) % ctx.p, (acc[1] + int(self._c[i, 1])) % ctx.p)
        return FieldElement(ctx, acc[0], acc[1])

    # -- division ----------------------------------------------------------

    def _inv_series(self, n: int) -> "UniPoly":
        """Inverse of self modulo x^n (constant term must be nonzero)."""
        c0 = self.coeff(0)
        inv = UniPoly(self.ctx, [c0.inverse()])
        m = 1
        while m < n:
            m = min(2 * m, n)
            t = (self.truncate(m) * inv).truncate(m)
            two_minus = UniPoly(self.ctx, [2]) - t
            inv = (inv * two_minus).truncate(m)
        return inv

    def divrem(self, g: "UniPoly") -> tuple["UniPoly", "UniPoly"]:
        """Quotient and remainder: self = q*g + r with deg r < deg g."""
        self._check(g)
        if g.is_zero:
            raise ZeroDivisionError("division by the zero polynomial")
        if self.is_zero or self.deg < g.deg:
            return UniPoly(self.ctx), self
        qlen = int(self.deg - g.deg) + 1
        if qlen > _NEWTON_CUTOFF and len(g._c) > _NEWTON_CUTOFF:
            frev = UniPoly(self.ctx, self._c[::-1].copy())
            grev = UniPoly(self.ctx, g._c[::-1].copy())
            qrev = (frev * grev._inv_series(qlen)).truncate(qlen)
            qarr = K.zeros(self.ctx, qlen)
            qarr[: len(qrev._c)] = qrev._c
            q = UniPoly(self.ctx, qarr[::-1].copy())
            r = UniPoly(self.ctx, K.subv(self.ctx.p, self._c[: len(g._c) - 1], (q * g)._c[: len(g._c) - 1]))
            return q, r
        # classical vectorized long division
        p = self.ctx.p
        r = self._c.copy()
        glen = len(g._c)
        lcinv = _raw(g.lc.inverse())
        qarr = K.zeros(self.ctx, qlen)
        gv = g._c
        for i in range(len(r) - 1, glen - 2, -1):
            if self.ctx.ext is None:
                c = int(r[i])
                if c == 0:
                    continue
                c = c * lcinv[0] % p
                qarr[i - glen + 1] = c
                r[i - glen + 1 : i + 1] = (r[i - glen + 1 : i + 1] - c * gv) % p
            else:
                c = self.ctx.raw_mul((int(r[i, 0]), int(r[i, 1])), lcinv)
                if c == (0, 0):
                    continue
                qarr[i - glen + 1] = c
                r[i - glen + 1 : i + 1] = K.subv(p, r[i - glen + 1 : i + 1], K.scale(self.ctx, gv, c))[: glen]
        return UniPoly(self.ctx, qarr), UniPoly(self.ctx, r[: glen - 1].copy())

    def rem(self, g: "UniPoly") -> "UniPoly":
        return self.divrem(g)[1]

    def pow_mod(self, e: int, modulus: "UniPoly") -> "UniPoly":
        """self^e rem modulus by square-and-multiply."""
        if e < 0:
            raise PreconditionError("negative exponent")
        acc = UniPoly.one(self.ctx)
        base = self.rem(modulus)
        while e:
            if e & 1:
                acc = (acc * base).rem(modulus)
            base = (base * base).rem(modulus)
            e >>= 1
        return acc

    # -- serialization -------------------------------------------------------

    def to_line(self) -> str:
        if self.is_zero:
            return "-1"
        return " ".join([str(int(self.deg))] + [str(c) for c in self.coeffs])

    @classmethod
    def from_line(cls, ctx: FieldCtx, line: str) -> "UniPoly":
        toks = line.split()
        if not toks:
            raise PreconditionError("empty polynomial line")
        d = int(toks[0])
        if d < 0:
            return cls(ctx)
        if len(toks) != d + 2:
            raise PreconditionError(f"expected {d + 1} coefficients, got {len(toks) - 1}")
        return cls(ctx, [parse_element(ctx, t) for t in toks[1:]])


# ---------------------------------------------------------------------------
# Spec-named free functions


def uni_mul(f: UniPoly, g: UniPoly) -> UniPoly:
    return f * g


def uni_divrem(f: UniPoly, g: UniPoly) -> tuple[UniPoly, UniPoly]:
    return f.divrem(g)


class SubproductTree:
    """Binary tree of the products prod (x - a_i) over a point list."""

    __slots__ = ("ctx", "leaves", "root", "_left", "_right")

    def __init__(self, ctx: FieldCtx, leaves: Sequence[FieldElement], _build: bool = True):
        self.ctx = ctx
        self.leaves = list(leaves)
        if not _build:
            return
        if not self.leaves:
            raise PreconditionError("subproduct tree over an empty point list")
        if len(self.leaves) == 1:
            self.root = UniPoly(ctx, [-self.leaves[0], ctx.one()])
            self._left = None
            self._right = None
        else:
            mid = len(self.leaves) // 2
            self._left = SubproductTree(ctx, self.leaves[:mid])
            self._right = SubproductTree(ctx, self.leaves[mid:])
            self.root = self._left.root * self._right.root

    def remainders(self, f: UniPoly) -> list[FieldElement]:
        """f rem (x - a_i) for every leaf, i.e. the evaluations f(a_i)."""
        r = f.rem(self.root)
        if self._left is None:
            return [r.coeff(0)]
        return self._left.remainders(r) + self._right.remainders(r)

    def interpolate(self, scaled: Sequence[FieldElement]) -> UniPoly:
        """Combine per-leaf constants c_i into sum c_i * prod_{j!=i}(x - a_j)."""
        if self._left is None:
            return UniPoly(self.ctx, [scaled[0]])
        mid = len(self._left.leaves)
        lo = self._left.interpolate(scaled[:mid])
        hi = self._right.interpolate(scaled[mid:])
        return lo * self._right.root + hi * self._left.root


def uni_mpe(f: UniPoly, pts: Sequence[FieldElement], tree: SubproductTree | None = None) -> list[FieldElement]:
    """Evaluations (f(a_1), ..., f(a_n)); points may repeat."""
    pts = list(pts)
    if not pts:
        return []
    for a in pts:
        if a.ctx != f.ctx:
            raise ContextMismatchError("evaluation point from a different context")
    if tree is None and len(pts) <= _HORNER_CUTOFF:
        return [f(a) for a in pts]
    if tree is None:
        tree = SubproductTree(f.ctx, pts)
    return tree.remainders(f)


def uni_interp(pts: Sequence[tuple[FieldElement, FieldElement]], tree: SubproductTree | None = None) -> UniPoly:
    """The unique interpolant of degree < n through n points with distinct x."""
    pts = list(pts)
    if not pts:
        raise PreconditionError("interpolation through no points")
    ctx = pts[0][0].ctx
    seen = set()
    for x, _ in pts:
        key = (x.a0, x.a1)
        if key in seen:
            raise DistinctnessError(f"repeated interpolation x-coordinate {x}")
        seen.add(key)
    if len(pts) == 1:
        return UniPoly(ctx, [pts[0][1]])
    if tree is None:
        tree = SubproductTree(ctx, [x for x, _ in pts])
    mprime = tree.root.derivative()
    weights = uni_mpe(mprime, [x for x, _ in pts], tree=tree)
    scaled = [y / w for (_, y), w in zip(pts, weights)]
    return tree.interpolate(scaled)


def taylor_shift(h: UniPoly, a: FieldElement, b: FieldElement) -> UniPoly:
    """h(a*z + b), valid in any characteristic.

    Coefficient scaling by powers of a, then a divide-and-conquer shift with
    precomputed (z + b)^(2^i) powers; no factorial denominators appear.
    """
    ctx = h.ctx
    if a.ctx != ctx or b.ctx != ctx:
        raise ContextMismatchError("shift parameters from a different context")
    if h.is_zero:
        return h
    if a.is_zero:
        return UniPoly(ctx, [h(b)])

    def scale_powers(f: UniPoly) -> UniPoly:
        # f(z) -> f(a z)
        if a == ctx.one() or f.is_zero:
            return f
        arr = f._c.copy()
        pw = ctx.one()
        for i in range(1, len(arr)):
            pw = pw * a
            if ctx.ext is None:
                arr[i] = int(arr[i]) * pw.a0 % ctx.p
            else:
                r = ctx.raw_mul((int(arr[i, 0]), int(arr[i, 1])), _raw(pw))
                arr[i, 0], arr[i, 1] = r
        return UniPoly(ctx, arr)

    if b.is_zero:
        return scale_powers(h)
    zb = UniPoly(ctx, [b, ctx.one()])
    powers = {1: zb}

    def zb_pow(m: int) -> UniPoly:
        if m not in powers:
            half = zb_pow(m // 2)
            powers[m] = half * half
        return powers[m]

    def rec(coeffs: np.ndarray) -> UniPoly:
        n = len(coeffs)
        if n == 0:
            return UniPoly(ctx)
        if n <= _HORNER_CUTOFF:
            out = UniPoly(ctx)
            for i in range(n - 1, -1, -1):
                if ctx.ext is None:
                    c = UniPoly(ctx, [int(coeffs[i])])
                else:
                    c = UniPoly(ctx, [(int(coeffs[i, 0]), int(coeffs[i, 1]))])
                out = out * zb + c
            return out
        m = 1 << (n - 1).bit_length() - 1  # largest power of two < n
        lo = rec(coeffs[:m])
        hi = rec(coeffs[m:])
        return lo + hi * zb_pow(m)

    # h(z + b) first, then z -> a z; the composition is h(a z + b)
    return scale_powers(rec(h._c))
