"""Prime fields F_p and their quadratic extensions F_p(t), t^2 = c.

A :class:`FieldCtx` fixes the modulus (and optionally a non-residue c for the
degree-2 extension); :class:`FieldElement` is a plain value type over one
context.  Contexts are immutable after construction and safe to share between
threads; elements are immutable values.

Elements print as decimal integers, extension elements as ``a0+a1*t``.
"""

from __future__ import annotations

from typing import Iterator, Optional

from .errors import ContextMismatchError, PreconditionError

#: distinguished degree of the zero polynomial, below every integer
NEG_INF = float("-inf")

_MR_WITNESSES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


def is_prime(n: int) -> bool:
    """Deterministic Miller-Rabin, valid for all 64-bit integers."""
    if n < 2:
        return False
    for q in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        if n % q == 0:
            return n == q
    d = n - 1
    r = 0
    while d % 2 == 0:
        d //= 2
        r += 1
    for a in _MR_WITNESSES:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(r - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def least_nonresidue(p: int) -> int:
    """Smallest positive quadratic non-residue mod an odd prime p."""
    c = 2
    while pow(c, (p - 1) // 2, p) == 1:
        c += 1
    return c


class FieldCtx:
    """F_p, or F_p[t]/(t^2 - c) when ``ext`` is set.

    ``ntt_order`` is the 2-adic valuation of p-1: radix-2 transforms of
    length up to 2^ntt_order are available in the base field.
    """

    __slots__ = ("p", "ext", "ntt_order", "_root2k", "_ntt_tables")

    def __init__(self, p: int, ext: Optional[int] = None):
        if p < 3 or p % 2 == 0 or p >= (1 << 63):
            raise PreconditionError(f"modulus must be an odd prime below 2^63: {p}")
        if not is_prime(p):
            raise PreconditionError(f"modulus is not prime: {p}")
        if ext is not None:
            ext = ext % p
            if ext == 0 or pow(ext, (p - 1) // 2, p) == 1:
                raise PreconditionError(f"{ext} is a quadratic residue mod {p}")
        object.__setattr__(self, "p", p)
        object.__setattr__(self, "ext", ext)
        k = 0
        m = p - 1
        while m % 2 == 0:
            m //= 2
            k += 1
        object.__setattr__(self, "ntt_order", k)
        # c^((p-1)/2^k) is a primitive 2^k-th root of unity for any non-residue c
        c = least_nonresidue(p)
        object.__setattr__(self, "_root2k", pow(c, (p - 1) >> k, p))
        object.__setattr__(self, "_ntt_tables", {})

    def __setattr__(self, name, value):
        raise AttributeError("FieldCtx is immutable")

    # -- identity ------------------------------------------------------

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, FieldCtx)
            and self.p == other.p
            and self.ext == other.ext
        )

    def __hash__(self) -> int:
        return hash((self.p, self.ext))

    def __repr__(self) -> str:
        if self.ext is None:
            return f"FieldCtx(p={self.p})"
        return f"FieldCtx(p={self.p}, ext={self.ext})"

    @property
    def is_extension(self) -> bool:
        return self.ext is not None

    def base(self) -> "FieldCtx":
        """The underlying prime field context."""
        return self if self.ext is None else FieldCtx(self.p)

    # -- element constructors ------------------------------------------

    def elem(self, a0: int, a1: int = 0) -> "FieldElement":
        if a1 % self.p != 0 and self.ext is None:
            raise PreconditionError("base-field context has no t component")
        return FieldElement(self, a0 % self.p, a1 % self.p)

    def zero(self) -> "FieldElement":
        return FieldElement(self, 0, 0)

    def one(self) -> "FieldElement":
        return FieldElement(self, 1, 0)

    def theta(self) -> "FieldElement":
        """The extension generator t (requires an extension context)."""
        if self.ext is None:
            raise PreconditionError("not an extension context")
        return FieldElement(self, 0, 1)

    def lift(self, x: "FieldElement") -> "FieldElement":
        """Embed a base-field element into this (extension) context."""
        if x.ctx.p != self.p or x.a1 != 0:
            raise ContextMismatchError("cannot lift element into this context")
        return FieldElement(self, x.a0, 0)

    # -- scalar arithmetic on raw pairs (used by polynomial kernels) ----

    def raw_mul(self, a: tuple[int, int], b: tuple[int, int]) -> tuple[int, int]:
        p = self.p
        if self.ext is None:
            return (a[0] * b[0] % p, 0)
        c = self.ext
        return (
            (a[0] * b[0] + c * (a[1] * b[1] % p)) % p,
            (a[0] * b[1] + a[1] * b[0]) % p,
        )

    def raw_inv(self, a: tuple[int, int]) -> tuple[int, int]:
        p = self.p
        if a[1] == 0:
            if a[0] == 0:
                raise ZeroDivisionError("inversion of zero field element")
            return (pow(a[0], p - 2, p), 0)
        # (a0 + a1 t)^-1 = (a0 - a1 t) / (a0^2 - c a1^2)
        nrm = (a[0] * a[0] - self.ext * (a[1] * a[1] % p)) % p
        ninv = pow(nrm, p - 2, p)
        return (a[0] * ninv % p, (p - a[1]) * ninv % p)

    def ntt_root(self, logn: int) -> int:
        """Primitive 2^logn-th root of unity in F_p."""
        if logn > self.ntt_order:
            raise PreconditionError(
                f"no 2^{logn}-th root of unity mod {self.p} (order {self.ntt_order})"
            )
        return pow(self._root2k, 1 << (self.ntt_order - logn), self.p)


def build_quadratic_extension(ctx: FieldCtx) -> FieldCtx:
    """Context for F_p(t) with t^2 = c, c the least non-residue mod p.

    The search is deterministic so serialized packs are reproducible.
    """
    if ctx.ext is not None:
        raise PreconditionError("context is already an extension")
    return FieldCtx(ctx.p, least_nonresidue(ctx.p))


class FieldElement:
    """a0 + a1*t over a fixed context (a1 = 0 in the base field)."""

    __slots__ = ("ctx", "a0", "a1")

    def __init__(self, ctx: FieldCtx, a0: int, a1: int = 0):
        self.ctx = ctx
        self.a0 = a0 % ctx.p
        self.a1 = a1 % ctx.p
        if self.a1 and ctx.ext is None:
            raise PreconditionError("base-field context has no t component")

    def _check(self, other: "FieldElement") -> None:
        if self.ctx != other.ctx:
            raise ContextMismatchError(
                f"elements of {self.ctx!r} and {other.ctx!r} cannot be combined"
            )

    def __add__(self, other: "FieldElement") -> "FieldElement":
        self._check(other)
        return FieldElement(self.ctx, self.a0 + other.a0, self.a1 + other.a1)

    def __sub__(self, other: "FieldElement") -> "FieldElement":
        self._check(other)
        return FieldElement(self.ctx, self.a0 - other.a0, self.a1 - other.a1)

    def __neg__(self) -> "FieldElement":
        return FieldElement(self.ctx, -self.a0, -self.a1)

    def __mul__(self, other: "FieldElement") -> "FieldElement":
        self._check(other)
        r = self.ctx.raw_mul((self.a0, self.a1), (other.a0, other.a1))
        return FieldElement(self.ctx, r[0], r[1])

    def __truediv__(self, other: "FieldElement") -> "FieldElement":
        self._check(other)
        return self * other.inverse()

    def inverse(self) -> "FieldElement":
        r = self.ctx.raw_inv((self.a0, self.a1))
        return FieldElement(self.ctx, r[0], r[1])

    def __pow__(self, e: int) -> "FieldElement":
        if e < 0:
            return self.inverse() ** (-e)
        acc = self.ctx.one()
        base = self
        while e:
            if e & 1:
                acc = acc * base
            base = base * base
            e >>= 1
        return acc

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, FieldElement)
            and self.ctx == other.ctx
            and self.a0 == other.a0
            and self.a1 == other.a1
        )

    def __hash__(self) -> int:
        return hash((self.ctx.p, self.ctx.ext, self.a0, self.a1))

    def __bool__(self) -> bool:
        return self.a0 != 0 or self.a1 != 0

    @property
    def is_zero(self) -> bool:
        return self.a0 == 0 and self.a1 == 0

    def in_base(self) -> bool:
        """True when the element lies in the base field (a1 = 0)."""
        return self.a1 == 0

    def project(self) -> "FieldElement":
        """Map a base-valued extension element back to the base context."""
        if self.a1 != 0:
            raise PreconditionError("element has a nonzero t component")
        return FieldElement(self.ctx.base(), self.a0)

    def __str__(self) -> str:
        if self.a1 == 0:
            return str(self.a0)
        return f"{self.a0}+{self.a1}*t"

    __repr__ = __str__


def parse_element(ctx: FieldCtx, token: str) -> FieldElement:
    """Inverse of str(): decimal integer or ``a0+a1*t``."""
    token = token.strip()
    if "t" in token:
        if ctx.ext is None:
            raise PreconditionError(f"extension token {token!r} in a base field")
        head, _, _ = token.partition("*t")
        a0s, _, a1s = head.rpartition("+")
        return FieldElement(ctx, int(a0s), int(a1s))
    return FieldElement(ctx, int(token))


def field_arith(x: FieldElement, y: Optional[FieldElement], op: str) -> FieldElement:
    """Named dispatch over the element operations (add/sub/mul/div/inv/neg)."""
    if op == "add":
        return x + y
    if op == "sub":
        return x - y
    if op == "mul":
        return x * y
    if op == "div":
        return x / y
    if op == "inv":
        return x.inverse()
    if op == "neg":
        return -x
    raise PreconditionError(f"unknown field operation {op!r}")


def random_elements(ctx: FieldCtx, count: int, rng) -> Iterator[FieldElement]:
    """count elements drawn uniformly from the context, using rng.randrange."""
    for _ in range(count):
        if ctx.ext is None:
            yield FieldElement(ctx, rng.randrange(ctx.p))
        else:
            yield FieldElement(ctx, rng.randrange(ctx.p), rng.randrange(ctx.p))
