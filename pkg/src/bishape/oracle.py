"""Brute-force reference implementations, kept independent of the fast paths.

These share nothing with the engines beyond field-element arithmetic: naive
MPE is per-point Horner, naive modular composition is Horner in y with a
reduction after every step, and the minimal-reshaper search solves small
dense linear systems degree by degree.
"""

from __future__ import annotations

from typing import Optional

from .bipoly import BiPoly, bi_eval
from .errors import PreconditionError
from .ff import FieldElement
from .ideals import PointSet
from .upoly import UniPoly


def naive_mpe(f: BiPoly, P: PointSet) -> list[FieldElement]:
    """Per-point Horner evaluation; the definitional semantics of MPE."""
    return [bi_eval(f, a, b) for a, b in P]


def naive_modcomp(f: BiPoly, M: UniPoly, A: UniPoly) -> UniPoly:
    """f(x, A(x)) rem M(x) by Horner over the y-coefficients."""
    if M.is_zero:
        raise PreconditionError("zero modulus")
    acc = UniPoly.zero(M.ctx)
    for c in reversed(f.ycoeffs):
        acc = (acc * A + c).rem(M)
    return acc


def _solve_mod_p(p: int, rows: list[list[int]], rhs: list[int]) -> Optional[list[int]]:
    """One solution of rows*x = rhs over F_p, or None; plain Gaussian elimination."""
    m = [row[:] + [b] for row, b in zip(rows, rhs)]
    nr = len(m)
    nc = len(rows[0]) if rows else 0
    pivots = []
    r = 0
    for c in range(nc):
        piv = next((i for i in range(r, nr) if m[i][c] % p != 0), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        inv = pow(m[r][c], p - 2, p)
        m[r] = [v * inv % p for v in m[r]]
        for i in range(nr):
            if i != r and m[i][c] % p:
                fac = m[i][c]
                m[i] = [(a - fac * b) % p for a, b in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == nr:
            break
    # consistency: no zero row with nonzero rhs
    for i in range(nr):
        if all(v % p == 0 for v in m[i][:nc]) and m[i][nc] % p != 0:
            return None
    x = [0] * nc
    for i, c in enumerate(pivots):
        x[c] = m[i][nc]
    return x


def brute_min_reshaper(
    P: PointSet, eta: int, delta: int, degx_cap: int
) -> Optional[BiPoly]:
    """Minimal-x-degree ghat with y^eta - ghat vanishing on P, or None.

    Searches x-degree 0 upward, solving the dense evaluation system at each
    candidate degree.  Caps keep this strictly a small-instance oracle.
    """
    ctx = P.ctx
    if ctx.is_extension:
        raise PreconditionError("oracle only covers base-field point sets")
    if len(P) > 64 or ctx.p > 1000:
        raise PreconditionError("oracle caps exceeded")
    p = ctx.p
    rhs = [pow(b.a0, eta, p) for _, b in P]
    for deg in range(degx_cap + 1):
        cols = delta * (deg + 1)
        if cols > 10**7:
            return None
        rows = []
        for a, b in P:
            row = []
            for e in range(deg + 1):
                ae = pow(a.a0, e, p)
                for j in range(delta):
                    row.append(ae * pow(b.a0, j, p) % p)
            rows.append(row)
        sol = _solve_mod_p(p, rows, rhs)
        if sol is None:
            continue
        ycoeffs = []
        for j in range(delta):
            ycoeffs.append(UniPoly(ctx, [sol[e * delta + j] for e in range(deg + 1)]))
        ghat = BiPoly(ctx, ycoeffs)
        # certify: y^eta - ghat vanishes everywhere on P
        g = BiPoly.y_power(ctx, eta) - ghat
        assert all(bi_eval(g, a, b).is_zero for a, b in P)
        return ghat
    return None
