"""Vectorized coefficient kernels shared by the polynomial layers.

Coefficient vectors are numpy arrays: 1-D over the base field, shape (n, 2)
over a quadratic extension.  dtype is int64 when p < 2^31 (products then fit
in 64 bits), else object (exact Python integers).  All values are canonical
representatives in [0, p).
"""

from __future__ import annotations

import numpy as np

from .ff import FieldCtx

_INT64_LIMIT = 1 << 31
_SCHOOLBOOK_CUTOFF = 32


def dtype_for(ctx: FieldCtx):
    return np.int64 if ctx.p < _INT64_LIMIT else object


def zeros(ctx: FieldCtx, n: int) -> np.ndarray:
    dt = dtype_for(ctx)
    shape = (n,) if ctx.ext is None else (n, 2)
    if dt is object:
        return np.full(shape, 0, dtype=object)
    return np.zeros(shape, dtype=np.int64)


def trim(a: np.ndarray) -> np.ndarray:
    """Drop trailing zero coefficients (normalization)."""
    if a.ndim == 1:
        nz = np.flatnonzero(a)
    else:
        nz = np.flatnonzero(a.any(axis=1))
    if len(nz) == 0:
        return a[:0]
    return a[: int(nz[-1]) + 1]


# ---------------------------------------------------------------------------
# NTT over the base field (int64 contexts only)


def _ntt_tables(ctx: FieldCtx, L: int):
    tbl = ctx._ntt_tables.get(L)
    if tbl is not None:
        return tbl
    p = ctx.p
    logn = L.bit_length() - 1
    w = ctx.ntt_root(logn)
    stages = []
    istages = []
    m = 2
    while m <= L:
        wm = pow(w, L // m, p)
        tw = np.empty(m // 2, dtype=np.int64)
        t = 1
        for i in range(m // 2):
            tw[i] = t
            t = t * wm % p
        stages.append(tw)
        wmi = pow(wm, p - 2, p)
        itw = np.empty(m // 2, dtype=np.int64)
        t = 1
        for i in range(m // 2):
            itw[i] = t
            t = t * wmi % p
        istages.append(itw)
        m *= 2
    rev = np.zeros(L, dtype=np.int64)
    for i in range(1, L):
        rev[i] = (int(rev[i >> 1]) >> 1) | ((i & 1) * (L >> 1))
    tbl = (stages, istages, rev, pow(L, p - 2, p))
    ctx._ntt_tables[L] = tbl
    return tbl


def _ntt(ctx: FieldCtx, a: np.ndarray, L: int, inverse: bool) -> np.ndarray:
    p = ctx.p
    stages, istages, rev, ninv = _ntt_tables(ctx, L)
    x = np.zeros(L, dtype=np.int64)
    x[: len(a)] = a
    x = x[rev]
    use = istages if inverse else stages
    m = 2
    s = 0
    while m <= L:
        v = x.reshape(-1, m)
        h = m // 2
        t = v[:, h:] * use[s] % p
        lo = v[:, :h]
        v[:, h:] = (lo - t) % p
        v[:, :h] = (lo + t) % p
        m *= 2
        s += 1
    if inverse:
        x = x * ninv % p
    return x


def ntt_capable(ctx: FieldCtx, out_len: int) -> bool:
    if dtype_for(ctx) is not np.int64:
        return False
    if out_len <= 1:
        return False
    L = 1 << (out_len - 1).bit_length()
    return L.bit_length() - 1 <= ctx.ntt_order


# ---------------------------------------------------------------------------
# Base-field convolution


def _conv_schoolbook(p: int, a: np.ndarray, b: np.ndarray) -> np.ndarray:
    if len(a) == 0 or len(b) == 0:
        return a[:0]
    if len(a) < len(b):
        a, b = b, a
    if a.dtype == object:
        return np.convolve(a, b) % p
    out = np.zeros(len(a) + len(b) - 1, dtype=np.int64)
    # row-by-row keeps every intermediate below 2^62 + 2^31
    for i in range(len(b)):
        out[i : i + len(a)] = (out[i : i + len(a)] + int(b[i]) * a) % p
    return out


def _conv_karatsuba(p: int, a: np.ndarray, b: np.ndarray) -> np.ndarray:
    n = max(len(a), len(b))
    if min(len(a), len(b)) <= _SCHOOLBOOK_CUTOFF:
        return _conv_schoolbook(p, a, b)
    h = n // 2
    a0, a1 = a[:h], a[h:]
    b0, b1 = b[:h], b[h:]
    z0 = _conv_karatsuba(p, a0, b0) if len(a0) and len(b0) else None
    z2 = _conv_karatsuba(p, a1, b1) if len(a1) and len(b1) else None

    def padded_add(x, y):
        n = max(len(x), len(y))
        out = np.zeros(n, dtype=x.dtype if len(x) else y.dtype)
        out[: len(x)] += x
        out[: len(y)] += y
        return out % p

    sa = padded_add(a0, a1)
    sb = padded_add(b0, b1)
    z1 = _conv_karatsuba(p, sa, sb)
    out = np.zeros(len(a) + len(b) - 1, dtype=z1.dtype)
    if z0 is not None:
        out[: len(z0)] += z0
        out[h : h + len(z0)] -= z0
    if z2 is not None:
        out[2 * h : 2 * h + len(z2)] += z2
        out[h : h + len(z2)] -= z2
    out[h : h + len(z1)] += z1
    return out % p


def conv_base(ctx: FieldCtx, a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Exact product of coefficient vectors over F_p."""
    if len(a) == 0 or len(b) == 0:
        return zeros(ctx.base(), 0) if ctx.ext else a[:0]
    out_len = len(a) + len(b) - 1
    # lopsided products are cheaper row-by-row than through transforms
    if min(len(a), len(b)) > _SCHOOLBOOK_CUTOFF and ntt_capable(ctx, out_len):
        L = 1 << (out_len - 1).bit_length()
        fa = _ntt(ctx, a, L, False)
        fb = _ntt(ctx, b, L, False)
        return _ntt(ctx, fa * fb % ctx.p, L, True)[:out_len]
    return _conv_karatsuba(ctx.p, a, b)


def conv(ctx: FieldCtx, a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Product over the context (splits extension coefficients into components)."""
    if ctx.ext is None:
        return conv_base(ctx, a, b)
    if len(a) == 0 or len(b) == 0:
        return zeros(ctx, 0)
    p, c = ctx.p, ctx.ext
    a0, a1 = a[:, 0], a[:, 1]
    b0, b1 = b[:, 0], b[:, 1]
    r00 = conv_base(ctx, a0, b0)
    r11 = conv_base(ctx, a1, b1)
    r01 = conv_base(ctx, a0, b1)
    r10 = conv_base(ctx, a1, b0)
    out = zeros(ctx, len(a) + len(b) - 1)
    out[:, 0] = (r00 + c * r11) % p
    out[:, 1] = (r01 + r10) % p
    return out


# ---------------------------------------------------------------------------
# Elementwise helpers (work for both shapes)


def addv(p: int, a: np.ndarray, b: np.ndarray) -> np.ndarray:
    n = max(len(a), len(b))
    if n == 0:
        return a
    out = np.zeros((n,) + a.shape[1:], dtype=a.dtype)
    out[: len(a)] += a
    out[: len(b)] += b
    return out % p


def subv(p: int, a: np.ndarray, b: np.ndarray) -> np.ndarray:
    n = max(len(a), len(b))
    if n == 0:
        return a
    out = np.zeros((n,) + a.shape[1:], dtype=a.dtype)
    out[: len(a)] += a
    out[: len(b)] -= b
    return out % p


def scale(ctx: FieldCtx, a: np.ndarray, s: tuple[int, int]) -> np.ndarray:
    p = ctx.p
    if ctx.ext is None:
        return a * s[0] % p
    c = ctx.ext
    out = np.empty_like(a)
    out[:, 0] = (a[:, 0] * s[0] + c * (a[:, 1] * s[1] % p)) % p
    out[:, 1] = (a[:, 0] * s[1] + a[:, 1] * s[0]) % p
    return out


# ---------------------------------------------------------------------------
# Mod-p linear algebra (int64 contexts): RREF and kernel bases.
# Extension contexts use component-pair matrices (m0, m1).


_PANEL = 128
# batched float64 products stay exact while PANEL * (p-1)^2 < 2^53
_FLOAT_MATMUL_P_LIMIT = 1 << 22


def _echelon_plain(p: int, m0: np.ndarray) -> list[int]:
    """Unit-pivot row echelon (no clearing above pivots); returns pivot cols."""
    nr, nc = m0.shape
    pivots: list[int] = []
    r = 0
    for col in range(nc):
        if r == nr:
            break
        nz = np.flatnonzero(m0[r:, col])
        if len(nz) == 0:
            continue
        i = r + int(nz[0])
        if i != r:
            m0[[r, i]] = m0[[i, r]]
        inv = pow(int(m0[r, col]), p - 2, p)
        m0[r, col:] = m0[r, col:] * inv % p
        if r + 1 < nr:
            fac = m0[r + 1 :, col]
            blk = m0[r + 1 :, col:]
            blk -= fac[:, None] * m0[r, col:] % p
            blk %= p
        pivots.append(col)
        r += 1
    return pivots


def _echelon_panel(p: int, m0: np.ndarray) -> list[int]:
    """Echelon with trailing updates batched into exact float64 matmuls.

    Within a panel only the panel columns are eliminated immediately; the
    multipliers are kept and the columns right of the panel receive one
    matrix product per panel (plus one row-sized product per pivot row).
    """
    nr, nc = m0.shape
    pivots: list[int] = []
    r = 0
    cstart = 0
    while cstart < nc and r < nr:
        cend = min(cstart + _PANEL, nc)
        facs: list[np.ndarray] = []  # multiplier column per panel pivot
        prows: list[int] = []  # global pivot row indices (consecutive)
        rbuf = np.empty((_PANEL, nc - cend), dtype=np.float64)
        c2 = cstart
        while c2 < cend and r < nr:
            nz = np.flatnonzero(m0[r:, c2])
            if len(nz) == 0:
                c2 += 1
                continue
            i = r + int(nz[0])
            if i != r:
                m0[[r, i]] = m0[[i, r]]
                for rj, f in zip(prows, facs):
                    a, b = r - rj - 1, i - rj - 1
                    f[a], f[b] = f[b], f[a]
            # bring this row's trailing block up to date before normalizing
            if prows and cend < nc:
                frow = np.array(
                    [facs[jj][r - prows[jj] - 1] for jj in range(len(prows))],
                    dtype=np.float64,
                )
                if frow.any():
                    contrib = (frow @ rbuf[: len(prows)]) % p
                    m0[r, cend:] = (m0[r, cend:] - contrib.astype(np.int64)) % p
            inv = pow(int(m0[r, c2]), p - 2, p)
            m0[r, c2:] = m0[r, c2:] * inv % p
            if r + 1 < nr:
                fac = m0[r + 1 :, c2].copy()
                blk = m0[r + 1 :, c2:cend]
                blk -= fac[:, None] * m0[r, c2:cend] % p
                blk %= p
            else:
                fac = np.zeros(0, dtype=np.int64)
            if cend < nc:
                rbuf[len(prows)] = m0[r, cend:]
            facs.append(fac)
            prows.append(r)
            pivots.append(c2)
            r += 1
            c2 += 1
        if prows and cend < nc and r < nr:
            k = len(prows)
            F = np.empty((nr - r, k), dtype=np.float64)
            for jj in range(k):
                F[:, jj] = facs[jj][r - prows[jj] - 1 :]
            T = (F @ rbuf[:k]) % p
            m0[r:, cend:] = (m0[r:, cend:] - T.astype(np.int64)) % p
        cstart = cend
    return pivots


def _rref_base(p: int, m0: np.ndarray) -> tuple[list[int], np.ndarray]:
    if p < _FLOAT_MATMUL_P_LIMIT:
        pivots = _echelon_panel(p, m0)
    else:
        pivots = _echelon_plain(p, m0)
    return pivots, m0


def _rref_ext(ctx: FieldCtx, m0: np.ndarray, m1: np.ndarray):
    p, c = ctx.p, ctx.ext
    nr, nc = m0.shape
    pivots: list[int] = []

    def elim(rows_sl, rr, col):
        f0 = m0[rows_sl, col].copy()
        f1 = m1[rows_sl, col].copy()
        if not (np.any(f0) or np.any(f1)):
            return
        a0 = m0[rr, col:]
        a1 = m1[rr, col:]
        t0 = (f0[:, None] * a0 + c * (f1[:, None] * a1 % p)) % p
        t1 = (f0[:, None] * a1 + f1[:, None] * a0 % p) % p
        m0[rows_sl, col:] = (m0[rows_sl, col:] - t0) % p
        m1[rows_sl, col:] = (m1[rows_sl, col:] - t1) % p

    r = 0
    for col in range(nc):
        if r == nr:
            break
        nz = np.flatnonzero((m0[r:, col] != 0) | (m1[r:, col] != 0))
        if len(nz) == 0:
            continue
        i = r + int(nz[0])
        if i != r:
            m0[[r, i]] = m0[[i, r]]
            m1[[r, i]] = m1[[i, r]]
        inv0, inv1 = ctx.raw_inv((int(m0[r, col]), int(m1[r, col])))
        r0 = m0[r, col:].copy()
        r1 = m1[r, col:].copy()
        m0[r, col:] = (r0 * inv0 + c * (r1 * inv1 % p)) % p
        m1[r, col:] = (r0 * inv1 + r1 * inv0 % p) % p
        if r + 1 < nr:
            elim(slice(r + 1, nr), r, col)
        pivots.append(col)
        r += 1
    for rr in range(len(pivots) - 1, 0, -1):
        elim(slice(0, rr), rr, pivots[rr])
    return pivots


def rref_kernel(ctx: FieldCtx, rows: np.ndarray) -> np.ndarray | None:
    """Kernel basis of a matrix over the context, or None when unsupported.

    ``rows``: shape (r, m) base field, or (r, m, 2) extension.  Returns an
    array of kernel basis vectors (k, m[, 2]), deterministic for a fixed
    input.
    """
    if dtype_for(ctx) is not np.int64:
        return None
    p = ctx.p
    nc = rows.shape[1]
    if ctx.ext is None:
        pivots, m0 = _rref_base(p, rows.copy())
        free = [col for col in range(nc) if col not in set(pivots)]
        npiv = len(pivots)
        if not free:
            return np.zeros((0, nc), dtype=np.int64)
        # back-substitute the pivot variables over the free columns only
        x = np.zeros((npiv, len(free)), dtype=np.int64)
        ffree = m0[:npiv][:, free]
        upiv = m0[:npiv][:, pivots]
        for i in range(npiv - 1, -1, -1):
            tail = x[i + 1 :]
            if len(tail):
                contrib = (upiv[i, i + 1 :][:, None] * tail % p).sum(axis=0) % p
                x[i] = (ffree[i] - contrib) % p
            else:
                x[i] = ffree[i]
        ker = np.zeros((len(free), nc), dtype=np.int64)
        for idx, fc in enumerate(free):
            ker[idx, fc] = 1
            ker[idx, pivots] = (-x[:, idx]) % p
        return ker
    m0 = rows[:, :, 0].copy()
    m1 = rows[:, :, 1].copy()
    pivots = _rref_ext(ctx, m0, m1)
    free = [col for col in range(nc) if col not in set(pivots)]
    ker = np.zeros((len(free), nc, 2), dtype=np.int64)
    for idx, fc in enumerate(free):
        ker[idx, fc, 0] = 1
        for rr, pc in enumerate(pivots):
            ker[idx, pc, 0] = (-int(m0[rr, fc])) % p
            ker[idx, pc, 1] = (-int(m1[rr, fc])) % p
    return ker
