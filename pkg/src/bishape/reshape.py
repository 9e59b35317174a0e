"""Reshaping: descent sequences, the reshape reduction, and reshaper
precomputation against a zero-dimensional ideal.

A reshaper step replaces f by f1*ghat + f0 where f = f1*y^eta + f0 and
y^eta - ghat lies in the ideal, lowering the y-degree below eta while the
x-degree grows only by deg_x ghat.  Precomputation finds each ghat with
minimal x-degree through the Popov basis of the bounded-y-degree slice of
the ideal.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass, field
from typing import Optional, Sequence, Union

import numpy as np

from . import _kernel as K
from .bipoly import BiPoly, check_gb_shape, rem_gb
from .errors import PackFormatError, PreconditionError, ReshaperFailError
from .ff import FieldCtx, FieldElement, parse_element
from .ideals import LexGB, PointSet, gamma_module_basis, modcomp_basis, vanishing_gb, x_valency
from .polymat import PolyMatrix, phi_inv, phi_map, popov_form, popov_from_generators, rem_popov
from .upoly import UniPoly

#: instances above this determinant degree skip the linear-algebra fast path
_KERNEL_PATH_CAP = 2048


@dataclass(frozen=True)
class ReshapingSequence:
    """Strictly decreasing y-degree targets with bounded descent steps.

    Every step satisfies eta[i-1] > eta[i] >= floor(2*eta[i-1]/3); the step
    budget delta_i = 2*eta[i] - eta[i-1] + 1 is then always >= 1.
    """

    eta: tuple[int, ...]

    def __post_init__(self):
        e = self.eta
        if not e:
            raise PreconditionError("empty reshaping sequence")
        if any(v <= 0 for v in e):
            raise PreconditionError("sequence entries must be positive")
        for prev, cur in zip(e, e[1:]):
            if not (prev > cur >= (2 * prev) // 3):
                raise PreconditionError(
                    f"invalid descent {prev} -> {cur} (needs {prev} > {cur} >= {(2 * prev) // 3})"
                )

    @property
    def k(self) -> int:
        return len(self.eta) - 1

    def deltas(self) -> list[int]:
        """Step budgets delta_i = 2*eta_i - eta_{i-1} + 1 for i = 1..k."""
        return [2 * self.eta[i] - self.eta[i - 1] + 1 for i in range(1, len(self.eta))]

    def min_delta(self) -> int:
        ds = self.deltas()
        return min(ds) if ds else self.eta[0] + 1

    def __str__(self) -> str:
        return " ".join(str(v) for v in self.eta)


def make_sequence(a: int, b: int, valency: int) -> ReshapingSequence:
    """Greedy (a, b)-reshaping sequence with every step budget >= valency.

    Built on endpoints shifted by v = valency - 1: greedy maximal descent
    eta'_i = max(floor(2*eta'_{i-1}/3), b - v), then the offset is added
    back.  Length stays below log_{3/2}(a) + 2.
    """
    if valency < 1:
        raise PreconditionError("valency must be at least 1")
    if not a >= b >= valency:
        raise PreconditionError(f"need a >= b >= valency, got ({a}, {b}, {valency})")
    v = valency - 1
    cur = a - v
    tgt = b - v
    seq = [cur]
    while cur > tgt:
        cur = max((2 * cur) // 3, tgt)
        seq.append(cur)
    return ReshapingSequence(tuple(x + v for x in seq))


def make_sequence_through(a: int, mid: int, b: int, valency: int) -> tuple[ReshapingSequence, int]:
    """Concatenation of (a, mid)- and (mid, b)-sequences; returns mid's index."""
    if not a >= mid >= b >= valency:
        raise PreconditionError(f"need a >= mid >= b >= valency, got ({a}, {mid}, {b}, {valency})")
    first = make_sequence(a, mid, valency)
    second = make_sequence(mid, b, valency)
    joined = first.eta + second.eta[1:]
    return ReshapingSequence(joined), first.k


@dataclass(frozen=True)
class Reshaper:
    """Ideal members g_i = y^eta_i - ghat_i matched to a descent sequence."""

    seq: ReshapingSequence
    g: tuple[BiPoly, ...]

    def __post_init__(self):
        if len(self.g) != self.seq.k:
            raise PreconditionError("one reshaper polynomial per descent step required")
        for i, gi in enumerate(self.g, start=1):
            eta_i = self.seq.eta[i]
            if int(gi.deg_y) != eta_i or gi.lc_y != UniPoly.one(gi.ctx):
                raise PreconditionError(f"step {i}: expected a y-monic head y^{eta_i}")
            tail = tail_of(gi)
            bound = 2 * self.seq.eta[i] - self.seq.eta[i - 1]
            if tail.deg_y > bound:
                raise PreconditionError(
                    f"step {i}: tail y-degree {tail.deg_y} exceeds budget {bound}"
                )

    def __iter__(self):
        return iter(self.g)


def tail_of(g: BiPoly) -> BiPoly:
    """ghat with g = y^deg_y(g) - ghat."""
    head = BiPoly.y_power(g.ctx, int(g.deg_y))
    return head - g


@dataclass(frozen=True)
class BalanceReport:
    """Per-step x-degrees versus the generic budget floor(n/delta_i) + 1."""

    n: int
    eta: tuple[int, ...]
    actual: tuple[int, ...]
    bound: tuple[int, ...]

    @property
    def balanced(self) -> bool:
        return all(a <= b for a, b in zip(self.actual, self.bound))

    @property
    def slack(self) -> tuple[int, ...]:
        return tuple(b - a for a, b in zip(self.actual, self.bound))

    def lines(self) -> list[str]:
        out = [f"balanced: {'true' if self.balanced else 'false'}"]
        for i, (a, b) in enumerate(zip(self.actual, self.bound), start=1):
            out.append(f"step {i}: eta {self.eta[i]} deg_x {a} bound {b} slack {b - a}")
        agg, cap = lemma_budget(self)
        out.append(f"aggregate sum(eta_i*deg_x g_i) = {agg} (lemma bound {cap})")
        return out


def lemma_budget(report: BalanceReport) -> tuple[int, int]:
    """Aggregate sum(eta_i * deg_x g_i) and its (3n + eta_1)k ceiling."""
    k = len(report.actual)
    agg = sum(report.eta[i + 1] * report.actual[i] for i in range(k))
    cap = (3 * report.n + (report.eta[1] if k else 0)) * k
    return agg, cap


def check_balanced(report: BalanceReport) -> tuple[bool, int, int]:
    """Definition-level verdict plus the aggregate budget for reporting."""
    agg, cap = lemma_budget(report)
    return report.balanced, agg, cap


# ---------------------------------------------------------------------------
# Reshape (the online reduction)


def reshape(f: BiPoly, seq: ReshapingSequence, g: Sequence[BiPoly]) -> BiPoly:
    """The unique-coset descent: returns fhat in f + I with deg_y < eta_k.

    Steps whose target exceeds the current y-degree are skipped without
    arithmetic.  Output degree contracts are asserted on every run.
    """
    if len(g) != seq.k:
        raise PreconditionError("sequence/reshaper length mismatch")
    if f.deg_y >= seq.eta[0]:
        raise PreconditionError(f"deg_y f = {f.deg_y} must be below eta_0 = {seq.eta[0]}")
    fhat = f
    for i in range(1, seq.k + 1):
        eta_i = seq.eta[i]
        if eta_i > fhat.deg_y:
            continue
        gi = g[i - 1]
        from .bipoly import y_split  # local import keeps module load order simple

        f1, f0 = y_split(fhat, eta_i)
        fhat = f1 * tail_of(gi) + f0
    assert fhat.deg_y < seq.eta[-1], "reshape output y-degree contract violated"
    if not f.is_zero:
        x_cap = int(f.deg_x) + sum(max(int(gi.deg_x), 0) for gi in g)
        assert fhat.is_zero or int(fhat.deg_x) <= x_cap, "reshape output x-degree contract violated"
    return fhat


# ---------------------------------------------------------------------------
# Reshaper precomputation (ComputeReshaper)

Accel = Union[None, tuple[str, object]]


def _y_power_rem(G: LexGB, eta: int) -> BiPoly:
    """y^eta rem G; for two-element bases {M, y - A} this is A^eta rem M."""
    els = G.elements
    if (
        len(els) == 2
        and int(els[1].deg_y) == 1
        and els[1].lc_y == UniPoly.one(G.ctx)
    ):
        M = els[0].ycoeff(0)
        A = -els[1].ycoeff(0)
        return BiPoly.from_uni(A.pow_mod(eta, M))
    return rem_gb(BiPoly.y_power(G.ctx, eta), list(els))


def _expected_slice_degdet(G: LexGB, delta: int) -> int:
    degs = G.y_degrees()
    usable = [(g, d) for g, d in zip(G.elements, degs) if d < delta]
    total = 0
    for idx, (g, d) in enumerate(usable):
        nxt = usable[idx + 1][1] if idx + 1 < len(usable) else delta
        total += (nxt - d) * int(g.lc_y.deg)
    return total


def _points_constraint_matrix(ctx: FieldCtx, pts, s: int, delta: int) -> np.ndarray:
    n = len(pts)
    if ctx.ext is None:
        rows = np.empty((n, s * delta), dtype=np.int64)
        p = ctx.p
        for i, (a, b) in enumerate(pts):
            ap = np.empty(s, dtype=np.int64)
            bp = np.empty(delta, dtype=np.int64)
            v = 1
            for e in range(s):
                ap[e] = v
                v = v * a.a0 % p
            v = 1
            for j in range(delta):
                bp[j] = v
                v = v * b.a0 % p
            rows[i] = (ap[:, None] * bp[None, :] % p).ravel()
        return rows
    p, c = ctx.p, ctx.ext
    rows = np.empty((n, s * delta, 2), dtype=np.int64)
    for i, (a, b) in enumerate(pts):
        ap = np.empty((s, 2), dtype=np.int64)
        bp = np.empty((delta, 2), dtype=np.int64)
        v = (1, 0)
        for e in range(s):
            ap[e] = v
            v = ctx.raw_mul(v, (a.a0, a.a1))
        v = (1, 0)
        for j in range(delta):
            bp[j] = v
            v = ctx.raw_mul(v, (b.a0, b.a1))
        out0 = (ap[:, 0][:, None] * bp[:, 0][None, :] + c * (ap[:, 1][:, None] * bp[:, 1][None, :] % p)) % p
        out1 = (ap[:, 0][:, None] * bp[:, 1][None, :] + ap[:, 1][:, None] * bp[:, 0][None, :] % p) % p
        rows[i, :, 0] = out0.ravel()
        rows[i, :, 1] = out1.ravel()
    return rows


def _modcomp_constraint_matrix(ctx: FieldCtx, M: UniPoly, A: UniPoly, s: int, delta: int) -> np.ndarray:
    n = int(M.deg)
    p = ctx.p
    mvec = np.zeros(n + 1, dtype=np.int64)
    mvec[: len(M._c)] = M._c
    cols = np.empty((s * delta, n), dtype=np.int64)
    power = UniPoly.one(ctx)
    for j in range(delta):
        w = np.zeros(n, dtype=np.int64)
        w[: len(power._c)] = power._c
        cur = w
        for e in range(s):
            cols[e * delta + j] = cur
            nxt = np.zeros(n, dtype=np.int64)
            nxt[1:] = cur[:-1]
            top = int(cur[n - 1])
            if top:
                nxt = (nxt - top * mvec[:n]) % p
            cur = nxt
        power = (power * A).rem(M)
    return cols.T.copy()


def _kernel_to_rows(ctx: FieldCtx, ker: np.ndarray, s: int, delta: int) -> list[list[UniPoly]]:
    rows = []
    for v in ker:
        entries = []
        for j in range(delta):
            if ctx.ext is None:
                entries.append(UniPoly(ctx, v[j::delta].copy()))
            else:
                entries.append(UniPoly(ctx, v[j::delta, :].copy()))
        rows.append(entries)
    return rows


def _popov_of_slice(G: LexGB, delta: int, accel: Accel) -> PolyMatrix:
    """Popov basis of the y-degree-<delta slice of the ideal of G.

    When the slice is an evaluation kernel (point sets, <M, y-A>) and small
    enough, a bounded-degree kernel basis is extracted by linear algebra and
    certified by its determinant degree; the certificate failing (non-generic
    instances) falls back to the iterative reduction of the triangular slice
    basis.  Both paths return the same unique Popov basis.
    """
    ctx = G.ctx
    target = _expected_slice_degdet(G, delta)
    if accel is not None and K.dtype_for(ctx) is np.int64 and 0 < target <= _KERNEL_PATH_CAP:
        d, t = divmod(target, delta)
        s = d + 1 + (1 if t else 0)
        kind, payload = accel
        if kind == "points":
            mat = _points_constraint_matrix(ctx, list(payload), s, delta)
        else:
            M, A = payload
            mat = _modcomp_constraint_matrix(ctx, M, A, s, delta)
        ker = K.rref_kernel(ctx, mat)
        if ker is not None and len(ker):
            got = popov_from_generators(ctx, _kernel_to_rows(ctx, ker, s, delta))
            if got is not None and got[1].degdet == target and got[0].nrows == delta:
                return got[0]
    B = gamma_module_basis(G, delta)
    return popov_form(B)[0]


def compute_reshaper(G: LexGB, eta: int, delta: int, accel: Accel = None) -> Optional[BiPoly]:
    """g = y^eta - ghat in the ideal of G with deg_y ghat < delta and
    deg_x ghat minimal, or None when no such member exists.

    None is a value, not an error: callers retry with slacker sequences.
    """
    # delta == eta occurs at every unit descent step (eta_{i-1} = eta_i + 1),
    # so equality is allowed here even though a strict bound would suffice
    # for the non-boundary steps
    if not 0 < delta <= eta:
        raise PreconditionError(f"need 0 < delta <= eta, got delta={delta}, eta={eta}")
    check_gb_shape(list(G.elements))
    R = _y_power_rem(G, eta)
    if R.deg_y >= delta:
        return None
    P = _popov_of_slice(G, delta, accel)
    u = rem_popov(phi_map(R, delta), P)
    ghat = phi_inv(u)
    return BiPoly.y_power(G.ctx, eta) - ghat


Source = Union[PointSet, tuple[UniPoly, UniPoly]]


def build_reshaper_pack(source: Source, seq: ReshapingSequence) -> tuple[Reshaper, BalanceReport]:
    """All reshapers for one descent sequence, plus the balance verdict.

    Any failing step raises ReshaperFailError carrying (step, eta, delta);
    for point sets this can only happen when genericity or the valency
    condition fails.
    """
    if isinstance(source, PointSet):
        n = len(source)
        if seq.eta[-1] > n:
            raise PreconditionError("sequence endpoint exceeds the point count")
        nu = x_valency(source)
        if nu > seq.min_delta():
            raise PreconditionError(
                f"x-valency {nu} exceeds the minimal step budget {seq.min_delta()}"
            )
        G = vanishing_gb(source)
        accel: Accel = ("points", source.points)
    else:
        M, A = source
        if M.is_zero or int(M.deg) < 1:
            raise PreconditionError("modulus must have positive degree")
        M = M.monic()
        A = A.rem(M)
        n = int(M.deg)
        G, _ = modcomp_basis(M, A, 1)
        accel = ("modcomp", (M, A))
    gs = []
    for i in range(1, seq.k + 1):
        eta_i = seq.eta[i]
        delta_i = 2 * eta_i - seq.eta[i - 1] + 1
        g = compute_reshaper(G, eta_i, delta_i, accel)
        if g is None:
            raise ReshaperFailError(i, eta_i, delta_i)
        gs.append(g)
    reshaper = Reshaper(seq, tuple(gs))
    deltas = seq.deltas()
    actual = tuple(max(int(g.deg_x), 0) for g in gs)
    bound = tuple(n // d + 1 for d in deltas)
    return reshaper, BalanceReport(n, seq.eta, actual, bound)


# ---------------------------------------------------------------------------
# Pack serialization

TASKS = ("mpe-distinct", "mpe-shear", "interpolate", "modcomp")


@dataclass
class ReshaperPack:
    """The serialized precomputation artifact shared by all tasks.

    One descent sequence and reshaper block for the single-phase tasks, two
    for interpolation; point tasks carry the original points, modcomp packs
    carry M and A, shear packs pin the extension and a hash of the sheared
    point set.
    """

    p: int
    ext: Optional[int]
    task: str
    n: int
    d: int
    sequences: tuple[ReshapingSequence, ...]
    reshapers: tuple[tuple[BiPoly, ...], ...]
    k1: Optional[int] = None
    theta_used: Optional[bool] = None
    points: Optional[PointSet] = None
    M: Optional[UniPoly] = None
    A: Optional[UniPoly] = None
    shearhash: Optional[str] = None

    def base_ctx(self) -> FieldCtx:
        return FieldCtx(self.p)

    def work_ctx(self) -> FieldCtx:
        return FieldCtx(self.p, self.ext) if self.ext is not None else FieldCtx(self.p)

    def serialize(self) -> str:
        lines = ["RESHAPER-PACK v1"]
        lines.append(f"field {self.p}" + (f" ext {self.ext}" if self.ext is not None else ""))
        lines.append(f"task {self.task}")
        lines.append(f"n {self.n} d {self.d}")
        if self.task == "interpolate":
            lines.append(f"k1 {self.k1}")
            lines.append(f"eta {self.sequences[0]}")
            lines.append(f"eta {self.sequences[1]}")
            lines.append(f"theta {1 if self.theta_used else 0}")
        else:
            lines.append(f"eta {self.sequences[0]}")
        if self.task == "mpe-shear":
            lines.append(f"shearhash {self.shearhash}")
        for block in self.reshapers:
            for i, g in enumerate(block, start=1):
                lines.append(f"g {i}")
                lines.append(g.to_block())
        if self.points is not None:
            lines.append(f"points {len(self.points)}")
            if self.points.points:
                lines.append(self.points.to_text())
        if self.M is not None:
            lines.append(f"M {self.M.to_line()}")
            lines.append(f"A {self.A.to_line()}")
        return "\n".join(lines) + "\n"

    @classmethod
    def parse(cls, text: str) -> "ReshaperPack":
        lines = [ln.rstrip("\n") for ln in text.splitlines() if ln.strip()]
        pos = 0

        def take() -> str:
            nonlocal pos
            if pos >= len(lines):
                raise PackFormatError("unexpected end of pack")
            ln = lines[pos]
            pos += 1
            return ln

        if take() != "RESHAPER-PACK v1":
            raise PackFormatError("missing RESHAPER-PACK v1 header")
        toks = take().split()
        if toks[0] != "field":
            raise PackFormatError("missing field line")
        p = int(toks[1])
        ext = int(toks[3]) if len(toks) > 2 and toks[2] == "ext" else None
        toks = take().split()
        if toks[0] != "task" or toks[1] not in TASKS:
            raise PackFormatError("bad task line")
        task = toks[1]
        toks = take().split()
        if toks[0] != "n" or toks[2] != "d":
            raise PackFormatError("bad size line")
        n, d = int(toks[1]), int(toks[3])
        k1 = None
        theta_used = None
        shearhash = None
        base = FieldCtx(p)
        work = FieldCtx(p, ext) if ext is not None else base
        if task == "interpolate":
            toks = take().split()
            if toks[0] != "k1":
                raise PackFormatError("interpolate pack missing k1")
            k1 = int(toks[1])
            seq1 = ReshapingSequence(tuple(int(t) for t in take().split()[1:]))
            seq2 = ReshapingSequence(tuple(int(t) for t in take().split()[1:]))
            toks = take().split()
            if toks[0] != "theta":
                raise PackFormatError("interpolate pack missing theta")
            theta_used = bool(int(toks[1]))
            sequences = (seq1, seq2)
            block_ctxs = [work if theta_used else base, base]
        else:
            seq = ReshapingSequence(tuple(int(t) for t in take().split()[1:]))
            sequences = (seq,)
            block_ctxs = [work if task == "mpe-shear" else base]
        if task == "mpe-shear":
            toks = take().split()
            if toks[0] != "shearhash":
                raise PackFormatError("shear pack missing shearhash")
            shearhash = toks[1]
        reshapers = []
        for seq, bctx in zip(sequences, block_ctxs):
            block = []
            for i in range(1, seq.k + 1):
                toks = take().split()
                if toks[0] != "g" or int(toks[1]) != i:
                    raise PackFormatError(f"expected reshaper header 'g {i}'")
                gpoly, newpos = BiPoly.from_lines(bctx, lines, pos)
                pos = newpos
                block.append(gpoly)
            reshapers.append(tuple(block))
        points = None
        M = A = None
        while pos < len(lines):
            toks = lines[pos].split()
            if toks[0] == "points":
                count = int(toks[1])
                pos += 1
                pts = []
                for _ in range(count):
                    ta, tb = lines[pos].split()
                    pts.append((parse_element(base, ta), parse_element(base, tb)))
                    pos += 1
                points = PointSet(base, pts)
            elif toks[0] == "M":
                M = UniPoly.from_line(base, lines[pos].partition(" ")[2])
                pos += 1
            elif toks[0] == "A":
                A = UniPoly.from_line(base, lines[pos].partition(" ")[2])
                pos += 1
            else:
                raise PackFormatError(f"unexpected pack line {lines[pos]!r}")
        return cls(
            p=p,
            ext=ext,
            task=task,
            n=n,
            d=d,
            sequences=sequences,
            reshapers=tuple(reshapers),
            k1=k1,
            theta_used=theta_used,
            points=points,
            M=M,
            A=A,
            shearhash=shearhash,
        )


def pointset_hash(P: PointSet) -> str:
    return hashlib.sha256(P.to_text().encode()).hexdigest()
