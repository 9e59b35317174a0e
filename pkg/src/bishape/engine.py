"""Task engines: bivariate MPE (distinct-x and sheared), interpolation, and
modular composition, each split into a heavy precompute phase over the
preinput and a light online phase that only reads the resulting plan.

Plans are immutable after precomputation and safe for concurrent online
calls; they serialize to the reshaper-pack text format and rebuild without
access to the original ideal generators.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

from .bipoly import BiPoly, shear_poly
from .errors import DistinctnessError, PreconditionError
from .ff import FieldCtx, FieldElement, build_quadratic_extension
from .ideals import PointSet, x_valency, y_valency
from .reshape import (
    BalanceReport,
    Reshaper,
    ReshaperPack,
    ReshapingSequence,
    build_reshaper_pack,
    make_sequence,
    make_sequence_through,
    pointset_hash,
    reshape,
)
from .upoly import SubproductTree, UniPoly, uni_interp, uni_mpe


def _empty_report(n: int, seq: ReshapingSequence) -> BalanceReport:
    return BalanceReport(n, seq.eta, (), ())


def _report_from(n: int, seq: ReshapingSequence, gs: Sequence[BiPoly]) -> BalanceReport:
    actual = tuple(max(int(g.deg_x), 0) for g in gs)
    bound = tuple(n // d + 1 for d in seq.deltas())
    return BalanceReport(n, seq.eta, actual, bound)


def _build_or_empty(source, seq: ReshapingSequence):
    if seq.k == 0:
        n = len(source) if isinstance(source, PointSet) else int(source[0].deg)
        return Reshaper(seq, ()), _empty_report(n, seq)
    return build_reshaper_pack(source, seq)


# ---------------------------------------------------------------------------
# MPE


@dataclass
class MpePlan:
    """Precomputed state for bivariate MPE on a fixed point set."""

    variant: str  # "distinct-x" | "shear"
    base_ctx: FieldCtx
    work_ctx: FieldCtx
    points: PointSet  # original points over the base field
    eval_points: PointSet  # where univariate MPE happens (sheared for "shear")
    seq: ReshapingSequence
    reshaper: Reshaper
    report: BalanceReport
    tree: SubproductTree
    d: int

    @property
    def n(self) -> int:
        return len(self.points)

    def to_pack(self) -> ReshaperPack:
        return ReshaperPack(
            p=self.base_ctx.p,
            ext=self.work_ctx.ext if self.variant == "shear" else None,
            task="mpe-distinct" if self.variant == "distinct-x" else "mpe-shear",
            n=self.n,
            d=self.d,
            sequences=(self.seq,),
            reshapers=(self.reshaper.g,),
            points=self.points,
            shearhash=pointset_hash(self.eval_points) if self.variant == "shear" else None,
        )


def mpe_distinct_precompute(P: PointSet, d: int) -> MpePlan:
    """Plan for MPE over points with pairwise distinct x-coordinates."""
    if d < 1:
        raise PreconditionError("d must be positive")
    if len(P) == 0:
        raise PreconditionError("empty point set")
    if x_valency(P) != 1:
        raise DistinctnessError("repeated x-coordinate; use the shear variant")
    seq = make_sequence(d, 1, 1)
    reshaper, report = _build_or_empty(P, seq)
    tree = SubproductTree(P.ctx, [a for a, _ in P])
    return MpePlan("distinct-x", P.ctx.base(), P.ctx, P, P, seq, reshaper, report, tree, d)


def mpe_distinct_online(plan: MpePlan, f: BiPoly) -> list[FieldElement]:
    """Exact evaluations of f at the plan's points: reshape, then univariate MPE."""
    if f.deg_y >= plan.d:
        raise PreconditionError(f"deg_y f = {f.deg_y} must be below d = {plan.d}")
    fhat = reshape(f, plan.seq, plan.reshaper.g)
    u = fhat.ycoeff(0)
    return uni_mpe(u, [a for a, _ in plan.eval_points], tree=plan.tree)


def mpe_shear_precompute(P: PointSet, d: int) -> MpePlan:
    """Plan for MPE with repeated x-coordinates, through a degree-2 shear."""
    if d < 1:
        raise PreconditionError("d must be positive")
    if len(P) == 0:
        raise PreconditionError("empty point set")
    if P.ctx.is_extension:
        raise PreconditionError("shear variant expects a base-field point set")
    L = build_quadratic_extension(P.ctx)
    theta = L.theta()
    sheared = []
    for a, b in P:
        al, bl = L.lift(a), L.lift(b)
        sheared.append((al + theta * bl, bl))
    Pbar = PointSet(L, sheared)
    if x_valency(Pbar) != 1:
        raise DistinctnessError("sheared x-coordinates collide; points were not distinct")
    seq = make_sequence(d, 1, 1)
    reshaper, report = _build_or_empty(Pbar, seq)
    tree = SubproductTree(L, [a for a, _ in Pbar])
    return MpePlan("shear", P.ctx, L, P, Pbar, seq, reshaper, report, tree, d)


def mpe_shear_online(plan: MpePlan, f: BiPoly) -> list[FieldElement]:
    """Evaluations of a base-field f at the original points.

    Intermediate values live in the extension; outputs are asserted to lie in
    the base field before projection.
    """
    if plan.variant != "shear":
        raise PreconditionError("plan is not a shear plan")
    if f.ctx != plan.base_ctx:
        raise PreconditionError("input must be over the base field")
    dx = max(int(f.deg_x), 0) if not f.is_zero else 0
    dy = max(int(f.deg_y), 0) if not f.is_zero else 0
    if not f.is_zero and dx + dy >= plan.d:
        raise PreconditionError(
            f"deg_x f + deg_y f = {dx + dy} must be below d = {plan.d}"
        )
    L = plan.work_ctx
    theta = L.theta()
    fbar = shear_poly(f.lift(L), L.one(), -theta)
    vals = mpe_distinct_online(plan, fbar)
    out = []
    for v in vals:
        assert v.a1 == 0, "shear MPE produced a value outside the base field"
        out.append(v.project())
    return out


# ---------------------------------------------------------------------------
# Interpolation


@dataclass
class InterpPlan:
    """Precomputed state for bivariate interpolation on a fixed point set."""

    base_ctx: FieldCtx
    work_ctx: FieldCtx
    points: PointSet
    theta: FieldElement  # zero (in work ctx) when no extension is needed
    sheared_y: list[FieldElement]  # beta-bar over the work context
    seq1: ReshapingSequence
    seq2: ReshapingSequence
    k1: int
    g1: Reshaper
    g2: Reshaper
    report1: BalanceReport
    report2: BalanceReport
    tree: SubproductTree  # over the sheared y-coordinates
    d: int

    @property
    def n(self) -> int:
        return len(self.points)

    def to_pack(self) -> ReshaperPack:
        return ReshaperPack(
            p=self.base_ctx.p,
            ext=self.work_ctx.ext,
            task="interpolate",
            n=self.n,
            d=self.d,
            sequences=(self.seq1, self.seq2),
            reshapers=(self.g1.g, self.g2.g),
            k1=self.k1,
            theta_used=self.work_ctx.is_extension,
            points=self.points,
        )


def interpolate_precompute(P: PointSet, d: int) -> InterpPlan:
    """Plan for interpolation with target y-degree below d.

    Requires nu_x(P) <= d <= isqrt(n) + 1.  The descent passes through
    isqrt(n) so the shear back to the original points stays quadratic in
    sqrt(n).
    """
    n = len(P)
    if n == 0:
        raise PreconditionError("empty point set")
    if P.ctx.is_extension:
        raise PreconditionError("interpolation expects a base-field point set")
    nu = x_valency(P)
    mid = math.isqrt(n)
    if not (max(nu, 1) <= d <= mid + 1):
        raise PreconditionError(
            f"need nu_x(P) <= d <= isqrt(n)+1, got nu={nu}, d={d}, isqrt(n)={mid}"
        )
    valency = nu if nu <= min(mid, d) else 1
    if d > mid:
        seq1 = make_sequence(n, mid, valency)
        k1 = seq1.k
        seq2 = ReshapingSequence((mid,))
    else:
        full, k1 = make_sequence_through(n, mid, d, valency)
        seq1 = ReshapingSequence(full.eta[: k1 + 1])
        seq2 = ReshapingSequence(full.eta[k1:])
    if y_valency(P) == 1:
        work = P.ctx
        theta = work.zero()
        pts_w = P.points
    else:
        work = build_quadratic_extension(P.ctx)
        theta = work.theta()
        pts_w = [(work.lift(a), work.lift(b)) for a, b in P]
    sheared_y = [theta * a + b for a, b in pts_w]
    Pbar = PointSet(work, list(zip((a for a, _ in pts_w), sheared_y)))
    g1, report1 = _build_or_empty(Pbar, seq1)
    g2, report2 = _build_or_empty(P, seq2)
    tree = SubproductTree(work, sheared_y)
    return InterpPlan(
        P.ctx, work, P, theta, sheared_y, seq1, seq2, k1, g1, g2, report1, report2, tree, d
    )


def interpolate_online(plan: InterpPlan, gamma: Sequence[FieldElement]) -> BiPoly:
    """An f over the base field with f(points_i) = gamma_i, deg_y f < d and
    deg_x f <= isqrt(n) + total reshaper x-degree."""
    if len(gamma) != plan.n:
        raise PreconditionError(f"expected {plan.n} values, got {len(gamma)}")
    work = plan.work_ctx
    vals = [work.lift(g) if work.is_extension else g for g in gamma]
    u = uni_interp(list(zip(plan.sheared_y, vals)), tree=plan.tree)
    r = reshape(BiPoly.from_y_poly(u), plan.seq1, plan.g1.g)
    if plan.theta.is_zero:
        s = r
    else:
        # r(x, theta*x + y) via the transposed shear
        s = shear_poly(r.transpose(), work.one(), plan.theta).transpose()
    if work.is_extension:
        s1, _ = s.components()
    else:
        s1 = s
    out = reshape(s1, plan.seq2, plan.g2.g) if plan.seq2.k else s1
    assert out.deg_y < plan.d, "interpolation output y-degree contract violated"
    cap = math.isqrt(plan.n) + sum(max(int(g.deg_x), 0) for g in plan.g1.g) + sum(
        max(int(g.deg_x), 0) for g in plan.g2.g
    )
    assert out.is_zero or int(out.deg_x) <= cap, "interpolation output x-degree contract violated"
    return out


# ---------------------------------------------------------------------------
# Modular composition


@dataclass
class ModCompPlan:
    """Precomputed state for f |-> f(x, A) rem M."""

    ctx: FieldCtx
    M: UniPoly  # monic
    A: UniPoly  # reduced mod M
    seq: ReshapingSequence
    reshaper: Reshaper
    report: BalanceReport
    d: int

    @property
    def n(self) -> int:
        return int(self.M.deg)

    def to_pack(self) -> ReshaperPack:
        return ReshaperPack(
            p=self.ctx.p,
            ext=None,
            task="modcomp",
            n=self.n,
            d=self.d,
            sequences=(self.seq,),
            reshapers=(self.reshaper.g,),
            M=self.M,
            A=self.A,
        )


def modcomp_precompute(M: UniPoly, A: UniPoly, d: int) -> ModCompPlan:
    """Plan for modular composition with preinput (M, A)."""
    if d < 1:
        raise PreconditionError("d must be positive")
    if M.is_zero or int(M.deg) < 1:
        raise PreconditionError("modulus must have positive degree")
    M = M.monic()
    A = A.rem(M)
    seq = make_sequence(d, 1, 1)
    reshaper, report = _build_or_empty((M, A), seq)
    return ModCompPlan(M.ctx, M, A, seq, reshaper, report, d)


def modcomp_online(plan: ModCompPlan, f: BiPoly) -> UniPoly:
    """f(x, A) rem M exactly: reshape to y-degree zero, then one division."""
    if f.deg_y >= plan.d:
        raise PreconditionError(f"deg_y f = {f.deg_y} must be below d = {plan.d}")
    fhat = reshape(f, plan.seq, plan.reshaper.g)
    return fhat.ycoeff(0).rem(plan.M)


# ---------------------------------------------------------------------------
# Pack loading

Plan = MpePlan | InterpPlan | ModCompPlan


def load_plan(pack: ReshaperPack) -> Plan:
    """Rebuild a runnable plan from a serialized pack (no ideal data needed)."""
    base = pack.base_ctx()
    if pack.task == "mpe-distinct":
        seq = pack.sequences[0]
        plan = MpePlan(
            "distinct-x",
            base,
            base,
            pack.points,
            pack.points,
            seq,
            Reshaper(seq, pack.reshapers[0]),
            _report_from(pack.n, seq, pack.reshapers[0]),
            SubproductTree(base, [a for a, _ in pack.points]),
            pack.d,
        )
        return plan
    if pack.task == "mpe-shear":
        work = pack.work_ctx()
        theta = work.theta()
        sheared = []
        for a, b in pack.points:
            al, bl = work.lift(a), work.lift(b)
            sheared.append((al + theta * bl, bl))
        Pbar = PointSet(work, sheared)
        if pack.shearhash != pointset_hash(Pbar):
            raise PreconditionError("sheared point-set hash mismatch")
        seq = pack.sequences[0]
        return MpePlan(
            "shear",
            base,
            work,
            pack.points,
            Pbar,
            seq,
            Reshaper(seq, pack.reshapers[0]),
            _report_from(pack.n, seq, pack.reshapers[0]),
            SubproductTree(work, [a for a, _ in Pbar]),
            pack.d,
        )
    if pack.task == "interpolate":
        work = pack.work_ctx() if pack.theta_used else base
        theta = work.theta() if pack.theta_used else base.zero()
        pts_w = (
            [(work.lift(a), work.lift(b)) for a, b in pack.points]
            if pack.theta_used
            else pack.points.points
        )
        sheared_y = [theta * a + b for a, b in pts_w]
        seq1, seq2 = pack.sequences
        return InterpPlan(
            base,
            work,
            pack.points,
            theta,
            sheared_y,
            seq1,
            seq2,
            pack.k1,
            Reshaper(seq1, pack.reshapers[0]),
            Reshaper(seq2, pack.reshapers[1]),
            _report_from(pack.n, seq1, pack.reshapers[0]),
            _report_from(pack.n, seq2, pack.reshapers[1]),
            SubproductTree(work, sheared_y),
            pack.d,
        )
    if pack.task == "modcomp":
        seq = pack.sequences[0]
        return ModCompPlan(
            base,
            pack.M,
            pack.A,
            seq,
            Reshaper(seq, pack.reshapers[0]),
            _report_from(pack.n, seq, pack.reshapers[0]),
            pack.d,
        )
    raise PreconditionError(f"unknown task {pack.task!r}")
