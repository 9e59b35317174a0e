"""Batch command-line surface: pack building, online runs, genericity
statistics, benchmarks, and pack verification.

Exit codes: 0 ok, 2 precondition or reshaper failure, 3 online-input
violation, 4 I/O or format problem.  With a fixed seed and fixed flags every
output file is byte-identical across runs; timing columns only appear in
bench tables, never in output files.
"""

from __future__ import annotations

import argparse
import hashlib
import math
import sys
import time
from pathlib import Path

import numpy as np

from .bipoly import BiPoly, bi_eval
from .engine import (
    interpolate_online,
    interpolate_precompute,
    load_plan,
    modcomp_online,
    modcomp_precompute,
    mpe_distinct_online,
    mpe_distinct_precompute,
    mpe_shear_online,
    mpe_shear_precompute,
)
from .errors import (
    BishapeError,
    DistinctnessError,
    PackFormatError,
    PreconditionError,
    RankDeficiencyError,
    ReshaperFailError,
)
from .ff import FieldCtx, parse_element
from .ideals import PointSet, gamma_module_basis, vanishing_gb
from .oracle import naive_modcomp, naive_mpe
from .polymat import popov_form
from .reshape import ReshaperPack, build_reshaper_pack, make_sequence
from .upoly import UniPoly

EXIT_OK = 0
EXIT_PRECONDITION = 2
EXIT_ONLINE_INPUT = 3
EXIT_IO = 4

PRNG_ID = "philox4x64 (numpy SeedSequence, per-trial spawn)"


class _Exit(Exception):
    def __init__(self, code: int, message: str):
        self.code = code
        self.message = message


def _fail(code: int, message: str):
    raise _Exit(code, message)


def _read(path: str) -> str:
    try:
        return Path(path).read_text()
    except OSError as e:
        raise _Exit(EXIT_IO, f"cannot read {path}: {e}")


def _write(path: str, text: str):
    try:
        Path(path).write_text(text)
    except OSError as e:
        raise _Exit(EXIT_IO, f"cannot write {path}: {e}")


def _trial_rng(seed: int, trial: int) -> np.random.Generator:
    ss = np.random.SeedSequence(entropy=seed, spawn_key=(trial,))
    return np.random.Generator(np.random.Philox(ss))


def _random_distinct_x_points(ctx: FieldCtx, n: int, gen: np.random.Generator) -> PointSet:
    if n > ctx.p:
        raise _Exit(EXIT_PRECONDITION, f"cannot draw {n} distinct x-coordinates mod {ctx.p}")
    xs = set()
    while len(xs) < n:
        xs.update(int(v) for v in gen.integers(0, ctx.p, size=n - len(xs)))
    pts = [(ctx.elem(x), ctx.elem(int(gen.integers(0, ctx.p)))) for x in sorted(xs)]
    return PointSet(ctx, pts)


def _random_squarefree_monic(ctx: FieldCtx, n: int, gen: np.random.Generator) -> UniPoly:
    while True:
        coeffs = [int(v) for v in gen.integers(0, ctx.p, size=n)] + [1]
        M = UniPoly(ctx, coeffs)
        # square-free iff gcd(M, M') = 1
        a, b = M, M.derivative()
        while not b.is_zero:
            a, b = b, a.rem(b)
        if int(a.deg) == 0:
            return M


def _random_bipoly(ctx: FieldCtx, dx: int, dy: int, gen: np.random.Generator) -> BiPoly:
    rows = []
    for _ in range(dy + 1):
        coeffs = [int(v) for v in gen.integers(0, ctx.p, size=dx + 1)]
        rows.append(UniPoly(ctx, coeffs))
    return BiPoly(ctx, rows)


# ---------------------------------------------------------------------------
# precompute


def _cmd_precompute(args) -> int:
    ctx = FieldCtx(args.field)
    if args.task in ("mpe-distinct", "mpe-shear", "interpolate"):
        if not args.points:
            _fail(EXIT_IO, "point tasks need --points FILE")
        P = PointSet.from_text(ctx, _read(args.points))
        if args.transpose:
            P = P.transpose()
        try:
            if args.task == "mpe-distinct":
                plan = mpe_distinct_precompute(P, args.d)
                reports = [plan.report]
            elif args.task == "mpe-shear":
                plan = mpe_shear_precompute(P, args.d)
                reports = [plan.report]
            else:
                plan = interpolate_precompute(P, args.d)
                reports = [plan.report1, plan.report2]
        except ReshaperFailError as e:
            _fail(EXIT_PRECONDITION, f"reshaper failure: {e}")
        except (DistinctnessError, PreconditionError, RankDeficiencyError) as e:
            _fail(EXIT_PRECONDITION, str(e))
    elif args.task == "modcomp":
        if args.transpose:
            _fail(EXIT_PRECONDITION, "modcomp has no transpose orientation")
        if not args.modpair:
            _fail(EXIT_IO, "modcomp needs --modpair FILE with M and A lines")
        lines = [ln for ln in _read(args.modpair).splitlines() if ln.strip()]
        if len(lines) < 2:
            _fail(EXIT_IO, "modpair file must carry two polynomial lines (M, A)")
        M = UniPoly.from_line(ctx, lines[0])
        A = UniPoly.from_line(ctx, lines[1])
        try:
            plan = modcomp_precompute(M, A, args.d)
            reports = [plan.report]
        except ReshaperFailError as e:
            _fail(EXIT_PRECONDITION, f"reshaper failure: {e}")
        except (PreconditionError, RankDeficiencyError) as e:
            _fail(EXIT_PRECONDITION, str(e))
    else:
        _fail(EXIT_PRECONDITION, f"unknown task {args.task}")
    pack = plan.to_pack()
    if args.ext is not None and pack.ext != args.ext:
        _fail(EXIT_PRECONDITION, f"--ext {args.ext} does not match the derived non-residue {pack.ext}")
    if args.out:
        _write(args.out, pack.serialize())
    for rep in reports:
        for line in rep.lines():
            print(line)
    return EXIT_OK


# ---------------------------------------------------------------------------
# run


def _parse_bipoly_file(ctx: FieldCtx, text: str) -> BiPoly:
    lines = [ln for ln in text.splitlines() if ln.strip()]
    try:
        f, _ = BiPoly.from_lines(ctx, lines)
    except (PreconditionError, ValueError) as e:
        raise _Exit(EXIT_IO, f"bad polynomial input: {e}")
    return f


def _cmd_run(args) -> int:
    pack = ReshaperPack.parse(_read(args.pack))
    plan = load_plan(pack)
    base = pack.base_ctx()
    text = _read(args.infile)
    out_lines: list[str] = []
    verify_ok = True
    if pack.task in ("mpe-distinct", "mpe-shear"):
        f = _parse_bipoly_file(base, text)
        if args.transpose:
            f = f.transpose()
        try:
            vals = (
                mpe_distinct_online(plan, f)
                if pack.task == "mpe-distinct"
                else mpe_shear_online(plan, f)
            )
        except PreconditionError as e:
            _fail(EXIT_ONLINE_INPUT, str(e))
        out_lines.append(" ".join(str(v) for v in vals))
        if args.verify:
            pts = plan.points if pack.task == "mpe-shear" else plan.eval_points
            verify_ok = vals == naive_mpe(f, pts)
    elif pack.task == "interpolate":
        toks = text.split()
        gamma = [parse_element(base, t) for t in toks]
        try:
            out = interpolate_online(plan, gamma)
        except PreconditionError as e:
            _fail(EXIT_ONLINE_INPUT, str(e))
        if args.transpose:
            out = out.transpose()
        out_lines.append(out.to_block())
        if args.verify:
            pts = plan.points.transpose() if args.transpose else plan.points
            verify_ok = all(
                bi_eval(out, a, b) == g for (a, b), g in zip(pts, gamma)
            )
    elif pack.task == "modcomp":
        if args.transpose:
            _fail(EXIT_PRECONDITION, "modcomp has no transpose orientation")
        f = _parse_bipoly_file(base, text)
        try:
            res = modcomp_online(plan, f)
        except PreconditionError as e:
            _fail(EXIT_ONLINE_INPUT, str(e))
        out_lines.append(" ".join(str(c) for c in res.coeffs) if not res.is_zero else "0")
        if args.verify:
            verify_ok = res == naive_modcomp(f, plan.M, plan.A)
    else:
        _fail(EXIT_PRECONDITION, f"unknown task {pack.task}")
    body = "\n".join(out_lines) + "\n"
    if args.out:
        _write(args.out, body)
    else:
        sys.stdout.write(body)
    if args.verify:
        print(f"verify: {'PASS' if verify_ok else 'FAIL'}")
        if not verify_ok:
            return 1
    return EXIT_OK


# ---------------------------------------------------------------------------
# balance-stats


def _popov_row_degrees(P: PointSet, m: int) -> list[int]:
    G = vanishing_gb(P)
    B = gamma_module_basis(G, m)
    _, cert = popov_form(B)
    return sorted(cert.row_degrees)


def _cmd_balance_stats(args) -> int:
    ctx = FieldCtx(args.field)
    n, d, trials = args.n, args.d, args.trials
    m = args.m if args.m else d
    lines = [
        f"balance-stats mode={args.mode} n={n} p={ctx.p} d={d} m={m} "
        f"trials={trials} seed={args.seed}",
        f"prng: {PRNG_ID}",
    ]
    balanced = 0
    fails = 0
    hist_match = 0
    hist_total = 0
    min_slack = None
    for t in range(trials):
        gen = _trial_rng(args.seed, t)
        try:
            if args.mode == "points":
                P = _random_distinct_x_points(ctx, n, gen)
                seq = make_sequence(d, 1, 1)
                _, report = build_reshaper_pack(P, seq)
                if m > 1:
                    q, r = divmod(n, m)
                    want = sorted([q] * (m - r) + [q + 1] * r)
                    hist_total += 1
                    if _popov_row_degrees(P, m) == want:
                        hist_match += 1
            else:
                M = _random_squarefree_monic(ctx, n, gen)
                A = UniPoly(ctx, [int(v) for v in gen.integers(0, ctx.p, size=n)])
                seq = make_sequence(d, 1, 1)
                _, report = build_reshaper_pack((M, A), seq)
        except ReshaperFailError:
            fails += 1
            continue
        if report.balanced:
            balanced += 1
        slack = min(report.slack) if report.slack else 0
        min_slack = slack if min_slack is None else min(min_slack, slack)
    done = trials if trials else 1
    lines.append(f"balanced: {balanced}/{trials} ({balanced / done:.4f})")
    lines.append(f"reshaper-fail: {fails}/{trials}")
    lines.append(f"min-slack: {min_slack if min_slack is not None else 'n/a'}")
    if hist_total:
        lines.append(
            f"popov-row-degree-law: {hist_match}/{hist_total} ({hist_match / hist_total:.4f})"
        )
    body = "\n".join(lines) + "\n"
    if args.out:
        _write(args.out, body)
    sys.stdout.write(body)
    return EXIT_OK


# ---------------------------------------------------------------------------
# bench


def _bench_instance(task: str, ctx: FieldCtx, n: int, d: int, gen: np.random.Generator):
    if task == "mpe-distinct":
        P = _random_distinct_x_points(ctx, n, gen)
        digest = hashlib.sha256(P.to_text().encode()).hexdigest()[:16]
        return P, digest
    if task == "mpe-shear":
        xs = [int(v) for v in gen.integers(0, max(2, n // 4), size=n)]
        pts = set()
        while len(pts) < n:
            pts.add((xs[len(pts) % n], int(gen.integers(0, ctx.p))))
        P = PointSet(ctx, [(ctx.elem(a), ctx.elem(b)) for a, b in sorted(pts)])
        return P, hashlib.sha256(P.to_text().encode()).hexdigest()[:16]
    if task == "interpolate":
        P = _random_distinct_x_points(ctx, n, gen)
        return P, hashlib.sha256(P.to_text().encode()).hexdigest()[:16]
    if task == "modcomp":
        M = _random_squarefree_monic(ctx, n, gen)
        A = UniPoly(ctx, [int(v) for v in gen.integers(0, ctx.p, size=n)])
        digest = hashlib.sha256((M.to_line() + "|" + A.to_line()).encode()).hexdigest()[:16]
        return (M, A), digest
    raise _Exit(EXIT_PRECONDITION, f"unknown task {task}")


def run_bench(task: str, sizes: list[int], seed: int, field: int, d_opt: int | None):
    """One (precompute_s, online_s, digest) row per size; shared by CLI and tests."""
    ctx = FieldCtx(field)
    rows = []
    for idx, n in enumerate(sizes):
        gen = _trial_rng(seed, idx)
        d = d_opt if d_opt else max(1, math.isqrt(n))
        inst, digest = _bench_instance(task, ctx, n, d, gen)
        t0 = time.perf_counter()
        if task == "mpe-distinct":
            plan = mpe_distinct_precompute(inst, d)
        elif task == "mpe-shear":
            plan = mpe_shear_precompute(inst, d)
        elif task == "interpolate":
            plan = interpolate_precompute(inst, d)
        else:
            plan = modcomp_precompute(inst[0], inst[1], d)
        t1 = time.perf_counter()
        if task == "interpolate":
            gamma = [ctx.elem(int(v)) for v in gen.integers(0, ctx.p, size=n)]
            t2 = time.perf_counter()
            interpolate_online(plan, gamma)
            t3 = time.perf_counter()
        else:
            if task == "mpe-shear":
                dx = (d - 1) // 2
                dy = (d - 1) - dx
            else:
                dx = max(1, 2 * n // d)
                dy = d - 1
            f = _random_bipoly(ctx, dx, dy, gen)
            t2 = time.perf_counter()
            if task == "mpe-distinct":
                mpe_distinct_online(plan, f)
            elif task == "mpe-shear":
                mpe_shear_online(plan, f)
            else:
                modcomp_online(plan, f)
            t3 = time.perf_counter()
        rows.append((n, d, t1 - t0, t3 - t2, digest))
    return rows


def _cmd_bench(args) -> int:
    sizes = [int(s) for s in args.sizes.split(",") if s]
    rows = run_bench(args.task, sizes, args.seed, args.field, args.d)
    print(f"bench task={args.task} field={args.field} seed={args.seed}")
    print(f"{'n':>10} {'d':>6} {'precompute_s':>14} {'online_s':>12} {'ratio':>8}  digest")
    prev = None
    for n, d, pre, onl, digest in rows:
        ratio = f"{onl / prev:.2f}" if prev and prev > 0 else "-"
        print(f"{n:>10} {d:>6} {pre:>14.4f} {onl:>12.4f} {ratio:>8}  {digest}")
        prev = onl
    return EXIT_OK


# ---------------------------------------------------------------------------
# verify-pack


def _verify_pack(pack: ReshaperPack) -> list[str]:
    problems = []
    plan = load_plan(pack)
    if pack.task in ("mpe-distinct", "mpe-shear"):
        pts = plan.eval_points
        for i, g in enumerate(plan.reshaper.g, start=1):
            if any(not bi_eval(g, a, b).is_zero for a, b in pts):
                problems.append(f"reshaper g {i} does not vanish on the point set")
        if not plan.report.balanced:
            problems.append("pack is not balanced (online cost degrades smoothly)")
    elif pack.task == "interpolate":
        work = plan.work_ctx
        pts1 = list(zip((work.lift(a) if work.is_extension else a for a, _ in plan.points), plan.sheared_y))
        for i, g in enumerate(plan.g1.g, start=1):
            if any(not bi_eval(g, a, b).is_zero for a, b in pts1):
                problems.append(f"phase-1 reshaper g {i} does not vanish on the sheared set")
        for i, g in enumerate(plan.g2.g, start=1):
            if any(not bi_eval(g, a, b).is_zero for a, b in plan.points):
                problems.append(f"phase-2 reshaper g {i} does not vanish on the point set")
    else:
        for i, g in enumerate(plan.reshaper.g, start=1):
            if not naive_modcomp(g, plan.M, plan.A).is_zero:
                problems.append(f"reshaper g {i} is not in <M, y-A>")
    return problems


def _cmd_verify_pack(args) -> int:
    pack = ReshaperPack.parse(_read(args.pack))
    problems = _verify_pack(pack)
    plan = load_plan(pack)
    reports = (
        [plan.report1, plan.report2] if pack.task == "interpolate" else [plan.report]
    )
    for rep in reports:
        for line in rep.lines():
            print(line)
    if problems:
        for p in problems:
            print(f"INVALID: {p}")
        return EXIT_PRECONDITION
    print("pack: OK")
    return EXIT_OK


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="bishape", description=__doc__)
    sub = ap.add_subparsers(dest="cmd", required=True)

    p = sub.add_parser("precompute", help="build a reshaper pack from preinput")
    p.add_argument("--task", required=True, choices=["mpe-distinct", "mpe-shear", "interpolate", "modcomp"])
    p.add_argument("--field", required=True, type=int)
    p.add_argument("--ext", type=int, default=None, help="expected extension non-residue (consistency check)")
    p.add_argument("--points", help="point-set file: one 'alpha beta' pair per line")
    p.add_argument("--modpair", help="file with two polynomial lines: M then A")
    p.add_argument("--d", required=True, type=int)
    p.add_argument("--transpose", action="store_true", help="swap x and y in the preinput")
    p.add_argument("--out", help="pack output path")
    p.set_defaults(func=_cmd_precompute)

    p = sub.add_parser("run", help="run the online phase against a pack")
    p.add_argument("--pack", required=True)
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--out", help="results output path (default: stdout)")
    p.add_argument("--verify", action="store_true", help="cross-check against the naive oracle")
    p.add_argument("--transpose", action="store_true")
    p.set_defaults(func=_cmd_run)

    p = sub.add_parser("balance-stats", help="empirical genericity statistics")
    p.add_argument("--mode", required=True, choices=["points", "modcomp"])
    p.add_argument("--n", required=True, type=int)
    p.add_argument("--field", required=True, type=int)
    p.add_argument("--d", required=True, type=int)
    p.add_argument("--m", type=int, default=None, help="slice rank for the row-degree histogram")
    p.add_argument("--trials", required=True, type=int)
    p.add_argument("--seed", required=True, type=int)
    p.add_argument("--out")
    p.set_defaults(func=_cmd_balance_stats)

    p = sub.add_parser("bench", help="precompute/online timing table")
    p.add_argument("--task", required=True, choices=["mpe-distinct", "mpe-shear", "interpolate", "modcomp"])
    p.add_argument("--sizes", required=True, help="comma-separated instance sizes")
    p.add_argument("--seed", required=True, type=int)
    p.add_argument("--field", type=int, default=2013265921)
    p.add_argument("--d", type=int, default=None)
    p.set_defaults(func=_cmd_bench)

    p = sub.add_parser("verify-pack", help="re-validate a serialized pack")
    p.add_argument("--pack", required=True)
    p.set_defaults(func=_cmd_verify_pack)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except _Exit as e:
        print(f"error: {e.message}", file=sys.stderr)
        return e.code
    except PackFormatError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_IO
    except ReshaperFailError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_PRECONDITION
    except (DistinctnessError, PreconditionError, RankDeficiencyError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_PRECONDITION
    except BishapeError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_PRECONDITION


if __name__ == "__main__":
    sys.exit(main())
