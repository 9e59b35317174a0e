import random

from bishape.bipoly import BiPoly, bi_eval
from bishape.ff import FieldCtx
from bishape.ideals import PointSet
from bishape.oracle import brute_min_reshaper, naive_modcomp, naive_mpe
from bishape.upoly import UniPoly

F7 = FieldCtx(7)
F97 = FieldCtx(97)


def pset(ctx, pairs):
    return PointSet(ctx, [(ctx.elem(a), ctx.elem(b)) for a, b in pairs])


def bp(ctx, rows):
    return BiPoly(ctx, [UniPoly(ctx, r) for r in rows])


def test_naive_mpe_examples():
    P = pset(F7, [(1, 2), (2, 3), (3, 5)])
    f = bp(F7, [[0, 1], [1]])  # x + y
    assert naive_mpe(f, P) == [F7.elem(3), F7.elem(5), F7.elem(1)]
    assert naive_mpe(BiPoly.zero(F7), P) == [F7.zero()] * 3
    assert naive_mpe(BiPoly.one(F7), P) == [F7.one()] * 3


def test_naive_modcomp_examples():
    M = UniPoly(F7, [0, 0, 1])  # x^2
    A = UniPoly(F7, [1, 1])  # x+1
    assert naive_modcomp(bp(F7, [[], [], [1]]), M, A) == UniPoly(F7, [1, 2])
    f_uni = bp(F7, [[4, 0, 0, 1]])
    assert naive_modcomp(f_uni, M, A) == UniPoly(F7, [4, 0, 0, 1]).rem(M)
    assert naive_modcomp(bp(F7, [[], [1]]), M, A) == A.rem(M)


def test_brute_min_reshaper_examples():
    # {(0,0),(1,1)}, eta=1, delta=1 -> ghat = x
    got = brute_min_reshaper(pset(F7, [(0, 0), (1, 1)]), 1, 1, 3)
    assert got == bp(F7, [[0, 1]])
    # single point: ghat = constant b
    got = brute_min_reshaper(pset(F7, [(2, 4)]), 1, 1, 3)
    assert got == bp(F7, [[4]])
    # {(0,0),(0,1)}: no y - c(x) vanishes on both
    assert brute_min_reshaper(pset(F7, [(0, 0), (0, 1)]), 1, 1, 4) is None


def test_brute_min_reshaper_certifies():
    rng = random.Random(0)
    for _ in range(30):
        n = rng.randrange(1, 5)
        pts = set()
        while len(pts) < n:
            pts.add((rng.randrange(7), rng.randrange(7)))
        P = pset(F97, sorted(pts))
        eta = rng.randrange(1, 5)
        delta = rng.randrange(1, eta + 1)
        ghat = brute_min_reshaper(P, eta, delta, n + 1)
        if ghat is not None:
            g = BiPoly.y_power(F97, eta) - ghat
            assert all(bi_eval(g, a, b).is_zero for a, b in P)
            assert ghat.deg_y < delta
