import random

import pytest

from bishape.errors import DistinctnessError
from bishape.ff import NEG_INF, FieldCtx, build_quadratic_extension
from bishape.upoly import (
    SubproductTree,
    UniPoly,
    taylor_shift,
    uni_divrem,
    uni_interp,
    uni_mpe,
    uni_mul,
)

F7 = FieldCtx(7)
F65537 = FieldCtx(65537)


def schoolbook(f: UniPoly, g: UniPoly) -> UniPoly:
    """Independent quadratic multiplication oracle."""
    if f.is_zero or g.is_zero:
        return UniPoly(f.ctx)
    out = [f.ctx.zero() for _ in range(int(f.deg + g.deg) + 1)]
    for i, a in enumerate(f.coeffs):
        for j, b in enumerate(g.coeffs):
            out[i + j] = out[i + j] + a * b
    return UniPoly(f.ctx, out)


def test_mul_simple():
    f = UniPoly(F7, [1, 1])  # x+1
    g = UniPoly(F7, [6, 1])  # x+6
    assert uni_mul(f, g) == UniPoly(F7, [6, 0, 1])  # x^2+6


def test_mul_zero():
    f = UniPoly(F7, [3, 1])
    assert uni_mul(UniPoly.zero(F7), f).is_zero


def test_mul_matches_schoolbook_large():
    rng = random.Random(1)
    f = UniPoly.random(F65537, 1000, rng)
    g = UniPoly.random(F65537, 1000, rng)
    assert uni_mul(f, g) == schoolbook(f, g)


def test_ntt_and_fallback_agree():
    # 65537 supports length-2^16 transforms; F_p with tiny 2-adic order
    # (p=7 allows only length 2) exercises the Karatsuba path.
    rng = random.Random(2)
    for _ in range(100):
        d1, d2 = rng.randrange(0, 80), rng.randrange(0, 80)
        f = UniPoly.random(F65537, d1, rng)
        g = UniPoly.random(F65537, d2, rng)
        assert uni_mul(f, g) == schoolbook(f, g)
    for _ in range(20):
        f = UniPoly.random(F7, rng.randrange(0, 40), rng)
        g = UniPoly.random(F7, rng.randrange(0, 40), rng)
        assert uni_mul(f, g) == schoolbook(f, g)


def test_distributivity_samples():
    rng = random.Random(3)
    for _ in range(25):
        f = UniPoly.random(F65537, rng.randrange(0, 30), rng)
        g = UniPoly.random(F65537, rng.randrange(0, 30), rng)
        h = UniPoly.random(F65537, rng.randrange(0, 30), rng)
        assert (f + g) * h == f * h + g * h


def test_divrem_simple():
    f = UniPoly(F7, [0, 0, 0, 1])  # x^3
    g = UniPoly(F7, [1, 0, 1])  # x^2+1
    q, r = uni_divrem(f, g)
    assert q == UniPoly(F7, [0, 1])
    assert r == UniPoly(F7, [0, 6])


def test_divrem_small_degree():
    f = UniPoly(F7, [1, 2])
    g = UniPoly(F7, [0, 0, 1])
    q, r = uni_divrem(f, g)
    assert q.is_zero and r == f


def test_divrem_recombination_random():
    rng = random.Random(4)
    f = UniPoly.random(F65537, 500, rng)
    g = UniPoly.random(F65537, 200, rng)
    q, r = uni_divrem(f, g)
    assert q * g + r == f
    assert r.deg < g.deg


def test_divrem_by_zero():
    with pytest.raises(ZeroDivisionError):
        uni_divrem(UniPoly(F7, [1]), UniPoly.zero(F7))


def test_divrem_extension_field():
    L = build_quadratic_extension(F7)
    rng = random.Random(5)
    f = UniPoly.random(L, 90, rng)
    g = UniPoly.random(L, 35, rng)
    q, r = uni_divrem(f, g)
    assert q * g + r == f
    assert r.deg < g.deg


def test_zero_degree_is_minus_infinity():
    z = UniPoly.zero(F7)
    assert z.deg == NEG_INF
    assert z.deg < -10**9


def test_mpe_simple():
    f = UniPoly(F7, [1, 0, 1])  # x^2+1
    pts = [F7.elem(0), F7.elem(1), F7.elem(2)]
    assert uni_mpe(f, pts) == [F7.elem(1), F7.elem(2), F7.elem(5)]


def test_mpe_constant():
    f = UniPoly(F7, [4])
    assert uni_mpe(f, [F7.elem(i) for i in range(5)]) == [F7.elem(4)] * 5


def test_mpe_matches_horner_large():
    rng = random.Random(6)
    f = UniPoly.random(F65537, 300, rng)
    pts = [F65537.elem(rng.randrange(65537)) for _ in range(256)]
    got = uni_mpe(f, pts)
    assert got == [f(a) for a in pts]


def test_interp_simple():
    pts = [
        (F7.elem(0), F7.elem(1)),
        (F7.elem(1), F7.elem(2)),
        (F7.elem(2), F7.elem(5)),
    ]
    assert uni_interp(pts) == UniPoly(F7, [1, 0, 1])


def test_interp_single_point():
    assert uni_interp([(F7.elem(3), F7.elem(4))]) == UniPoly(F7, [4])


def test_interp_roundtrip_random():
    rng = random.Random(7)
    xs = random.Random(8).sample(range(65537), 128)
    pts = [(F65537.elem(x), F65537.elem(rng.randrange(65537))) for x in xs]
    u = uni_interp(pts)
    assert u.deg < 128
    assert uni_mpe(u, [x for x, _ in pts]) == [y for _, y in pts]


def test_interp_rejects_repeats():
    with pytest.raises(DistinctnessError):
        uni_interp([(F7.elem(1), F7.elem(2)), (F7.elem(1), F7.elem(3))])


def test_interp_of_mpe_identity():
    rng = random.Random(9)
    xs = random.Random(10).sample(range(65537), 50)
    f = UniPoly.random(F65537, 49, rng)
    ys = uni_mpe(f, [F65537.elem(x) for x in xs])
    assert uni_interp(list(zip([F65537.elem(x) for x in xs], ys))) == f


def test_taylor_shift_simple():
    h = UniPoly(F7, [0, 0, 1])  # z^2
    out = taylor_shift(h, F7.one(), F7.one())
    assert out == UniPoly(F7, [1, 2, 1])


def test_taylor_shift_identity():
    rng = random.Random(11)
    h = UniPoly.random(F7, 20, rng)
    assert taylor_shift(h, F7.one(), F7.zero()) == h


def test_taylor_shift_matches_substitution():
    rng = random.Random(12)
    h = UniPoly.random(F65537, 200, rng)
    a = F65537.elem(rng.randrange(1, 65537))
    b = F65537.elem(rng.randrange(65537))
    got = taylor_shift(h, a, b)
    # substitution oracle: Horner in (a z + b)
    az_b = UniPoly(F65537, [b, a])
    want = UniPoly.zero(F65537)
    for c in reversed(h.coeffs):
        want = want * az_b + UniPoly(F65537, [c])
    assert got == want


def test_taylor_shift_small_characteristic():
    # p = 3 <= deg h: factorial-based shifts would divide by zero here
    F3 = FieldCtx(3)
    rng = random.Random(13)
    h = UniPoly.random(F3, 40, rng)
    b = F3.elem(2)
    shifted = taylor_shift(h, F3.one(), b)
    back = taylor_shift(shifted, F3.one(), -b)
    assert back == h


def test_taylor_shift_inverse_property():
    rng = random.Random(14)
    h = UniPoly.random(F65537, 75, rng)
    b = F65537.elem(rng.randrange(65537))
    assert taylor_shift(taylor_shift(h, F65537.one(), b), F65537.one(), -b) == h


def test_subproduct_tree_root():
    pts = [F7.elem(i) for i in (1, 2, 3)]
    tree = SubproductTree(F7, pts)
    want = UniPoly(F7, [1, 1]) * UniPoly(F7, [1])  # placeholder to build ctx
    prod = UniPoly.one(F7)
    for a in pts:
        prod = prod * UniPoly(F7, [-a, F7.one()])
    assert tree.root == prod


def test_line_serialization_roundtrip():
    rng = random.Random(15)
    for _ in range(10):
        f = UniPoly.random(F65537, rng.randrange(-1, 10), rng)
        assert UniPoly.from_line(F65537, f.to_line()) == f
    L = build_quadratic_extension(F7)
    g = UniPoly(L, [L.elem(1, 2), L.elem(0, 3)])
    assert UniPoly.from_line(L, g.to_line()) == g
    assert UniPoly.from_line(F7, "-1").is_zero


def test_pow_mod():
    rng = random.Random(16)
    M = UniPoly.random(F65537, 40, rng).monic()
    A = UniPoly.random(F65537, 39, rng)
    e = 13
    want = UniPoly.one(F65537)
    for _ in range(e):
        want = (want * A).rem(M)
    assert A.pow_mod(e, M) == want
