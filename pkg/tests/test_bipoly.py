import random

import pytest

from bishape.bipoly import BiPoly, bi_eval, bi_mul, rem_gb, shear_poly, y_split
from bishape.errors import PreconditionError
from bishape.ff import FieldCtx, build_quadratic_extension
from bishape.upoly import UniPoly

F7 = FieldCtx(7)
F65537 = FieldCtx(65537)


def bp(ctx, rows):
    return BiPoly(ctx, [UniPoly(ctx, r) for r in rows])


def schoolbook_bi(f: BiPoly, g: BiPoly) -> BiPoly:
    if f.is_zero or g.is_zero:
        return BiPoly.zero(f.ctx)
    rows = [UniPoly.zero(f.ctx) for _ in range(int(f.deg_y + g.deg_y) + 1)]
    for i, a in enumerate(f.ycoeffs):
        for j, b in enumerate(g.ycoeffs):
            rows[i + j] = rows[i + j] + a * b
    return BiPoly(f.ctx, rows)


def test_bi_mul_simple():
    # (y+x)(y+6x) = y^2 + 6x^2
    f = bp(F7, [[0, 1], [1]])
    g = bp(F7, [[0, 6], [1]])
    assert bi_mul(f, g) == bp(F7, [[0, 0, 6], [], [1]])


def test_bi_mul_identity():
    rng = random.Random(0)
    f = BiPoly.random(F7, 4, 3, rng)
    assert bi_mul(f, BiPoly.one(F7)) == f


def test_bi_mul_matches_schoolbook():
    rng = random.Random(1)
    f = BiPoly.random(F65537, 20, 20, rng)
    g = BiPoly.random(F65537, 20, 20, rng)
    assert bi_mul(f, g) == schoolbook_bi(f, g)


def test_bi_mul_extension():
    L = build_quadratic_extension(F7)
    rng = random.Random(2)
    f = BiPoly.random(L, 5, 4, rng)
    g = BiPoly.random(L, 6, 3, rng)
    assert bi_mul(f, g) == schoolbook_bi(f, g)


def test_y_split_simple():
    # f = x*y^2 + y + 1, eta=2 -> (x, y+1)
    f = bp(F7, [[1], [1], [0, 1]])
    hi, lo = y_split(f, 2)
    assert hi == bp(F7, [[0, 1]])
    assert lo == bp(F7, [[1], [1]])


def test_y_split_above_degree():
    f = bp(F7, [[1], [1]])
    hi, lo = y_split(f, 5)
    assert hi.is_zero and lo == f


def test_y_split_monomial():
    f = BiPoly.y_power(F7, 3)
    hi, lo = y_split(f, 1)
    assert hi == BiPoly.y_power(F7, 2) and lo.is_zero


def test_y_split_recombination_random():
    rng = random.Random(3)
    for _ in range(20):
        f = BiPoly.random(F65537, 8, 6, rng)
        eta = rng.randrange(0, 9)
        hi, lo = y_split(f, eta)
        assert hi.shift_y(eta) + lo == f
        assert lo.deg_y < eta


def test_shear_simple():
    # f = x*y with (a,b)=(1,2): (x+2y)y = x*y + 2y^2
    f = bp(F7, [[], [0, 1]])
    out = shear_poly(f, F7.one(), F7.elem(2))
    assert out == bp(F7, [[], [0, 1], [2]])


def test_shear_identity():
    rng = random.Random(4)
    f = BiPoly.random(F7, 5, 5, rng)
    assert shear_poly(f, F7.one(), F7.zero()) == f


def test_shear_extension_theta():
    L = build_quadratic_extension(F7)  # t^2 = 3
    f = bp(L, [[0, 0, 1]])  # x^2
    theta = L.theta()
    out = shear_poly(f, L.one(), -theta)
    # (x - t y)^2 = x^2 - 2t xy + 3 y^2
    want = BiPoly(
        L,
        [
            UniPoly(L, [L.zero(), L.zero(), L.one()]),
            UniPoly(L, [L.zero(), L.elem(0, -2)]),
            UniPoly(L, [L.elem(3)]),
        ],
    )
    assert out == want


def test_shear_degree_bounds_and_inverse():
    rng = random.Random(5)
    for _ in range(10):
        f = BiPoly.random(F65537, 6, 5, rng)
        b = F65537.elem(rng.randrange(65537))
        sheared = shear_poly(f, F65537.one(), b)
        assert sheared.deg_x <= f.deg_x
        assert sheared.deg_y <= f.deg_x + f.deg_y
        assert shear_poly(sheared, F65537.one(), -b) == f


def test_shear_eval_commutation():
    rng = random.Random(6)
    for _ in range(20):
        f = BiPoly.random(F7, 4, 4, rng)
        b = F7.elem(rng.randrange(7))
        x0, y0 = F7.elem(rng.randrange(7)), F7.elem(rng.randrange(7))
        lhs = bi_eval(shear_poly(f, F7.one(), b), x0, y0)
        rhs = bi_eval(f, x0 + b * y0, y0)
        assert lhs == rhs


def test_bi_eval_simple():
    f = bp(F7, [[0, 1], [1]])  # x + y
    assert bi_eval(f, F7.elem(1), F7.elem(2)) == F7.elem(3)
    assert bi_eval(BiPoly.zero(F7), F7.elem(3), F7.elem(4)) == F7.zero()
    fxy2 = bp(F7, [[], [], [0, 1]])  # x*y^2
    assert bi_eval(fxy2, F7.elem(2), F7.elem(3)) == F7.elem(4)


def test_rem_gb_point_ideal():
    # G = vanishing basis of {(0,0),(1,1)}: {x^2+6x, y+6x}
    G = [bp(F7, [[0, 6, 1]]), bp(F7, [[0, 6], [1]])]
    f = bp(F7, [[], [], [1]])  # y^2
    r = rem_gb(f, G)
    assert r == bp(F7, [[0, 1]])  # x
    # r - f vanishes wherever G does
    for (a, b) in [(0, 0), (1, 1)]:
        assert bi_eval(r, F7.elem(a), F7.elem(b)) == bi_eval(f, F7.elem(a), F7.elem(b))


def test_rem_gb_already_reduced():
    G = [bp(F7, [[0, 6, 1]]), bp(F7, [[0, 6], [1]])]
    f = bp(F7, [[3, 1]])  # x + 3, deg_x < 2, deg_y 0
    assert rem_gb(f, G) == f


def test_rem_gb_second_example():
    # G = {x, y^2+6y}: y^3 -> y
    G = [bp(F7, [[0, 1]]), bp(F7, [[], [6], [1]])]
    f = BiPoly.y_power(F7, 3)
    r = rem_gb(f, G)
    assert r == bp(F7, [[], [1]])
    for (a, b) in [(0, 0), (0, 1)]:
        assert bi_eval(r, F7.elem(a), F7.elem(b)) == bi_eval(f, F7.elem(a), F7.elem(b))


def test_rem_gb_idempotent_random():
    rng = random.Random(7)
    G = [bp(F7, [[0, 6, 1]]), bp(F7, [[0, 6], [1]])]
    for _ in range(25):
        f = BiPoly.random(F7, 5, 4, rng)
        r = rem_gb(f, G)
        assert rem_gb(r, G) == r
        # membership: difference vanishes on the point set
        for (a, b) in [(0, 0), (1, 1)]:
            assert bi_eval(r, F7.elem(a), F7.elem(b)) == bi_eval(f, F7.elem(a), F7.elem(b))


def test_rem_gb_rejects_bad_shape():
    with pytest.raises(PreconditionError):
        rem_gb(bp(F7, [[1]]), [bp(F7, [[1], [1]])])  # no univariate element
    with pytest.raises(PreconditionError):
        rem_gb(bp(F7, [[1]]), [bp(F7, [[0, 1]]), bp(F7, [[1]])])  # not increasing


def test_transpose_involution():
    rng = random.Random(8)
    f = BiPoly.random(F7, 5, 3, rng)
    assert f.transpose().transpose() == f
    assert bi_eval(f.transpose(), F7.elem(2), F7.elem(5)) == bi_eval(f, F7.elem(5), F7.elem(2))


def test_block_serialization_roundtrip():
    rng = random.Random(9)
    f = BiPoly.random(F7, 4, 3, rng)
    lines = f.to_block().splitlines()
    g, pos = BiPoly.from_lines(F7, lines)
    assert g == f and pos == len(lines)
    z, _ = BiPoly.from_lines(F7, BiPoly.zero(F7).to_block().splitlines())
    assert z.is_zero
