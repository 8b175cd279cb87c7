import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from owcad.polyring import (
    Context,
    MPoly,
    PolyError,
    arith,
    derivative,
    discriminant,
    evaluate,
    exact_div,
    format_poly,
    gcd,
    lc,
    level,
    normalize,
    resultant,
    sqf_decompose,
    squarefree_part,
)
from oracles import sylvester_resultant


@pytest.fixture
def c3():
    return Context(["x1", "x2", "x3"])


def test_arith_basics(c3):
    x1, x2, x3 = c3.gens()
    assert arith(x1 + 1, x1 - 1, "mul") == x1**2 - 1
    f = 3 * x1 * x2 - x3
    assert arith(f, MPoly.zero(c3), "add") == f
    assert (x1 + x2) ** 2 == x1**2 + 2 * x1 * x2 + x2**2


def test_level(c3):
    x1, x2, x3 = c3.gens()
    assert level(x1**2 * x3 + x2) == 3
    assert level(MPoly.const(c3, 7)) == 0
    assert level(x2**4 - 1) == 2


def test_lc_and_derivative():
    ctx = Context(["a", "b", "c", "x"])
    a, b, c, x = ctx.gens()
    vx = ctx.var("x")
    f = a * x**4 + b * x**2 + c
    assert lc(f, vx) == a
    assert derivative(x**3, vx) == 3 * x**2
    g = b**2 - 4 * c
    assert lc(g, vx) == g  # degree 0 in x: the polynomial itself


def test_gcd_shared_factor(c3):
    x1, x2, _ = c3.gens()
    assert gcd((x1**2 - 1) * (x1 + 2), (x1**2 - 1) * (x1 - 5)) == x1**2 - 1
    assert gcd(x1 + 1, x1 - 1) == 1
    with pytest.raises(PolyError):
        gcd(MPoly.zero(c3), MPoly.zero(c3))


def test_gcd_of_order_projections_golden(c3):
    # the common factor of the two order-projection branches
    x1, x2, x3 = c3.gens()
    shared = (x1 - 1) * (x1 + 1) * (29 * x1**2 - 4 * x1 - 24)
    b1 = shared * (13 * x1**2 - 4 * x1 - 8)
    b2 = shared * (20 * x1**2 - 4 * x1 - 15)
    assert gcd(b1, b2) == normalize(shared)


def test_resultant_values():
    c1 = Context(["x"])
    (x,) = c1.gens()
    vx = c1.var("x")
    assert resultant(x**2 - 2, x**2 - 3, vx) == 1
    c2 = Context(["x", "y"])
    x, y = c2.gens()
    assert resultant(x - y, x + y, c2.var("x")) == 2 * y


def test_resultant_symbolic_quartic_identity():
    # Res(F, dF/dx, x) for the parametrized even quartic splits into the
    # constant-part factor times a perfect square
    ctx = Context(["a", "b", "c", "d", "e", "f", "x", "y"])
    a, b, c, d, e, f, x, y = ctx.gens()
    F = a * x**4 + b * x**2 * y**2 + c * y**4 + d * x**2 + e * y**2 + f
    F1 = a * (4 * a * c * y**4 + 4 * a * e * y**2 + 4 * a * f
              - b**2 * y**4 - 2 * b * y**2 * d - d**2)
    res = resultant(F, F.derivative(ctx.var("x")), ctx.var("x"))
    assert res == 16 * (c * y**4 + e * y**2 + f) * F1**2


def test_resultant_matches_sylvester_oracle_corpus():
    ctx = Context(["x", "y", "z"])
    vx = ctx.var("x")
    rng = random.Random(20240601)
    checked = 0
    while checked < 200:
        a = _random_poly(ctx, rng, deg=3, terms=4)
        b = _random_poly(ctx, rng, deg=3, terms=4)
        if a.is_zero() or b.is_zero():
            continue
        if a.degree(vx) <= 0 and b.degree(vx) <= 0:
            continue
        assert resultant(a, b, vx) == sylvester_resultant(a, b, vx)
        checked += 1


def _random_poly(ctx, rng, deg, terms):
    items = []
    for _ in range(terms):
        exps = tuple(rng.randint(0, deg) for _ in range(ctx.nvars))
        if sum(exps) > 2 * deg:
            continue
        items.append((exps, rng.randint(-9, 9)))
    return MPoly.from_terms(ctx, items)


def test_discriminant_golden():
    c2 = Context(["x1", "x2"])
    x1, x2 = c2.gens()
    f = x1 - x2**4 + 10 * x2**3 - 35 * x2**2 + 50 * x2 - 24
    d = discriminant(f, c2.var("x2"))
    assert d == -16 * (16 * x1 - 9) * (x1 + 1) ** 2


def test_discriminant_quadratics():
    ctx = Context(["a", "b", "c", "x"])
    a, b, c, x = ctx.gens()
    assert discriminant(a * x**2 + b * x + c, ctx.var("x")) == b**2 - 4 * a * c
    c1 = Context(["x"])
    (x,) = c1.gens()
    assert discriminant(x**2 - 2, c1.var("x")) == 8
    with pytest.raises(PolyError):
        discriminant(x + 1, c1.var("x"))


def test_discriminant_consistency_with_resultant():
    ctx = Context(["x", "y"])
    x, y = ctx.gens()
    vx = ctx.var("x")
    rng = random.Random(7)
    for _ in range(25):
        f = _random_poly(ctx, rng, deg=4, terms=5)
        if f.degree(vx) < 2:
            continue
        r = resultant(f, f.derivative(vx), vx)
        d = discriminant(f, vx)
        lead = f.lc(vx)
        assert lead * d == r or lead * d == -r


def test_sqf_decompose_parity():
    c2 = Context(["x1", "x2"])
    x1, x2 = c2.gens()
    h = (x1 + 1) ** 3 * (x1 - 1) ** 2
    dec = sqf_decompose(h)
    assert dec.odd_part == (normalize(x1 + 1),)
    assert dec.even_part == (normalize(x1 - 1),)
    h2 = x1**2 + 1
    dec2 = sqf_decompose(h2)
    assert dec2.odd_part == (h2,) and dec2.even_part == ()
    disc = -16 * (16 * x1 - 9) * (x1 + 1) ** 2
    dec3 = sqf_decompose(disc)
    assert dec3.unit_sign * dec3.content == -16
    assert dec3.odd_part == (16 * x1 - 9,)
    assert dec3.even_part == (x1 + 1,)
    with pytest.raises(PolyError):
        sqf_decompose(MPoly.zero(c2))


def test_sqf_roundtrip_random():
    ctx = Context(["x", "y", "z"])
    rng = random.Random(99)
    for _ in range(30):
        parts = []
        for _ in range(rng.randint(1, 3)):
            p = _random_poly(ctx, rng, deg=2, terms=3)
            if p.is_zero() or p.is_constant():
                continue
            parts.append((normalize(p), rng.randint(1, 3)))
        if not parts:
            continue
        h = MPoly.const(ctx, rng.choice([-3, -1, 1, 2]))
        for p, m in parts:
            h = h * p**m
        if h.is_zero() or h.is_constant():
            continue
        dec = sqf_decompose(h)
        back = MPoly.const(ctx, dec.unit_sign * dec.content)
        for p, m in dec.factors:
            back = back * p**m
        assert back == h


def test_sqrfree_is_squarefree():
    ctx = Context(["x", "y"])
    x, y = ctx.gens()
    h = (x + y) ** 2 * (x - 1) ** 3 * (y**2 + 1)
    s = squarefree_part(h)
    for v in s.variables_present():
        assert gcd(s, s.derivative(v)).is_constant()


def test_resultant_zero_iff_common_factor():
    ctx = Context(["x", "y"])
    x, y = ctx.gens()
    vx = ctx.var("x")
    shared = x**2 - y
    a = shared * (x + 1)
    b = shared * (x - y + 2)
    assert resultant(a, b, vx).is_zero()
    a2 = (x + y) * (x + 1)
    b2 = (x - y + 3) * (x - 2)
    assert not resultant(a2, b2, vx).is_zero()


def test_evaluate():
    ctx = Context(["x", "y"])
    x, y = ctx.gens()
    f = x**2 + y**2 - 1
    q = evaluate(f, {ctx.var("y"): Fraction(0)})
    assert q.den == 1 and q.num == x**2 - 1
    q2 = evaluate(f, {ctx.var("x"): Fraction(3, 5), ctx.var("y"): Fraction(4, 5)})
    assert q2.is_zero()
    q3 = evaluate(f, {})
    assert q3.num == f and q3.den == 1


@given(st.integers(-50, 50), st.integers(-50, 50), st.integers(-50, 50))
@settings(max_examples=60, deadline=None)
def test_arith_matches_integer_model(av, bv, cv):
    ctx = Context(["x"])
    (x,) = ctx.gens()
    f = av * x**2 + bv * x + cv
    g = cv * x - av
    pt = (Fraction(3, 2),)
    assert (f * g).eval_all(pt) == f.eval_all(pt) * g.eval_all(pt)
    assert (f + g).eval_all(pt) == f.eval_all(pt) + g.eval_all(pt)


def test_exact_div_and_canonical_print():
    ctx = Context(["x", "y"])
    x, y = ctx.gens()
    prod = (x + y) * (x - y)
    assert exact_div(prod, x + y) == x - y
    with pytest.raises(PolyError):
        exact_div(x + 1, x - 1)
    assert format_poly(x**2 - 1) == "x^2 - 1"
    assert format_poly(MPoly.zero(ctx)) == "0"
    assert format_poly(2 * x * y - 3 * y + 1) == "2*x*y - 3*y + 1"
