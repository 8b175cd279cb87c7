import random
from fractions import Fraction

import pytest

from owcad.polyring import Context, PolyError
from owcad.realroot import (
    count_real_roots,
    interval_samples,
    interval_samples_positive,
    isolate,
)
from oracles import sturm_count


def test_isolate_sqrt2():
    il = isolate([-2, 0, 1])
    assert len(il) == 2
    lo, hi = il.roots
    assert lo.cmp(Fraction(-1)) < 0 and lo.cmp(Fraction(-2)) > 0
    assert hi.cmp(Fraction(1)) > 0 and hi.cmp(Fraction(2)) < 0


def test_isolate_no_real_roots():
    assert len(isolate([1, 0, 1])) == 0


def test_isolate_multiplicity_collapses():
    # (x-1)^2 (x+3): two distinct roots despite the square
    il = isolate([3, -5, 1, 1])
    assert len(il) == 2
    a, b = il.roots
    assert a.cmp(Fraction(-3)) == 0 or (a.lo < -3 < a.hi)
    assert b.cmp(Fraction(1)) == 0 or (b.lo < 1 < b.hi)


def test_count_real_roots():
    assert count_real_roots([0, -1, 0, 1]) == 3  # x^3 - x
    assert count_real_roots([1, 0, 0, 0, 1]) == 0  # x^4 + 1
    assert count_real_roots([-9, 7, 16]) == 2  # (16x - 9)(x + 1)


def test_count_against_sturm_oracle():
    rng = random.Random(4242)
    for _ in range(60):
        deg = rng.randint(1, 12)
        coeffs = [rng.randint(-30, 30) for _ in range(deg + 1)]
        if not any(coeffs[1:]):
            continue
        while coeffs and coeffs[-1] == 0:
            coeffs.pop()
        if len(coeffs) <= 1:
            continue
        assert count_real_roots(coeffs) == sturm_count(coeffs)


def test_interval_samples_structure():
    pts = interval_samples([-1, 0, 1])  # x^2 - 1
    assert len(pts) == 3
    assert pts[0] < -1 < pts[1] < 1 < pts[2]
    assert pts == [Fraction(-2), Fraction(0), Fraction(2)]


def test_interval_samples_avoids_guard():
    pts = interval_samples([-1, 0, 1], [0, 1])  # avoid x = 0
    assert len(pts) == 3
    assert all(p != 0 for p in pts)
    assert -1 < pts[1] < 1


def test_interval_samples_constant_f():
    assert interval_samples([5], [-1, 1]) == [Fraction(0)]
    # degenerate f: whole line, but avoid the root of g
    assert interval_samples([5], [0, 1]) == [Fraction(1)]
    with pytest.raises(PolyError):
        interval_samples([0, 0], [1])
    with pytest.raises(PolyError):
        interval_samples([1], [0])


def test_interval_samples_soundness_random():
    rng = random.Random(31337)
    for _ in range(40):
        deg = rng.randint(1, 8)
        f = [rng.randint(-20, 20) for _ in range(deg + 1)]
        g = [rng.randint(-20, 20) for _ in range(rng.randint(1, 4))]
        if not any(f) or not any(g):
            continue
        while f and f[-1] == 0:
            f.pop()
        while g and g[-1] == 0:
            g.pop()
        if not f or not g:
            continue
        pts = interval_samples(f, g)
        # soundness: f and g nonzero at every point
        for p in pts:
            assert _ueval(f, p) != 0
            assert _ueval(g, p) != 0
        # completeness: one point per open interval
        expected = (count_real_roots(f) + 1) if len(f) > 1 else 1
        assert len(pts) == expected


def _ueval(coeffs, x):
    acc = Fraction(0)
    for c in reversed(coeffs):
        acc = acc * x + c
    return acc


def test_determinism():
    f = [6, -5, -2, 1]
    g = [3, 1]
    assert interval_samples(f, g) == interval_samples(f, g)


def test_shared_root_guard():
    # g = f: sample points always avoid f's own zeros
    f = [-1, 0, 1]
    pts = interval_samples(f, f)
    assert len(pts) == 3
    assert all(_ueval(f, p) != 0 for p in pts)


def test_positive_axis_samples():
    # x^4 - 5x^2 + 4 has positive roots 1, 2
    pts = interval_samples_positive([4, 0, -5, 0, 1])
    assert len(pts) == 3
    assert 0 < pts[0] < 1 < pts[1] < 2 < pts[2]
    # no positive roots: single positive sample
    assert interval_samples_positive([1, 0, 1]) == [Fraction(1)]


def test_simplest_rational_rule():
    # 29x^2 - 4x - 24: roots near -0.844 and 0.981; canonical picks
    pts = interval_samples([-24, -4, 29])
    assert pts == [Fraction(-2), Fraction(0), Fraction(2)]


def test_mpoly_input():
    ctx = Context(["t"])
    (t,) = ctx.gens()
    assert count_real_roots(t**2 - 2) == 2
    assert interval_samples(t**2 - 1, 1) == [Fraction(-2), Fraction(0), Fraction(2)]
