"""Exact real root isolation and rational sample-point selection.

Univariate polynomials are handled as dense integer coefficient lists
(index = exponent).  Isolation runs Descartes'-rule bisection on the
primitive squarefree part; every returned root is either an exact rational
or an open interval with rational non-root endpoints containing exactly one
real root.  Sample points between roots are chosen canonically: the simplest
rational (minimal denominator, then minimal absolute numerator) strictly
inside the interval, found by a Stern-Brocot walk driven by exact sign
tests.  All results are deterministic.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Callable, Optional, Sequence

from .polyring import MPoly, PolyError, Var

Rat = Fraction


# ---------------------------------------------------------------------------
# dense integer univariate helpers
# ---------------------------------------------------------------------------


def _utrim(p: list) -> list:
    while p and p[-1] == 0:
        p.pop()
    return p


def _uderiv(p: Sequence[int]) -> list:
    return [i * c for i, c in enumerate(p)][1:]


def _ucontent(p: Sequence[int]) -> int:
    g = 0
    for c in p:
        g = math.gcd(g, c)
        if g == 1:
            break
    return g


def _uprimitive(p: Sequence[int]) -> list:
    g = _ucontent(p)
    if g <= 1:
        return list(p)
    return [c // g for c in p]


def _uprem(a: list, b: list) -> list:
    """Pseudo-remainder lc(b)^(da-db+1) * a mod b."""
    da, db = len(a) - 1, len(b) - 1
    lb = b[-1]
    r = list(a)
    for i in range(da - db, -1, -1):
        top = r[i + db]
        r = [lb * c for c in r]
        if top:
            for j in range(db):
                r[i + j] -= top * b[j]
        r = r[: i + db]
    return _utrim(r)


def _ugcd(a: Sequence[int], b: Sequence[int]) -> list:
    """Primitive gcd of integer univariate polynomials, positive lead.

    Modular images with CRT lifting and exact-division verification; small
    inputs fall back to the primitive PRS directly.
    """
    p, q = _uprimitive(_utrim(list(a))), _uprimitive(_utrim(list(b)))
    if not p:
        p, q = q, p
    if not q:
        if not p:
            raise PolyError("gcd(0, 0) is undefined")
        return p if p[-1] > 0 else [-c for c in p]
    if len(p) < len(q):
        p, q = q, p
    if len(q) == 1:
        return [1]
    g = _ugcd_modular(p, q)
    if g is not None:
        return g
    return _ugcd_prs(p, q)


def _ugcd_prs(p: list, q: list) -> list:
    while q:
        r = _uprimitive(_uprem(p, q))
        p, q = q, r
    return p if p[-1] > 0 else [-c for c in p]


def _ugcd_modular(a: list, b: list) -> Optional[list]:
    from .polyring import _GCD_PRIMES, _dense_gcd_modp

    gamma = math.gcd(a[-1], b[-1])
    acc = None  # (balanced coeffs, modulus, degree, stable)
    tried = 0
    for p in _GCD_PRIMES:
        if gamma % p == 0:
            continue
        ap = [c % p for c in a]
        bp = [c % p for c in b]
        gp = _dense_gcd_modp(ap, bp, p)
        if len(gp) == 1:
            return [1]
        tried += 1
        if tried > 20:
            return None
        d = len(gp) - 1
        gp = [c * gamma % p for c in gp]
        if acc is not None and d != acc[2]:
            if d < acc[2]:
                acc = None
            else:
                continue
        if acc is None:
            sym = [c if c <= p // 2 else c - p for c in gp]
            acc = (sym, p, d, 0)
        else:
            coeffs, mod, _, stable = acc
            newmod = mod * p
            inv = pow(mod % p, p - 2, p)
            merged = []
            changed = False
            for c1, c2 in zip(coeffs, gp):
                c = c1 + mod * ((c2 - c1) % p * inv % p)
                if c > newmod // 2:
                    c -= newmod
                merged.append(c)
                if c != c1:
                    changed = True
            acc = (merged, newmod, d, 0 if changed else stable + 1)
        if acc[3] >= 1:
            cand = _uprimitive(list(acc[0]))
            if cand and cand[-1] != 0:
                try:
                    _uexact_div(a, cand)
                    _uexact_div(b, cand)
                    return cand if cand[-1] > 0 else [-c for c in cand]
                except PolyError:
                    pass
    return None


def _uexact_div(a: Sequence[int], b: Sequence[int]) -> list:
    da, db = len(a) - 1, len(b) - 1
    out = [0] * (da - db + 1)
    r = list(a)
    for i in range(da - db, -1, -1):
        c, rem = divmod(r[i + db], b[-1])
        if rem:
            raise PolyError("inexact univariate division")
        out[i] = c
        if c:
            for j in range(db + 1):
                r[i + j] -= c * b[j]
    if any(r):
        raise PolyError("inexact univariate division")
    return out


def _usqfree(p: Sequence[int]) -> list:
    """Primitive squarefree part, positive leading coefficient."""
    p = _uprimitive(_utrim(list(p)))
    if len(p) <= 1:
        return p
    g = _ugcd(p, _uderiv(p))
    if len(g) > 1:
        p = _uprimitive(_uexact_div(p, g))
    return p if p[-1] > 0 else [-c for c in p]


def _ueval(p: Sequence[int], x: Fraction) -> Fraction:
    acc = Fraction(0)
    for c in reversed(p):
        acc = acc * x + c
    return acc


def _ushift1(p: list) -> list:
    """Taylor shift p(x+1)."""
    q = list(p)
    n = len(q)
    for i in range(n - 1):
        for j in range(n - 2, i - 1, -1):
            q[j] += q[j + 1]
    return q


def _usignvar(p: Sequence[int]) -> int:
    count = 0
    last = 0
    for c in p:
        if c:
            s = 1 if c > 0 else -1
            if last and s != last:
                count += 1
            last = s
    return count


def _descartes_01(p: Sequence[int]) -> int:
    """Upper bound on the number of roots of p in the open interval (0, 1)."""
    return _usignvar(_ushift1(list(reversed(p))))


# ---------------------------------------------------------------------------
# isolated roots
# ---------------------------------------------------------------------------


class IsolatedRoot:
    """One real root: exact rational, or a shrinking open interval around it.

    Interval endpoints are rationals that are not roots of the (squarefree)
    subject polynomial; refinement bisects and may collapse to an exact
    rational.  Comparisons against rationals are exact.
    """

    __slots__ = ("exact", "lo", "hi", "_poly")

    def __init__(self, exact=None, lo=None, hi=None, poly=None):
        self.exact = exact
        if exact is not None:
            self.lo = self.hi = exact
        else:
            self.lo, self.hi = lo, hi
        self._poly = poly

    def is_exact(self) -> bool:
        return self.exact is not None

    def _set_exact(self, v: Fraction) -> None:
        self.exact = v
        self.lo = self.hi = v

    def refine(self) -> None:
        if self.exact is not None:
            return
        mid = (self.lo + self.hi) / 2
        v = _ueval(self._poly, mid)
        if v == 0:
            self._set_exact(mid)
        elif _ueval(self._poly, self.lo) * v < 0:
            self.hi = mid
        else:
            self.lo = mid

    def cmp(self, r) -> int:
        """-1, 0, 1 as the root is below, equal to, or above the rational r."""
        r = Fraction(r)
        if self.exact is not None:
            return -1 if self.exact < r else (1 if self.exact > r else 0)
        while True:
            if r <= self.lo:
                return 1
            if r >= self.hi:
                return -1
            if _ueval(self._poly, r) == 0:
                self._set_exact(r)
                return 0
            if _ueval(self._poly, self.lo) * _ueval(self._poly, r) < 0:
                self.hi = r
            else:
                self.lo = r

    def floor(self) -> int:
        if self.exact is not None:
            return math.floor(self.exact)
        while True:
            fl, fh = math.floor(self.lo), math.floor(self.hi)
            if fl == fh:
                return fl
            n = fl + 1
            if n >= self.hi:
                return fl  # root in (lo, hi) subset of (fl, n]
            c = self.cmp(Fraction(n))
            if c == 0:
                return n
            if self.exact is not None:
                return math.floor(self.exact)

    def ceil(self) -> int:
        if self.exact is not None:
            return math.ceil(self.exact)
        while True:
            cl, ch = math.ceil(self.lo), math.ceil(self.hi)
            if cl == ch:
                return cl
            n = ch - 1
            if n <= self.lo:
                return ch
            c = self.cmp(Fraction(n))
            if c == 0:
                return n
            if self.exact is not None:
                return math.ceil(self.exact)

    def __repr__(self):
        if self.exact is not None:
            return "IsolatedRoot(%s)" % self.exact
        return "IsolatedRoot(%s, %s)" % (self.lo, self.hi)


class IsolationList:
    """Sorted, disjoint isolated real roots of one univariate polynomial."""

    __slots__ = ("roots", "sqfree")

    def __init__(self, roots, sqfree):
        self.roots = list(roots)
        self.sqfree = sqfree

    def __len__(self):
        return len(self.roots)

    def __iter__(self):
        return iter(self.roots)


def _coeffs_of(f, var: Optional[Var] = None) -> list:
    """Accept an MPoly with at most one variable present, or a coeff list."""
    if isinstance(f, MPoly):
        pres = f.variables_present()
        if len(pres) > 1:
            raise PolyError("polynomial is not univariate")
        if not pres:
            return [f.const_value()] if not f.is_zero() else []
        return [c.const_value() for c in f.coeffs_in(pres[0])]
    if isinstance(f, int):
        return [f] if f else []
    out = []
    for c in f:
        if isinstance(c, Fraction):
            if c.denominator != 1:
                raise PolyError("coefficients must be integers")
            c = c.numerator
        out.append(int(c))
    return _utrim(out)


def _isolate_run(work: list, collect: list) -> Optional[Fraction]:
    """Descartes bisection on squarefree work; appends (lo, hi) pairs.

    Returns a rational root if one is hit at a bisection point or found as a
    linear factor root; the caller deflates and retries.
    """
    d = len(work) - 1
    if d <= 0:
        return None
    if work[0] == 0:
        return Fraction(0)
    if d == 1:
        return Fraction(-work[0], work[1])
    b = 1 << (1 + (1 + max(abs(c) for c in work[:-1]) // abs(work[-1])).bit_length())
    # map (-b, b) onto (0, 1): q(x) = work(-b + 2bx)
    q = list(work)
    n = len(q)
    for i in range(n - 1):
        for j in range(n - 2, i - 1, -1):
            q[j] += -b * q[j + 1]
    s = 1
    for i in range(n):
        q[i] *= s
        s *= 2 * b
    stack = [(q, Fraction(-b), Fraction(b))]
    while stack:
        node, lo, hi = stack.pop()
        var = _descartes_01(node)
        if var == 0:
            continue
        if var == 1:
            collect.append((lo, hi))
            continue
        mid = (lo + hi) / 2
        if _ueval(work, mid) == 0:
            return mid
        dd = len(node) - 1
        left = [c << (dd - i) for i, c in enumerate(node)]
        right = _ushift1(left)
        stack.append((right, mid, hi))
        stack.append((left, lo, mid))
    return None


def isolate(f, var: Optional[Var] = None) -> IsolationList:
    """Isolate the distinct real roots of a nonzero univariate polynomial."""
    p = _coeffs_of(f, var)
    if not p:
        raise PolyError("cannot isolate roots of the zero polynomial")
    work = _usqfree(p)
    exact: list = []
    while True:
        collect: list = []
        hit = _isolate_run(work, collect)
        if hit is None:
            break
        exact.append(hit)
        work = _uprimitive(_uexact_div(work, [-hit.numerator, hit.denominator]))
    roots = [IsolatedRoot(exact=e) for e in exact]
    for lo, hi in collect:
        r = IsolatedRoot(lo=lo, hi=hi, poly=work)
        for e in exact:
            if r.exact is None and r.lo < e < r.hi:
                r.cmp(e)  # splits the interval away from the known root
        roots.append(r)
    roots.sort(key=lambda r: r.exact if r.exact is not None else r.lo)
    return IsolationList(roots, work)


def count_real_roots(f, var: Optional[Var] = None) -> int:
    """Number of distinct real roots."""
    return len(isolate(f, var))


# ---------------------------------------------------------------------------
# simplest-rational selection
# ---------------------------------------------------------------------------


def _max_steps(pred: Callable) -> int:
    """Largest k with pred(k) true, given pred(1) true and pred eventually false."""
    k = 1
    while pred(2 * k):
        k *= 2
    lo, hi = k, 2 * k
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if pred(mid):
            lo = mid
        else:
            hi = mid
    return lo


def _simplest_in_unit(gt_left: Callable, lt_right: Callable, a: int) -> Fraction:
    """Simplest rational in an open subinterval of (a, a+1): Stern-Brocot walk."""
    ln, ld = a, 1
    rn, rd = a + 1, 1
    while True:
        m = Fraction(ln + rn, ld + rd)
        if not gt_left(m):
            k = _max_steps(lambda t: not gt_left(Fraction(ln + t * rn, ld + t * rd)))
            ln, ld = ln + k * rn, ld + k * rd
        elif not lt_right(m):
            k = _max_steps(lambda t: not lt_right(Fraction(rn + t * ln, rd + t * ld)))
            rn, rd = rn + k * ln, rd + k * ld
        else:
            return m


def simplest_between(left: IsolatedRoot, right: IsolatedRoot) -> Fraction:
    """Simplest rational strictly between two isolated roots (left < right):
    minimal denominator, then minimal absolute numerator."""
    n_min = left.floor() + 1
    n_max = right.ceil() - 1
    if n_min <= n_max:
        if n_min <= 0 <= n_max:
            return Fraction(0)
        return Fraction(n_min) if n_min > 0 else Fraction(n_max)
    return _simplest_in_unit(
        lambda r: left.cmp(r) < 0, lambda r: right.cmp(r) > 0, left.floor()
    )


def _exact_root(value) -> IsolatedRoot:
    return IsolatedRoot(exact=Fraction(value))


# ---------------------------------------------------------------------------
# open sample of one univariate polynomial
# ---------------------------------------------------------------------------


def interval_samples(f, g=1, var: Optional[Var] = None) -> list:
    """One rational point in each open interval cut out by the real roots of
    f, with g nonzero at every returned point.

    A constant nonzero f means the whole line is one interval.  Unbounded
    intervals are sampled at floor(leftmost root) - 1 and ceil(rightmost
    root) + 1 (stepping further out if g vanishes there).  Deterministic.
    """
    fc = _coeffs_of(f, var)
    gc = _coeffs_of(g, var)
    if not fc:
        raise PolyError("interval_samples: f is identically zero")
    if not gc:
        raise PolyError("interval_samples: g is identically zero")

    def g_ok(r: Fraction) -> bool:
        return _ueval(gc, r) != 0

    roots = isolate(fc).roots
    if not roots:
        return [_avoiding_int(Fraction(0), +1, g_ok)]
    pts = [_avoiding_int(Fraction(roots[0].floor() - 1), -1, g_ok)]
    gcut = None
    for i in range(len(roots) - 1):
        cand = simplest_between(roots[i], roots[i + 1])
        if g_ok(cand):
            pts.append(cand)
            continue
        if gcut is None:
            gcut = _g_roots_for_cutting(fc, gc)
        pts.append(_sample_avoiding(roots[i], roots[i + 1], gcut, g_ok))
    pts.append(_avoiding_int(Fraction(roots[-1].ceil() + 1), +1, g_ok))
    return pts


def _avoiding_int(start: Fraction, step: int, g_ok: Callable) -> Fraction:
    x = start
    while not g_ok(x):
        x += step
    return x


def _g_roots_for_cutting(fc: list, gc: list) -> list:
    """Roots of g that are provably distinct from every root of f.

    Shared roots (roots of gcd) can never lie strictly between consecutive
    f-roots, so dropping them keeps the cut analysis terminating.
    """
    gs = _usqfree(gc)
    fs = _usqfree(fc)
    if len(fs) > 1 and len(gs) > 1:
        common = _ugcd(fs, gs)
        if len(common) > 1:
            gs = _uprimitive(_uexact_div(gs, common))
    if len(gs) <= 1:
        return []
    return isolate(gs).roots


def _sample_avoiding(left, right, gcut, g_ok) -> Fraction:
    """Simplest rational between two f-roots avoiding g-zeros: cut the
    interval at the g-roots strictly inside it and take the best sub-interval
    sample (minimal denominator, then minimal absolute numerator)."""
    inside = [r for r in gcut if _strictly_inside(r, left, right)]
    bounds = [left] + inside + [right]
    best = None
    for i in range(len(bounds) - 1):
        c = simplest_between(bounds[i], bounds[i + 1])
        if not g_ok(c):
            continue  # endpoint uncertainty can still admit a g-root hit
        key = (c.denominator, abs(c.numerator), c)
        if best is None or key < best[0]:
            best = (key, c)
    if best is None:
        raise PolyError("no sample point avoiding g found")
    return best[1]


def _strictly_inside(r: IsolatedRoot, left: IsolatedRoot, right: IsolatedRoot) -> bool:
    """Whether root r lies strictly between left and right.

    r is guaranteed distinct from both (shared roots were divided out), so
    refinement always separates them.
    """
    while True:
        if r.is_exact():
            return left.cmp(r.exact) < 0 and right.cmp(r.exact) > 0
        if left.cmp(r.lo) <= 0 and right.cmp(r.hi) >= 0:
            return True
        if left.cmp(r.hi) >= 0:
            return False  # r < r.hi <= left root
        if right.cmp(r.lo) <= 0:
            return False  # r > r.lo >= right root
        r.refine()


def interval_samples_positive(f, var: Optional[Var] = None) -> list:
    """One rational point per open interval of the positive axis cut by the
    positive roots of f: (0, r1), (r1, r2), ..., (rm, +inf)."""
    fc = _coeffs_of(f, var)
    if not fc:
        raise PolyError("interval_samples_positive: f is identically zero")
    roots = [r for r in isolate(fc).roots if r.cmp(Fraction(0)) > 0]
    if not roots:
        return [Fraction(1)]
    bounds = [_exact_root(0)] + roots
    pts = [
        simplest_between(bounds[i], bounds[i + 1]) for i in range(len(bounds) - 1)
    ]
    pts.append(Fraction(roots[-1].ceil() + 1))
    return pts
