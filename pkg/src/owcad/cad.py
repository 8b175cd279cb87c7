"""Open weak CAD construction and open sample-point computation.

The projection side produces, per level, lists of squarefree factors whose
common zeros carve out the decomposition; the lifting side walks levels
from the base line upward, substituting each partial sample point and
choosing one rational per open interval of the fiber polynomial (avoiding
the zeros of a guard polynomial where the algorithms require it).

Sample coordinates are exact rationals throughout and every run is
deterministic for a fixed ambient order.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import NamedTuple, Optional, Sequence

from .polyring import (
    Context,
    MPoly,
    PolyError,
    Var,
    exact_div,
    fiber_coeffs,
    normalize,
    refine_pieces,
)
from .projection import (
    ProjectionCache,
    WellDefinednessBreach,
    _factor_key,
    _product,
    factor_list,
    brown_factors,
    gcd_projection_branch_factors,
    gcd_projection_factors,
)
from .realroot import interval_samples


class SamplePoint(NamedTuple):
    """An exact rational point; its level is the number of coordinates."""

    coords: tuple

    @property
    def level(self) -> int:
        return len(self.coords)

    def append(self, value: Fraction) -> "SamplePoint":
        return SamplePoint(self.coords + (value,))

    def as_strings(self) -> list:
        return [_rat_str(c) for c in self.coords]


def _rat_str(q: Fraction) -> str:
    return "%d/%d" % (q.numerator, q.denominator) if q.denominator != 1 else str(q.numerator)


class DegenerateFiber(PolyError):
    """A lifted polynomial vanished identically at a base point."""

    def __init__(self, point: SamplePoint, level: int, factor: Optional[MPoly], role: str):
        self.point = point
        self.level = level
        self.factor = factor
        self.role = role
        super().__init__(
            "fiber polynomial vanished identically at level %d over %s"
            % (level, tuple(str(c) for c in point.coords))
        )


@dataclass
class LiftLevel:
    """One lifting step: choose the coordinate ``var`` using the roots of the
    ``poly`` factors while avoiding zeros of the ``guard`` factors."""

    var: Var
    poly: list
    guard: list = field(default_factory=list)


@dataclass
class ProjectionSet:
    """Leveled lifting data: levels[k] drives the choice of coordinate k."""

    ctx: Context
    levels: dict

    def plan(self, base_level: int, top: int) -> list:
        out = []
        for k in range(base_level + 1, top + 1):
            lv = self.levels.get(k)
            if lv is None:
                lv = LiftLevel(self.ctx.var(k), [], [])
            out.append(lv)
        return out


@dataclass
class OwcadOutput:
    """Projection polynomials of an open weak CAD.

    ``h`` lists one polynomial per level 1..n-1 whose nonvanishing regions
    are the decomposition; ``branch_factors[j]`` maps each branch variable t
    to the (factored) chain polynomial for that elimination branch.  The
    real zeros of h[j] coincide with the common real zeros of that level's
    branch polynomials.
    """

    order: tuple
    h: list
    branch_factors: list


# ---------------------------------------------------------------------------
# lifting engine
# ---------------------------------------------------------------------------


def _fiber_product(factors: Sequence[MPoly], point: SamplePoint, v: Var):
    """Integer coefficient list of prod(factors)(point, x_v); None if zero."""
    acc = [1]
    for p in factors:
        c = fiber_coeffs(p, point.coords, v)
        if not c:
            return None, p
        acc = _umul(acc, c)
    return acc, None


def _umul(a: list, b: list) -> list:
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                if y:
                    out[i + j] += x * y
    return out


def lift_open_sample(plan: Sequence[LiftLevel], base: Sequence[SamplePoint]) -> tuple:
    """Lift base points through the plan levels, one rational per fiber
    interval, avoiding guard zeros.  Returns (points, counts per level).

    Raises DegenerateFiber when a fiber polynomial vanishes identically at
    some point (callers may re-run with an extra guard, see
    :func:`_lift_with_retries`).
    """
    points = list(base)
    counts = [len(points)]
    for lv in plan:
        nxt = []
        for alpha in points:
            fc, bad = _fiber_product(lv.poly, alpha, lv.var)
            if fc is None:
                raise DegenerateFiber(alpha, lv.var.index, bad, "poly")
            gc, badg = _fiber_product(lv.guard, alpha, lv.var)
            if gc is None:
                raise DegenerateFiber(alpha, lv.var.index, badg, "guard")
            for b in interval_samples(fc, gc):
                nxt.append(alpha.append(b))
        points = nxt
        counts.append(len(points))
    return points, counts


def _avoid_poly(factor: MPoly, v: Var) -> MPoly:
    """A nonzero polynomial below level v vanishing on every base point whose
    fiber of ``factor`` is identically zero."""
    for c in factor.coeffs_in(v):
        if not c.is_zero():
            return normalize(c)
    raise PolyError("zero factor in lifting plan")


def _lift_with_retries(
    ctx: Context,
    plan: Sequence[LiftLevel],
    base_fn,
    base_level: int,
    allow_base_retry: bool = True,
) -> tuple:
    """Run the lifting, adding guards below any degenerate fiber and
    restarting.  Degeneracies are measure-zero coincidences; each retry
    excludes the finitely many offending rationals."""
    extra: dict = {}
    for _ in range(64):
        run_plan = []
        for lv in plan:
            g = lv.guard + extra.get(lv.var.index, [])
            run_plan.append(LiftLevel(lv.var, lv.poly, g))
        try:
            base = base_fn(extra.get(base_level, []))
            return lift_open_sample(run_plan, base)
        except DegenerateFiber as e:
            lower = e.level - 1
            if lower < base_level or (lower == base_level and not allow_base_retry):
                raise
            q = _avoid_poly(e.factor, ctx.var(e.level))
            bucket = extra.setdefault(lower, [])
            if q in bucket:
                raise  # the same guard failed to clear it; give up
            bucket.append(q)
    raise PolyError("lifting failed to stabilize after retries")


# ---------------------------------------------------------------------------
# open weak CAD (projection polynomials)
# ---------------------------------------------------------------------------


def open_weak_cad(f: MPoly, cache: Optional[ProjectionCache] = None) -> OwcadOutput:
    """Projection polynomials h_1..h_{n-1} of an open weak CAD of f.

    h_j is the squarefree part of the sum of squares of the level-j branch
    polynomials (all elimination orders of the top n-j variables); the
    structured per-branch factor lists are returned alongside.
    """
    n = f.level()
    if n < 2:
        raise PolyError("open weak CAD needs level >= 2")
    if cache is None:
        cache = ProjectionCache()
    ctx = f.ctx
    hs = []
    branch_all = []
    for j in range(1, n):
        ys = [ctx.var(t) for t in range(j + 1, n + 1)]
        branches = {}
        for t in range(j + 1, n + 1):
            branches[t] = gcd_projection_branch_factors(f, ys, ctx.var(t), cache)
        g_factors = gcd_projection_factors(f, ys, cache)
        g_prod = _product(ctx, g_factors)
        square_sum = MPoly.zero(ctx)
        for t, bf in branches.items():
            u = exact_div(_product(ctx, bf), g_prod)
            square_sum = square_sum + u * u
        pieces = [(p, "h", 1) for p in g_factors]
        if not square_sum.is_constant():
            pieces.append((square_sum, "h", 1))
        basis = refine_pieces(pieces)
        h = MPoly.const(ctx, 1)
        for p, _ in sorted(basis, key=lambda it: _factor_key(it[0])):
            h = h * p
        hs.append(normalize(h))
        branch_all.append({t: list(bf) for t, bf in branches.items()})
    return OwcadOutput(ctx.names, hs, branch_all)


# ---------------------------------------------------------------------------
# open CAD
# ---------------------------------------------------------------------------


def _dedup_push(bucket: dict, factors: Sequence[MPoly]) -> None:
    if not factors:
        return
    lev = max(p.level() for p in factors)
    key = tuple(sorted(tuple(_factor_key(p)) for p in factors))
    slot = bucket.setdefault(lev, {})
    slot.setdefault(key, list(factors))


def _bucket_levels(ctx: Context, bucket: dict, top: int) -> dict:
    levels = {}
    for k in range(1, top + 1):
        slot = bucket.get(k)
        if slot:
            fl = []
            for fs in slot.values():
                fl.extend(fs)
            levels[k] = fl
    return levels


def open_cad(f: MPoly) -> tuple:
    """Open CAD sample points of f: iterated Brown projection, then one
    rational sample per open interval at every level.

    Returns (points, counts) with counts[k] the point total after level k+1.
    """
    if f.is_zero():
        raise PolyError("open CAD of the zero polynomial")
    n = f.level()
    ctx = f.ctx
    if n == 0:
        return [SamplePoint(())], [1]
    chain = {}  # level -> element factor lists (bucketed by actual level)
    cur = factor_list(f)
    _dedup_push(chain, cur)
    for i in range(n, 1, -1):
        cur = brown_factors(cur, ctx.var(i))
        if not cur:
            break
        _dedup_push(chain, cur)
    levels = {}
    for k in range(2, n + 1):
        fl = []
        for fs in (chain.get(k) or {}).values():
            fl.extend(fs)
        if fl:
            levels[k] = LiftLevel(ctx.var(k), fl, [])
    base_factors = []
    for fs in (chain.get(1) or {}).values():
        base_factors.extend(fs)
    plan = ProjectionSet(ctx, levels).plan(1, n)

    def base_fn(extra_guards):
        fprod = _product_coeffs(base_factors)
        gprod = _product_coeffs(list(extra_guards))
        return [SamplePoint((b,)) for b in interval_samples(fprod, gprod)]

    return _lift_with_retries(ctx, plan, base_fn, 1)


def _product_coeffs(factors: Sequence[MPoly]) -> list:
    if not factors:
        return [1]
    acc = [1]
    for p in factors:
        pres = p.variables_present()
        if not pres:
            continue
        acc = _umul(acc, [c.const_value() for c in p.coeffs_in(pres[0])])
    return acc if acc else [1]


# ---------------------------------------------------------------------------
# reduced open CAD
# ---------------------------------------------------------------------------


def reduced_open_cad(
    f: MPoly,
    j: int,
    base: Optional[Sequence] = None,
    extra_final_guards: Sequence[MPoly] = (),
    cache: Optional[ProjectionCache] = None,
) -> tuple:
    """Sample points in R^n from the order-insensitive projection chain.

    Levels j+1..n-1 lift against the chain value for the variables above,
    guarded by that subset's own branch polynomial; the top level lifts
    against f itself.  For j = 1 the base is computed by the same rule;
    otherwise it must be supplied (rationals or SamplePoints in R^j).
    ``extra_final_guards`` are polynomials (level <= n-1 after substitution
    irrelevant) whose zeros the returned points must additionally avoid at
    the pre-top level, used by the positivity decision procedure.

    Returns (points, counts).
    """
    n = f.level()
    ctx = f.ctx
    if not 1 <= j < n:
        raise PolyError("reduced open CAD needs 1 <= j < level(f)")
    if cache is None:
        cache = ProjectionCache()
    levels = {}
    for k in range(j + 1, n):
        ys = [ctx.var(t) for t in range(k + 1, n + 1)]
        value = gcd_projection_factors(f, ys, cache)
        guard = gcd_projection_branch_factors(f, ys, ctx.var(k + 1), cache)
        levels[k] = LiftLevel(ctx.var(k), value, guard)
    top_guard = [p for p in extra_final_guards if not p.is_constant()]
    levels[n] = LiftLevel(ctx.var(n), factor_list(f), top_guard)
    plan = ProjectionSet(ctx, levels).plan(j, n)

    if base is None:
        if j != 1:
            raise PolyError("base sample required for j > 1")
        ys = [ctx.var(t) for t in range(2, n + 1)]
        value = gcd_projection_factors(f, ys, cache)
        guard = gcd_projection_branch_factors(f, ys, ctx.var(2), cache)

        def base_fn(extra_guards):
            fprod = _product_coeffs(value)
            gprod = _product_coeffs(list(guard) + list(extra_guards))
            return [SamplePoint((b,)) for b in interval_samples(fprod, gprod)]

        return _lift_with_retries(ctx, plan, base_fn, j)

    base_pts = []
    for p in base:
        if isinstance(p, SamplePoint):
            base_pts.append(p)
        elif isinstance(p, tuple):
            base_pts.append(SamplePoint(tuple(Fraction(c) for c in p)))
        else:
            base_pts.append(SamplePoint((Fraction(p),)))
    for p in base_pts:
        if p.level != j:
            raise PolyError("base point level mismatch")

    def base_fn(extra_guards):
        return base_pts

    return _lift_with_retries(ctx, plan, base_fn, j, allow_base_retry=False)


# ---------------------------------------------------------------------------
# paired-order sampling (two variables per projection block)
# ---------------------------------------------------------------------------


def hptwo_sample(f: MPoly) -> tuple:
    """Open sample of f != 0 built by pairing elimination levels.

    Blocks of two variables are projected with the order-insensitive
    operator (both orders, gcd), the block value becomes the next working
    polynomial, and the collected level data drives one lifting pass from
    the base line.  Returns (points, counts).
    """
    if f.is_zero():
        raise PolyError("open sample of the zero polynomial")
    ctx = f.ctx
    n = f.level()
    if n == 0:
        return [SamplePoint(())], [1]
    if n == 1:
        pts = [SamplePoint((b,)) for b in interval_samples(f, 1, ctx.var(1))]
        return pts, [len(pts)]
    L1: dict = {}
    L2: dict = {}
    g_factors = factor_list(f)
    i = n
    while i >= 3:
        cache = ProjectionCache()
        g = _product(ctx, g_factors)
        vi, vim1 = ctx.var(i), ctx.var(i - 1)
        _dedup_push(L1, g_factors)
        _dedup_push(L2, g_factors)
        top = gcd_projection_factors(g, [vi], cache)
        _dedup_push(L1, top)
        _dedup_push(L2, gcd_projection_branch_factors(g, [vi], vi, cache))
        pair = gcd_projection_factors(g, [vi, vim1], cache)
        _dedup_push(L1, pair)
        _dedup_push(L2, gcd_projection_branch_factors(g, [vi, vim1], vim1, cache))
        g_factors = pair
        i -= 2
    if i == 2:
        cache = ProjectionCache()
        g = _product(ctx, g_factors)
        v2 = ctx.var(2)
        _dedup_push(L1, g_factors)
        _dedup_push(L2, g_factors)
        top = gcd_projection_factors(g, [v2], cache)
        _dedup_push(L1, top)
        _dedup_push(L2, gcd_projection_branch_factors(g, [v2], v2, cache))
        g_factors = top
    lv1 = _bucket_levels(ctx, L1, n)
    lv2 = _bucket_levels(ctx, L2, n)
    levels = {}
    for k in range(2, n + 1):
        levels[k] = LiftLevel(ctx.var(k), lv1.get(k, []), lv2.get(k, []))
    plan = ProjectionSet(ctx, levels).plan(1, n)

    def base_fn(extra_guards):
        fprod = _product_coeffs(lv1.get(1, []))
        gprod = _product_coeffs(lv2.get(1, []) + list(extra_guards))
        return [SamplePoint((b,)) for b in interval_samples(fprod, gprod)]

    return _lift_with_retries(ctx, plan, base_fn, 1)
