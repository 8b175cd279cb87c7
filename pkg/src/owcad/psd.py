"""Global nonnegativity decisions for multivariate polynomials.

Two routes share one verdict type:

* ``psd_by_open_cad``: complete and exact for any level — the set f < 0 is
  open, so f is nonnegative everywhere iff it is positive at every point of
  an open sample defined by f.  Doubly exponential, used as the base
  decision (level <= 2) and as the fallback oracle.
* ``psd_hptwo``: the parity-projection recursion.  The secondary parts of
  the top two variables must be semidefinite (either sign); the principal
  pair projection decomposes R^(n-2), and one exact bivariate check per
  sample cell decides the rest.

Verdicts carry exact rational witnesses: a NotPSD answer always includes a
point where the polynomial evaluates to a strictly negative rational.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import count
from typing import Optional, Sequence

from .polyring import (
    Context,
    MPoly,
    PolyError,
    Var,
    evaluate,
    normalize,
    sqf_decompose,
)
from .projection import (
    ProjectionCache,
    WellDefinednessBreach,
    _product,
    factor_list,
    gcd_projection_branch_factors,
    gcd_projection_factors,
    parity_parts,
    parity_projection_branch_factors,
    parity_projection_factors,
)
from . import cad
from .cad import SamplePoint, open_cad


PSD = "PSD"
NOT_PSD = "NotPSD"
NSD = "NSD"
INDEFINITE = "Indefinite"


@dataclass
class PsdVerdict:
    answer: str
    witness: Optional[SamplePoint] = None
    trace: list = field(default_factory=list)

    def is_psd(self) -> bool:
        return self.answer == PSD


def _verdict_psd(trace=None) -> PsdVerdict:
    return PsdVerdict(PSD, None, trace or [])


def _verdict_not(witness: SamplePoint, trace=None) -> PsdVerdict:
    return PsdVerdict(NOT_PSD, witness, trace or [])


def _check_witness(f: MPoly, w: SamplePoint) -> SamplePoint:
    if f.eval_all(w.coords) >= 0:
        raise PolyError("internal error: witness does not evaluate negative")
    return w


def _pad_point(pt: SamplePoint, nvars: int) -> SamplePoint:
    if pt.level < nvars:
        return SamplePoint(pt.coords + (Fraction(0),) * (nvars - pt.level))
    return pt


# ---------------------------------------------------------------------------
# complete decision by open CAD sign checks
# ---------------------------------------------------------------------------


def psd_by_open_cad(f: MPoly) -> PsdVerdict:
    """Exact nonnegativity decision: sign of f at every open CAD sample."""
    if f.is_zero():
        return _verdict_psd()
    if f.is_constant():
        c = f.const_value()
        if c >= 0:
            return _verdict_psd()
        return _verdict_not(SamplePoint((Fraction(0),) * f.ctx.nvars))
    pts, _ = open_cad(f)
    n = f.ctx.nvars
    for pt in pts:
        full = _pad_point(pt, n)
        if f.eval_all(full.coords) < 0:
            return _verdict_not(_check_witness(f, full))
    return _verdict_psd()


def is_psd_base(f: MPoly) -> PsdVerdict:
    """Base decision for polynomials of level <= 2."""
    if f.level() > 2:
        raise PolyError("base decision requires level <= 2")
    return psd_by_open_cad(f)


# ---------------------------------------------------------------------------
# preprocessing
# ---------------------------------------------------------------------------


def odd_multiplicity_part(f: MPoly) -> MPoly:
    """Signed product of the odd-multiplicity squarefree factors of f.

    f is nonnegative everywhere iff this part is: even-multiplicity factors
    never change the sign off a measure-zero set.
    """
    dec = sqf_decompose(f)
    acc = MPoly.const(f.ctx, dec.unit_sign)
    for p in dec.odd_part:
        acc = acc * p
    return acc


def _grid_negative_witness(f: MPoly) -> SamplePoint:
    """Deterministic search for a negative point of a somewhere-negative f."""
    n = f.ctx.nvars
    for radius in count(0):
        for pt in _grid_points(n, radius):
            coords = tuple(Fraction(c) for c in pt)
            if f.eval_all(coords) < 0:
                return SamplePoint(coords)
    raise PolyError("unreachable")


def _grid_points(n: int, radius: int):
    if n == 0:
        yield ()
        return
    vals = list(range(-radius, radius + 1))
    def rec(i):
        if i == n:
            yield ()
            return
        for v in vals:
            for rest in rec(i + 1):
                yield (v,) + rest
    for pt in rec(0):
        if radius == 0 or max(abs(v) for v in pt) == radius:
            yield pt


def _compress(f: MPoly) -> tuple:
    """Rebuild f over a context of only its present variables.

    Returns (g, positions) where positions[i] is the original 0-based slot
    of the i-th compressed variable.
    """
    pres = [v.index - 1 for v in f.variables_present()]
    sub = Context(tuple(f.ctx.names[i] for i in pres))
    terms = {}
    for k, c in f.terms.items():
        exps = f.ctx.unpack(k)
        terms[sub.pack(tuple(exps[i] for i in pres))] = c
    return MPoly(sub, terms), pres


def _decompress_point(pt: SamplePoint, positions: Sequence[int], nvars: int) -> SamplePoint:
    coords = [Fraction(0)] * nvars
    for value, pos in zip(pt.coords, positions):
        coords[pos] = value
    return SamplePoint(tuple(coords))


# ---------------------------------------------------------------------------
# the parity-projection recursion
# ---------------------------------------------------------------------------


def semidefinite(f: MPoly, trace: Optional[list] = None) -> str:
    """PSD, NSD, or Indefinite (changes sign)."""
    if f.is_zero():
        return PSD
    if psd_hptwo(f, _trace=trace).is_psd():
        return PSD
    if psd_hptwo(-f, _trace=trace).is_psd():
        return NSD
    return INDEFINITE


def psd_hptwo(f: MPoly, _trace: Optional[list] = None) -> PsdVerdict:
    """Nonnegativity of f on all of R^n by the parity-projection recursion.

    Falls back to the complete open CAD decision when the projection chain
    degenerates or a secondary-part subproblem is genuinely indefinite (the
    recursion then cannot certify either answer by itself).
    """
    trace = _trace if _trace is not None else []
    if f.is_zero():
        return _verdict_psd(trace)
    if f.is_constant():
        if f.const_value() >= 0:
            return _verdict_psd(trace)
        return _verdict_not(SamplePoint((Fraction(0),) * f.ctx.nvars), trace)
    core = odd_multiplicity_part(f)
    if core.is_constant():
        if core.const_value() > 0:
            return _verdict_psd(trace)
        w = _grid_negative_witness(f)
        return _verdict_not(_check_witness(f, w), trace)
    g, positions = _compress(core)
    verdict = _psd_rec(g, trace)
    if verdict.answer == NOT_PSD:
        w = _decompress_point(verdict.witness, positions, f.ctx.nvars)
        return _verdict_not(_fix_witness(f, core, w), trace)
    return _verdict_psd(trace)


def _fix_witness(f: MPoly, core: MPoly, w: SamplePoint) -> SamplePoint:
    """Adjust a witness of core < 0 to one of f < 0.

    The two differ only where a stripped even-multiplicity factor vanishes
    (measure zero); nudging within the open region core < 0 escapes it.
    """
    if f.eval_all(w.coords) < 0:
        return w
    n = f.ctx.nvars
    eps = Fraction(1, 2)
    for _ in range(512):
        for i in range(n):
            for sign in (1, -1):
                coords = list(w.coords)
                coords[i] += sign * eps
                pt = tuple(coords)
                if core.eval_all(pt) < 0 and f.eval_all(pt) < 0:
                    return SamplePoint(pt)
        eps /= 2
    raise PolyError("could not adjust witness off the even-factor zero set")


def _psd_rec(f: MPoly, trace: list) -> PsdVerdict:
    """f compressed (every context variable present), squarefree, signed."""
    n = f.level()
    ctx = f.ctx
    if n <= 2:
        trace.append({"op": "base", "level": n})
        return is_psd_base(f)
    w = _grid_refutation(f)
    if w is not None:
        trace.append({"op": "grid-refuted"})
        return _verdict_not(w, trace)
    vn, vn1 = ctx.var(n), ctx.var(n - 1)
    try:
        cache = ProjectionCache()
        pair = [vn, vn1]
        l2_factors = parity_projection_factors(f, pair, cache)
        avoid = []
        for yi in pair:
            for p in parity_projection_branch_factors(f, pair, yi, cache):
                if not p.is_constant() and p not in avoid:
                    avoid.append(p)
        points = _pair_base_sample(ctx, n - 2, l2_factors, avoid)
        trace.append({"op": "pair-cells", "count": len(points)})
        for alpha in points:
            res = _bivariate_check(f, alpha, n)
            if res is not None:
                trace.append({"op": "cell-refuted"})
                return _verdict_not(_check_witness(f, res), trace)
        # Certifying nonnegativity additionally needs every secondary part
        # of the top two variables to keep one sign globally.
        sec_n, _ = parity_parts(f, vn)
        sec_n1, _ = parity_parts(f, vn1)
        secondary = []
        for q in sec_n + sec_n1:
            if q not in secondary:
                secondary.append(q)
        for q in secondary:
            sd = _semidefinite_sub(q, trace)
            trace.append({"op": "secondary", "poly": str(q)[:60], "verdict": sd})
            if sd == INDEFINITE:
                trace.append({"op": "fallback", "reason": "indefinite secondary part"})
                return psd_by_open_cad(f)
    except WellDefinednessBreach as e:
        trace.append({"op": "fallback", "reason": str(e)})
        return psd_by_open_cad(f)
    return _verdict_psd(trace)


_GRID_BUDGET = 40000


def _grid_refutation(f: MPoly) -> Optional[SamplePoint]:
    """Cheap exact search for a negative point on a small integer grid."""
    n = f.ctx.nvars
    budget = _GRID_BUDGET
    for radius in (1, 2):
        for pt in _grid_points(n, radius):
            budget -= 1
            if budget <= 0:
                return None
            coords = tuple(Fraction(c) for c in pt)
            if f.eval_all(coords) < 0:
                return SamplePoint(coords)
    return None


def _semidefinite_sub(q: MPoly, trace: list) -> str:
    if q.is_constant():
        return PSD if q.const_value() >= 0 else NSD
    sub = []
    if psd_hptwo(q, _trace=sub).is_psd():
        return PSD
    if psd_hptwo(-q, _trace=sub).is_psd():
        return NSD
    return INDEFINITE


def _pair_base_sample(ctx: Context, dim: int, l2_factors: list, avoid: list) -> list:
    """An open sample of (prod l2_factors) != 0 in R^dim whose points also
    avoid the zeros of every polynomial in ``avoid``."""
    if dim == 0:
        return [SamplePoint(())]
    levels = {}
    guards_by_level = {k: [] for k in range(1, dim + 1)}
    for q in avoid:
        lev = q.level()
        if 1 <= lev <= dim:
            guards_by_level[lev].append(q)
    prod_level = max((p.level() for p in l2_factors), default=0)
    chain_cache = ProjectionCache()
    l2_prod = _product(ctx, l2_factors)
    for k in range(2, dim + 1):
        if k <= prod_level:
            ys = [ctx.var(t) for t in range(k + 1, prod_level + 1)]
            if ys:
                value = gcd_projection_factors(l2_prod, ys, chain_cache)
                guard = gcd_projection_branch_factors(
                    l2_prod, ys, ctx.var(k + 1), chain_cache
                )
            else:
                value = list(l2_factors)
                guard = []
            levels[k] = cad.LiftLevel(ctx.var(k), value, guard + guards_by_level[k])
        else:
            levels[k] = cad.LiftLevel(ctx.var(k), [], guards_by_level[k])
    plan = cad.ProjectionSet(ctx, levels).plan(1, dim)

    def base_fn(extra):
        if prod_level >= 1:
            ys = [ctx.var(t) for t in range(2, prod_level + 1)]
            if ys:
                value = gcd_projection_factors(l2_prod, ys, chain_cache)
                guard = gcd_projection_branch_factors(
                    l2_prod, ys, ctx.var(2), chain_cache
                )
            else:
                value = list(l2_factors)
                guard = []
        else:
            value, guard = [], []
        from .realroot import interval_samples

        fprod = cad._product_coeffs(value)
        gprod = cad._product_coeffs(guard + guards_by_level[1] + list(extra))
        return [SamplePoint((b,)) for b in interval_samples(fprod, gprod)]

    pts, _ = cad._lift_with_retries(ctx, plan, base_fn, 1)
    return pts


def _bivariate_check(f: MPoly, alpha: SamplePoint, n: int) -> Optional[SamplePoint]:
    """Check f(alpha, x_{n-1}, x_n) >= 0 on R^2; a witness point on failure."""
    ctx = f.ctx
    assign = {ctx.var(i + 1): alpha.coords[i] for i in range(n - 2)}
    q = evaluate(f, assign)
    h = q.num  # positive rescaling preserves signs
    if h.is_zero():
        return None
    if h.is_constant():
        if h.const_value() >= 0:
            return None
        return SamplePoint(alpha.coords + (Fraction(0), Fraction(0)))
    hc, positions = _compress(h)
    verdict = psd_by_open_cad(hc)
    if verdict.is_psd():
        return None
    w = _decompress_point(verdict.witness, positions, ctx.nvars)
    return SamplePoint(alpha.coords + (w.coords[n - 2], w.coords[n - 1]))
