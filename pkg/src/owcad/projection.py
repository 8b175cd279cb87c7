"""CAD projection operators.

Three operators, all returning primitive, positive-lead, squarefree
polynomials (only zero sets matter for lifting, and squarefree parts keep
degrees down):

* ``brown``: resultant of the squarefree part with its derivative — the
  classical leading-coefficient/discriminant/resultant projection.
* ``gcd_projection``: the gcd of Brown-projection chains taken over every
  elimination order of a variable set; order-insensitive by construction
  and a divisor of every single-order chain.
* ``parity_projection``: the multiplicity-parity refinement whose secondary
  part collects the odd-multiplicity pieces of leading coefficient and
  discriminant, and whose principal part is the product of the remaining
  even-multiplicity pieces.

Internally every projection value is carried as a list of pairwise-coprime
squarefree factors rather than an expanded product: resultants split along
factors (and along even-variable structure), so all gcd and squarefree work
happens on small pieces.  Chain values over variable subsets are memoized in
a :class:`ProjectionCache` keyed by unordered subset (the gcd over branches
depends only on the set).
"""

from __future__ import annotations

from typing import Iterable, Optional, Sequence

from .polyring import (
    MPoly,
    PolyError,
    Var,
    exact_div,
    gcd,
    normalize,
    refine_pieces,
    res_pieces,
    resultant,
    selfres_pieces,
    sqf_decompose,
    squarefree_part,
)


class WellDefinednessBreach(PolyError):
    """A projection collapsed to the zero polynomial for some variable subset."""

    def __init__(self, subset, detail=""):
        self.subset = tuple(sorted(v.index for v in subset))
        msg = "projection vanished identically for subset %s" % (self.subset,)
        if detail:
            msg += " (%s)" % detail
        super().__init__(msg)


def proj_normalize(p: MPoly) -> MPoly:
    """Primitive, positive leading coefficient, squarefree part."""
    if p.is_zero() or p.is_constant():
        return normalize(p)
    return normalize(squarefree_part(p))


def _product(ctx, factors: Iterable[MPoly]) -> MPoly:
    acc = MPoly.const(ctx, 1)
    for p in factors:
        acc = acc * p
    return normalize(acc)


def _factor_key(p: MPoly):
    return sorted(p.terms.items())


def factor_list(f: MPoly) -> list:
    """Pairwise-coprime squarefree factors whose product is sqrfree(f)."""
    if f.is_constant():
        return []
    return [p for p, _ in sqf_decompose(f).factors]


def brown_factors(factors: Sequence[MPoly], v: Var) -> list:
    """Brown projection of a squarefree product given by its factor list.

    The factors must be pairwise coprime and squarefree; the result is the
    gcd-free factor list of Bp(prod factors, v).  Resultants are computed
    piecewise: per-factor self-resultants, pairwise resultants, and v-free
    factors passed through.
    """
    vdep = []
    pieces = []
    for p in factors:
        if p.degree(v) > 0:
            vdep.append(p)
        else:
            pieces.append((p, "z", 1))
    for p in vdep:
        for q, m in selfres_pieces(p, v):
            if q.is_zero():
                raise WellDefinednessBreach([v], "self-resultant vanished")
            pieces.append((q, "z", m))
    for i in range(len(vdep)):
        for j in range(i + 1, len(vdep)):
            for q, m in res_pieces(vdep[i], vdep[j], v):
                if q.is_zero():
                    raise WellDefinednessBreach([v], "pairwise resultant vanished")
                pieces.append((q, "z", m))
    basis = refine_pieces(pieces)
    out = [p for p, _ in basis]
    out.sort(key=_factor_key)
    return out


def brown(f: MPoly, v: Var) -> MPoly:
    """Brown projection of f eliminating v.

    Res(sqrfree(f), d sqrfree(f)/dv, v) when deg(f, v) > 0, normalized to
    its primitive positive-lead squarefree part; f unchanged when f does not
    involve v.
    """
    if f.is_zero():
        raise PolyError("brown projection of the zero polynomial")
    if f.degree(v) <= 0:
        return f
    return _product(f.ctx, brown_factors(factor_list(f), v))


def brown_set(polys: Iterable[MPoly], v: Var) -> list:
    """Brown projection of a set: self-projections plus pairwise resultants
    of squarefree parts; members free of v pass through."""
    polys = list(polys)
    if not polys:
        raise PolyError("brown projection of an empty set")
    out = []
    active = []
    for f in polys:
        if f.is_zero():
            raise PolyError("brown projection of the zero polynomial")
        if f.degree(v) <= 0:
            _push(out, f)
        else:
            active.append(squarefree_part(f))
            _push(out, brown(f, v))
    for i in range(len(active)):
        for j in range(i + 1, len(active)):
            r = resultant(active[i], active[j], v)
            if r.is_zero():
                raise WellDefinednessBreach(
                    [v], "pairwise resultant vanished (shared factor)"
                )
            _push(out, proj_normalize(r))
    return out


def _push(out: list, p: MPoly) -> None:
    if p not in out:
        out.append(p)


def _gcd_factor_lists(A: Sequence[MPoly], B: Sequence[MPoly]) -> list:
    """Factor list of gcd(prod A, prod B) for gcd-free squarefree lists."""
    out = []
    rest = [b for b in B if not b.is_constant()]
    for a in A:
        for i, b in enumerate(rest):
            if a.is_constant():
                break
            g = gcd(a, b)
            if g.is_constant():
                continue
            out.append(g)
            a = normalize(exact_div(a, g))
            rest[i] = normalize(exact_div(b, g))
    out.sort(key=_factor_key)
    return out


class ProjectionCache:
    """Memo for chain projections of one polynomial.

    Keys are unordered variable-index subsets; values are gcd-free factor
    lists of the subset projection and of its per-branch polynomials.
    Entries are deterministic functions of the key, so concurrent duplicate
    computation is benign.
    """

    __slots__ = ("value", "branch")

    def __init__(self):
        self.value = {}
        self.branch = {}

    def dump(self) -> str:
        lines = []
        for key in sorted(self.value, key=lambda s: (len(s), sorted(s))):
            prod = " * ".join(str(p) for p in self.value[key]) or "1"
            lines.append("%s: %s" % (sorted(key), prod))
        return "\n".join(lines)


def _as_indices(ys: Sequence[Var]) -> tuple:
    idx = tuple(v.index for v in ys)
    if len(set(idx)) != len(idx):
        raise PolyError("duplicate variables in elimination list")
    return idx


# ---------------------------------------------------------------------------
# gcd-across-orders chain
# ---------------------------------------------------------------------------


def _gp_base(f: MPoly, cache: ProjectionCache) -> list:
    key = frozenset()
    hit = cache.value.get(key)
    if hit is None:
        hit = factor_list(f)
        cache.value[key] = hit
    return hit


def _gp_branch(f: MPoly, subset: frozenset, yi: Var, cache: ProjectionCache) -> list:
    key = (subset, yi.index)
    hit = cache.branch.get(key)
    if hit is not None:
        return hit
    rest = subset - {yi.index}
    inner = _gp_value(f, rest, cache)
    val = brown_factors(inner, yi)
    cache.branch[key] = val
    return val


def _gp_value(f: MPoly, subset: frozenset, cache: ProjectionCache) -> list:
    if not subset:
        return _gp_base(f, cache)
    hit = cache.value.get(subset)
    if hit is not None:
        return hit
    val = None
    for i in sorted(subset):
        b = _gp_branch(f, subset, f.ctx.var(i), cache)
        val = b if val is None else _gcd_factor_lists(val, b)
        if not val:
            break
    cache.value[subset] = val
    return val


def gcd_projection_branch(
    f: MPoly, ys: Sequence[Var], yi: Var, cache: Optional[ProjectionCache] = None
) -> MPoly:
    """Branch polynomial: Brown projection by yi of the subset projection of
    the remaining variables."""
    if yi.index not in _as_indices(ys):
        raise PolyError("branch variable %s not in the elimination list" % yi.name)
    if f.is_zero():
        raise PolyError("projection of the zero polynomial")
    if cache is None:
        cache = ProjectionCache()
    return _product(f.ctx, _gp_branch(f, frozenset(v.index for v in ys), yi, cache))


def gcd_projection(
    f: MPoly, ys: Sequence[Var], cache: Optional[ProjectionCache] = None
) -> MPoly:
    """Gcd of the branch projections over all elimination orders of ys.

    Divides every branch exactly; invariant under permutations of ys;
    gcd_projection(f, []) is f itself.
    """
    if f.is_zero():
        raise PolyError("projection of the zero polynomial")
    _as_indices(ys)
    if not ys:
        return f
    if cache is None:
        cache = ProjectionCache()
    return _product(f.ctx, _gp_value(f, frozenset(v.index for v in ys), cache))


def gcd_projection_factors(
    f: MPoly, ys: Sequence[Var], cache: Optional[ProjectionCache] = None
) -> list:
    """Factor list of gcd_projection (the primary internal representation)."""
    if cache is None:
        cache = ProjectionCache()
    if not ys:
        return _gp_base(f, cache)
    return list(_gp_value(f, frozenset(v.index for v in ys), cache))


def gcd_projection_branch_factors(
    f: MPoly, ys: Sequence[Var], yi: Var, cache: Optional[ProjectionCache] = None
) -> list:
    if cache is None:
        cache = ProjectionCache()
    return list(_gp_branch(f, frozenset(v.index for v in ys), yi, cache))


# ---------------------------------------------------------------------------
# parity-split operator
# ---------------------------------------------------------------------------


def parity_parts(f: MPoly, v: Var) -> tuple:
    """Secondary and principal parts of the parity projection by v.

    Returns (secondary, principal): ``secondary`` lists the coprime
    squarefree components of lc(f, v) and discrim(f, v) carrying odd
    multiplicity in either; ``principal`` is the product of the remaining
    even-multiplicity components.  Components are refined to a gcd-free
    basis, so membership matches factorwise semantics.  The discriminant's
    factor multiset is assembled from structured resultant pieces (never by
    expanding and re-factoring the full discriminant).
    """
    sec, pri = _parity_parts_factors(f, v)
    return sec, _product(f.ctx, pri)


def _parity_parts_factors(f: MPoly, v: Var) -> tuple:
    if f.is_zero():
        raise PolyError("parity projection of the zero polynomial")
    d = f.degree(v)
    if d <= 0:
        raise PolyError("parity projection needs positive degree in %s" % v.name)
    items = []
    lcf = f.lc(v)
    if not lcf.is_constant():
        items.append((lcf, "lc", 1))
    if d >= 2:
        for q, m in selfres_pieces(f, v):
            if q.is_zero():
                raise WellDefinednessBreach([v], "vanishing discriminant")
            if not q.is_constant():
                items.append((q, "res", m))
    basis = refine_pieces(items)
    secondary = []
    principal = []
    for p, tags in basis:
        lcm = tags.get("lc", 0)
        discm = tags.get("res", 0) - lcm  # Res(f, f', v) = lc * discrim up to sign
        if (lcm % 2 == 1) or (discm > 0 and discm % 2 == 1):
            secondary.append(p)
        elif lcm > 0 or discm > 0:
            principal.append(p)
    secondary.sort(key=_factor_key)
    principal.sort(key=_factor_key)
    return secondary, principal


def parity_parts_set(polys: Sequence[MPoly], v: Var) -> tuple:
    """Set version: the union of the members' secondary parts, and one
    principal product per member excluding anything odd for any member."""
    per = [_parity_parts_factors(g, v) for g in polys]
    sec_items = []
    for sec, _ in per:
        for p in sec:
            sec_items.append((p, "odd", 1))
    secondary = [p for p, _ in refine_pieces(sec_items)]
    secondary.sort(key=_factor_key)
    principals = []
    for g, (_, pri) in zip(polys, per):
        keep = MPoly.const(g.ctx, 1)
        for p in pri:
            rest = p
            for s in secondary:
                if rest.is_constant():
                    break
                shared = gcd(rest, s)
                if not shared.is_constant():
                    rest = normalize(exact_div(rest, shared))
            if not rest.is_constant():
                keep = keep * rest
        principals.append(normalize(keep))
    return secondary, principals


def _pp_branch(f: MPoly, subset: frozenset, yi: Var, cache: ProjectionCache) -> list:
    key = (subset, yi.index)
    hit = cache.branch.get(key)
    if hit is not None:
        return hit
    if len(subset) == 1:
        secondary, _ = _parity_parts_factors(f, yi)
        val = sorted(secondary, key=_factor_key)
    else:
        rest = subset - {yi.index}
        val = brown_factors(_pp_value(f, rest, cache), yi)
    cache.branch[key] = val
    return val


def _pp_value(f: MPoly, subset: frozenset, cache: ProjectionCache) -> list:
    hit = cache.value.get(subset)
    if hit is not None:
        return hit
    if len(subset) == 1:
        v = f.ctx.var(next(iter(subset)))
        _, val = _parity_parts_factors(f, v)
    else:
        val = None
        for i in sorted(subset):
            b = _pp_branch(f, subset, f.ctx.var(i), cache)
            val = b if val is None else _gcd_factor_lists(val, b)
            if not val:
                break
    cache.value[subset] = val
    return val


def parity_projection_branch(
    f: MPoly, ys: Sequence[Var], yi: Var, cache: Optional[ProjectionCache] = None
) -> MPoly:
    """Branch of the parity projection chain.

    For a single variable this is the product of the secondary part; deeper
    levels Brown-project the subset value by yi.
    """
    idx = _as_indices(ys)
    if yi.index not in idx:
        raise PolyError("branch variable %s not in the elimination list" % yi.name)
    if f.is_zero():
        raise PolyError("projection of the zero polynomial")
    if cache is None:
        cache = ProjectionCache()
    return _product(f.ctx, _pp_branch(f, frozenset(idx), yi, cache))


def parity_projection(
    f: MPoly, ys: Sequence[Var], cache: Optional[ProjectionCache] = None
) -> MPoly:
    """Parity projection of a variable set: base case is the principal part,
    deeper levels take the gcd of Brown-projected branches."""
    if f.is_zero():
        raise PolyError("projection of the zero polynomial")
    idx = _as_indices(ys)
    if not idx:
        return f
    if cache is None:
        cache = ProjectionCache()
    return _product(f.ctx, _pp_value(f, frozenset(idx), cache))


def parity_projection_factors(
    f: MPoly, ys: Sequence[Var], cache: Optional[ProjectionCache] = None
) -> list:
    if cache is None:
        cache = ProjectionCache()
    return list(_pp_value(f, frozenset(v.index for v in ys), cache))


def parity_projection_branch_factors(
    f: MPoly, ys: Sequence[Var], yi: Var, cache: Optional[ProjectionCache] = None
) -> list:
    if cache is None:
        cache = ProjectionCache()
    return list(_pp_branch(f, frozenset(v.index for v in ys), yi, cache))
