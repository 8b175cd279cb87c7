"""Copositivity testing for symmetric integer matrices.

A quadratic polynomial f(x) = (x,1) A (x,1)^T is copositive iff its even
quartic lift F(x) = f(x_1^2, ..., x_n^2) is nonnegative everywhere.  The
test walks the faces x_i = 0 recursively (memoizing known-nonnegative
faces), then samples the positive axes through the determinant cascade of
the bordered matrices P_I, and finally sign-checks F at every sample.  A
negative value is an exact refutation; a clean pass is a copositivity
verdict under the checkable genericity hypotheses, and Inconclusive
otherwise.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence, Union

from .polyring import (
    Context,
    MPoly,
    PolyError,
    Var,
    evaluate,
    exact_div,
    is_even_in,
    is_squarefree,
    normalize,
    sqf_decompose,
)
from .projection import parity_projection
from .realroot import interval_samples_positive


COPOSITIVE = "Copositive"
NOT_COPOSITIVE = "NotCopositive"
INCONCLUSIVE = "Inconclusive"


class GenericityViolation(PolyError):
    """A checkable hypothesis of the determinant identity fails."""

    def __init__(self, flags):
        self.flags = list(flags)
        super().__init__("genericity hypotheses violated: %s" % ", ".join(self.flags))


@dataclass
class QForm:
    """Symmetric integer matrix of a quadratic polynomial.

    ``a`` is (n+1) x (n+1); the last row/column is the affine border (zero
    for a pure form).  f(x) = (x, 1) a (x, 1)^T.
    """

    n: int
    a: tuple

    @staticmethod
    def from_matrix(rows: Sequence[Sequence[int]], n: Optional[int] = None) -> "QForm":
        """Pure n x n form (zero border) or, if n == len(rows) - 1, the full
        (n+1) x (n+1) affine shape."""
        m = len(rows)
        a = tuple(tuple(int(c) for c in row) for row in rows)
        if any(len(r) != m for r in a):
            raise PolyError("matrix is not square")
        if any(a[i][j] != a[j][i] for i in range(m) for j in range(m)):
            raise PolyError("matrix is not symmetric")
        if n is not None and n == m - 1:
            return QForm(m - 1, a)
        if n is not None and n != m:
            raise PolyError("matrix size does not match n")
        bordered = tuple(
            tuple(a[i][j] if i < m and j < m else 0 for j in range(m + 1))
            for i in range(m + 1)
        )
        return QForm(m, bordered)

    def context(self) -> Context:
        return Context(tuple("x%d" % i for i in range(1, self.n + 1)))

    def entry(self, i: int, j: int) -> int:
        return self.a[i - 1][j - 1]


@dataclass
class BorderedMatrix:
    """P_I: the integer block A_I bordered by polynomials so that
    F(x) = (x_I^2, 1) P_I (x_I^2, 1)^T identically."""

    indices: tuple
    block: tuple  # |I| x |I| integers
    border: tuple  # |I| polynomials in the complement variables
    corner: MPoly


@dataclass
class CopositivityVerdict:
    answer: str
    witness: Optional[tuple] = None  # nonnegative rational vector
    genericity_flags: list = field(default_factory=list)
    face_cache: dict = field(default_factory=dict)
    samples_checked: int = 0

    def is_copositive(self) -> bool:
        return self.answer == COPOSITIVE


# ---------------------------------------------------------------------------
# lifts and bordered matrices
# ---------------------------------------------------------------------------


def quartic_lift(q: QForm, ctx: Optional[Context] = None) -> MPoly:
    """F(x) = f(x_1^2, ..., x_n^2): the even quartic whose global
    nonnegativity is equivalent to copositivity of the form."""
    if ctx is None:
        ctx = q.context()
    xs = ctx.gens()[: q.n]
    acc = MPoly.const(ctx, q.entry(q.n + 1, q.n + 1))
    for i in range(1, q.n + 1):
        acc = acc + 2 * q.entry(i, q.n + 1) * xs[i - 1] ** 2
        for j in range(1, q.n + 1):
            acc = acc + q.entry(i, j) * xs[i - 1] ** 2 * xs[j - 1] ** 2
    return acc


def bordered(q: QForm, indices: Sequence[int], ctx: Optional[Context] = None) -> BorderedMatrix:
    """Bordered matrix P_I for a subsequence I of 1..n."""
    idx = tuple(indices)
    if not idx or any(idx[i] >= idx[i + 1] for i in range(len(idx) - 1)):
        raise PolyError("I must be a nonempty strictly increasing subsequence")
    if idx[0] < 1 or idx[-1] > q.n:
        raise PolyError("I out of range 1..n")
    if ctx is None:
        ctx = q.context()
    xs = ctx.gens()[: q.n]
    comp = [j for j in range(1, q.n + 1) if j not in idx]
    block = tuple(tuple(q.entry(i, j) for j in idx) for i in idx)
    border = []
    for i in idx:
        p = MPoly.const(ctx, q.entry(i, q.n + 1))
        for j in comp:
            p = p + q.entry(i, j) * xs[j - 1] ** 2
        border.append(p)
    corner = MPoly.const(ctx, q.entry(q.n + 1, q.n + 1))
    for j in comp:
        corner = corner + q.entry(j, j) * xs[j - 1] ** 4
        corner = corner + 2 * q.entry(j, q.n + 1) * xs[j - 1] ** 2
    for a_pos in range(len(comp)):
        for b_pos in range(a_pos + 1, len(comp)):
            i, j = comp[a_pos], comp[b_pos]
            corner = corner + 2 * q.entry(i, j) * xs[i - 1] ** 2 * xs[j - 1] ** 2
    return BorderedMatrix(idx, block, tuple(border), corner)


def _int_det(rows: Sequence[Sequence[int]]) -> int:
    """Bareiss fraction-free determinant of an integer matrix."""
    n = len(rows)
    if n == 0:
        return 1
    m = [list(r) for r in rows]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if m[k][k] == 0:
            for r in range(k + 1, n):
                if m[r][k] != 0:
                    m[k], m[r] = m[r], m[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) // prev
            m[i][k] = 0
        prev = m[k][k]
    return sign * m[n - 1][n - 1]


def _int_adjugate(rows: Sequence[Sequence[int]]) -> list:
    """adj(A) with adj(A)[i][j] = cofactor(A)[j][i]; A @ adj(A) = det(A) I."""
    n = len(rows)
    if n == 1:
        return [[1]]
    adj = [[0] * n for _ in range(n)]
    for i in range(n):
        for j in range(n):
            minor = [
                [rows[r][c] for c in range(n) if c != j]
                for r in range(n)
                if r != i
            ]
            adj[j][i] = (-1) ** (i + j) * _int_det(minor)
    return adj


def det_bordered(b: BorderedMatrix) -> MPoly:
    """det(P_I) as a polynomial in the complement variables.

    Expanded through the integer block: det(P) = det(A_I) * corner -
    border^T adj(A_I) border, so only integer minors multiply polynomials.
    Valid whether or not the block is singular.
    """
    ctx = b.corner.ctx
    d = _int_det(b.block)
    adj = _int_adjugate(b.block)
    acc = d * b.corner
    m = len(b.block)
    for i in range(m):
        for j in range(m):
            if adj[i][j]:
                acc = acc - adj[i][j] * (b.border[j] * b.border[i])
    return acc


def det_bordered_oracle_entries(b: BorderedMatrix) -> list:
    """The full (|I|+1) x (|I|+1) matrix of P_I with MPoly entries."""
    ctx = b.corner.ctx
    m = len(b.block)
    rows = []
    for i in range(m):
        rows.append([MPoly.const(ctx, b.block[i][j]) for j in range(m)] + [b.border[i]])
    rows.append(list(b.border) + [b.corner])
    return rows


def det_poly_bareiss(rows: Sequence[Sequence[MPoly]]) -> MPoly:
    """Fraction-free determinant over polynomial entries (exact divisions)."""
    n = len(rows)
    if n == 0:
        raise PolyError("empty matrix")
    ctx = rows[0][0].ctx
    m = [list(r) for r in rows]
    sign = 1
    prev = MPoly.const(ctx, 1)
    for k in range(n - 1):
        if m[k][k].is_zero():
            for r in range(k + 1, n):
                if not m[r][k].is_zero():
                    m[k], m[r] = m[r], m[k]
                    sign = -sign
                    break
            else:
                return MPoly.zero(ctx)
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                m[i][j] = exact_div(m[i][j] * m[k][k] - m[i][k] * m[k][j], prev)
            m[i][k] = MPoly.zero(ctx)
        prev = m[k][k]
    return m[n - 1][n - 1] * sign


# ---------------------------------------------------------------------------
# determinant identity of the parity projection
# ---------------------------------------------------------------------------


def np_identity_check(q: QForm, levels: Optional[Sequence[int]] = None) -> bool:
    """Verify Np(F, [x_1..x_m]) == det(A_[1..m]) * det(P_[1..m]) up to sign
    and content, for m = 1..n (desk scale: n <= 3).

    Raises GenericityViolation when a checkable hypothesis fails (zero or
    non-squarefree determinants); the identity is only claimed for generic
    forms.
    """
    if q.n > 3:
        raise PolyError("identity check is desk-scale only (n <= 3)")
    flags = check_genericity(q)
    if flags:
        raise GenericityViolation(flags)
    ctx = q.context()
    F = quartic_lift(q, ctx)
    for m in levels or range(1, q.n + 1):
        ys = [ctx.var(i) for i in range(1, m + 1)]
        lhs = parity_projection(F, ys)
        idx = tuple(range(1, m + 1))
        rhs = _int_det([[q.entry(i, j) for j in idx] for i in idx]) * det_bordered(
            bordered(q, idx, ctx)
        )
        if rhs.is_zero():
            return False
        if normalize(lhs) != normalize(rhs):
            return False
    return True


def check_genericity(q: QForm) -> list:
    """Cheaply checkable hypotheses of the determinant identity, over all
    subsequences I: det(A_I) nonzero, det(P_I) nonzero and squarefree, and
    the lifted faces nonzero and squarefree.  (The minor-gcd hypothesis is
    deliberately not checked.)"""
    ctx = q.context()
    flags = []
    n = q.n
    for mask in range(1, 1 << n):
        idx = tuple(i + 1 for i in range(n) if mask & (1 << i))
        sub = [[q.entry(i, j) for j in idx] for i in idx]
        if _int_det(sub) == 0:
            flags.append("det_A%s_zero" % (list(idx),))
        bm = bordered(q, idx, ctx)
        dp = det_bordered(bm)
        if dp.is_zero():
            flags.append("det_P%s_zero" % (list(idx),))
        elif not dp.is_constant() and not is_squarefree(dp):
            flags.append("det_P%s_not_squarefree" % (list(idx),))
    F = quartic_lift(q, ctx)
    for i in range(1, n + 1):
        face = evaluate(F, {ctx.var(i): Fraction(0)}).num
        if face.is_zero():
            flags.append("face_x%d_zero" % i)
        elif not face.is_constant() and not is_squarefree(face):
            flags.append("face_x%d_not_squarefree" % i)
    return flags


# ---------------------------------------------------------------------------
# the copositivity test
# ---------------------------------------------------------------------------


def cmt(
    arg: Union[QForm, MPoly],
    two_point: bool = False,
) -> CopositivityVerdict:
    """Copositive matrix test.

    Accepts a QForm or an even quartic polynomial F.  NotCopositive comes
    with an exact nonnegative witness vector w (coordinatewise squares of a
    sample point) with (w, 1) A (w, 1)^T < 0.  A clean pass of the face
    recursion and the determinant-cascade sampling yields Copositive when
    every checkable genericity hypothesis held, else Inconclusive.
    """
    if isinstance(arg, MPoly):
        q = qform_from_quartic(arg)
    else:
        q = arg
    ctx = q.context()
    flags: list = []
    memo: dict = {}
    stats = {"faces": 0, "memo_hits": 0}
    samples = [0]
    witness_pt = _cmt_rec(q, tuple(range(1, q.n + 1)), ctx, flags, memo, stats, samples, two_point)
    if witness_pt is not None:
        w = tuple(c * c for c in witness_pt)
        val = _form_value(q, w)
        if val >= 0:
            raise PolyError("internal error: copositivity witness not negative")
        return CopositivityVerdict(NOT_COPOSITIVE, w, flags, stats, samples[0])
    if flags:
        return CopositivityVerdict(INCONCLUSIVE, None, flags, stats, samples[0])
    return CopositivityVerdict(COPOSITIVE, None, flags, stats, samples[0])


def _form_value(q: QForm, w: Sequence[Fraction]) -> Fraction:
    total = Fraction(q.entry(q.n + 1, q.n + 1))
    for i in range(1, q.n + 1):
        total += 2 * q.entry(i, q.n + 1) * w[i - 1]
        for j in range(1, q.n + 1):
            total += q.entry(i, j) * w[i - 1] * w[j - 1]
    return total


def _cmt_rec(q, live, ctx, flags, memo, stats, samples, two_point):
    """Returns a full-length sample point (per ambient variable) with
    F < 0, or None.  ``live`` lists the variable indices still active."""
    key = frozenset(live)
    if key in memo:
        stats["memo_hits"] += 1
        return None
    stats["faces"] += 1
    F = _lift_subset(q, live, ctx)
    if F.is_zero():
        memo[key] = True
        return None
    if F.is_constant():
        memo[key] = True
        if F.const_value() < 0:
            return tuple(Fraction(0) for _ in range(q.n))
        return None
    core = _signed_odd_part(F)
    if core.is_constant():
        # even-multiplicity square times a constant: the sign decides
        memo[key] = True
        if core.const_value() > 0:
            return None
        return _positive_negative_point(F, live, q.n)
    degenerate = not is_squarefree(F)
    # faces first: F >= 0 needs every face >= 0
    for i in live:
        sub = tuple(j for j in live if j != i)
        w = _cmt_rec(q, sub, ctx, flags, memo, stats, samples, two_point)
        if w is not None:
            return w
    # determinant cascade along the live variables, highest first
    order = sorted(live, reverse=True)
    pts = [tuple()]  # partial assignments for order[:k]
    for k, pick in enumerate(order):
        prefix = [j for j in sorted(live) if j != pick and j not in order[:k]]
        det_poly = _cascade_det(q, live, prefix, ctx)
        if det_poly.is_zero():
            degenerate = True
        nxt = []
        for pt in pts:
            assign = {ctx.var(v): val for v, val in zip(order[:k], pt)}
            fiber = evaluate(det_poly, assign).num if assign else det_poly
            coeffs = _extract_univariate(fiber, ctx.var(pick))
            if coeffs is None:
                degenerate = True
                choices = [Fraction(1)]
            else:
                choices = interval_samples_positive(coeffs)
                if two_point and len(choices) > 2:
                    choices = [choices[0], choices[-1]]
            for c in choices:
                nxt.append(pt + (c,))
        pts = nxt
    for pt in pts:
        samples[0] += 1
        coords = {v: val for v, val in zip(order, pt)}
        full = tuple(coords.get(i, Fraction(0)) for i in range(1, q.n + 1))
        if F.eval_all(full) < 0:
            return full
    if degenerate:
        # the determinant cascade is not backed by the projection theory
        # here; decide this face exactly when it is small enough
        if len(live) <= _ESCALATION_CAP:
            from .psd import psd_hptwo

            verdict = psd_hptwo(F)
            stats["escalations"] = stats.get("escalations", 0) + 1
            if not verdict.is_psd():
                w = verdict.witness.coords
                return tuple(w[i] for i in range(q.n))
        else:
            flags_append_once(flags, "degenerate_face_%s" % sorted(live))
    memo[key] = True
    return None


_ESCALATION_CAP = 8


def _signed_odd_part(F: MPoly) -> MPoly:
    dec = sqf_decompose(F)
    acc = MPoly.const(F.ctx, dec.unit_sign)
    for p in dec.odd_part:
        acc = acc * p
    return acc


def _positive_negative_point(F: MPoly, live, n: int):
    """A point with F < 0 when F = -(square); search small rationals."""
    from itertools import product as _product_iter

    vals = [Fraction(1), Fraction(2), Fraction(1, 2), Fraction(3)]
    for combo in _product_iter(vals, repeat=len(live)):
        coords = {v: c for v, c in zip(sorted(live), combo)}
        full = tuple(coords.get(i, Fraction(0)) for i in range(1, n + 1))
        if F.eval_all(full) < 0:
            return full
    return None


def flags_append_once(flags: list, flag: str) -> None:
    if flag not in flags:
        flags.append(flag)


def _lift_subset(q: QForm, live, ctx: Context) -> MPoly:
    """Quartic lift of the face keeping only the ``live`` variables."""
    xs = ctx.gens()
    acc = MPoly.const(ctx, q.entry(q.n + 1, q.n + 1))
    for i in live:
        acc = acc + 2 * q.entry(i, q.n + 1) * xs[i - 1] ** 2
        for j in live:
            acc = acc + q.entry(i, j) * xs[i - 1] ** 2 * xs[j - 1] ** 2
    return acc


def _cascade_det(q: QForm, live, prefix, ctx: Context) -> MPoly:
    """det(P_I) for I = prefix within the face ``live``; the empty prefix
    gives the lifted face polynomial itself."""
    if not prefix:
        return _lift_subset(q, live, ctx)
    comp = [j for j in live if j not in prefix]
    xs = ctx.gens()
    block = tuple(tuple(q.entry(i, j) for j in prefix) for i in prefix)
    border = []
    for i in prefix:
        p = MPoly.const(ctx, q.entry(i, q.n + 1))
        for j in comp:
            p = p + q.entry(i, j) * xs[j - 1] ** 2
        border.append(p)
    corner = MPoly.const(ctx, q.entry(q.n + 1, q.n + 1))
    for j in comp:
        corner = corner + q.entry(j, j) * xs[j - 1] ** 4 + 2 * q.entry(j, q.n + 1) * xs[j - 1] ** 2
    for a_pos in range(len(comp)):
        for b_pos in range(a_pos + 1, len(comp)):
            i, j = comp[a_pos], comp[b_pos]
            corner = corner + 2 * q.entry(i, j) * xs[i - 1] ** 2 * xs[j - 1] ** 2
    return det_bordered(BorderedMatrix(tuple(prefix), block, tuple(border), corner))


def _extract_univariate(f: MPoly, v: Var) -> Optional[list]:
    """Integer coefficients of f as a univariate in v; None when f is zero
    or involves other variables (degenerate cascade step)."""
    if f.is_zero():
        return None
    pres = f.variables_present()
    if not pres:
        return [f.const_value()]
    if len(pres) > 1 or pres[0].index != v.index:
        return None
    return [c.const_value() for c in f.coeffs_in(v)]


def qform_from_quartic(F: MPoly) -> QForm:
    """Recover the (n+1) x (n+1) integer matrix from an even quartic.

    Cross coefficients with odd values force a doubling of F first (a
    positive scaling that does not change copositivity of the verdict).
    """
    ctx = F.ctx
    n = ctx.nvars
    for v in ctx.variables():
        if not is_even_in(F, v):
            raise PolyError("polynomial is not even in %s" % v.name)
    if F.total_degree() > 4:
        raise PolyError("polynomial is not quartic")
    need_double = False
    exp_of = ctx.exp_of
    for k, c in F.terms.items():
        exps = ctx.unpack(k)
        nz = [(i, e) for i, e in enumerate(exps) if e]
        if len(nz) == 2 and c % 2 != 0:
            need_double = True
        if len(nz) == 1 and nz[0][1] == 2 and c % 2 != 0:
            need_double = True
        if any(e not in (0, 2, 4) for _, e in nz):
            raise PolyError("polynomial is not an even quartic")
    if need_double:
        F = 2 * F
    a = [[0] * (n + 1) for _ in range(n + 1)]
    for k, c in F.terms.items():
        exps = ctx.unpack(k)
        nz = [(i, e) for i, e in enumerate(exps) if e]
        if not nz:
            a[n][n] = c
        elif len(nz) == 1:
            i, e = nz[0]
            if e == 4:
                a[i][i] = c
            else:
                a[i][n] = a[n][i] = c // 2
        else:
            (i, _), (j, _) = nz
            a[i][j] = a[j][i] = c // 2
    return QForm(n, tuple(tuple(r) for r in a))
