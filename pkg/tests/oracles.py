"""Independent reference implementations used only by the test suite.

These deliberately avoid the library's own algorithms: resultants come from
a dense Sylvester-matrix determinant by fraction-free Gaussian elimination,
and real-root counts from a Sturm chain over exact rationals.
"""

from fractions import Fraction

from owcad.polyring import Context, MPoly, Var, exact_div


def sylvester_matrix(a: MPoly, b: MPoly, v: Var) -> list:
    """Dense Sylvester matrix of a and b with respect to v (MPoly entries)."""
    ctx = a.ctx
    ca = a.coeffs_in(v)
    cb = b.coeffs_in(v)
    da, db = len(ca) - 1, len(cb) - 1
    n = da + db
    zero = MPoly.zero(ctx)
    rows = []
    for i in range(db):
        row = [zero] * n
        for j, c in enumerate(reversed(ca)):
            row[i + j] = c
        rows.append(row)
    for i in range(da):
        row = [zero] * n
        for j, c in enumerate(reversed(cb)):
            row[i + j] = c
        rows.append(row)
    return rows


def bareiss_det(rows: list) -> MPoly:
    """Fraction-free Gaussian elimination determinant for MPoly matrices."""
    n = len(rows)
    ctx = rows[0][0].ctx
    if n == 0:
        return MPoly.const(ctx, 1)
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


def sylvester_resultant(a: MPoly, b: MPoly, v: Var) -> MPoly:
    """Reference resultant: determinant of the dense Sylvester matrix."""
    da, db = a.degree(v), b.degree(v)
    if da <= 0 and db <= 0:
        raise ValueError("needs positive degree")
    if da <= 0:
        return a**db
    if db <= 0:
        return b**da
    return bareiss_det(sylvester_matrix(a, b, v))


def sturm_count(coeffs, lo=None, hi=None) -> int:
    """Distinct real roots of an integer univariate polynomial by a Sturm
    chain over Fractions (whole line by default)."""
    p = [Fraction(c) for c in coeffs]
    while p and p[-1] == 0:
        p.pop()
    if len(p) <= 1:
        return 0
    # squarefree part via rational Euclid
    def deriv(q):
        return [i * c for i, c in enumerate(q)][1:]

    def rem(a, b):
        a = list(a)
        while len(a) >= len(b):
            if a[-1] == 0:
                a.pop()
                continue
            f = a[-1] / b[-1]
            off = len(a) - len(b)
            for i, c in enumerate(b):
                a[off + i] -= f * c
            a.pop()
        while a and a[-1] == 0:
            a.pop()
        return a

    def rgcd(a, b):
        while b:
            a, b = b, rem(a, b)
        return a

    g = rgcd(list(p), deriv(p))
    if len(g) > 1:
        p = _rdiv(p, g)
    chain = [list(p), deriv(p)]
    while chain[-1]:
        r = [-c for c in rem(chain[-2], chain[-1])]
        if not r:
            break
        chain.append(r)

    def sign_at_inf(q, positive):
        s = q[-1]
        if not positive and (len(q) - 1) % 2 == 1:
            s = -s
        return (s > 0) - (s < 0)

    def sign_at(q, x):
        acc = Fraction(0)
        for c in reversed(q):
            acc = acc * x + c
        return (acc > 0) - (acc < 0)

    def variations(signs):
        signs = [s for s in signs if s != 0]
        return sum(1 for i in range(len(signs) - 1) if signs[i] != signs[i + 1])

    if lo is None:
        lo_signs = [sign_at_inf(q, False) for q in chain]
    else:
        lo_signs = [sign_at(q, Fraction(lo)) for q in chain]
    if hi is None:
        hi_signs = [sign_at_inf(q, True) for q in chain]
    else:
        hi_signs = [sign_at(q, Fraction(hi)) for q in chain]
    return variations(lo_signs) - variations(hi_signs)


def _rdiv(a, b):
    a = [Fraction(c) for c in a]
    out = [Fraction(0)] * (len(a) - len(b) + 1)
    while len(a) >= len(b) and any(a):
        while a and a[-1] == 0:
            a.pop()
        if len(a) < len(b):
            break
        f = a[-1] / b[-1]
        off = len(a) - len(b)
        out[off] = f
        for i, c in enumerate(b):
            a[off + i] -= f * c
        while a and a[-1] == 0:
            a.pop()
    return out


def grid_components(f: MPoly, box=4, steps=33) -> list:
    """Connected components of f != 0 on a rational grid over [-box, box]^n.

    Brute-force flood fill; only meaningful for small n and generic f, used
    to cross-check that open samples meet every full-dimensional component.
    """
    n = f.ctx.nvars
    axis = [Fraction(-box) + Fraction(2 * box * i, steps - 1) for i in range(steps)]
    sign_of = {}
    import itertools

    for idx in itertools.product(range(steps), repeat=n):
        pt = tuple(axis[i] for i in idx)
        val = f.eval_all(pt)
        if val != 0:
            sign_of[idx] = 1 if val > 0 else -1
    comp = {}
    cid = 0
    for start in sign_of:
        if start in comp:
            continue
        cid += 1
        stack = [start]
        comp[start] = cid
        while stack:
            cur = stack.pop()
            for d in range(n):
                for step in (-1, 1):
                    nxt = list(cur)
                    nxt[d] += step
                    nxt = tuple(nxt)
                    if (
                        nxt in sign_of
                        and nxt not in comp
                        and sign_of[nxt] == sign_of[cur]
                    ):
                        comp[nxt] = cid
                        stack.append(nxt)
    groups = {}
    for idx, c in comp.items():
        groups.setdefault(c, []).append(idx)
    return [
        [tuple(axis[i] for i in idx) for idx in pts] for pts in groups.values()
    ]
