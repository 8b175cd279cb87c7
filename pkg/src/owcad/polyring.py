"""Exact sparse multivariate polynomial arithmetic over the integers.

Polynomials live in a fixed :class:`Context` of ordered variables
``x1 < x2 < ... < xn``.  Monomials are packed into single integers (16 bits
per exponent plus a total-degree field) so that monomial multiplication is
integer addition and ``max()`` over the term keys is the graded-lex leading
monomial.  Coefficients are arbitrary-precision Python ints.

The module provides the ring operations plus the classical tools the
projection operators are built from: gcd (Kronecker-substitution heuristic,
modular interpolation, PRS fallback), resultants (modular evaluation for
inputs in up to two variables, fraction-free subresultant PRS otherwise),
discriminants, and a parity-split squarefree decomposition.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Iterable, NamedTuple, Optional, Sequence

KBITS = 16
KMASK = (1 << KBITS) - 1
MAXEXP = KMASK


class PolyError(Exception):
    """Domain error raised by polynomial operations (bad context, zero input...)."""


class Var(NamedTuple):
    """A variable, identified by its 1-based position in the ambient order."""

    index: int
    name: str

    def __str__(self) -> str:
        return self.name


class Context:
    """An ordered tuple of variable names fixing the ambient order x1 < ... < xn."""

    __slots__ = ("names", "nvars", "_degshift", "_byname")

    def __init__(self, names: Sequence[str]):
        names = tuple(names)
        if len(set(names)) != len(names):
            raise PolyError("duplicate variable names: %r" % (names,))
        self.names = names
        self.nvars = len(names)
        self._degshift = KBITS * self.nvars
        self._byname = {nm: i for i, nm in enumerate(names)}

    def __eq__(self, other) -> bool:
        return isinstance(other, Context) and self.names == other.names

    def __hash__(self) -> int:
        return hash(self.names)

    def __repr__(self) -> str:
        return "Context(%s)" % ", ".join(self.names)

    def var(self, name_or_index) -> Var:
        """Return the Var for a name or a 1-based index."""
        if isinstance(name_or_index, str):
            try:
                i = self._byname[name_or_index]
            except KeyError:
                raise PolyError("unknown variable %r" % name_or_index) from None
            return Var(i + 1, name_or_index)
        i = int(name_or_index)
        if not 1 <= i <= self.nvars:
            raise PolyError("variable index %d out of range 1..%d" % (i, self.nvars))
        return Var(i, self.names[i - 1])

    def gens(self) -> tuple:
        """All variables, as degree-1 polynomials, in ambient order."""
        return tuple(MPoly.gen(self, self.var(i + 1)) for i in range(self.nvars))

    def variables(self) -> tuple:
        return tuple(self.var(i + 1) for i in range(self.nvars))

    # -- monomial packing -------------------------------------------------
    # key = totdeg << (16*n) | e_n << (16*(n-1)) | ... | e_1
    # so integer comparison of keys is graded lex with x_n most significant,
    # matching the canonical printing order.

    def pack(self, exps: Sequence[int]) -> int:
        if len(exps) != self.nvars:
            raise PolyError("exponent vector has wrong arity")
        key = 0
        tot = 0
        for i, e in enumerate(exps):
            if e < 0 or e > MAXEXP:
                raise PolyError("exponent %d out of range" % e)
            tot += e
            key |= e << (KBITS * i)
        return key | (tot << self._degshift)

    def unpack(self, key: int) -> tuple:
        return tuple((key >> (KBITS * i)) & KMASK for i in range(self.nvars))

    def exp_of(self, key: int, vi: int) -> int:
        """Exponent of variable with 0-based slot vi in a packed key."""
        return (key >> (KBITS * vi)) & KMASK

    def total_deg(self, key: int) -> int:
        return key >> self._degshift


class MPoly:
    """Immutable sparse polynomial with integer coefficients.

    ``terms`` maps packed monomial keys to nonzero int coefficients; two
    polynomials are equal iff their contexts and term maps are equal.
    """

    __slots__ = ("ctx", "terms")

    def __init__(self, ctx: Context, terms: dict):
        self.ctx = ctx
        self.terms = terms

    # -- constructors ------------------------------------------------------

    @staticmethod
    def zero(ctx: Context) -> "MPoly":
        return MPoly(ctx, {})

    @staticmethod
    def const(ctx: Context, c: int) -> "MPoly":
        c = int(c)
        return MPoly(ctx, {0: c} if c else {})

    @staticmethod
    def gen(ctx: Context, v: Var) -> "MPoly":
        exps = [0] * ctx.nvars
        exps[v.index - 1] = 1
        return MPoly(ctx, {ctx.pack(exps): 1})

    @staticmethod
    def from_terms(ctx: Context, items: Iterable) -> "MPoly":
        """Build from (exponent-tuple, coefficient) pairs, merging duplicates."""
        terms: dict = {}
        for exps, c in items:
            if not c:
                continue
            k = ctx.pack(exps)
            nc = terms.get(k, 0) + int(c)
            if nc:
                terms[k] = nc
            elif k in terms:
                del terms[k]
        return MPoly(ctx, terms)

    # -- basic predicates --------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def is_constant(self) -> bool:
        return not self.terms or (len(self.terms) == 1 and 0 in self.terms)

    def const_value(self) -> int:
        if not self.terms:
            return 0
        if self.is_constant():
            return self.terms[0]
        raise PolyError("not a constant polynomial")

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __eq__(self, other) -> bool:
        if isinstance(other, int):
            return self.is_constant() and (self.terms.get(0, 0) == other)
        return (
            isinstance(other, MPoly)
            and self.ctx == other.ctx
            and self.terms == other.terms
        )

    def __hash__(self) -> int:
        return hash((self.ctx, frozenset(self.terms.items())))

    # -- degrees and structure ----------------------------------------------

    def total_degree(self) -> int:
        if not self.terms:
            return -1
        return self.ctx.total_deg(max(self.terms))

    def degree(self, v: Var) -> int:
        """Degree in v; -1 for the zero polynomial."""
        if not self.terms:
            return -1
        vi = v.index - 1
        exp_of = self.ctx.exp_of
        return max(exp_of(k, vi) for k in self.terms)

    def level(self) -> int:
        """Largest variable index occurring with positive degree; 0 for constants."""
        lev = 0
        exp_of = self.ctx.exp_of
        for k in self.terms:
            for vi in range(self.ctx.nvars - 1, lev - 1, -1):
                if exp_of(k, vi):
                    if vi + 1 > lev:
                        lev = vi + 1
                    break
        return lev

    def variables_present(self) -> list:
        out = []
        for vi in range(self.ctx.nvars):
            if any(self.ctx.exp_of(k, vi) for k in self.terms):
                out.append(self.ctx.var(vi + 1))
        return out

    # -- arithmetic ----------------------------------------------------------

    def _check(self, other: "MPoly"):
        if self.ctx != other.ctx:
            raise PolyError("context mismatch")

    def __neg__(self) -> "MPoly":
        return MPoly(self.ctx, {k: -c for k, c in self.terms.items()})

    def __add__(self, other) -> "MPoly":
        if isinstance(other, int):
            other = MPoly.const(self.ctx, other)
        self._check(other)
        a, b = self.terms, other.terms
        if len(a) < len(b):
            a, b = b, a
        res = dict(a)
        for k, c in b.items():
            nc = res.get(k, 0) + c
            if nc:
                res[k] = nc
            else:
                del res[k]
        return MPoly(self.ctx, res)

    __radd__ = __add__

    def __sub__(self, other) -> "MPoly":
        if isinstance(other, int):
            other = MPoly.const(self.ctx, other)
        self._check(other)
        res = dict(self.terms)
        for k, c in other.terms.items():
            nc = res.get(k, 0) - c
            if nc:
                res[k] = nc
            else:
                del res[k]
        return MPoly(self.ctx, res)

    def __rsub__(self, other) -> "MPoly":
        return (-self).__add__(other)

    def __mul__(self, other) -> "MPoly":
        if isinstance(other, int):
            if other == 0:
                return MPoly.zero(self.ctx)
            return MPoly(self.ctx, {k: c * other for k, c in self.terms.items()})
        self._check(other)
        a, b = self.terms, other.terms
        if not a or not b:
            return MPoly.zero(self.ctx)
        if len(a) > len(b):
            a, b = b, a
        res: dict = {}
        get = res.get
        for ka, ca in a.items():
            for kb, cb in b.items():
                k = ka + kb
                nc = get(k, 0) + ca * cb
                if nc:
                    res[k] = nc
                else:
                    del res[k]
        return MPoly(self.ctx, res)

    __rmul__ = __mul__

    def __pow__(self, e: int) -> "MPoly":
        if e < 0:
            raise PolyError("negative power")
        result = MPoly.const(self.ctx, 1)
        base = self
        while e:
            if e & 1:
                result = result * base
            base = base * base if e > 1 else base
            e >>= 1
        return result

    # -- views along one variable --------------------------------------------

    def coeff_of(self, v: Var, e: int) -> "MPoly":
        """Coefficient of v**e, as a polynomial free of v."""
        vi = v.index - 1
        shift = KBITS * vi
        strip = (e << shift) | (e << self.ctx._degshift)
        exp_of = self.ctx.exp_of
        res = {}
        for k, c in self.terms.items():
            if exp_of(k, vi) == e:
                res[k - strip] = c
        return MPoly(self.ctx, res)

    def coeffs_in(self, v: Var) -> list:
        """Dense coefficient list [c0, ..., cd] with respect to v (each free of v)."""
        d = self.degree(v)
        if d < 0:
            return []
        vi = v.index - 1
        shift = KBITS * vi
        degshift = self.ctx._degshift
        out = [dict() for _ in range(d + 1)]
        exp_of = self.ctx.exp_of
        for k, c in self.terms.items():
            e = exp_of(k, vi)
            out[e][k - ((e << shift) | (e << degshift))] = c
        return [MPoly(self.ctx, t) for t in out]

    @staticmethod
    def from_coeffs(ctx: Context, v: Var, coeffs: Sequence["MPoly"]) -> "MPoly":
        vi = v.index - 1
        shift = KBITS * vi
        degshift = ctx._degshift
        res: dict = {}
        for e, p in enumerate(coeffs):
            if p.is_zero():
                continue
            off = (e << shift) | (e << degshift)
            for k, c in p.terms.items():
                nk = k + off
                nc = res.get(nk, 0) + c
                if nc:
                    res[nk] = nc
                else:
                    del res[nk]
        return MPoly(ctx, res)

    def lc(self, v: Var) -> "MPoly":
        """Leading coefficient with respect to v (the whole of f when deg(f,v)=0)."""
        d = self.degree(v)
        if d <= 0:
            return self
        return self.coeff_of(v, d)

    def derivative(self, v: Var) -> "MPoly":
        vi = v.index - 1
        shift = KBITS * vi
        degshift = self.ctx._degshift
        step = (1 << shift) | (1 << degshift)
        exp_of = self.ctx.exp_of
        res = {}
        for k, c in self.terms.items():
            e = exp_of(k, vi)
            if e:
                res[k - step] = c * e
        return MPoly(self.ctx, res)

    # -- integer content and normal form --------------------------------------

    def icontent(self) -> int:
        """Nonnegative gcd of all integer coefficients (0 for the zero poly)."""
        g = 0
        for c in self.terms.values():
            g = math.gcd(g, c)
            if g == 1:
                return 1
        return g

    def lead_key(self) -> int:
        if not self.terms:
            raise PolyError("zero polynomial has no leading term")
        return max(self.terms)

    def lead_coeff(self) -> int:
        """Integer coefficient of the graded-lex leading term."""
        return self.terms[self.lead_key()]

    def primitive(self) -> tuple:
        """Return (content, primitive part) with positive leading coefficient.

        The content carries the sign: self == content * part, part primitive
        with positive graded-lex leading coefficient.
        """
        if not self.terms:
            return 0, self
        c = self.icontent()
        if self.lead_coeff() < 0:
            c = -c
        if c == 1:
            return 1, self
        return c, MPoly(self.ctx, {k: v // c for k, v in self.terms.items()})

    def max_norm(self) -> int:
        return max((abs(c) for c in self.terms.values()), default=0)

    # -- substitution -----------------------------------------------------------

    def eval_int(self, v: Var, value: int) -> "MPoly":
        """Substitute an integer for v."""
        vi = v.index - 1
        shift = KBITS * vi
        degshift = self.ctx._degshift
        exp_of = self.ctx.exp_of
        powers = {0: 1}
        res: dict = {}
        for k, c in self.terms.items():
            e = exp_of(k, vi)
            p = powers.get(e)
            if p is None:
                p = value**e
                powers[e] = p
            nk = k - ((e << shift) | (e << degshift))
            nc = res.get(nk, 0) + c * p
            if nc:
                res[nk] = nc
            elif nk in res:
                del res[nk]
        return MPoly(self.ctx, res)

    def eval_all(self, point: Sequence[Fraction]) -> Fraction:
        """Evaluate at a full rational point (one value per context variable)."""
        if len(point) != self.ctx.nvars:
            raise PolyError("point arity mismatch")
        vals = [Fraction(p) for p in point]
        total = Fraction(0)
        exp_of = self.ctx.exp_of
        for k, c in self.terms.items():
            t = Fraction(c)
            for vi in range(self.ctx.nvars):
                e = exp_of(k, vi)
                if e:
                    t *= vals[vi] ** e
            total += t
        return total

    # -- printing -----------------------------------------------------------

    def __str__(self) -> str:
        return format_poly(self)

    def __repr__(self) -> str:
        return "MPoly(%s)" % format_poly(self)


class QPoly(NamedTuple):
    """A polynomial with rational coefficients, stored as num/den with den > 0."""

    num: MPoly
    den: int

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def as_fraction(self) -> Fraction:
        return Fraction(self.num.const_value(), self.den)

    def __str__(self) -> str:
        if self.den == 1:
            return format_poly(self.num)
        return "(%s)/%d" % (format_poly(self.num), self.den)


def _qpoly(num: MPoly, den: int) -> QPoly:
    if den < 0:
        num, den = -num, -den
    g = math.gcd(num.icontent(), den)
    if g > 1:
        num = MPoly(num.ctx, {k: c // g for k, c in num.terms.items()})
        den //= g
    return QPoly(num, den)


def format_poly(f: MPoly) -> str:
    """Canonical text form: graded-lex term order, '^' powers, explicit '*'."""
    if not f.terms:
        return "0"
    ctx = f.ctx
    parts = []
    for k in sorted(f.terms, reverse=True):
        c = f.terms[k]
        exps = ctx.unpack(k)
        factors = []
        for nm, e in zip(ctx.names, exps):
            if e == 1:
                factors.append(nm)
            elif e > 1:
                factors.append("%s^%d" % (nm, e))
        if not factors:
            body = str(abs(c))
        else:
            body = "*".join(factors)
            if abs(c) != 1:
                body = "%d*%s" % (abs(c), body)
        if not parts:
            parts.append(body if c > 0 else "-" + body)
        else:
            parts.append((" + " if c > 0 else " - ") + body)
    return "".join(parts)


# ---------------------------------------------------------------------------
# spec-level operations
# ---------------------------------------------------------------------------


def arith(a: MPoly, b: MPoly, op: str) -> MPoly:
    """Exact ring arithmetic: op in {'add', 'sub', 'mul'}."""
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    raise PolyError("unknown op %r" % op)


def level(f: MPoly) -> int:
    return f.level()


def lc(f: MPoly, v: Var) -> MPoly:
    return f.lc(v)


def derivative(f: MPoly, v: Var) -> MPoly:
    return f.derivative(v)


def normalize(f: MPoly) -> MPoly:
    """Primitive part with positive leading coefficient (graded-lex leading term)."""
    if f.is_zero():
        return f
    return f.primitive()[1]


# -- exact division ----------------------------------------------------------


def exact_div(a: MPoly, b: MPoly) -> MPoly:
    """Exact quotient a/b; raises PolyError when b does not divide a."""
    q = try_div(a, b)
    if q is None:
        raise PolyError("inexact polynomial division")
    return q


def try_div(a: MPoly, b: MPoly) -> Optional[MPoly]:
    """Exact quotient a/b, or None when the division is not exact."""
    if b.is_zero():
        raise PolyError("division by zero polynomial")
    if a.is_zero():
        return a
    if b.is_constant():
        bc = b.const_value()
        res = {}
        for k, c in a.terms.items():
            q, r = divmod(c, bc)
            if r:
                return None
            res[k] = q
        return MPoly(a.ctx, res)
    lev = b.level()
    v = a.ctx.var(lev)
    da, db = a.degree(v), b.degree(v)
    if da < db:
        return None
    ca = a.coeffs_in(v)
    cb = b.coeffs_in(v)
    lcb = cb[-1]
    qc = [MPoly.zero(a.ctx)] * (da - db + 1)
    rem = list(ca)
    for i in range(da - db, -1, -1):
        top = rem[i + db]
        if top.is_zero():
            continue
        qi = try_div(top, lcb)
        if qi is None:
            return None
        qc[i] = qi
        for j in range(db + 1):
            rem[i + j] = rem[i + j] - qi * cb[j]
    if any(not r.is_zero() for r in rem):
        return None
    return MPoly.from_coeffs(a.ctx, v, qc)


def divides(b: MPoly, a: MPoly) -> bool:
    return try_div(a, b) is not None


# -- gcd ----------------------------------------------------------------------


def gcd(a: MPoly, b: MPoly) -> MPoly:
    """Primitive gcd with positive leading coefficient; gcd(a, 0) = normalize(a)."""
    if a.is_zero() and b.is_zero():
        raise PolyError("gcd(0, 0) is undefined")
    if a.is_zero():
        return normalize(b)
    if b.is_zero():
        return normalize(a)
    a = normalize(a)
    b = normalize(b)
    if a.is_constant() or b.is_constant():
        return MPoly.const(a.ctx, 1)
    if a == b:
        return a
    g = _gcd_even_compressed(a, b)
    if g is not None:
        return g
    return _gcd_inner(a, b)


def _gcd_inner(a: MPoly, b: MPoly) -> MPoly:
    g = _coprime_screen(a, b)
    if g is not None:
        return g
    nvars = len({v.index for v in a.variables_present()} | {v.index for v in b.variables_present()})
    if nvars <= 1:
        g = _modular_gcd(a, b)
        if g is not None:
            return normalize(g)
    g = _heugcd(a, b)
    if g is not None:
        return normalize(g)
    g = _modular_gcd(a, b)
    if g is not None:
        return normalize(g)
    return _gcd_prs(a, b)


def _coprime_screen(a: MPoly, b: MPoly) -> Optional[MPoly]:
    """One cheap modular image; a constant gcd mod a prime that preserves
    both leading terms proves the inputs coprime."""
    gamma = math.gcd(a.lead_coeff(), b.lead_coeff())
    for p in _GCD_PRIMES[:4]:
        if gamma % p == 0:
            continue
        ap = _mp_mod(a, p)
        bp = _mp_mod(b, p)
        if not ap or not bp:
            continue
        if max(ap) != a.lead_key() or max(bp) != b.lead_key():
            continue
        try:
            gp = _gcd_modp(a.ctx, ap, bp, p)
        except (_Unlucky, PolyError):
            return None
        if gp == {0: 1}:
            return MPoly.const(a.ctx, 1)
        return None
    return None


def _common_even_vars(a: MPoly, b: MPoly) -> list:
    out = []
    ctx = a.ctx
    for vi in range(ctx.nvars):
        da = max((ctx.exp_of(k, vi) for k in a.terms), default=0)
        db = max((ctx.exp_of(k, vi) for k in b.terms), default=0)
        if da + db == 0:
            continue
        if all(ctx.exp_of(k, vi) % 2 == 0 for k in a.terms) and all(
            ctx.exp_of(k, vi) % 2 == 0 for k in b.terms
        ):
            out.append(vi)
    return out


def _halve_exponents(f: MPoly, vis: list) -> MPoly:
    ctx = f.ctx
    res = {}
    for k, c in f.terms.items():
        exps = list(ctx.unpack(k))
        for vi in vis:
            exps[vi] //= 2
        res[ctx.pack(exps)] = c
    return MPoly(ctx, res)


def _double_exponents(f: MPoly, vis: list) -> MPoly:
    ctx = f.ctx
    res = {}
    for k, c in f.terms.items():
        exps = list(ctx.unpack(k))
        for vi in vis:
            exps[vi] *= 2
        res[ctx.pack(exps)] = c
    return MPoly(ctx, res)


def _gcd_even_compressed(a: MPoly, b: MPoly) -> Optional[MPoly]:
    # gcd of polynomials even in v is itself even in v, so exponents can be
    # halved before recursing; this keeps the heuristic/modular sizes down
    vis = _common_even_vars(a, b)
    if not vis:
        return None
    g = _gcd_inner(_halve_exponents(a, vis), _halve_exponents(b, vis))
    return normalize(_double_exponents(g, vis))


_HEU_RETRIES = 6
_HEU_BIT_LIMIT = 2_500_000


def _heugcd(a: MPoly, b: MPoly) -> Optional[MPoly]:
    """Heuristic gcd via a single Kronecker-substitution evaluation.

    Both polynomials are evaluated at (xi**s1, ..., xi**sn) for a mixed-radix
    stride assignment covering their joint exponent box, reducing the gcd to
    one integer gcd; the candidate recovered from balanced base-xi digits is
    verified by exact trial division.  Returns None when the exponent box or
    the integers would be impractically large (caller falls back).
    """
    ctx = a.ctx
    if a.is_constant() or b.is_constant():
        return MPoly.const(ctx, math.gcd(a.icontent(), b.icontent()))
    vis = sorted(
        {v.index - 1 for v in a.variables_present()}
        | {v.index - 1 for v in b.variables_present()}
    )
    degs = []
    for vi in vis:
        d = max(
            max(ctx.exp_of(k, vi) for k in a.terms),
            max(ctx.exp_of(k, vi) for k in b.terms),
        )
        degs.append(d)
    box = 1
    for d in degs:
        box *= d + 1
        if box > 1 << 22:
            return None
    strides = []
    s = 1
    for d in degs:
        strides.append(s)
        s *= d + 1
    xi = 2 * min(a.max_norm(), b.max_norm()) + 2
    for _ in range(_HEU_RETRIES):
        if xi.bit_length() * box > _HEU_BIT_LIMIT:
            return None
        av = _kron_eval(a, vis, strides, xi)
        bv = _kron_eval(b, vis, strides, xi)
        if av and bv:
            g = math.gcd(av, bv)
            cand = _kron_unpack(g, vis, degs, strides, xi, ctx)
            if cand is not None and not cand.is_zero():
                cand = cand.primitive()[1]
                if divides(cand, a) and divides(cand, b):
                    return cand
        xi = 2 * xi + max(xi // 2, 1)
    return None


def _kron_eval(f: MPoly, vis: list, strides: list, xi: int) -> int:
    ctx = f.ctx
    exp_of = ctx.exp_of
    pows: dict = {}
    total = 0
    for k, c in f.terms.items():
        off = 0
        for vi, st in zip(vis, strides):
            off += exp_of(k, vi) * st
        p = pows.get(off)
        if p is None:
            p = pow(xi, off)
            pows[off] = p
        total += c * p
    return total


def _kron_unpack(g, vis, degs, strides, xi, ctx) -> Optional[MPoly]:
    box = strides[-1] * (degs[-1] + 1)
    digits = _balanced_digits(g, xi, box)
    if digits is None:
        return None
    terms = {}
    degshift = ctx._degshift
    for off, c in digits:
        key = 0
        tot = 0
        rem = off
        for vi, st, d in zip(reversed(vis), reversed(strides), reversed(degs)):
            e, rem = divmod(rem, st)
            if e > d:
                return None
            key |= e << (KBITS * vi)
            tot += e
        terms[key | (tot << degshift)] = c
    return MPoly(ctx, terms)


def _balanced_digits(n: int, xi: int, count: int) -> Optional[list]:
    """Sparse balanced base-xi digits of n >= 0: [(position, digit)]."""
    raw = [0] * count
    _split_digits(n, xi, 0, count, raw)
    half = xi // 2
    out = []
    carry = 0
    for i in range(count):
        d = raw[i] + carry
        carry = 0
        if d > half:
            d -= xi
            carry = 1
        if d:
            out.append((i, d))
    if carry:
        return None  # top overflow: candidate coefficients did not fit
    return out


_DIGIT_POW_CACHE: dict = {}


def _split_digits(n: int, xi: int, lo: int, count: int, out: list) -> None:
    if n == 0:
        return
    if count == 1:
        out[lo] = n
        return
    half = count // 2
    key = (xi, half)
    p = _DIGIT_POW_CACHE.get(key)
    if p is None:
        p = pow(xi, half)
        if len(_DIGIT_POW_CACHE) < 256:
            _DIGIT_POW_CACHE[key] = p
    q, r = divmod(n, p)
    _split_digits(r, xi, lo, half, out)
    _split_digits(q, xi, lo + half, count - half, out)


# -- modular gcd -------------------------------------------------------------
#
# Brown-style dense interpolation over word-size primes (no coefficient
# swell mod p), lifted by CRT with symmetric remainders and verified by
# exact trial division.  A constant gcd modulo a prime preserving both
# leading terms proves coprimality outright.


def _is_probable_prime(n: int) -> bool:
    if n < 2:
        return False
    for p in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        if n % p == 0:
            return n == p
    d = n - 1
    r = 0
    while d % 2 == 0:
        d //= 2
        r += 1
    for a in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(r - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def _gen_primes(start: int, count: int) -> list:
    out = []
    n = start | 1
    while len(out) < count:
        if _is_probable_prime(n):
            out.append(n)
        n -= 2
    return out


_GCD_PRIMES = _gen_primes((1 << 62) - 1, 48)


def _more_primes() -> None:
    _GCD_PRIMES.extend(_gen_primes(_GCD_PRIMES[-1] - 2, 48))


def _mp_mod(f: MPoly, p: int) -> dict:
    out = {}
    for k, c in f.terms.items():
        r = c % p
        if r:
            out[k] = r
    return out


def _mp_add(a: dict, b: dict, p: int) -> dict:
    out = dict(a)
    for k, c in b.items():
        r = (out.get(k, 0) + c) % p
        if r:
            out[k] = r
        else:
            out.pop(k, None)
    return out


def _mp_scale(a: dict, s: int, p: int) -> dict:
    s %= p
    if s == 0:
        return {}
    return {k: c * s % p for k, c in a.items()}


def _mp_mul(a: dict, b: dict, p: int) -> dict:
    if not a or not b:
        return {}
    if len(a) > len(b):
        a, b = b, a
    out: dict = {}
    get = out.get
    for ka, ca in a.items():
        for kb, cb in b.items():
            k = ka + kb
            r = (get(k, 0) + ca * cb) % p
            if r:
                out[k] = r
            else:
                out.pop(k, None)
    return out


def _mp_vars(ctx: Context, a: dict) -> list:
    out = []
    for vi in range(ctx.nvars):
        if any(ctx.exp_of(k, vi) for k in a):
            out.append(vi)
    return out


def _mp_coeffs_in(ctx: Context, a: dict, vi: int) -> list:
    shift = KBITS * vi
    degshift = ctx._degshift
    d = max(ctx.exp_of(k, vi) for k in a) if a else -1
    out = [dict() for _ in range(d + 1)]
    for k, c in a.items():
        e = ctx.exp_of(k, vi)
        out[e][k - ((e << shift) | (e << degshift))] = c
    return out


def _mp_from_coeffs(ctx: Context, vi: int, coeffs: list, p: int) -> dict:
    shift = KBITS * vi
    degshift = ctx._degshift
    out: dict = {}
    for e, q in enumerate(coeffs):
        off = (e << shift) | (e << degshift)
        for k, c in q.items():
            kk = k + off
            r = (out.get(kk, 0) + c) % p
            if r:
                out[kk] = r
            else:
                out.pop(kk, None)
    return out


def _mp_deg(ctx: Context, a: dict, vi: int) -> int:
    if not a:
        return -1
    exp_of = ctx.exp_of
    return max(exp_of(k, vi) for k in a)


def _mp_eval(ctx: Context, a: dict, vi: int, t: int, p: int) -> dict:
    shift = KBITS * vi
    degshift = ctx._degshift
    exp_of = ctx.exp_of
    pows = {0: 1}
    out: dict = {}
    for k, c in a.items():
        e = exp_of(k, vi)
        w = pows.get(e)
        if w is None:
            w = pow(t, e, p)
            pows[e] = w
        kk = k - ((e << shift) | (e << degshift))
        r = (out.get(kk, 0) + c * w) % p
        if r:
            out[kk] = r
        else:
            out.pop(kk, None)
    return out


def _mp_mul_linear(ctx: Context, a: dict, vi: int, t: int, p: int) -> dict:
    """a * (x_vi - t) mod p."""
    step = (1 << (KBITS * vi)) | (1 << ctx._degshift)
    out: dict = {}
    mt = (-t) % p
    for k, c in a.items():
        kk = k + step
        r = (out.get(kk, 0) + c) % p
        if r:
            out[kk] = r
        else:
            out.pop(kk, None)
        if mt:
            r = (out.get(k, 0) + c * mt) % p
            if r:
                out[k] = r
            else:
                out.pop(k, None)
    return out


def _dense_gcd_modp(a: list, b: list, p: int) -> list:
    """Monic univariate gcd mod p on dense coefficient lists."""
    a = [c % p for c in a]
    b = [c % p for c in b]
    while a and a[-1] == 0:
        a.pop()
    while b and b[-1] == 0:
        b.pop()
    while b:
        da, db = len(a) - 1, len(b) - 1
        if da < db:
            a, b = b, a
            continue
        inv = pow(b[-1], -1, p)
        r = list(a)
        for i in range(da - db, -1, -1):
            t = r[i + db] % p
            if t:
                q = t * inv % p
                for j in range(db + 1):
                    r[i + j] = (r[i + j] - q * b[j]) % p
        while r and r[-1] % p == 0:
            r.pop()
        a, b = b, r
    inv = pow(a[-1], -1, p)
    return [c * inv % p for c in a]


def _mp_divexact(ctx: Context, a: dict, b: dict, p: int):
    """Exact quotient a/b mod p, or None."""
    if not b:
        raise PolyError("modular division by zero")
    if not a:
        return {}
    bvars = _mp_vars(ctx, b)
    if not bvars:
        inv = pow(next(iter(b.values())), -1, p)
        return _mp_scale(a, inv, p)
    vi = bvars[-1]
    ca = _mp_coeffs_in(ctx, a, vi)
    cb = _mp_coeffs_in(ctx, b, vi)
    da, db = len(ca) - 1, len(cb) - 1
    if da < db:
        return None
    qc = [{} for _ in range(da - db + 1)]
    rem = list(ca)
    for i in range(da - db, -1, -1):
        top = rem[i + db]
        if not top:
            continue
        qi = _mp_divexact(ctx, top, cb[-1], p)
        if qi is None:
            return None
        qc[i] = qi
        for j in range(db + 1):
            sub = _mp_mul(qi, cb[j], p)
            rem[i + j] = _mp_add(rem[i + j], _mp_scale(sub, p - 1, p), p)
    if any(rem):
        return None
    return _mp_from_coeffs(ctx, vi, qc, p)


def _mp_content(ctx: Context, a: dict, vi: int, p: int) -> dict:
    cs = [c for c in _mp_coeffs_in(ctx, a, vi) if c]
    g = cs[0]
    for c in cs[1:]:
        if len(g) == 1 and 0 in g:
            break
        g = _gcd_modp(ctx, g, c, p)
    return g


def _mp_monic(a: dict, p: int) -> dict:
    if not a:
        return a
    lead = a[max(a)]
    if lead == 1:
        return a
    return _mp_scale(a, pow(lead, -1, p), p)


class _Unlucky(Exception):
    """Modular image looks inconsistent; try another prime."""


def _c_int(q: dict) -> int:
    return q.get(0, 0) if q else 0


def _gcd_modp(ctx: Context, a: dict, b: dict, p: int) -> dict:
    """Gcd mod p (graded-lex monic) by Brown-style dense interpolation.

    The highest variable is evaluated at successive points; each image gcd
    h_t (computed recursively, glex-monic) is rescaled by
    Gamma(t)/lc_x(h_t), where Gamma = gcd of the two leading coefficients
    with respect to the lowest common variable x.  The rescaled images
    interpolate g * Gamma / lc_x(g), whose primitive part w.r.t. x is the
    primitive gcd.  Unlucky evaluations are skipped by degree comparison;
    unlucky primes are caught by the caller's verification.
    """
    if not a:
        return _mp_monic(b, p)
    if not b:
        return _mp_monic(a, p)
    va = set(_mp_vars(ctx, a))
    vb = set(_mp_vars(ctx, b))
    common = sorted(va & vb)
    if not common:
        return {0: 1}
    if len(va | vb) == 1:
        vi = common[0]
        g = _dense_gcd_modp(
            [_c_int(q) for q in _mp_coeffs_in(ctx, a, vi)],
            [_c_int(q) for q in _mp_coeffs_in(ctx, b, vi)],
            p,
        )
        return _mp_from_coeffs(ctx, vi, [({0: c} if c else {}) for c in g], p)
    xv = common[0]
    # contents with respect to x split off and handled recursively
    ca = _mp_content(ctx, a, xv, p)
    cb = _mp_content(ctx, b, xv, p)
    cont = _gcd_modp(ctx, ca, cb, p)
    A = _mp_divexact(ctx, a, ca, p)
    B = _mp_divexact(ctx, b, cb, p)
    if A is None or B is None:
        raise _Unlucky("content division failed")
    union = set(_mp_vars(ctx, A)) | set(_mp_vars(ctx, B))
    if union == {xv}:
        g = _dense_gcd_modp(
            [_c_int(q) for q in _mp_coeffs_in(ctx, A, xv)],
            [_c_int(q) for q in _mp_coeffs_in(ctx, B, xv)],
            p,
        )
        gg = _mp_from_coeffs(ctx, xv, [({0: c} if c else {}) for c in g], p)
        return _mp_monic(_mp_mul(cont, gg, p), p)
    lcA = _mp_coeffs_in(ctx, A, xv)[-1]
    lcB = _mp_coeffs_in(ctx, B, xv)[-1]
    gamma = _gcd_modp(ctx, lcA, lcB, p)
    zv = max(union - {xv})
    dx_bound = min(_mp_deg(ctx, A, xv), _mp_deg(ctx, B, xv))
    dz = min(_mp_deg(ctx, A, zv), _mp_deg(ctx, B, zv)) + _mp_deg(ctx, gamma, zv)
    need = dz + 1
    ts: list = []
    images: list = []
    degA = _mp_deg(ctx, A, xv)
    degB = _mp_deg(ctx, B, xv)
    for t in range(p):
        At = _mp_eval(ctx, A, zv, t, p)
        Bt = _mp_eval(ctx, B, zv, t, p)
        if _mp_deg(ctx, At, xv) != degA or _mp_deg(ctx, Bt, xv) != degB:
            continue
        ht = _gcd_modp(ctx, At, Bt, p)
        dx = _mp_deg(ctx, ht, xv)
        if dx > dx_bound:
            continue
        if dx < dx_bound:
            dx_bound = dx
            ts, images = [], []
        if dx == 0:
            return _mp_monic(dict(cont), p)
        gt = _mp_eval(ctx, gamma, zv, t, p)
        if not gt:
            continue
        lcht = _mp_coeffs_in(ctx, ht, xv)[-1]
        st = _mp_divexact(ctx, _mp_mul(ht, gt, p), lcht, p)
        if st is None:
            continue
        ts.append(t)
        images.append(st)
        if len(ts) == need:
            break
    else:
        raise _Unlucky("ran out of evaluation points")
    W = _interp_newton(ctx, ts, images, zv, p)
    cw = _mp_content(ctx, W, xv, p)
    pp = _mp_divexact(ctx, W, cw, p)
    if pp is None:
        raise _Unlucky("interpolated candidate not primitive")
    return _mp_monic(_mp_mul(cont, pp, p), p)


def _interp_newton(ctx: Context, ts: list, values: list, vi: int, p: int) -> dict:
    coeffs: list = []
    for i, t in enumerate(ts):
        cur = values[i]
        for j in range(i):
            diff = _mp_add(cur, _mp_scale(coeffs[j], p - 1, p), p)
            inv = pow((t - ts[j]) % p, -1, p)
            cur = _mp_scale(diff, inv, p)
        coeffs.append(cur)
    W: dict = {}
    for j in range(len(ts) - 1, -1, -1):
        W = _mp_mul_linear(ctx, W, vi, ts[j], p)
        W = _mp_add(W, coeffs[j], p)
    return W


def _crt_pair(c1: int, m1: int, c2: int, m2: int) -> int:
    inv = pow(m1 % m2, -1, m2)
    t = (c2 - c1) % m2 * inv % m2
    return c1 + m1 * t


def _modular_gcd(a: MPoly, b: MPoly) -> Optional[MPoly]:
    """Gcd over Z by modular images; None if the primes disagree hopelessly."""
    ctx = a.ctx
    gamma = math.gcd(a.lead_coeff(), b.lead_coeff())
    acc = None  # (symmetric terms, modulus, lead key, stable count)
    used = 0
    for p in _GCD_PRIMES:
        if gamma % p == 0:
            continue
        ap = _mp_mod(a, p)
        bp = _mp_mod(b, p)
        if not ap or not bp:
            continue
        if max(ap) != a.lead_key() or max(bp) != b.lead_key():
            continue
        try:
            gp = _gcd_modp(ctx, ap, bp, p)
        except (_Unlucky, PolyError):
            continue
        if gp == {0: 1}:
            return MPoly.const(ctx, 1)  # coprime: lead terms survived mod p
        used += 1
        if used > 24:
            return None
        gp = _mp_scale(gp, gamma, p)
        lead = max(gp)
        if acc is not None and lead != acc[2]:
            if lead < acc[2]:
                acc = None  # previous primes were unlucky; restart
            else:
                continue  # this prime is unlucky
        if acc is None:
            sym = {k: (c if c <= p // 2 else c - p) for k, c in gp.items()}
            acc = (sym, p, lead, 0)
        else:
            terms, mod, _, stable = acc
            newmod = mod * p
            merged = {}
            changed = False
            for k in set(terms) | set(gp):
                c1 = terms.get(k, 0) % mod
                c2 = gp.get(k, 0)
                c = _crt_pair(c1, mod, c2, p)
                if c > newmod // 2:
                    c -= newmod
                if c:
                    merged[k] = c
                if c != terms.get(k, 0):
                    changed = True
            acc = (merged, newmod, lead, 0 if changed else stable + 1)
        if acc[3] >= 1:
            cand = MPoly(ctx, dict(acc[0])).primitive()[1]
            if not cand.is_zero() and divides(cand, a) and divides(cand, b):
                return cand
    return None


def _content_wrt(f: MPoly, v: Var) -> MPoly:
    """Content of f as a polynomial in v: gcd of its v-coefficients."""
    cs = [c for c in f.coeffs_in(v) if not c.is_zero()]
    g = cs[0]
    for c in cs[1:]:
        if g.is_constant() and g.const_value() in (1, -1):
            break
        g = gcd(g, c)
    return normalize(g) if not g.is_constant() else MPoly.const(f.ctx, 1)


def _prem(a: MPoly, b: MPoly, v: Var) -> MPoly:
    """Pseudo-remainder of a by b w.r.t. v: lc(b)^(da-db+1) * a mod b."""
    da, db = a.degree(v), b.degree(v)
    if da < db:
        return a
    ca = a.coeffs_in(v)
    cb = b.coeffs_in(v)
    lcb = cb[-1]
    rem = list(ca)
    for i in range(da - db, -1, -1):
        top = rem[i + db]
        rem = [lcb * r for r in rem]
        if not top.is_zero():
            for j in range(db):
                rem[i + j] = rem[i + j] - top * cb[j]
        rem[i + db] = MPoly.zero(a.ctx)
        rem = rem[: i + db]
        if i:
            tail_deg = max(
                (jj for jj, r in enumerate(rem) if not r.is_zero()), default=-1
            )
            if tail_deg < db:
                # remaining steps only multiply by lc(b); do them in one go
                mult = lcb**i
                rem = [mult * r for r in rem]
                break
    while rem and rem[-1].is_zero():
        rem.pop()
    return MPoly.from_coeffs(a.ctx, v, rem)


def _gcd_prs(a: MPoly, b: MPoly) -> MPoly:
    """Primitive-PRS gcd fallback (always correct, potentially slow)."""
    pres_a = {v.index for v in a.variables_present()}
    pres_b = {v.index for v in b.variables_present()}
    common = pres_a & pres_b
    if not common:
        return MPoly.const(a.ctx, 1)
    v = a.ctx.var(max(common))
    ca, cb = _content_wrt(a, v), _content_wrt(b, v)
    cont = (
        gcd(ca, cb)
        if (not ca.is_constant() or not cb.is_constant())
        else MPoly.const(a.ctx, 1)
    )
    p = normalize(exact_div(a, ca) if not ca.is_constant() else a)
    q = normalize(exact_div(b, cb) if not cb.is_constant() else b)
    if p.degree(v) < q.degree(v):
        p, q = q, p
    while True:
        r = _prem(p, q, v)
        if r.is_zero():
            break
        if r.degree(v) == 0:
            q = MPoly.const(a.ctx, 1)
            break
        cr = _content_wrt(r, v)
        r = exact_div(r, cr) if not cr.is_constant() else r
        p, q = q, normalize(r)
        if p.degree(v) < q.degree(v):
            p, q = q, p
    if q.degree(v) > 0:
        cq = _content_wrt(q, v)
        g = normalize(exact_div(q, cq)) if not cq.is_constant() else normalize(q)
    else:
        g = MPoly.const(a.ctx, 1)
    return normalize(cont * g)


# -- resultants ----------------------------------------------------------------


def resultant(a: MPoly, b: MPoly, v: Var) -> MPoly:
    """Sylvester resultant eliminating v.

    Exact, including sign; agrees with the determinant of the Sylvester
    matrix of a and b with respect to v.  Inputs in at most two variables go
    through modular evaluation/interpolation; the general case runs the
    fraction-free subresultant PRS.
    """
    if a.is_zero() or b.is_zero():
        raise PolyError("resultant of the zero polynomial")
    da, db = a.degree(v), b.degree(v)
    if da <= 0 and db <= 0:
        raise PolyError("resultant needs positive degree in %s" % v.name)
    if da <= 0:
        return a**db
    if db <= 0:
        return b**da
    others = {w.index for w in a.variables_present()} | {
        w.index for w in b.variables_present()
    }
    others.discard(v.index)
    if len(others) <= 1 and da + db > 4:
        w = a.ctx.var(next(iter(others))) if others else None
        r = _resultant_bi_modular(a, b, v, w)
        if r is not None:
            return r
    sign = 1
    if da < db:
        a, b, da, db = b, a, db, da
        if (da & 1) and (db & 1):
            sign = -sign
    one = MPoly.const(a.ctx, 1)
    g, h = one, one
    while True:
        delta = da - db
        if (da & 1) and (db & 1):
            sign = -sign
        r = _prem(a, b, v)
        a, da = b, db
        if r.is_zero():
            return MPoly.zero(a.ctx)
        denom = g * h**delta
        b = exact_div(r, denom) if not (denom == 1) else r
        db = b.degree(v)
        g = a.lc(v)
        if delta:
            h = exact_div(g**delta, h ** (delta - 1)) if delta > 1 else g
        if db <= 0:
            break
    lb = b
    res = exact_div(lb**da, h ** (da - 1)) if da > 1 else lb
    return res * sign if sign == 1 else -res


def _dense_resultant_modp(A: list, B: list, p: int) -> int:
    """Resultant of dense univariate polynomials mod p."""
    res = 1
    while True:
        dA, dB = len(A) - 1, len(B) - 1
        if dA < dB:
            A, B = B, A
            if (dA & 1) and (dB & 1):
                res = p - res if res else 0
            continue
        if dB < 0:
            return 0
        if dB == 0:
            return res * pow(B[0], dA, p) % p
        inv = pow(B[-1], -1, p)
        R = list(A)
        for i in range(dA - dB, -1, -1):
            t = R[i + dB] % p
            if t:
                q = t * inv % p
                for j in range(dB + 1):
                    R[i + j] = (R[i + j] - q * B[j]) % p
        while R and R[-1] % p == 0:
            R.pop()
        dR = len(R) - 1
        if dR < 0:
            return 0
        res = res * pow(B[-1], dA - dR, p) % p
        if (dA & 1) and (dB & 1):
            res = p - res
        A, B = B, R


def _newton_expand(ts: list, coeffs: list, p: int) -> list:
    """Dense coefficients from Newton divided-difference form mod p."""
    poly: list = []
    for j in range(len(ts) - 1, -1, -1):
        # poly = poly * (x - ts[j]) + coeffs[j]
        new = [0] * (len(poly) + 1)
        t = ts[j] % p
        for i in range(len(poly)):
            new[i + 1] = (new[i + 1] + poly[i]) % p
            new[i] = (new[i] - poly[i] * t) % p
        new[0] = (new[0] + coeffs[j]) % p
        poly = new
    while poly and poly[-1] == 0:
        poly.pop()
    return poly


def _l1_norm(f: MPoly) -> int:
    return sum(abs(c) for c in f.terms.values())


def _resultant_bi_modular(
    a: MPoly, b: MPoly, v: Var, w: Optional[Var]
) -> Optional[MPoly]:
    """Exact resultant for inputs in at most the variables {v, w}.

    Evaluates w at many points, runs dense univariate resultants modulo
    word-size primes, interpolates by incremental Newton differences, and
    combines by CRT.  The Sylvester row bound caps the modulus; accumulation
    also stops once three consecutive primes leave the symmetric lift
    unchanged, and the first prime's degree estimate (a long run of
    vanishing divided differences) is re-validated at every later prime
    with extra interpolation points.
    """
    ctx = a.ctx
    da, db = a.degree(v), b.degree(v)
    if w is None:
        dxa = dxb = 0
    else:
        dxa, dxb = a.degree(w), b.degree(w)
    dres = da * dxb + db * dxa
    bound_bits = (
        db * (_l1_norm(a).bit_length() + 1) + da * (_l1_norm(b).bit_length() + 1) + 4
    )
    if w is not None:
        acl = [_dense_from(q, w) for q in a.coeffs_in(v)]
        bcl = [_dense_from(q, w) for q in b.coeffs_in(v)]
    else:
        acl = [[q.const_value()] for q in a.coeffs_in(v)]
        bcl = [[q.const_value()] for q in b.coeffs_in(v)]
    acc: Optional[dict] = None
    mod = 1
    stable = 0
    used = 0
    idx = 0
    known_deg: Optional[int] = None
    while True:
        if idx >= len(_GCD_PRIMES):
            _more_primes()
        p = _GCD_PRIMES[idx]
        idx += 1
        aclp = [[c % p for c in cl] for cl in acl]
        bclp = [[c % p for c in cl] for cl in bcl]
        if not any(aclp[-1]) or not any(bclp[-1]):
            continue
        used += 1
        if used > 400:
            return None
        # Newton accumulation with an early stop once the divided
        # differences vanish long enough (the true degree usually sits far
        # below the Sylvester bound); later primes take a few extra points
        # so a wrong degree guess is detected and accumulation restarts.
        invcache: dict = {}
        ts: list = []
        coeffs: list = []
        zero_run = 0
        target = dres if known_deg is None else min(known_deg + 4, dres)
        t = 0
        while len(ts) < target + 1 and t < p:
            la = _poly_eval_modp(aclp[-1], t, p)
            lb = _poly_eval_modp(bclp[-1], t, p)
            if la and lb:
                cur = _dense_resultant_modp(
                    [_poly_eval_modp(cl, t, p) for cl in aclp],
                    [_poly_eval_modp(cl, t, p) for cl in bclp],
                    p,
                )
                for j in range(len(ts)):
                    d = (t - ts[j]) % p
                    inv = invcache.get(d)
                    if inv is None:
                        inv = pow(d, -1, p)
                        invcache[d] = inv
                    cur = (cur - coeffs[j]) * inv % p
                ts.append(t)
                coeffs.append(cur)
                if cur == 0:
                    zero_run += 1
                    if zero_run >= 16:
                        break
                else:
                    zero_run = 0
            t += 1
        if len(ts) < target + 1 and zero_run < 16:
            continue  # not enough good points at this prime
        rp = _newton_expand(ts, coeffs, p)
        if known_deg is None:
            known_deg = max(len(rp) - 1, 0)
        elif len(rp) - 1 > known_deg:
            known_deg = None  # degree guess was too low; start over
            acc = None
            mod = 1
            stable = 0
            continue
        newmod = mod * p
        half = newmod // 2
        if acc is None:
            acc = {}
            for e, c in enumerate(rp):
                if c:
                    acc[e] = c if c <= p // 2 else c - p
            mod = p
            stable = 0
        else:
            inv = pow(mod % p, -1, p)
            changed = False
            merged = {}
            for e in set(acc) | {i for i, c in enumerate(rp) if c}:
                c1 = acc.get(e, 0)
                c2 = rp[e] if e < len(rp) else 0
                c = c1 + mod * ((c2 - c1) % p * inv % p)
                if c > half:
                    c -= newmod
                if c:
                    merged[e] = c
                if c != c1:
                    changed = True
            acc = merged
            mod = newmod
            stable = 0 if changed else stable + 1
        if mod.bit_length() > bound_bits or stable >= 3:
            break
    if acc is None:
        return None
    if w is None:
        return MPoly.const(ctx, acc.get(0, 0))
    terms = {}
    wshift = KBITS * (w.index - 1)
    degshift = ctx._degshift
    for e, c in acc.items():
        terms[(e << wshift) | (e << degshift)] = c
    return MPoly(ctx, terms)


def _dense_from(q: MPoly, w: Var) -> list:
    if q.is_zero():
        return [0]
    return [c.const_value() for c in q.coeffs_in(w)]


def _poly_eval_modp(coeffs: list, t: int, p: int) -> int:
    acc = 0
    for c in reversed(coeffs):
        acc = (acc * t + c) % p
    return acc


def discriminant(f: MPoly, v: Var) -> MPoly:
    """discrim(f, v) = (-1)^(d(d-1)/2) * Res(f, df/dv, v) / lc(f, v), exact."""
    d = f.degree(v)
    if d < 2:
        raise PolyError("discriminant needs degree >= 2 in %s" % v.name)
    r = resultant(f, f.derivative(v), v)
    r = exact_div(r, f.lc(v))
    if (d * (d - 1) // 2) % 2:
        r = -r
    return r


# -- structured resultant pieces ---------------------------------------------------
#
# Resultants of even polynomials split: for F = A(v^2) of degree 2m,
#   Res(F, dF/dv, v) = 2^(2m) * A(0) * Res_u(A, dA/du)^2
#   Res(A(v^2), B(v^2), v) = Res_u(A, B)^2
# Keeping projection outputs as lists of (factor, multiplicity) pieces makes
# the downstream squarefree/gcd work operate on small polynomials only.


def is_even_in(f: MPoly, v: Var) -> bool:
    vi = v.index - 1
    exp_of = f.ctx.exp_of
    return all(exp_of(k, vi) % 2 == 0 for k in f.terms)


def halve_var(f: MPoly, v: Var) -> MPoly:
    return _halve_exponents(f, [v.index - 1])


def selfres_pieces(p: MPoly, v: Var) -> list:
    """Factors-with-multiplicity of Res(p, dp/dv, v), up to sign and integer
    content.  Exact as a multiset of polynomial factors."""
    d = p.degree(v)
    if d <= 0:
        raise PolyError("self-resultant needs positive degree in %s" % v.name)
    if d >= 2 and is_even_in(p, v):
        a = halve_var(p, v)
        a0 = a.coeff_of(v, 0)
        out = [(a0, 1)]
        if a.degree(v) > 0:
            out.extend((q, 2 * m) for q, m in selfres_pieces(a, v))
        return out
    return [(resultant(p, p.derivative(v), v), 1)]


def res_pieces(a: MPoly, b: MPoly, v: Var) -> list:
    """Factors-with-multiplicity of Res(a, b, v), up to sign and content."""
    da, db = a.degree(v), b.degree(v)
    if da <= 0 and db <= 0:
        raise PolyError("resultant needs positive degree in %s" % v.name)
    if da <= 0:
        return [(a, db)]
    if db <= 0:
        return [(b, da)]
    if is_even_in(a, v) and is_even_in(b, v):
        return [(q, 2 * m) for q, m in res_pieces(halve_var(a, v), halve_var(b, v), v)]
    return [(resultant(a, b, v), 1)]


def refine_pieces(items: Iterable) -> list:
    """GCD-free basis with multiplicity bookkeeping.

    ``items`` yields (poly, tag, mult) triples; each poly is refined against
    the basis, splitting on common factors.  Returns (factor, {tag: mult})
    pairs with factors squarefree, pairwise coprime, primitive,
    positive-lead.  Input polys are decomposed squarefree first.
    """
    basis: list = []
    for p, tag, mult in items:
        if p.is_zero():
            raise PolyError("zero piece in refinement")
        if p.is_constant():
            continue
        for q, m in sqf_decompose(p).factors:
            parts = [(q, {tag: m * mult})]
            while parts:
                r, rt = parts.pop()
                if r.is_constant():
                    continue
                split = False
                for i in range(len(basis)):
                    bpoly, bt = basis[i]
                    g = gcd(r, bpoly)
                    if g.is_constant():
                        continue
                    b_rest = normalize(exact_div(bpoly, g))
                    r_rest = normalize(exact_div(r, g))
                    merged = dict(bt)
                    for tname, m2 in rt.items():
                        merged[tname] = merged.get(tname, 0) + m2
                    repl = []
                    if not b_rest.is_constant():
                        repl.append((b_rest, dict(bt)))
                    repl.append((g, merged))
                    basis[i : i + 1] = repl
                    if not r_rest.is_constant():
                        parts.append((r_rest, rt))
                    split = True
                    break
                if not split:
                    basis.append((r, dict(rt)))
    return basis


# -- squarefree decomposition ----------------------------------------------------


class SqfDecomp(NamedTuple):
    """Parity-split squarefree decomposition.

    input == unit_sign * content * prod(p**m for p, m in factors); the
    factors are primitive, squarefree, pairwise coprime, with positive
    leading coefficients.  ``odd_part`` / ``even_part`` list factors of odd
    / even multiplicity.
    """

    unit_sign: int
    content: int
    factors: tuple

    @property
    def odd_part(self) -> tuple:
        return tuple(p for p, m in self.factors if m % 2 == 1)

    @property
    def even_part(self) -> tuple:
        return tuple(p for p, m in self.factors if m % 2 == 0)


def _yun(f: MPoly, v: Var) -> list:
    """Yun decomposition of f (primitive w.r.t. v) into (factor, multiplicity)."""
    fp = f.derivative(v)
    g = gcd(f, fp)
    if g.is_constant():
        return [(normalize(f), 1)]
    out = []
    c = exact_div(f, g)
    d = exact_div(fp, g) - c.derivative(v)
    i = 1
    while not c.is_constant():
        a = gcd(c, d)
        if not a.is_constant():
            out.append((a, i))
        c = exact_div(c, a)
        d = exact_div(d, a) - c.derivative(v)
        i += 1
    return out


def _even_vars(f: MPoly) -> list:
    ctx = f.ctx
    out = []
    for vi in range(ctx.nvars):
        d = 0
        ok = True
        for k in f.terms:
            e = ctx.exp_of(k, vi)
            if e % 2:
                ok = False
                break
            if e > d:
                d = e
        if ok and d:
            out.append(vi)
    return out


def _msqf(f: MPoly) -> list:
    """Squarefree split of a primitive nonconstant f into coprime factors."""
    evs = _even_vars(f)
    if evs:
        # f = g(..., v^2, ...): decompose g and pull the substitution back.
        # A squarefree factor q of g stays squarefree after v -> v^2 except
        # for a bare v-factor, which doubles; split that off explicitly.
        out = []
        for q, m in _msqf(_halve_exponents(f, evs)):
            qe = _double_exponents(q, evs)
            for vi in evs:
                vvar = f.ctx.var(vi + 1)
                if qe.coeff_of(vvar, 0).is_zero():
                    out.append((MPoly.gen(f.ctx, vvar), 2 * m))
                    qe = exact_div(qe, MPoly.gen(f.ctx, vvar) ** 2)
            if not qe.is_constant():
                out.append((normalize(qe), m))
        return out
    lev = f.level()
    v = f.ctx.var(lev)
    cont = _content_wrt(f, v)
    pp = exact_div(f, cont) if not cont.is_constant() else f
    out = _yun(normalize(pp), v)
    if not cont.is_constant():
        out.extend(_msqf(normalize(cont)))
    return out


def sqf_decompose(h: MPoly) -> SqfDecomp:
    """Parity-split squarefree decomposition of a nonzero polynomial.

    Factors are squarefree-decomposition components grouped by multiplicity
    (coarser than irreducible factorization, but pairwise coprime).
    """
    if h.is_zero():
        raise PolyError("sqf_decompose(0) is undefined")
    if h.is_constant():
        c = h.const_value()
        return SqfDecomp(1 if c > 0 else -1, abs(c), ())
    factors = _msqf(normalize(h))
    factors.sort(key=lambda pm: (pm[1], sorted(pm[0].terms.items())))
    prod = MPoly.const(h.ctx, 1)
    for p, m in factors:
        prod = prod * p**m
    cu = exact_div(h, prod)
    c = cu.const_value()
    return SqfDecomp(1 if c > 0 else -1, abs(c), tuple(factors))


def squarefree_part(h: MPoly) -> MPoly:
    """sqrfree(h): product of the distinct squarefree factors; 1 for constants."""
    if h.is_zero():
        raise PolyError("squarefree part of 0 is undefined")
    if h.is_constant():
        return MPoly.const(h.ctx, 1)
    dec = sqf_decompose(h)
    acc = MPoly.const(h.ctx, 1)
    for p, _ in dec.factors:
        acc = acc * p
    return acc


def is_squarefree(h: MPoly) -> bool:
    if h.is_zero():
        return False
    if h.is_constant():
        return True
    return all(m == 1 for _, m in sqf_decompose(h).factors)


# -- evaluation --------------------------------------------------------------------


def evaluate(f: MPoly, at: dict) -> QPoly:
    """Exact partial evaluation at rational values for a subset of variables."""
    if not at:
        return QPoly(f, 1)
    ctx = f.ctx
    assign = {}
    for v, val in at.items():
        assign[v.index - 1] = Fraction(val)
    acc: dict = {}
    for k, c in f.terms.items():
        mult = Fraction(c)
        exps = list(ctx.unpack(k))
        for vi, val in assign.items():
            e = exps[vi]
            if e:
                mult *= val**e
                exps[vi] = 0
        if mult:
            nk = ctx.pack(exps)
            nv = acc.get(nk, Fraction(0)) + mult
            if nv:
                acc[nk] = nv
            elif nk in acc:
                del acc[nk]
    den = 1
    for q in acc.values():
        den = den * q.denominator // math.gcd(den, q.denominator)
    terms = {k: int(q * den) for k, q in acc.items() if q}
    return _qpoly(MPoly(ctx, terms), den)


def clear_denominators(q: QPoly) -> MPoly:
    """Scale a rational polynomial by its positive denominator."""
    return q.num


def fiber_coeffs(f: MPoly, prefix: Sequence[Fraction], v: Var) -> list:
    """Integer coefficient list of f(prefix, v) after clearing denominators.

    ``prefix`` assigns x1..xk for k = v.index - 1; variables above v must
    not occur in f.  The positive rescaling preserves roots and signs.
    """
    ctx = f.ctx
    vi = v.index - 1
    if len(prefix) != vi:
        raise PolyError("prefix length mismatch")
    vals = [Fraction(p) for p in prefix]
    exp_of = ctx.exp_of
    acc: dict = {}
    for k, c in f.terms.items():
        for wi in range(vi + 1, ctx.nvars):
            if exp_of(k, wi):
                raise PolyError("polynomial involves a variable above %s" % v.name)
        mult = Fraction(c)
        for wi in range(vi):
            e = exp_of(k, wi)
            if e:
                mult *= vals[wi] ** e
        if mult:
            e = exp_of(k, vi)
            acc[e] = acc.get(e, Fraction(0)) + mult
    acc = {e: q for e, q in acc.items() if q}
    if not acc:
        return []
    den = 1
    for q in acc.values():
        den = den * q.denominator // math.gcd(den, q.denominator)
    d = max(acc)
    out = [0] * (d + 1)
    for e, q in acc.items():
        out[e] = int(q * den)
    return out
