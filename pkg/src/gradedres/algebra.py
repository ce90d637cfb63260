"""Exact arithmetic: prime fields, monomials, graded polynomials, quotient rings.

Everything is graded.  A ring is F_p[x_1..x_n]/I with I homogeneous (the zero
ideal gives the polynomial ring itself), positive integer variable weights
(default 1) and the graded-reverse-lexicographic order fixed once per ring.
All values are immutable after construction; the reduced Groebner basis of the
defining ideal is computed once by ``make_ring`` and cached on the ring.
"""

from __future__ import annotations

import string

from . import errors

MAX_DEGREE = 2**31


def is_prime(n):
    if n < 2:
        return False
    d = 2
    while d * d <= n:
        if n % d == 0:
            return False
        d += 1
    return True


class PrimeField:
    """Arithmetic helpers for F_p; elements are canonical ints in [0, p)."""

    __slots__ = ("p",)

    def __init__(self, p):
        if not is_prime(p):
            raise errors.NotPrime(f"{p} is not prime")
        if not 2 < p < 2**31:
            raise errors.NotPrime(f"characteristic {p} out of supported range (2, 2^31)")
        self.p = p

    def add(self, a, b):
        return (a + b) % self.p

    def sub(self, a, b):
        return (a - b) % self.p

    def mul(self, a, b):
        return (a * b) % self.p

    def neg(self, a):
        return (-a) % self.p

    def inv(self, a):
        if a % self.p == 0:
            raise ZeroDivisionError("inverse of 0 in F_p")
        return pow(a, self.p - 2, self.p)

    def div(self, a, b):
        return (a * self.inv(b)) % self.p

    def __eq__(self, other):
        return isinstance(other, PrimeField) and self.p == other.p

    def __hash__(self):
        return hash(("PrimeField", self.p))

    def __repr__(self):
        return f"F_{self.p}"


# ---------------------------------------------------------------------------
# Monomials: plain exponent tuples.

def mono_mul(a, b):
    m = tuple(x + y for x, y in zip(a, b))
    if any(e >= MAX_DEGREE for e in m):
        raise errors.DegreeOverflow("monomial exponent exceeds 2^31")
    return m


def mono_div(a, b):
    """a / b or None if b does not divide a."""
    q = []
    for x, y in zip(a, b):
        if x < y:
            return None
        q.append(x - y)
    return tuple(q)


def mono_lcm(a, b):
    return tuple(max(x, y) for x, y in zip(a, b))


def mono_deg(m, weights):
    return sum(e * w for e, w in zip(m, weights))


class QuotientRing:
    """Graded ring F_p[x_1..x_n]/I, I homogeneous; grevlex order.

    Use :func:`make_ring` to construct one (it validates input and computes
    the reduced Groebner basis of the defining ideal).
    """

    __slots__ = ("field", "names", "weights", "order", "ideal", "gb", "_zero_mono")

    def __init__(self, field, names, weights):
        self.field = field
        self.names = tuple(names)
        self.weights = tuple(weights)
        self.order = "grevlex"
        self.ideal = ()
        self.gb = ()
        self._zero_mono = (0,) * len(self.names)

    # -- basic properties ---------------------------------------------------

    @property
    def p(self):
        return self.field.p

    @property
    def nvars(self):
        return len(self.names)

    @property
    def is_polynomial_ring(self):
        return not self.ideal

    def mono_key(self, m):
        """Sort key: larger key = larger monomial under weighted grevlex."""
        return (mono_deg(m, self.weights), tuple(-e for e in reversed(m)))

    def same_ambient(self, other):
        return (
            self.field == other.field
            and self.names == other.names
            and self.weights == other.weights
        )

    def __eq__(self, other):
        if self is other:
            return True
        return (
            isinstance(other, QuotientRing)
            and self.same_ambient(other)
            and tuple(g.terms for g in self.ideal) == tuple(g.terms for g in other.ideal)
        )

    def __hash__(self):
        return hash((self.field.p, self.names, self.weights, tuple(g.terms for g in self.ideal)))

    def __repr__(self):
        base = f"F_{self.p}[{','.join(self.names)}]"
        if self.ideal:
            return f"{base}/({', '.join(str(g) for g in self.ideal)})"
        return base

    # -- polynomial construction --------------------------------------------

    def zero(self):
        return Polynomial(self, ())

    def one(self):
        return Polynomial(self, ((self._zero_mono, 1),))

    def scalar(self, c):
        c %= self.p
        if c == 0:
            return self.zero()
        return Polynomial(self, ((self._zero_mono, c),))

    def variable(self, name):
        i = self.names.index(name)
        exps = [0] * self.nvars
        exps[i] = 1
        return Polynomial(self, ((tuple(exps), 1),))

    def gens(self):
        return [self.variable(n) for n in self.names]

    def monomial(self, exps, coeff=1):
        coeff %= self.p
        if coeff == 0:
            return self.zero()
        return Polynomial(self, ((tuple(exps), coeff),))

    def from_dict(self, d):
        """Polynomial from {exponent tuple: coefficient}; normalizes."""
        terms = [(m, c % self.p) for m, c in d.items() if c % self.p]
        terms.sort(key=lambda t: self.mono_key(t[0]), reverse=True)
        return Polynomial(self, tuple(terms))

    def coerce(self, obj):
        """Accept a Polynomial over an identical ambient, an int, or a string."""
        if isinstance(obj, Polynomial):
            if obj.ring is self:
                return obj
            if self.same_ambient(obj.ring):
                return Polynomial(self, obj.terms)
            raise errors.RingMismatch(f"cannot coerce from {obj.ring!r} to {self!r}")
        if isinstance(obj, int):
            return self.scalar(obj)
        if isinstance(obj, str):
            return parse_polynomial(obj, self)
        raise TypeError(f"cannot coerce {obj!r} into {self!r}")

    def poly(self, text):
        return parse_polynomial(text, self)

    # -- normal form modulo the defining ideal -------------------------------

    def reduce(self, f):
        """Normal form of f modulo the cached reduced GB of the defining ideal."""
        if not self.ideal or not f.terms:
            return f
        work = list(f.terms)
        out = []
        leads = [(g.terms[0][0], g) for g in self.gb]
        while work:
            m, c = work[0]
            hit = None
            for lm, g in leads:
                q = mono_div(m, lm)
                if q is not None:
                    hit = (q, g)
                    break
            if hit is None:
                out.append(work[0])
                work = work[1:]
                continue
            q, g = hit
            # g is monic: subtract c * x^q * g
            sub = {}
            for gm, gc in g.terms:
                sub[mono_mul(gm, q)] = (c * gc) % self.p
            work = _merge_sub(self, work, sub)
        return Polynomial(self, tuple(out))

    # -- graded pieces --------------------------------------------------------

    def monomials_of_degree(self, d):
        """All ambient monomials of weighted degree d, sorted descending."""
        if d < 0:
            return []
        out = []

        def rec(i, rem, acc):
            if i == self.nvars:
                if rem == 0:
                    out.append(tuple(acc))
                return
            w = self.weights[i]
            for e in range(rem // w + 1):
                rec(i + 1, rem - e * w, acc + [e])

        rec(0, d, [])
        out.sort(key=self.mono_key, reverse=True)
        return out

    def standard_monomials(self, d):
        """Monomials of degree d not divisible by a lead monomial of the ideal GB.

        These represent an F_p basis of the degree-d piece of the ring.
        """
        leads = [g.terms[0][0] for g in self.gb]
        return [
            m
            for m in self.monomials_of_degree(d)
            if not any(mono_div(m, lm) is not None for lm in leads)
        ]


def _merge_sub(ring, terms, sub):
    """terms - sub where terms is a sorted term list and sub a {mono: coeff} dict."""
    p = ring.p
    acc = dict(terms)
    for m, c in sub.items():
        v = (acc.get(m, 0) - c) % p
        if v:
            acc[m] = v
        else:
            acc.pop(m, None)
    out = sorted(acc.items(), key=lambda t: ring.mono_key(t[0]), reverse=True)
    return out


class Polynomial:
    """Homogeneous-friendly exact polynomial: sorted terms ((exps), coeff)."""

    __slots__ = ("ring", "terms")

    def __init__(self, ring, terms):
        self.ring = ring
        self.terms = terms

    # -- predicates -----------------------------------------------------------

    @property
    def is_zero(self):
        return not self.terms

    def degree(self):
        """Common weighted degree if homogeneous, else None.  Raises on zero."""
        if not self.terms:
            raise errors.ZeroPolynomial("the zero polynomial has no degree")
        degs = {mono_deg(m, self.ring.weights) for m, _ in self.terms}
        if len(degs) == 1:
            return degs.pop()
        return None

    @property
    def is_homogeneous(self):
        return not self.terms or self.degree() is not None

    def lead_monomial(self):
        return self.terms[0][0]

    def lead_coeff(self):
        return self.terms[0][1]

    def constant_value(self):
        """The scalar value if this is a constant, else None."""
        if not self.terms:
            return 0
        if len(self.terms) == 1 and self.terms[0][0] == self.ring._zero_mono:
            return self.terms[0][1]
        return None

    # -- arithmetic -----------------------------------------------------------

    def _check(self, other):
        if self.ring is not other.ring and self.ring != other.ring:
            raise errors.RingMismatch("polynomials over different rings")

    def __add__(self, other):
        if isinstance(other, int):
            other = self.ring.scalar(other)
        self._check(other)
        acc = dict(self.terms)
        p = self.ring.p
        for m, c in other.terms:
            v = (acc.get(m, 0) + c) % p
            if v:
                acc[m] = v
            else:
                acc.pop(m, None)
        return self.ring.from_dict(acc)

    def __neg__(self):
        p = self.ring.p
        return Polynomial(self.ring, tuple((m, (-c) % p) for m, c in self.terms))

    def __sub__(self, other):
        if isinstance(other, int):
            other = self.ring.scalar(other)
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, int):
            c = other % self.ring.p
            if c == 0:
                return self.ring.zero()
            return Polynomial(self.ring, tuple((m, (c * x) % self.ring.p) for m, x in self.terms))
        self._check(other)
        p = self.ring.p
        acc = {}
        for m1, c1 in self.terms:
            for m2, c2 in other.terms:
                m = mono_mul(m1, m2)
                v = (acc.get(m, 0) + c1 * c2) % p
                if v:
                    acc[m] = v
                else:
                    acc.pop(m, None)
        return self.ring.from_dict(acc)

    __rmul__ = __mul__

    def __pow__(self, n):
        if n < 0:
            raise ValueError("negative power of a polynomial")
        out = self.ring.one()
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base if n > 1 else base
            n >>= 1
        return out

    def scale(self, c):
        return self * int(c)

    def monic(self):
        if not self.terms:
            return self
        return self * self.ring.field.inv(self.lead_coeff())

    def __eq__(self, other):
        return (
            isinstance(other, Polynomial)
            and self.terms == other.terms
            and (self.ring is other.ring or self.ring == other.ring)
        )

    def __hash__(self):
        return hash(self.terms)

    # -- display --------------------------------------------------------------

    def __str__(self):
        if not self.terms:
            return "0"
        p = self.ring.p
        parts = []
        for m, c in self.terms:
            # balanced representative for readability: 100 -> -1 at p=101
            cv = c - p if c > p // 2 else c
            factors = []
            for name, e in zip(self.ring.names, m):
                if e == 1:
                    factors.append(name)
                elif e > 1:
                    factors.append(f"{name}^{e}")
            body = "*".join(factors)
            mag = abs(cv)
            if not body:
                text = str(mag)
            elif mag == 1:
                text = body
            else:
                text = f"{mag}*{body}"
            parts.append(("- " if cv < 0 else "+ ") + text)
        s = " ".join(parts)
        return s[2:] if s.startswith("+ ") else "-" + s[2:]

    def __repr__(self):
        return f"<{self} over {self.ring!r}>"


# ---------------------------------------------------------------------------
# Ring construction.

def make_ring(p, names, weights=None, ideal_gens=()):
    """Build F_p[names]/(ideal_gens) with the reduced ideal GB cached.

    ``ideal_gens`` entries may be strings (parsed in the declared variables)
    or polynomials over an identical ambient ring.  Every generator must be
    homogeneous for the declared weights.
    """
    field = PrimeField(p)
    names = tuple(names)
    if len(set(names)) != len(names):
        raise errors.DuplicateVariable(f"duplicate variable in {names}")
    for n in names:
        if not n or not all(ch in string.ascii_letters + string.digits + "_" for ch in n) or n[0] in string.digits:
            raise errors.DuplicateVariable(f"bad variable name {n!r}")
    if weights is None:
        weights = (1,) * len(names)
    weights = tuple(weights)
    if len(weights) != len(names):
        raise errors.NonHomogeneousIdeal("weights/variables length mismatch")
    if any(w <= 0 for w in weights):
        raise errors.NonHomogeneousIdeal("weights must be positive")

    ring = QuotientRing(field, names, weights)
    gens = []
    for g in ideal_gens:
        f = ring.coerce(g)
        if f.is_zero:
            continue
        if f.degree() is None:
            raise errors.NonHomogeneousIdeal(f"ideal generator {f} is not homogeneous")
        gens.append(f)
    if gens:
        from . import groebner  # deferred: groebner imports this module

        ring.ideal = tuple(gens)
        ring.gb = tuple(groebner.reduced_ideal_gb(ring, gens))
        if any(g.constant_value() not in (None, 0) for g in ring.gb):
            raise errors.NonHomogeneousIdeal("defining ideal is the unit ideal")
    return ring


def poly_arith(f, g, op):
    """Dispatch basic arithmetic; ``op`` in {add, sub, mul, scalar-mul}."""
    if op == "add":
        return f + g
    if op == "sub":
        return f - g
    if op == "mul":
        return f * g
    if op == "scalar-mul":
        return f * g if isinstance(g, int) else g * f
    raise ValueError(f"unknown op {op!r}")


def weighted_degree(f):
    """Common weighted degree of a nonzero homogeneous polynomial, else None."""
    return f.degree()


# ---------------------------------------------------------------------------
# A small standalone expression parser for library/test convenience.  The CLI
# script language has its own recursive-descent parser with line/column
# diagnostics; this one handles bare polynomial strings like "x^2 - 3*x*y".

class _Tok:
    def __init__(self, kind, value, pos):
        self.kind = kind
        self.value = value
        self.pos = pos


def _lex_poly(text):
    toks = []
    i = 0
    while i < len(text):
        ch = text[i]
        if ch.isspace():
            i += 1
            continue
        if ch.isdigit():
            j = i
            while j < len(text) and text[j].isdigit():
                j += 1
            toks.append(_Tok("num", int(text[i:j]), i))
            i = j
            continue
        if ch.isalpha() or ch == "_":
            j = i
            while j < len(text) and (text[j].isalnum() or text[j] == "_"):
                j += 1
            toks.append(_Tok("name", text[i:j], i))
            i = j
            continue
        if ch in "+-*^()":
            toks.append(_Tok(ch, ch, i))
            i += 1
            continue
        raise errors.ParseError(f"unexpected character {ch!r}", col=i)
    toks.append(_Tok("end", None, len(text)))
    return toks


def _split_name(name, ring, pos):
    """Resolve an identifier to variables, greedily splitting juxtapositions."""
    if name in ring.names:
        return [name]
    out = []
    rest = name
    while rest:
        hit = None
        for v in sorted(ring.names, key=len, reverse=True):
            if rest.startswith(v):
                hit = v
                break
        if hit is None:
            raise errors.UnknownName(f"unknown variable {name!r}", col=pos)
        out.append(hit)
        rest = rest[len(hit):]
    return out


class _PolyParser:
    def __init__(self, toks, ring):
        self.toks = toks
        self.i = 0
        self.ring = ring

    def peek(self):
        return self.toks[self.i]

    def next(self):
        t = self.toks[self.i]
        self.i += 1
        return t

    def parse(self):
        f = self.expr()
        t = self.peek()
        if t.kind != "end":
            raise errors.ParseError(f"unexpected {t.value!r}", col=t.pos)
        return f

    def expr(self):
        f = self.term()
        while self.peek().kind in ("+", "-"):
            op = self.next().kind
            g = self.term()
            f = f + g if op == "+" else f - g
        return f

    def term(self):
        f = self.factor()
        while True:
            t = self.peek()
            if t.kind == "*":
                self.next()
                f = f * self.factor()
            elif t.kind in ("num", "name", "("):
                f = f * self.factor()  # implicit multiplication: 2x, x(y+z)
            else:
                return f

    def factor(self):
        sign = 1
        while self.peek().kind in ("+", "-"):
            if self.next().kind == "-":
                sign = -sign
        f = self.atom()
        while self.peek().kind == "^":
            self.next()
            t = self.next()
            if t.kind != "num":
                raise errors.ParseError("exponent must be an integer", col=t.pos)
            f = f ** t.value
        return f if sign == 1 else -f

    def atom(self):
        t = self.next()
        if t.kind == "num":
            return self.ring.scalar(t.value)
        if t.kind == "name":
            out = self.ring.one()
            for v in _split_name(t.value, self.ring, t.pos):
                out = out * self.ring.variable(v)
            # adjacent ^ binds to the last variable of a juxtaposition: xy^2 = x*y^2
            if self.peek().kind == "^":
                self.next()
                e = self.next()
                if e.kind != "num":
                    raise errors.ParseError("exponent must be an integer", col=e.pos)
                names = _split_name(t.value, self.ring, t.pos)
                out = self.ring.one()
                for v in names[:-1]:
                    out = out * self.ring.variable(v)
                out = out * self.ring.variable(names[-1]) ** e.value
            return out
        if t.kind == "(":
            f = self.expr()
            c = self.next()
            if c.kind != ")":
                raise errors.ParseError("expected ')'", col=c.pos)
            return f
        raise errors.ParseError(f"unexpected {t.value!r}", col=t.pos)


def parse_polynomial(text, ring):
    return _PolyParser(_lex_poly(text), ring).parse()
