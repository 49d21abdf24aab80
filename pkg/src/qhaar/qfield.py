"""Exact arithmetic in the field Q(q).

Two layers:

``IntPoly``
    Laurent polynomials in q with arbitrary-precision integer
    coefficients, e.g. q - q^-1.  Stored as an exponent offset plus a
    dense coefficient tuple.

``RationalFunction``
    Reduced fractions num/den of ordinary (nonnegative-exponent)
    integer polynomials.  Negative powers of q are cleared into the
    denominator, so q - q^-1 is stored as (q^2 - 1)/q.  The canonical
    form is unique: num and den are coprime in Z[q] (polynomial gcd and
    integer content both trivial) and den has a positive leading
    coefficient.  Equal values therefore compare equal structurally.

No floating point anywhere; evaluation returns ``fractions.Fraction``.
"""

from fractions import Fraction
from math import comb, gcd

from .kernels import (
    padd, pcontent, pdivexact, pdivexact_int, pgcd, pmul, pmul_int, pneg,
    pnorm, pshift, psub,
)

__all__ = [
    "IntPoly", "RationalFunction", "RF_ZERO", "RF_ONE", "RF_Q",
    "rf_int", "rf_q_power", "q2_int", "q2_factorial",
    "q_binom_and_factorial", "parse_rational",
]


class IntPoly:
    """A Laurent polynomial sum(coeffs[t] * q**(off + t)) over Z.

    Canonical: coeffs has no leading/trailing zeros; the zero polynomial
    is off=0, coeffs=().  Immutable and hashable.
    """

    __slots__ = ("off", "coeffs")

    def __init__(self, off=0, coeffs=()):
        coeffs = list(coeffs)
        lead = 0
        while coeffs and coeffs[0] == 0:
            coeffs.pop(0)
            lead += 1
        while coeffs and coeffs[-1] == 0:
            coeffs.pop()
        object.__setattr__(self, "off", off + lead if coeffs else 0)
        object.__setattr__(self, "coeffs", tuple(coeffs))

    def __setattr__(self, name, value):
        raise AttributeError("IntPoly is immutable")

    @classmethod
    def term(cls, coeff, exp=0):
        return cls(exp, (coeff,))

    @classmethod
    def from_map(cls, mapping):
        """Build from {exponent: coefficient}."""
        items = {e: c for e, c in mapping.items() if c}
        if not items:
            return cls()
        lo = min(items)
        hi = max(items)
        return cls(lo, [items.get(e, 0) for e in range(lo, hi + 1)])

    def to_map(self):
        return {self.off + t: c for t, c in enumerate(self.coeffs) if c}

    def is_zero(self):
        return not self.coeffs

    def min_exp(self):
        return self.off

    def max_exp(self):
        return self.off + len(self.coeffs) - 1

    def __bool__(self):
        return bool(self.coeffs)

    def __eq__(self, other):
        return (isinstance(other, IntPoly) and self.off == other.off
                and self.coeffs == other.coeffs)

    def __hash__(self):
        return hash((self.off, self.coeffs))

    def __add__(self, other):
        if not self.coeffs:
            return other
        if not other.coeffs:
            return self
        off = min(self.off, other.off)
        a = pshift(list(self.coeffs), self.off - off)
        b = pshift(list(other.coeffs), other.off - off)
        return IntPoly(off, padd(a, b))

    def __sub__(self, other):
        return self + (-other)

    def __neg__(self):
        return IntPoly(self.off, pneg(list(self.coeffs)))

    def __mul__(self, other):
        if isinstance(other, int):
            return IntPoly(self.off, pmul_int(list(self.coeffs), other))
        return IntPoly(self.off + other.off,
                       pmul(list(self.coeffs), list(other.coeffs)))

    __rmul__ = __mul__

    def __pow__(self, k):
        out = IntPoly.term(1)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def shifted(self, s):
        """Multiply by q**s."""
        return IntPoly(self.off + s, self.coeffs)

    def __str__(self):
        return _laurent_text(self.off, self.coeffs)

    def __repr__(self):
        return f"IntPoly({self})"


def _monomial_text(coeff, exp):
    if exp == 0:
        return str(coeff)
    p = "q" if exp == 1 else f"q^{exp}"
    if coeff == 1:
        return p
    if coeff == -1:
        return "-" + p
    return f"{coeff}*{p}"


def _laurent_text(off, coeffs):
    """Terms in decreasing exponent, ' + '/' - ' joins: q^2 - 2 + q^-2."""
    if not coeffs:
        return "0"
    parts = []
    for t in range(len(coeffs) - 1, -1, -1):
        c = coeffs[t]
        if not c:
            continue
        text = _monomial_text(abs(c), off + t)
        if not parts:
            parts.append(_monomial_text(c, off + t))
        else:
            parts.append("- " + text if c < 0 else "+ " + text)
    return " ".join(parts)


class RationalFunction:
    """An element of Q(q) in canonical reduced form.

    num and den are dense little-endian integer coefficient tuples of
    ordinary polynomials (index = exponent).  Invariants: den != 0,
    gcd(num, den) = 1 in Z[q] including integer content, leading
    coefficient of den positive.
    """

    __slots__ = ("num", "den")

    def __init__(self, num, den=(1,), _canonical=False):
        num = list(num)
        den = list(den)
        if not _canonical:
            pnorm(num)
            pnorm(den)
            if not den:
                raise ZeroDivisionError("rational function with zero denominator")
            if not num:
                den = [1]
            else:
                g = pgcd(num, den)
                if len(g) > 1 or g[0] != 1:
                    num = pdivexact(num, g)
                    den = pdivexact(den, g)
                if den[-1] < 0:
                    num = pneg(num)
                    den = pneg(den)
        object.__setattr__(self, "num", tuple(num))
        object.__setattr__(self, "den", tuple(den))

    def __setattr__(self, name, value):
        raise AttributeError("RationalFunction is immutable")

    # -- constructors ------------------------------------------------

    @classmethod
    def from_laurent(cls, p, d=None):
        """p/d for IntPoly p and optional IntPoly d."""
        if d is None:
            d = IntPoly.term(1)
        if not d.coeffs:
            raise ZeroDivisionError("rational function with zero denominator")
        shift = p.off - d.off
        n = list(p.coeffs)
        dd = list(d.coeffs)
        if shift >= 0:
            n = pshift(n, shift)
        else:
            dd = pshift(dd, -shift)
        return cls(n, dd)

    @classmethod
    def from_fraction(cls, fr):
        fr = Fraction(fr)
        return cls([fr.numerator], [fr.denominator])

    # -- predicates --------------------------------------------------

    def is_zero(self):
        return not self.num

    def is_one(self):
        return self.num == (1,) and self.den == (1,)

    def is_integer(self):
        return len(self.num) <= 1 and self.den == (1,)

    def __bool__(self):
        return bool(self.num)

    def __eq__(self, other):
        if isinstance(other, int):
            other = rf_int(other)
        return (isinstance(other, RationalFunction)
                and self.num == other.num and self.den == other.den)

    def __hash__(self):
        return hash((self.num, self.den))

    # -- arithmetic --------------------------------------------------

    def __add__(self, other):
        if isinstance(other, int):
            other = rf_int(other)
        if not self.num:
            return other
        if not other.num:
            return self
        n1, d1 = list(self.num), list(self.den)
        n2, d2 = list(other.num), list(other.den)
        if d1 == d2:
            n = padd(n1, n2)
            if not n:
                return RF_ZERO
            return RationalFunction(n, d1)
        g = pgcd(d1, d2)
        if len(g) == 1 and g[0] == 1:
            n = padd(pmul(n1, d2), pmul(n2, d1))
            if not n:
                return RF_ZERO
            # denominators coprime: only content of n against d1*d2 can reduce
            return RationalFunction(n, pmul(d1, d2))
        d1g = pdivexact(d1, g)
        d2g = pdivexact(d2, g)
        n = padd(pmul(n1, d2g), pmul(n2, d1g))
        if not n:
            return RF_ZERO
        return RationalFunction(n, pmul(d1, d2g))

    __radd__ = __add__

    def __neg__(self):
        if not self.num:
            return self
        return RationalFunction(pneg(list(self.num)), self.den, _canonical=True)

    def __sub__(self, other):
        if isinstance(other, int):
            other = rf_int(other)
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, int):
            other = rf_int(other)
        if not self.num or not other.num:
            return RF_ZERO
        n1, d1 = list(self.num), list(self.den)
        n2, d2 = list(other.num), list(other.den)
        # cross-cancel before multiplying; inputs are reduced, so the
        # product of the leftovers is reduced up to sign convention
        g1 = pgcd(n1, d2)
        if len(g1) > 1 or g1[0] != 1:
            n1 = pdivexact(n1, g1)
            d2 = pdivexact(d2, g1)
        g2 = pgcd(n2, d1)
        if len(g2) > 1 or g2[0] != 1:
            n2 = pdivexact(n2, g2)
            d1 = pdivexact(d1, g2)
        num = pmul(n1, n2)
        den = pmul(d1, d2)
        if den[-1] < 0:
            num = pneg(num)
            den = pneg(den)
        return RationalFunction(num, den, _canonical=True)

    __rmul__ = __mul__

    def inverse(self):
        if not self.num:
            raise ZeroDivisionError("inverse of zero rational function")
        num, den = list(self.den), list(self.num)
        if den[-1] < 0:
            num = pneg(num)
            den = pneg(den)
        return RationalFunction(num, den, _canonical=True)

    def __truediv__(self, other):
        if isinstance(other, int):
            other = rf_int(other)
        return self * other.inverse()

    def __rtruediv__(self, other):
        if isinstance(other, int):
            other = rf_int(other)
        return other * self.inverse()

    def __pow__(self, k):
        if k < 0:
            return self.inverse() ** (-k)
        out = RF_ONE
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    # -- evaluation and text -----------------------------------------

    def eval_at(self, q0):
        """Exact value at q = q0 (a Fraction or int); raises on a pole."""
        q0 = Fraction(q0)
        den = _eval_poly(self.den, q0)
        if den == 0:
            raise ZeroDivisionError(f"pole at q = {q0}")
        return _eval_poly(self.num, q0) / den

    def as_laurent(self):
        """Return IntPoly if den is c*q^k with c | content(num), else None."""
        den = self.den
        k = len(den) - 1
        if any(den[:k]) or den[k] != 1:
            # canonical form has coprime content, so den must be exactly q^k
            return None
        return IntPoly(-k, self.num)

    def __str__(self):
        lp = self.as_laurent()
        if lp is not None:
            return str(lp)
        ntext = _laurent_text(0, self.num)
        dtext = _laurent_text(0, self.den)
        if " " in ntext or ntext.startswith("-"):
            ntext = f"({ntext})"
        if " " in dtext or "*" in dtext:
            # guard products: 1/(2*q) must not re-parse as (1/2)*q
            dtext = f"({dtext})"
        return f"{ntext}/{dtext}"

    def __repr__(self):
        return f"RationalFunction({self})"


def _eval_poly(coeffs, x):
    y = Fraction(0)
    for c in reversed(coeffs):
        y = y * x + c
    return y


RF_ZERO = RationalFunction((), (1,), _canonical=True)
RF_ONE = RationalFunction((1,), (1,), _canonical=True)
RF_Q = RationalFunction((0, 1), (1,), _canonical=True)

_int_cache = {}


def rf_int(k):
    try:
        return _int_cache[k]
    except KeyError:
        v = RationalFunction((k,) if k else (), (1,), _canonical=True)
        if -64 <= k <= 64:
            _int_cache[k] = v
        return v


def rf_q_power(e):
    """q**e as a RationalFunction, e any integer."""
    if e >= 0:
        return RationalFunction((0,) * e + (1,), (1,), _canonical=True)
    return RationalFunction((1,), (0,) * (-e) + (1,), _canonical=True)


def q2_int(n):
    """[n]_{q^2} = (1 - q^{2n})/(1 - q^2) = 1 + q^2 + ... + q^{2(n-1)}."""
    if n < 0:
        raise ValueError("q2_int needs n >= 0")
    coeffs = [0] * (2 * n - 1) if n else []
    for j in range(n):
        coeffs[2 * j] = 1
    return RationalFunction(coeffs, (1,))


def q2_factorial(n):
    """[n]_{q^2}! = prod_{j=1..n} [j]_{q^2}."""
    out = RF_ONE
    for j in range(1, n + 1):
        out = out * q2_int(j)
    return out


def q_binom_and_factorial(n, k):
    """Bundle ([n]_{q^2}, [n]_{q^2}!, C(n, k)) used by the driver formulas.

    The binomial coefficient stays a plain integer; only the q-integers
    are rational functions.
    """
    if not 0 <= k <= n:
        raise ValueError("need 0 <= k <= n")
    return q2_int(n), q2_factorial(n), comb(n, k)


# -- parsing ---------------------------------------------------------
#
# Grammar (whitespace-insensitive):
#   expr   := ['-'] term (('+'|'-') term)*
#   term   := factor (('*'|'/')? factor)*      adjacency = multiplication
#   factor := atom ['^' ['-'] int]
#   atom   := int | 'q' | '(' expr ')'
# This accepts canonical renderings ("(-q^3)/(q^6 + 2*q^4 + 2*q^2 + 1)",
# "q - q^-1") as well as factored input like "(1+q^2)(1+q^2+q^4)".


class _Tok:
    def __init__(self, text):
        self.text = text
        self.pos = 0

    def peek(self):
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def take(self):
        ch = self.peek()
        self.pos += 1
        return ch

    def take_int(self):
        self.peek()
        start = self.pos
        while self.pos < len(self.text) and self.text[self.pos].isdigit():
            self.pos += 1
        if self.pos == start:
            raise ValueError(f"expected integer at position {start} in {self.text!r}")
        return int(self.text[start:self.pos])


def parse_rational(text):
    """Parse canonical (or factored) rational-function text."""
    tok = _Tok(text)
    val = _parse_expr(tok)
    if tok.peek():
        raise ValueError(f"trailing input at position {tok.pos} in {text!r}")
    return val


def _parse_expr(tok):
    if tok.peek() == "-":
        tok.take()
        val = -_parse_term(tok)
    else:
        val = _parse_term(tok)
    while tok.peek() and tok.peek() in "+-":
        op = tok.take()
        rhs = _parse_term(tok)
        val = val + rhs if op == "+" else val - rhs
    return val


def _parse_term(tok):
    val = _parse_factor(tok)
    while True:
        ch = tok.peek()
        if ch == "*":
            tok.take()
            val = val * _parse_factor(tok)
        elif ch == "/":
            tok.take()
            val = val / _parse_factor(tok)
        elif ch == "(" or ch == "q" or ch.isdigit():
            val = val * _parse_factor(tok)
        else:
            return val


def _parse_factor(tok):
    base = _parse_atom(tok)
    if tok.peek() == "^":
        tok.take()
        neg = tok.peek() == "-"
        if neg:
            tok.take()
        e = tok.take_int()
        base = base ** (-e if neg else e)
    return base


def _parse_atom(tok):
    ch = tok.peek()
    if ch == "(":
        tok.take()
        val = _parse_expr(tok)
        if tok.peek() != ")":
            raise ValueError(f"missing ')' at position {tok.pos}")
        tok.take()
        return val
    if ch == "q":
        tok.take()
        return RF_Q
    if ch.isdigit():
        return rf_int(tok.take_int())
    raise ValueError(f"unexpected {ch!r} at position {tok.pos}")
