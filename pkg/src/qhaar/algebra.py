"""The quantized coordinate ring O(M_q(n)).

Generators x_{ij} (1-based indices) q-commute by the standard quadratic
relations; with the convention fixed here the n=2 generators satisfy

    ab = qba,  ac = qca,  bd = qdb,  cd = qdc,
    bc = cb,   ad - da = (q - q^-1)bc,

and the quantum determinant is ad - qbc.  Words are tuples of ``Gen``;
the normal form orders generators non-decreasingly in the row-major
order (row, col).  Reordering an out-of-order adjacent pair either just
swaps it (with a power of q) or, for a "diagonal" pair, also emits a
correction term whose counting matrix is strictly smaller in the
lexicographic order on the flattened count vector — that drop is the
termination measure, and it is also why the recursive insertion below
bottoms out.

Everything here works in O(M_q(n)): normal-ordered words are a genuine
linear basis, and the unit determinant of O(SL_q(n)) is never used as a
rewrite rule.  All values are immutable; the insertion cache is a plain
dict, which is safe under the GIL (worst case a value is computed
twice).
"""

from typing import NamedTuple

from .qfield import (
    RF_ONE, RF_ZERO, RationalFunction, parse_rational, rf_int, rf_q_power,
)

__all__ = [
    "Gen", "NCPoly", "CountingMatrix",
    "normal_form", "mul", "quantum_determinant",
    "counting_matrix", "is_k_doubly_stochastic",
    "antipode", "phi_automorphism", "swap_adjacent",
    "parse_word", "render_word", "parse_ncpoly", "gen_from_token",
    "ALIASES", "clear_caches",
]


class Gen(NamedTuple):
    row: int
    col: int

    def __repr__(self):
        return f"x{self.row}{self.col}"


# Letter names: n=3 is the a b c / d e f / g h k grid, n=2 the classical
# a b / c d.  (n=3 skips i and j, which stay free for indices.)
ALIASES = {
    2: ("ab", "cd"),
    3: ("abc", "def", "ghk"),
}

_LETTER_TO_GEN = {
    n: {ch: Gen(i + 1, j + 1) for i, row in enumerate(rows) for j, ch in enumerate(row)}
    for n, rows in ALIASES.items()
}


def gen_from_token(tok, n=3):
    """One word token: 'x{i}{j}' or an alias letter for the given n."""
    if tok.startswith("x") and len(tok) == 3 and tok[1:].isdigit():
        g = Gen(int(tok[1]), int(tok[2]))
        if not (1 <= g.row and 1 <= g.col):
            raise ValueError(f"bad generator token {tok!r}")
        return g
    table = _LETTER_TO_GEN.get(n)
    if table and tok in table:
        return table[tok]
    raise ValueError(f"unknown generator token {tok!r} (n={n})")


def parse_word(text, n=3):
    """Whitespace-separated tokens; alias letters may also be run together
    ('aek ceg' and 'a e k c e g' both parse, n=3)."""
    gens = []
    for tok in text.split():
        if tok.startswith("x"):
            gens.append(gen_from_token(tok, n))
        else:
            for ch in tok:
                gens.append(gen_from_token(ch, n))
    return tuple(gens)


def render_word(w, n=3):
    if not w:
        return "1"
    table = ALIASES.get(n)
    if table and all(g.row <= n and g.col <= n for g in w):
        return " ".join(table[g.row - 1][g.col - 1] for g in w)
    return " ".join(f"x{g.row}{g.col}" for g in w)


# ------------------------------------------------------------------ NCPoly

def _as_rf(c):
    if isinstance(c, RationalFunction):
        return c
    if isinstance(c, int):
        return rf_int(c)
    raise TypeError(f"cannot use {type(c).__name__} as a coefficient")


class NCPoly:
    """Linear combination of normal-ordered words over Q(q).

    The term map never stores zero coefficients, so equal elements
    compare equal structurally.  Construction does not reorder keys;
    use ``normal_form``/``mul`` to produce ordered terms.
    """

    __slots__ = ("terms",)

    def __init__(self, terms=()):
        data = {}
        for w, c in (terms.items() if isinstance(terms, dict) else terms):
            c = _as_rf(c)
            if w in data:
                c = data[w] + c
            if c.is_zero():
                data.pop(w, None)
            else:
                data[w] = c
        object.__setattr__(self, "terms", data)

    def __setattr__(self, name, value):
        raise AttributeError("NCPoly is immutable")

    @classmethod
    def zero(cls):
        return cls()

    @classmethod
    def one(cls):
        return cls({(): RF_ONE})

    @classmethod
    def from_word(cls, w, coeff=1):
        """The word as a single term; w is NOT reordered here."""
        return cls({tuple(w): _as_rf(coeff)})

    def __bool__(self):
        return bool(self.terms)

    def is_zero(self):
        return not self.terms

    def __len__(self):
        return len(self.terms)

    def items(self):
        return self.terms.items()

    def __getitem__(self, w):
        return self.terms.get(tuple(w), RF_ZERO)

    def __eq__(self, other):
        return isinstance(other, NCPoly) and self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __add__(self, other):
        if not isinstance(other, NCPoly):
            return NotImplemented
        data = dict(self.terms)
        for w, c in other.terms.items():
            s = data.get(w, RF_ZERO) + c
            if s.is_zero():
                data.pop(w, None)
            else:
                data[w] = s
        out = NCPoly.__new__(NCPoly)
        object.__setattr__(out, "terms", data)
        return out

    def __neg__(self):
        out = NCPoly.__new__(NCPoly)
        object.__setattr__(out, "terms", {w: -c for w, c in self.terms.items()})
        return out

    def __sub__(self, other):
        if not isinstance(other, NCPoly):
            return NotImplemented
        return self + (-other)

    def scale(self, c):
        c = _as_rf(c)
        if c.is_zero():
            return NCPoly.zero()
        out = NCPoly.__new__(NCPoly)
        object.__setattr__(out, "terms", {w: cc * c for w, cc in self.terms.items()})
        return out

    def __mul__(self, other):
        if isinstance(other, NCPoly):
            return mul(self, other)
        return self.scale(other)

    def __rmul__(self, other):
        # scalars commute with everything; word*word goes through __mul__
        return self.scale(other)

    def map_coeffs(self, f):
        return NCPoly({w: f(c) for w, c in self.terms.items()})

    def sorted_terms(self):
        return sorted(self.terms.items(), key=lambda it: (len(it[0]), it[0]))

    def __str__(self):
        return self.text()

    def text(self, n=3):
        """Deterministic rendering with the alias table for the given n."""
        if not self.terms:
            return "0"
        if n not in ALIASES or any(g.row > n or g.col > n
                                   for w in self.terms for g in w):
            n = 0  # x-notation
        parts = []
        for w, c in self.sorted_terms():
            wtext = render_word(w, n)
            ctext = str(c)
            neg = ctext.startswith("-") and not parts
            sign = ""
            if parts:
                if ctext.startswith("-"):
                    sign = " - "
                    ctext = str(-c)
                else:
                    sign = " + "
            if " " in ctext:
                ctext = f"({ctext})"
            if not w:
                parts.append(sign + ctext)
            elif ctext == "1":
                parts.append(sign + wtext)
            elif ctext == "-1" and neg:
                parts.append("-" + wtext)
            else:
                parts.append(f"{sign}{ctext} * {wtext}")
        return "".join(parts)

    def __repr__(self):
        return f"NCPoly({self})"


def parse_ncpoly(text, n=3):
    """Inverse of str(NCPoly): 'a e - (q - q^-1) * b d'."""
    text = text.strip()
    if text == "0":
        return NCPoly.zero()
    # split on top-level ' + ' / ' - '
    chunks = []
    depth = 0
    start = 0
    sign = 1
    i = 0
    while i < len(text):
        ch = text[i]
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        elif depth == 0 and ch in "+-" and i + 1 < len(text) and text[i - 1: i] == " " and text[i + 1] == " ":
            chunks.append((sign, text[start:i].strip()))
            sign = 1 if ch == "+" else -1
            start = i + 1
        i += 1
    chunks.append((sign, text[start:].strip()))
    terms = []
    for sgn, chunk in chunks:
        if "*" in chunk and not chunk.startswith("x"):
            # coefficient * word; the coefficient may itself contain '*'
            # inside parentheses, so split on the LAST top-level '*'
            depth = 0
            split_at = -1
            for j, ch in enumerate(chunk):
                if ch == "(":
                    depth += 1
                elif ch == ")":
                    depth -= 1
                elif ch == "*" and depth == 0:
                    split_at = j
            ctext, wtext = chunk[:split_at], chunk[split_at + 1:]
            coeff = parse_rational(ctext)
        else:
            ctext, wtext = None, chunk
            coeff = RF_ONE
        wtext = wtext.strip()
        if wtext == "1":
            w = ()
        else:
            if ctext is None and wtext.startswith("-"):
                # a leading "-a e" style term
                try:
                    w = parse_word(wtext[1:].strip(), n)
                    coeff = rf_int(-1)
                    terms.append((w, coeff * sgn if sgn < 0 else coeff))
                    continue
                except ValueError:
                    pass
            try:
                w = parse_word(wtext, n)
            except ValueError:
                if ctext is None:  # bare constant term like "q^2"
                    coeff, w = parse_rational(wtext), ()
                else:
                    raise
        terms.append((w, coeff * sgn if sgn < 0 else coeff))
    return NCPoly(terms)


# ------------------------------------------------------- rewrite engine

_RF_QINV = rf_q_power(-1)
# q - q^-1, the ubiquitous commutator coefficient
_RF_COMM = RationalFunction((-1, 0, 1), (0, 1))
_RF_NEG_COMM = -_RF_COMM


def swap_adjacent(u, v):
    """Rewrite the out-of-order adjacent pair u·v (u > v row-major).

    Returns ((coeff, pair), ...) summing to u·v with each pair in order.
    Diagonal pairs contribute the extra commutator term; its counting
    matrix is strictly smaller at the earliest row-major position, which
    is what makes repeated rewriting terminate.
    """
    if u.row == v.row or u.col == v.col:
        return ((_RF_QINV, (v, u)),)
    if u.col < v.col:  # anti-diagonal: plain commute
        return ((RF_ONE, (v, u)),)
    # u strictly south-east of v
    p = Gen(v.row, u.col)
    r = Gen(u.row, v.col)
    return ((RF_ONE, (v, u)), (_RF_NEG_COMM, (p, r)))


_INSERT_CACHE = {}


def _insert(w, g):
    """Normal form of w·g for an already normal-ordered w.

    Returns a tuple of (word, coeff) pairs.  Every generator occurring
    in the result is <= max(w[-1], g), so the trailing re-append below
    never recurses.
    """
    if not w or w[-1] <= g:
        return ((w + (g,), RF_ONE),)
    key = (w, g)
    hit = _INSERT_CACHE.get(key)
    if hit is not None:
        return hit
    u = w[-1]
    head = w[:-1]
    acc = {}
    for coeff, pair in swap_adjacent(u, g):
        first, second = pair
        for w1, c1 in _insert(head, first):
            # every letter of w1 is <= u >= second is not guaranteed for
            # the correction pair, so insert properly
            for w2, c2 in _insert(w1, second):
                c = coeff * c1 * c2
                prev = acc.get(w2)
                acc[w2] = c if prev is None else prev + c
    result = tuple((ww, cc) for ww, cc in acc.items() if not cc.is_zero())
    _INSERT_CACHE[key] = result
    return result


def _extend(termdict, g):
    acc = {}
    for w, c in termdict.items():
        for w2, c2 in _insert(w, g):
            cc = c * c2
            prev = acc.get(w2)
            if prev is None:
                acc[w2] = cc
            else:
                s = prev + cc
                if s.is_zero():
                    del acc[w2]
                else:
                    acc[w2] = s
    return acc


def _nf_terms(word, start=None):
    acc = dict(start) if start else {(): RF_ONE}
    for g in word:
        acc = _extend(acc, g)
    return acc


def normal_form(w, n=3):
    """Normal form of a word (a Gen sequence or word text)."""
    if isinstance(w, str):
        w = parse_word(w, n)
    elif isinstance(w, NCPoly):
        acc = {}
        for ww, c in w.items():
            for w2, c2 in _nf_terms(ww).items():
                cc = c * c2
                prev = acc.get(w2)
                acc[w2] = cc if prev is None else prev + cc
        return NCPoly(acc)
    return NCPoly(_nf_terms(tuple(w)))


def _is_sorted(w):
    return all(w[i] <= w[i + 1] for i in range(len(w) - 1))


def mul(x, y):
    """Product of two NCPolys (or bare words) in normal form."""
    if not isinstance(x, NCPoly):
        x = normal_form(x)
    elif not all(_is_sorted(w) for w in x.terms):
        x = normal_form(x)
    if isinstance(y, str):
        y = NCPoly.from_word(parse_word(y))
    elif not isinstance(y, NCPoly):
        y = NCPoly.from_word(tuple(y))
    out = {}
    for w2, c2 in y.items():
        for w1, c1 in x.items():
            c = c1 * c2
            for w3, c3 in _nf_terms(w2, start={w1: c}).items():
                prev = out.get(w3)
                if prev is None:
                    out[w3] = c3
                else:
                    s = prev + c3
                    if s.is_zero():
                        del out[w3]
                    else:
                        out[w3] = s
    return NCPoly(out)


def clear_caches():
    _INSERT_CACHE.clear()


# ------------------------------------------------- determinant, counting

def _permutations_with_inversions(n):
    import itertools
    for perm in itertools.permutations(range(1, n + 1)):
        inv = sum(1 for i in range(n) for j in range(i + 1, n) if perm[i] > perm[j])
        yield perm, inv


def quantum_determinant(n):
    """D_q = sum over permutations of (-q)^{inversions} x_{1,s(1)}..x_{n,s(n)}."""
    total = NCPoly.zero()
    for perm, inv in _permutations_with_inversions(n):
        word = tuple(Gen(i + 1, perm[i]) for i in range(n))
        coeff = rf_int((-1) ** inv) * rf_q_power(inv)
        total = total + normal_form(word).scale(coeff)
    return total


class CountingMatrix:
    """Per-generator occurrence counts of a word, as an n×n grid."""

    __slots__ = ("entries",)

    def __init__(self, entries):
        object.__setattr__(self, "entries", tuple(tuple(row) for row in entries))

    def __setattr__(self, name, value):
        raise AttributeError("CountingMatrix is immutable")

    @property
    def n(self):
        return len(self.entries)

    def __getitem__(self, rc):
        return self.entries[rc[0] - 1][rc[1] - 1]

    def row_sums(self):
        return tuple(sum(row) for row in self.entries)

    def col_sums(self):
        return tuple(sum(col) for col in zip(*self.entries))

    def vec(self):
        """Row-major flattening; the comparison order for matrices."""
        return tuple(x for row in self.entries for x in row)

    def __eq__(self, other):
        return isinstance(other, CountingMatrix) and self.entries == other.entries

    def __hash__(self):
        return hash(self.entries)

    def __lt__(self, other):
        return self.vec() < other.vec()

    def __le__(self, other):
        return self.vec() <= other.vec()

    def total(self):
        return sum(self.vec())

    def k_doubly_stochastic(self):
        """The common row/column sum k >= 1, or None."""
        rs = self.row_sums()
        k = rs[0]
        if k >= 1 and all(s == k for s in rs) and all(s == k for s in self.col_sums()):
            return k
        return None

    def __repr__(self):
        return f"CountingMatrix({list(map(list, self.entries))})"


def counting_matrix(w, n=None):
    w = tuple(w)
    if n is None:
        # default to the ambient 3×3 grid; widen only if the word needs it
        n = max(3, max((max(g.row, g.col) for g in w), default=3))
    grid = [[0] * n for _ in range(n)]
    for g in w:
        grid[g.row - 1][g.col - 1] += 1
    return CountingMatrix(grid)


def is_k_doubly_stochastic(m):
    """(True, k) when every row and column of m sums to the same k >= 1."""
    k = m.k_doubly_stochastic()
    return (k is not None), k


# ------------------------------------------------- antipode, phi twist

def antipode(g, n=3):
    """S(x_{ij}) for n in {2, 3}: the signed quantum cofactor.

    Delete row j and column i of the generator grid and take the
    quantum minor (u·w − q·v·z for a 2×2 block), scaled by (−q)^{i−j}.
    """
    if n not in (2, 3):
        raise ValueError(f"antipode implemented for n in {{2, 3}}, not n={n}")
    if not (1 <= g.row <= n and 1 <= g.col <= n):
        raise ValueError(f"generator {g!r} out of range for n={n}")
    rows = [r for r in range(1, n + 1) if r != g.col]
    cols = [c for c in range(1, n + 1) if c != g.row]
    sign = -1 if (g.row - g.col) % 2 else 1
    sign_coeff = rf_int(sign) * rf_q_power(g.row - g.col)
    if n == 2:
        minor = NCPoly.from_word((Gen(rows[0], cols[0]),))
    else:
        r1, r2 = rows
        c1, c2 = cols
        minor = (NCPoly.from_word((Gen(r1, c1), Gen(r2, c2)))
                 + NCPoly.from_word((Gen(r1, c2), Gen(r2, c1)),
                                    rf_int(-1) * rf_q_power(1)))
    return normal_form(minor.scale(sign_coeff))


def phi_automorphism(x):
    """The modular twist for n=3: x_{ij} -> q^{2(i+j−4)} x_{ij}."""
    out = {}
    for w, c in x.items():
        if any(g.row > 3 or g.col > 3 for g in w):
            raise ValueError("phi_automorphism is defined for n=3 words only")
        e = sum(2 * (g.row + g.col - 4) for g in w)
        out[w] = c * rf_q_power(e)
    return NCPoly(out)
