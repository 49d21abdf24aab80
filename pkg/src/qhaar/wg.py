"""Star-word evaluation: the q-deformed analogue of Weingarten integrals.

Monomials mixing plain and conjugated generators are the natural inputs
when the generator matrix is unitary.  A conjugated generator is not a
new algebra element: it rewrites to the signed quantum cofactor of the
transposed entry, so a star word expands to an ordinary polynomial and
its state value follows from the plain tables.  At q = 1 those values
collapse to classical Weingarten integrals over SU(3), which makes good
end-to-end fixtures; the worked examples below are exposed to the CLI.

Star words never enter the core algebra — the expansion happens at this
boundary and everything past it is star-free.
"""

from fractions import Fraction

from .algebra import NCPoly, Gen, antipode, gen_from_token, mul
from .haar3 import DEFAULT_MAX_ORDER, haar
from .qfield import RF_ZERO

__all__ = [
    "EXAMPLE_WORDS",
    "classical_limit",
    "haar_star",
    "parse_star_word",
    "star_expand",
    "wg_example",
]

# the worked four-generator monomials, in printed order per example:
# two diagonal generators, a cross pair with both stars trailing, and
# the fourth power of the corner generator
EXAMPLE_WORDS = {
    1: ("a e a* e*", "e a a* e*", "a e e* a*", "a a* e e*"),
    2: ("a h g* b*", "h a g* b*", "a h b* g*", "a b* h g*"),
    3: ("a a a* a*", "a a* a a*"),
}


def parse_star_word(text, n=3):
    """Whitespace-separated tokens, each a generator letter with an
    optional trailing ``*``; returns ``(Gen, starred)`` pairs."""
    out = []
    for tok in text.split():
        starred = tok.endswith("*")
        if starred:
            tok = tok[:-1]
        out.append((gen_from_token(tok, n), starred))
    return tuple(out)


def star_expand(word, n=3):
    """Multiply out a star word into an ordinary normal-form polynomial.

    Each conjugated generator is replaced by the antipode image of the
    transposed generator; plain generators pass through.  Accepts the
    text form of :func:`parse_star_word` or an iterable of
    ``(Gen, starred)`` pairs.
    """
    if n not in (2, 3):
        raise ValueError(f"star words are supported for n in {{2, 3}}, not n={n}")
    if isinstance(word, str):
        word = parse_star_word(word, n)
    out = NCPoly.one()
    for item in word:
        g, starred = item
        if not isinstance(g, Gen):
            raise ValueError(f"expected (Gen, starred) pairs, got {item!r}")
        if starred:
            out = mul(out, antipode(Gen(g.col, g.row), n))
        else:
            out = mul(out, NCPoly.from_word((g,)))
    return out


def haar_star(word, tables=None, max_order=DEFAULT_MAX_ORDER):
    """Haar value of a star word (or of a plain polynomial)."""
    p = star_expand(word) if isinstance(word, (str, tuple, list)) else word
    total = RF_ZERO
    for w, c in p.items():
        total = total + c * haar(w, tables=tables, max_order=max_order)
    return total


def wg_example(example, variant, tables=None):
    """Exact value of one worked star monomial.

    ``example`` picks the family (1: two diagonal generators, 2: a
    crossed pair, 3: the repeated corner generator), ``variant`` the
    1-based generator ordering within it.
    """
    words = EXAMPLE_WORDS.get(example)
    if words is None:
        raise ValueError(f"example must be 1, 2 or 3, not {example!r}")
    if not 1 <= variant <= len(words):
        raise ValueError(
            f"example {example} has variants 1..{len(words)}, not {variant!r}")
    return haar_star(words[variant - 1], tables=tables)


def classical_limit(v):
    """Exact value at q = 1, the classical group limit."""
    try:
        return v.eval_at(Fraction(1))
    except ZeroDivisionError:
        raise ValueError("pole at q = 1; no classical limit") from None
