"""Comultiplication on O(M_q(n)) and the partial Haar applications.

Delta(x_{ij}) = sum_k x_{ik} (x) x_{kj}, extended multiplicatively: a
word w of length L expands over all n^L index tuples.  Both tensor legs
are kept as *raw* (unreduced) words; by construction every term obeys
the positional order restriction

    left[l].row = w[l].row,  right[l].col = w[l].col,
    left[l].col = right[l].row.

Consumers reduce legs when they need to.  ``apply_haar_right`` is
(id (x) h) after Delta: terms whose right leg is not doubly stochastic
contribute zero; the rest are looked up in a Haar table, which raises
``UnknownHaarValue`` for values it cannot supply.
"""

import itertools
from typing import NamedTuple

from .algebra import Gen, NCPoly, counting_matrix, normal_form
from .qfield import RF_ONE, RF_ZERO, RationalFunction

__all__ = [
    "TensorTerm", "TensorPoly", "UnknownHaarValue",
    "delta", "delta_poly", "delta_pruned",
    "apply_haar_right", "apply_haar_left", "counit",
]


class UnknownHaarValue(Exception):
    """A Haar value was requested that the table cannot provide.

    Carries the standard-basis decomposition of the offending word so a
    caller can see exactly which monomials are missing.
    """

    def __init__(self, word, missing):
        self.word = tuple(word)
        self.missing = tuple(missing)
        names = ", ".join(str(s) for s in missing)
        super().__init__(f"unknown Haar value for {word}: missing {names}")


class TensorTerm(NamedTuple):
    left: tuple
    right: tuple
    coeff: RationalFunction


class TensorPoly:
    """Linear combination of two-leg tensors with raw word legs."""

    __slots__ = ("terms",)

    def __init__(self, terms=()):
        data = {}
        if isinstance(terms, dict):
            terms = ((lw, rw, c) for (lw, rw), c in terms.items())
        for lw, rw, c in terms:
            key = (tuple(lw), tuple(rw))
            prev = data.get(key)
            c = c if prev is None else prev + c
            if c.is_zero():
                data.pop(key, None)
            else:
                data[key] = c
        object.__setattr__(self, "terms", data)

    def __setattr__(self, name, value):
        raise AttributeError("TensorPoly is immutable")

    def __iter__(self):
        for (lw, rw), c in self.terms.items():
            yield TensorTerm(lw, rw, c)

    def __len__(self):
        return len(self.terms)

    def __eq__(self, other):
        return isinstance(other, TensorPoly) and self.terms == other.terms

    def __add__(self, other):
        data = dict(self.terms)
        for key, c in other.terms.items():
            s = data.get(key, RF_ZERO) + c
            if s.is_zero():
                data.pop(key, None)
            else:
                data[key] = s
        out = TensorPoly.__new__(TensorPoly)
        object.__setattr__(out, "terms", data)
        return out

    def scale(self, c):
        if not isinstance(c, RationalFunction):
            raise TypeError("scale expects a RationalFunction")
        if c.is_zero():
            return TensorPoly()
        out = TensorPoly.__new__(TensorPoly)
        object.__setattr__(out, "terms",
                           {k: v * c for k, v in self.terms.items()})
        return out

    def tensor_mul(self, other):
        """(a (x) b)(c (x) d) = ac (x) bd, legs concatenated raw."""
        data = {}
        for (l1, r1), c1 in self.terms.items():
            for (l2, r2), c2 in other.terms.items():
                key = (l1 + l2, r1 + r2)
                c = c1 * c2
                prev = data.get(key)
                data[key] = c if prev is None else prev + c
        return TensorPoly(data)

    def normalized(self):
        """Reduce both legs to normal form and re-collect."""
        data = {}
        for (lw, rw), c in self.terms.items():
            for lw2, cl in normal_form(lw).items():
                for rw2, cr in normal_form(rw).items():
                    key = (lw2, rw2)
                    cc = c * cl * cr
                    prev = data.get(key)
                    data[key] = cc if prev is None else prev + cc
        return TensorPoly(data)

    def __repr__(self):
        return f"TensorPoly<{len(self.terms)} terms>"


def delta(w, n=3):
    """Full comultiplication of a word: all n^len(w) index tuples."""
    w = tuple(w)
    rows = tuple(g.row for g in w)
    cols = tuple(g.col for g in w)
    data = {}
    for ks in itertools.product(range(1, n + 1), repeat=len(w)):
        left = tuple(Gen(r, k) for r, k in zip(rows, ks))
        right = tuple(Gen(k, c) for k, c in zip(ks, cols))
        data[(left, right)] = RF_ONE
    return TensorPoly(data)


def delta_poly(p, n=3):
    """Linear extension of delta to an NCPoly."""
    out = TensorPoly()
    for w, c in p.items():
        out = out + delta(w, n).scale(c)
    return out


def delta_pruned(w, n=3, side="right", keep=None):
    """Comultiplication terms whose chosen leg passes a filter.

    Default filter: the leg's counting matrix is m-doubly stochastic
    (either side gives the same term set).  For that filter the index
    tuples are walked depth-first and a branch is abandoned as soon as
    some index value has been used more than m times — the leg's column
    (resp. row) sums can then never balance.  A custom ``keep``
    predicate receives the chosen leg's word and is applied at the
    leaves instead (no prefix pruning).
    """
    w = tuple(w)
    if side not in ("left", "right"):
        raise ValueError(f"side must be 'left' or 'right', not {side!r}")
    m = counting_matrix(w, n).k_doubly_stochastic()
    if m is None:
        raise ValueError(
            f"delta_pruned needs a doubly stochastic word, got {w}")
    rows = tuple(g.row for g in w)
    cols = tuple(g.col for g in w)
    L = len(w)
    data = {}

    if keep is not None:
        for ks in itertools.product(range(1, n + 1), repeat=L):
            left = tuple(Gen(r, k) for r, k in zip(rows, ks))
            right = tuple(Gen(k, c) for k, c in zip(ks, cols))
            if keep(left if side == "left" else right):
                data[(left, right)] = RF_ONE
        return TensorPoly(data)

    # doubly stochastic filter: each index value must be used exactly m
    # times; prune as soon as one exceeds m
    counts = [0] * (n + 1)
    ks = [0] * L

    def walk(pos):
        if pos == L:
            left = tuple(Gen(r, k) for r, k in zip(rows, ks))
            right = tuple(Gen(k, c) for k, c in zip(ks, cols))
            data[(left, right)] = RF_ONE
            return
        for k in range(1, n + 1):
            if counts[k] == m:
                continue
            counts[k] += 1
            ks[pos] = k
            walk(pos + 1)
            counts[k] -= 1

    walk(0)
    return TensorPoly(data)


def _haar_lookup(h):
    return h.value_of_word if hasattr(h, "value_of_word") else h


def apply_haar_right(tp, h, n=3):
    """(id (x) h) of a TensorPoly: sum of h(right) * left, normal form."""
    lookup = _haar_lookup(h)
    acc = NCPoly.zero()
    for lw, rw, c in tp:
        if counting_matrix(rw, n).k_doubly_stochastic() is None:
            continue
        v = lookup(rw)
        if v.is_zero():
            continue
        acc = acc + normal_form(lw).scale(c * v)
    return acc


def apply_haar_left(tp, h, n=3):
    """(h (x) id) of a TensorPoly."""
    lookup = _haar_lookup(h)
    acc = NCPoly.zero()
    for lw, rw, c in tp:
        if counting_matrix(lw, n).k_doubly_stochastic() is None:
            continue
        v = lookup(lw)
        if v.is_zero():
            continue
        acc = acc + normal_form(rw).scale(c * v)
    return acc


def counit(w):
    """epsilon(w): 1 for an all-diagonal word, else 0."""
    return RF_ONE if all(g.row == g.col for g in w) else RF_ZERO
