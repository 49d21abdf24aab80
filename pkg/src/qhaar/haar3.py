"""Exact Haar-state values on the q-deformed coordinate ring of SL(3).

Words in the nine generators are reduced to the row-major normal order by
:mod:`qhaar.algebra`.  A sorted word is conveniently described by its
counting matrix; every doubly stochastic counting matrix corresponds to a
unique *standard monomial*

    (aek)^m1 (afh)^m2 (bdk)^m3 (bfg)^m4 (cdh)^m5 (ceg)^m6,

a product of the six permutation segments in a fixed order.  Standard
monomials with ``m2*m3*m6 == 0`` form a linear basis of the span of all
order-m sorted words ("basis monomials"); the Haar state is therefore
pinned down by its values on basis monomials, order by order.

Values are produced by exact linear algebra over rational functions in q:

* a seed system (:func:`source_matrix`) determines seven distinguished
  values at each order from the previous orders;
* single-unknown relations derived from right-invariance of the Haar
  state (:func:`derive_relation`) and from multiplying by the quantum
  determinant (:func:`determinant_relation`) walk the remaining basis
  monomials in a fixed schedule;
* every scheduled step is checked mechanically: a step seeing more
  unknowns than declared is reported and deferred to a joint closure
  solve, never silently patched.

:class:`HaarTable` stores computed values and can persist them as JSONL.
:func:`haar` evaluates the Haar state on an arbitrary word.
"""

import json
import os
from functools import lru_cache
from typing import NamedTuple

from .algebra import (
    CountingMatrix, Gen, NCPoly, counting_matrix, mul, normal_form,
    parse_word, quantum_determinant, render_word,
)
from .coalgebra import UnknownHaarValue
from .linsolve import (
    Eliminator, InconsistentSystem, LinearSystemError, solve_unique,
)
from .qfield import RF_ONE, RF_ZERO, RationalFunction, parse_rational, rf_int

__all__ = [
    "SEGMENTS", "StandardMonomial", "LinearRelation", "HaarTable",
    "ScheduleError", "standard_monomials", "basis_monomials",
    "birkhoff_decompose", "decompose_to_basis", "order1_haar",
    "derive_relation", "determinant_relation", "source_matrix",
    "recursive_cdh_ceg", "recursive_bfg_ceg", "compute_order", "haar",
    "DEFAULT_MAX_ORDER", "TABLE_CONVENTION", "clear_tables",
]

# The six permutation segments, in standard order.  aek/afh/bdk are the
# "high" segments (they never appear together in a basis monomial with
# ceg), bfg/cdh/ceg the "low" ones.
SEGMENTS = ("aek", "afh", "bdk", "bfg", "cdh", "ceg")

_SEGMENT_WORDS = tuple(parse_word(seg) for seg in SEGMENTS)
_SEGMENT_GRIDS = tuple(
    tuple(tuple(1 if Gen(r, c) in w else 0 for c in (1, 2, 3)) for r in (1, 2, 3))
    for w in _SEGMENT_WORDS
)

DEFAULT_MAX_ORDER = 4

# Tag recorded in table files; identifies the reduction convention the
# values belong to (row-major normal order, correction coefficient q-q^-1).
TABLE_CONVENTION = "nf:row-major;corr:q-q^-1"


class ScheduleError(RuntimeError):
    """The order-m schedule plus closure failed to determine every value."""


class StandardMonomial(NamedTuple):
    """Exponents of the six segments, in SEGMENTS order."""

    m1: int
    m2: int
    m3: int
    m4: int
    m5: int
    m6: int

    @property
    def order(self):
        return sum(self)

    @property
    def is_basis(self):
        """Basis monomials never mix afh, bdk and ceg all at once."""
        return self.m2 * self.m3 * self.m6 == 0

    def word(self):
        out = []
        for count, seg in zip(self, _SEGMENT_WORDS):
            out.extend(seg * count)
        return tuple(out)

    def counting_matrix(self):
        grid = [[0] * 3 for _ in range(3)]
        for count, seg in zip(self, _SEGMENT_GRIDS):
            if count:
                for r in range(3):
                    for c in range(3):
                        grid[r][c] += count * seg[r][c]
        return CountingMatrix(grid)

    def corner_counts(self):
        """Letter counts (a, c, g, k) of the monomial's word.

        Reductions never create a or k letters and never destroy c or g
        letters, which makes these four counts monotone along rewrites;
        they drive the pruning in :func:`derive_relation`.
        """
        return (self.m1 + self.m2, self.m5 + self.m6,
                self.m4 + self.m6, self.m1 + self.m3)

    def __str__(self):
        if self.order == 0:
            return "1"
        parts = []
        for count, seg in zip(self, SEGMENTS):
            if count == 1:
                parts.append(seg)
            elif count:
                parts.append(f"({seg})^{count}")
        return " ".join(parts)


SM_UNIT = StandardMonomial(0, 0, 0, 0, 0, 0)


def _as_sm(x):
    if isinstance(x, StandardMonomial):
        return x
    t = tuple(x)
    if len(t) != 6 or not all(isinstance(e, int) and e >= 0 for e in t):
        raise ValueError(f"not a standard monomial: {x!r}")
    return StandardMonomial(*t)


@lru_cache(maxsize=None)
def standard_monomials(order):
    """All standard monomials of the given order, exponent-lex ascending."""
    if order < 0:
        raise ValueError("order must be >= 0")
    out = []

    def rec(prefix, left):
        if len(prefix) == 5:
            out.append(StandardMonomial(*prefix, left))
            return
        for e in range(left + 1):
            rec(prefix + (e,), left - e)

    rec((), order)
    return tuple(out)


@lru_cache(maxsize=None)
def basis_monomials(order):
    return tuple(s for s in standard_monomials(order) if s.is_basis)


# --------------------------------------------------------- matrix -> segments

def birkhoff_decompose(M):
    """Write a doubly stochastic counting matrix as its standard monomial.

    Returns ``(a, sm)`` where ``sm`` is the unique standard monomial with
    ``min(m2, m3, m6) == 0`` whose counting matrix is ``M`` and ``a =
    min(m1, m4, m5)`` counts how many all-ones matrices sit inside the
    decomposition.  Raises ValueError when ``M`` is not doubly stochastic.

    The six segment permutation matrices split into two triples that each
    partition the grid, so the decomposition is read off cellwise in O(1).
    """
    k = M.k_doubly_stochastic()
    if k is None:
        raise ValueError(f"matrix is not doubly stochastic: {M!r}")
    if M.n != 3:
        raise ValueError("only 3x3 matrices decompose into the six segments")
    rel3 = M[1, 1] - M[2, 2]
    rel4 = M[1, 1] - M[3, 3]
    b2 = max(0, rel3, rel4)
    b3 = b2 - rel3
    b4 = b2 - rel4
    a1 = M[1, 1] - b2
    a5 = M[2, 3] - b2
    a6 = M[3, 2] - b2
    sm = StandardMonomial(a1, b2, b4, a5, a6, b3)
    if min(sm) < 0 or sm.counting_matrix() != M:
        raise ValueError(f"matrix does not decompose into segments: {M!r}")
    return min(a1, a5, a6), sm


# ------------------------------------------------------- basis decomposition
#
# For a doubly stochastic matrix M let t(M) be its sorted word and s(M) its
# standard monomial.  Reducing word(s(M)) gives c * t(M) plus terms with
# strictly smaller counting matrices (row-major lex), with c != 0.  Unwinding
# that triangular scheme expresses every sorted word over basis monomials.

_STD_EXPR = {}       # CountingMatrix -> {StandardMonomial: RationalFunction}
_DECOMP = {}         # word tuple -> {StandardMonomial: RationalFunction}


def _sorted_word_of(M):
    out = []
    for r in (1, 2, 3):
        for c in (1, 2, 3):
            out.extend((Gen(r, c),) * M[r, c])
    return tuple(out)


def _std_expr(M):
    cached = _STD_EXPR.get(M)
    if cached is not None:
        return cached
    _, sm = birkhoff_decompose(M)
    nf = normal_form(sm.word())
    t0 = _sorted_word_of(M)
    c0 = nf[t0]
    if c0.is_zero():
        raise AssertionError(f"leading coefficient vanished for {sm}")
    inv = c0.inverse()
    expr = {sm: inv}
    for t, c in nf.items():
        if t == t0:
            continue
        factor = c * inv
        for s2, v in _std_expr(counting_matrix(t, 3)).items():
            prev = expr.get(s2)
            prev = -factor * v if prev is None else prev - factor * v
            if prev.is_zero():
                expr.pop(s2, None)
            else:
                expr[s2] = prev
    _STD_EXPR[M] = expr
    return expr


def _check_grid(w):
    for g in w:
        if g.row > 3 or g.col > 3:
            raise ValueError(f"generator {g!r} is outside the 3x3 grid")


def _decompose_word(w):
    """Shared cached decomposition; callers must not mutate the result."""
    w = tuple(w)
    cached = _DECOMP.get(w)
    if cached is not None:
        return cached
    _check_grid(w)
    if not w:
        out = {SM_UNIT: RF_ONE}
        _DECOMP[w] = out
        return out
    cm = counting_matrix(w, 3)
    if cm.k_doubly_stochastic() is None:
        raise ValueError(
            f"word {render_word(w)!r} is not doubly stochastic; "
            "its Haar value is 0 and it has no basis decomposition")
    acc = {}
    for t, c in normal_form(w).items():
        for s, v in _std_expr(counting_matrix(t, 3)).items():
            prev = acc.get(s)
            prev = c * v if prev is None else prev + c * v
            if prev.is_zero():
                acc.pop(s, None)
            else:
                acc[s] = prev
    _DECOMP[w] = acc
    return acc


def decompose_to_basis(w):
    """Coefficients of a word over basis monomials of its order.

    ``w`` may be a word text or a Gen sequence; it must have a doubly
    stochastic counting matrix (anything else has Haar value 0 and no
    meaningful decomposition -- a ValueError says so).
    """
    if isinstance(w, str):
        w = parse_word(w)
    return dict(_decompose_word(w))


def _decompose_poly(p):
    """Decomposition of an NCPoly whose words are all doubly stochastic."""
    acc = {}
    for w, c in p.items():
        for s, v in _decompose_word(w).items():
            prev = acc.get(s)
            prev = c * v if prev is None else prev + c * v
            if prev.is_zero():
                acc.pop(s, None)
            else:
                acc[s] = prev
    return acc


# -------------------------------------------------------------- order one

def order1_haar(n, tau):
    """Haar value of x_{1,tau(1)} ... x_{n,tau(n)}: (-q)^inv(tau) / [n]_{q^2}!."""
    from .qfield import q2_factorial, rf_q_power

    tau = tuple(tau)
    if sorted(tau) != list(range(1, n + 1)):
        raise ValueError(f"not a permutation of 1..{n}: {tau!r}")
    inv = sum(1 for i in range(n) for j in range(i + 1, n) if tau[i] > tau[j])
    sign = rf_int(1 if inv % 2 == 0 else -1)
    return sign * rf_q_power(inv) * q2_factorial(n).inverse()


# ------------------------------------------------------------ relations

class LinearRelation(NamedTuple):
    """One exact linear constraint sum(coeffs[s] * h(s)) = rhs.

    ``coeffs`` maps the still-unknown basis monomials to coefficients;
    contributions of already-known values have been folded into ``rhs``.
    """

    coeffs: dict
    rhs: RationalFunction
    label: str = ""

    def is_trivial(self):
        return not self.coeffs and self.rhs.is_zero()


_DQ3 = None
_DQ_POW = {}
_DQ_BASIS = {}


def _dq():
    global _DQ3
    if _DQ3 is None:
        _DQ3 = quantum_determinant(3)
    return _DQ3


def _dq_pow(m):
    p = _DQ_POW.get(m)
    if p is None:
        p = _dq() if m == 1 else mul(_dq_pow(m - 1), _dq())
        _DQ_POW[m] = p
    return p


def _dq_basis(m):
    """Basis decomposition of the m-th power of the quantum determinant."""
    b = _DQ_BASIS.get(m)
    if b is None:
        b = _decompose_poly(_dq_pow(m))
        _DQ_BASIS[m] = b
    return b


def _value_of_sm(sm, known):
    """Value of any standard monomial from a table of basis values."""
    v = known.get(sm) if known is not None else None
    if v is not None:
        return v
    if sm.is_basis:
        raise UnknownHaarValue(sm.word(), [sm])
    dec = _decompose_word(sm.word())
    total = RF_ZERO
    missing = []
    for s, c in dec.items():
        v = known.get(s) if known is not None else None
        if v is None:
            missing.append(s)
        else:
            total = total + c * v
    if missing:
        raise UnknownHaarValue(sm.word(), sorted(missing))
    return total


def derive_relation(equation_basis, comparing_basis, known=None, label=None):
    """Linear relation among order-m Haar values from right-invariance.

    Expanding the coproduct of the equation monomial's word and applying
    the Haar state to the right leg must reproduce ``h(eq)`` times the
    m-th power of the quantum determinant; comparing coefficients of the
    comparing basis monomial on both sides yields one linear relation
    among order-m values.  Known values (from ``known``, anything with a
    ``.get``) are folded into the right-hand side.

    The left-leg search is pruned by the monotone corner-letter bounds:
    reductions never create a/k letters and never destroy c/g letters, so
    a left leg whose running counts cannot reach the comparing monomial's
    a/k counts (or already exceed its c/g counts) is dead.
    """
    eq = _as_sm(equation_basis)
    cb = _as_sm(comparing_basis)
    m = eq.order
    if m == 0:
        raise ValueError("equation monomial must have positive order")
    if cb.order != m:
        raise ValueError(
            f"comparing monomial {cb} has order {cb.order}, expected {m}")
    w = eq.word()
    L = len(w)
    rows = tuple(g.row for g in w)
    cols = tuple(g.col for g in w)
    need_a, cap_c, cap_g, need_k = cb.corner_counts()
    # suffix counts of row-1 / row-3 positions, for the reachability prune
    row1_left = [0] * (L + 1)
    row3_left = [0] * (L + 1)
    for p in range(L - 1, -1, -1):
        row1_left[p] = row1_left[p + 1] + (rows[p] == 1)
        row3_left[p] = row3_left[p + 1] + (rows[p] == 3)

    acc = {}
    kvec = [0] * L

    def leaf():
        zw = tuple(Gen(rows[p], kvec[p]) for p in range(L))
        cz = _decompose_word(zw).get(cb)
        if cz is None:
            return
        yw = tuple(Gen(kvec[p], cols[p]) for p in range(L))
        for s, cy in _decompose_word(yw).items():
            c = cz * cy
            prev = acc.get(s)
            prev = c if prev is None else prev + c
            if prev.is_zero():
                acc.pop(s, None)
            else:
                acc[s] = prev

    def rec(p, r1, r2, r3, a_cnt, c_cnt, g_cnt, k_cnt):
        if p == L:
            if a_cnt >= need_a and k_cnt >= need_k:
                leaf()
            return
        r = rows[p]
        for kv in (1, 2, 3):
            rem = (r1, r2, r3)[kv - 1]
            if rem == 0:
                continue
            a2, c2, g2, k2 = a_cnt, c_cnt, g_cnt, k_cnt
            if r == 1:
                if kv == 1:
                    a2 += 1
                elif kv == 3:
                    c2 += 1
            elif r == 3:
                if kv == 1:
                    g2 += 1
                elif kv == 3:
                    k2 += 1
            if c2 > cap_c or g2 > cap_g:
                continue
            n1 = r1 - (kv == 1)
            n3 = r3 - (kv == 3)
            if a2 + min(row1_left[p + 1], n1) < need_a:
                continue
            if k2 + min(row3_left[p + 1], n3) < need_k:
                continue
            kvec[p] = kv
            rec(p + 1, n1, r2 - (kv == 2), n3, a2, c2, g2, k2)

    rec(0, m, m, m, 0, 0, 0, 0)

    # right side: h(eq) times the comparing coefficient of the quantum
    # determinant power
    bj = _dq_basis(m).get(cb)
    if bj is not None and not bj.is_zero():
        for s, ce in _decompose_word(w).items():
            c = bj * ce
            prev = acc.get(s)
            prev = -c if prev is None else prev - c
            if prev.is_zero():
                acc.pop(s, None)
            else:
                acc[s] = prev

    coeffs = {}
    rhs = RF_ZERO
    for s, c in acc.items():
        v = known.get(s) if known is not None else None
        if v is None:
            coeffs[s] = c
        else:
            rhs = rhs - c * v
    return LinearRelation(
        coeffs, rhs, label or f"invariance of {eq} compared at {cb}")


def determinant_relation(prefix, base, known, label=None):
    """Relation from expanding prefix * D_q * base over basis monomials.

    ``prefix`` must be a power of aek (so the product of prefix and base
    is itself a standard monomial) and the value of ``prefix * base``
    (one order below the relation) must be recoverable from ``known``.
    """
    prefix = _as_sm(prefix)
    base = _as_sm(base)
    if any(prefix[i] for i in range(1, 6)):
        raise ValueError("prefix must be a power of the diagonal segment aek")
    combo = StandardMonomial(*(a + b for a, b in zip(prefix, base)))
    rhs = _value_of_sm(combo, known)
    prod = mul(mul(NCPoly.from_word(prefix.word()), _dq()),
               NCPoly.from_word(base.word()))
    coeffs = {}
    for s, c in _decompose_poly(prod).items():
        v = known.get(s) if known is not None else None
        if v is None:
            coeffs[s] = c
        else:
            rhs = rhs - c * v
    return LinearRelation(
        coeffs, rhs, label or f"determinant expansion ({prefix}) Dq ({base})")


# ---------------------------------------------------------- seed system

def _seed_comparers(m):
    """Comparing monomials of the order-m seed system, in row order."""
    S = StandardMonomial
    comps = [
        S(m - 1, 0, 0, 0, 0, 1),
        S(m - 1, 0, 0, 1, 0, 0),
        S(m - 1, 0, 0, 0, 1, 0),
    ]
    if m >= 2:
        comps.append(S(m - 2, 1, 1, 0, 0, 0))
    comps.append(S(m - 1, 0, 1, 0, 0, 0))
    comps.append(S(m - 1, 1, 0, 0, 0, 0))
    return comps


def source_matrix(m, known=None):
    """Seed linear system for order m and its exact solution.

    Rows: the determinant expansion of D_q * (ceg)^(m-1) plus the
    invariance relations of (ceg)^m compared at the six mixed diagonal
    monomials (five for m = 1).  Solving them pins down the seven values

        aek(ceg)^(m-1), afh(ceg)^(m-1), bdk(ceg)^(m-1), bfg cdh(ceg)^(m-2),
        bfg(ceg)^(m-1), cdh(ceg)^(m-1), (ceg)^m

    (six at m = 1, where bfg cdh(ceg)^(m-2) does not exist).  Returns
    ``(relations, solution)``; a singular system raises a
    LinearSystemError naming the seed system.
    """
    if m < 1:
        raise ValueError("order must be >= 1")
    if known is None:
        known = HaarTable()
    S = StandardMonomial
    eq = S(0, 0, 0, 0, 0, m)
    relations = [determinant_relation(
        SM_UNIT, S(0, 0, 0, 0, 0, m - 1), known,
        label=f"determinant row at order {m}")]
    for cb in _seed_comparers(m):
        relations.append(derive_relation(eq, cb, known))
    solution = solve_unique(((r.coeffs, r.rhs) for r in relations),
                            context=f"seed system at order {m}")
    return relations, solution


def recursive_cdh_ceg(i, m, known=None):
    """Step relation of the (cdh)^i (ceg)^(m-i) ladder, 2 <= i <= m.

    Derived from invariance of (cdh)^(i-1) (ceg)^(m-i+1) compared at
    (aek)^(m-1) afh; with orders below m known it has the single unknown
    (cdh)^i (ceg)^(m-i).
    """
    if not 2 <= i <= m:
        raise ValueError(f"need 2 <= i <= m, got i={i} m={m}")
    S = StandardMonomial
    return derive_relation(
        S(0, 0, 0, 0, i - 1, m - i + 1), S(m - 1, 1, 0, 0, 0, 0), known,
        label=f"cdh ladder step i={i} order {m}")


def recursive_bfg_ceg(i, m, known=None):
    """Mirror ladder for (bfg)^i (ceg)^(m-i), compared at (aek)^(m-1) bdk."""
    if not 2 <= i <= m:
        raise ValueError(f"need 2 <= i <= m, got i={i} m={m}")
    S = StandardMonomial
    return derive_relation(
        S(0, 0, 0, i - 1, 0, m - i + 1), S(m - 1, 0, 1, 0, 0, 0), known,
        label=f"bfg ladder step i={i} order {m}")


# ------------------------------------------------------------- the schedule
#
# Each step declares the basis monomials it should determine (targets) and
# the recipes producing its relations.  Declared counts are checked at run
# time; steps that see unexpected unknowns are deferred and reported.

class _Step(NamedTuple):
    name: str
    targets: tuple
    recipes: tuple


def _schedule(m):
    """Ordered steps that walk every order-m basis monomial after the seed."""
    steps = []
    S = StandardMonomial
    afh_cb = S(m - 1, 1, 0, 0, 0, 0)
    bdk_cb = S(m - 1, 0, 1, 0, 0, 0)

    def sm(*e):
        return S(*e) if min(e) >= 0 else None

    def emit(name, targets, *recipes):
        tgt = tuple(t for t in targets if t is not None and t.is_basis)
        if not tgt:
            return
        for r in recipes:
            if any(x is None for x in r[1:]):
                return
        steps.append(_Step(name, tgt, tuple(recipes)))

    # -- pure low-segment ladders
    for i in range(2, m + 1):
        emit(f"cdh ladder i={i}", [sm(0, 0, 0, 0, i, m - i)],
             ("derive", sm(0, 0, 0, 0, i - 1, m - i + 1), afh_cb))
        emit(f"bfg ladder i={i}", [sm(0, 0, 0, i, 0, m - i)],
             ("derive", sm(0, 0, 0, i - 1, 0, m - i + 1), bdk_cb))

    # -- one high letter on a low tail (rails)
    for j in range(1, m):
        if j >= 2:
            emit(f"bfg-cdh rail j={j}", [sm(0, 0, 0, 1, j, m - 1 - j)],
                 ("derive", sm(0, 0, 0, 1, j - 1, m - j), afh_cb))
        emit(f"bdk-cdh rail j={j}", [sm(0, 0, 1, 0, j, m - 1 - j)],
             ("derive", sm(0, 0, 1, 0, j - 1, m - j), afh_cb))
        if j >= 2:
            emit(f"cdh-bfg rail j={j}", [sm(0, 0, 0, j, 1, m - 1 - j)],
                 ("derive", sm(0, 0, 0, j - 1, 1, m - j), bdk_cb))
        emit(f"afh-bfg rail j={j}", [sm(0, 1, 0, j, 0, m - 1 - j)],
             ("derive", sm(0, 1, 0, j - 1, 0, m - j), bdk_cb))

    # -- bdk/bfg and afh/cdh mixes without the third low segment
    for r in range(1, m):
        for s in range(1, m - r + 1):
            emit(f"bdk-bfg mix r={r} s={s}", [sm(0, 0, r, s, 0, m - r - s)],
                 ("derive", sm(0, 0, r - 1, s + 1, 0, m - r - s), afh_cb))
            emit(f"afh-cdh mix r={r} s={s}", [sm(0, r, 0, 0, s, m - r - s)],
                 ("derive", sm(0, r - 1, 0, 0, s + 1, m - r - s), bdk_cb))

    # -- one high letter with mixed low tails
    for i in range(2, m):
        for j in range(1, m - i + 1):
            for r in range(i + 1):
                s = i - r
                emit(f"low mix i={i} j={j} r={r}",
                     [sm(0, 0, r, s, j, m - i - j)],
                     ("derive", sm(0, 0, r, s, j - 1, m - i - j + 1), afh_cb))
            for r in range(i + 1):
                s = i - r
                emit(f"low mix mirror i={i} j={j} r={r}",
                     [sm(0, r, 0, j, s, m - i - j)],
                     ("derive", sm(0, r, 0, j - 1, s, m - i - j + 1), bdk_cb))

    # -- everything containing aek, jointly from determinant expansions.
    #
    # Once all aek-free values of order m are known, the expansion of
    # (aek)^(n-1) Dq v over basis monomials involves, beyond known
    # values, only monomials containing aek: the corner-letter counts
    # of its words cap the aek exponent of every term.  One expansion
    # per target (aek)^n v makes the block square, and each relation
    # carries its own target with coefficient exactly 1.
    diag_targets = []
    diag_recipes = []
    for n in range(m, 0, -1):
        prefix = sm(*([n - 1] + [0] * 5))
        for v in basis_monomials(m - n):
            if v.m1:
                continue
            diag_targets.append(StandardMonomial(n, *v[1:]))
            diag_recipes.append(("det", prefix, v))
    emit("diagonal zone", diag_targets, *diag_recipes)

    return steps


def _joint_pool(m):
    """Deterministic relation recipes for the joint completion solve.

    The single-unknown walk does not reach pure powers of afh or bdk,
    monomials mixing afh with bdk, or the diagonal zone when stragglers
    block it; their natural relations are pooled here and fed to one
    joint elimination together with whatever the schedule deferred.
    """
    S = StandardMonomial
    afh_cb = S(m - 1, 1, 0, 0, 0, 0)
    bdk_cb = S(m - 1, 0, 1, 0, 0, 0)
    pool = []
    for c in range(2, m + 1):
        pool.append(("derive", S(0, 0, c - 1, 1, 0, m - c), afh_cb))
        pool.append(("derive", S(0, c - 1, 0, 0, 1, m - c), bdk_cb))
    for tot in range(2, m + 1):
        for b in range(1, tot):
            c = tot - b
            for x in range(m - tot + 1):
                pool.append(
                    ("derive", S(0, b, c - 1, x + 1, m - tot - x, 0), afh_cb))
    for n in range(m, 0, -1):
        prefix = S(n - 1, 0, 0, 0, 0, 0)
        for v in basis_monomials(m - n):
            if not v.m1:
                pool.append(("det", prefix, v))
    return pool


def _build_recipe(recipe, table):
    kind = recipe[0]
    if kind == "derive":
        return derive_relation(recipe[1], recipe[2], table)
    if kind == "det":
        return determinant_relation(recipe[1], recipe[2], table)
    raise ValueError(f"unknown recipe kind {kind!r}")


def _sm_names(sms):
    return ", ".join(str(s) for s in sorted(sms))


def _brief(sms, limit=4):
    sms = sorted(sms)
    if len(sms) <= limit:
        return ", ".join(str(s) for s in sms)
    head = ", ".join(str(s) for s in sms[:limit])
    return f"{head}, +{len(sms) - limit} more"


def _run_system(step, table, diag, announce=True):
    """Build and solve one scheduled step; returns "done" or "deferred"."""
    remaining = [t for t in step.targets if table.get(t) is None]
    if not remaining:
        return "done"
    try:
        rels = [_build_recipe(r, table) for r in step.recipes]
    except UnknownHaarValue as exc:
        if announce:
            diag.append(f"step {step.name}: missing dependency "
                        f"{_brief(exc.missing)}")
        return "deferred"
    unknowns = set()
    for rel in rels:
        unknowns.update(rel.coeffs)
    if not unknowns:
        for rel in rels:
            if not rel.rhs.is_zero():
                raise InconsistentSystem(
                    f"step {step.name}: nonzero residual on fully known "
                    f"relation ({rel.label})")
        if announce:
            diag.append(f"step {step.name}: relations did not involve "
                        f"declared {_brief(remaining)}")
        return "deferred"
    if not unknowns.issubset(step.targets):
        if announce:
            extra = unknowns.difference(step.targets)
            diag.append(f"step {step.name}: {len(extra)} unexpected "
                        f"unknowns ({_brief(extra)})")
        return "deferred"
    if len(rels) < len(unknowns):
        if announce:
            diag.append(f"step {step.name}: {len(rels)} relations for "
                        f"{len(unknowns)} unknowns")
        return "deferred"
    try:
        sol = solve_unique(((r.coeffs, r.rhs) for r in rels),
                           context=f"step {step.name}")
    except InconsistentSystem:
        raise
    except LinearSystemError:
        if announce:
            diag.append(f"step {step.name}: system did not determine "
                        f"{_brief(unknowns)}")
        return "deferred"
    for s, v in sol.items():
        table.install(s, v)
    if set(sol) != set(remaining) and announce:
        diag.append(f"step {step.name}: determined {_brief(sol)} "
                    f"instead of declared {_brief(remaining)}")
    return "done"


def _closure(m, table, deferred, diag):
    """Resolve whatever the schedule left: retry deferred steps, then solve
    the remaining unknowns jointly from a deterministic relation sweep."""

    def missing_now():
        return [s for s in basis_monomials(m) if table.get(s) is None]

    while True:
        progress = False
        still = []
        for step in deferred:
            if _run_system(step, table, diag, announce=False) == "done":
                progress = True
            else:
                still.append(step)
        deferred = still
        missing = missing_now()
        if not missing:
            if not deferred:
                return
            if not progress:
                # deferred steps whose unknowns are all gone: drain as
                # consistency checks on the next loop; if they still do
                # not drain, nothing is missing so we are done.
                return
            continue
        if progress:
            continue
        # joint solve: deferred recipes first, then the standing pool,
        # then a generic sweep of invariance relations
        elim = Eliminator()
        used = 0
        target = set(missing)

        def feed(rel):
            nonlocal used
            if rel.coeffs and elim.add_row(rel.coeffs, rel.rhs) == "pivot":
                used += 1
            return elim.determined() and elim.covers(target)

        deferred_recipes = []
        for step in deferred:
            deferred_recipes.extend(step.recipes)
        solved = False
        for recipe in deferred_recipes:
            try:
                rel = _build_recipe(recipe, table)
            except UnknownHaarValue:
                continue
            if feed(rel):
                solved = True
                break
        if not solved:
            skip = set(deferred_recipes)
            for recipe in _joint_pool(m):
                if recipe in skip:
                    continue
                try:
                    rel = _build_recipe(recipe, table)
                except UnknownHaarValue:
                    continue
                if feed(rel):
                    solved = True
                    break
        if not solved:
            for eqb, cb in _sweep_sources(m):
                if feed(derive_relation(eqb, cb, table)):
                    solved = True
                    break
        if not solved:
            raise ScheduleError(
                f"order {m}: closure could not determine "
                f"{_sm_names(missing)} (rank {elim.rank})")
        for s, v in elim.solution().items():
            table.install(s, v)
        diag.append(f"closure at order {m}: solved {len(missing)} values "
                    f"jointly from {used} relations ({_brief(missing)})")


def _sweep_sources(m):
    comps = _seed_comparers(m)
    for eqb in basis_monomials(m):
        for cb in comps:
            yield eqb, cb


def compute_order(m, known=None, collect=None):
    """Compute every order-m basis value, extending (and returning) a table.

    ``known`` is the table to extend (a fresh one when omitted); lower
    orders are computed first when absent.  ``collect``, when given, is a
    list that receives one line per schedule irregularity: steps whose
    mechanical unknown-count check failed and what the closure solved.
    """
    if not isinstance(m, int) or m < 0:
        raise ValueError("order must be a nonnegative integer")
    table = known if known is not None else HaarTable()
    diag = collect if collect is not None else []
    if m == 0:
        return table
    for k in range(1, m):
        if not table.complete(k):
            compute_order(k, table, collect)
    if table.complete(m):
        return table
    _, seed = source_matrix(m, table)
    for s, v in seed.items():
        table.install(s, v)
    deferred = []
    seen = set()
    for step in _schedule(m):
        key = (step.targets, step.recipes)
        if key in seen:
            continue
        seen.add(key)
        if _run_system(step, table, diag) == "deferred":
            deferred.append(step)
    _closure(m, table, deferred, diag)
    missing = [s for s in basis_monomials(m) if table.get(s) is None]
    if missing:
        raise ScheduleError(f"order {m}: no value for {_sm_names(missing)}")
    if not table.complete(m):
        raise ScheduleError(f"order {m}: completeness check failed")
    return table


# ------------------------------------------------------------- value table

CACHE_DIR_ENV = "QHAAR_CACHE_DIR"
_TABLE_FORMAT = "qhaar-table"


def default_cache_dir():
    return os.environ.get(CACHE_DIR_ENV) or os.path.join(
        os.path.expanduser("~"), ".cache", "qhaar")


def default_table_path():
    return os.path.join(default_cache_dir(), "haar3.jsonl")


class HaarTable:
    """Exact Haar values of basis monomials, with JSONL persistence.

    The table always knows the empty monomial (value 1).  ``install``
    refuses to overwrite an entry with a different value, so recomputing
    an order validates it against what is already stored.
    """

    def __init__(self, n=3):
        if n != 3:
            raise NotImplementedError("only the 3x3 Haar table is implemented")
        self.n = n
        self._values = {SM_UNIT: RF_ONE}
        self._complete = {0}

    def __len__(self):
        return len(self._values)

    def __contains__(self, sm):
        return _as_sm(sm) in self._values

    def get(self, sm):
        return self._values.get(sm)

    def install(self, sm, value):
        sm = _as_sm(sm)
        if not sm.is_basis:
            raise ValueError(f"not a basis monomial: {sm}")
        old = self._values.get(sm)
        if old is not None and old != value:
            raise ValueError(f"conflicting value for {sm}")
        self._values[sm] = value

    def complete(self, order):
        """True when every basis monomial of the order has a value."""
        if order in self._complete:
            return True
        if all(s in self._values for s in basis_monomials(order)):
            self._complete.add(order)
            return True
        return False

    def max_complete_order(self):
        k = 0
        while self.complete(k + 1):
            k += 1
        return k

    def entries(self, order):
        """Sorted (monomial, value) pairs of one order."""
        return [(s, self._values[s]) for s in basis_monomials(order)
                if s in self._values]

    def orders_present(self):
        return sorted({s.order for s in self._values if s.order})

    def value_of_word(self, w):
        """Haar value of a word, raising UnknownHaarValue when the table
        lacks an ingredient (0 for non doubly stochastic words)."""
        if isinstance(w, str):
            w = parse_word(w)
        w = tuple(w)
        if not w:
            return RF_ONE
        _check_grid(w)
        if counting_matrix(w, 3).k_doubly_stochastic() is None:
            return RF_ZERO
        total = RF_ZERO
        missing = []
        for s, c in _decompose_word(w).items():
            v = self._values.get(s)
            if v is None:
                missing.append(s)
            else:
                total = total + c * v
        if missing:
            raise UnknownHaarValue(w, sorted(missing))
        return total

    # -- persistence

    def save(self, path):
        """Append entries missing from ``path``, validating overlaps.

        The file is JSONL: a header line, then one entry per basis
        monomial in (order, exponents) order.  Existing lines are never
        rewritten; a recomputed value that disagrees with a stored one
        raises ValueError.
        """
        existing = {}
        fresh = not os.path.exists(path)
        if not fresh:
            for sm, value in _read_table_file(path):
                existing[sm] = value
            for sm, value in existing.items():
                mine = self._values.get(sm)
                if mine is not None and mine != value:
                    raise ValueError(
                        f"table file {path} disagrees at {sm}: "
                        f"stored {value}, computed {mine}")
        new = [(s, v) for s, v in sorted(self._values.items())
               if s.order > 0 and s not in existing]
        if fresh:
            os.makedirs(os.path.dirname(os.path.abspath(path)), exist_ok=True)
        with open(path, "a", encoding="utf-8") as fh:
            if fresh:
                fh.write(json.dumps({
                    "format": _TABLE_FORMAT, "version": 1, "n": self.n,
                    "convention": TABLE_CONVENTION,
                }) + "\n")
            for s, v in new:
                fh.write(json.dumps({
                    "n": self.n, "order": s.order,
                    "exponents": list(s), "value": str(v),
                }) + "\n")
        return len(new)

    @classmethod
    def load(cls, path):
        table = cls()
        for sm, value in _read_table_file(path):
            table.install(sm, value)
        return table


def _read_table_file(path):
    out = []
    with open(path, encoding="utf-8") as fh:
        header = json.loads(fh.readline())
        if header.get("format") != _TABLE_FORMAT:
            raise ValueError(f"{path}: not a Haar table file")
        if header.get("convention") != TABLE_CONVENTION:
            raise ValueError(
                f"{path}: convention {header.get('convention')!r} does not "
                f"match this engine ({TABLE_CONVENTION!r})")
        if header.get("n") != 3:
            raise ValueError(f"{path}: unsupported n={header.get('n')!r}")
        for line in fh:
            line = line.strip()
            if not line:
                continue
            rec = json.loads(line)
            sm = StandardMonomial(*rec["exponents"])
            out.append((sm, parse_rational(rec["value"])))
    return out


# ---------------------------------------------------------------- frontend

_shared_table = None


def haar(w, tables=None, max_order=DEFAULT_MAX_ORDER):
    """Exact Haar value of an arbitrary word in the nine generators.

    Words whose counting matrix is not doubly stochastic evaluate to 0
    immediately.  Otherwise missing orders are computed on demand into
    ``tables`` (a module-shared table when omitted), capped at
    ``max_order`` to keep accidental huge computations from starting.
    """
    if isinstance(w, str):
        w = parse_word(w)
    w = tuple(w)
    if not w:
        return RF_ONE
    _check_grid(w)
    k = counting_matrix(w, 3).k_doubly_stochastic()
    if k is None:
        return RF_ZERO
    if k > max_order:
        raise ValueError(
            f"word has order {k}, above the cap {max_order}; pass a larger "
            "max_order to compute it anyway")
    global _shared_table
    if tables is None:
        if _shared_table is None:
            _shared_table = HaarTable()
        tables = _shared_table
    for j in range(1, k + 1):
        if not tables.complete(j):
            compute_order(j, tables)
    return tables.value_of_word(w)


def clear_tables():
    """Drop all module-level caches (decompositions, determinant powers,
    the shared value table)."""
    global _shared_table, _DQ3
    _STD_EXPR.clear()
    _DECOMP.clear()
    _DQ_POW.clear()
    _DQ_BASIS.clear()
    _DQ3 = None
    _shared_table = None
    standard_monomials.cache_clear()
    basis_monomials.cache_clear()
