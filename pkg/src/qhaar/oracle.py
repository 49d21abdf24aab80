"""Brute-force cross-check for the scheduled engine.

At small orders the Haar values can be pinned without any scheduling.
Every pair of basis monomials (equation basis, comparing basis) yields
one homogeneous linear relation by expanding the coproduct of the
equation word and comparing coefficients of the comparing monomial, and
the basis expansion of the m-th determinant power (whose weighted value
sum is 1) anchors the scale.  Rows are assembled in plain exponent-lex
order over equation bases until elimination reaches full rank, then the
whole system is solved at once — no step selection, no pruning beyond
double stochasticity, so agreement with the scheduled engine checks the
entire pipeline.

The assembly cost grows brutally with the order (the coproduct of an
order-m word has 3^(3m) legs before filtering), hence the default cap.
"""

from fractions import Fraction

from .algebra import NCPoly, mul, quantum_determinant
from .coalgebra import delta_pruned
from .haar3 import basis_monomials, decompose_to_basis
from .linsolve import Eliminator, solve_unique
from .qfield import RF_ONE, RF_ZERO

__all__ = [
    "ORACLE_CAP",
    "OracleSystem",
    "build_system",
    "dump_tsv",
    "haar_values",
    "solve",
]

ORACLE_CAP = 3


class OracleSystem:
    """An assembled invariance system.

    ``rows`` holds ``(label, coeffs, rhs)`` triples over the ``unknowns``
    (the order-m basis monomials); ``equation_bases_used`` records which
    equation bases the assembly consumed before reaching full rank, as
    data.  ``q`` is None for symbolic coefficients, else the exact
    rational the system was instantiated at.
    """

    __slots__ = ("order", "unknowns", "rows", "equation_bases_used", "q")

    def __init__(self, order, unknowns, rows, equation_bases_used, q):
        self.order = order
        self.unknowns = tuple(unknowns)
        self.rows = tuple(rows)
        self.equation_bases_used = tuple(equation_bases_used)
        self.q = q


def _det_power_expansion(m):
    """Basis coefficients of the m-th power of the quantum determinant."""
    p = NCPoly.one()
    for _ in range(m):
        p = mul(p, quantum_determinant(3))
    out = {}
    for w, c in p.items():
        for s, v in decompose_to_basis(w).items():
            prev = out.get(s)
            prev = c * v if prev is None else prev + c * v
            if prev.is_zero():
                out.pop(s, None)
            else:
                out[s] = prev
    return out


def _relation_rows(eq):
    """One coefficient row per comparing basis, from one equation basis.

    Expands the coproduct of the equation word over all doubly
    stochastic leg pairs; the left leg lands on the comparing monomial,
    the right leg (under the Haar state) on the unknowns.
    """
    acc = {}
    for z, y, c in delta_pruned(eq.word()):
        dz = decompose_to_basis(z)
        dy = decompose_to_basis(y)
        for cb, cz in dz.items():
            row = acc.setdefault(cb, {})
            factor = c * cz
            for s, cy in dy.items():
                v = factor * cy
                prev = row.get(s)
                prev = v if prev is None else prev + v
                if prev.is_zero():
                    row.pop(s, None)
                else:
                    row[s] = prev
    return acc


def _instantiate(coeffs, q):
    return {s: c.eval_at(q) for s, c in coeffs.items()}


def build_system(m, q=None, cap=ORACLE_CAP):
    """Assemble the order-m system; rows stop once every unknown is pinned.

    Pass ``q`` (any exact rational) to instantiate every coefficient
    numerically; elimination then runs over plain fractions.
    """
    if not isinstance(m, int) or m < 1:
        raise ValueError("order must be a positive integer")
    if m > cap:
        raise ValueError(
            f"order {m} is above the oracle cap {cap}; raising the cap is "
            "possible but the assembly cost grows very fast")
    if q is not None:
        q = Fraction(q)
    unknowns = basis_monomials(m)
    det = _det_power_expansion(m)

    def emit(coeffs, rhs):
        if q is None:
            return coeffs, rhs
        return _instantiate(coeffs, q), rhs.eval_at(q)

    rows = [("normalization", *emit(dict(det), RF_ONE))]
    solver = Eliminator()
    solver.add_row(rows[0][1], rows[0][2])
    used = []

    def done():
        return solver.determined() and solver.covers(unknowns)

    for eq in unknowns:
        if done():
            break
        used.append(eq)
        for cb, row in sorted(_relation_rows(eq).items()):
            bj = det.get(cb)
            if bj is not None:
                prev = row.get(eq)
                prev = -bj if prev is None else prev - bj
                if prev.is_zero():
                    row.pop(eq, None)
                else:
                    row[eq] = prev
            if not row:
                continue
            coeffs, rhs = emit(row, RF_ZERO)
            rows.append((f"eq {eq} cmp {cb}", coeffs, rhs))
            solver.add_row(coeffs, rhs)
    if not done():
        raise RuntimeError(
            f"oracle system of order {m} did not reach full rank: "
            f"{solver.report()}")
    return OracleSystem(m, unknowns, rows, used, q)


def solve(system):
    """Fresh elimination of an assembled system; exact value per unknown."""
    sol = solve_unique(
        ((coeffs, rhs) for _, coeffs, rhs in system.rows),
        context=f"oracle system at order {system.order}")
    return {s: sol[s] for s in system.unknowns}


def haar_values(m, q=None, cap=ORACLE_CAP):
    """Build and solve in one call."""
    return solve(build_system(m, q=q, cap=cap))


def dump_tsv(system, fh):
    """Write the system as rows of (row label, column label, value).

    The right-hand side appears under the column label ``rhs`` when it
    is nonzero.  Entry order is deterministic, so two dumps of equally
    assembled systems compare byte for byte.
    """
    count = 0
    for label, coeffs, rhs in system.rows:
        for s in sorted(coeffs):
            fh.write(f"{label}\t{s}\t{coeffs[s]}\n")
            count += 1
        if rhs:
            fh.write(f"{label}\trhs\t{rhs}\n")
            count += 1
    return count
