"""Exact Gauss-Jordan elimination for small sparse linear systems.

Rows are sparse mappings ``unknown -> coefficient`` together with a right-hand
side.  Coefficients may be :class:`~qhaar.qfield.RationalFunction` values or
:class:`fractions.Fraction` numbers (any exact field type with ``+ - * /``
works).  Unknown keys only need to be hashable; ties in pivot selection are
broken by ``repr`` so elimination order is deterministic.

Pivots are chosen to keep entries small: among the candidates in a row we
take the coefficient with the lowest complexity (polynomial length for
rational functions, bit length for fractions).
"""

from fractions import Fraction

from .qfield import RationalFunction

__all__ = [
    "LinearSystemError",
    "InconsistentSystem",
    "UnderdeterminedSystem",
    "Eliminator",
    "solve_unique",
]


class LinearSystemError(ValueError):
    """A linear system could not be solved; carries a rank report."""

    def __init__(self, message, report=None):
        super().__init__(message)
        self.report = report or {}


class InconsistentSystem(LinearSystemError):
    """A row reduced to ``0 = nonzero``."""


class UnderdeterminedSystem(LinearSystemError):
    """Elimination finished with free unknowns remaining."""


def _is_zero(v):
    if isinstance(v, RationalFunction):
        return v.is_zero()
    return v == 0


def _complexity(v):
    """Cheap size proxy used for pivot selection."""
    if isinstance(v, RationalFunction):
        return len(v.num) + len(v.den)
    if isinstance(v, Fraction):
        return v.numerator.bit_length() + v.denominator.bit_length()
    if isinstance(v, int):
        return v.bit_length()
    return 1


def _div(a, b):
    if isinstance(b, RationalFunction):
        return a * b.inverse()
    return a / b


class Eliminator:
    """Incremental Gauss-Jordan state.

    Feed rows with :meth:`add_row`; the internal rows are kept fully reduced,
    so at any moment each pivot row reads ``x_pivot + sum(c_free * x_free) =
    rhs``.  The system is solved once no free unknowns remain.
    """

    def __init__(self):
        self._rows = {}  # pivot key -> [coeffs over free keys, rhs]
        self._seen = set()

    @property
    def rank(self):
        return len(self._rows)

    def seen_unknowns(self):
        return set(self._seen)

    def pivot_keys(self):
        return set(self._rows)

    def free_keys(self):
        free = set()
        for coeffs, _ in self._rows.values():
            free.update(coeffs)
        return free

    def add_row(self, coeffs, rhs):
        """Reduce one equation ``sum(coeffs[k] * x_k) = rhs`` into the state.

        Returns ``"pivot"`` if the row added rank, ``"redundant"`` if it was
        already implied.  Raises :class:`InconsistentSystem` on ``0 = c``.
        """
        row = {k: v for k, v in coeffs.items() if not _is_zero(v)}
        self._seen.update(row)
        for k in list(row):
            piv = self._rows.get(k)
            if piv is None:
                continue
            c = row.pop(k)
            pcoeffs, prhs = piv
            for k2, v2 in pcoeffs.items():
                s = row.get(k2)
                s = -c * v2 if s is None else s - c * v2
                if _is_zero(s):
                    row.pop(k2, None)
                else:
                    row[k2] = s
            rhs = rhs - c * prhs
        if not row:
            if _is_zero(rhs):
                return "redundant"
            raise InconsistentSystem(
                "inconsistent linear system: a row reduced to 0 = nonzero",
                report=self.report(),
            )
        pivot = min(row, key=lambda k: (_complexity(row[k]), repr(k)))
        c0 = row.pop(pivot)
        norm = {k: _div(v, c0) for k, v in row.items()}
        rhs = _div(rhs, c0)
        # Back-substitute the fresh pivot into every stored row.
        for pkey, (pcoeffs, prhs) in self._rows.items():
            c = pcoeffs.pop(pivot, None)
            if c is None:
                continue
            for k2, v2 in norm.items():
                s = pcoeffs.get(k2)
                s = -c * v2 if s is None else s - c * v2
                if _is_zero(s):
                    pcoeffs.pop(k2, None)
                else:
                    pcoeffs[k2] = s
            self._rows[pkey] = [pcoeffs, prhs - c * rhs]
        self._rows[pivot] = [norm, rhs]
        return "pivot"

    def determined(self):
        """True when every pivot row has no free unknowns left."""
        return all(not coeffs for coeffs, _ in self._rows.values())

    def covers(self, keys):
        return all(k in self._rows for k in keys)

    def report(self):
        return {
            "rank": self.rank,
            "unknowns_seen": sorted(map(repr, self._seen)),
            "free": sorted(map(repr, self.free_keys())),
        }

    def solution(self):
        if not self.determined():
            raise UnderdeterminedSystem(
                "underdetermined linear system: "
                f"rank {self.rank} with free unknowns {sorted(map(repr, self.free_keys()))}",
                report=self.report(),
            )
        return {k: rhs for k, (_, rhs) in self._rows.items()}


def solve_unique(rows, context=""):
    """Solve ``rows`` (iterable of ``(coeffs, rhs)``) for a unique solution.

    Raises :class:`InconsistentSystem` or :class:`UnderdeterminedSystem`
    (mentioning ``context``) if no unique solution exists.
    """
    elim = Eliminator()
    try:
        for coeffs, rhs in rows:
            elim.add_row(coeffs, rhs)
        return elim.solution()
    except LinearSystemError as exc:
        if context:
            raise type(exc)(f"{context}: {exc}", report=exc.report) from None
        raise
