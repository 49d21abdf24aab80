"""Shared fixtures.

Building the full order-4 value table takes a couple of minutes, so it is
computed once per session and shared; tests must not mutate it.
"""

import pytest

from qhaar.haar3 import (
    SM_UNIT,
    StandardMonomial,
    basis_monomials,
    compute_order,
    derive_relation,
    determinant_relation,
)
from qhaar.qfield import RF_ZERO


@pytest.fixture(scope="session")
def table4_and_diag():
    diag = []
    table = compute_order(4, collect=diag)
    return table, diag


@pytest.fixture(scope="session")
def table4(table4_and_diag):
    return table4_and_diag[0]


@pytest.fixture(scope="session")
def diag4(table4_and_diag):
    return table4_and_diag[1]


@pytest.fixture(scope="session")
def oracle3():
    """Order-3 brute-force system and its exact solution (slow, ~1 min)."""
    from qhaar.oracle import build_system, solve

    system = build_system(3)
    return system, solve(system)


@pytest.fixture(scope="session")
def corner_block(table4):
    """Factory for the 3x3 system pinning {aek,afh,bdk} bfg cdh (ceg)^(m-3).

    ``corner_block(m)`` returns ``(targets, relations, matrix)`` where
    ``matrix[r][c]`` is relation r's coefficient on target c.  For orders
    the table covers, everything else is folded so each relation touches
    only the targets; above the table the raw relation is projected.
    """
    S = StandardMonomial
    cache = {}

    def build(m):
        if m in cache:
            return cache[m]
        targets = (S(1, 0, 0, 1, 1, m - 3), S(0, 1, 0, 1, 1, m - 3),
                   S(0, 0, 1, 1, 1, m - 3))
        if m <= table4.max_complete_order():
            known = {s: table4.get(s)
                     for k in range(m + 1) for s in basis_monomials(k)
                     if s not in targets}
        else:
            known = table4
        rels = (
            determinant_relation(SM_UNIT, S(0, 0, 0, 1, 1, m - 3), known),
            derive_relation(S(0, 1, 0, 1, 0, m - 2),
                            S(m - 1, 1, 0, 0, 0, 0), known),
            derive_relation(S(0, 0, 1, 0, 1, m - 2),
                            S(m - 1, 0, 1, 0, 0, 0), known),
        )
        matrix = [[r.coeffs.get(t, RF_ZERO) for t in targets] for r in rels]
        cache[m] = (targets, rels, matrix)
        return cache[m]

    return build
