# cython: language_level=3
"""Compiled twin of the pure-Python integer polynomial kernels.

Same storage convention and semantics as ``qhaar._kernels_py``: dense
little-endian lists of Python ints with no trailing zeros.  Coefficients
stay arbitrary-precision Python objects; the win over the fallback is
the loop and indexing overhead, which dominates these small dense
polynomials.  Any semantic change here must be mirrored in the fallback
(``tests/test_kernels.py`` cross-checks the two on random inputs).
"""

from math import gcd

__all__ = [
    "pnorm", "padd", "psub", "pneg", "pmul", "pmul_int", "pshift",
    "pcontent", "pdivexact_int", "pprem", "pdivexact", "pgcd",
]


def pnorm(list c):
    """Strip trailing zero coefficients in place; return the list."""
    while c and c[-1] == 0:
        c.pop()
    return c


def padd(a, b):
    cdef list out
    cdef Py_ssize_t i, nb
    if len(a) < len(b):
        a, b = b, a
    out = list(a)
    nb = len(b)
    for i in range(nb):
        out[i] = out[i] + b[i]
    return pnorm(out)


def psub(a, b):
    cdef list out = list(a)
    cdef Py_ssize_t i, nb = len(b)
    if len(out) < nb:
        out.extend([0] * (nb - len(out)))
    for i in range(nb):
        out[i] = out[i] - b[i]
    return pnorm(out)


def pneg(a):
    return [-x for x in a]


def pmul(a, b):
    cdef list out
    cdef Py_ssize_t i, j, na, nb
    cdef object x
    if not a or not b:
        return []
    if len(b) < len(a):
        a, b = b, a
    na = len(a)
    nb = len(b)
    out = [0] * (na + nb - 1)
    for i in range(na):
        x = a[i]
        if x:
            for j in range(nb):
                out[i + j] = out[i + j] + x * b[j]
    return pnorm(out)


def pmul_int(a, k):
    if k == 0:
        return []
    return [k * x for x in a]


def pshift(a, s):
    """Multiply by q**s (s >= 0)."""
    if not a:
        return []
    return [0] * s + list(a)


def pcontent(a):
    """gcd of the coefficients (nonnegative; 0 for the zero polynomial)."""
    g = 0
    for x in a:
        g = gcd(g, x)
        if g == 1:
            return 1
    return g


def pdivexact_int(a, k):
    return [x // k for x in a]


def pprem(a, b):
    """Pseudo-remainder of a by b: lc(b)^(deg a - deg b + 1) * a mod b."""
    cdef list r
    cdef Py_ssize_t i, db, off
    cdef object lb, lr, f
    cdef long long k
    db = len(b) - 1
    lb = b[-1]
    r = list(a)
    k = len(a) - len(b) + 1
    while len(r) > db:
        lr = r.pop()
        for i in range(len(r)):
            r[i] = r[i] * lb
        off = len(r) - db
        for i in range(db):
            r[off + i] = r[off + i] - lr * b[i]
        pnorm(r)
        k -= 1
    if k > 0 and r:
        f = lb ** k
        r = [f * x for x in r]
    return r


def pdivexact(a, b):
    """Exact division a // b; raises if b does not divide a."""
    cdef list r, out
    cdef Py_ssize_t i, j, db
    cdef object lb, c, t, rem
    if not a:
        return []
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    db = len(b) - 1
    lb = b[-1]
    if len(a) <= db:
        raise ArithmeticError("inexact polynomial division")
    r = list(a)
    out = [0] * (len(a) - db)
    for i in range(len(out) - 1, -1, -1):
        c = r[i + db]
        if c == 0:
            continue
        t, rem = divmod(c, lb)
        if rem:
            raise ArithmeticError("inexact polynomial division")
        out[i] = t
        for j in range(db + 1):
            r[i + j] = r[i + j] - t * b[j]
    for i in range(len(r)):
        if r[i]:
            raise ArithmeticError("inexact polynomial division")
    return out


def pgcd(a, b):
    """gcd in Z[q] (content times primitive part), positive leading coeff.

    Subresultant polynomial remainder sequence on the primitive parts;
    keeps intermediate coefficient growth polynomial instead of the
    exponential blow-up of the naive Euclidean PRS.
    """
    cdef list g, A, B, R
    cdef Py_ssize_t d
    if not a:
        g = list(b)
    elif not b:
        g = list(a)
    else:
        ca = pcontent(a)
        cb = pcontent(b)
        cg = gcd(ca, cb)
        A = [x // ca for x in a]
        B = [x // cb for x in b]
        if len(A) < len(B):
            A, B = B, A
        g_, h = 1, 1
        while True:
            d = len(A) - len(B)
            R = pprem(A, B)
            if not R:
                break
            if len(R) == 1:
                B = [1]
                break
            div = g_ * h ** d
            A, B = B, [x // div for x in R]
            g_ = A[-1]
            if d > 0:
                h = g_ ** d // h ** (d - 1)
        cB = pcontent(B)
        g = [cg * (x // cB) for x in B]
    if g and g[-1] < 0:
        g = [-x for x in g]
    return g
