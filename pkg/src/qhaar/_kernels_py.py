"""Pure-Python integer polynomial kernels.

Univariate polynomials over the integers are stored dense and little
endian: a list of Python ints whose index is the exponent, with no
trailing zeros ([] is the zero polynomial).  Everything downstream
(rational functions, the rewrite engine, the linear solvers) bottoms out
in these few functions, so they are kept free of any object overhead.
``qhaar.kernels`` swaps in the compiled twin with identical semantics
when it is importable.
"""

from math import gcd

__all__ = [
    "pnorm", "padd", "psub", "pneg", "pmul", "pmul_int", "pshift",
    "pcontent", "pdivexact_int", "pprem", "pdivexact", "pgcd",
]


def pnorm(c):
    """Strip trailing zero coefficients in place; return the list."""
    while c and c[-1] == 0:
        c.pop()
    return c


def padd(a, b):
    if len(a) < len(b):
        a, b = b, a
    out = list(a)
    for i, x in enumerate(b):
        out[i] += x
    return pnorm(out)


def psub(a, b):
    out = list(a)
    if len(out) < len(b):
        out.extend([0] * (len(b) - len(out)))
    for i, x in enumerate(b):
        out[i] -= x
    return pnorm(out)


def pneg(a):
    return [-x for x in a]


def pmul(a, b):
    if not a or not b:
        return []
    if len(b) < len(a):
        a, b = b, a
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
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
    db = len(b) - 1
    lb = b[-1]
    r = list(a)
    k = len(a) - len(b) + 1
    while len(r) > db:
        lr = r.pop()
        for i in range(len(r)):
            r[i] *= lb
        off = len(r) - db
        for i in range(db):
            r[off + i] -= lr * b[i]
        pnorm(r)
        k -= 1
    if k > 0 and r:
        f = lb ** k
        r = [f * x for x in r]
    return r


def pdivexact(a, b):
    """Exact division a // b; raises if b does not divide a."""
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
            r[i + j] -= t * b[j]
    if any(r):
        raise ArithmeticError("inexact polynomial division")
    return out


def pgcd(a, b):
    """gcd in Z[q] (content times primitive part), positive leading coeff.

    Subresultant polynomial remainder sequence on the primitive parts;
    keeps intermediate coefficient growth polynomial instead of the
    exponential blow-up of the naive Euclidean PRS.
    """
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
