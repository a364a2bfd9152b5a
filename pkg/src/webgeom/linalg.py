"""Gaussian elimination over exact rationals (or, with a tolerance, over mpc).

Exact reductions find pivots modulo a prime with FLINT and recover the
exact rows from one square solve, checked exactly; the tolerance path
used by the numeric dual-web fallback is plain Python.
"""

from __future__ import annotations

from math import lcm

import mpmath
from flint import fmpq_mat, fmpz_mat, nmod_mat
from gmpy2 import mpq

_Z = mpq(0)


def rref(rows, ncols: int, tol=None):
    """Reduced row echelon form.

    Returns ``(R, pivots)`` where ``R`` holds the nonzero reduced rows and
    ``pivots[r]`` is the pivot column of row ``r``.  With ``tol`` the pivot
    is the largest entry of its column and entries below ``tol`` count as zero.
    """
    if tol is None:
        return _rref_exact(rows, ncols)
    return _rref_tol(rows, ncols, tol)


_PRIMES = ((1 << 61) - 1, (1 << 62) - 57, (1 << 62) - 87)


def _rref_exact(rows, ncols: int):
    nrows = len(rows)
    if nrows == 0 or ncols == 0:
        return [], []
    ints = []
    for r in rows:
        r = [mpq(v) for v in r]
        den = lcm(*(int(v.denominator) for v in r))
        ints.append([int(v.numerator) * (den // int(v.denominator)) for v in r])
    for prime in _PRIMES:
        out = _rref_modular(ints, ncols, prime)
        if out is not None:
            return out
    return _rref_direct(ints, ncols)


def _rref_modular(ints, ncols, prime):
    # pivots and an independent set of rows are read off mod a large prime;
    # the exact answer then solves a square system and is checked exactly,
    # so an unlucky prime only costs a retry
    nrows = len(ints)
    A = nmod_mat(nrows, ncols, [v % prime for r in ints for v in r], prime)
    R, rk = A.rref()
    if rk == 0:
        return ([], []) if not any(any(r) for r in ints) else None
    pivots = [next(j for j in range(ncols) if int(R[i, j])) for i in range(rk)]
    RT, _ = A.transpose().rref()
    chosen = [next(j for j in range(nrows) if int(RT[i, j])) for i in range(rk)]
    B = fmpz_mat(rk, rk, [ints[r][c] for r in chosen for c in pivots])
    if B.det() == 0:
        return None
    S = fmpz_mat(rk, ncols, [v for r in chosen for v in ints[r]])
    X = B.solve(S)
    out = [[mpq(int(e.p), int(e.q)) for e in (X[i, j] for j in range(ncols))] for i in range(rk)]
    for i, p in enumerate(pivots):
        if any(out[i][:p]):
            return None
    rest = set(range(nrows)) - set(chosen)
    for r in rest:
        row = ints[r]
        for j in range(ncols):
            if row[j] != sum(row[p] * out[i][j] for i, p in enumerate(pivots)):
                return None
    return out, pivots


def _rref_direct(ints, ncols: int):
    R, rk = fmpq_mat(fmpz_mat(ints)).rref()
    out, pivots = [], []
    for i in range(rk):
        row = [mpq(int(e.p), int(e.q)) for e in (R[i, j] for j in range(ncols))]
        pivots.append(next(j for j, v in enumerate(row) if v))
        out.append(row)
    return out, pivots


def _inexact(v):
    if isinstance(v, type(_Z)):
        return mpmath.mpf(int(v.numerator)) / int(v.denominator)
    return v


def _rref_tol(rows, ncols: int, tol):
    A = [[_inexact(v) for v in r] for r in rows]
    pivots = []
    r = 0
    nrows = len(A)
    for c in range(ncols):
        if r == nrows:
            break
        best, p = tol, None
        for i in range(r, nrows):
            if abs(A[i][c]) > best:
                best, p = abs(A[i][c]), i
        if p is None:
            continue
        A[r], A[p] = A[p], A[r]
        inv = 1 / A[r][c]
        pr = [v * inv for v in A[r]]
        A[r] = pr
        for i in range(nrows):
            if i != r:
                f = A[i][c]
                if f:
                    row = A[i]
                    for j in range(c, ncols):
                        row[j] -= f * pr[j]
                    row[c] = _Z
        pivots.append(c)
        r += 1
    return A[:r], pivots


def rank(rows, ncols: int, tol=None) -> int:
    return len(rref(rows, ncols, tol)[1])


def nullspace(rows, ncols: int, tol=None):
    """Basis of ``{z : rows . z = 0}`` as a list of vectors."""
    R, pivots = rref(rows, ncols, tol)
    pivset = set(pivots)
    basis = []
    for f in range(ncols):
        if f in pivset:
            continue
        z = [_Z] * ncols
        z[f] = mpq(1)
        for r, p in enumerate(pivots):
            z[p] = -R[r][f]
        basis.append(z)
    return basis


def solve(rows, rhs, ncols: int):
    """One solution of ``rows . z = rhs`` or None if inconsistent."""
    aug = [list(r) + [b] for r, b in zip(rows, rhs)]
    R, pivots = rref(aug, ncols + 1)
    if ncols in pivots:
        return None
    z = [_Z] * ncols
    for r, p in enumerate(pivots):
        z[p] = R[r][ncols]
    return z
