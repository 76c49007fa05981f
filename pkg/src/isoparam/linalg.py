"""Exact rational linear algebra on tuples of Fractions.

Vectors are tuples of :class:`fractions.Fraction`; matrices are tuples of
row vectors.  Everything here is exact, so equality tests are decidable.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Iterable, Sequence

Q = Fraction
Vec = tuple  # tuple[Fraction, ...]
Mat = tuple  # tuple[Vec, ...]

ZERO = Q(0)
ONE = Q(1)


def vec(xs: Iterable) -> Vec:
    return tuple(x if isinstance(x, Fraction) else Q(x) for x in xs)


def zeros(n: int) -> Vec:
    return (ZERO,) * n


def add(u: Vec, v: Vec) -> Vec:
    return tuple(a + b for a, b in zip(u, v))


def sub(u: Vec, v: Vec) -> Vec:
    return tuple(a - b for a, b in zip(u, v))


def scale(c, u: Vec) -> Vec:
    return tuple(c * a for a in u)


def neg(u: Vec) -> Vec:
    return tuple(-a for a in u)


def dot(u: Vec, v: Vec):
    # operands are mostly sparse; skipping zeros avoids Fraction arithmetic
    return sum((a * b for a, b in zip(u, v) if a and b), ZERO)


def is_zero(u: Vec) -> bool:
    return all(a == 0 for a in u)


def lin_comb(coeffs: Sequence, rows: Sequence[Vec]) -> Vec:
    if not rows:
        raise ValueError("empty combination")
    out = [ZERO] * len(rows[0])
    for c, r in zip(coeffs, rows):
        if c:
            for k, a in enumerate(r):
                if a:
                    out[k] += c * a
    return tuple(out)


def matvec(m: Mat, v: Vec) -> Vec:
    return tuple(dot(row, v) for row in m)


def matmul(a: Mat, b: Mat) -> Mat:
    bt = transpose(b)
    return tuple(tuple(dot(row, col) for col in bt) for row in a)


def transpose(m: Mat) -> Mat:
    return tuple(zip(*m)) if m else ()


def identity(n: int) -> Mat:
    return tuple(tuple(ONE if i == j else ZERO for j in range(n)) for i in range(n))


def primitive(u: Vec) -> Vec:
    """Scale ``u`` so its first nonzero entry is 1."""
    for a in u:
        if a:
            return tuple(x / a for x in u)
    return u


def clear_denominators(rows: Sequence[Vec]) -> tuple[list, int]:
    """Integer rows and a common denominator ``den`` with ``rows == ints / den``."""
    den = math.lcm(*(x.denominator for r in rows for x in r)) if rows else 1
    return [[x.numerator * (den // x.denominator) for x in r] for r in rows], den


def rref(rows: Sequence[Vec]) -> tuple[Mat, tuple[int, ...]]:
    """Reduced row echelon form and pivot columns; zero rows are dropped."""
    m = [list(r) for r in rows]
    if not m:
        return (), ()
    ncols = len(m[0])
    pivots = []
    r = 0
    for c in range(ncols):
        p = next((i for i in range(r, len(m)) if m[i][c] != 0), None)
        if p is None:
            continue
        m[r], m[p] = m[p], m[r]
        pv = m[r][c]
        if pv != 1:
            m[r] = [a / pv for a in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c] != 0:
                f = m[i][c]
                m[i] = [a - f * b for a, b in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == len(m):
            break
    return tuple(tuple(row) for row in m[:r]), tuple(pivots)


def rank(rows: Sequence[Vec]) -> int:
    return len(rref(rows)[0])


def solve_in_span(rows: Sequence[Vec], v: Vec):
    """Coefficients ``c`` with ``sum(c_i rows_i) == v``, or None if v is outside the span.

    ``rows`` must be linearly independent.
    """
    if not rows:
        return () if is_zero(v) else None
    # row-reduce the augmented transpose [rows^T | v]
    cols = transpose(rows)
    aug = [tuple(c) + (x,) for c, x in zip(cols, v)]
    red, piv = rref(aug)
    n = len(rows)
    if n in piv:
        return None
    if len(piv) != n:
        raise ValueError("rows are linearly dependent")
    return tuple(red[i][n] for i in range(n))


def in_span(rows: Sequence[Vec], v: Vec) -> bool:
    if not rows:
        return is_zero(v)
    return rank(list(rows) + [v]) == rank(rows)


def nullspace(rows: Sequence[Vec], ncols: int | None = None) -> Mat:
    """Basis of {x : rows . x = 0}, one vector per free column."""
    if ncols is None:
        ncols = len(rows[0])
    red, piv = rref(rows) if rows else ((), ())
    free = [c for c in range(ncols) if c not in piv]
    basis = []
    for f in free:
        x = [ZERO] * ncols
        x[f] = ONE
        for row, p in zip(red, piv):
            x[p] = -row[f]
        basis.append(tuple(x))
    return tuple(basis)


def inverse(m: Mat) -> Mat:
    n = len(m)
    aug = [tuple(row) + e for row, e in zip(m, identity(n))]
    red, piv = rref(aug)
    if tuple(piv[:n]) != tuple(range(n)) or len(red) < n:
        raise ValueError("matrix is singular")
    return tuple(tuple(row[n:]) for row in red)


def bilinear(u: Vec, g: Mat, v: Vec):
    return dot(u, matvec(g, v))


def is_square(x: Fraction) -> bool:
    """True when the nonnegative rational ``x`` is the square of a rational."""
    return x >= 0 and _isqrt_exact(x.numerator) is not None and _isqrt_exact(x.denominator) is not None


def sqrt_exact(x: Fraction) -> Fraction:
    n, d = _isqrt_exact(x.numerator), _isqrt_exact(x.denominator)
    if x < 0 or n is None or d is None:
        raise ValueError(f"{x} is not a rational square")
    return Q(n, d)


def _isqrt_exact(n: int):
    if n < 0:
        return None
    r = math.isqrt(n)
    return r if r * r == n else None


def fmt(x: Fraction) -> str:
    return str(x)


def parse_q(s) -> Fraction:
    if isinstance(s, Fraction):
        return s
    if isinstance(s, float):
        raise TypeError("floats are not accepted where exact rationals are required")
    return Q(s)
