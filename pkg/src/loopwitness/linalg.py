"""Small dense vectors and matrices over exact rationals.

Vectors are tuples of rationals and matrices are tuples of row tuples; the
tuple lengths are the dimension metadata.  Everything here is immutable and
safe to share across threads.  Dimensions in this package never exceed five
(transition relations live in R^(2d) with d <= 2, plus one homogenization
coordinate), so no attempt is made at sparse or vectorized representations.
"""

from __future__ import annotations

from typing import Iterable, Sequence

from .errors import DimensionMismatch
from .qnum import Q, QNum, ZERO, ONE

Vec = tuple
Mat = tuple


def vec(entries: Iterable) -> Vec:
    return tuple(Q(e) for e in entries)


def mat(rows: Iterable[Iterable]) -> Mat:
    out = tuple(vec(r) for r in rows)
    if out:
        width = len(out[0])
        for r in out:
            if len(r) != width:
                raise DimensionMismatch("inconsistent matrix row lengths")
    return out


def zeros(n: int) -> Vec:
    return (ZERO,) * n


def unit(n: int, i: int) -> Vec:
    return tuple(ONE if j == i else ZERO for j in range(n))


def identity(n: int) -> Mat:
    return tuple(unit(n, i) for i in range(n))


def _same_len(u: Sequence, v: Sequence) -> None:
    if len(u) != len(v):
        raise DimensionMismatch(f"vector lengths {len(u)} != {len(v)}")


def add(u: Vec, v: Vec) -> Vec:
    _same_len(u, v)
    return tuple(a + b for a, b in zip(u, v))


def sub(u: Vec, v: Vec) -> Vec:
    _same_len(u, v)
    return tuple(a - b for a, b in zip(u, v))


def neg(u: Vec) -> Vec:
    return tuple(-a for a in u)


def scale(c, u: Vec) -> Vec:
    c = Q(c)
    return tuple(c * a for a in u)


def dot(u: Vec, v: Vec) -> QNum:
    _same_len(u, v)
    total = ZERO
    for a, b in zip(u, v):
        if a and b:
            total += a * b
    return total


def matvec(m: Mat, u: Vec) -> Vec:
    return tuple(dot(row, u) for row in m)


def matmul(a: Mat, b: Mat) -> Mat:
    if a and b and len(a[0]) != len(b):
        raise DimensionMismatch(f"matrix product {len(a[0])} != {len(b)}")
    bt = transpose(b)
    return tuple(tuple(dot(row, col) for col in bt) for row in a)


def transpose(m: Mat) -> Mat:
    if not m:
        return ()
    return tuple(tuple(row[j] for row in m) for j in range(len(m[0])))


def is_zero_vec(u: Vec) -> bool:
    return all(a == 0 for a in u)


def maxabs(u: Vec) -> QNum:
    best = ZERO
    for a in u:
        v = -a if a < 0 else a
        if v > best:
            best = v
    return best


def cross2(u: Vec, v: Vec) -> QNum:
    """Signed area u x v; only meaningful in dimension 2."""
    _same_len(u, v)
    if len(u) != 2:
        raise DimensionMismatch("cross product needs 2-vectors")
    return u[0] * v[1] - u[1] * v[0]


def concat(u: Vec, v: Vec) -> Vec:
    return tuple(u) + tuple(v)


def gauss_solve(m: Mat, rhs: Vec):
    """Solve m @ x = rhs exactly; returns one solution or None.

    Works for any shape; when the system is underdetermined the free
    variables are fixed to zero, when inconsistent returns None.
    """
    if len(m) != len(rhs):
        raise DimensionMismatch("matrix rows != rhs length")
    nrows = len(m)
    ncols = len(m[0]) if m else 0
    a = [list(row) + [b] for row, b in zip(m, rhs)]
    pivots = []
    r = 0
    for c in range(ncols):
        pr = next((i for i in range(r, nrows) if a[i][c] != 0), None)
        if pr is None:
            continue
        a[r], a[pr] = a[pr], a[r]
        inv = ONE / a[r][c]
        a[r] = [x * inv for x in a[r]]
        for i in range(nrows):
            if i != r and a[i][c] != 0:
                f = a[i][c]
                a[i] = [x - f * y for x, y in zip(a[i], a[r])]
        pivots.append(c)
        r += 1
        if r == nrows:
            break
    for i in range(r, nrows):
        if a[i][ncols] != 0:
            return None
    x = [ZERO] * ncols
    for i, c in enumerate(pivots):
        x[c] = a[i][ncols]
    return tuple(x)


def rank(m: Mat) -> int:
    rows = [list(r) for r in m]
    nrows = len(rows)
    ncols = len(rows[0]) if rows else 0
    rk = 0
    for c in range(ncols):
        pr = next((i for i in range(rk, nrows) if rows[i][c] != 0), None)
        if pr is None:
            continue
        rows[rk], rows[pr] = rows[pr], rows[rk]
        for i in range(rk + 1, nrows):
            if rows[i][c] != 0:
                f = rows[i][c] / rows[rk][c]
                rows[i] = [x - f * y for x, y in zip(rows[i], rows[rk])]
        rk += 1
        if rk == nrows:
            break
    return rk


def primitive(u: Vec) -> Vec:
    """Scale a nonzero rational vector to coprime integer entries.

    Direction (sign) is preserved; used to canonicalize rays and rows.
    """
    from math import gcd

    if is_zero_vec(u):
        return u
    denom_lcm = 1
    for a in u:
        d = int(a.denominator)
        denom_lcm = denom_lcm * d // gcd(denom_lcm, d)
    ints = [int(a * denom_lcm) for a in u]
    g = 0
    for x in ints:
        g = gcd(g, abs(x))
    return tuple(Q(x // g) for x in ints)
