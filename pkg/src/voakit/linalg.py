"""Dense exact linear algebra over Fraction.

Matrices are lists of rows.  Everything here is plain Gaussian elimination;
floating point appears only in :func:`integer_eigendecomposition`, to pick
candidate eigenvalues that are then confirmed or refuted exactly.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from .errors import NonIntegerEigenvalue, NotSemisimple

Matrix = List[List[Fraction]]
Vec = List[Fraction]


def zeros(m: int, n: int) -> Matrix:
    return [[Fraction(0)] * n for _ in range(m)]


def identity(n: int) -> Matrix:
    out = zeros(n, n)
    for i in range(n):
        out[i][i] = Fraction(1)
    return out


def transpose(a: Matrix) -> Matrix:
    return [list(r) for r in zip(*a)] if a else []


def matmul(a: Matrix, b: Matrix) -> Matrix:
    if not a:
        return []
    inner = len(b)
    ncols = len(b[0]) if b else 0
    out = zeros(len(a), ncols)
    for i, row in enumerate(a):
        orow = out[i]
        for k in range(inner):
            x = row[k]
            if x:
                brow = b[k]
                for j in range(ncols):
                    if brow[j]:
                        orow[j] += x * brow[j]
    return out


def matvec(a: Matrix, v: Sequence[Fraction]) -> Vec:
    return [sum((x * y for x, y in zip(row, v) if x and y), Fraction(0)) for row in a]


def rref(a: Matrix) -> Tuple[Matrix, List[int]]:
    """Reduced row echelon form (a copy) and the pivot columns."""
    m = [list(map(Fraction, r)) for r in a]
    if not m:
        return m, []
    nrows, ncols = len(m), len(m[0])
    pivots: List[int] = []
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, nrows) if m[i][c]), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        prow = m[r]
        inv = 1 / prow[c]
        if inv != 1:
            for j in range(c, ncols):
                if prow[j]:
                    prow[j] *= inv
        nz = [j for j in range(c, ncols) if prow[j]]
        for i in range(nrows):
            if i != r:
                f = m[i][c]
                if f:
                    row = m[i]
                    for j in nz:
                        row[j] -= f * prow[j]
        pivots.append(c)
        r += 1
        if r == nrows:
            break
    return m, pivots


def rank(a: Matrix) -> int:
    return len(rref(a)[1]) if a else 0


def nullspace(a: Matrix, ncols: Optional[int] = None) -> List[Vec]:
    """Basis of {x : a x = 0}; ``ncols`` is needed when ``a`` has no rows."""
    if not a:
        n = ncols or 0
        return [[Fraction(int(i == j)) for i in range(n)] for j in range(n)]
    r, pivots = rref(a)
    n = len(a[0])
    free = [c for c in range(n) if c not in set(pivots)]
    basis = []
    for f in free:
        x = [Fraction(0)] * n
        x[f] = Fraction(1)
        for row, pc in zip(r, pivots):
            if row[f]:
                x[pc] = -row[f]
        basis.append(x)
    return basis


def solve(a: Matrix, b: Sequence[Fraction]) -> Optional[Vec]:
    """One solution of a x = b (free variables set to 0), or None."""
    n = len(a[0]) if a else 0
    aug = [list(row) + [Fraction(bi)] for row, bi in zip(a, b)]
    r, pivots = rref(aug)
    if n in pivots:
        return None
    x = [Fraction(0)] * n
    for row, pc in zip(r, pivots):
        x[pc] = row[n]
    return x


def inverse(a: Matrix) -> Matrix:
    n = len(a)
    aug = [list(row) + [Fraction(int(i == j)) for j in range(n)] for i, row in enumerate(a)]
    r, pivots = rref(aug)
    if pivots[:n] != list(range(n)):
        raise ZeroDivisionError("matrix is singular")
    return [row[n:] for row in r]


def is_identity(a: Matrix) -> bool:
    return all(x == (i == j) for i, row in enumerate(a) for j, x in enumerate(row))


def symmetric_pivots(g: Matrix) -> Tuple[List[Fraction], Optional[int]]:
    """Pivots d_k of unpivoted LDL^T elimination.

    The leading principal minors are the running products of the pivots.
    Stops at the first pivot that is not positive and returns its index.
    """
    n = len(g)
    m = [list(r) for r in g]
    pivots: List[Fraction] = []
    for k in range(n):
        d = m[k][k]
        pivots.append(d)
        if d <= 0:
            return pivots, k
        for i in range(k + 1, n):
            f = m[i][k] / d
            if f:
                for j in range(k, n):
                    m[i][j] -= f * m[k][j]
    return pivots, None


def leading_minors(g: Matrix) -> List[Fraction]:
    """Exact leading principal minors via fraction-free Bareiss elimination."""
    n = len(g)
    m = [list(map(Fraction, r)) for r in g]
    minors = []
    prev = Fraction(1)
    for k in range(n):
        if m[k][k] == 0:
            # Bareiss needs a nonzero pivot; finish with plain determinants
            minors.append(Fraction(0))
            for size in range(k + 2, n + 1):
                minors.append(determinant([row[:size] for row in g[:size]]))
            return minors
        minors.append(m[k][k])
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) / prev
        prev = m[k][k]
    return minors


def determinant(a: Matrix) -> Fraction:
    n = len(a)
    m = [list(map(Fraction, r)) for r in a]
    det = Fraction(1)
    for c in range(n):
        piv = next((i for i in range(c, n) if m[i][c]), None)
        if piv is None:
            return Fraction(0)
        if piv != c:
            m[c], m[piv] = m[piv], m[c]
            det = -det
        det *= m[c][c]
        for i in range(c + 1, n):
            f = m[i][c] / m[c][c]
            if f:
                for j in range(c, n):
                    m[i][j] -= f * m[c][j]
    return det


def _shifted(a: Matrix, lam) -> Matrix:
    return [[x - lam if i == j else x for j, x in enumerate(row)] for i, row in enumerate(a)]


def _candidate_integers(a: Matrix) -> List[int]:
    n = len(a)
    diag = {int(x) for i, x in enumerate((r[i] for i, r in enumerate(a))) if x.denominator == 1}
    f = np.array([[float(x) for x in row] for row in a])
    ev = np.linalg.eigvals(f) if n else np.array([])
    re = ev.real
    if len(re):
        lo = math.floor(float(re.min())) - 2
        hi = math.ceil(float(re.max())) + 2
        # bounded window from the numeric spectrum hull plus exact diagonal hints
        cands = set(range(lo, hi + 1)) if hi - lo <= 8 * n + 16 else {
            int(round(x)) + d for x in re for d in (-1, 0, 1)}
    else:
        cands = set()
    return sorted(cands | diag)


def integer_eigendecomposition(a: Matrix) -> Dict[int, List[Vec]]:
    """Eigenspace bases of ``a``, requiring integer eigenvalues and semisimplicity.

    Candidates come from a floating-point spectrum; the verdict is exact:
    ``a`` is accepted only if the exact integer eigenspaces span everything.
    Raises NotSemisimple when the generalized integer eigenspaces do span
    but the eigenspaces do not, and NonIntegerEigenvalue otherwise.
    """
    n = len(a)
    if n == 0:
        return {}
    if all(a[i][j] == 0 for i in range(n) for j in range(n) if i != j):
        out: Dict[int, List[Vec]] = {}
        for i in range(n):
            d = a[i][i]
            if d.denominator != 1:
                raise NonIntegerEigenvalue(f"eigenvalue {d} is not an integer")
            e = [Fraction(0)] * n
            e[i] = Fraction(1)
            out.setdefault(int(d), []).append(e)
        return dict(sorted(out.items()))
    spaces: Dict[int, List[Vec]] = {}
    total = 0
    for lam in _candidate_integers(a):
        ns = nullspace(_shifted(a, lam))
        if ns:
            spaces[lam] = ns
            total += len(ns)
    if total == n:
        return spaces
    generalized = 0
    for lam in spaces:
        shifted = _shifted(a, lam)
        power = shifted
        prev = len(spaces[lam])
        while True:
            power = matmul(power, shifted)
            cur = len(nullspace(power))
            if cur == prev:
                break
            prev = cur
        generalized += prev
    if generalized == n:
        raise NotSemisimple("integer eigenvalues with a nontrivial Jordan block")
    raise NonIntegerEigenvalue("spectrum contains a non-integer eigenvalue")
