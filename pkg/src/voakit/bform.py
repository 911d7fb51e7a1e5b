"""The invariant pairing and the positivity arguments built on it.

For v, w of degree n the pairing is

    B(v, w) = (-1)^n * (coefficient of |0> in v(2n-1)w),

normalized so that B(|0>, |0>) = 1.  With a negative level the form is
positive-definite on every V_n, which rules out conformal vectors with
components above degree 2.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional

from . import linalg
from .conformal import check_derivation, check_ope, eigen_grading, j1_basis, translation_matrix
from .errors import (CounterexampleFound, InhomogeneousInput, InvariantViolation, NonIntegerEigenvalue,
                     NotSemisimple)
from .fock import VACUUM, GradedVector, format_scalar, random_scalar


def _homogeneous_degree(v: GradedVector) -> Optional[int]:
    degs = v.degrees()
    if len(degs) > 1:
        raise InhomogeneousInput(f"vector has components in degrees {degs}")
    return degs[0] if degs else None


def pair(voa, v: GradedVector, w: GradedVector, n: Optional[int] = None) -> Fraction:
    """B(v, w) for v, w homogeneous of the same degree ``n``."""
    dv, dw = _homogeneous_degree(v), _homogeneous_degree(w)
    if n is None:
        n = dv if dv is not None else dw
    if n is None:
        return Fraction(0)
    if (dv is not None and dv != n) or (dw is not None and dw != n):
        raise InhomogeneousInput(f"expected degree {n}, got {dv} and {dw}")
    out = voa.mode(v, 2 * n - 1, w)
    return (-1) ** n * out.coefficient(VACUUM)


def gram(voa, n: int) -> List[List[Fraction]]:
    """Gram matrix of B on V_n in the canonical basis."""
    basis = [GradedVector.from_state(s) for s in voa.basis(n)]
    size = len(basis)
    g = [[Fraction(0)] * size for _ in range(size)]
    for i in range(size):
        for j in range(i, size):
            g[i][j] = pair(voa, basis[i], basis[j], n)
            if j != i:
                g[j][i] = pair(voa, basis[j], basis[i], n)
                if g[j][i] != g[i][j]:
                    raise InvariantViolation(f"pairing is not symmetric at degree {n}")
    return g


def _witness(voa, n: int, g) -> GradedVector:
    """A nonzero v in V_n with B(v, v) <= 0, given a failing Gram matrix."""
    pivots, k = linalg.symmetric_pivots(g)
    basis = voa.basis(n)
    # the LDL^T step k gives a vector v with B(v,v) = pivot_k <= 0
    x = [Fraction(0)] * len(g)
    x[k] = Fraction(1)
    sub = [row[:k] for row in g[:k]]
    if k:
        rhs = [-g[i][k] for i in range(k)]
        y = linalg.solve(sub, rhs)
        x[:k] = y
    return GradedVector({s: c for s, c in zip(basis, x) if c})


@dataclass
class PositivityResult:
    positive: bool
    minors: Dict[int, List[Fraction]] = field(default_factory=dict)
    witness: Optional[GradedVector] = None
    witness_degree: Optional[int] = None
    witness_value: Optional[Fraction] = None

    def __bool__(self):
        return self.positive

    def to_json(self):
        return {
            "positive": self.positive,
            "minors": {str(n): [format_scalar(m) for m in ms] for n, ms in self.minors.items()},
            "witness": None if self.witness is None else self.witness.to_text(),
            "witness_degree": self.witness_degree,
            "witness_value": None if self.witness_value is None
            else format_scalar(self.witness_value),
        }


def is_positive_definite(voa, up_to: int) -> PositivityResult:
    """Exact leading-minor test on G_0, ..., G_{up_to}; stops at the first failure."""
    minors = {}
    for n in range(up_to + 1):
        g = gram(voa, n)
        ms = linalg.leading_minors(g)
        minors[n] = ms
        if any(m <= 0 for m in ms):
            w = _witness(voa, n, g)
            return PositivityResult(False, minors, w, n, pair(voa, w, w, n))
    return PositivityResult(True, minors)


def quasi_primary_basis(voa, n: int) -> List[GradedVector]:
    """Basis of Q_n = ker L(1) on V_n."""
    basis = voa.basis(n)
    if n == 0:
        return [GradedVector.vacuum()]
    omega = voa.omega
    lower = voa.basis(n - 1)
    cols = [voa.mode(omega, 2, GradedVector.from_state(s)) for s in basis]
    mat = [[c.coefficient(t) for c in cols] for t in lower]
    out = []
    for x in linalg.nullspace(mat, ncols=len(basis)):
        out.append(GradedVector({s: c for s, c in zip(basis, x) if c}))
    # V_n = Q_n + T V_{n-1}; T is injective except on the vacuum
    if len(out) + linalg.rank(translation_matrix(voa, n)) != voa.dim(n):
        raise InvariantViolation(f"dim Q_{n} + dim T V_{n - 1} != dim V_{n}")
    return out


def random_homogeneous(voa, n: int, rng: random.Random, size: int = 5) -> GradedVector:
    basis = voa.basis(n)
    coeffs = {s: random_scalar(rng, size) for s in basis if rng.random() < 0.7}
    if not any(coeffs.values()):
        coeffs[rng.choice(basis)] = Fraction(1)
    return GradedVector(coeffs)


@dataclass
class PosReport:
    ok: bool
    checked: Dict[int, int]
    minimum: Dict[int, Fraction]
    recursion_checked: int

    def to_json(self):
        return {"ok": self.ok, "checked": {str(k): v for k, v in self.checked.items()},
                "minimum": {str(k): format_scalar(v) for k, v in self.minimum.items()},
                "recursion_checked": self.recursion_checked}


def check_recursion(voa, b: GradedVector, n: int) -> bool:
    """B(Tb, Tb) at degree n against (2n-1)(2n-2) B(b, b) at degree n-1."""
    tb = voa.translate(b)
    return pair(voa, tb, tb, n) == (2 * n - 1) * (2 * n - 2) * pair(voa, b, b, n - 1)


def verify_pos_l(voa, up_to: int, trials: int = 100, seed: int = 0) -> PosReport:
    """B(v, v) > 0 for basis and random nonzero v of each degree <= up_to.

    Also checks the recursion B(Tb, Tb) = (2n-1)(2n-2) B(b, b) for b in
    degree n-1, on basis vectors and on random vectors.  Raises
    CounterexampleFound on any failure.
    """
    rng = random.Random(seed)
    checked: Dict[int, int] = {}
    minimum: Dict[int, Fraction] = {}
    rec = 0
    for n in range(up_to + 1):
        vecs = [GradedVector.from_state(s) for s in voa.basis(n)]
        vecs += [random_homogeneous(voa, n, rng) for _ in range(trials)]
        for v in vecs:
            val = pair(voa, v, v, n)
            if val <= 0:
                raise CounterexampleFound(f"B(v,v) = {val} for v = {v.to_text()}")
            minimum[n] = val if n not in minimum else min(minimum[n], val)
        checked[n] = len(vecs)
        if 2 <= n:
            bs = [GradedVector.from_state(s) for s in voa.basis(n - 1)]
            bs += [random_homogeneous(voa, n - 1, rng) for _ in range(min(trials, 10))]
            for b in bs:
                if not check_recursion(voa, b, n):
                    raise CounterexampleFound(f"recursion fails at n={n}, b={b.to_text()}")
                rec += 1
    return PosReport(True, checked, minimum, rec)


@dataclass
class HighConformalReport:
    ok: bool
    checked: Dict[int, int]

    def to_json(self):
        return {"ok": self.ok, "checked": {str(k): v for k, v in self.checked.items()}}


def no_high_conformal(voa, up_to: int, trials: int = 50, seed: int = 0) -> HighConformalReport:
    """v(2n-1)v != 0 for basis and random nonzero v in V_n, 3 <= n <= up_to.

    In a conformal vector with top component v of degree n >= 3, the top
    degree of a(1)a = 2a forces v(2n-1)v = 0; positivity excludes this.
    """
    rng = random.Random(seed)
    checked = {}
    for n in range(3, up_to + 1):
        vecs = [GradedVector.from_state(s) for s in voa.basis(n)]
        vecs += [random_homogeneous(voa, n, rng) for _ in range(trials)]
        for v in vecs:
            if not voa.mode(v, 2 * n - 1, v) or pair(voa, v, v, n) == 0:
                raise CounterexampleFound(f"v(2n-1)v = 0 for v = {v.to_text()}")
        checked[n] = len(vecs)
    return HighConformalReport(True, checked)


def classification_vector(voa, u: GradedVector, b: GradedVector) -> GradedVector:
    """(1/2)u(1)u + u + omega + Tb."""
    return voa.mode(u, 1, u) / 2 + u + voa.omega + voa.translate(b)


def is_in_cv(voa, a: GradedVector) -> bool:
    """Membership in CV on the truncation: OPE, a(0) = T and an integer grading."""
    if not (check_ope(voa, a).ok and check_derivation(voa, a)):
        return False
    try:
        eigen_grading(voa, a)
    except (NotSemisimple, NonIntegerEigenvalue):
        return False
    return True


def random_j1(voa, rng: random.Random, size: int = 5) -> GradedVector:
    acc = GradedVector.zero()
    for v in j1_basis(voa):
        acc = acc + v * random_scalar(rng, size)
    return acc
