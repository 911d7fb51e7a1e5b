"""Conformal-vector conditions and the gradings they induce.

A vector ``a`` is conformal when

* a(1)a = 2a,  a(3)a is a multiple of the vacuum,  a(n)a = 0 for n = 2, n >= 4;
* a(0) = T;
* a(1) is semisimple with integer eigenvalues.

It is of CFT type when moreover the a(1)-eigenvalues are >= 0, the
eigenspaces are finite dimensional and the 0-eigenspace is spanned by the
vacuum, and of strong CFT type when in addition a(2) kills the
1-eigenspace.  Every verdict here is exact on V_{<=N}.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Tuple

from . import linalg
from .endo import Endo
from .errors import (InvariantViolation, NonIntegerEigenvalue, NotConformal, NotSemisimple,
                     TruncationExceeded)
from .fock import GradedVector, State, VACUUM, degree, format_scalar


@dataclass(frozen=True)
class OPEResult:
    idempotent: bool  # a(1)a = 2a
    central: bool  # a(3)a is a multiple of |0>
    vanishing: bool  # a(2)a = 0 and a(n)a = 0 for n >= 4
    central_charge: Optional[Fraction]
    complete: bool = True

    def __iter__(self):
        return iter((self.idempotent, self.central, self.vanishing, self.central_charge))

    @property
    def ok(self) -> bool:
        return self.idempotent and self.central and self.vanishing


def check_ope(voa, a: GradedVector, strict: bool = False) -> OPEResult:
    """Check the three OPE conditions on V_{<=N}.

    Products with components above N are compared after dropping those
    components; ``complete`` is False when that happened.  A failure seen
    on V_{<=N} is a genuine failure.  With ``strict`` an incomplete check
    raises TruncationExceeded instead.
    """
    voa.check_in_range(a)
    top = a.max_degree()
    gaps = False
    prods = {}
    for n in range(1, max(2 * top, 4)):
        prods[n], gap = voa.mode_with_gap(a, n, a)
        gaps |= gap
    if strict and gaps:
        raise TruncationExceeded("a(n)a leaves V_<=N; OPE check would be partial")
    idempotent = prods[1] == a * 2
    p3 = prods[3]
    central = all(s == VACUUM for s in p3)
    c = 2 * p3.coefficient(VACUUM) if central else None
    vanishing = all(not prods[n] for n in prods if n == 2 or n >= 4)
    return OPEResult(idempotent, central, vanishing, c, not gaps)


def central_charge(voa, a: GradedVector) -> Optional[Fraction]:
    return check_ope(voa, a).central_charge


def derivation_witness(voa, a: GradedVector) -> Optional[State]:
    """First basis state v (deg <= N-1) with a(0)v != Tv, or None."""
    for v in voa.all_states(voa.max_degree - 1):
        vec = GradedVector.from_state(v)
        if voa.mode(a, 0, vec, truncate=True) != voa.translate(vec):
            return v
    return None


def check_derivation(voa, a: GradedVector) -> bool:
    return derivation_witness(voa, a) is None


# -- eigen-gradings -------------------------------------------------------------


@dataclass
class EigenGrading:
    """Eigenspaces V_n^a of a(1) on the truncation.

    ``leading`` is filled when each eigenvector is v + (terms of other
    degrees) for a standard basis state v; it then maps v to that vector.
    """

    eigenvalues: Tuple[int, ...]
    eigenbasis: Dict[int, Tuple[GradedVector, ...]]
    voa: object = field(repr=False)
    trust_degree: int = 0
    leading: Optional[Dict[State, GradedVector]] = field(default=None, repr=False)

    @property
    def dims(self) -> Dict[int, int]:
        return {n: len(vs) for n, vs in self.eigenbasis.items()}

    def eigenspace(self, n: int) -> Tuple[GradedVector, ...]:
        return self.eigenbasis.get(n, ())

    @property
    def change_of_basis(self) -> Endo:
        """The Endo sending standard basis state k to eigenvector k."""
        if self.leading is not None:
            return Endo(self.voa, self.leading, self.trust_degree)
        vecs = [w for n in self.eigenvalues for w in self.eigenbasis[n]]
        states = self.voa.all_states()
        return Endo(self.voa, dict(zip(states, vecs)), self.trust_degree)

    def to_json(self):
        return {"eigenvalues": list(self.eigenvalues),
                "dims": {str(n): d for n, d in sorted(self.dims.items())},
                "trust_degree": self.trust_degree}


def _mode1_images(voa, a):
    images = {}
    gap = False
    for s in voa.all_states():
        img, g = voa.mode_with_gap(a, 1, GradedVector.from_state(s))
        images[s] = img
        gap |= g
    return images, gap


def _scalar_diagonal(voa, images) -> Optional[Dict[int, Fraction]]:
    lam: Dict[int, Fraction] = {}
    for s, img in images.items():
        n = degree(s)
        diag = img.project(n)
        c = diag.coefficient(s)
        if len(diag) > (1 if c else 0):
            return None
        if lam.setdefault(n, c) != c:
            return None
    return lam


def _triangular_solve(voa, images, lam, direction):
    top = voa.max_degree

    def off_diag(x: GradedVector, n: int) -> GradedVector:
        acc = GradedVector.zero()
        for s, c in x.items():
            acc = acc + images[s] * c
        return acc - x * lam[n]

    leading: Dict[State, GradedVector] = {}
    for n in range(top + 1):
        ln = lam[n]
        if ln.denominator != 1:
            raise NonIntegerEigenvalue(f"a(1) acts on V_{n} by {ln}")
        steps = range(n + 1, top + 1) if direction > 0 else range(n - 1, -1, -1)
        for v in voa.basis(n):
            w = GradedVector.from_state(v)
            pending = off_diag(w, n)
            for m in steps:
                r = pending.project(m)
                if not r:
                    continue
                if lam[m] == ln:
                    return None
                wm = r / (ln - lam[m])
                w = w + wm
                pending = pending + off_diag(wm, m)
            leading[v] = w
    return leading


def _full_matrix(voa, images, states):
    pos = {s: i for i, s in enumerate(states)}
    mat = [[Fraction(0)] * len(states) for _ in states]
    for j, s in enumerate(states):
        for t, c in images[s].items():
            mat[pos[t]][j] = c
    return mat


def _vec_from_coords(states, coords) -> GradedVector:
    return GradedVector({s: c for s, c in zip(states, coords) if c})


def eigen_grading(voa, a: GradedVector) -> EigenGrading:
    """Decompose V_{<=N} into a(1)-eigenspaces.

    Raises NotSemisimple or NonIntegerEigenvalue when a(1) fails the
    grading condition on the truncation.
    """
    voa.check_in_range(a)
    images, gap = _mode1_images(voa, a)
    shifts = {degree(t) - degree(s) for s, img in images.items() for t in img}
    off = shifts - {0}
    direction = 0 if not off else (1 if min(off) > 0 else (-1 if max(off) < 0 else None))
    top = voa.max_degree
    trust = top if direction is not None or not gap else top - max(off)

    leading = None
    lam = _scalar_diagonal(voa, images)
    if lam is not None and direction is not None:
        leading = _triangular_solve(voa, images, lam, direction or 1)
    if leading is not None:
        basis: Dict[int, List[GradedVector]] = {}
        for v, w in leading.items():
            basis.setdefault(int(lam[degree(v)]), []).append(w)
        spaces = {n: tuple(vs) for n, vs in sorted(basis.items())}
        return EigenGrading(tuple(spaces), spaces, voa, trust, leading)

    spaces_l: Dict[int, List[GradedVector]] = {}
    if direction == 0:
        for n in range(top + 1):
            states = voa.basis(n)
            mat = _full_matrix(voa, images, states)
            for lam_n, vecs in linalg.integer_eigendecomposition(mat).items():
                spaces_l.setdefault(lam_n, []).extend(_vec_from_coords(states, x) for x in vecs)
    else:
        states = voa.all_states()
        mat = _full_matrix(voa, images, states)
        for lam_n, vecs in linalg.integer_eigendecomposition(mat).items():
            spaces_l[lam_n] = [_vec_from_coords(states, x) for x in vecs]
    spaces = {n: tuple(vs) for n, vs in sorted(spaces_l.items())}
    return EigenGrading(tuple(spaces), spaces, voa, trust)


def check_cft(voa, a: GradedVector, grading: EigenGrading | None = None) -> Tuple[bool, bool, bool]:
    """Nonnegative spectrum, finite eigenspaces, V_0^a = K|0>."""
    g = eigen_grading(voa, a) if grading is None else grading
    nonnegative = all(n >= 0 for n in g.eigenvalues)
    finite = True  # every eigenspace lives in the finite-dimensional V_<=N
    zero = g.eigenspace(0)
    vacuum_line = len(zero) == 1 and set(zero[0]) == {VACUUM}
    return nonnegative, finite, vacuum_line


def check_scft(voa, a: GradedVector, grading: EigenGrading | None = None) -> bool:
    """Strong CFT type: CFT type and a(2) V_1^a = 0."""
    if not (check_ope(voa, a).ok and check_derivation(voa, a)):
        return False
    try:
        g = eigen_grading(voa, a) if grading is None else grading
    except (NotSemisimple, NonIntegerEigenvalue):
        return False
    if not all(check_cft(voa, a, g)):
        return False
    return all(not voa.mode(a, 2, w, truncate=True) for w in g.eigenspace(1))


@dataclass
class ConformalReport:
    ope_ok: Tuple[bool, bool, bool]
    derivation_ok: bool
    grading: Optional[EigenGrading]
    cft_ok: Optional[Tuple[bool, bool, bool]]
    scft_ok: bool
    central_charge: Optional[Fraction]
    trust_degree: int
    complete: bool = True
    grading_error: Optional[str] = None

    @property
    def is_conformal(self) -> bool:
        return all(self.ope_ok) and self.derivation_ok and self.grading is not None

    @property
    def is_cft(self) -> bool:
        return self.is_conformal and self.cft_ok is not None and all(self.cft_ok)

    @property
    def is_scft(self) -> bool:
        return self.is_cft and self.scft_ok

    def to_json(self):
        return {
            "ope_ok": list(self.ope_ok),
            "derivation_ok": self.derivation_ok,
            "grading": None if self.grading is None else self.grading.to_json(),
            "grading_error": self.grading_error,
            "cft_ok": None if self.cft_ok is None else list(self.cft_ok),
            "scft_ok": self.scft_ok,
            "central_charge": None if self.central_charge is None
            else format_scalar(self.central_charge),
            "trust_degree": self.trust_degree,
            "complete": self.complete,
            "is_conformal": self.is_conformal,
            "is_cft": self.is_cft,
            "is_scft": self.is_scft,
            "scalars": "exact rationals",
        }


def conformal_report(voa, a: GradedVector) -> ConformalReport:
    ope = check_ope(voa, a)
    deriv = check_derivation(voa, a)
    grading = None
    err = None
    try:
        grading = eigen_grading(voa, a)
    except (NotSemisimple, NonIntegerEigenvalue) as exc:
        err = f"{type(exc).__name__}: {exc}"
    cft = scft = None
    if grading is not None:
        cft = check_cft(voa, a, grading)
    conformal = ope.ok and deriv and grading is not None
    if conformal and all(cft):
        scft = all(not voa.mode(a, 2, w, truncate=True) for w in grading.eigenspace(1))
    trust = voa.max_degree if grading is None else min(voa.max_degree, grading.trust_degree)
    return ConformalReport((ope.idempotent, ope.central, ope.vanishing), deriv, grading, cft, bool(scft),
                           ope.central_charge, trust, ope.complete, err)


# -- V_1 structure ------------------------------------------------------------------


def _stacked_zero_mode(voa, vecs):
    """Columns: v(0) applied to every basis w of degree <= N-1, stacked."""
    rows: Dict[tuple, int] = {}
    cols = []
    for v in vecs:
        col = {}
        for w in voa.all_states(voa.max_degree - 1):
            out = voa.mode(v, 0, GradedVector.from_state(w))
            for t, c in out.items():
                col[(w, t)] = c
                rows.setdefault((w, t), len(rows))
        cols.append(col)
    mat = [[Fraction(0)] * len(vecs) for _ in rows]
    for j, col in enumerate(cols):
        for key, c in col.items():
            mat[rows[key]][j] = c
    return mat


def _kernel_combos(basis_vecs, mat) -> List[GradedVector]:
    out = []
    for x in linalg.nullspace(mat, ncols=len(basis_vecs)):
        v = GradedVector.zero()
        for c, b in zip(x, basis_vecs):
            if c:
                v = v + b * c
        out.append(v)
    return out


def j1_basis(voa) -> List[GradedVector]:
    """Basis of J_1 = {v in V_1 : v(0) = 0} (checked on degrees <= N-1)."""
    v1 = [GradedVector.from_state(s) for s in voa.basis(1)]
    if not v1:
        return []
    return _kernel_combos(v1, _stacked_zero_mode(voa, v1))


def in_j1(voa, v: GradedVector) -> bool:
    if any(degree(s) != 1 for s in v):
        return False
    return all(not voa.mode(v, 0, GradedVector.from_state(w))
               for w in voa.all_states(voa.max_degree - 1))


def lie_v1(voa, u: GradedVector, v: GradedVector) -> GradedVector:
    """The bracket [u, v] = u(0)v on V_1."""
    if any(degree(s) != 1 for s in list(u) + list(v)):
        raise ValueError("lie_v1 takes vectors of V_1")
    return voa.mode(u, 0, v)


def v1_center(voa) -> List[GradedVector]:
    """Basis of {u in V_1 : u(0)v = 0 for all v in V_1}."""
    v1 = [GradedVector.from_state(s) for s in voa.basis(1)]
    rows: Dict[tuple, int] = {}
    cols = []
    for u in v1:
        col = {}
        for w in voa.basis(1):
            for t, c in voa.mode(u, 0, GradedVector.from_state(w)).items():
                col[(w, t)] = c
                rows.setdefault((w, t), len(rows))
        cols.append(col)
    mat = [[Fraction(0)] * len(v1) for _ in rows]
    for j, col in enumerate(cols):
        for key, c in col.items():
            mat[rows[key]][j] = c
    return _kernel_combos(v1, mat)


def pr1_reduce(voa, a: GradedVector) -> Tuple[GradedVector, GradedVector]:
    """Split off the degree-1 part: returns (u, exp(-u(1)) a) with u = pr_1(a).

    The second vector must lie in V_{>=2}; anything else is reported as a
    InvariantViolation.
    """
    ope = check_ope(voa, a)
    if not ope.ok:
        raise NotConformal("a fails the OPE conditions")
    if not check_derivation(voa, a):
        raise NotConformal("a(0) != T")
    u = a.project(1)
    if not in_j1(voa, u):
        raise InvariantViolation("pr_1 of a conformal vector is not in J_1")
    reduced = voa.exp_mode1(-u, a)
    if reduced.project(0) or reduced.project(1):
        raise InvariantViolation("exp(-pr_1(a)(1)) a has components in degree 0 or 1")
    return u, reduced


def translation_matrix(voa, n: int):
    """Matrix of T: V_{n-1} -> V_n in the canonical bases."""
    src, dst = voa.basis(n - 1), voa.basis(n)
    cols = [voa.translate(GradedVector.from_state(s)) for s in src]
    return [[c.coefficient(t) for c in cols] for t in dst]


def is_in_image_T(voa, v: GradedVector) -> Optional[GradedVector]:
    """The x (without vacuum component) with Tx = v, or None."""
    voa.check_in_range(v)
    if v.project(0):
        return None
    x = GradedVector.zero()
    for n in v.degrees():
        if n == 1:
            return None
        target = v.project(n)
        mat = translation_matrix(voa, n)
        sol = linalg.solve(mat, [target.coefficient(t) for t in voa.basis(n)])
        if sol is None:
            return None
        x = x + _vec_from_coords(voa.basis(n - 1), sol)
    return x
