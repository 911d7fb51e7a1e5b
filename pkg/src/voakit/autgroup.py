"""Automorphisms of the truncated Heisenberg VOA.

Aut^- is reached by exp(u(1)) for u in J_1, Aut^0 contains the orthogonal
group of V_1 (lifted to the Fock space), and the projection automorphism of
an eigen-grading supplies the Aut^+ / Aut^- factors.  ``decompose`` splits
an automorphism as g h k with g in Aut^-, h in Aut^0, k in Aut^+.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Sequence

from . import linalg
from .conformal import (EigenGrading, check_cft, check_derivation, check_ope, check_scft,
                        eigen_grading, in_j1, is_in_image_T, pr1_reduce)
from .endo import Endo
from .errors import (GradingIncompatible, HypothesisFailed, InvariantViolation, NonIntegerEigenvalue,
                     NotAutomorphism, NotInJ1, NotSemisimple, NotStrongCFT, ScftV2Violation,
                     TruncationExceeded)
from .fock import VACUUM, GradedVector, State, degree, format_scalar


# -- Aut^- ---------------------------------------------------------------------


def exp_j1(voa, v: GradedVector) -> Endo:
    """The automorphism exp(v(1)) for v in J_1."""
    if v and not in_j1(voa, v):
        raise NotInJ1(f"{v.to_text()} is not in J_1")
    if not v:
        return Endo.identity(voa)
    return Endo(voa, {s: voa.exp_mode1(v, GradedVector.from_state(s)) for s in voa.all_states()})


# -- Aut^0 -----------------------------------------------------------------------


def extend_from_generators(voa, gen_images: Dict[int, GradedVector], trust_degree=None) -> Endo:
    """The unique candidate homomorphism with h_i -> gen_images[i].

    Uses f(h_i(-m)u) = f(h_i)(-m) f(u).  Dropped components above N only
    feed degrees above N, so the stored images are exact.
    """
    if set(gen_images) != set(range(1, voa.rank + 1)):
        raise ValueError("need one image per color 1..rank")
    images: Dict[State, GradedVector] = {VACUUM: GradedVector.vacuum()}
    for s in voa.all_states():
        if s in images:
            continue
        (c, m), rest = s[0], s[1:]
        images[s] = voa.mode(gen_images[c], -m, images[rest], truncate=True)
    return Endo(voa, images, trust_degree)


def orthogonal_lift(voa, matrix: Sequence[Sequence]) -> Endo:
    """Lift h_j -> sum_i M[i][j] h_i for a rational orthogonal M."""
    r = voa.rank
    m = [[Fraction(x) for x in row] for row in matrix]
    if len(m) != r or any(len(row) != r for row in m):
        raise ValueError(f"expected an {r}x{r} matrix")
    if not linalg.is_identity(linalg.matmul(linalg.transpose(m), m)):
        raise NotAutomorphism("matrix is not orthogonal, so the lift breaks h_i(1)h_j")
    gens = {j + 1: GradedVector({((i + 1, 1),): m[i][j] for i in range(r) if m[i][j]})
            for j in range(r)}
    return extend_from_generators(voa, gens)


def signed_permutation_matrix(perm: Sequence[int], signs: Sequence[int]):
    """Matrix sending e_j to signs[j] * e_{perm[j]} (0-based perm)."""
    r = len(perm)
    m = [[Fraction(0)] * r for _ in range(r)]
    for j, (p, s) in enumerate(zip(perm, signs)):
        m[p][j] = Fraction(s)
    return m


def sign_automorphism(voa) -> Endo:
    """sigma: h -> -h, i.e. state -> (-1)^{#parts} state."""
    return Endo(voa, {s: GradedVector.from_state(s, (-1) ** len(s)) for s in voa.all_states()})


# -- membership ---------------------------------------------------------------------


@dataclass
class Membership:
    is_aut: bool
    is_aut_plus: bool
    is_aut_zero: bool
    is_aut_minus: bool
    fixes_omega: bool
    checked: int = 0
    skipped: int = 0
    failure: Optional[str] = None

    def to_json(self):
        return {k: getattr(self, k) for k in
                ("is_aut", "is_aut_plus", "is_aut_zero", "is_aut_minus", "fixes_omega",
                 "checked", "skipped", "failure")}


def _reliable_degree(f: Endo, n: int, fu: GradedVector, fv: GradedVector) -> int:
    """Top degree at which f(u)(n)f(v) is exact given truncated images."""
    top = min(f.voa.max_degree, f.trust_degree)
    if f.shift_profile[1] <= 0:
        return top
    lows = [x.min_degree() for x in (fu, fv) if x]
    if not lows:
        return top
    return min(top, f.voa.max_degree - n - 1 + min(lows))


def _product_pairs(voa, exhaustive: bool):
    top = voa.max_degree
    if exhaustive:
        lefts = voa.all_states()
    else:
        lefts = [((c, 1),) for c in range(1, voa.rank + 1)]
    for u in lefts:
        du = degree(u)
        for v in voa.all_states():
            dv = degree(v)
            for n in range(du + dv - top - 1, du + dv):
                yield u, n, v


def membership(f: Endo, exhaustive: bool = False) -> Membership:
    """Automorphism test plus the graded memberships.

    By default products are checked only against the generators h_i, which
    suffices because they generate V; ``exhaustive`` checks every basis
    pair instead.  Comparisons are restricted to degrees where truncated
    images cannot interfere.
    """
    voa = f.voa
    if f.is_identity():
        return Membership(True, True, True, True, True)
    failure = None
    checked = skipped = 0
    cache: Dict[State, GradedVector] = {}

    def img(s: State) -> GradedVector:
        if s not in cache:
            cache[s] = f.image(s)
        return cache[s]

    if f(GradedVector.vacuum()) != GradedVector.vacuum():
        failure = "f(|0>) != |0>"
    invertible = True
    for n in range(voa.max_degree + 1):
        if linalg.rank(f.block(n, n)) != voa.dim(n):
            invertible = False
            failure = failure or f"diagonal block at degree {n} is singular"
            break
    if failure is None:
        for u, n, v in _product_pairs(voa, exhaustive):
            uv = GradedVector.from_state(u)
            vv = GradedVector.from_state(v)
            fu, fv = img(u), img(v)
            top = _reliable_degree(f, n, fu, fv)
            if top < 0:
                skipped += 1
                continue
            lhs = f(voa.mode(uv, n, vv)).truncate(top)
            rhs = voa.mode(fu, n, fv, truncate=True).truncate(top)
            checked += 1
            if lhs != rhs:
                failure = f"f(u({n})v) != f(u)({n})f(v) for u={uv.to_text()}, v={vv.to_text()}"
                break
    is_aut = failure is None and invertible
    lo, hi = f.shift_profile
    diag_id = all(linalg.is_identity(f.block(n, n)) for n in range(voa.max_degree + 1))
    fixes = f(voa.omega) == voa.omega
    return Membership(is_aut, is_aut and lo >= 0 and diag_id, is_aut and lo == hi == 0,
                      is_aut and hi <= 0 and diag_id, fixes, checked, skipped, failure)


def is_automorphism(f: Endo, exhaustive: bool = False) -> bool:
    return membership(f, exhaustive).is_aut


# -- projection automorphisms ---------------------------------------------------------


def build_projection_auto(grading: EigenGrading, orientation: str = "raising") -> Endo:
    """The map v -> w_v, where w_v is the element of V'_n with pr_n(w_v) = v.

    Here V'_n is the n-eigenspace of the grading.  Its inverse restricts to
    pr_n on each V'_n.  ``raising`` needs V'_n in V_{>=n} with
    V'_n meeting V_{>=n+1} trivially; ``lowering`` is the mirror image.
    """
    if orientation not in ("raising", "lowering"):
        raise ValueError("orientation is 'raising' or 'lowering'")
    voa = grading.voa
    top = voa.max_degree
    images: Dict[State, GradedVector] = {}
    for n in range(top + 1):
        vecs = grading.eigenspace(n)
        for w in vecs:
            bad = [d for d in w.degrees() if (d < n if orientation == "raising" else d > n)]
            if bad:
                raise GradingIncompatible(
                    f"eigenvector for {n} has a component in degree {bad[0]}")
        states = voa.basis(n)
        proj = [[w.coefficient(s) for w in vecs] for s in states]
        if len(vecs) != len(states) or linalg.rank(proj) != len(states):
            raise GradingIncompatible(
                f"pr_{n} is not a bijection from the {n}-eigenspace onto V_{n}")
        inv = linalg.inverse(proj)
        for i, s in enumerate(states):
            acc = GradedVector.zero()
            for j, w in enumerate(vecs):
                if inv[j][i]:
                    acc = acc + w * inv[j][i]
            images[s] = acc
    extra = [n for n in grading.eigenvalues if not 0 <= n <= top]
    if extra:
        raise GradingIncompatible(f"eigenvalue {extra[0]} has no matching V_n")
    return Endo(voa, images, grading.trust_degree)


def build_psi(voa, a: GradedVector, check_unique: bool = True) -> Endo:
    """The element psi_a of Aut^+ with psi_a(omega) = a.

    Raises HypothesisFailed naming the first hypothesis a violates.
    """
    if a.project(0) or a.project(1):
        raise HypothesisFailed("a in V_>=2")
    if a.project(2) != voa.omega:
        raise HypothesisFailed("pr_2(a) == omega", f"pr_2(a) = {a.project(2).to_text()}")
    if not check_ope(voa, a).idempotent:
        raise HypothesisFailed("a(1)a == 2a")
    if not check_derivation(voa, a):
        raise HypothesisFailed("a(0) == T")
    try:
        grading = eigen_grading(voa, a)
    except (NotSemisimple, NonIntegerEigenvalue) as exc:
        raise HypothesisFailed("a(1) semisimple with integer eigenvalues", str(exc)) from exc
    try:
        psi = build_projection_auto(grading, "raising")
    except GradingIncompatible as exc:
        raise InvariantViolation(f"grading of a conformal a in V_>=2 is not raising: {exc}") from exc
    top = psi.trust_degree
    if psi(voa.omega).truncate(top) != a.truncate(top):
        raise InvariantViolation("psi_a(omega) != a")
    if check_unique:
        # a second route: the homomorphism determined by the images of the h_i
        other = extend_from_generators(voa, {c: psi(voa.h(c)) for c in range(1, voa.rank + 1)})
        if not psi.agrees_with(other):
            raise InvariantViolation("two constructions of psi_a disagree")
    return psi


# -- conjugation and decomposition ------------------------------------------------------


def conjugate_to_omega(voa, a: GradedVector) -> Endo:
    """An automorphism f with f(omega) = a, for a of strong CFT type."""
    if not check_scft(voa, a):
        raise NotStrongCFT(f"{a.to_text()} is not a conformal vector of strong CFT type")
    u, reduced = pr1_reduce(voa, a)
    if reduced.project(2) != voa.omega:
        raise ScftV2Violation(f"pr_2 of the reduced vector is {reduced.project(2).to_text()}")
    f = exp_j1(voa, u) @ build_psi(voa, reduced)
    top = f.trust_degree
    if f(voa.omega).truncate(top) != a.truncate(top):
        raise InvariantViolation("conjugating automorphism does not send omega to a")
    return f


@dataclass
class Decomposition:
    g: Endo
    h: Endo
    k: Endo
    trust_degree: int = 0

    def product(self) -> Endo:
        return self.g @ self.h @ self.k

    def summary(self):
        return {
            "g_is_identity": self.g.is_identity(),
            "h_is_identity": self.h.is_identity(),
            "k_is_identity": self.k.is_identity(),
            "g_image_of_omega_degree1": self.g(self.g.voa.omega).project(1).to_text(),
            "trust_degree": self.trust_degree,
        }

    def to_json(self):
        out = self.summary()
        out.update(g=self.g.to_json(), h=self.h.to_json(), k=self.k.to_json())
        return out


def _split(f: Endo) -> Decomposition:
    voa = f.voa
    a = f(voa.omega)
    u = a.project(1)
    if not in_j1(voa, u):
        raise InvariantViolation("pr_1(f(omega)) is not in J_1")
    g = exp_j1(voa, u)
    g_inv = exp_j1(voa, -u)
    b = g_inv(a)
    psi_b = build_psi(voa, b)
    h = psi_b.inverse() @ g_inv @ f
    lo, hi = h.shift_profile
    if not lo == hi == 0:
        raise InvariantViolation("middle factor does not preserve degrees")
    if h(voa.omega) != voa.omega:
        raise InvariantViolation("middle factor does not fix omega")
    k = h.inverse() @ psi_b @ h
    trust = min(g.trust_degree, h.trust_degree, k.trust_degree, f.trust_degree)
    return Decomposition(g, h, k, trust)


def decompose(f: Endo, verify: bool = True) -> Decomposition:
    """Unique factorization f = g h k with g in Aut^-, h in Aut^0, k in Aut^+."""
    if verify:
        mem = membership(f)
        if not mem.is_aut:
            raise NotAutomorphism(mem.failure or "not an automorphism")
    d = _split(f)
    top = d.trust_degree
    if not d.product().agrees_with(f, top):
        raise InvariantViolation("g h k != f")
    if verify:
        for name, factor, flag in (("g", d.g, "is_aut_minus"), ("h", d.h, "is_aut_zero"),
                                   ("k", d.k, "is_aut_plus")):
            if not getattr(membership(factor), flag):
                raise InvariantViolation(f"factor {name} fails {flag}")
    again = _split(d.product())
    if not all(x.agrees_with(y, top) for x, y in ((again.g, d.g), (again.h, d.h), (again.k, d.k))):
        raise InvariantViolation("decomposition of g h k differs from (g, h, k)")
    return d


# -- orbits of V_2 conformal vectors ------------------------------------------------------


@dataclass
class Orbit:
    representative: int
    central_charge: Fraction
    members: List[int] = field(default_factory=list)
    witnesses: Dict[int, dict] = field(default_factory=dict)

    def to_json(self):
        return {"representative": self.representative,
                "central_charge": format_scalar(self.central_charge),
                "members": self.members,
                "witnesses": {str(k): v for k, v in self.witnesses.items()}}


@dataclass
class OrbitReport:
    samples: List[GradedVector]
    orbits: List[Orbit]
    rejected: Dict[int, str] = field(default_factory=dict)

    def orbit_of(self, i: int) -> Optional[Orbit]:
        return next((o for o in self.orbits if i in o.members), None)

    def to_json(self):
        return {"samples": [s.to_text() for s in self.samples],
                "orbits": [o.to_json() for o in self.orbits],
                "rejected": {str(k): v for k, v in self.rejected.items()}}


def _v1_coords(voa, x: GradedVector) -> List[Fraction]:
    return [x.coefficient(((c, 1),)) for c in range(1, voa.rank + 1)]


def _witness_matrices(x, y):
    """Rational orthogonal M with M x = y: signed permutations, then a reflection."""
    r = len(x)
    for perm in itertools.permutations(range(r)):
        for signs in itertools.product((1, -1), repeat=r):
            if all(signs[j] * x[j] == y[perm[j]] for j in range(r)):
                kind = "identity" if list(perm) == list(range(r)) and all(
                    s == 1 for s in signs) else "signed_permutation"
                if kind == "signed_permutation" and r == 1:
                    kind = "sigma"
                yield kind, signed_permutation_matrix(perm, signs)
                return
    d = [xi - yi for xi, yi in zip(x, y)]
    dd = sum(t * t for t in d)
    if dd and sum(t * t for t in x) == sum(t * t for t in y):
        yield "reflection", [[Fraction(int(i == j)) - 2 * d[i] * d[j] / dd for j in range(r)]
                             for i in range(r)]


def find_aut_omega_witness(voa, a: GradedVector, b: GradedVector, verify: bool = True):
    """An Aut_omega element f with f(a) = b, for a, b in omega + T V_1, or None."""
    xa = is_in_image_T(voa, a - voa.omega)
    xb = is_in_image_T(voa, b - voa.omega)
    if xa is None or xb is None:
        return None
    x, y = _v1_coords(voa, xa), _v1_coords(voa, xb)
    for kind, m in _witness_matrices(x, y):
        f = orthogonal_lift(voa, m)
        if f(a) != b or f(voa.omega) != voa.omega:
            continue
        if verify and not membership(f).is_aut:
            continue
        return {"kind": kind, "matrix": [[format_scalar(t) for t in row] for row in m]}, f
    return None


def classify_v2(voa, samples: Sequence[GradedVector], verify: bool = True) -> OrbitReport:
    """Group V_2 conformal vectors of CFT type into Aut_omega-orbits.

    The central charge separates orbits; within a charge, orbits are merged
    only on an explicit witness.
    """
    orbits: List[Orbit] = []
    rejected: Dict[int, str] = {}
    for i, a in enumerate(samples):
        if any(d != 2 for d in a.degrees()):
            rejected[i] = "not in V_2"
            continue
        ope = check_ope(voa, a)
        try:
            ok = ope.ok and check_derivation(voa, a) and all(check_cft(voa, a))
        except (NotSemisimple, NonIntegerEigenvalue, TruncationExceeded) as exc:
            ok = False
            rejected[i] = type(exc).__name__
        if not ok:
            rejected.setdefault(i, "not a conformal vector of CFT type")
            continue
        c = ope.central_charge
        for orb in orbits:
            if orb.central_charge != c:
                continue
            hit = find_aut_omega_witness(voa, samples[orb.representative], a, verify)
            if hit is not None:
                orb.members.append(i)
                orb.witnesses[i] = hit[0]
                break
        else:
            orbits.append(Orbit(i, c, [i], {i: {"kind": "identity"}}))
    return OrbitReport(list(samples), orbits, rejected)
