"""Vertex operators of the rank-r Heisenberg VOA on the truncated Fock space.

The currents satisfy [h_i(m), h_j(n)] = kappa * m * delta_ij * delta_{m+n,0}.
Products ``a(n)b`` of arbitrary states are computed by peeling one creation
operator off ``a = h_i(-k) u`` and expanding the iterate

    (h_i(-k)u)(n) = sum_{j>=0} C(k+j-1, j) [ h_i(-k-j) u(n+j)
                                            - (-1)^k u(n-k-j) h_i(j) ]

down to the vacuum, where 1(n) = delta_{n,-1}.  Every intermediate product
has degree at most that of the final output, so results at degree <= N are
exact.
"""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass
from fractions import Fraction
from math import comb, factorial
from typing import Dict, List, Optional

from .errors import TruncationExceeded
from .fock import (AlgebraConfig, GradedVector, State, canonical, colored_partitions,
                   degree, enumerate_basis)


@dataclass(frozen=True)
class AxiomResult:
    """Outcome of an identity check: ``ok`` plus how many instances ran."""

    ok: bool
    checked: int = 0
    skipped: int = 0
    failure: Optional[str] = None

    def __bool__(self):
        return self.ok


class HeisenbergVOA:
    """Mode calculus for one :class:`AlgebraConfig`.

    ``strip`` selects which creation operator the recursion peels first
    (``"first"`` or ``"last"`` in canonical order); both give identical
    products.
    """

    def __init__(self, config: AlgebraConfig | None = None, *, rank=None, level=None,
                 max_degree=None, strip: str = "first"):
        if config is None:
            config = AlgebraConfig(rank=1 if rank is None else rank,
                                   level=1 if level is None else level,
                                   max_degree=6 if max_degree is None else max_degree)
        if strip not in ("first", "last"):
            raise ValueError("strip must be 'first' or 'last'")
        self.config = config
        self.strip = strip
        self._memo: Dict[tuple, Dict[State, Fraction]] = {}
        self._omega = None
        self._index = None

    def __repr__(self):
        c = self.config
        return f"HeisenbergVOA(rank={c.rank}, level={c.level}, max_degree={c.max_degree})"

    @property
    def rank(self) -> int:
        return self.config.rank

    @property
    def level(self) -> Fraction:
        return self.config.level

    @property
    def max_degree(self) -> int:
        return self.config.max_degree

    # -- basis bookkeeping ------------------------------------------------

    def basis(self, n: int) -> List[State]:
        return enumerate_basis(self.config, n)

    def dim(self, n: int) -> int:
        return len(self.basis(n))

    def all_states(self, top: int | None = None) -> List[State]:
        top = self.max_degree if top is None else top
        out: List[State] = []
        for n in range(top + 1):
            out.extend(self.basis(n))
        return out

    def index(self, state: State) -> int:
        """Position of ``state`` inside its degree's basis list."""
        if self._index is None:
            self._index = {s: i for n in range(self.max_degree + 1)
                           for i, s in enumerate(self.basis(n))}
        return self._index[state]

    def check_in_range(self, v: GradedVector):
        if v.max_degree() > self.max_degree:
            raise TruncationExceeded(
                f"vector has degree {v.max_degree()} > max_degree {self.max_degree}")
        for s in v:
            if any(not 1 <= c <= self.rank for c, _ in s):
                raise ValueError(f"state {s} uses a color outside 1..{self.rank}")

    # -- distinguished vectors ---------------------------------------------

    def vacuum(self) -> GradedVector:
        return GradedVector.vacuum()

    def h(self, color: int, m: int = 1) -> GradedVector:
        return GradedVector.from_state(((color, m),))

    @property
    def omega(self) -> GradedVector:
        """The standard conformal vector (1/2kappa) sum_i h_i(-1)^2 |0>."""
        if self._omega is None:
            c = 1 / (2 * self.level)
            self._omega = GradedVector({((i, 1), (i, 1)): c for i in range(1, self.rank + 1)})
        return self._omega

    # -- currents ------------------------------------------------------------

    def heis_mode(self, color: int, m: int, v: GradedVector) -> GradedVector:
        """Apply the current mode h_color(m) to ``v``."""
        if m < 0:
            top = v.max_degree()
            if top >= 0 and top - m > self.max_degree:
                raise TruncationExceeded(
                    f"h_{color}({m}) raises degree {top} past {self.max_degree}")
        out: Dict[State, Fraction] = defaultdict(Fraction)
        for s, c in v.items():
            for t, d in _current_on_state(self.level, color, m, s):
                out[t] += c * d
        return GradedVector(out)

    # -- mode products -------------------------------------------------------

    def _mode_basis(self, sa: State, n: int, sb: State) -> Dict[State, Fraction]:
        key = (sa, n, sb)
        hit = self._memo.get(key)
        if hit is not None:
            return hit
        da, db = degree(sa), degree(sb)
        if da + db - n - 1 < 0:
            result: Dict[State, Fraction] = {}
        elif not sa:
            result = {sb: Fraction(1)} if n == -1 else {}
        else:
            if self.strip == "first":
                (color, k), u = sa[0], sa[1:]
            else:
                (color, k), u = sa[-1], sa[:-1]
            du = da - k
            acc: Dict[State, Fraction] = defaultdict(Fraction)
            # creation branch: u(n+j)b vanishes once its degree goes negative
            for j in range(0, du + db - n):
                inner = self._mode_basis(u, n + j, sb)
                if not inner:
                    continue
                c = comb(k + j - 1, j)
                for st, co in inner.items():
                    acc[canonical(st + ((color, k + j),))] += c * co
            # annihilation branch: h(j)b = 0 for j = 0 and for j > deg b
            sign = -1 if k % 2 == 0 else 1
            mults = defaultdict(int)
            for p in sb:
                if p[0] == color:
                    mults[p[1]] += 1
            for j, mult in mults.items():
                rest = list(sb)
                rest.remove((color, j))
                tb = tuple(rest)
                inner = self._mode_basis(u, n - k - j, tb)
                if not inner:
                    continue
                c = sign * comb(k + j - 1, j) * self.level * j * mult
                for st, co in inner.items():
                    acc[st] += c * co
            result = {s: c for s, c in acc.items() if c}
        self._memo[key] = result
        return result

    def mode_with_gap(self, a: GradedVector, n: int, b: GradedVector):
        """Return ``(pr_{<=N}(a(n)b), truncated)`` where ``truncated`` flags
        that some component pair would have landed above N."""
        top = self.max_degree
        out: Dict[State, Fraction] = defaultdict(Fraction)
        truncated = False
        b_items = [(sb, cb, degree(sb)) for sb, cb in b.items()]
        for sa, ca in a.items():
            da = degree(sa)
            for sb, cb, db in b_items:
                d = da + db - n - 1
                if d < 0:
                    continue
                if d > top:
                    truncated = True
                    continue
                coeff = ca * cb
                for s, c in self._mode_basis(sa, n, sb).items():
                    out[s] += coeff * c
        return GradedVector(out), truncated

    def mode(self, a: GradedVector, n: int, b: GradedVector, truncate: bool = False) -> GradedVector:
        """The ``n``-th product ``a(n)b``.

        Raises TruncationExceeded when a component would exceed the
        truncation degree, unless ``truncate`` is set, in which case those
        components are dropped (the rest is still exact).
        """
        v, gap = self.mode_with_gap(a, n, b)
        if gap and not truncate:
            raise TruncationExceeded(f"a({n})b has components above degree {self.max_degree}")
        return v

    def translate(self, a: GradedVector) -> GradedVector:
        """T a = a(-2)|0>."""
        return self.mode(a, -2, self.vacuum())

    def exp_mode1(self, u: GradedVector, v: GradedVector) -> GradedVector:
        """exp(u(1)) v for a degree-lowering u(1) (u in V_1, or V_0 + V_1)."""
        if u.max_degree() > 1:
            raise ValueError("exp_mode1 needs u(1) to lower degree (u in V_{<=1})")
        total = v
        term = v
        k = 1
        while True:
            term = self.mode(u, 1, term) / k
            if not term:
                break
            total = total + term
            k += 1
        return total


def _current_on_state(level, color, m, s: State):
    if m < 0:
        return [(canonical(s + ((color, -m),)), Fraction(1))]
    if m == 0:
        return []
    mult = s.count((color, m))
    if not mult:
        return []
    rest = list(s)
    rest.remove((color, m))
    return [(tuple(rest), level * m * mult)]


# -- axiom checks ---------------------------------------------------------------


def check_vacuum(voa: HeisenbergVOA, a: GradedVector, indices=range(-4, 5)) -> AxiomResult:
    """a(-1)1 = a, a(n)1 = 0 for n >= 0, 1(n)a = delta_{n,-1} a."""
    one = voa.vacuum()
    checked = skipped = 0
    if voa.mode(a, -1, one) != a:
        return AxiomResult(False, 1, 0, "a(-1)1 != a")
    checked += 1
    for n in indices:
        if n >= 0:
            checked += 1
            if voa.mode(a, n, one):
                return AxiomResult(False, checked, skipped, f"a({n})1 != 0")
        out, gap = voa.mode_with_gap(one, n, a)
        if gap:
            skipped += 1
            continue
        checked += 1
        if out != (a if n == -1 else GradedVector.zero()):
            return AxiomResult(False, checked, skipped, f"1({n})a wrong")
    return AxiomResult(True, checked, skipped)


def check_translation(voa: HeisenbergVOA, a: GradedVector, b: GradedVector,
                      indices=range(-4, 5)) -> AxiomResult:
    """(Ta)(n)b = -n a(n-1)b wherever both sides stay within truncation."""
    if a.max_degree() + 1 > voa.max_degree:
        return AxiomResult(True, 0, len(indices))
    ta = voa.translate(a)
    checked = skipped = 0
    for n in indices:
        lhs, g1 = voa.mode_with_gap(ta, n, b)
        rhs, g2 = voa.mode_with_gap(a, n - 1, b)
        if g1 or g2:
            skipped += 1
            continue
        checked += 1
        if lhs != rhs * (-n):
            return AxiomResult(False, checked, skipped, f"(Ta)({n}) != {-n} a({n - 1})")
    return AxiomResult(True, checked, skipped)


def check_skew_symmetry(voa: HeisenbergVOA, a: GradedVector, b: GradedVector,
                        indices=range(-4, 5)) -> AxiomResult:
    """a(n)b = sum_k (-1)^(n+k+1) T^k (b(n+k)a) / k! on in-range outputs."""
    checked = skipped = 0
    da, db = a.max_degree(), b.max_degree()
    for n in indices:
        lhs, gap = voa.mode_with_gap(a, n, b)
        if gap:
            skipped += 1
            continue
        rhs = GradedVector.zero()
        k = 0
        while da + db - n - k - 1 >= 0:
            inner, g = voa.mode_with_gap(b, n + k, a)
            if g:
                gap = True
                break
            for _ in range(k):
                inner = voa.translate(inner)
            sgn = -1 if (n + k + 1) % 2 else 1
            rhs = rhs + inner * Fraction(sgn, factorial(k))
            k += 1
        if gap:
            skipped += 1
            continue
        checked += 1
        if lhs != rhs:
            return AxiomResult(False, checked, skipped, f"skew-symmetry fails at n={n}")
    return AxiomResult(True, checked, skipped)


def _gbinom(x: int, i: int) -> int:
    num = 1
    for t in range(i):
        num *= x - t
    return num // factorial(i)


def check_borcherds_sample(voa: HeisenbergVOA, u: GradedVector, v: GradedVector,
                           w: GradedVector, p: int, q: int, s: int) -> AxiomResult:
    """One instance of the Borcherds identity

        sum_i C(p,i) (u(q+i)v)(p+s-i) w
          = sum_i (-1)^i C(q,i) [u(p+q-i) v(s+i) w - (-1)^q v(q+s-i) u(p+i) w].

    Instances whose intermediate products leave the truncation are skipped
    (``checked == 0``).
    """
    du, dv, dw = u.max_degree(), v.max_degree(), w.max_degree()
    if min(du, dv, dw) < 0:
        return AxiomResult(True, 1, 0)
    try:
        lhs = GradedVector.zero()
        i = 0
        while du + dv - q - i - 1 >= 0:
            c = _gbinom(p, i)
            if c:
                lhs = lhs + voa.mode(voa.mode(u, q + i, v), p + s - i, w) * c
            i += 1
        rhs = GradedVector.zero()
        sign_q = -1 if q % 2 else 1
        i = 0
        while dv + dw - s - i - 1 >= 0 or du + dw - p - i - 1 >= 0:
            c = _gbinom(q, i) * (-1 if i % 2 else 1)
            if c:
                t1 = voa.mode(u, p + q - i, voa.mode(v, s + i, w))
                t2 = voa.mode(v, q + s - i, voa.mode(u, p + i, w))
                rhs = rhs + (t1 - t2 * sign_q) * c
            i += 1
    except TruncationExceeded:
        return AxiomResult(True, 0, 1)
    if lhs != rhs:
        return AxiomResult(False, 1, 0, f"Borcherds identity fails at (p,q,s)=({p},{q},{s})")
    return AxiomResult(True, 1, 0)


def translation_by_derivation(voa: HeisenbergVOA, a: GradedVector) -> GradedVector:
    """T computed as the derivation T h_i(-m) = m h_i(-m-1), T|0> = 0."""
    out: Dict[State, Fraction] = defaultdict(Fraction)
    for s, c in a.items():
        for idx, (col, m) in enumerate(s):
            t = canonical(s[:idx] + ((col, m + 1),) + s[idx + 1:])
            out[t] += c * m
    v = GradedVector(out)
    voa.check_in_range(v)
    return v


@dataclass
class AxiomSuiteReport:
    results: Dict[str, AxiomResult]

    @property
    def ok(self) -> bool:
        return all(r.ok for r in self.results.values())

    def to_json(self):
        return {name: {"ok": r.ok, "checked": r.checked, "skipped": r.skipped,
                       "failure": r.failure} for name, r in self.results.items()}


def _accumulate(total: AxiomResult, r: AxiomResult) -> AxiomResult:
    return AxiomResult(total.ok and r.ok, total.checked + r.checked, total.skipped + r.skipped,
                       total.failure or r.failure)


def run_axiom_suite(voa: HeisenbergVOA, indices=range(-4, 5), pair_degree: int | None = None,
                    triple_degree: int = 3, triple_indices=range(-3, 4)) -> AxiomSuiteReport:
    """Vacuum, translation and skew-symmetry on basis pairs, Borcherds on triples.

    Pairs (a, b) run over basis states with deg a + deg b <= ``pair_degree``
    (default N); Borcherds triples have total degree <= ``triple_degree``.
    """
    top = voa.max_degree
    pair_degree = top if pair_degree is None else pair_degree
    states = voa.all_states()
    vecs = {s: GradedVector.from_state(s) for s in states}
    names = ("vacuum", "translation", "skew_symmetry", "borcherds")
    res = {k: AxiomResult(True, 0, 0) for k in names}
    for s in states:
        res["vacuum"] = _accumulate(res["vacuum"], check_vacuum(voa, vecs[s], indices))
    for sa in states:
        for sb in states:
            if degree(sa) + degree(sb) > pair_degree:
                continue
            a, b = vecs[sa], vecs[sb]
            res["translation"] = _accumulate(res["translation"],
                                             check_translation(voa, a, b, indices))
            res["skew_symmetry"] = _accumulate(res["skew_symmetry"],
                                               check_skew_symmetry(voa, a, b, indices))
    small = [s for s in states if degree(s) <= triple_degree]
    for su in small:
        for sv in small:
            for sw in small:
                if degree(su) + degree(sv) + degree(sw) > triple_degree:
                    continue
                for p in triple_indices:
                    for q in triple_indices:
                        for t in triple_indices:
                            r = check_borcherds_sample(voa, vecs[su], vecs[sv], vecs[sw], p, q, t)
                            res["borcherds"] = _accumulate(res["borcherds"], r)
    return AxiomSuiteReport(res)


__all__ = [
    "AxiomResult", "HeisenbergVOA", "check_vacuum", "check_translation",
    "check_skew_symmetry", "check_borcherds_sample", "translation_by_derivation",
    "run_axiom_suite", "AxiomSuiteReport",
    "colored_partitions",
]
