"""Brute-force mode products for the free boson, independent of voakit.modes.

The vertex operator of h_{i1}(-m1)...h_{ik}(-mk)|0> is the normal-ordered
product of the derivative fields d^(m-1) h_i(z) / (m-1)!.  Its n-th mode is
expanded by enumerating every assignment of current modes to the factors,
normal ordering each monomial (annihilators act first) and applying it to
the target state.  Nothing here calls into the package.
"""

from collections import defaultdict
from fractions import Fraction
from itertools import product


def _key(parts):
    return tuple(sorted(parts, key=lambda p: (p[0], -p[1])))


def _gen_binom(x, r):
    # x(x-1)...(x-r+1)/r! for any integer x
    num = 1
    den = 1
    for t in range(r):
        num *= x - t
        den *= t + 1
    return Fraction(num, den)


def _apply_current(kappa, color, p, state_terms):
    out = defaultdict(Fraction)
    for parts, c in state_terms.items():
        if p < 0:
            out[_key(parts + ((color, -p),))] += c
        elif p > 0:
            mult = sum(1 for q in parts if q == (color, p))
            if mult:
                lst = list(parts)
                lst.remove((color, p))
                out[_key(tuple(lst))] += c * kappa * p * mult
    return {s: c for s, c in out.items() if c}


def oracle_mode(kappa, a_parts, n, b_parts):
    """Return {state: coeff} for (a)(n)(b) with a, b basis monomials."""
    kappa = Fraction(kappa)
    a_parts = tuple(a_parts)
    b_parts = tuple(b_parts)
    deg_a = sum(m for _, m in a_parts)
    deg_b = sum(m for _, m in b_parts)
    out_deg = deg_a + deg_b - n - 1
    if out_deg < 0:
        return {}
    if not a_parts:
        return {_key(b_parts): Fraction(1)} if n == -1 else {}
    k = len(a_parts)
    target = n + 1 - deg_a  # sum of the chosen current-mode indices
    lo, hi = -out_deg, deg_b
    result = defaultdict(Fraction)
    for ps in product(range(lo, hi + 1), repeat=k):
        if sum(ps) != target:
            continue
        coeff = Fraction(1)
        for (_, m), p in zip(a_parts, ps):
            coeff *= _gen_binom(-p - 1, m - 1)
        if not coeff:
            continue
        terms = {_key(b_parts): coeff}
        ordered = sorted(zip(a_parts, ps), key=lambda t: t[1] < 0)
        # annihilators (p >= 0) first, then creators
        for (color, _), p in ordered:
            if p == 0:
                terms = {}
            terms = _apply_current(kappa, color, p, terms)
            if not terms:
                break
        for s, c in terms.items():
            result[s] += c
    return {s: c for s, c in result.items() if c}


def oracle_mode_vec(kappa, a, n, b):
    """Bilinear extension over dicts {parts: coeff}."""
    out = defaultdict(Fraction)
    for sa, ca in a.items():
        for sb, cb in b.items():
            for s, c in oracle_mode(kappa, sa, n, sb).items():
                out[s] += ca * cb * c
    return {s: c for s, c in out.items() if c}


def partition_count(n):
    """p(n) by the pentagonal-free recursion over largest part."""
    table = [[0] * (n + 1) for _ in range(n + 1)]
    for m in range(n + 1):
        table[0][m] = 1
    for k in range(1, n + 1):
        for m in range(1, n + 1):
            table[k][m] = table[k][m - 1] + (table[k - m][m] if m <= k else 0)
    return table[n][n]


def colored_partition_count(n, rank):
    if rank == 1:
        return partition_count(n)
    return sum(partition_count(k) * colored_partition_count(n - k, rank - 1)
               for k in range(n + 1))
