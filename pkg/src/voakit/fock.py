"""Colored-partition Fock basis and exact graded vectors.

A basis state is a tuple of ``(color, mode)`` pairs, each standing for a
creation operator h_color(-mode), sorted by color ascending and then mode
descending.  The empty tuple is the vacuum.  Coefficients are
:class:`fractions.Fraction` throughout.
"""

from __future__ import annotations

import json
import random
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Dict, Iterable, Iterator, List, Mapping, Tuple

from .errors import ConfigError, TruncationExceeded

State = Tuple[Tuple[int, int], ...]

VACUUM: State = ()


def canonical(parts: Iterable[Tuple[int, int]]) -> State:
    return tuple(sorted(parts, key=lambda p: (p[0], -p[1])))


def state_key(state: State):
    """Sort key for the canonical basis order inside one degree."""
    return tuple((c, -m) for c, m in state)


def degree(state: State) -> int:
    return sum(m for _, m in state)


def as_scalar(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, str):
        return Fraction(x.strip())
    return Fraction(x)


def format_scalar(x: Fraction) -> str:
    x = Fraction(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


@dataclass(frozen=True)
class AlgebraConfig:
    """Rank, level and truncation degree of a Heisenberg VOA instance."""

    rank: int = 1
    level: Fraction = Fraction(1)
    max_degree: int = 6

    def __post_init__(self):
        object.__setattr__(self, "level", as_scalar(self.level))
        if not isinstance(self.rank, int) or self.rank < 1:
            raise ConfigError(f"rank must be an integer >= 1, got {self.rank!r}")
        if self.level == 0:
            raise ConfigError("level must be nonzero")
        if not isinstance(self.max_degree, int) or self.max_degree < 4:
            raise ConfigError(f"max_degree must be an integer >= 4, got {self.max_degree!r}")

    def to_json(self):
        return {"rank": self.rank, "level": format_scalar(self.level),
                "max_degree": self.max_degree}


def _partitions(n: int, largest: int) -> Iterator[Tuple[int, ...]]:
    if n == 0:
        yield ()
        return
    for first in range(min(n, largest), 0, -1):
        for rest in _partitions(n - first, first):
            yield (first,) + rest


@lru_cache(maxsize=None)
def colored_partitions(n: int, rank: int) -> Tuple[State, ...]:
    """All colored partitions of ``n`` with ``rank`` colors, canonical order."""
    if n < 0:
        return ()

    def build(color: int, remaining: int) -> Iterator[State]:
        if color == rank:
            for p in _partitions(remaining, remaining):
                yield tuple((color, m) for m in p)
            return
        for k in range(remaining + 1):
            for p in _partitions(k, k):
                head = tuple((color, m) for m in p)
                for tail in build(color + 1, remaining - k):
                    yield head + tail

    return tuple(sorted(build(1, n), key=state_key))


def enumerate_basis(config: AlgebraConfig, n: int) -> List[State]:
    if n < 0:
        return []
    if n > config.max_degree:
        raise TruncationExceeded(f"degree {n} exceeds max_degree {config.max_degree}")
    return list(colored_partitions(n, config.rank))


def dim(config: AlgebraConfig, n: int) -> int:
    return len(enumerate_basis(config, n))


class GradedVector:
    """An immutable finite linear combination of basis states."""

    __slots__ = ("_terms", "_hash")

    def __init__(self, terms: Mapping[State, object] | None = None):
        clean: Dict[State, Fraction] = {}
        if terms:
            for s, c in terms.items():
                c = as_scalar(c)
                if c:
                    clean[s] = c
        self._terms = clean
        self._hash = None

    @classmethod
    def _raw(cls, terms: Dict[State, Fraction]) -> "GradedVector":
        # trusted constructor: terms already nonzero Fractions
        v = cls.__new__(cls)
        v._terms = terms
        v._hash = None
        return v

    @classmethod
    def from_state(cls, state: State, coeff=1) -> "GradedVector":
        return cls({canonical(state): coeff})

    @classmethod
    def vacuum(cls) -> "GradedVector":
        return cls({VACUUM: 1})

    @classmethod
    def zero(cls) -> "GradedVector":
        return cls._raw({})

    @property
    def terms(self) -> Mapping[State, Fraction]:
        return dict(self._terms)

    def items(self):
        return self._terms.items()

    def coefficient(self, state: State) -> Fraction:
        return self._terms.get(state, Fraction(0))

    def __len__(self):
        return len(self._terms)

    def __bool__(self):
        return bool(self._terms)

    def __iter__(self):
        return iter(self._terms)

    def __eq__(self, other):
        if isinstance(other, GradedVector):
            return self._terms == other._terms
        if other == 0:
            return not self._terms
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(frozenset(self._terms.items()))
        return self._hash

    def __add__(self, other: "GradedVector") -> "GradedVector":
        if not isinstance(other, GradedVector):
            return NotImplemented
        out = dict(self._terms)
        for s, c in other._terms.items():
            v = out.get(s, 0) + c
            if v:
                out[s] = v
            else:
                out.pop(s, None)
        return GradedVector._raw(out)

    def __neg__(self):
        return GradedVector._raw({s: -c for s, c in self._terms.items()})

    def __sub__(self, other):
        if not isinstance(other, GradedVector):
            return NotImplemented
        return self + (-other)

    def __mul__(self, scalar):
        scalar = as_scalar(scalar)
        if not scalar:
            return GradedVector.zero()
        return GradedVector._raw({s: c * scalar for s, c in self._terms.items()})

    __rmul__ = __mul__

    def __truediv__(self, scalar):
        return self * (1 / as_scalar(scalar))

    def degrees(self) -> List[int]:
        return sorted({degree(s) for s in self._terms})

    def max_degree(self) -> int:
        """Top degree present; -1 for the zero vector."""
        return max((degree(s) for s in self._terms), default=-1)

    def min_degree(self) -> int:
        return min((degree(s) for s in self._terms), default=-1)

    def is_homogeneous(self) -> bool:
        return len(self.degrees()) <= 1

    def project(self, n: int) -> "GradedVector":
        return GradedVector._raw({s: c for s, c in self._terms.items() if degree(s) == n})

    def truncate(self, top: int) -> "GradedVector":
        """Drop every component of degree above ``top``."""
        return GradedVector._raw({s: c for s, c in self._terms.items() if degree(s) <= top})

    def components(self) -> Dict[int, "GradedVector"]:
        return {n: self.project(n) for n in self.degrees()}

    def sorted_items(self):
        return sorted(self._terms.items(), key=lambda kv: (degree(kv[0]), state_key(kv[0])))

    def to_text(self) -> str:
        from .syntax import format_vector
        return format_vector(self)

    def to_json(self):
        return {"terms": [{"state": [list(p) for p in s], "coeff": format_scalar(c)}
                          for s, c in self.sorted_items()]}

    @classmethod
    def from_json(cls, data) -> "GradedVector":
        if isinstance(data, str):
            data = json.loads(data)
        terms: Dict[State, Fraction] = {}
        for t in data["terms"]:
            s = canonical(tuple((int(c), int(m)) for c, m in t["state"]))
            terms[s] = terms.get(s, Fraction(0)) + as_scalar(t["coeff"])
        return cls(terms)

    def __repr__(self):
        return f"GradedVector({self.to_text()!r})"


def project(v: GradedVector, n: int) -> GradedVector:
    return v.project(n)


def basis_vector(state: State) -> GradedVector:
    return GradedVector.from_state(state)


def random_scalar(rng: random.Random, size: int = 5) -> Fraction:
    return Fraction(rng.randint(-size, size), rng.randint(1, size))


def random_vector(config: AlgebraConfig, degrees, rng: random.Random,
                  density: float = 1.0, size: int = 5) -> GradedVector:
    """Random rational combination of basis states in the given degrees."""
    if isinstance(degrees, int):
        degrees = [degrees]
    terms = {}
    for n in degrees:
        for s in enumerate_basis(config, n):
            if rng.random() <= density:
                terms[s] = random_scalar(rng, size)
    return GradedVector(terms)
