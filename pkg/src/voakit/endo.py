"""Linear endomorphisms of the truncated Fock space V_{<=N}."""

from __future__ import annotations

import json
from fractions import Fraction
from typing import Dict, Mapping, Tuple

from . import linalg
from .fock import GradedVector, State, as_scalar, degree, format_scalar


class Endo:
    """A linear map on V_{<=N}, stored as the images of the basis states.

    Images are truncated to degree <= N.  ``trust_degree`` records how far
    the stored images are certified to agree with the untruncated map.
    """

    def __init__(self, voa, images: Mapping[State, GradedVector], trust_degree: int | None = None):
        self.voa = voa
        top = voa.max_degree
        imgs: Dict[State, GradedVector] = {}
        for s in voa.all_states():
            v = images.get(s)
            imgs[s] = GradedVector.zero() if v is None else v.truncate(top)
        extra = set(images) - set(imgs)
        if extra:
            raise ValueError(f"images given for states outside V_<=N: {sorted(extra)[:3]}")
        self._images = imgs
        self.trust_degree = top if trust_degree is None else trust_degree
        self._shift = None
        self._diag_inv: Dict[int, list] = {}

    # -- construction -------------------------------------------------------

    @classmethod
    def identity(cls, voa) -> "Endo":
        return cls(voa, {s: GradedVector.from_state(s) for s in voa.all_states()})

    @classmethod
    def from_function(cls, voa, fn, trust_degree=None) -> "Endo":
        return cls(voa, {s: fn(s) for s in voa.all_states()}, trust_degree)

    @classmethod
    def from_blocks(cls, voa, blocks: Mapping[Tuple[int, int], list], trust_degree=None) -> "Endo":
        images: Dict[State, Dict[State, Fraction]] = {s: {} for s in voa.all_states()}
        for (n, m), mat in blocks.items():
            src, dst = voa.basis(n), voa.basis(m)
            if len(mat) != len(dst) or any(len(row) != len(src) for row in mat):
                raise ValueError(f"block ({n},{m}) has wrong shape")
            for i, t in enumerate(dst):
                for j, s in enumerate(src):
                    c = as_scalar(mat[i][j])
                    if c:
                        images[s][t] = images[s].get(t, 0) + c
        return cls(voa, {s: GradedVector(d) for s, d in images.items()}, trust_degree)

    # -- access ---------------------------------------------------------------

    def image(self, state: State) -> GradedVector:
        return self._images[state]

    @property
    def images(self) -> Mapping[State, GradedVector]:
        return dict(self._images)

    def __call__(self, v: GradedVector) -> GradedVector:
        return self.apply(v)

    def apply(self, v: GradedVector) -> GradedVector:
        acc: Dict[State, Fraction] = {}
        for s, c in v.items():
            img = self._images.get(s)
            if img is None:
                raise ValueError(f"state {s} lies outside V_<=N")
            for t, d in img.items():
                acc[t] = acc.get(t, 0) + c * d
        return GradedVector(acc)

    def block(self, n: int, m: int) -> list:
        """Matrix of pr_m o f restricted to V_n, shape dim(m) x dim(n)."""
        src, dst = self.voa.basis(n), self.voa.basis(m)
        return [[self._images[s].coefficient(t) for s in src] for t in dst]

    def blocks(self) -> Dict[Tuple[int, int], list]:
        out = {}
        for n in range(self.voa.max_degree + 1):
            targets = sorted({degree(t) for s in self.voa.basis(n) for t in self._images[s]})
            for m in targets:
                out[(n, m)] = self.block(n, m)
        return out

    @property
    def shift_profile(self) -> Tuple[int, int]:
        """(min, max) of target minus source degree over nonzero entries."""
        if self._shift is None:
            shifts = [degree(t) - degree(s) for s, img in self._images.items() for t in img]
            self._shift = (min(shifts), max(shifts)) if shifts else (0, 0)
        return self._shift

    def __eq__(self, other):
        if not isinstance(other, Endo):
            return NotImplemented
        return self._images == other._images

    def __hash__(self):
        return hash(tuple(sorted(self._images.items(), key=lambda kv: kv[0])))

    def agrees_with(self, other: "Endo", top: int | None = None) -> bool:
        """Equality of images after truncating both to degree ``top``."""
        top = min(self.trust_degree, other.trust_degree) if top is None else top
        return all(self._images[s].truncate(top) == other._images[s].truncate(top)
                   for s in self.voa.all_states(min(top, self.voa.max_degree)))

    def is_identity(self) -> bool:
        return all(img == GradedVector.from_state(s) for s, img in self._images.items())

    # -- algebra ----------------------------------------------------------------

    def compose(self, other: "Endo") -> "Endo":
        """self o other."""
        trust = min(self.trust_degree, other.trust_degree)
        lo = self.shift_profile[0]
        if other.shift_profile[1] > 0 and lo < 0:
            # other's images lost components above N; self can pull them down
            trust = min(trust, self.voa.max_degree + lo)
        return Endo(self.voa, {s: self.apply(img) for s, img in other._images.items()}, trust)

    __matmul__ = compose

    def _diag_block_inverse(self, n: int):
        if n not in self._diag_inv:
            b = self.block(n, n)
            self._diag_inv[n] = None if linalg.is_identity(b) else linalg.inverse(b)
        return self._diag_inv[n]

    def solve(self, y: GradedVector) -> GradedVector:
        """The x with f(x) = y, for a block-triangular f."""
        lo, hi = self.shift_profile
        if lo < 0 < hi:
            return self.inverse().apply(y)
        top = self.voa.max_degree
        order = range(top + 1) if lo >= 0 else range(top, -1, -1)
        x = GradedVector.zero()
        residual = y
        for n in order:
            r_n = residual.project(n)
            if not r_n:
                continue
            inv = self._diag_block_inverse(n)
            if inv is None:
                x_n = r_n
            else:
                basis = self.voa.basis(n)
                coords = [r_n.coefficient(s) for s in basis]
                sol = linalg.matvec(inv, coords)
                x_n = GradedVector({s: c for s, c in zip(basis, sol)})
            x = x + x_n
            residual = residual - self.apply(x_n)
        if residual:
            raise ZeroDivisionError("map is not invertible on V_<=N")
        return x

    def inverse(self) -> "Endo":
        lo, hi = self.shift_profile
        if not (lo < 0 < hi):
            return Endo(self.voa, {s: self.solve(GradedVector.from_state(s))
                                   for s in self.voa.all_states()}, self.trust_degree)
        states = self.voa.all_states()
        pos = {s: i for i, s in enumerate(states)}
        mat = [[Fraction(0)] * len(states) for _ in states]
        for j, s in enumerate(states):
            for t, c in self._images[s].items():
                mat[pos[t]][j] = c
        inv = linalg.inverse(mat)
        images = {s: GradedVector({t: inv[pos[t]][j] for t in states})
                  for j, s in enumerate(states)}
        return Endo(self.voa, images, self.trust_degree)

    # -- persistence ------------------------------------------------------------

    def to_json(self):
        blocks = []
        for (n, m), mat in sorted(self.blocks().items()):
            blocks.append({"from": n, "to": m,
                           "matrix": [[format_scalar(x) for x in row] for row in mat]})
        return {"blocks": blocks, "trust_degree": self.trust_degree}

    def dumps(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True)

    @classmethod
    def from_json(cls, voa, data) -> "Endo":
        if isinstance(data, str):
            data = json.loads(data)
        blocks = {(int(b["from"]), int(b["to"])): b["matrix"] for b in data["blocks"]}
        return cls.from_blocks(voa, blocks, data.get("trust_degree"))

    def __repr__(self):
        lo, hi = self.shift_profile
        return f"<Endo on V_<={self.voa.max_degree} shifts [{lo},{hi}] trust {self.trust_degree}>"
