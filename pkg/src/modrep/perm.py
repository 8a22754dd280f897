"""Permutations on 0..n-1 with cycle-notation I/O (1-based in text form)."""

from __future__ import annotations

import re

import numpy as np


class Permutation:
    """An immutable permutation; composition acts on the right: x^(gh)=(x^g)^h."""

    __slots__ = ("images", "_key", "_hash")

    def __init__(self, images):
        a = np.asarray(images, dtype=np.int32)
        self.images = a
        self.images.setflags(write=False)
        self._key = a.tobytes()
        self._hash = hash(self._key)

    @staticmethod
    def identity(degree: int) -> "Permutation":
        return Permutation(np.arange(degree, dtype=np.int32))

    @property
    def degree(self) -> int:
        return len(self.images)

    @property
    def key(self) -> bytes:
        return self._key

    def __hash__(self):
        return self._hash

    def __eq__(self, other):
        return isinstance(other, Permutation) and self._key == other._key

    def __len__(self):
        return len(self.images)

    def __call__(self, point: int) -> int:
        return int(self.images[point])

    def __mul__(self, other: "Permutation") -> "Permutation":
        # self then other
        return Permutation(other.images[self.images])

    def inverse(self) -> "Permutation":
        inv = np.empty_like(self.images)
        inv[self.images] = np.arange(len(self.images), dtype=np.int32)
        return Permutation(inv)

    def __pow__(self, n: int) -> "Permutation":
        n = int(n)
        if n < 0:
            return self.inverse() ** (-n)
        result = Permutation.identity(self.degree)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def is_identity(self) -> bool:
        return bool(np.array_equal(self.images, np.arange(self.degree, dtype=np.int32)))

    def smallest_moved(self):
        moved = np.nonzero(self.images != np.arange(self.degree, dtype=np.int32))[0]
        return int(moved[0]) if moved.size else None

    def cycles(self, include_fixed: bool = False):
        seen = np.zeros(self.degree, dtype=bool)
        out = []
        for start in range(self.degree):
            if seen[start]:
                continue
            cyc = [start]
            seen[start] = True
            x = int(self.images[start])
            while x != start:
                cyc.append(x)
                seen[x] = True
                x = int(self.images[x])
            if len(cyc) > 1 or include_fixed:
                out.append(cyc)
        return out

    def order(self) -> int:
        from math import lcm

        o = 1
        for cyc in self.cycles():
            o = lcm(o, len(cyc))
        return o

    def cycle_string(self) -> str:
        """1-based disjoint-cycle notation, the CLI text format."""
        cycs = self.cycles()
        if not cycs:
            return "()"
        return "".join("(" + ",".join(str(x + 1) for x in c) + ")" for c in cycs)

    def __repr__(self):
        return f"Perm{self.cycle_string()}"


_CYCLE_RE = re.compile(r"\(\s*([0-9]+(?:\s*[, ]\s*[0-9]+)*)?\s*\)")


def parse_cycles(text: str, degree: int = 0) -> Permutation:
    """Parse 1-based disjoint-cycle notation like ``(1,2,3)(4 5)``."""
    stripped = text.strip()
    if not stripped or stripped == "()":
        return Permutation.identity(degree)
    cycles = []
    consumed = 0
    for m in _CYCLE_RE.finditer(stripped):
        if m.group(1) is None:
            consumed += len(m.group(0))
            continue
        pts = [int(t) - 1 for t in re.split(r"[, ]+", m.group(1).strip())]
        if any(p < 0 for p in pts) or len(set(pts)) != len(pts):
            raise ValueError(f"bad cycle in {text!r}")
        cycles.append(pts)
        consumed += len(m.group(0))
    leftover = _CYCLE_RE.sub("", stripped).strip()
    if leftover:
        raise ValueError(f"could not parse permutation {text!r}")
    n = max([degree] + [max(c) + 1 for c in cycles if c])
    used = set()
    for cyc in cycles:
        if used.intersection(cyc):
            raise ValueError(f"cycles are not disjoint in {text!r}")
        used.update(cyc)
    images = list(range(n))
    for cyc in cycles:
        for a, b in zip(cyc, cyc[1:] + cyc[:1]):
            images[a] = b
    return Permutation(images)
