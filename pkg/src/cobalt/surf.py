"""Decorated surfaces: genus-labelled set partitions of boundary circles.

A viewable surface with ``n`` boundary circles is determined up to
diffeomorphism by which circles share a component and by the genus of each
component. Circles are numbered ``1..n``; blocks are stored sorted by their
least element.

Enumeration order is fixed so that matrix rows are reproducible: partitions in
descending restricted-growth-string order (the all-singletons partition first,
the single block last), then genus vectors in ascending lexicographic order.
"""

from __future__ import annotations

import itertools
import re
from collections import Counter
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterable, Sequence


@dataclass(frozen=True)
class DecoratedSurface:
    n: int
    blocks: tuple[tuple[int, ...], ...]
    genus: tuple[int, ...]
    # circle i (1-based) lies in block labels[i - 1]
    labels: tuple[int, ...] = field(compare=False, repr=False, default=())

    def __post_init__(self) -> None:
        blocks = tuple(tuple(sorted(b)) for b in self.blocks)
        if len(blocks) != len(self.genus):
            raise ValueError("one genus label per block is required")
        order = sorted(range(len(blocks)), key=lambda i: blocks[i][0] if blocks[i] else 0)
        blocks = tuple(blocks[i] for i in order)
        genus = tuple(int(self.genus[i]) for i in order)
        seen = [b for blk in blocks for b in blk]
        if any(not blk for blk in blocks):
            raise ValueError("blocks must be nonempty")
        if sorted(seen) != list(range(1, self.n + 1)):
            raise ValueError(f"blocks {blocks} do not partition 1..{self.n}")
        if any(g < 0 for g in genus):
            raise ValueError("genus labels must be non-negative")
        labels = [0] * self.n
        for j, blk in enumerate(blocks):
            for c in blk:
                labels[c - 1] = j
        object.__setattr__(self, "blocks", blocks)
        object.__setattr__(self, "genus", genus)
        object.__setattr__(self, "labels", tuple(labels))

    @classmethod
    def from_rgs(cls, rgs: Sequence[int], genus: Sequence[int]) -> DecoratedSurface:
        k = max(rgs) + 1 if rgs else 0
        blocks: list[list[int]] = [[] for _ in range(k)]
        for i, r in enumerate(rgs):
            blocks[r].append(i + 1)
        return cls(len(rgs), tuple(tuple(b) for b in blocks), tuple(genus))

    @classmethod
    def parse(cls, text: str) -> DecoratedSurface:
        """Parse ``{1,4,6:g2}{2,3:g0}{5:g1}``; a missing ``:gK`` means genus 0; ``{}`` is empty."""
        text = text.strip()
        if text in ("", "{}"):
            return cls(0, (), ())
        blocks, genus = [], []
        pos = 0
        pattern = re.compile(r"\{\s*([0-9\s,]+?)\s*(?::\s*g\s*([0-9]+))?\s*\}")
        while pos < len(text):
            if text[pos].isspace():
                pos += 1
                continue
            m = pattern.match(text, pos)
            if not m:
                raise ValueError(f"cannot parse surface literal at position {pos}: {text!r}")
            blocks.append(tuple(int(x) for x in m.group(1).replace(" ", "").split(",") if x))
            genus.append(int(m.group(2) or 0))
            pos = m.end()
        n = sum(len(b) for b in blocks)
        return cls(n, tuple(blocks), tuple(genus))

    def __str__(self) -> str:
        if not self.blocks:
            return "{}"
        return "".join("{" + ",".join(map(str, b)) + f":g{g}" + "}" for b, g in zip(self.blocks, self.genus))

    def rgs(self) -> tuple[int, ...]:
        return self.labels

    @property
    def partition(self) -> tuple[tuple[int, ...], ...]:
        return self.blocks

    def components(self) -> int:
        return len(self.blocks)

    def with_genus(self, genus: Sequence[int]) -> DecoratedSurface:
        return DecoratedSurface(self.n, self.blocks, tuple(genus))

    def permuted(self, perm: Sequence[int]) -> DecoratedSurface:
        """Relabel circle i as perm[i-1] (perm is a permutation of 1..n)."""
        return DecoratedSurface(self.n, tuple(tuple(perm[c - 1] for c in b) for b in self.blocks), self.genus)


@dataclass(frozen=True)
class ClosedSurfaceClass:
    component_genera: tuple[int, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "component_genera", tuple(sorted(self.component_genera)))

    def components(self) -> int:
        return len(self.component_genera)

    def multiset(self) -> Counter:
        return Counter(self.component_genera)


@dataclass(frozen=True)
class CrossinglessMatching:
    n: int
    arcs: tuple[tuple[int, int], ...]

    def __post_init__(self) -> None:
        arcs = tuple(sorted(tuple(sorted(a)) for a in self.arcs))
        pts = sorted(p for a in arcs for p in a)
        if pts != list(range(1, 2 * self.n + 1)):
            raise ValueError("arcs must form a perfect matching of 1..2n")
        for (i, k), (j, l) in itertools.combinations(arcs, 2):
            if i < j < k < l or j < i < l < k:
                raise ValueError(f"arcs {(i, k)} and {(j, l)} cross")
        object.__setattr__(self, "arcs", arcs)

    def partner(self) -> dict[int, int]:
        out = {}
        for i, j in self.arcs:
            out[i] = j
            out[j] = i
        return out


# ------------------------------------------------------------------ enumeration


@lru_cache(maxsize=None)
def _rgs_list(n: int) -> tuple[tuple[int, ...], ...]:
    out: list[tuple[int, ...]] = []

    def rec(prefix: list[int], top: int) -> None:
        if len(prefix) == n:
            out.append(tuple(prefix))
            return
        for v in range(top + 1, -1, -1):
            prefix.append(v)
            rec(prefix, max(top, v))
            prefix.pop()

    if n == 0:
        return ((),)
    rec([0], 0)
    return tuple(out)


def set_partitions(n: int) -> list[tuple[tuple[int, ...], ...]]:
    """All set partitions of 1..n in canonical (descending RGS) order."""
    return [DecoratedSurface.from_rgs(r, [0] * (max(r) + 1 if r else 0)).blocks for r in _rgs_list(n)]


def enumerate_spanning(n: int, K: int) -> list[DecoratedSurface]:
    """Every partition of 1..n with a genus in [0, K) on each block."""
    if n < 0 or K < 1:
        raise ValueError("enumerate_spanning needs n >= 0 and K >= 1")
    out = []
    for r in _rgs_list(n):
        k = max(r) + 1 if r else 0
        for g in itertools.product(range(K), repeat=k):
            out.append(DecoratedSurface.from_rgs(r, g))
    return out


def enumerate_Am(n: int, m: int) -> list[DecoratedSurface]:
    """Surfaces whose every component has genus + (number of circles) <= m + 1."""
    if m < 1:
        raise ValueError("enumerate_Am needs m >= 1")
    out = []
    for r in _rgs_list(n):
        k = max(r) + 1 if r else 0
        sizes = Counter(r)
        if any(sizes[j] > m + 1 for j in range(k)):
            continue
        ranges = [range(m + 2 - sizes[j]) for j in range(k)]
        for g in itertools.product(*ranges):
            out.append(DecoratedSurface.from_rgs(r, g))
    return out


def is_noncrossing(blocks: Iterable[Sequence[int]]) -> bool:
    """No i1<i2<i3<i4 with i1,i3 in one block and i2,i4 in another."""
    label = {}
    for j, b in enumerate(blocks):
        for c in b:
            label[c] = j
    pts = sorted(label)
    for i1, i2, i3, i4 in itertools.combinations(pts, 4):
        if label[i1] == label[i3] and label[i2] == label[i4] and label[i1] != label[i2]:
            return False
    return True


@lru_cache(maxsize=None)
def _noncrossing_matchings(points: tuple[int, ...]) -> tuple[tuple[tuple[int, int], ...], ...]:
    if not points:
        return ((),)
    first = points[0]
    out = []
    for idx in range(1, len(points), 2):
        inner = points[1:idx]
        outer = points[idx + 1 :]
        for a in _noncrossing_matchings(inner):
            for b in _noncrossing_matchings(outer):
                out.append(((first, points[idx]),) + a + b)
    return tuple(out)


def enumerate_matchings(n: int) -> list[CrossinglessMatching]:
    return [CrossinglessMatching(n, arcs) for arcs in _noncrossing_matchings(tuple(range(1, 2 * n + 1)))]


def _canonical_key(s: DecoratedSurface) -> tuple:
    # descending RGS, then ascending genus
    return (tuple(-x for x in s.labels), s.genus)


def enumerate_crossingless(n: int) -> list[DecoratedSurface]:
    """Genus-0 surfaces with a non-crossing partition, in canonical order."""
    surfaces = [partition_from_matching(m) for m in enumerate_matchings(n)]
    return sorted(surfaces, key=_canonical_key)


def sort_canonical(surfaces: Iterable[DecoratedSurface]) -> list[DecoratedSurface]:
    return sorted(surfaces, key=_canonical_key)


# ------------------------------------------------------- partitions <-> matchings


def matching_from_partition(s: DecoratedSurface | Sequence[Sequence[int]], n: int | None = None) -> CrossinglessMatching:
    """Boundary of a thickened planar partition: circle i becomes points 2i-1, 2i."""
    if isinstance(s, DecoratedSurface):
        blocks, n = s.blocks, s.n
    else:
        blocks = tuple(tuple(sorted(b)) for b in s)
        n = n if n is not None else sum(len(b) for b in blocks)
    arcs = []
    for b in blocks:
        for j in range(len(b) - 1):
            arcs.append((2 * b[j], 2 * b[j + 1] - 1))
        arcs.append((2 * b[0] - 1, 2 * b[-1]))
    return CrossinglessMatching(n, tuple(arcs))


def partition_from_matching(m: CrossinglessMatching) -> DecoratedSurface:
    """Inverse of matching_from_partition: circles joined by arcs share a block."""
    n = m.n
    parent = list(range(n + 1))

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for i, j in m.arcs:
        a, b = (i + 1) // 2, (j + 1) // 2
        ra, rb = find(a), find(b)
        if ra != rb:
            parent[ra] = rb
    groups: dict[int, list[int]] = {}
    for c in range(1, n + 1):
        groups.setdefault(find(c), []).append(c)
    blocks = tuple(tuple(g) for g in groups.values())
    return DecoratedSurface(n, blocks, (0,) * len(blocks))


# --------------------------------------------------------------------- gluing


def glue_components(la: Sequence[int], ka: int, lb: Sequence[int], kb: int) -> list[tuple[list[int], list[int], int]]:
    """Connected components of the gluing graph from block-label arrays.

    Returns (blocks of a, blocks of b, E - V + 1) per component.
    """
    parent = list(range(ka + kb))

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    edges = [0] * (ka + kb)
    for i in range(len(la)):
        ra, rb = find(la[i]), find(ka + lb[i])
        if ra != rb:
            parent[ra] = rb
    comps: dict[int, tuple[list[int], list[int]]] = {}
    for v in range(ka + kb):
        r = find(v)
        entry = comps.setdefault(r, ([], []))
        if v < ka:
            entry[0].append(v)
        else:
            entry[1].append(v - ka)
    for i in range(len(la)):
        edges[find(la[i])] += 1
    out = []
    for r, (ba, bb) in comps.items():
        out.append((ba, bb, edges[r] - len(ba) - len(bb) + 1))
    return out


def glue(a: DecoratedSurface, b: DecoratedSurface) -> ClosedSurfaceClass:
    """Closed surface (-a) glued to b along the n circles."""
    if a.n != b.n:
        raise ValueError(f"cannot glue surfaces with {a.n} and {b.n} boundary circles")
    genera = []
    for ba, bb, base in glue_components(a.labels, len(a.blocks), b.labels, len(b.blocks)):
        genera.append(base + sum(a.genus[i] for i in ba) + sum(b.genus[j] for j in bb))
    return ClosedSurfaceClass(tuple(genera))


def euler_characteristic(s: DecoratedSurface) -> int:
    return sum(2 - 2 * g - len(b) for b, g in zip(s.blocks, s.genus))


def euler_characteristic_graph(s: DecoratedSurface) -> int:
    """Same quantity from the block/circle incidence graph: 2V - 2(sum g) - E."""
    return 2 * len(s.blocks) - 2 * sum(s.genus) - len(s.labels)


def degree(s: DecoratedSurface) -> int:
    return s.n - euler_characteristic(s)


def closed_euler_characteristic(c: ClosedSurfaceClass) -> int:
    return sum(2 - 2 * g for g in c.component_genera)


# -------------------------------------------------------------------- meanders


def meander_circles(a: CrossinglessMatching, b: CrossinglessMatching) -> list[list[int]]:
    """Circles formed by drawing a above the line and b below it."""
    if a.n != b.n:
        raise ValueError("matchings must have the same size")
    pa, pb = a.partner(), b.partner()
    seen: set[int] = set()
    circles = []
    for start in range(1, 2 * a.n + 1):
        if start in seen:
            continue
        cyc = []
        x = start
        while True:
            y = pa[x]
            cyc += [x, y]
            x = pb[y]
            if x == start:
                break
        seen.update(cyc)
        circles.append(sorted(set(cyc)))
    return circles


def meander_h1h2(a: CrossinglessMatching, b: CrossinglessMatching) -> tuple[int, int]:
    """Region counts of the checkerboard colouring with the outer region coloured 1."""
    circles = meander_circles(a, b)
    h1, h2 = 1, 0
    for c in circles:
        x = c[0]
        depth = 0
        for d in circles:
            if d is c:
                continue
            if sum(1 for p in d if p < x) % 2 == 1:
                depth += 1
        if depth % 2 == 0:
            h2 += 1
        else:
            h1 += 1
    return h1, h2
