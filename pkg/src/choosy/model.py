"""Domain types for complete multipartite graphs with list assignments.

Vertices are integers ``0..n-1`` laid out part-major: part 0 holds the first
``sizes[0]`` vertices, part 1 the next ``sizes[1]``, and so on.  Two vertices
are adjacent exactly when they lie in different parts.
"""

from __future__ import annotations

import enum
import itertools
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Mapping, Sequence


class MalformedInput(ValueError):
    """Raised for structurally invalid instances, colourings or classifications."""


@dataclass(frozen=True)
class PartStructure:
    """Shape of a complete multipartite graph: a non-increasing tuple of part sizes."""

    sizes: tuple[int, ...]

    def __post_init__(self):
        sizes = tuple(int(s) for s in self.sizes)
        if any(s < 1 for s in sizes):
            raise MalformedInput(f"part sizes must be positive: {sizes}")
        if list(sizes) != sorted(sizes, reverse=True):
            raise MalformedInput(f"part sizes must be non-increasing: {sizes}")
        object.__setattr__(self, "sizes", sizes)

    @classmethod
    def of(cls, sizes: Iterable[int]) -> "PartStructure":
        """Build a shape from sizes in any order."""
        return cls(tuple(sorted((int(s) for s in sizes), reverse=True)))

    @property
    def k(self) -> int:
        return len(self.sizes)

    @property
    def n(self) -> int:
        return sum(self.sizes)

    @cached_property
    def parts(self) -> tuple[tuple[int, ...], ...]:
        out, start = [], 0
        for s in self.sizes:
            out.append(tuple(range(start, start + s)))
            start += s
        return tuple(out)

    @cached_property
    def part_of(self) -> tuple[int, ...]:
        return tuple(i for i, s in enumerate(self.sizes) for _ in range(s))

    def count_parts(self, size: int) -> int:
        return sum(1 for s in self.sizes if s == size)

    @property
    def p1(self) -> int:
        return self.count_parts(1)

    @property
    def p2(self) -> int:
        return self.count_parts(2)

    @property
    def p3plus(self) -> int:
        return sum(1 for s in self.sizes if s >= 3)

    @property
    def singletons(self) -> frozenset[int]:
        """The vertex set T of size-1 parts."""
        return frozenset(p[0] for p in self.parts if len(p) == 1)

    def adjacent(self, u: int, v: int) -> bool:
        return self.part_of[u] != self.part_of[v]

    def remove_vertex_from_part(self, part: int) -> "PartStructure":
        sizes = list(self.sizes)
        sizes[part] -= 1
        return PartStructure.of(s for s in sizes if s > 0)

    def without_part(self, part: int) -> "PartStructure":
        return PartStructure(tuple(s for i, s in enumerate(self.sizes) if i != part))

    def __str__(self) -> str:
        return "K_{" + ",".join(map(str, self.sizes)) + "}"


@dataclass(frozen=True)
class ListAssignment:
    """Per-vertex colour lists.  Colours are non-negative integers."""

    lists: tuple[frozenset[int], ...]

    def __post_init__(self):
        lists = tuple(frozenset(int(c) for c in lst) for lst in self.lists)
        if any(c < 0 for lst in lists for c in lst):
            raise MalformedInput("colours must be non-negative integers")
        object.__setattr__(self, "lists", lists)

    @classmethod
    def of(cls, lists: Iterable[Iterable[int]]) -> "ListAssignment":
        return cls(tuple(frozenset(lst) for lst in lists))

    def __len__(self) -> int:
        return len(self.lists)

    def __getitem__(self, v: int) -> frozenset[int]:
        return self.lists[v]

    @cached_property
    def universe(self) -> frozenset[int]:
        return frozenset().union(*self.lists) if self.lists else frozenset()

    @cached_property
    def inverse(self) -> dict[int, frozenset[int]]:
        """Map colour ``c`` to ``{v : c in L(v)}``."""
        inv: dict[int, set[int]] = {}
        for v, lst in enumerate(self.lists):
            for c in lst:
                inv.setdefault(c, set()).add(v)
        return {c: frozenset(vs) for c, vs in sorted(inv.items())}

    def union_of(self, vertices: Iterable[int]) -> frozenset[int]:
        return frozenset().union(*(self.lists[v] for v in vertices))

    def compact(self) -> "ListAssignment":
        """Relabel colours to ``0..|C|-1`` preserving their order."""
        relabel = {c: i for i, c in enumerate(sorted(self.universe))}
        return ListAssignment(tuple(frozenset(relabel[c] for c in lst) for lst in self.lists))

    def relabel(self, mapping: Mapping[int, int]) -> "ListAssignment":
        return ListAssignment(tuple(frozenset(mapping[c] for c in lst) for lst in self.lists))

    def permute_vertices(self, order: Sequence[int]) -> "ListAssignment":
        """New assignment whose vertex ``i`` carries the list of old vertex ``order[i]``."""
        return ListAssignment(tuple(self.lists[v] for v in order))

    def check_against(self, g: PartStructure) -> None:
        if len(self.lists) != g.n:
            raise MalformedInput(f"{len(self.lists)} lists for {g.n} vertices")


class ColouringKind(enum.IntEnum):
    """Ordered from strongest to weakest."""

    PROPER = 0
    PSEUDO = 1
    PARTIAL = 2
    INVALID = 3


@dataclass(frozen=True)
class ColouringCheck:
    kind: ColouringKind
    badly_coloured: frozenset[int] = frozenset()


def colour_classes(colouring: Mapping[int, int]) -> dict[int, frozenset[int]]:
    classes: dict[int, set[int]] = {}
    for v, c in colouring.items():
        classes.setdefault(c, set()).add(v)
    return {c: frozenset(vs) for c, vs in sorted(classes.items())}


def validate_colouring(g: PartStructure, L: ListAssignment, colouring: Mapping[int, int]) -> ColouringCheck:
    """Classify a (partial) map vertex -> colour.

    Proper here means no colour is shared across parts.  A total proper map whose
    classes of size >= 2 all use a colour common to their members' lists is a
    pseudo colouring; its off-list singleton vertices are the badly coloured ones.
    """
    L.check_against(g)
    for v in colouring:
        if not 0 <= v < g.n:
            raise MalformedInput(f"vertex {v} out of range for {g}")
    classes = colour_classes(colouring)
    proper = all(len({g.part_of[v] for v in members}) == 1 for members in classes.values())
    if not proper:
        return ColouringCheck(ColouringKind.INVALID)
    off_list = frozenset(v for v, c in colouring.items() if c not in L[v])
    total = len(colouring) == g.n
    if not off_list:
        return ColouringCheck(ColouringKind.PROPER if total else ColouringKind.PARTIAL)
    if total and all(len(classes[colouring[v]]) == 1 for v in off_list):
        return ColouringCheck(ColouringKind.PSEUDO, off_list)
    return ColouringCheck(ColouringKind.INVALID)


@dataclass(frozen=True)
class Stats:
    p1: int
    p2: int
    p3plus: int
    num_colours: int
    surplus: int  # |V| - |C|, signed
    singletons: frozenset[int]
    colour_degree: dict[int, int] = field(compare=False)


def instance_stats(g: PartStructure, L: ListAssignment) -> Stats:
    L.check_against(g)
    return Stats(
        p1=g.p1,
        p2=g.p2,
        p3plus=g.p3plus,
        num_colours=len(L.universe),
        surplus=g.n - len(L.universe),
        singletons=g.singletons,
        colour_degree={c: len(vs) for c, vs in L.inverse.items()},
    )


# --- canonical forms -------------------------------------------------------


def vertex_orders(g: PartStructure, upto: int | None = None) -> Iterable[tuple[int, ...]]:
    """Vertex orders induced by the shape's automorphisms.

    Parts of equal size may be permuted and vertices within a part may be
    permuted.  With ``upto`` set, only the first ``upto`` vertices (part-major)
    are considered: the trailing part may be partially filled and is then not
    exchangeable with the complete parts of the same size.
    """
    n = g.n if upto is None else upto
    parts = [p[: max(0, n - p[0])] if p[0] < n else () for p in g.parts]
    parts = [p for p in parts if p]
    # group by (full size, filled size) so only genuinely equivalent parts swap
    groups: list[list[tuple[int, ...]]] = []
    keyed: dict[tuple[int, int], list[tuple[int, ...]]] = {}
    for idx, p in enumerate(parts):
        key = (g.sizes[g.part_of[p[0]]], len(p))
        if key not in keyed:
            keyed[key] = []
            groups.append(keyed[key])
        keyed[key].append(p)

    def group_orders(group):
        for perm in itertools.permutations(group):
            yield from itertools.product(*(itertools.permutations(p) for p in perm))

    for combo in itertools.product(*(list(group_orders(gr)) for gr in groups)):
        yield tuple(v for block in combo for part in block for v in part)


def canonical_code(lists: Sequence[frozenset[int]]) -> tuple[tuple[int, ...], ...]:
    """Lexicographically least relabelling of a fixed vertex sequence of lists.

    Ordering colours by their incidence columns (earlier vertex = more
    significant) gives the least sequence of sorted label tuples.
    """
    n = len(lists)
    column: dict[int, int] = {}
    for pos, lst in enumerate(lists):
        bit = 1 << (n - 1 - pos)
        for c in lst:
            column[c] = column.get(c, 0) | bit
    order = sorted(column, key=column.__getitem__, reverse=True)
    label = {c: i for i, c in enumerate(order)}
    return tuple(tuple(sorted(label[c] for c in lst)) for lst in lists)


def minimal_code(
    g: PartStructure, lists: Sequence[frozenset[int]], upto: int | None = None
) -> tuple[tuple[int, ...], ...]:
    return min(canonical_code([lists[v] for v in order]) for order in vertex_orders(g, upto))


@dataclass(frozen=True)
class CanonicalAssignment:
    shape: PartStructure
    code: tuple[tuple[int, ...], ...]

    @property
    def key(self) -> bytes:
        out = bytearray([len(self.shape.sizes), *self.shape.sizes])
        for lst in self.code:
            out.append(len(lst))
            out.extend(lst)
        return bytes(out)

    @property
    def representative(self) -> ListAssignment:
        return ListAssignment.of(self.code)


def canonicalize(g: PartStructure, L: ListAssignment) -> CanonicalAssignment:
    """Orbit representative under colour relabelling and shape automorphisms."""
    L.check_against(g)
    if len(L.universe) > 255:
        raise MalformedInput("canonical keys support at most 256 colours")
    return CanonicalAssignment(g, minimal_code(g, L.lists))
