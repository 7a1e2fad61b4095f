"""Exact L-colourability, block quotients and Hall outcomes."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

from .model import ListAssignment, MalformedInput, PartStructure


@dataclass(frozen=True)
class IncidenceGraph:
    """Bipartite graph between left items and colours."""

    adjacency: dict  # left id -> frozenset of colours

    @classmethod
    def from_lists(cls, lists: Mapping[int, Iterable[int]] | Sequence[Iterable[int]]) -> "IncidenceGraph":
        items = lists.items() if isinstance(lists, Mapping) else enumerate(lists)
        return cls({u: frozenset(cs) for u, cs in items})

    @property
    def left(self) -> tuple:
        return tuple(self.adjacency)

    @property
    def right(self) -> frozenset[int]:
        return frozenset().union(*self.adjacency.values()) if self.adjacency else frozenset()

    def neighbourhood(self, xs: Iterable) -> frozenset[int]:
        return frozenset().union(*(self.adjacency[x] for x in xs))


@dataclass(frozen=True)
class HallOutcome:
    """Either a covering matching, or a maximum-deficiency violator with its partial matching.

    In the violator case ``matching`` holds M_S: it covers every left item outside
    ``violator`` and avoids ``neighbourhood``.
    """

    matching: dict
    violator: frozenset | None = None
    neighbourhood: frozenset[int] | None = None

    @property
    def is_matching(self) -> bool:
        return self.violator is None

    @property
    def deficiency(self) -> int:
        if self.violator is None:
            return 0
        return len(self.violator) - len(self.neighbourhood)

    def format(self) -> str:
        if self.violator is None:
            return "matching " + " ".join(f"{v}:{c}" for v, c in sorted(self.matching.items()))
        xs = ",".join(map(str, sorted(self.violator)))
        ys = ",".join(map(str, sorted(self.neighbourhood)))
        return f"violator X={xs} Y={ys}"


def maximum_matching(adjacency: Mapping) -> dict:
    """Maximum bipartite matching by repeated augmenting paths (Kuhn).

    Deterministic: left items and colours are scanned in sorted order.
    """
    owner: dict[int, object] = {}
    adj = {u: sorted(cs) for u, cs in adjacency.items()}

    def augment(u, seen):
        for c in adj[u]:
            if c in seen:
                continue
            seen.add(c)
            if c not in owner or augment(owner[c], seen):
                owner[c] = u
                return True
        return False

    for u in sorted(adj, key=lambda x: (len(adj[x]), x)):
        augment(u, set())
    return {u: c for c, u in owner.items()}


def matching_or_violator(B: IncidenceGraph) -> HallOutcome:
    """Covering matching, or the alternating-reachability Hall violator.

    The left items reachable from unmatched ones by alternating paths form a
    set whose deficiency equals the number of unmatched items, which by Konig
    is the maximum deficiency over all subsets.
    """
    matching = maximum_matching(B.adjacency)
    unmatched = [u for u in B.adjacency if u not in matching]
    if not unmatched:
        return HallOutcome(matching)
    owner = {c: u for u, c in matching.items()}
    reach = set(unmatched)
    stack = list(unmatched)
    while stack:
        u = stack.pop()
        for c in B.adjacency[u]:
            w = owner.get(c)
            if w is not None and w not in reach:
                reach.add(w)
                stack.append(w)
    X = frozenset(reach)
    Y = B.neighbourhood(X)
    rest = {u: c for u, c in matching.items() if u not in X}
    return HallOutcome(rest, X, Y)


# --- quotients -------------------------------------------------------------


@dataclass(frozen=True)
class QuotientInstance:
    """G/S: each block of an independent-set partition collapsed to one vertex."""

    g: PartStructure
    blocks: tuple[frozenset[int], ...]
    lists: tuple[frozenset[int], ...]

    @property
    def quotient_parts(self) -> tuple[tuple[int, ...], ...]:
        """Block indices grouped by the original part that holds them."""
        by_part: dict[int, list[int]] = {}
        for i, block in enumerate(self.blocks):
            by_part.setdefault(self.g.part_of[min(block)], []).append(i)
        return tuple(tuple(by_part[p]) for p in sorted(by_part))

    def incidence(self) -> IncidenceGraph:
        return IncidenceGraph({i: lst for i, lst in enumerate(self.lists)})

    def lift(self, block_colours: Mapping[int, int]) -> dict[int, int]:
        """Colour every vertex of a block with the block's colour."""
        return {v: c for i, c in block_colours.items() for v in self.blocks[i]}


def build_quotient(g: PartStructure, L: ListAssignment, partition: Iterable[Iterable[int]]) -> QuotientInstance:
    L.check_against(g)
    blocks = tuple(frozenset(b) for b in partition)
    seen: set[int] = set()
    for block in blocks:
        if not block:
            raise MalformedInput("empty block in partition")
        if len({g.part_of[v] for v in block}) != 1:
            raise MalformedInput(f"block {sorted(block)} spans several parts")
        if seen & block:
            raise MalformedInput("blocks overlap")
        seen |= block
    if seen != set(range(g.n)):
        raise MalformedInput("partition does not cover every vertex")
    lists = tuple(frozenset.intersection(*(L[v] for v in block)) for block in blocks)
    return QuotientInstance(g, blocks, lists)


def singleton_quotient(g: PartStructure, L: ListAssignment) -> QuotientInstance:
    return build_quotient(g, L, ([v] for v in range(g.n)))


# --- exact colouring -------------------------------------------------------


def find_colouring(g: PartStructure, L: ListAssignment) -> dict[int, int] | None:
    """A proper L-colouring, or ``None`` when the instance is uncolourable.

    Branches colour by colour.  A colour class lies inside one part, and giving a
    colour to every still-uncoloured vertex of that part which lists it never
    hurts, so each colour branches only over the parts it can go to.
    """
    L.check_against(g)
    part_of = g.part_of
    lists = L.lists

    def search(uncoloured: frozenset[int], colours: frozenset[int]) -> dict[int, int] | None:
        if not uncoloured:
            return {}
        avail = {v: lists[v] & colours for v in uncoloured}
        if not all(avail.values()):
            return None
        shortcut = maximum_matching(avail)
        if len(shortcut) == len(uncoloured):
            return shortcut
        # every part with uncoloured vertices needs a private colour
        part_colours: dict[int, set[int]] = {}
        for v, cs in avail.items():
            part_colours.setdefault(part_of[v], set()).update(cs)
        if len(maximum_matching(part_colours)) < len(part_colours):
            return None
        candidates: dict[int, list[int]] = {}
        for v, cs in avail.items():
            for c in cs:
                candidates.setdefault(c, []).append(v)
        c = min(candidates, key=lambda col: (len(candidates[col]), col))
        options: dict[int, list[int]] = {}
        for v in candidates[c]:
            options.setdefault(part_of[v], []).append(v)
        for p in sorted(options, key=lambda q: (-len(options[q]), q)):
            block = options[p]
            rest = search(uncoloured.difference(block), colours - {c})
            if rest is not None:
                rest.update((v, c) for v in block)
                return rest
        return None

    return search(frozenset(range(g.n)), L.universe)


def is_colourable(g: PartStructure, L: ListAssignment) -> bool:
    return find_colouring(g, L) is not None


def surjectify(g: PartStructure, L: ListAssignment, f: Mapping[int, int]) -> dict[int, int]:
    """Recolour along augmenting paths until every colour of the universe is used.

    Each recoloured vertex moves to a colour from its own list that is unused
    at that moment, so properness is kept and every class of size >= 2 keeps
    its colour.  Vertices that are not recoloured keep ``f(v)``.  Colours that
    no augmenting path can reach stay uncovered.
    """
    L.check_against(g)
    universe = L.universe
    inverse = L.inverse
    colouring = dict(f)
    counts: dict[int, int] = {}
    for c in colouring.values():
        counts[c] = counts.get(c, 0) + 1

    for target in sorted(universe):
        if counts.get(target):
            continue
        takes: dict[int, int] = {}  # vertex -> colour it would move to
        freed_by: dict[int, int] = {}  # colour -> vertex currently holding it alone
        frontier = [target]
        seen_colours = {target}
        end = None
        while frontier and end is None:
            nxt = []
            for col in frontier:
                for v in sorted(inverse.get(col, ())):
                    if v in takes or v not in colouring:
                        continue
                    takes[v] = col
                    old = colouring[v]
                    if old not in universe or counts[old] >= 2:
                        end = v
                        break
                    if old not in seen_colours:
                        seen_colours.add(old)
                        freed_by[old] = v
                        nxt.append(old)
                if end is not None:
                    break
            frontier = nxt
        if end is None:
            continue
        v = end
        while True:
            col = takes[v]
            old = colouring[v]
            counts[old] -= 1
            colouring[v] = col
            counts[col] = counts.get(col, 0) + 1
            if col == target:
                break
            v = freed_by[col]
    return colouring
