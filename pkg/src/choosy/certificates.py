"""Sufficient condition for f-choosability with parts of size at most three.

The parts are split into four classes: two ordered sequences of singletons
(``a_singletons`` and ``d_singletons``), the 2-parts (``pairs``) and the
3-parts (``triples``).  :func:`check_f_conditions` tests seven inequality
families; :func:`colour_via_lemma` colours any list assignment meeting them
by repeatedly applying the first applicable reduction and recursing on the
smaller instance.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Mapping

from .model import MalformedInput, PartStructure
from .solver import maximum_matching

FAMILIES = ("a-1", "d-1", "b-1", "b-2", "c-1", "c-2", "c-3")


class ReductionGap(RuntimeError):
    """No reduction applies to a non-empty instance that meets the conditions."""


@dataclass(frozen=True)
class ClassifiedInstance:
    """A complete multipartite graph with parts of size <= 3, classified, plus demands ``f``.

    Vertices are arbitrary integer labels; each singleton, pair or triple is one part.
    """

    a_singletons: tuple[int, ...]
    d_singletons: tuple[int, ...]
    pairs: tuple[tuple[int, int], ...]
    triples: tuple[tuple[int, int, int], ...]
    f: Mapping[int, int] = field(hash=False)

    def __post_init__(self):
        object.__setattr__(self, "a_singletons", tuple(self.a_singletons))
        object.__setattr__(self, "d_singletons", tuple(self.d_singletons))
        object.__setattr__(self, "pairs", tuple(tuple(p) for p in self.pairs))
        object.__setattr__(self, "triples", tuple(tuple(t) for t in self.triples))
        if any(len(p) != 2 for p in self.pairs) or any(len(t) != 3 for t in self.triples):
            raise MalformedInput("pairs need exactly two vertices and triples exactly three")
        vs = self.vertices
        if len(vs) != len(set(vs)):
            raise MalformedInput("a vertex appears in more than one part")
        missing = [v for v in vs if v not in self.f]
        if missing:
            raise MalformedInput(f"no demand given for vertices {missing}")

    @property
    def vertices(self) -> tuple[int, ...]:
        return (
            self.a_singletons
            + self.d_singletons
            + tuple(itertools.chain.from_iterable(self.pairs))
            + tuple(itertools.chain.from_iterable(self.triples))
        )

    @property
    def counts(self) -> tuple[int, int, int, int]:
        """(k1, d, k2, k3)."""
        return len(self.a_singletons), len(self.d_singletons), len(self.pairs), len(self.triples)

    @property
    def parts(self) -> list[tuple[int, ...]]:
        return [(v,) for v in self.a_singletons + self.d_singletons] + list(self.pairs) + list(self.triples)

    def shape(self) -> PartStructure:
        return PartStructure.of(len(p) for p in self.parts)

    @classmethod
    def from_shape(
        cls,
        g: PartStructure,
        a_parts: list[int],
        d_parts: list[int],
        f: Mapping[int, int],
    ) -> "ClassifiedInstance":
        """Classify the parts of ``g`` given ordered A and D part indices."""
        if g.sizes and g.sizes[0] > 3:
            raise MalformedInput("parts must have size at most 3")
        for idx in list(a_parts) + list(d_parts):
            if not 0 <= idx < g.k or g.sizes[idx] != 1:
                raise MalformedInput(f"part {idx} is not a singleton")
        listed = list(a_parts) + list(d_parts)
        if len(set(listed)) != len(listed):
            raise MalformedInput("a part is listed twice")
        singles = {i for i, s in enumerate(g.sizes) if s == 1}
        if singles != set(listed):
            raise MalformedInput("every singleton part must be placed in A or D")
        return cls(
            tuple(g.parts[i][0] for i in a_parts),
            tuple(g.parts[i][0] for i in d_parts),
            tuple(p for p in g.parts if len(p) == 2),
            tuple(p for p in g.parts if len(p) == 3),
            dict(f),
        )


@dataclass(frozen=True)
class ConditionResult:
    ok: bool
    family: str | None = None
    detail: str = ""

    def __bool__(self) -> bool:
        return self.ok


def check_f_conditions(ci: ClassifiedInstance) -> ConditionResult:
    """Test the seven families in order; report the first violated one."""
    f = ci.f
    k1, d, k2, k3 = ci.counts
    for i, v in enumerate(ci.a_singletons, 1):
        if f[v] < k2 + k3 + i:
            return ConditionResult(False, "a-1", f"f({v})={f[v]} < {k2 + k3 + i}")
    for i, v in enumerate(ci.d_singletons, 1):
        if f[v] < 2 * k3 + k2 + k1 + i:
            return ConditionResult(False, "d-1", f"f({v})={f[v]} < {2 * k3 + k2 + k1 + i}")
    for u, v in ci.pairs:
        for x in (u, v):
            if f[x] < k2 + k3:
                return ConditionResult(False, "b-1", f"f({x})={f[x]} < {k2 + k3}")
    for u, v in ci.pairs:
        need = 3 * k3 + 2 * k2 + k1 + d
        if f[u] + f[v] < need:
            return ConditionResult(False, "b-2", f"f({u})+f({v})={f[u] + f[v]} < {need}")
    for t in ci.triples:
        for x in t:
            if f[x] < k2 + k3:
                return ConditionResult(False, "c-1", f"f({x})={f[x]} < {k2 + k3}")
    for t in ci.triples:
        need = 2 * k3 + 2 * k2 + k1
        for u, v in itertools.combinations(t, 2):
            if f[u] + f[v] < need:
                return ConditionResult(False, "c-2", f"f({u})+f({v})={f[u] + f[v]} < {need}")
    for t in ci.triples:
        need = 4 * k3 + 3 * k2 + 2 * k1 + d - 1
        total = sum(f[x] for x in t)
        if total < need:
            return ConditionResult(False, "c-3", f"sum over {t} = {total} < {need}")
    return ConditionResult(True)


# --- constructive colouring ------------------------------------------------


@dataclass
class _State:
    a: list[int]
    d: list[int]
    pairs: list[tuple[int, ...]]
    triples: list[tuple[int, ...]]
    lists: dict[int, frozenset[int]]

    def classified(self) -> ClassifiedInstance:
        return ClassifiedInstance(
            tuple(self.a), tuple(self.d), tuple(self.pairs), tuple(self.triples),
            {v: len(lst) for v, lst in self.lists.items()},
        )

    def drop_colours(self, colours: set[int]) -> None:
        for v in self.lists:
            self.lists[v] = self.lists[v] - colours

    def remove(self, vertices) -> None:
        for v in vertices:
            del self.lists[v]


def colour_via_lemma(
    ci: ClassifiedInstance,
    lists: Mapping[int, frozenset[int]],
    trace: list[str] | None = None,
) -> dict[int, int]:
    """Colour ``ci`` from ``lists`` (``|lists[v]| >= f(v)``) following the reductions.

    Lists are first cut to exactly ``f(v)`` colours (the lowest ones).  Every
    step removes at least one vertex and the shrunken instance is re-checked
    against the conditions.  Raises :class:`ReductionGap` if no reduction
    applies, and ``ValueError`` if the conditions fail on input.
    """
    result = check_f_conditions(ci)
    if not result:
        raise ValueError(f"conditions fail at ({result.family}): {result.detail}")
    for v in ci.vertices:
        if len(lists[v]) < ci.f[v]:
            raise ValueError(f"list of {v} is shorter than f({v})={ci.f[v]}")
    state = _State(
        list(ci.a_singletons), list(ci.d_singletons), list(ci.pairs), list(ci.triples),
        {v: frozenset(sorted(lists[v])[: ci.f[v]]) for v in ci.vertices},
    )
    colouring: dict[int, int] = {}
    merged: list[tuple[int, tuple[int, int]]] = []  # (new vertex, identified pair), innermost last
    fresh = itertools.count(max(ci.vertices, default=-1) + 1)
    log = trace if trace is not None else []

    while state.lists:
        step = _reduce(state, colouring, merged, fresh)
        log.append(step)
        now = check_f_conditions(state.classified())
        if not now:
            raise ReductionGap(f"after {step}: ({now.family}) {now.detail}; state={state}")

    for x, (u, w) in reversed(merged):
        colouring[u] = colouring[w] = colouring.pop(x)
    return colouring


def _reduce(state: _State, colouring: dict, merged: list, fresh) -> str:
    L = state.lists
    k1, d, k2, k3 = len(state.a), len(state.d), len(state.pairs), len(state.triples)

    # common colour on a 2- or 3-part: largest such part, lowest index
    for group, name in ((state.triples, "triple"), (state.pairs, "pair")):
        for idx, part in enumerate(group):
            common = frozenset.intersection(*(L[v] for v in part))
            if common:
                c = min(common)
                for v in part:
                    colouring[v] = c
                del group[idx]
                state.remove(part)
                state.drop_colours({c})
                return f"common colour {c} on {name} {part}"

    # tight pair sum inside a triple forces disjoint lists
    for idx, part in enumerate(state.triples):
        for u, v in itertools.combinations(part, 2):
            if len(L[u]) + len(L[v]) == 2 * k3 + 2 * k2 + k1 and L[u] & L[v]:
                c = min(L[u] & L[v])
                (w,) = [x for x in part if x not in (u, v)]
                colouring[u] = colouring[v] = c
                del state.triples[idx]
                state.remove((u, v))
                state.d.insert(0, w)
                state.drop_colours({c})
                return f"tight pair {u},{v} share {c}; {w} leads D"

    # tight single demand inside a triple
    for idx, part in enumerate(state.triples):
        for v in part:
            if len(L[v]) != k2 + k3:
                continue
            u, w = [x for x in part if x != v]
            for other in (u, w):
                shared = L[v] & L[other]
                if shared:
                    c = min(shared)
                    (rest,) = [x for x in part if x not in (v, other)]
                    colouring[v] = colouring[other] = c
                    del state.triples[idx]
                    state.remove((v, other))
                    state.a.append(rest)
                    state.drop_colours({c})
                    return f"tight {v} shares {c} with {other}; {rest} joins A"
            joint = L[u] & L[w]
            if len(joint) < k3 + k2 + k1:
                # the overlap bound only holds with fewer colours than vertices
                return _hall_split(state, colouring)
            c = min(L[v])
            x = next(fresh)
            del state.triples[idx]
            state.remove((v, u, w))
            colouring[v] = c
            state.drop_colours({c})
            L[x] = joint
            state.a.append(x)
            merged.append((x, (u, w)))
            return f"tight {v} disjoint; {v}<-{c}, identify {u},{w} as {x}"

    # tight single demand inside a pair: partner moves to the end of D
    for idx, (u, v) in enumerate(state.pairs):
        for x, y in ((u, v), (v, u)):
            if len(L[x]) == k2 + k3:
                c = min(L[x])
                colouring[x] = c
                del state.pairs[idx]
                state.remove((x,))
                state.d.append(y)
                state.drop_colours({c})
                return f"tight {x}<-{c}; {y} joins D"

    if state.a:
        v = state.a.pop(0)
        return _colour_singleton(state, colouring, v, "A")

    if state.triples:
        part = state.triples[0]
        for u, v in itertools.combinations(part, 2):
            shared = L[u] & L[v]
            if shared:
                c = min(shared)
                (w,) = [x for x in part if x not in (u, v)]
                colouring[u] = colouring[v] = c
                del state.triples[0]
                state.remove((u, v))
                state.a = [w]
                state.drop_colours({c})
                return f"triple {part}: {u},{v}<-{c}; {w} becomes A"
        return _hall_split(state, colouring)

    if state.d:
        v = state.d.pop(0)
        return _colour_singleton(state, colouring, v, "D")

    if state.pairs:
        u, v = state.pairs.pop(0)
        c1, c2 = min(L[u]), min(L[v])
        colouring[u], colouring[v] = c1, c2
        state.remove((u, v))
        state.drop_colours({c1, c2})
        return f"pair {u}<-{c1}, {v}<-{c2}"

    raise ReductionGap(f"no reduction applies to {state}")


def _colour_singleton(state: _State, colouring: dict, v: int, label: str) -> str:
    c = min(state.lists[v])
    colouring[v] = c
    state.remove((v,))
    state.drop_colours({c})
    return f"{label} singleton {v}<-{c}"


def _hall_split(state: _State, colouring: dict) -> str:
    """Colour everything injectively when the vertex/colour graph has a covering matching."""
    matching = maximum_matching(state.lists)
    if len(matching) < len(state.lists):
        raise ReductionGap(f"no covering matching for the remaining lists: {state}")
    colouring.update(matching)
    for group in (state.a, state.d, state.pairs, state.triples):
        group.clear()
    state.lists.clear()
    return "injective colouring from a covering matching"
