"""Frequent colours, pseudo colourings and the three-step near-acceptable construction.

A near-acceptable colouring is a proper colouring in which every colour class
of size >= 2 uses a colour common to its members' lists, and every vertex
coloured off its list is alone in its class with a frequent colour.  Such a
colouring is turned into a proper list colouring by a matching on the quotient
formed by its colour classes, when one exists.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Mapping

from .model import ColouringKind, ListAssignment, MalformedInput, PartStructure, colour_classes, validate_colouring
from .search import BudgetExhausted
from .solver import HallOutcome, build_quotient, matching_or_violator, maximum_matching, surjectify


class FrequencyType(enum.Enum):
    TYPE1 = "type1"
    TYPE2 = "type2"
    TYPE3 = "type3"
    NOT_FREQUENT = "not-frequent"


@dataclass(frozen=True)
class FrequentColourReport:
    tags: dict[int, FrequencyType]
    singletons: frozenset[int]
    surplus: int  # |V| - |C|

    @property
    def frequent(self) -> frozenset[int]:
        return frozenset(c for c, t in self.tags.items() if t is not FrequencyType.NOT_FREQUENT)

    @property
    def type1(self) -> frozenset[int]:
        return frozenset(c for c, t in self.tags.items() if t is FrequencyType.TYPE1)

    @property
    def warning(self) -> str | None:
        if self.surplus <= 0:
            return f"surplus {self.surplus} <= 0: types 2 and 3 are judged against it as computed"
        return None


def frequent_colours(g: PartStructure, L: ListAssignment) -> FrequentColourReport:
    """Tag each colour with the first frequency type it meets.

    Type 1: at least k+2 lists contain it (k = number of parts).  Type 2: it lies
    in at least ``surplus`` lists of singleton-part vertices.  Type 3: there are
    exactly ``surplus - 1 >= 1`` singleton vertices and all of them list it.
    Types 2 and 3 need at least one singleton vertex.
    """
    L.check_against(g)
    singles = g.singletons
    surplus = g.n - len(L.universe)
    tags = {}
    for c, holders in L.inverse.items():
        if len(holders) >= g.k + 2:
            tags[c] = FrequencyType.TYPE1
        elif singles and len(holders & singles) >= surplus:
            tags[c] = FrequencyType.TYPE2
        elif len(singles) == surplus - 1 >= 1 and singles <= holders:
            tags[c] = FrequencyType.TYPE3
        else:
            tags[c] = FrequencyType.NOT_FREQUENT
    return FrequentColourReport(tags, singles, surplus)


class PseudoKind(enum.Enum):
    PROPER = "proper"
    NEAR_ACCEPTABLE = "near-acceptable"
    PSEUDO_ONLY = "pseudo-only"
    INVALID = "invalid"


def classify_pseudo(
    g: PartStructure, L: ListAssignment, f: Mapping[int, int], frequent: frozenset[int] | None = None
) -> PseudoKind:
    """Proper, near-acceptable (off-list vertices all on frequent colours), pseudo-only or invalid."""
    check = validate_colouring(g, L, f)
    if check.kind is ColouringKind.PROPER:
        return PseudoKind.PROPER
    if check.kind is not ColouringKind.PSEUDO:
        return PseudoKind.INVALID
    if frequent is None:
        frequent = frequent_colours(g, L).frequent
    if all(f[v] in frequent for v in check.badly_coloured):
        return PseudoKind.NEAR_ACCEPTABLE
    return PseudoKind.PSEUDO_ONLY


# --- the three steps -------------------------------------------------------


@dataclass
class StepState:
    """Progress of the construction.  ``colouring`` holds everything coloured so far."""

    g: PartStructure
    L: ListAssignment
    F: frozenset[int]
    f1: dict[int, int]
    colouring: dict[int, int] = field(default_factory=dict)
    order: tuple[int, ...] = ()
    i0: int = 0
    F1: tuple[int, ...] = ()
    V2: frozenset[int] = frozenset()

    @property
    def coloured_parts(self) -> tuple[frozenset[int], ...]:
        """Per part, the vertices coloured in step 1."""
        return tuple(frozenset(v for v in p if v in self.f1) for p in self.g.parts)

    @property
    def uncoloured_parts(self) -> tuple[frozenset[int], ...]:
        return tuple(frozenset(v for v in p if v not in self.f1) for p in self.g.parts)

    @property
    def tau1(self) -> int:
        return len(self.f1)

    @property
    def tau2(self) -> int:
        return sum(len(s) ** 2 for s in self.coloured_parts)

    @property
    def V1(self) -> frozenset[int]:
        return frozenset(self.f1)

    @property
    def V3(self) -> frozenset[int]:
        return frozenset(range(self.g.n)) - self.V1 - self.V2

    @property
    def F2(self) -> tuple[int, ...]:
        return tuple(sorted(self.F - set(self.F1)))

    def class_size(self, c: int) -> int:
        return sum(1 for col in self.f1.values() if col == c)

    def m(self, i: int, c: int) -> int:
        """Uncoloured vertices of part ``i`` listing ``c``."""
        return len(self.L.inverse.get(c, frozenset()) & self.uncoloured_parts[i])

    def movable(self, c: int, i: int) -> bool:
        return c not in self.F and self.m(i, c) == self.class_size(c)

    def trace(self) -> str:
        return (
            f"tau1={self.tau1} tau2={self.tau2} i0={self.i0} "
            f"|V1|={len(self.V1)} |V2|={len(self.V2)} |V3|={len(self.V3)}"
        )


def step1_partial(
    g: PartStructure, L: ListAssignment, F: frozenset[int], budget_nodes: int | None = None
) -> StepState:
    """Colour as many vertices as possible from C - F, then balance the parts.

    A colour class lies in one part, and a colour given to a part may as well
    take every vertex there that lists it, so the search runs over maps from
    the available colours to parts.  Each coloured vertex takes the lowest
    colour sent to its part.  Exact branch and bound on (tau1, -tau2).
    """
    L.check_against(g)
    F = frozenset(F)
    colours = sorted(L.universe - F)
    hits = [[frozenset(L.inverse[c] & set(p)) for p in g.parts] for c in colours]
    reachable_after = [frozenset()] * (len(colours) + 1)
    for idx in range(len(colours) - 1, -1, -1):
        reachable_after[idx] = reachable_after[idx + 1] | L.inverse[colours[idx]]

    best: list = [(-1, 0), None]  # ((tau1, -tau2), choice)
    covered = [frozenset()] * g.k
    choice: list[int] = []
    nodes = 0

    def rec(idx: int, total: int) -> None:
        nonlocal nodes
        nodes += 1
        if budget_nodes is not None and nodes > budget_nodes:
            raise BudgetExhausted(nodes)
        tau2 = sum(len(s) ** 2 for s in covered)
        all_covered = frozenset().union(*covered)
        bound = total + len(reachable_after[idx] - all_covered)
        best_tau1, best_neg_tau2 = best[0]
        if bound < best_tau1 or (bound == best_tau1 and -tau2 <= best_neg_tau2):
            return
        if idx == len(colours):
            best[0] = (total, -tau2)
            best[1] = tuple(choice)
            return
        for p in range(g.k):
            gain = hits[idx][p] - covered[p]
            if not gain:
                # sending the colour here changes nothing; same as leaving it unused
                continue
            old = covered[p]
            covered[p] = old | gain
            choice.append(p)
            rec(idx + 1, total + len(gain))
            choice.pop()
            covered[p] = old
        choice.append(-1)
        rec(idx + 1, total)
        choice.pop()

    rec(0, 0)
    f1: dict[int, int] = {}
    for c, p in zip(colours, best[1]):
        if p < 0:
            continue
        for v in sorted(hits[colours.index(c)][p]):
            f1.setdefault(v, c)
    state = StepState(g, L, F, f1, dict(f1))
    for i in range(g.k):
        outside = len(state.V1 - set(g.parts[i]))
        load = sum(state.m(i, c) for c in colours)
        assert load <= outside, f"part {i}: {load} movable vertices exceed {outside}"
    return state


def relocate(
    g: PartStructure, L: ListAssignment, f: Mapping[int, int], moves: list[tuple[int, int]]
) -> dict[int, int]:
    """Move whole colour classes: ``moves`` is a list of (colour, part index) with distinct colours.

    First every moved colour is uncoloured, then each colours the uncoloured
    vertices of its target part that list it.
    """
    colours = [c for c, _ in moves]
    if len(set(colours)) != len(colours):
        raise ValueError("relocated colours must be distinct")
    out = {v: c for v, c in f.items() if c not in colours}
    for c, i in moves:
        for v in g.parts[i]:
            if v not in out and c in L[v]:
                out[v] = c
    return out


def step2_frequent_blocks(state: StepState) -> StepState:
    """Colour whole uncoloured blocks with distinct frequent colours, largest blocks first.

    Blocks are taken in non-increasing size order; among equal sizes and among
    the colours common to a block, the choice maximising the number of blocks
    coloured is found by backtracking.  Stops at the first block with no
    available common colour, or at an empty block.
    """
    g, L = state.g, state.L
    blocks = state.uncoloured_parts
    common = [
        frozenset(state.F.intersection(*(L[v] for v in b))) if b else frozenset() for b in blocks
    ]
    memo: dict[tuple[frozenset[int], frozenset[int]], tuple[tuple[int, int], ...]] = {}

    def rec(done: frozenset[int], used: frozenset[int]) -> tuple[tuple[int, int], ...]:
        key = (done, used)
        if key in memo:
            return memo[key]
        rest = [i for i in range(g.k) if i not in done]
        best: tuple[tuple[int, int], ...] = ()
        if rest:
            size = max(len(blocks[i]) for i in rest)
            if size > 0:
                for i in sorted(i for i in rest if len(blocks[i]) == size):
                    for c in sorted(common[i] - used):
                        tail = rec(done | {i}, used | {c})
                        if 1 + len(tail) > len(best):
                            best = ((i, c),) + tail
        memo[key] = best
        return best

    plan = rec(frozenset(), frozenset())
    colouring = dict(state.f1)
    V2 = set()
    for i, c in plan:
        for v in blocks[i]:
            colouring[v] = c
            V2.add(v)
    coloured = [i for i, _ in plan]
    remaining = sorted((i for i in range(g.k) if i not in coloured), key=lambda i: (-len(blocks[i]), i))
    return StepState(
        g, L, state.F, state.f1, colouring,
        order=tuple(coloured + remaining), i0=len(plan),
        F1=tuple(c for _, c in plan), V2=frozenset(V2),
    )


def step3_inject(state: StepState) -> dict[int, int] | None:
    """Give the leftover vertices distinct unused frequent colours, or ``None`` (FAIL).

    List colours are preferred through a maximum matching; the rest of the
    leftover vertices take the remaining colours in order.
    """
    V3 = sorted(state.V3)
    F2 = state.F2
    if len(V3) > len(F2):
        return None
    colouring = dict(state.colouring)
    matched = maximum_matching({v: state.L[v] & set(F2) for v in V3})
    colouring.update(matched)
    spare = [c for c in F2 if c not in set(matched.values())]
    for v in V3:
        if v not in matched:
            colouring[v] = spare.pop(0)
    return colouring


# --- completion ------------------------------------------------------------


@dataclass(frozen=True)
class CompletionResult:
    colouring: dict[int, int] | None
    outcome: HallOutcome | None = None

    @property
    def solved(self) -> bool:
        return self.colouring is not None


def complete_near_acceptable(
    g: PartStructure, L: ListAssignment, f: Mapping[int, int], frequent: frozenset[int] | None = None
) -> CompletionResult:
    """Turn a near-acceptable colouring into a proper list colouring, or return the Hall violator.

    The colouring is first made surjective on the colour universe, then its
    colour classes are collapsed and matched to colours.
    """
    kind = classify_pseudo(g, L, f, frequent)
    if kind is PseudoKind.PROPER:
        return CompletionResult(dict(f))
    if kind is not PseudoKind.NEAR_ACCEPTABLE:
        raise MalformedInput(f"colouring is {kind.value}, not near-acceptable")
    full = surjectify(g, L, f)
    quotient = build_quotient(g, L, colour_classes(full).values())
    outcome = matching_or_violator(quotient.incidence())
    if not outcome.is_matching:
        return CompletionResult(None, outcome)
    colouring = quotient.lift(outcome.matching)
    assert validate_colouring(g, L, colouring).kind is ColouringKind.PROPER
    return CompletionResult(colouring, outcome)


@dataclass
class PipelineResult:
    report: FrequentColourReport
    frequent_used: frozenset[int]
    step1: StepState
    step2: StepState
    near_acceptable: dict[int, int] | None
    completion: CompletionResult | None

    @property
    def failed(self) -> bool:
        return self.near_acceptable is None


def choose_frequent(report: FrequentColourReport, k: int) -> frozenset[int]:
    """At most ``k`` frequent colours, type 1 first, then by colour."""
    rank = {FrequencyType.TYPE1: 0, FrequencyType.TYPE2: 1, FrequencyType.TYPE3: 2}
    ordered = sorted(report.frequent, key=lambda c: (rank[report.tags[c]], c))
    return frozenset(ordered[:k])


def run_pipeline(
    g: PartStructure, L: ListAssignment, F: frozenset[int] | None = None, budget_nodes: int | None = None
) -> PipelineResult:
    """Steps one to three, then completion when step three succeeds."""
    report = frequent_colours(g, L)
    if F is None:
        F = choose_frequent(report, g.k)
    s1 = step1_partial(g, L, F, budget_nodes)
    s2 = step2_frequent_blocks(s1)
    f = step3_inject(s2)
    completion = None if f is None else complete_near_acceptable(g, L, f, report.frequent)
    return PipelineResult(report, frozenset(F), s1, s2, f, completion)
