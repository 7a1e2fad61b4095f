"""k-choosability decisions, choice numbers and the 2k+2 verification sweep.

Candidates are generated in orderly fashion: vertex by vertex (part-major),
each list a k-subset of the colours used so far plus consecutive fresh
colours, and a prefix survives only if it already equals the least
representative of its orbit.  Least representatives have least prefixes, so
every orbit is produced exactly once.

The minimal-counterexample prunings are made exact for arbitrary shapes by
establishing their hypotheses first:

* vertex-minimality: every one-vertex-deleted sub-shape is checked k-choosable
  (recursively, memoised); otherwise its bad assignment extends to one for the
  whole shape.
* common colours in a 2+-part P are excluded only when G - P is (k-1)-choosable.
"""

from __future__ import annotations

import enum
import itertools
import os
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace
from functools import lru_cache
from typing import Callable, Iterator

from .model import (
    CanonicalAssignment,
    ListAssignment,
    PartStructure,
    canonicalize,
)
from .solver import is_colourable

DISTINCT_LISTS = "distinct-lists"
PRIVATE_COLOUR = "private-colour"
COLOUR_BOUND = "colour-bound"
COMMON_COLOUR = "common-colour"
COLOUR_DEGREE = "colour-degree"
PRUNINGS = (DISTINCT_LISTS, PRIVATE_COLOUR, COLOUR_BOUND, COMMON_COLOUR, COLOUR_DEGREE)
# prunings whose justification needs every proper induced subgraph to be k-choosable
NEEDS_MINIMALITY = frozenset({DISTINCT_LISTS, PRIVATE_COLOUR})


class BudgetExhausted(Exception):
    def __init__(self, nodes: int):
        super().__init__(f"budget exhausted after {nodes} nodes")
        self.nodes = nodes


def _env_budget_secs() -> float | None:
    raw = os.environ.get("CHOOSY_BUDGET_SECS")
    return float(raw) if raw else None


@dataclass(frozen=True)
class SearchConfig:
    k: int
    prune: frozenset[str] = frozenset(PRUNINGS)
    budget_nodes: int | None = None
    budget_secs: float | None = field(default_factory=_env_budget_secs)
    jobs: int = 1
    colour_check: Callable[[PartStructure, ListAssignment], bool] = field(default=is_colourable, compare=False)

    def __post_init__(self):
        if self.k < 1:
            raise ValueError("k must be at least 1")
        unknown = set(self.prune) - set(PRUNINGS)
        if unknown:
            raise ValueError(f"unknown pruning(s): {sorted(unknown)}")
        for name in ("budget_nodes", "budget_secs"):
            value = getattr(self, name)
            if value is not None and value <= 0:
                raise ValueError(f"{name} must be positive")
        object.__setattr__(self, "prune", frozenset(self.prune))

    def without(self, *names: str) -> "SearchConfig":
        return replace(self, prune=self.prune - set(names))

    def with_k(self, k: int) -> "SearchConfig":
        return replace(self, k=k)


class Status(enum.Enum):
    CHOOSABLE = "choosable"
    NOT_CHOOSABLE = "not-choosable"
    INCONCLUSIVE = "inconclusive"


@dataclass(frozen=True)
class ChoosabilityVerdict:
    shape: PartStructure
    k: int
    status: Status
    witness: CanonicalAssignment | None = None
    nodes_explored: int = 0
    wall_time: float = 0.0

    @property
    def choosable(self) -> bool | None:
        if self.status is Status.INCONCLUSIVE:
            return None
        return self.status is Status.CHOOSABLE


class _Budget:
    def __init__(self, nodes: int | None, secs: float | None):
        self.max_nodes = nodes
        self.deadline = None if secs is None else time.monotonic() + secs
        self.nodes = 0

    def tick(self) -> None:
        self.nodes += 1
        if self.max_nodes is not None and self.nodes > self.max_nodes:
            raise BudgetExhausted(self.nodes)
        if self.deadline is not None and not self.nodes & 255 and time.monotonic() > self.deadline:
            raise BudgetExhausted(self.nodes)


# --- orderly generation ----------------------------------------------------


@lru_cache(maxsize=None)
def _prefix_slots(g: PartStructure, upto: int) -> tuple[tuple[int, tuple[tuple[int, ...], ...]], ...]:
    """Slots of the first ``upto`` vertices: (length, interchangeable parts' filled vertices)."""
    filled = [p[: max(0, upto - p[0])] for p in g.parts if p[0] < upto]
    slots = []
    for p in filled:
        peers = tuple(
            q for q in filled if len(q) == len(p) and g.sizes[g.part_of[q[0]]] == g.sizes[g.part_of[p[0]]]
        )
        slots.append((len(p), peers))
    return tuple(slots)


def _refine(cells: list[int], lst: int) -> tuple[list[int], tuple[int, ...]]:
    """Split colour cells by membership in ``lst``; return new cells and the labels of ``lst``."""
    refined = []
    labels: list[int] = []
    offset = 0
    for cell in cells:
        inside = cell & lst
        if inside:
            refined.append(inside)
            size = inside.bit_count()
            labels.extend(range(offset, offset + size))
            offset += size
        rest = cell & ~lst
        if rest:
            refined.append(rest)
            offset += rest.bit_count()
    return refined, tuple(labels)


def _is_least_prefix(g: PartStructure, prefix: list[tuple[int, ...]]) -> bool:
    """True iff no shape automorphism plus relabelling gives a smaller list sequence.

    Automorphic vertex orders are explored position by position.  After refining
    colour cells with the vertices placed so far, the next vertex's list is a
    union of whole cells, so its labels are final; a branch is cut as soon as it
    exceeds the current prefix.
    """
    cur = tuple(prefix)
    n = len(prefix)
    masks = [sum(1 << c for c in lst) for lst in prefix]
    full = 0
    for mask in masks:
        full |= mask
    # the prefix must already carry its own least labelling
    cells = [full]
    for pos in range(n):
        cells, labels = _refine(cells, masks[pos])
        if labels != cur[pos]:
            return False
    slots = _prefix_slots(g, n)

    def dfs(pos, slot, used_parts, pending, cells):
        if pos == n:
            return False
        if not pending:
            length, peers = slots[slot + 1]
            for part in peers:
                if part in used_parts:
                    continue
                if dfs(pos, slot + 1, used_parts | {part}, part, cells):
                    return True
            return False
        want = cur[pos]
        for v in pending:
            refined, labels = _refine(cells, masks[v])
            if labels < want:
                return True
            if labels == want:
                rest = tuple(x for x in pending if x != v)
                if dfs(pos + 1, slot, used_parts, rest, refined):
                    return True
        return False

    return not dfs(0, -1, frozenset(), (), [full])


def _list_options(used: int, k: int, limit: int) -> list[tuple[int, ...]]:
    """k-subsets of ``range(used)`` topped up with consecutive fresh colours."""
    out = []
    for fresh in range(0, k + 1):
        if used + fresh > limit or k - fresh > used:
            continue
        new = tuple(range(used, used + fresh))
        for old in itertools.combinations(range(used), k - fresh):
            out.append(old + new)
    out.sort()
    return out


def _generate(
    g: PartStructure,
    k: int,
    num_colours: int,
    prune: frozenset[str],
    common_parts: frozenset[int],
    degree_cap: int | None,
    budget: _Budget,
    shard: tuple[int, int] = (0, 1),
    shard_depth: int = 2,
) -> Iterator[tuple[tuple[int, ...], ...]]:
    """Least orbit representatives of k-list assignments using exactly ``num_colours`` colours."""
    n = g.n
    part_of = g.part_of
    parts = g.parts
    last_of_part = {p[-1]: i for i, p in enumerate(parts)}
    prefix: list[tuple[int, ...]] = []
    degree = [0] * num_colours
    shard_index, shard_count = shard
    counter = itertools.count()

    def rec(used: int) -> Iterator[tuple[tuple[int, ...], ...]]:
        j = len(prefix)
        if j == n:
            if used != num_colours:
                return
            if PRIVATE_COLOUR in prune:
                # no colour lies only in the lists of one part
                seen: dict[int, set[int]] = {}
                for v, lst in enumerate(prefix):
                    for c in lst:
                        seen.setdefault(c, set()).add(part_of[v])
                if any(len(ps) < 2 for ps in seen.values()):
                    return
            yield tuple(prefix)
            return
        if used + k * (n - j) < num_colours:
            return
        p = part_of[j]
        first_in_part = parts[p][0] == j
        for lst in _list_options(used, k, num_colours):
            if not first_in_part:
                prev = prefix[j - 1]
                # least representatives list a part's vertices in non-decreasing order
                if lst < prev or (lst == prev and DISTINCT_LISTS in prune):
                    continue
            if degree_cap is not None and any(degree[c] >= degree_cap for c in lst):
                continue
            prefix.append(lst)
            for c in lst:
                degree[c] += 1
            try:
                if j in last_of_part and last_of_part[j] in common_parts:
                    members = [set(prefix[v]) for v in parts[last_of_part[j]]]
                    if set.intersection(*members):
                        continue
                if j == shard_depth and shard_count > 1 and next(counter) % shard_count != shard_index:
                    continue
                if not _is_least_prefix(g, prefix):
                    continue
                budget.tick()
                yield from rec(max(used, max(lst) + 1))
            finally:
                prefix.pop()
                for c in lst:
                    degree[c] -= 1

    yield from rec(0)


def _degree_cap(g: PartStructure, prune: frozenset[str], common_parts: frozenset[int]) -> int | None:
    if COLOUR_DEGREE not in prune:
        return None
    # each 2+-part free of common colours has a vertex missing any given colour
    return g.n - len(common_parts)


def _colour_range(g: PartStructure, k: int, prune: frozenset[str]) -> range:
    top = g.n - 1 if COLOUR_BOUND in prune else g.n * k
    return range(k, top + 1)


def enumerate_bad_candidates(
    g: PartStructure,
    cfg: SearchConfig,
    common_parts: frozenset[int] | None = None,
    shard: tuple[int, int] = (0, 1),
    max_colours: int | None = None,
) -> Iterator[CanonicalAssignment]:
    """Stream one canonical k-list assignment per orbit surviving the enabled prunings.

    ``common_parts`` names the part indices on which common colours are
    excluded; by default every 2+-part when the pruning is enabled.
    ``max_colours`` further caps the universe size.  Raises
    :class:`BudgetExhausted` instead of truncating silently.
    """
    k = cfg.k
    if common_parts is None:
        common_parts = (
            frozenset(i for i, s in enumerate(g.sizes) if s >= 2) if COMMON_COLOUR in cfg.prune else frozenset()
        )
    budget = _Budget(cfg.budget_nodes, cfg.budget_secs)
    cap = _degree_cap(g, cfg.prune, common_parts)
    for m in _colour_range(g, k, cfg.prune):
        if max_colours is not None and m > max_colours:
            break
        for code in _generate(g, k, m, cfg.prune, common_parts, cap, budget, shard):
            yield CanonicalAssignment(g, code)


# --- decisions -------------------------------------------------------------


def _extend_witness(g: PartStructure, part: int, sub_lists: ListAssignment, sub: PartStructure, k: int) -> ListAssignment:
    """Lift a bad assignment of ``g`` minus one vertex of ``part`` back to ``g``."""
    sub_parts = list(sub.parts)
    target = list(g.sizes)
    target[part] -= 1
    assigned: list[tuple[int, ...] | None] = [None] * g.k
    free = list(range(len(sub_parts)))
    for i, size in enumerate(target):
        if size == 0:
            assigned[i] = ()
            continue
        idx = next(x for x in free if len(sub_parts[x]) == size)
        free.remove(idx)
        assigned[i] = sub_parts[idx]
    extra = frozenset(range(k))
    lists = []
    for i, block in enumerate(assigned):
        lists.extend(sub_lists[v] for v in block)
        if i == part:
            lists.append(extra)
    return ListAssignment(tuple(lists))


def _scan_shard(g, k, prune, common_parts, budget_nodes, budget_secs, colour_check, shard):
    budget = _Budget(budget_nodes, budget_secs)
    cap = _degree_cap(g, prune, common_parts)
    top = g.n - 1 if COLOUR_BOUND in prune else g.n * k
    try:
        for m in range(k, top + 1):
            for code in _generate(g, k, m, prune, common_parts, cap, budget, shard):
                if not colour_check(g, ListAssignment.of(code)):
                    return "bad", code, budget.nodes
    except BudgetExhausted:
        return "budget", None, budget.nodes
    return "clean", None, budget.nodes


class _Decider:
    def __init__(self, cfg: SearchConfig):
        self.cfg = cfg
        self.memo: dict[tuple[tuple[int, ...], int], ChoosabilityVerdict] = {}

    def decide(self, g: PartStructure, k: int) -> ChoosabilityVerdict:
        key = (g.sizes, k)
        if key not in self.memo:
            self.memo[key] = self._decide(g, k)
        return self.memo[key]

    def _verdict(self, g, k, status, lists=None, nodes=0, start=None):
        witness = canonicalize(g, lists) if lists is not None else None
        elapsed = 0.0 if start is None else time.monotonic() - start
        return ChoosabilityVerdict(g, k, status, witness, nodes, elapsed)

    def _decide(self, g: PartStructure, k: int) -> ChoosabilityVerdict:
        start = time.monotonic()
        if g.k <= 1:
            return self._verdict(g, k, Status.CHOOSABLE, start=start)
        if g.k > k:
            # more parts than colours in a shared list
            return self._verdict(g, k, Status.NOT_CHOOSABLE, ListAssignment.of([range(k)] * g.n), start=start)
        prune = self.cfg.prune
        nodes = 0
        if prune & NEEDS_MINIMALITY:
            # a bad assignment of a one-vertex-deleted shape extends to g
            done = set()
            for i, s in enumerate(g.sizes):
                if s in done:
                    continue
                done.add(s)
                sub = g.remove_vertex_from_part(i)
                verdict = self.decide(sub, k)
                nodes += verdict.nodes_explored
                if verdict.status is Status.INCONCLUSIVE:
                    return self._verdict(g, k, Status.INCONCLUSIVE, nodes=nodes, start=start)
                if verdict.status is Status.NOT_CHOOSABLE:
                    lists = _extend_witness(g, i, verdict.witness.representative, sub, k)
                    return self._verdict(g, k, Status.NOT_CHOOSABLE, lists, nodes, start)
        common = set()
        if COMMON_COLOUR in prune:
            for i, s in enumerate(g.sizes):
                if s < 2:
                    continue
                rest = g.without_part(i)
                if k == 1:
                    ok = rest.n == 0
                else:
                    ok = self.decide(rest, k - 1).status is Status.CHOOSABLE
                if ok:
                    common.add(i)
        status, code, scanned = self._scan(g, k, frozenset(common))
        nodes += scanned
        if status == "bad":
            return self._verdict(g, k, Status.NOT_CHOOSABLE, ListAssignment.of(code), nodes, start)
        if status == "budget":
            return self._verdict(g, k, Status.INCONCLUSIVE, nodes=nodes, start=start)
        return self._verdict(g, k, Status.CHOOSABLE, nodes=nodes, start=start)

    def _scan(self, g, k, common):
        cfg = self.cfg
        args = (g, k, cfg.prune, common, cfg.budget_nodes, cfg.budget_secs, cfg.colour_check)
        if cfg.jobs <= 1:
            return _scan_shard(*args, (0, 1))
        with ProcessPoolExecutor(max_workers=cfg.jobs) as pool:
            results = list(pool.map(_scan_shard, *zip(*[args + ((i, cfg.jobs),) for i in range(cfg.jobs)])))
        nodes = sum(r[2] for r in results)
        bad = sorted(r[1] for r in results if r[0] == "bad")
        if bad:
            return "bad", bad[0], nodes
        if any(r[0] == "budget" for r in results):
            return "budget", None, nodes
        return "clean", None, nodes


def is_k_choosable(g: PartStructure, k: int | None = None, cfg: SearchConfig | None = None) -> ChoosabilityVerdict:
    """Decide k-choosability of the complete multipartite shape ``g``.

    Exact whichever prunings are enabled; a budget overrun yields an
    INCONCLUSIVE verdict.
    """
    if cfg is None:
        cfg = SearchConfig(k if k is not None else g.k)
    elif k is not None and k != cfg.k:
        cfg = cfg.with_k(k)
    return _Decider(cfg).decide(g, cfg.k)


def choice_number(g: PartStructure, cfg: SearchConfig | None = None) -> int | None:
    """Least k with ``g`` k-choosable, starting from the part count; ``None`` if inconclusive."""
    k = max(1, g.k)
    cfg = cfg or SearchConfig(k)
    while True:
        verdict = is_k_choosable(g, k, cfg)
        if verdict.status is Status.INCONCLUSIVE:
            return None
        if verdict.status is Status.CHOOSABLE:
            return k
        k += 1


# --- verification sweep ----------------------------------------------------


def shapes_with_parts(k: int, max_vertices: int) -> list[PartStructure]:
    """All shapes with exactly ``k`` parts and at most ``max_vertices`` vertices, sorted."""
    out = []

    def rec(remaining, parts_left, cap, acc):
        if parts_left == 0:
            if remaining == 0:
                out.append(PartStructure(tuple(acc)))
            return
        for s in range(min(cap, remaining - (parts_left - 1)), 0, -1):
            rec(remaining - s, parts_left - 1, s, acc + [s])

    for n in range(k, max_vertices + 1):
        rec(n, k, n, [])
    return sorted(out, key=lambda s: s.sizes)


def exceptional_shapes(k: int) -> set[PartStructure]:
    """Non-k-choosable k-partite shapes on 2k+2 vertices (even k only)."""
    if k % 2:
        return set()
    return {
        PartStructure((4,) + (2,) * (k - 1)),
        PartStructure((3,) * (k // 2 + 1) + (1,) * (k // 2 - 1)),
    }


@dataclass
class SweepRow:
    shape: PartStructure
    verdict: ChoosabilityVerdict
    witness_path: str | None = None


@dataclass
class SweepReport:
    k: int
    rows: list[SweepRow]
    expected: set[PartStructure]

    @property
    def non_choosable(self) -> set[PartStructure]:
        return {r.shape for r in self.rows if r.verdict.status is Status.NOT_CHOOSABLE}

    @property
    def inconclusive(self) -> list[PartStructure]:
        return [r.shape for r in self.rows if r.verdict.status is Status.INCONCLUSIVE]

    @property
    def outcome(self) -> str:
        if self.non_choosable - self.expected or (not self.inconclusive and self.non_choosable != self.expected):
            return "FAIL"
        if self.inconclusive:
            return "INCONCLUSIVE"
        return "PASS"


def verify_theorem(k: int, cfg: SearchConfig | None = None, deep: bool = False) -> SweepReport:
    """Decide k-choosability of every k-partite shape on at most 2k+2 vertices.

    PASS iff the non-choosable shapes are exactly the two even-k exceptions.
    Sweeps with k >= 3 are long-running and need ``deep=True``.
    """
    if k < 2:
        raise ValueError("verification needs k >= 2")
    if k >= 3 and not deep:
        raise ValueError("sweeps with k >= 3 are gated behind deep=True")
    cfg = (cfg or SearchConfig(k)).with_k(k)
    rows = []
    shapes = shapes_with_parts(k, 2 * k + 2)
    decider = _Decider(cfg)
    for shape in shapes:
        # budgets apply per scanned shape; sub-shape verdicts are shared
        rows.append(SweepRow(shape, decider.decide(shape, k)))
    return SweepReport(k, rows, exceptional_shapes(k))
