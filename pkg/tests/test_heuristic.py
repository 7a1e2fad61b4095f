import itertools
import random

import pytest

from choosy.heuristic import (
    FrequencyType,
    PseudoKind,
    classify_pseudo,
    complete_near_acceptable,
    frequent_colours,
    relocate,
    run_pipeline,
    step1_partial,
    step2_frequent_blocks,
    step3_inject,
)
from choosy.model import ColouringKind, ListAssignment, MalformedInput, PartStructure, validate_colouring
from choosy.search import BudgetExhausted
from choosy.solver import find_colouring
from oracles import brute_step1


def test_type1_threshold():
    g = PartStructure((2, 2, 1))  # three parts, so type 1 needs five lists
    L = ListAssignment.of([{9, 0}, {9, 1}, {9, 2}, {9, 3}, {9, 4}])
    assert frequent_colours(g, L).tags[9] is FrequencyType.TYPE1


def test_type2_threshold():
    g = PartStructure((2, 1, 1))
    L = ListAssignment.of([{0, 1}, {0, 1}, {0}, {0}])  # surplus 4 - 2 = 2
    report = frequent_colours(g, L)
    assert report.surplus == 2
    assert report.tags[0] is FrequencyType.TYPE2
    assert report.tags[1] is FrequencyType.NOT_FREQUENT


def test_type3():
    g = PartStructure((2, 2, 1, 1))
    L = ListAssignment.of([{0, 1}, {0, 2}, {1, 2}, {0, 1}, {2}, {2}])  # |T| = 2 = surplus - 1
    report = frequent_colours(g, L)
    assert report.surplus == 3
    assert report.tags[2] is FrequencyType.TYPE3
    assert report.tags[0] is FrequencyType.NOT_FREQUENT


def test_no_singletons_no_type2_or_type3():
    g = PartStructure((3, 3))
    L = ListAssignment.of([{0, 1}] * 6)
    report = frequent_colours(g, L)
    assert report.surplus == 4
    assert set(report.tags.values()) == {FrequencyType.TYPE1}
    L = ListAssignment.of([{0, 1}, {2, 3}, {4, 5}, {6, 7}, {0, 2}, {1, 3}])  # surplus <= 0
    assert frequent_colours(g, L).frequent == frozenset()
    assert frequent_colours(g, L).warning is not None


def test_classify_kinds():
    g = PartStructure((1, 1, 1))
    L = ListAssignment.of([{0}, {1}, {2}])
    assert classify_pseudo(g, L, {0: 0, 1: 1, 2: 2}) is PseudoKind.PROPER
    assert classify_pseudo(g, L, {0: 1, 1: 0, 2: 2}, frozenset({0, 1})) is PseudoKind.NEAR_ACCEPTABLE
    assert classify_pseudo(g, L, {0: 1, 1: 0, 2: 2}, frozenset({0})) is PseudoKind.PSEUDO_ONLY
    assert classify_pseudo(g, L, {0: 0, 1: 0, 2: 2}) is PseudoKind.INVALID


def test_step1_all_frequent():
    g = PartStructure((2, 1))
    L = ListAssignment.of([{0}, {1}, {0, 1}])
    state = step1_partial(g, L, frozenset({0, 1}))
    assert state.f1 == {} and state.tau1 == 0


def test_step1_prefers_more_vertices():
    g = PartStructure((2, 1))
    L = ListAssignment.of([{0, 5}, {0, 6}, {0, 7}])
    state = step1_partial(g, L, frozenset({5, 6, 7}))
    assert state.f1 == {0: 0, 1: 0} and state.tau1 == 2


def test_step1_balances_ties():
    g = PartStructure((2, 2))
    L = ListAssignment.of([{0, 9}, {1, 9}, {0, 9}, {1, 9}])
    state = step1_partial(g, L, frozenset({9}))
    assert (state.tau1, state.tau2) == (2, 2)
    assert [len(s) for s in state.coloured_parts] == [1, 1]


def test_step1_budget():
    g = PartStructure((2, 2, 2))
    L = ListAssignment.of([{0, 1, 2}] * 6)
    with pytest.raises(BudgetExhausted):
        step1_partial(g, L, frozenset(), budget_nodes=2)


def test_step1_matches_brute_force_sample():
    rng = random.Random(0)
    for _ in range(150):
        g = PartStructure.of(rng.randint(1, 3) for _ in range(rng.randint(1, 3)))
        L = ListAssignment.of([rng.sample(range(5), rng.randint(1, 3)) for _ in range(g.n)])
        F = frozenset(rng.sample(sorted(L.universe), rng.randint(0, len(L.universe))))
        state = step1_partial(g, L, F)
        assert (state.tau1, -state.tau2) == brute_step1(g, L, F)


def test_movable_classes_and_load_bound():
    rng = random.Random(5)
    for _ in range(150):
        g = PartStructure.of(rng.randint(1, 3) for _ in range(rng.randint(2, 3)))
        L = ListAssignment.of([rng.sample(range(5), 2) for _ in range(g.n)])
        F = frequent_colours(g, L).frequent
        state = step1_partial(g, L, F)
        for c in L.universe - F:
            for i in range(g.k):
                assert state.m(i, c) <= state.class_size(c)
                if state.movable(c, i) and state.class_size(c):
                    moved = relocate(g, L, state.f1, [(c, i)])
                    # a move keeps the count and, at an optimum, cannot improve the balance
                    counts = [sum(1 for v in p if v in moved) for p in g.parts]
                    assert len(moved) == state.tau1
                    assert sum(x * x for x in counts) >= state.tau2


def test_relocate_order():
    g = PartStructure((2, 1))
    L = ListAssignment.of([{0, 1}, {1}, {0, 1}])
    moved = relocate(g, L, {2: 0, 0: 1, 1: 1}, [(0, 0), (1, 1)])
    assert moved == {0: 0, 2: 1}
    with pytest.raises(ValueError):
        relocate(g, L, {}, [(0, 0), (0, 1)])


def frequent_only(g, L, F=None):
    # with every colour frequent, step 1 colours nothing and all parts stay blocks
    return step2_frequent_blocks(step1_partial(g, L, L.universe if F is None else F))


def test_step2_colours_a_block():
    g = PartStructure((2, 1))
    L = ListAssignment.of([{0, 1}, {0, 2}, {3}])
    state = frequent_only(g, L)
    assert state.i0 == 2 and state.colouring == {0: 0, 1: 0, 2: 3}


def test_step2_nothing_common():
    g = PartStructure((2, 2))
    L = ListAssignment.of([{0}, {1}, {2}, {3}])
    state = frequent_only(g, L, frozenset({0, 1, 2, 3}))
    assert state.i0 == 0 and state.V2 == frozenset()


def brute_i0(blocks, common):
    """Try every order compatible with non-increasing block sizes and every colour choice."""
    best = 0
    for order in itertools.permutations(range(len(blocks))):
        sizes = [len(blocks[i]) for i in order]
        if sizes != sorted(sizes, reverse=True):
            continue

        def extend(pos, used):
            if pos == len(order) or not blocks[order[pos]]:
                return pos
            options = common[order[pos]] - used
            return max([extend(pos + 1, used | {c}) for c in options], default=pos)

        best = max(best, extend(0, frozenset()))
    return best


def test_step2_picks_order_maximising_blocks():
    # three equal blocks: block 0 has no common colour, so it must go last
    g = PartStructure((2, 2, 2))
    L = ListAssignment.of([{0, 2}, {1, 3}, {0, 4}, {0, 5}, {1, 4}, {1, 5}])
    state = frequent_only(g, L)
    blocks = g.parts
    common = [L.universe.intersection(*(L[v] for v in b)) for b in blocks]
    assert brute_i0(blocks, common) == 2
    assert state.i0 == 2
    assert state.order[-1] == 0


def test_step2_picks_colour_maximising_blocks():
    g = PartStructure((2, 2))
    # taking the lowest colour for the first block would starve the second
    L = ListAssignment.of([{0, 1}, {0, 1}, {0, 5}, {0, 6}])
    state = frequent_only(g, L)
    assert state.i0 == 2 and state.F1 == (1, 0)


def test_step3_nothing_left():
    g = PartStructure((1, 1))
    L = ListAssignment.of([{0}, {1}])
    state = frequent_only(g, L, frozenset())
    assert state.V3 == frozenset()
    assert step3_inject(state) == {0: 0, 1: 1}


def test_step3_exact_injection():
    g = PartStructure((1, 1))
    L = ListAssignment.of([{0, 1}, {0, 1}])
    state = frequent_only(g, L)
    f = step3_inject(state)
    assert sorted(f.values()) == [0, 1]


def test_step3_fail():
    # the big block has no common colour, so nothing is coloured before step 3
    g = PartStructure((3, 1))
    L = ListAssignment.of([{0}, {1}, {0, 1}, {0, 1}])
    state = frequent_only(g, L)
    assert state.i0 == 0
    assert len(state.V3) > len(state.F2)
    assert step3_inject(state) is None


def test_complete_proper_unchanged():
    g = PartStructure((1, 1))
    L = ListAssignment.of([{0}, {1}])
    assert complete_near_acceptable(g, L, {0: 0, 1: 1}).colouring == {0: 0, 1: 1}


def test_complete_identical_singleton_lists_gives_violator():
    g = PartStructure((1, 1, 1))
    L = ListAssignment.of([{0}, {0}, {1, 2}])
    result = complete_near_acceptable(g, L, {0: 0, 1: 1, 2: 2})
    assert not result.solved
    assert {0, 1} <= result.outcome.violator


def test_complete_rejects_pseudo_only():
    g = PartStructure((1, 1))
    L = ListAssignment.of([{0}, {1}])
    with pytest.raises(MalformedInput):
        complete_near_acceptable(g, L, {0: 1, 1: 0}, frozenset())


def test_complete_cross_checked_on_random_instances():
    rng = random.Random(7)
    solved = 0
    for _ in range(300):
        g = PartStructure.of(rng.randint(1, 3) for _ in range(rng.randint(2, 4)))
        L = ListAssignment.of([rng.sample(range(max(3, g.n)), rng.randint(1, 3)) for _ in range(g.n)])
        result = run_pipeline(g, L, frequent_colours(g, L).frequent)
        if result.failed:
            continue
        kind = classify_pseudo(g, L, result.near_acceptable, result.report.frequent)
        assert kind in (PseudoKind.PROPER, PseudoKind.NEAR_ACCEPTABLE)
        if result.completion.solved:
            solved += 1
            assert validate_colouring(g, L, result.completion.colouring).kind is ColouringKind.PROPER
        else:
            # a violator may only be reported when the quotient has no covering matching
            assert result.completion.outcome.deficiency > 0
        if result.completion.solved:
            assert find_colouring(g, L) is not None
    assert solved > 20
