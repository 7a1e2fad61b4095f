"""Check the demand conditions on a small classified instance and colour it.

Run: python3 demos/lemma_colouring.py
"""

import random

from choosy.certificates import ClassifiedInstance, check_f_conditions, colour_via_lemma
from choosy.model import ListAssignment, PartStructure, validate_colouring

g = PartStructure((3, 2, 1))
# vertices 0-2 form a triple, 3-4 a pair, 5 is a singleton placed in A
demands = {0: 3, 1: 3, 2: 3, 3: 4, 4: 4, 5: 3}
ci = ClassifiedInstance.from_shape(g, [2], [], demands)
print("conditions:", "hold" if check_f_conditions(ci) else check_f_conditions(ci).detail)

rng = random.Random(1)
lists = {v: frozenset(rng.sample(range(8), demands[v])) for v in range(g.n)}
trace: list[str] = []
colouring = colour_via_lemma(ci, lists, trace)
for step in trace:
    print("  ", step)
L = ListAssignment.of([lists[v] for v in range(g.n)])
print("colouring:", colouring, validate_colouring(g, L, colouring).kind.name.lower())
