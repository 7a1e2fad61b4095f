"""Walk the three-step construction and the matching completion on one instance.

Run: python3 demos/frequent_pipeline.py
"""

from choosy.heuristic import run_pipeline
from choosy.model import ListAssignment, PartStructure

g = PartStructure((3, 1, 1))
L = ListAssignment.of([{0, 1}, {0, 2}, {1, 2}, {0, 3}, {0, 3}])
result = run_pipeline(g, L)
print("tags:", {c: t.value for c, t in sorted(result.report.tags.items())})
print("frequent colours used:", sorted(result.frequent_used))
print("step 1:", result.step1.trace())
print("step 2:", result.step2.trace())
if result.failed:
    print("step 3 failed")
else:
    print("near-acceptable:", result.near_acceptable)
    c = result.completion
    print("completion:", c.colouring if c.solved else c.outcome.format())
