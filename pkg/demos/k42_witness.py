"""Search for a bad 2-list assignment on K_{4,2} and inspect it.

Run: python3 demos/k42_witness.py
"""

from choosy.model import PartStructure
from choosy.search import is_k_choosable
from choosy.solver import matching_or_violator, singleton_quotient
from choosy.textio import format_instance

g = PartStructure((4, 2))
verdict = is_k_choosable(g, 2)
print(f"K_(4,2) 2-choosable? {verdict.status.value} after {verdict.nodes_explored} nodes")

witness = verdict.witness.representative
print(format_instance(g, witness), end="")

# no colouring exists, and already the identity quotient has no covering matching
outcome = matching_or_violator(singleton_quotient(g, witness).incidence())
print("identity quotient:", outcome.format())
