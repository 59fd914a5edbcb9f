"""How many fault sources does it take to break a mesh?

Classic connectivity removes chosen vertices; neighbor faults remove a
chosen vertex and everything around it.  This script finds the exact
neighbor-fault threshold by exhaustive search, then shows the matching
constructive witness.

Run: python demos/03_fault_thresholds.py
"""
from torus_nbc import (
    AliveGraph,
    Mesh,
    classify,
    connected_components,
    kappa_nb_exact,
    survival_graph,
    upper_bound_witness,
    vertex_connectivity,
)

for dims in [(3, 3), (3, 4), (4, 4), (3, 3, 3), (3, 4, 5)]:
    m = Mesh(dims)
    kappa = vertex_connectivity(AliveGraph.full(m))
    result = kappa_nb_exact(m)
    print(f"{m}: connectivity {kappa} (= 2n), neighbor-fault threshold "
          f"{result.value} (= n), {result.subsets_examined} source sets examined")
    print(f"   least witness: {list(result.witness)}")

# what the witness does to the mesh
m = Mesh((3, 4, 5))
witness = upper_bound_witness(m)
g = survival_graph(m, witness)
print(f"\nconstructed witness for {m}: {list(witness)}")
print(f"faulty vertices: {g.faults.closed_count} of {m.vertex_count}")
print(f"survival graph state: {classify(g).token}")
comps = connected_components(g)
sizes = sorted(len(c) for c in comps)
print(f"components: {len(comps)} with sizes {sizes}")
zero = (0,) * m.n
print(f"the all-zeros vertex is "
      + ("isolated" if (zero,) in comps else "not isolated"))

# a single fault source is never enough in two or more dimensions
one = survival_graph(m, [(1, 1, 1)])
print(f"\none source at (1,1,1): state {classify(one).token} "
      f"(the mesh absorbs any single neighborhood loss)")
