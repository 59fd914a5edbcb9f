"""A walking tour of mesh construction and coordinate arithmetic.

Run: python demos/01_mesh_tour.py
"""
from torus_nbc import Mesh, parse_mesh

m = parse_mesh("3x4x5")
print(f"{m}  ->  {m.vertex_count} vertices, degree {m.degree}, n = {m.n}")

v = (2, 0, 4)
print(f"\nvertex {v} has flat index {m.encode(v)}")
print(f"flat index 37 decodes to {m.decode(37)}")
print(f"neighbors of {v}:")
for w in sorted(m.neighbors(v), key=m.encode):
    print(f"   {w}  (flat {m.encode(w)})")

# extent-2 axes wrap to a single neighbor
thin = Mesh((3, 2))
print(f"\n{thin} has degree {thin.degree}: +1 and -1 along the extent-2 "
      f"axis meet at the same vertex")
print(f"neighbors of (0, 0): {sorted(thin.neighbors((0, 0)))}")

# layers along an axis
view = m.partition(2)
print(f"\npartition of {m} along axis 2: {view.layer_count} layers, "
      f"each a copy of {view.sub_mesh}")
layer0 = [m.decode(int(f)) for f in view.layer(0)]
print(f"layer 0 starts with {layer0[:5]} ...")
inner = view.project((2, 0, 4))
print(f"(2, 0, 4) sits in layer {view.layer_of((2, 0, 4))} "
      f"at sub-mesh position {inner}")
print(f"its counterpart in layer 1 is {view.lift(inner, 1)}")
print(f"outer neighbor of (2, 0, 4) toward layer 1: "
      f"{m.outer_neighbor((2, 0, 4), 2, 1)}")
