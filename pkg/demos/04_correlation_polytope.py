"""The classical correlation polytope is a cross-polytope.

Every facet inequality takes the value exactly +-1 on every classical
vertex.  At n=2 the 16 facets split into 8 trivial ones (box constraints)
and the 8 CHSH variants.
"""
from wernerwolf.boolfn import all_sign_functions, trivial_facet_counts
from wernerwolf.polytope import chsh_facets_n2, enumerate_vertices, facet_value, membership

for n in (1, 2, 3):
    enum = enumerate_vertices(n)
    values = {facet_value(f, v) for f in all_sign_functions(n) for v in enum.vertices}
    print(f"n={n}: {enum.assignments} assignments, {enum.distinct_vectors} distinct vertices, "
          f"facet values {sorted(values)}")

res = chsh_facets_n2()
print(f"\nn=2: {res.total} facets, {len(res.trivial)} trivial, {len(res.chsh)} CHSH-type")
print("CHSH-type facets:", sorted(f.to_hex() for f in res.chsh))
print("one symmetry orbit:", res.in_chsh_orbit, "| equals setting/sign relabellings:", res.matches_relabel_family)

print("\ntrivial-facet bookkeeping at n=3:", trivial_facet_counts(3))

r = 2**-0.5
print("\nTsirelson point inside the classical polytope?", membership([r, r, r, -r]))
a, b = enumerate_vertices(2).vertices[0].vector, enumerate_vertices(2).vertices[5].vector
print("midpoint of two vertices inside?", membership(list((a + b) / 2)))
