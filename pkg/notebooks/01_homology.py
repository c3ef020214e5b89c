# %% [markdown]
# # Complexes, chains and homology
# Boundary matrices, homology over Z, Q and Z/2, fundamental cycles.

# %%
from fillings import fixtures
from fillings.complex import (ChainVector, Ring, boundary_matrix, fundamental_cycle,
                              homology_summary, solve_boundary, validate_complex)

# a triangle given by its top simplex only; missing faces are closed in
tri = validate_complex({"vertex_count": 3, "simplices": [[0, 1, 2]]}, close=True)
print(tri.f_vector(), "inferred:", tri.inferred)
print(boundary_matrix(tri, 2, "z"))  # rows (0,1), (0,2), (1,2)

# %%
# torsion shows up over Z only; Z/2 sees it as an extra class in two degrees
rp2 = fixtures.rp2(0).complex
for ring in Ring:
    print(ring.name, homology_summary(rp2, ring))

# %%
# the Klein bottle has a fundamental class over Z/2 only
klein = fixtures.klein_bottle().complex
print("Z :", fundamental_cycle(klein, "z"))
print("Z2:", len(fundamental_cycle(klein, "z2")), "triangles")

# %%
# the sphere's class does not bound in the sphere, but does in the cone over it
sphere = fixtures.boundary_of_simplex(2)
z = fundamental_cycle(sphere.complex, "z")
print(z)
print("bounds in S2:", solve_boundary(z, sphere.complex) is not None)
coned = fixtures.cone(sphere).complex
print("filling in the cone:", solve_boundary(z, coned))
