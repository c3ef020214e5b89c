# %% [markdown]
# # Filling-volume upper bounds
# Optimal homologous chains with exact LP (Q), coset search (Z/2) and
# lattice branch and bound (Z), on cone and nerve ambients in sup-norm space.
# All values with Euclidean weights are upper bounds.

# %%
import math
from fractions import Fraction

from fillings import fixtures
from fillings.complex import ChainVector, Ring
from fillings.fillrad import filling_radius
from fillings.fillvol import Cone, NerveAtScale, WeightedComplex, cone_fill, fillvol_upper, optimal_chain

octa = fixtures.octahedron().complex
equator = ChainVector(1, Ring.Z, {(0, 2): 1, (1, 2): -1, (1, 3): 1, (0, 3): -1})
for ring in Ring:
    print(ring.name, optimal_chain(equator.with_ring(ring), WeightedComplex.unit(octa, 2), ring).value)

# %%
# cheaper upper faces: the LP picks the upper hemisphere
w = {s: Fraction(1, 2) if 4 in s else 1 for s in octa.n_simplices(2)}
cert = optimal_chain(equator.with_ring(Ring.Q), WeightedComplex(octa, 2, w), "q")
print(cert.value, sorted(cert.chain.coefficients))

# %%
# cone from the box centre versus the optimum in the same complex
wc, cone = cone_fill(equator, fixtures.OCTAHEDRON_COORDS)
print(cone.value, optimal_chain(equator, wc, "z").value)

# %%
# the 48-cycle of length 2 pi in nerves of growing scale
mc = fixtures.cycle(48, 2 * math.pi)
death = filling_radius(mc, "q").death_scale
print("cone:", fillvol_upper(mc, "q", Cone()).value)
for hop in (16, 17, 18):
    print(hop, fillvol_upper(mc, "q", NerveAtScale(hop * 2 * math.pi / 48 * (1 + 1e-12))).value)
print(fillvol_upper(mc, "q").to_json()["mode"])
