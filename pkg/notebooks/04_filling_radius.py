# %% [markdown]
# # Filling radius
# FillRad is half the first distance s at which the fundamental cycle bounds
# in the flag complex of {d <= s} (the nerve of sup-norm balls around the
# Kuratowski image).

# %%
import math

from fillings import fixtures
from fillings.fillrad import box_nerve, filling_radius, nerve_complex
from fillings.metric import kuratowski_embed, path_metric

cert = filling_radius(fixtures.cycle(48, 2 * math.pi), "z2")
print(cert.radius, math.pi / 3)
print(cert.to_csv())

# %%
# the nerve of the boxes is the flag complex of the distance graph
fms = path_metric(fixtures.torus7())
pts = kuratowski_embed(fms).coordinates
print(all(box_nerve(pts, s / 2, 3) == nerve_complex(fms, s, 3) for s in fms.critical_scales()))

# %%
# convergence on cycles of length 2 pi
for n in (6, 12, 24, 48, 96):
    r = filling_radius(fixtures.cycle(n, 2 * math.pi), "z2").radius
    print(n, r, abs(r - math.pi / 3))

# %%
# round targets: 1/2 arccos(-1/3) for the sphere, pi/6 for RP2
print("sphere2(0), Q:", filling_radius(fixtures.sphere2(0), "q").radius, 0.5 * math.acos(-1 / 3))
for level in (0, 1):
    space = fixtures.geodesic_space(f"rp2:{level}")
    r = filling_radius(space, "z2", complex_=fixtures.rp2(level).complex).radius
    print(f"rp2({level}), geodesic:", r, math.pi / 6)

# %%
# rings: a Z filling reduces to Q and Z/2 fillings
for name in ("torus7", "octahedron", "s3_boundary"):
    mc = fixtures.generate_fixture(name)
    print(name, {ring: filling_radius(mc, ring).radius for ring in ("z", "q", "z2")})
