# %% [markdown]
# # Extension axiom
# Attaching lower-dimensional cells through a long collar, cylinder and round
# cap is a strong isometry on V, and the filling radius does not change.

# %%
from fillings import fixtures
from fillings.errors import RTooSmall
from fillings.maps import attach_cell, extension_experiment
from fillings.metric import path_metric

V = fixtures.torus(4, 4)
ext = attach_cell(V, 1, (0, 10), R=1, mesh=2)
print(ext.result.complex.f_vector(), "gap", ext.strong_isometry_gap)
print(extension_experiment(ext, "z2").to_csv())

# %%
# too small a radius: the arc would shorten d(0, 10)
try:
    attach_cell(V, 1, (0, 10), R=0.01)
except RTooSmall as exc:
    print(exc)

# %%
# a 2-cell on the boundary of the 4-simplex (a 3-sphere)
ext2 = attach_cell(fixtures.s3_boundary(), 2, (0, 1, 2), R=1, mesh=1)
print(ext2.result.complex.f_vector(), ext2.strong_isometry_gap)
print(extension_experiment(ext2, "z2").to_csv())
