# %% [markdown]
# # Extending maps into sup-norm space without raising dilation
# F_x(v) = min_y ( f_y(v) + dil(f, y) d(x, y) ) keeps both the global and the
# per-point dilation of f.

# %%
import numpy as np

from fillings import fixtures
from fillings.lipschitz import PartialMap, coarse_extend, dilation, extension_report, mcshane_extend
from fillings.metric import kuratowski_embed, path_metric

X = path_metric(fixtures.cycle(8))
rng = np.random.default_rng(0)
Y = (0, 1, 5)
f = rng.integers(0, 6, size=(3, 4)).astype(object)
pm = PartialMap(X, Y, f)
print("dil(f) =", dilation(pm).global_, dilation(pm).per_point)

# %%
F = mcshane_extend(pm)
print(F)
rep = extension_report(pm)
print("extends:", rep["extends"] == 0, "global:", rep["global_equal"], "per point:", rep["per_point_equal"])

# %%
# the global constant gives a larger extension, equal on Y
G = coarse_extend(pm)
print((F <= G).all(), (F[list(Y)] == G[list(Y)]).all())

# %%
# restricting the Kuratowski map gives per-point dilation 1
k = kuratowski_embed(X).coordinates
print(dilation(PartialMap(X, (2, 3, 7), k[[2, 3, 7]])).per_point)
