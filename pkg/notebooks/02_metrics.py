# %% [markdown]
# # Path metrics, subdivision and the Kuratowski embedding

# %%
import numpy as np

from fillings import fixtures
from fillings.metric import kuratowski_embed, path_metric, scale_metric, subdivide, sup_distances

c4 = fixtures.cycle(4)
d = path_metric(c4)
print(d.distances)
print(path_metric(scale_metric(c4, 2)).distances)

# %%
# subdividing a cycle keeps the distances between the original vertices
c3 = fixtures.cycle(3, 1)
for rounds in range(4):
    mc = subdivide(c3, rounds)
    print(rounds, mc.complex.vertex_count, mc.total_length(),
          path_metric(mc).distances[:3, :3].tolist())

# %%
# v -> d(v, .) is an isometry into sup-norm space, exactly
emb = kuratowski_embed(d)
print(emb.coordinates)
print(np.array_equal(sup_distances(emb.coordinates), d.distances))

# %%
# round fixtures carry great-circle edge lengths
s = fixtures.sphere2(1)
print(s.complex.f_vector(), min(s.edge_lengths.values()), max(s.edge_lengths.values()))
