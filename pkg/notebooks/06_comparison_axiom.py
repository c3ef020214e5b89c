# %% [markdown]
# # Comparison axiom
# For an (n,1)-monotone map f: V -> W of unit degree and the metric
# g1_t = f*g2 + t^2 g1, FillRad(V, g1_t) >= FillRad(W, g2), while the volume
# excess Vol(V, g1_t) - Vol(W, g2) shrinks with t.

# %%
from fractions import Fraction

from fillings import fixtures
from fillings.errors import HypothesisFailed
from fillings.maps import SimplicialMap, check_monotone, comparison_experiment, degree

T = fixtures.torus(4, 4)
f = SimplicialMap(T.complex, T.complex, fixtures.torus_automorphism(4, 4, seed=3))
rep = check_monotone(f, 2, 1)
print(rep.is_n1_monotone, rep.degree)

# %%
report = comparison_experiment(f, T, T, [1, Fraction(1, 2), Fraction(1, 4), Fraction(1, 8)])
print(report.to_csv())
print([float(r.excess) for r in report.rows])

# %%
# a double cover has degree 2 and is not (1,1)-monotone
cover = SimplicialMap(fixtures.cycle(6).complex, fixtures.cycle(3).complex, [i % 3 for i in range(6)])
print(check_monotone(cover, 1, 2).is_nd_monotone, degree(cover, "z"))
try:
    comparison_experiment(cover, fixtures.cycle(3), fixtures.cycle(6), [1], ring="z")
except HypothesisFailed as exc:
    print("rejected:", exc)
