"""Filling radius and filling volume of finite metric simplicial complexes."""

from .complex import (ChainVector, HomologySummary, Ring, SimplicialComplex, fundamental_cycle,
                      homology_summary, solve_boundary, validate_complex)
from .fillrad import FillRadCertificate, filling_radius, nerve_complex
from .fillvol import (Cone, FillVolCertificate, NerveAtScale, WeightedComplex,
                      affine_simplex_volume, cone_fill, fillvol_upper, optimal_chain)
from .fixtures import generate_fixture
from .lipschitz import PartialMap, coarse_extend, dilation, extension_report, mcshane_extend
from .maps import (ExtensionComplex, SimplicialMap, attach_cell, check_monotone,
                   comparison_experiment, degree, extension_experiment, pullback_interp_metric,
                   simplex_volume_from_lengths)
from .metric import (FiniteMetricSpace, MetricComplex, kuratowski_embed, path_metric,
                     scale_metric, subdivide)

__version__ = "0.1.0"
