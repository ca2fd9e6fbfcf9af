"""Spectral points of graphs, probabilistic refinements and convex-corner entropy."""

__version__ = "0.1.0"

from .kernels import BACKEND
from .graph import (Graph, GraphSizeError, VertexMap, complement, complete, complete_bipartite, cycle,
                    disjoint_union, edgeless, exists_cohomomorphism, from_graph6, is_cohomomorphism, join,
                    null_graph, path, petersen, strong_power, strong_product, to_graph6, transitive_cover)
from .prob_types import Distribution, NType, enumerate_ntypes, shannon_entropy, type_class, type_graph
from .parameters import (ParamValue, SpectralPoint, fractional_clique_cover, independence_number,
                         lovasz_theta, shannon_capacity_lower, spectral_point)
from .corners import (GeneratorCorner, OracleCorner, antiblocker, corner_from_entropy, direct_sum, entropy,
                      hausdorff_distance, pullback, tensor_product, theta_body, vertex_packing)
from .refinement import (RefinementEstimate, corner_refinement, combine_lambda, complementary_refinement,
                         fekete_estimate, reproduce_incomparable_example)
from .verify import PropertyCheck, run_suite
