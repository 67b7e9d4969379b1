"""Alpha-Delaunay complexes, persistence, and minimal spanning acycles."""

__version__ = "0.1.0"

from .complexes import (ComplexError, FilteredComplex, betti, parse_complex,
                        replay, serialize_complex, symmetric_difference)
from .geometry import (Ball, Point, Triangulation, alpha_complex, alpha_weight,
                       circumsphere, delaunay, delaunay_cech_complex,
                       is_general_position, min_enclosing_ball,
                       read_points_csv, write_points_csv)
from .msa import (AddOneCost, ContractError, MsaResult, PhiSpec, add_one_cost,
                  add_one_simplex_check, decompose_add_one, lifetime_sum,
                  minimal_spanning_acycle, stability_check, statistics)
from .persistence import (PersistencePairing, diagram, diagram_csv, label_of,
                          reduce)
from .predicates import DegeneracyError
from .stochastic import (ConfigSpec, Window, build_config, origin_point,
                         rng_stream, sample_config, sample_poisson)
