"""Exact-arithmetic fractal geometry on the line.

Constructs generalised Cantor sets and pullback attractors of
non-autonomous iterated function systems of contracting similarities,
computes exact covering and packing numbers of their prefractals,
estimates box-counting and Assouad-type dimensions, and certifies
equi-homogeneity and Ahlfors-David-style regularity at desk scale.
"""

from .cantor import (CantorSpec, PiProduct, cantor_box_sequence,
                     cantor_prefractal, cantor_to_ifs, constant_spec,
                     dyadic_block_spec, explicit_spec, gen_step, pi_product)
from .core import (ExactScalar, Interval, IntervalSet, PointSet, as_scalar,
                   dyadic_gap_points, format_scalar, hausdorff_distance,
                   hausdorff_semidistance, interval_set_normalize,
                   inverse_power_points, point_set, unit_interval)
from .covers import (CoverCount, covering_number, covering_number_bruteforce,
                     local_covering_number, packing_number,
                     verify_cover_packing_sandwich, verify_refinement)
from .dims import (DimensionReport, LocalCoverProfile, ScaleGrid,
                   assouad_estimate, attainment_check, box_counts,
                   box_dimension_estimate, dimension_chain_check,
                   dimension_report, local_cover_profile,
                   lower_assouad_estimate, two_point_slopes)
from .equihom import (EquihomReport, RegularityReport,
                      ahlfors_regularity_check, equihom_certify,
                      equihom_singlepoint_assouad)
from .ifs import (IndexedSystem, MoranCertificate, OpenIntervalSet,
                  PullbackResult, Similarity1D, Word, apply_level,
                  attractor_seed_radius, averaged_moran_check, compose_chain,
                  cylinder_count_bounds, cylinder_decomposition, fixed_point,
                  moran_exponent, moran_level_check, natural_measure_weight,
                  pullback_approximation, verify_mosc, word_map)

__version__ = "0.1.0"
