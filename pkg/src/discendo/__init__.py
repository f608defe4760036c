"""Compact endomorphisms of H^infinity on the disc: geometry, symbols, spectra."""
from .corona import (BoundaryNet, CompositionInDisc, GeneralizedComposition, InterpolatingSequence,
                     RankOne, apply_endomorphism, interpolating_check, iterate_endomorphism,
                     lm_surrogate, psi_limit, psi_stage, verify_example_a, verify_example_b)
from .errors import (ConvergenceError, DomainError, MapParseError, RangeError, SingularityError,
                     TestFunctionError)
from .fixed_point import FixedPointResult, RangeVerdict, compact_range_check, find_fixed_point
from .geometry import (DiscPoint, MoebiusShift, hyperbolic_distance, moebius_derivative,
                       moebius_eval, moebius_inverse, pseudo_distance, same_part)
from .maps import (Affine, BlaschkeProduct, Compose, Constant, Identity, MapExpr, MoebiusInverse,
                   MoebiusMap, Monomial, PowerSeries, Rotation, Scale, Tau, derivative, evaluate,
                   series_multiply, sup_norm_estimate, taylor)
from .parsing import parse_map
from .spectrum import (CompositionMatrix, SpectrumSet, ab_ba_check, build_truncation,
                       compare_spectra, conjugate_to_origin, eigenvalues, theoretical_spectrum)

__version__ = "0.1.0"
