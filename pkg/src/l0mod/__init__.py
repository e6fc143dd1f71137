"""Exact computer algebra for regular L0-modules over finite probability spaces."""

from .certificate import Certificate
from .errors import (DimensionError, EmptyFamilyError, L0Error, NonInvertibleError, PartitionError,
                     PreconditionError, SchemaError, SpaceMismatchError)
from .ftag import (AffineDecomposition, TheoremReport, affine_decompose, counterexample_gallery,
                   ftag_check, fuzz, has_free_rank2, line_to_line_check, run_gallery)
from .geometry import (Line, Segment, line_image_equals, line_membership, segment_image_equals,
                       segment_membership)
from .maps import (Affine, Atomwise, Composed, EndoCandidate, MapSpec, Permuted, Poly, Power, Root,
                   Translated, affine_map, endo_check, evaluate, identity_map, inverse_of,
                   is_invertible, is_local, is_semilinear, is_stable)
from .measure import (Event, RandomScalar, SampleSpace, ess_inf, ess_sup, gen_inverse, indicator, leq,
                      support_set)
from .modules import (ModuleElement, RankPartition, RegularModule, glue, is_independent,
                      rank_decomposition, scalar_action, support_of)
from .sampling import SamplingPlan

__version__ = "0.1.0"
