"""Class groups, reductions and blow-up tracking for rational double points."""

from .errors import (BookkeepingError, DuvalError, FieldError, ParseError, PreconditionError,
                     UnclassifiedError)
from .expr import format_series, parse_expr
from .lattice import (ClassElement, ClassGroup, DynkinType, IntersectionLattice,
                      admissible_indices, class_group, class_of, ej_class, fundamental_cycle,
                      intersection_matrix, multiplicity)
from .reduce import (ReductionResult, brute_force_reduce, reduce_to_admissible,
                     verify_reduction)
from .scalar import GaussianRational, I

__version__ = "0.1.0"
