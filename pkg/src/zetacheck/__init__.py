"""Exhaustive checks of zeta-positivity for weightings of simple root systems."""

from .errors import DiscrepancyError, ParameterError, ScanInterrupted, UnsupportedOperationError
from .rootsys import Root, RootSystem, abs_root, build_root_system, classical_ambient
from .weights import (BlockPartition, WeightClasses, WeightFunction, all_weightings,
                      block_partition, is_distinguished_cardinality,
                      is_distinguished_closed_form, root_weight, weight_classes)
from .weyl import (ExtendedElementD, WeylElement, apply_word, element_from_word, enumerate_extended_D,
                   enumerate_weyl, group_order, outer_twist, reflect)
from .zeta import ZetaVector, strictly_positive, zeta_of
from .report import Counterexample, Report, Verdict
from .engine import crosscheck, verify_all, verify_weighting

__version__ = "0.1.0"
