"""Exact edge-expansion analysis for graphs of 0/1-polytopes."""
from .core import (ZeroOnePolytope, adjacent, canonical_form, dimension, is_simple, is_uniform,
                   parse_pol, read_pol, skeleton)
from .errors import FormatError, LimitExceeded, NoConvergence, VerificationFailure
from .expansion import (CutCertificate, FlowField, certified_bound, cut_size, diameter,
                        edge_expansion_exact, maxcut_bruteforce, np_reduction, validate_target_flow)
from .graph import Graph

__version__ = "0.1.0"
