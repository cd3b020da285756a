"""Exact fractional coloring under local demands."""

from .demand import DemandFn, WeightFn, common_denominator, demand_from_spec, demand_generate
from .errors import (CertificateError, FracDemandError, HypothesisViolated, InvalidInput,
                     SizeCapExceeded)
from .fracsolve import (ColorabilityVerdict, FractionalColoring, SetColoring,
                        blowup_chromatic_oracle, chi_f, is_fcolorable, to_set_coloring)
from .graph import BlowupSpec, Graph, Multigraph, blowup, generate_family, line_graph, total_graph
from .intervals import IntervalSet

__version__ = "0.1.0"
