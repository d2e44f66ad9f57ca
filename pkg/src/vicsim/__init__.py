"""Photon-photon correlations of a pi-driven j=1/2 -> j=1/2 atom with and
without vacuum-induced coherence."""

from vicsim.params import (
    DerivedRates,
    GeometryPrefactors,
    InvalidParameterError,
    SystemParams,
    derive_rates,
)
from vicsim.generator import GeneratorMatrix, build_block8, build_full16, rhs
from vicsim.steady import SteadyState, steady_analytic, steady_numeric
from vicsim.propagator import (
    EigenReport,
    PropagatorDecomposition,
    decompose,
    expm_oracle,
    f_elements,
    report_eigenvalues,
)
from vicsim.correlations import (
    CorrelationSeries,
    G2_novic,
    G2_vic,
    asymptote_report,
    big_F,
    correlation_series,
    g2_normalized,
    intensity_pi,
    pathway_probabilities,
)

__version__ = "0.1.0"

__all__ = [
    "CorrelationSeries",
    "DerivedRates",
    "EigenReport",
    "G2_novic",
    "G2_vic",
    "GeneratorMatrix",
    "GeometryPrefactors",
    "InvalidParameterError",
    "PropagatorDecomposition",
    "SteadyState",
    "SystemParams",
    "asymptote_report",
    "big_F",
    "build_block8",
    "build_full16",
    "correlation_series",
    "decompose",
    "derive_rates",
    "expm_oracle",
    "f_elements",
    "g2_normalized",
    "intensity_pi",
    "pathway_probabilities",
    "report_eigenvalues",
    "rhs",
    "steady_analytic",
    "steady_numeric",
]
