"""Exact transport cohomology and loop holonomy for finite categorical
filtrations.

The package models a contravariant assignment of finite probability
spaces and null-preserving maps over a finite time category, normalizes
measures along parametrized simplices, builds the resulting cochain
complexes with exact rational arithmetic, and classifies the holonomy of
loops.
"""

__version__ = "0.1.0"

from .exactlinalg import RatMatrix, Rational, cohomology_dim, kernel_basis, rank, rat
from .finprob import (
    FiniteProbSpace,
    L1Class,
    MeasureRelation,
    NotAbsolutelyContinuousError,
    ProbMap,
    compare_measures,
    cond_expectation,
    pushforward,
    radon_nikodym,
)
from .category import (
    ArrowDecl,
    CompositionError,
    FinCategory,
    Generator,
    Path,
    Quiver,
    arrow_path,
    compose,
    dag_table_closure,
    enumerate_arrows,
    identity_path,
    validate_table,
)
from .nerve import (
    MonotoneMap,
    ParamSimplex,
    enumerate_monotone,
    face,
    segment,
    simplex_face,
)
from .filtration import (
    AdaptedProcess,
    Filtration,
    delta1,
    density,
    martingale_kernel,
    naive_delta,
    naive_obstruction,
    validate,
)
from .gauge import GaugeChain, build_gauge, gauge_distortion, transport
from .sigmacomplex import SigmaCochain, SigmaComplex, build_complex
from .holonomy import (
    Classification,
    HolonomyReport,
    classify,
    holonomy_operator,
    is_loop,
    scan_loops,
)

__all__ = [
    "AdaptedProcess",
    "ArrowDecl",
    "Classification",
    "CompositionError",
    "FinCategory",
    "Filtration",
    "FiniteProbSpace",
    "GaugeChain",
    "Generator",
    "HolonomyReport",
    "L1Class",
    "MeasureRelation",
    "MonotoneMap",
    "NotAbsolutelyContinuousError",
    "ParamSimplex",
    "Path",
    "ProbMap",
    "Quiver",
    "RatMatrix",
    "Rational",
    "SigmaCochain",
    "SigmaComplex",
    "arrow_path",
    "build_complex",
    "build_gauge",
    "classify",
    "cohomology_dim",
    "compare_measures",
    "compose",
    "cond_expectation",
    "dag_table_closure",
    "delta1",
    "density",
    "enumerate_arrows",
    "enumerate_monotone",
    "face",
    "gauge_distortion",
    "holonomy_operator",
    "identity_path",
    "is_loop",
    "kernel_basis",
    "martingale_kernel",
    "naive_delta",
    "naive_obstruction",
    "pushforward",
    "radon_nikodym",
    "rank",
    "rat",
    "scan_loops",
    "segment",
    "simplex_face",
    "transport",
    "validate",
    "validate_table",
]
