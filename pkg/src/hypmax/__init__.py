"""Numerical companion to a measure on the hyperbolic half-plane with linear
growth whose centered maximal operator is not of weak type (1,1)."""

from .geometry import (
    EuclideanBall,
    HyperbolicBall,
    Point,
    ball_contains,
    euclid_to_hyp,
    hyp_distance,
    hyp_to_euclid,
)
from .integrate import (
    MeasureEstimate,
    QuadratureError,
    gauss_tail,
    gauss_tail_bound,
    integrate_disk_region,
    mc_ball_measure,
)
from .maximal import DiracAtom, MaximalValue, ball_average_dirac, maximal_atoms, maximal_dirac
from .measures import (
    Density,
    MeasureSpec,
    Region,
    ball_measure,
    density_at,
    finite_variant_measure,
    paper_measure,
    strip_measure_m2,
)
from .verify import (
    GrowthReport,
    GrowthScanParams,
    InequalityCheck,
    WeakTypeParams,
    WeakTypeReport,
    growth_scan,
    proof_step_suite,
    weak_type_probe,
)

__version__ = "0.1.0"

__all__ = [
    "ball_average_dirac",
    "ball_contains",
    "ball_measure",
    "Density",
    "density_at",
    "DiracAtom",
    "euclid_to_hyp",
    "EuclideanBall",
    "finite_variant_measure",
    "gauss_tail",
    "gauss_tail_bound",
    "growth_scan",
    "GrowthReport",
    "GrowthScanParams",
    "hyp_distance",
    "hyp_to_euclid",
    "HyperbolicBall",
    "InequalityCheck",
    "integrate_disk_region",
    "maximal_atoms",
    "maximal_dirac",
    "MaximalValue",
    "mc_ball_measure",
    "MeasureEstimate",
    "MeasureSpec",
    "paper_measure",
    "Point",
    "proof_step_suite",
    "QuadratureError",
    "Region",
    "strip_measure_m2",
    "weak_type_probe",
    "WeakTypeParams",
    "WeakTypeReport",
]
