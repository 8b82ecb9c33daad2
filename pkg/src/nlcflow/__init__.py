"""Pseudo-spectral simulator for the 2D periodic nematic liquid-crystal
flow system: incompressible flow coupled to a penalized director field with
kinematic transport, plus the numerical experiments that check its energy
law, dissipativity, continuous dependence, and smoothing behavior.
"""

from .spectral import (
    GridSpec,
    ScalarField,
    TensorField2,
    VectorField2,
    dealias,
    derivative,
    divergence,
    divergence_tensor,
    gradient,
    laplacian,
    leray_project,
    sobolev_norm,
)
from .model import (
    EnergyBreakdown,
    ModelParams,
    State,
    director_explicit_rhs,
    energy,
    ericksen_stress,
    kinematic_stress,
    molecular_field,
    momentum_explicit_rhs,
    penalty_f,
    potential_F,
)
from .integrator import (
    BlowUpError,
    StepperConfig,
    TimeStepError,
    Trajectory,
    cfl_dt,
    simulate,
    step,
)
from .experiments import (
    ExperimentReport,
    PerturbationSpec,
    continuous_dependence,
    dissipativity_ensemble,
    energy_audit,
    equilibrate,
    mms_convergence,
    smoothing_ratio,
)
from .config import RunConfig, parse_config

__all__ = [
    "GridSpec",
    "ScalarField",
    "VectorField2",
    "TensorField2",
    "derivative",
    "gradient",
    "laplacian",
    "divergence",
    "divergence_tensor",
    "leray_project",
    "dealias",
    "sobolev_norm",
    "ModelParams",
    "State",
    "EnergyBreakdown",
    "penalty_f",
    "potential_F",
    "molecular_field",
    "ericksen_stress",
    "kinematic_stress",
    "momentum_explicit_rhs",
    "director_explicit_rhs",
    "energy",
    "StepperConfig",
    "Trajectory",
    "step",
    "cfl_dt",
    "simulate",
    "BlowUpError",
    "TimeStepError",
    "PerturbationSpec",
    "ExperimentReport",
    "energy_audit",
    "dissipativity_ensemble",
    "continuous_dependence",
    "smoothing_ratio",
    "equilibrate",
    "mms_convergence",
    "RunConfig",
    "parse_config",
]

__version__ = "0.1.0"
