"""Spinor-1 condensate simulations in the single-mode approximation."""

__version__ = "0.1.0"

from .algebra import (
    ModelParams,
    OperatorKind,
    OperatorMatrix,
    covariance,
    expectation,
    full_operator,
    hamiltonian_block,
    hamiltonian_full,
    moments,
    operator_matrix,
    verify_identities,
)
from .errors import ContractError, EmptyBlockError, NumericalError, ResourceError, SpinorError
from .evolve import EigenSystem, Propagator, TimeGrid, TimeSeries, diagonalize_block, evolve, evolve_oracle_angular, time_series
from .fock import BlockKey, FockBlock, Layout, ModeOccupation, StateVector, charges, enumerate_block, enumerate_full
from .ground import chain_solver, gaussian_profile, ground_state, one_particle_density
from .prepare import (
    AngularLabel,
    CoherentSpec,
    angular_projection,
    angular_state,
    coherent_state,
    eta,
    fock_state,
    glmk,
)
from .squeeze import QuadratureStats, SqueezeReport, SqueezeSettings, quadrature_stats, squeeze_report, xi_phi, xi_pm, xi_uv
