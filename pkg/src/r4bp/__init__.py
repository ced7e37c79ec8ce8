"""Equilateral restricted four-body problem and its Hill-type limit ``m3 -> 0``."""

from .equilibria import (EquilibriumSet, SpectralData, equilibrium_points, interaction_matrix,
                         numeric_equilibria_oracle, r4bp_equilibria_near_m3, spectral_decomposition)
from .errors import (ContinuationError, DegenerateParameterError, DomainError, IntegrationError,
                     OracleFailureError, PreconditionError, R4BPError, SingularityError,
                     SingularityEvent, StepBudgetExceeded, StructuralError)
from .hill import (MassRatio, PlanarPoint, eom_limit, grad_omega, hamiltonian_limit, hess_omega,
                   momenta_velocity_map, omega_limit)
from .integrate import IntegratorSettings, Trajectory, jacobi_drift, propagate
from .model import (MassConfig, PrimaryTriangle, SpatialState, eom_full, jacobi_constant,
                    omega_full, primary_positions, pullback_acceleration)
from .regions import ContourSet, RegionGrid, contours, region_grid
from .stability import (CharacteristicCoefficients, StabilityClass, StabilityReport, classify,
                        critical_mass, characteristic_coefficients, linearization, quartic_roots,
                        vertical_frequency)

__version__ = "0.1.0"
