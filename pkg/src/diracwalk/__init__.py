"""Unitary quantum-walk discretisation of the 1+1D Dirac equation with a Wilson-like term."""
from .clifford import (CliffordRep, RepresentationError, conjugate, gamma_operators, pauli_representation,
                       random_representation, random_unitary, verify_algebra)
from .coins import (CoinSet, ModelParams, Normalizations, ParameterError, Variant, build_coins, check_unitarity,
                    hamiltonian_blocks, normalization_factors)
from .dynamics import (Trajectory, WavePacket, evolve_one_step, evolve_two_step, group_velocity_estimate,
                       make_wave_packet, observables)
from .lattice import (LatticeState, WalkOperator, build_walk_operator, local_hamiltonian, momentum_symbol,
                      walk_unitarity_residuals)
from .spectral import (DIRAC, DQW, LGT, LGT_NONCROSSED, NAIVE, BrillouinZoneError, ModelTag, NoRealFrequency,
                       convergence_study, dispersion_curve, doubling_report, frequency_solutions, initial_slope)

__version__ = "0.1.0"
