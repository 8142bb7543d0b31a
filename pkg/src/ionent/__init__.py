"""Entanglement dynamics of two Stark-shifted trapped ions under intrinsic decoherence."""

from .entanglement import EntanglementRecord, concurrence, negativity, xstate_negativity
from .evolution import (
    Propagator,
    evolve_series,
    evolve_states,
    kraus_trajectory,
    propagate_closed_form,
    propagate_kraus_series,
)
from .hilbert import SpaceLayout, partial_trace_fock, partial_transpose, tensor
from .model import ModelParams, build_effective_hamiltonian, excitation_operator, initial_density
from .numerics import frobenius_distance, hermitian_eigen
from .subspace import oracle_negativity_series, subspace_hamiltonian
from .sweeper import SweepGrid, detect_zero_intervals, preset_grid, run_sweep

__version__ = "0.1.0"
