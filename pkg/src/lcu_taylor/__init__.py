"""Truncated-Taylor LCU compiler for Pauli-sum Hamiltonians, built on multiplexed SELECT."""

from .circuit import Circuit, Gate, GuardError, export_qasm, import_qasm, unitary_of
from .experiments import ConfigError, RunConfig, default_config, run_experiment, write_csv
from .models import ModelError, ModelSpec, build_hamiltonian, build_initial_state
from .pauli import (DimensionError, PauliSum, PauliTerm, read_pauli_sum, sum_multiply, sum_power, to_dense,
                    write_pauli_sum)
from .propagator import (TaylorConfig, collapse_propagator, merge_parallel_terms, precision, preselect,
                         reduced_overlap_reconstruct)
from .sim import ShotResult, StateVector, postselect_zero, run, sample, vacuum_test
from .synth import (SynthesisError, multiplexor_cost, synth_lcu, synth_oaa, synth_prepare, synth_select,
                    synth_state_prep, synth_trotter)

__version__ = "0.1.0"

__all__ = [
    "Circuit", "Gate", "GuardError", "export_qasm", "import_qasm", "unitary_of",
    "ConfigError", "RunConfig", "default_config", "run_experiment", "write_csv",
    "ModelError", "ModelSpec", "build_hamiltonian", "build_initial_state",
    "DimensionError", "PauliSum", "PauliTerm", "read_pauli_sum", "sum_multiply", "sum_power", "to_dense",
    "write_pauli_sum",
    "TaylorConfig", "collapse_propagator", "merge_parallel_terms", "precision", "preselect",
    "reduced_overlap_reconstruct",
    "ShotResult", "StateVector", "postselect_zero", "run", "sample", "vacuum_test",
    "SynthesisError", "multiplexor_cost", "synth_lcu", "synth_oaa", "synth_prepare", "synth_select",
    "synth_state_prep", "synth_trotter",
]
