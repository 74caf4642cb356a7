"""
Learning Pauli observables from copies of a quantum state.

Submodules
----------
pauli_core
    Bit-packed Pauli algebra and GF(2) linear algebra.
state_sim
    State models, samplers and the copy-counting oracle.
quantum_ml
    Bell-sampling learners.
classical_ml
    Single-copy learners: restricted search and classical shadows.
bounds_lab
    Exact small-scale checks of the lower-bound machinery.
exp_cli
    Seeded experiment harness and the ``lab`` command.
"""

__version__ = "0.1.0"
