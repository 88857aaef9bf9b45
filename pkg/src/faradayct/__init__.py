"""State-vector simulation of controlled teleportation driven by photonic Faraday rotation."""
from .cavity import CavityParams, FaradayPhases, faraday_phases, reflection, reflection_empty
from .optics import WavePlateKind, hadamard_atom, qwp_matrix
from .qreg import (
    BranchRecord,
    PauliOp,
    QuantumRegister,
    SubsystemLabel,
    apply_controlled_phase_pair,
    apply_single,
    measure_enumerate,
    measure_sample,
    new_register,
)

from .protocol import ProtocolSpec, build, run, verify_tables
from .resources import (
    LossModel,
    expected_event_period,
    loss_preset,
    monte_carlo_yield,
    success_probability,
)

__version__ = "0.1.0"
