"""Protocol layer: Ramsey readout and the optical, magnetic and opto-magnetic gate variants."""
from qls.protocols.common import FeasibilityPoint
from qls.protocols.magnetic import magnetic_feasibility, magnetic_force, static_equivalent
from qls.protocols.optical import optical_feasibility, rabi_from_power, scattering_error, stark_force
from qls.protocols.optomagnetic import hybrid_gain, pulse_train_momentum
from qls.protocols.readout import QubitState, qls_sequence, ramsey_run, ramsey_sweep

__all__ = [
    "FeasibilityPoint",
    "QubitState",
    "qls_sequence",
    "ramsey_run",
    "ramsey_sweep",
    "stark_force",
    "scattering_error",
    "rabi_from_power",
    "optical_feasibility",
    "magnetic_force",
    "magnetic_feasibility",
    "static_equivalent",
    "pulse_train_momentum",
    "hybrid_gain",
]
