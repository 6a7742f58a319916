"""Three-mode Lindblad simulator for microwave-to-optical quantum state
transfer mediated by a collective spin mode."""

from .backend import KERNEL_BACKEND
from .dynamics import (
    ConstantPulse,
    DecayRates,
    GaussianPulsePair,
    IntegratorOptions,
    PiecewiseSwapPulse,
    SimResult,
    evolve,
)
from .fockspace import ModeLayout, QState
from .protocols import (
    ProtocolSpec,
    dark_state_schedule,
    double_swap_schedule,
    run_protocol,
    sweep_spin_decay,
)

__version__ = "0.1.0"

__all__ = [
    "KERNEL_BACKEND",
    "ModeLayout",
    "QState",
    "ConstantPulse",
    "PiecewiseSwapPulse",
    "GaussianPulsePair",
    "DecayRates",
    "IntegratorOptions",
    "SimResult",
    "evolve",
    "ProtocolSpec",
    "double_swap_schedule",
    "dark_state_schedule",
    "run_protocol",
    "sweep_spin_decay",
]
