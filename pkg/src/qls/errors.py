"""Exception types shared across modules."""


class ResolutionError(ValueError):
    """Sampling too coarse for the oscillatory phase kernel."""


class PoleError(ValueError):
    """Evaluation at (or numerically on) a resonance pole."""


class InfeasibleError(RuntimeError):
    """No configuration satisfies the stated constraints."""


class DispersiveRegimeError(ValueError):
    """Detuning too small for the adiabatic-elimination force law."""
