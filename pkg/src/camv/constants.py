import math

from .errors import DomainError

SPEED_OF_LIGHT = 299_792_458.0
"Speed of light in vacuum, m/s (exact)."


def wavelength(frequency: float) -> float:
    """Free-space wavelength in metres for a frequency in Hz."""
    if not math.isfinite(frequency) or frequency <= 0:
        raise DomainError(f"frequency must be positive and finite, got {frequency!r} Hz")
    return SPEED_OF_LIGHT / frequency
