"""Physical constants (CODATA values as shipped with scipy)."""
from dataclasses import dataclass

from scipy import constants as _codata


@dataclass(frozen=True)
class PhysicalConstants:
    c: float
    hbar: float
    eps0: float
    amu: float

    def __post_init__(self):
        for name in ("c", "hbar", "eps0", "amu"):
            if not getattr(self, name) > 0:
                raise ValueError(f"{name} must be strictly positive")


CONSTANTS = PhysicalConstants(
    c=_codata.c,
    hbar=_codata.hbar,
    eps0=_codata.epsilon_0,
    amu=_codata.atomic_mass,
)

# Earth's sidereal rotation rate (rad/s)
EARTH_RATE = 7.2921150e-5

# e * a0, handy unit for transition dipoles (C m)
E_A0 = _codata.e * _codata.physical_constants["Bohr radius"][0]
