"""Parsing of unit-suffixed quantities such as ``"500 nm"`` or ``"1e11 cm^-3"``.

Conversion goes through :class:`decimal.Decimal` so that decimal inputs land
on the nearest double (``"500 nm"`` gives exactly ``5e-07``).
"""
from __future__ import annotations

import re
from decimal import Decimal, InvalidOperation

from .constants import CONSTANTS, E_A0, EARTH_RATE


class UnitError(ValueError):
    pass


_TWO_PI = Decimal("6.283185307179586476925286766559")

# dimension -> {unit spelling: factor to SI}
UNITS: dict[str, dict[str, Decimal]] = {
    "length": {
        "m": Decimal(1),
        "cm": Decimal("1e-2"),
        "mm": Decimal("1e-3"),
        "um": Decimal("1e-6"),
        "μm": Decimal("1e-6"),
        "nm": Decimal("1e-9"),
        "km": Decimal("1e3"),
    },
    "area": {
        "m^2": Decimal(1),
        "cm^2": Decimal("1e-4"),
        "mm^2": Decimal("1e-6"),
        "um^2": Decimal("1e-12"),
        "μm^2": Decimal("1e-12"),
    },
    "density": {
        "m^-3": Decimal(1),
        "cm^-3": Decimal("1e6"),
    },
    "mass": {
        "kg": Decimal(1),
        "amu": Decimal(repr(CONSTANTS.amu)),
        "u": Decimal(repr(CONSTANTS.amu)),
    },
    "dipole": {
        "C m": Decimal(1),
        "C*m": Decimal(1),
        "e a0": Decimal(repr(E_A0)),
        "ea0": Decimal(repr(E_A0)),
    },
    "rate": {
        "rad/s": Decimal(1),
        "1/s": Decimal(1),
        "s^-1": Decimal(1),
        "2pi Hz": _TWO_PI,
        "2pi kHz": _TWO_PI * Decimal("1e3"),
        "2pi MHz": _TWO_PI * Decimal("1e6"),
    },
    "angular_velocity": {
        "rad/s": Decimal(1),
        "deg/s": _TWO_PI / Decimal(360),
        "deg/h": _TWO_PI / Decimal(360 * 3600),
        "earth": Decimal(repr(EARTH_RATE)),
    },
}

# canonical spelling used when writing a value back out
SI_UNIT = {
    "length": "m",
    "area": "m^2",
    "density": "m^-3",
    "mass": "kg",
    "dipole": "C m",
    "rate": "rad/s",
    "angular_velocity": "rad/s",
}

_QUANTITY = re.compile(r"^\s*([-+]?(?:\d+\.?\d*|\.\d+)(?:[eE][-+]?\d+)?)\s*(.*?)\s*$")


def parse_quantity(value, dimension: str) -> float:
    """Convert ``value`` to SI.

    Bare numbers are taken to be SI already. Strings must be ``"<number> <unit>"``
    with a unit known for ``dimension``.
    """
    table = UNITS[dimension]
    if isinstance(value, bool):
        raise UnitError(f"expected a {dimension} quantity, got a boolean")
    if isinstance(value, (int, float)):
        return float(value)
    if not isinstance(value, str):
        raise UnitError(f"expected a {dimension} quantity, got {type(value).__name__}")
    match = _QUANTITY.match(value)
    if not match:
        # a lone unit name (e.g. "earth") means one of that unit
        number, unit = "1", value.strip()
    else:
        number, unit = match.groups()
    unit = " ".join(unit.split())
    if unit == "":
        return float(Decimal(number))
    if unit not in table:
        raise UnitError(
            f"unit {unit!r} is not a {dimension} unit; expected one of {sorted(table)}"
        )
    try:
        return float(Decimal(number) * table[unit])
    except InvalidOperation as exc:
        raise UnitError(f"cannot parse number in {value!r}") from exc


def format_quantity(value: float, dimension: str) -> str:
    """Inverse of :func:`parse_quantity` in canonical SI spelling (round-trips exactly)."""
    return f"{value!r} {SI_UNIT[dimension]}"
