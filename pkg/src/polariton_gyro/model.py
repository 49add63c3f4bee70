"""Closed-form model of the slow-light hybrid Sagnac gyroscope.

Everything here is a pure function of immutable value types. SI units
throughout. A medium segment with ``density == 0`` is vacuum; vacuum is
handled through the ``xi -> inf`` limit of each formula and never through a
large stand-in number.

The atom-light coupling ``g = d * sqrt(omega_p / (2 hbar eps0 F))`` carries the
beam cross section ``F``, so the density that pairs with ``g**2`` in the
one-dimensional propagation equations is the line density ``n * F``
(atoms per metre of beam). :func:`collective_coupling_sq` returns that
product; ``F`` then drops out of every observable.
"""
from __future__ import annotations

import math
from decimal import Decimal, localcontext
from dataclasses import dataclass, field

from .constants import CONSTANTS

C = CONSTANTS.c
HBAR = CONSTANTS.hbar
EPS0 = CONSTANTS.eps0

ABSORPTION_MODES = ("general", "fig3")

FLAG_NAMES = (
    "control_vs_doppler",
    "control_vs_decay",
    "xi_above_inverse_opacity",
    "absorption_within_budget",
    "slow_rotation",
)


class DegenerateSegmentError(ValueError):
    """A medium segment has xi = 0 and eta = 0 (zero group velocity)."""


class UndefinedRatioError(ZeroDivisionError):
    """Phase ratio requested at zero rotation rate."""


# ---------------------------------------------------------------------------
# domain types
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class AtomSpecies:
    mass: float
    dipole_moment: float
    cross_section: float = 0.0

    def __post_init__(self):
        if not self.mass > 0:
            raise ValueError("mass must be > 0")
        if not self.dipole_moment > 0:
            raise ValueError("dipole_moment must be > 0")
        if not self.cross_section >= 0:
            raise ValueError("cross_section must be >= 0")


@dataclass(frozen=True)
class ProbeField:
    wavelength: float
    beam_area: float

    def __post_init__(self):
        if not self.wavelength > 0:
            raise ValueError("wavelength must be > 0")
        if not self.beam_area > 0:
            raise ValueError("beam_area must be > 0")

    @property
    def k(self) -> float:
        return 2.0 * math.pi / self.wavelength

    @property
    def omega(self) -> float:
        return C * self.k


@dataclass(frozen=True)
class ControlField:
    rabi_frequency: complex
    eta: float = 1.0

    def __post_init__(self):
        if not abs(self.rabi_frequency) > 0:
            raise ValueError("control Rabi frequency must be non-zero")
        if self.eta < 0:
            raise ValueError(
                f"eta = {self.eta} < 0 is not supported: for negative momentum "
                "transfer the medium becomes opaque as soon as v_gr crosses zero"
            )
        if self.eta > 2:
            raise ValueError(f"eta = {self.eta} > 2 is unphysical (k_c|| < -k_p)")


@dataclass(frozen=True)
class MediumSegment:
    """One stretch of the interferometer periphery.

    ``density`` is the volume density of atoms (m^-3); zero means vacuum, in
    which case ``gamma`` and ``control`` are ignored.
    """

    length: float
    density: float = 0.0
    gamma: float = 0.0
    control: ControlField | None = None
    temperature_ratio: float = 0.0

    def __post_init__(self):
        if not self.length > 0:
            raise ValueError("segment length must be > 0")
        if not self.density >= 0:
            raise ValueError("density must be >= 0")
        if not self.temperature_ratio >= 0:
            raise ValueError("temperature_ratio must be >= 0")
        if self.density > 0:
            if not self.gamma > 0:
                raise ValueError("gamma must be > 0 in a medium segment")
            if self.control is None:
                raise ValueError("a medium segment needs a control field")

    @classmethod
    def vacuum(cls, length: float) -> "MediumSegment":
        return cls(length=length)

    @property
    def is_vacuum(self) -> bool:
        return self.density == 0

    @property
    def eta(self) -> float:
        return 0.0 if self.control is None else self.control.eta


@dataclass(frozen=True)
class LoopGeometry:
    radius: float
    segments: tuple[MediumSegment, ...] = field(default_factory=tuple)

    def __post_init__(self):
        if not self.radius > 0:
            raise ValueError("radius must be > 0")
        object.__setattr__(self, "segments", tuple(self.segments))
        if not self.segments:
            raise ValueError("a loop needs at least one segment")
        total = math.fsum(s.length for s in self.segments)
        if abs(total - self.circumference) > 1e-9 * self.circumference:
            raise ValueError(
                f"segment lengths sum to {total!r} m but the periphery is "
                f"{self.circumference!r} m"
            )

    @property
    def circumference(self) -> float:
        return 2.0 * math.pi * self.radius

    @property
    def area(self) -> float:
        return math.pi * self.radius**2

    @classmethod
    def with_filler(cls, radius: float, segments) -> "LoopGeometry":
        """Append a vacuum segment covering whatever periphery is left."""
        segments = tuple(segments)
        rest = 2.0 * math.pi * radius - math.fsum(s.length for s in segments)
        if rest > 1e-9 * 2.0 * math.pi * radius:
            segments = segments + (MediumSegment.vacuum(rest),)
        return cls(radius, segments)

    @classmethod
    def vacuum(cls, radius: float) -> "LoopGeometry":
        return cls(radius, (MediumSegment.vacuum(2.0 * math.pi * radius),))


@dataclass(frozen=True)
class DerivedMediumQuantities:
    g: float
    tan2_theta: float
    tan2_theta_crit: float
    v_rec: float
    v_gr: float
    xi: float
    alpha: float


@dataclass(frozen=True)
class SagnacReport:
    phase_optical: float
    phase_hybrid: float
    enhancement: float
    kappa_L_total: float
    validity_flags: dict

    @property
    def valid(self) -> bool:
        return all(self.validity_flags.values())


# ---------------------------------------------------------------------------
# elementary relations
# ---------------------------------------------------------------------------


def coupling_constant(species: AtomSpecies, probe: ProbeField) -> float:
    """Single-atom coupling ``g = d sqrt(omega_p / (2 hbar eps0 F))``."""
    return species.dipole_moment * math.sqrt(probe.omega / (2.0 * HBAR * EPS0 * probe.beam_area))


def collective_coupling_sq(segment: MediumSegment, probe: ProbeField, species: AtomSpecies) -> float:
    """``g**2`` times the line density ``n F`` (rad^2/s^2)."""
    g = coupling_constant(species, probe)
    return g * g * segment.density * probe.beam_area


def recoil_velocity(probe: ProbeField, species: AtomSpecies) -> float:
    return HBAR * probe.k / species.mass


def critical_tan2(probe: ProbeField, species: AtomSpecies) -> float:
    """``tan^2(theta_crit) = c / v_rec = m c^2 / (hbar omega_p)``.

    This is also the maximal matter-wave enhancement of the Sagnac phase.
    """
    return C / recoil_velocity(probe, species)


sensitivity_ratio = critical_tan2


def mixing_tan2(segment: MediumSegment, probe: ProbeField, species: AtomSpecies) -> float:
    if segment.is_vacuum:
        return 0.0
    return collective_coupling_sq(segment, probe, species) / abs(segment.control.rabi_frequency) ** 2


def group_velocity(tan2_theta: float, eta: float, v_rec: float) -> float:
    """``v_gr = c cos^2(theta) + eta v_rec sin^2(theta)``."""
    if tan2_theta < 0 or eta < 0:
        raise ValueError("tan2_theta and eta must be >= 0")
    if math.isinf(tan2_theta):
        return eta * v_rec
    cos2 = 1.0 / (1.0 + tan2_theta)
    sin2 = tan2_theta / (1.0 + tan2_theta)
    return C * cos2 + eta * v_rec * sin2


def xi_parameter(tan2_theta: float, tan2_theta_crit: float) -> float:
    """``xi = tan^2(theta_crit) / tan^2(theta)``; ``inf`` for an empty segment."""
    if tan2_theta < 0:
        raise ValueError("tan2_theta must be >= 0")
    if tan2_theta == 0:
        return math.inf
    return tan2_theta_crit / tan2_theta


def opacity(segment: MediumSegment, g: float, beam_area: float) -> float:
    """Resonant optical depth without EIT, ``alpha = g^2 n L / (gamma c)``.

    ``n`` is the line density ``density * beam_area``.
    """
    if segment.is_vacuum:
        return 0.0
    return g * g * segment.density * beam_area * segment.length / (segment.gamma * C)


def derived_quantities(segment: MediumSegment, probe: ProbeField, species: AtomSpecies) -> DerivedMediumQuantities:
    g = coupling_constant(species, probe)
    v_rec = recoil_velocity(probe, species)
    t2 = mixing_tan2(segment, probe, species)
    t2c = C / v_rec
    return DerivedMediumQuantities(
        g=g,
        tan2_theta=t2,
        tan2_theta_crit=t2c,
        v_rec=v_rec,
        v_gr=group_velocity(t2, segment.eta, v_rec),
        xi=xi_parameter(t2, t2c),
        alpha=opacity(segment, g, probe.beam_area),
    )


def segment_at_xi(
    species: AtomSpecies,
    probe: ProbeField,
    *,
    length: float,
    xi: float,
    gamma: float,
    eta: float = 1.0,
    alpha: float | None = None,
    density: float | None = None,
    temperature_ratio: float = 0.0,
) -> MediumSegment:
    """Build a medium segment that realises a given ``xi``.

    Exactly one of ``alpha`` (opacity) or ``density`` fixes the atom number;
    the control Rabi frequency is then chosen to hit ``xi``.
    """
    if (alpha is None) == (density is None):
        raise ValueError("give exactly one of alpha or density")
    if not xi > 0:
        raise ValueError("xi must be > 0")
    g = coupling_constant(species, probe)
    if density is None:
        if not alpha > 0:
            raise ValueError("alpha must be > 0")
        density = alpha * gamma * C / (g * g * probe.beam_area * length)
    gn = g * g * density * probe.beam_area
    rabi = math.sqrt(gn * xi / critical_tan2(probe, species))
    return MediumSegment(
        length=length,
        density=density,
        gamma=gamma,
        control=ControlField(rabi_frequency=complex(rabi), eta=eta),
        temperature_ratio=temperature_ratio,
    )


# ---------------------------------------------------------------------------
# Sagnac phases
# ---------------------------------------------------------------------------


def sagnac_phase_optical(loop: LoopGeometry, omega: float, probe: ProbeField) -> float:
    """``(4 pi / (lambda c)) Omega A`` for a circular loop of area ``pi R^2``."""
    return 4.0 * math.pi / (probe.wavelength * C) * omega * loop.area


def _phase_weights(segment, probe, species):
    """Light-like and matter-like fractions ``xi/(xi+eta)``, ``eta/(xi+eta)``."""
    if segment.is_vacuum:
        return 1.0, 0.0
    eta = segment.eta
    xi = derived_quantities(segment, probe, species).xi
    if math.isinf(xi):
        return 1.0, 0.0
    if xi == 0 and eta == 0:
        raise DegenerateSegmentError("segment with xi = 0 and eta = 0 has zero group velocity")
    return xi / (xi + eta), eta / (xi + eta)


def sagnac_phase_hybrid(loop: LoopGeometry, omega: float, probe: ProbeField, species: AtomSpecies) -> float:
    light, matter = [], []
    for seg in loop.segments:
        wl, wm = _phase_weights(seg, probe, species)
        light.append(seg.length * wl)
        matter.append(seg.length * wm)
    omega_r = omega * loop.radius
    return (
        2.0 * math.pi * omega_r / (probe.wavelength * C) * math.fsum(light)
        + omega_r * species.mass / HBAR * math.fsum(matter)
    )


def enhancement_factor(loop: LoopGeometry, omega: float, probe: ProbeField, species: AtomSpecies) -> float:
    if omega == 0:
        raise UndefinedRatioError("enhancement is undefined at zero rotation rate")
    return sagnac_phase_hybrid(loop, omega, probe, species) / sagnac_phase_optical(loop, omega, probe)


def uniform_enhancement(xi: float, eta: float, ratio: float) -> float:
    """Enhancement ``(xi + eta S)/(xi + eta)`` of a medium filling the whole loop."""
    if math.isinf(xi):
        return 1.0
    if xi == 0 and eta == 0:
        raise DegenerateSegmentError("xi = 0 and eta = 0")
    return (xi + eta * ratio) / (xi + eta)


def probe_phase_gradient(segment: MediumSegment, omega_r: float, probe: ProbeField, species: AtomSpecies) -> float:
    """Rotation-induced phase gradient of one probe beam (rad/m), first order in ``Omega R``."""
    base = probe.k * omega_r / C
    if segment.is_vacuum:
        return base
    xi = derived_quantities(segment, probe, species).xi
    eta = segment.eta
    return base * uniform_enhancement(xi, eta, critical_tan2(probe, species))


# ---------------------------------------------------------------------------
# absorption and sensitivity limits
# ---------------------------------------------------------------------------


def _kappa_numerator(k_l, alpha, eta, temperature_ratio, mode):
    if mode == "general":
        return eta * k_l * k_l / alpha * temperature_ratio, eta
    if mode == "fig3":
        if eta == 0:
            raise ZeroDivisionError("fig3 absorption form divides by eta; eta = 0 has no Doppler channel")
        return k_l * k_l / (eta * alpha) * temperature_ratio, 1.0
    raise ValueError(f"unknown absorption mode {mode!r}; expected one of {ABSORPTION_MODES}")


def kappa_l_closed_form(xi, eta, alpha, k_l, temperature_ratio, mode="general"):
    """Thermal absorption ``kappa L`` from the dimensionless parameters alone.

    ``general``: ``eta (k L)^2 / alpha * (T/T_rec) / (xi (xi + eta))``.
    ``fig3``:    ``(k L)^2 / (eta alpha) * (T/T_rec) / (xi (xi + 1))``.
    """
    numerator, shift = _kappa_numerator(k_l, alpha, eta, temperature_ratio, mode)
    if numerator == 0:
        return 0.0
    if math.isinf(xi):
        return 0.0
    return numerator / (xi * (xi + shift))


def absorption_coefficient(segment: MediumSegment, probe: ProbeField, species: AtomSpecies, mode: str = "general") -> float:
    """Amplitude absorption ``kappa L`` of one segment from the two-photon Doppler shift."""
    if mode not in ABSORPTION_MODES:
        raise ValueError(f"unknown absorption mode {mode!r}; expected one of {ABSORPTION_MODES}")
    if segment.is_vacuum:
        return 0.0
    d = derived_quantities(segment, probe, species)
    return kappa_l_closed_form(d.xi, segment.eta, d.alpha, probe.k * segment.length, segment.temperature_ratio, mode)


def min_xi_closed_form(eta, alpha, k_l, temperature_ratio, kappa_budget, mode="general"):
    if not kappa_budget > 0:
        raise ValueError("kappa_budget must be > 0")
    numerator, shift = _kappa_numerator(k_l, alpha, eta, temperature_ratio, mode)
    q = numerator / kappa_budget
    if q == 0:
        return 0.0
    # root of xi^2 + shift xi - q = 0, written without cancellation
    return 2.0 * q / (shift + math.sqrt(shift * shift + 4.0 * q))


def min_xi_for_absorption(segment: MediumSegment, probe: ProbeField, species: AtomSpecies, kappa_budget: float, mode: str = "general") -> float:
    """Smallest ``xi`` keeping the segment's ``kappa L`` within ``kappa_budget``.

    Only the atom number (through ``alpha``), ``eta`` and the temperature of
    ``segment`` matter; its control field is ignored.
    """
    if segment.is_vacuum:
        return 0.0
    alpha = opacity(segment, coupling_constant(species, probe), probe.beam_area)
    return min_xi_closed_form(segment.eta, alpha, probe.k * segment.length, segment.temperature_ratio, kappa_budget, mode)


def collision_limited_vgr_min(segment: MediumSegment, species: AtomSpecies) -> float:
    """Lower bound on ``v_gr / v_rec`` from velocity-changing collisions, ``L n sigma sqrt(T/T_rec)``."""
    if species.cross_section == 0 or segment.is_vacuum:
        return 0.0
    # one rounding for L n sigma so that decimal inputs give decimal answers
    with localcontext() as ctx:
        ctx.prec = 80
        column = float(Decimal(segment.length) * Decimal(segment.density) * Decimal(species.cross_section))
    return column * math.sqrt(segment.temperature_ratio)


def validity_check(
    segment: MediumSegment,
    probe: ProbeField,
    species: AtomSpecies,
    omega: float,
    radius: float,
    epsilon: float = 1e-2,
    mode: str = "general",
) -> dict:
    """Named checks on the approximations behind the closed forms.

    ``epsilon`` quantifies "much smaller than". The absorption flag allows a
    1e-9 relative slack so a point placed exactly on ``kappa L = 1`` passes.
    """
    omega_r = abs(omega) * radius
    v_rec = recoil_velocity(probe, species)
    slow = omega_r <= epsilon * v_rec and omega_r <= epsilon * C
    if segment.is_vacuum:
        flags = dict.fromkeys(FLAG_NAMES, True)
        flags["slow_rotation"] = slow
        return flags
    d = derived_quantities(segment, probe, species)
    rabi2 = abs(segment.control.rabi_frequency) ** 2
    doppler2 = segment.eta * probe.k**2 * segment.temperature_ratio * v_rec**2
    kappa = absorption_coefficient(segment, probe, species, mode)
    return {
        "control_vs_doppler": doppler2 <= epsilon * rabi2,
        "control_vs_decay": doppler2 <= epsilon * rabi2 * rabi2 / segment.gamma**2,
        "xi_above_inverse_opacity": d.xi * d.alpha >= 1.0,
        "absorption_within_budget": kappa <= 1.0 + 1e-9,
        "slow_rotation": slow,
    }


def sagnac_report(
    loop: LoopGeometry,
    omega: float,
    probe: ProbeField,
    species: AtomSpecies,
    mode: str = "general",
    epsilon: float = 1e-2,
) -> SagnacReport:
    phase_opt = sagnac_phase_optical(loop, omega, probe)
    phase_hyb = sagnac_phase_hybrid(loop, omega, probe, species)
    flags = dict.fromkeys(FLAG_NAMES, True)
    kappas = []
    for seg in loop.segments:
        kappas.append(absorption_coefficient(seg, probe, species, mode))
        for name, ok in validity_check(seg, probe, species, omega, loop.radius, epsilon, mode).items():
            flags[name] = flags[name] and ok
    # the budget applies to the loop as a whole
    kappa_total = math.fsum(kappas)
    flags["absorption_within_budget"] = kappa_total <= 1.0 + 1e-9
    return SagnacReport(
        phase_optical=phase_opt,
        phase_hybrid=phase_hyb,
        enhancement=phase_hyb / phase_opt if phase_opt != 0 else math.nan,
        kappa_L_total=kappa_total,
        validity_flags=flags,
    )
