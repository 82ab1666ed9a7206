"""Fock-ladder matrix elements and effective laser-ion couplings.

Natural units are used throughout the package: hbar = 1, so energies double
as angular frequencies and times carry inverse-energy units.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import Iterable, Union

Triple = tuple[int, int, int]
TripleLike = Union["ModeVector", Iterable[int]]

__all__ = [
    "InvalidSubspaceError",
    "DegenerateCouplingError",
    "ModeVector",
    "SidebandPattern",
    "LaserDrive",
    "TrapParams",
    "CouplingConstants",
    "factorial_ratio_root",
    "coupling_alpha",
    "coupling_beta",
    "chi_ratio",
    "lamb_dicke_eta",
    "effective_gamma",
    "sideband_series_term",
]


class InvalidSubspaceError(ValueError):
    """Removing more quanta than a mode holds: the target state does not exist."""


class DegenerateCouplingError(ValueError):
    """The 1-2 coupling vanishes; ratios and periods built on it are undefined."""


def _int_triple(value: TripleLike, what: str) -> Triple:
    if isinstance(value, ModeVector):
        return value.components
    try:
        items = tuple(value)
    except TypeError:
        raise TypeError(f"{what} must be an iterable of three integers") from None
    if len(items) != 3:
        raise ValueError(f"{what} needs exactly 3 components, got {len(items)}")
    out = []
    for component in items:
        as_int = int(component)
        if as_int != component:
            raise ValueError(f"{what} components must be integers, got {component!r}")
        if as_int < 0:
            raise ValueError(f"{what} components must be >= 0, got {as_int}")
        out.append(as_int)
    return (out[0], out[1], out[2])


@dataclass(frozen=True)
class ModeVector:
    """Phonon occupations (nx, ny, nz) of the three trap modes."""

    nx: int
    ny: int
    nz: int

    def __post_init__(self) -> None:
        nx, ny, nz = _int_triple((self.nx, self.ny, self.nz), "mode vector")
        object.__setattr__(self, "nx", nx)
        object.__setattr__(self, "ny", ny)
        object.__setattr__(self, "nz", nz)

    @classmethod
    def of(cls, components: TripleLike) -> "ModeVector":
        if isinstance(components, ModeVector):
            return components
        return cls(*_int_triple(components, "mode vector"))

    @property
    def components(self) -> Triple:
        return (self.nx, self.ny, self.nz)

    def can_remove(self, quanta: TripleLike) -> bool:
        """Whether removing the given quanta per mode leaves a valid state."""
        removed = _int_triple(quanta, "removed quanta")
        return all(n >= d for n, d in zip(self.components, removed))

    def remove(self, quanta: TripleLike) -> "ModeVector":
        """Occupation after removing ``quanta`` per mode.

        Raises InvalidSubspaceError when any component would go negative: the
        resulting state does not exist and is never clamped to zero, because
        block classification depends on the distinction.
        """
        removed = _int_triple(quanta, "removed quanta")
        diff = tuple(n - d for n, d in zip(self.components, removed))
        if any(d < 0 for d in diff):
            raise InvalidSubspaceError(
                f"cannot remove {removed} quanta from occupation {self.components}"
            )
        return ModeVector(*diff)


@dataclass(frozen=True)
class SidebandPattern:
    """Quanta removed per mode by each electronic transition.

    ``r`` belongs to the 1-2 transition and ``l`` to the 2-3 transition.
    A zero triple is a carrier drive, (1, 0, 0) the first red sideband along
    x, and mixed triples such as (1, 1, 0) arise from multi-beam drives.
    """

    r: Triple
    l: Triple

    def __post_init__(self) -> None:
        object.__setattr__(self, "r", _int_triple(self.r, "pattern r"))
        object.__setattr__(self, "l", _int_triple(self.l, "pattern l"))


@dataclass(frozen=True)
class LaserDrive:
    """One laser beam: Rabi frequency, Lamb-Dicke parameter and phase."""

    rabi_frequency: float
    lamb_dicke: float
    phase: float = math.pi / 2

    def __post_init__(self) -> None:
        if not math.isfinite(self.rabi_frequency):
            raise ValueError("rabi_frequency must be finite")
        if not (math.isfinite(self.lamb_dicke) and self.lamb_dicke >= 0):
            raise ValueError("lamb_dicke must be finite and >= 0")
        if not math.isfinite(self.phase):
            raise ValueError("phase must be finite")


@dataclass(frozen=True)
class TrapParams:
    """Isotropic trap frequency, ion mass and laser wave number.

    Frequency and mass must be strictly positive; the wave number may be
    zero (a beam with no spatial variation along the trap axes).
    """

    trap_frequency: float
    ion_mass: float
    wave_number: float

    def __post_init__(self) -> None:
        for name in ("trap_frequency", "ion_mass"):
            value = getattr(self, name)
            if not (math.isfinite(value) and value > 0):
                raise ValueError(f"{name} must be finite and > 0")
        if not (math.isfinite(self.wave_number) and self.wave_number >= 0):
            raise ValueError("wave_number must be finite and >= 0")

    @property
    def spatial_spread(self) -> float:
        """Ground-state position spread sqrt(1 / (2 M omega0)), hbar = 1."""
        return math.sqrt(1.0 / (2.0 * self.ion_mass * self.trap_frequency))


@dataclass(frozen=True)
class CouplingConstants:
    """Effective transition couplings gamma1 (1-2) and gamma2 (2-3).

    Both are real and negative under the pi/2 beam-phase convention, but the
    fields stay complex-capable: the dynamics only ever consumes moduli and
    relative phases.
    """

    gamma1: complex
    gamma2: complex

    def __post_init__(self) -> None:
        for name in ("gamma1", "gamma2"):
            value = complex(getattr(self, name))
            if not cmath.isfinite(value):
                raise ValueError(f"{name} must be finite")
            object.__setattr__(self, name, value)

    @classmethod
    def from_drives(cls, drive_12: LaserDrive, drive_23: LaserDrive) -> "CouplingConstants":
        """First-sideband couplings of the two beams, beam phases included."""
        return cls(_beam_gamma(drive_12), _beam_gamma(drive_23))


def _beam_gamma(drive: LaserDrive) -> complex:
    # -i Omega eta exp(-eta^2/2) exp(-i phi); reduces to the real
    # effective_gamma value at phi = pi/2.
    eta = drive.lamb_dicke
    magnitude = drive.rabi_frequency * eta * math.exp(-0.5 * eta * eta)
    return -1j * magnitude * cmath.exp(-1j * drive.phase)


def factorial_ratio_root(n: TripleLike, removed: TripleLike) -> float:
    """Square-rooted falling-factorial product linking |n> to |n - removed>.

    Equals sqrt(prod_i n_i (n_i - 1) ... (n_i - d_i + 1)), the matrix element
    of the per-mode annihilation monomial between the two occupation states.
    Computed as a running product of falling factors, never through explicit
    factorials, so it stays finite far beyond the n ~ 170 point where the
    factorials themselves overflow; it can only overflow once the product of
    retained factors itself exceeds the double range (~1.8e308).

    Raises InvalidSubspaceError when any n_i - d_i < 0.
    """
    mode = ModeVector.of(n)
    d = _int_triple(removed, "removed quanta")
    if not mode.can_remove(d):
        raise InvalidSubspaceError(f"state {mode.components} minus {d} does not exist")
    product = 1.0
    for occupation, count in zip(mode.components, d):
        for k in range(count):
            product *= occupation - k
    return math.sqrt(product)


def coupling_alpha(gamma1: complex, n: TripleLike, r: TripleLike) -> complex:
    """Effective 1-2 block coupling: gamma1 * factorial_ratio_root(n, r)."""
    return complex(gamma1) * factorial_ratio_root(n, r)


def coupling_beta(gamma2: complex, n: TripleLike, r: TripleLike, l: TripleLike) -> complex:
    """Effective 2-3 block coupling: gamma2 * factorial_ratio_root(n - r, l)."""
    return complex(gamma2) * factorial_ratio_root(ModeVector.of(n).remove(r), l)


def chi_ratio(alpha: complex, beta: complex) -> complex:
    """Ratio beta / alpha of the 2-3 to 1-2 block couplings.

    The modulus of this ratio is the single dial every survival indicator
    depends on. A vanishing 1-2 coupling decouples the initial level and
    leaves the ratio (and all indicators) undefined.
    """
    a = complex(alpha)
    if a == 0:
        raise DegenerateCouplingError("1-2 coupling is zero; coupling ratio undefined")
    return complex(beta) / a


def lamb_dicke_eta(trap: TrapParams) -> float:
    """Lamb-Dicke parameter k * sqrt(1 / (2 M omega0)), hbar = 1."""
    return trap.wave_number * trap.spatial_spread


def effective_gamma(rabi_frequency: float, lamb_dicke: float) -> float:
    """First-sideband coupling -Omega * eta * exp(-eta^2 / 2), hbar = 1.

    This is the real-valued form fixed by the pi/2 beam-phase convention.
    """
    if not (math.isfinite(lamb_dicke) and lamb_dicke >= 0):
        raise ValueError("lamb_dicke must be finite and >= 0")
    return -rabi_frequency * lamb_dicke * math.exp(-0.5 * lamb_dicke * lamb_dicke)


def sideband_series_term(lamb_dicke: float, order: int, occupation: int) -> float:
    """Magnitude of one term of the first-sideband coupling series.

    Term ``j = order`` connects |n> to |n + 1> through j lowerings after
    j + 1 raisings, carrying the weight eta^(2j+1) / (j! (j+1)!). The j = 0
    value, eta * sqrt(n + 1), is the coupling retained in the Lamb-Dicke
    truncation; the j = 1 over j = 0 ratio bounds the truncation error.
    """
    eta = float(lamb_dicke)
    j = int(order)
    n = int(occupation)
    if not (math.isfinite(eta) and eta >= 0):
        raise ValueError("lamb_dicke must be finite and >= 0")
    if j != order or j < 0:
        raise ValueError("order must be a non-negative integer")
    if n != occupation or n < 0:
        raise ValueError("occupation must be a non-negative integer")
    # <n+1| a^j (a^dag)^(j+1) |n>: raise j+1 times, then lower j times.
    amplitude_sq = 1.0
    level = n
    for _ in range(j + 1):
        level += 1
        amplitude_sq *= level
    for _ in range(j):
        amplitude_sq *= level
        level -= 1
    weight = eta ** (2 * j + 1) / (math.factorial(j) * math.factorial(j + 1))
    return weight * math.sqrt(amplitude_sq)
