"""Invariant blocks of the sideband interaction and their exact propagators.

The interaction Hamiltonian is block diagonal over chains
|n, 1> -> |n - r, 2> -> |n - r - l, 3| that truncate at the first
non-existent occupation. Every block is at most 3 x 3 and tridiagonal, so
its time evolution is available in closed form; an independent
eigendecomposition propagator is kept alongside as a cross-check.

Evolution is computed in the interaction picture. The free-evolution phase
cancels from every observable handled here (survival probabilities, level
populations, relative phases within one block), so lab-frame phases are out
of scope.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Union

import numpy as np

from .fock import (
    CouplingConstants,
    DegenerateCouplingError,
    ModeVector,
    SidebandPattern,
    coupling_alpha,
    coupling_beta,
    chi_ratio,
)

__all__ = [
    "BasisLabel",
    "BlockShape",
    "BlockSystem",
    "VibronicState",
    "classify_block",
    "build_block",
    "propagate_analytic",
    "propagate_oracle",
    "survival_probability",
    "level_probabilities",
]

BasisLabel = tuple[ModeVector, int]

_NORM_TOL = 1e-9


@dataclass(frozen=True)
class BlockShape:
    """Dimension and ordered basis chain of one invariant subspace."""

    dimension: int
    basis_labels: tuple[BasisLabel, ...]


def classify_block(n: ModeVector, pattern: SidebandPattern) -> BlockShape:
    """Basis chain of the invariant subspace containing |n, 1>.

    The chain is one dimensional when any n_i - r_i < 0, two dimensional
    when n - r exists but some n_i - r_i - l_i < 0, and three dimensional
    when the full chain exists.
    """
    n = ModeVector.of(n)
    labels: list[BasisLabel] = [(n, 1)]
    if n.can_remove(pattern.r):
        middle = n.remove(pattern.r)
        labels.append((middle, 2))
        if middle.can_remove(pattern.l):
            labels.append((middle.remove(pattern.l), 3))
    return BlockShape(len(labels), tuple(labels))


@dataclass(frozen=True)
class BlockSystem:
    """One invariant block: basis chain, couplings and derived frequencies.

    ``coupling_12`` and ``coupling_23`` are the tridiagonal matrix elements
    (None when the corresponding transition leaves the block).
    ``coupling_norm`` is sqrt(|c12|^2 + |c23|^2) and doubles as the block's
    angular frequency because hbar = 1.
    """

    dimension: int
    basis_labels: tuple[BasisLabel, ...]
    coupling_12: Optional[complex]
    coupling_23: Optional[complex]
    coupling_norm: float
    angular_frequency: float

    @property
    def chi(self) -> Optional[complex]:
        """Coupling ratio of the block; 0 for two-level blocks, None for
        one-level blocks. Raises DegenerateCouplingError when the 1-2
        coupling vanishes."""
        if self.dimension == 1:
            return None
        if self.dimension == 2:
            return chi_ratio(self.coupling_12, 0.0)
        return chi_ratio(self.coupling_12, self.coupling_23)

    @property
    def is_degenerate(self) -> bool:
        """True when level 1 is decoupled and the ratio-based indicators
        do not apply."""
        return self.dimension >= 2 and self.coupling_12 == 0

    def hamiltonian(self) -> np.ndarray:
        """Dense tridiagonal block matrix (interaction picture, hbar = 1)."""
        h = np.zeros((self.dimension, self.dimension), dtype=complex)
        if self.dimension >= 2:
            h[0, 1] = self.coupling_12
            h[1, 0] = np.conj(self.coupling_12)
        if self.dimension == 3:
            h[1, 2] = self.coupling_23
            h[2, 1] = np.conj(self.coupling_23)
        return h


def build_block(
    n: ModeVector, pattern: SidebandPattern, couplings: CouplingConstants
) -> BlockSystem:
    """Assemble the invariant block for |n, 1> under the given drive.

    A missing target state truncates the chain (it never raises); the
    couplings of the surviving transitions scale with the square-rooted
    falling-factorial factors of the occupations involved.
    """
    shape = classify_block(n, pattern)
    alpha: Optional[complex] = None
    beta: Optional[complex] = None
    if shape.dimension >= 2:
        alpha = coupling_alpha(couplings.gamma1, n, pattern.r)
    if shape.dimension == 3:
        beta = coupling_beta(couplings.gamma2, n, pattern.r, pattern.l)
    norm = math.hypot(
        abs(alpha) if alpha is not None else 0.0,
        abs(beta) if beta is not None else 0.0,
    )
    return BlockSystem(
        dimension=shape.dimension,
        basis_labels=shape.basis_labels,
        coupling_12=alpha,
        coupling_23=beta,
        coupling_norm=norm,
        angular_frequency=norm,  # hbar = 1
    )


@dataclass(frozen=True)
class VibronicState:
    """Complex amplitudes over one block's basis chain, unit norm."""

    amplitudes: np.ndarray

    def __post_init__(self) -> None:
        amps = np.array(self.amplitudes, dtype=complex)
        if amps.ndim != 1 or not 1 <= amps.size <= 3:
            raise ValueError("amplitudes must be a 1-D vector of length 1..3")
        norm = np.linalg.norm(amps)
        if abs(norm - 1.0) > _NORM_TOL:
            raise ValueError(f"state must be normalized, got norm {norm!r}")
        amps.flags.writeable = False
        object.__setattr__(self, "amplitudes", amps)

    @classmethod
    def basis_state(cls, dimension: int, index: int = 0) -> "VibronicState":
        if not 0 <= index < dimension:
            raise ValueError("basis index outside block")
        amps = np.zeros(dimension, dtype=complex)
        amps[index] = 1.0
        return cls(amps)

    @property
    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))

    def overlap(self, other: "VibronicState") -> complex:
        """<self | other>."""
        return complex(np.vdot(self.amplitudes, other.amplitudes))


def _check_state(block: BlockSystem, state: VibronicState) -> None:
    if state.amplitudes.size != block.dimension:
        raise ValueError(
            f"state dimension {state.amplitudes.size} does not match "
            f"block dimension {block.dimension}"
        )


def _closed_form_propagator(block: BlockSystem, t: float) -> np.ndarray:
    """Closed-form evolution matrix exp(-i H t) of the tridiagonal block.

    Because H^3 = w^2 H with w = coupling_norm, the exponential collapses to
    I + (cos(wt) - 1) H^2 / w^2 - i sin(wt) H / w; the entries below are
    that expression written out per matrix element.
    """
    dim = block.dimension
    if dim == 1 or block.coupling_norm == 0.0:
        return np.eye(dim, dtype=complex)
    w = block.angular_frequency
    c = math.cos(w * t)
    s = math.sin(w * t)
    a = complex(block.coupling_12)
    if dim == 2:
        norm = abs(a)
        return np.array(
            [
                [c, -1j * a * s / norm],
                [-1j * np.conj(a) * s / norm, c],
            ]
        )
    b = complex(block.coupling_23)
    # norm_sq built directly from the couplings so the t = 0 matrix is the
    # exact identity (squaring a rounded square root would miss by one ulp).
    a_sq = abs(a) ** 2
    b_sq = abs(b) ** 2
    norm_sq = a_sq + b_sq
    norm = math.sqrt(norm_sq)
    return np.array(
        [
            [
                (b_sq + a_sq * c) / norm_sq,
                -1j * a * s / norm,
                a * b * (c - 1.0) / norm_sq,
            ],
            [
                -1j * np.conj(a) * s / norm,
                c,
                -1j * b * s / norm,
            ],
            [
                np.conj(a) * np.conj(b) * (c - 1.0) / norm_sq,
                -1j * np.conj(b) * s / norm,
                (a_sq + b_sq * c) / norm_sq,
            ],
        ]
    )


def propagate_analytic(block: BlockSystem, initial: VibronicState, t: float) -> VibronicState:
    """Evolve a block state by the closed-form propagator.

    Two-level blocks use the same formula family with the 2-3 coupling set
    to zero (plain Rabi oscillation); one-level blocks are stationary.
    Negative times are allowed (the evolution is a unitary group).
    """
    _check_state(block, initial)
    return VibronicState(_closed_form_propagator(block, float(t)) @ initial.amplitudes)


def _spectral_propagator(block: BlockSystem, t: float) -> np.ndarray:
    """Evolution matrix from the explicit eigensystem of the block.

    The tridiagonal block has eigenvalues {0, +w, -w} with w = coupling_norm
    and eigenvectors writable directly from the couplings; the propagator is
    assembled as sum_k exp(-i lambda_k t) |v_k><v_k|. Deliberately shares no
    code with the closed-form path.
    """
    dim = block.dimension
    if dim == 1 or block.coupling_norm == 0.0:
        return np.eye(dim, dtype=complex)
    w = block.coupling_norm
    a = complex(block.coupling_12)
    phase_minus = np.exp(-1j * w * t)
    phase_plus = np.exp(+1j * w * t)
    if dim == 2:
        v_plus = np.array([a, w]) / (math.sqrt(2.0) * w)
        v_minus = np.array([a, -w]) / (math.sqrt(2.0) * w)
        return phase_minus * np.outer(v_plus, v_plus.conj()) + phase_plus * np.outer(
            v_minus, v_minus.conj()
        )
    b = complex(block.coupling_23)
    v_zero = np.array([b, 0.0, -np.conj(a)]) / w
    v_plus = np.array([a, w, np.conj(b)]) / (math.sqrt(2.0) * w)
    v_minus = np.array([a, -w, np.conj(b)]) / (math.sqrt(2.0) * w)
    return (
        np.outer(v_zero, v_zero.conj())
        + phase_minus * np.outer(v_plus, v_plus.conj())
        + phase_plus * np.outer(v_minus, v_minus.conj())
    )


def propagate_oracle(block: BlockSystem, initial: VibronicState, t: float) -> VibronicState:
    """Evolve a block state by explicit eigendecomposition.

    Independent verification path for ``propagate_analytic``; the two must
    agree to 1e-10 per amplitude for any block and time.
    """
    _check_state(block, initial)
    return VibronicState(_spectral_propagator(block, float(t)) @ initial.amplitudes)


def survival_probability(chi, angular_frequency, t):
    """Survival probability of the top-of-chain state |n, 1>.

    ((chi^2 + cos(w t)) / (chi^2 + 1))^2 with chi the modulus of the block
    coupling ratio and w the block angular frequency. Accepts a scalar or
    array ``t`` and returns matching shape.
    """
    w = float(angular_frequency)
    if not (math.isfinite(w) and w > 0):
        raise ValueError("angular_frequency must be finite and > 0")
    chi = float(chi)
    if not (math.isfinite(chi) and chi >= 0):
        raise ValueError("chi must be finite and >= 0")
    chi_sq = chi * chi
    times = np.asarray(t, dtype=float)
    result = ((chi_sq + np.cos(w * times)) / (chi_sq + 1.0)) ** 2
    if times.ndim == 0:
        return float(result)
    return result


def level_probabilities(state: VibronicState) -> tuple[float, float, float]:
    """Populations of the three electronic levels, absent levels as zero."""
    probs = np.abs(state.amplitudes) ** 2
    padded = np.zeros(3)
    padded[: probs.size] = probs
    return (float(padded[0]), float(padded[1]), float(padded[2]))
