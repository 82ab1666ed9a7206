"""Closed-form hindering indicators of the three-level survival dynamics.

Every indicator depends on two numbers only: the non-negative coupling
ratio chi and the magnitude of the 1-2 block coupling (written ``coupling``
below). With hbar = 1 that magnitude equals the chi = 0 angular frequency,
the natural time scale of the reference two-level problem.

Each closed form has a grid or quadrature twin used for cross-checking; the
twins sample the survival probability directly and share no algebra with
the closed forms.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .dynamics import survival_probability
from .fock import DegenerateCouplingError

__all__ = [
    "GqzeInterval",
    "IndicatorReport",
    "poincare_time",
    "min_survival",
    "time_of_min",
    "mean_survival",
    "mean_level_probabilities",
    "sub_threshold_measure",
    "gqze_interval",
    "indicator_report",
    "chi_sweep",
    "min_survival_grid",
    "time_of_min_grid",
    "mean_survival_quadrature",
    "sub_threshold_measure_grid",
]

_TWO_PI = 2.0 * math.pi


def _checked_coupling(coupling: float) -> float:
    value = float(coupling)
    if not math.isfinite(value) or value <= 0:
        raise DegenerateCouplingError("the 1-2 coupling magnitude must be > 0")
    return value


def _chi_array(chi) -> tuple[np.ndarray, bool]:
    values = np.asarray(chi, dtype=float)
    if not np.all(np.isfinite(values)) or np.any(values < 0):
        raise ValueError("chi must be finite and >= 0")
    return values, values.ndim == 0


def angular_frequency(coupling: float, chi: float) -> float:
    """Block angular frequency coupling * sqrt(1 + chi^2), hbar = 1."""
    return _checked_coupling(coupling) * math.sqrt(1.0 + float(chi) ** 2)


def poincare_time(coupling, chi):
    """Recurrence period 2 pi / (coupling * sqrt(1 + chi^2)).

    One full Rabi cycle of the block; the survival probability returns to 1
    exactly here.
    """
    base = _checked_coupling(coupling)
    values, scalar = _chi_array(chi)
    result = _TWO_PI / (base * np.sqrt(1.0 + values * values))
    return float(result) if scalar else result


def min_survival(chi):
    """Absolute minimum of the survival probability over one period.

    Zero while chi <= 1 (the survival still touches zero); for chi > 1 the
    floor rises as ((chi^2 - 1) / (chi^2 + 1))^2 and tends to 1, which is
    the sharpest signature of the hindered evolution.
    """
    values, scalar = _chi_array(chi)
    chi_sq = values * values
    floor = np.where(chi_sq > 1.0, ((chi_sq - 1.0) / (chi_sq + 1.0)) ** 2, 0.0)
    return float(floor) if scalar else floor


def time_of_min(coupling, chi):
    """First time the survival probability reaches its absolute minimum.

    arccos(-chi^2) / w for chi <= 1 (where the survival first touches zero)
    and pi / w for chi > 1 (the bottom of the cosine). Continuous at
    chi = 1, where it is also maximal.
    """
    base = _checked_coupling(coupling)
    values, scalar = _chi_array(chi)
    chi_sq = values * values
    w = base * np.sqrt(1.0 + chi_sq)
    phase = np.where(chi_sq <= 1.0, np.arccos(np.clip(-chi_sq, -1.0, 1.0)), math.pi)
    result = phase / w
    return float(result) if scalar else result


def mean_survival(chi):
    """Period-averaged survival probability (chi^4 + 1/2) / (1 + chi^2)^2.

    Minimal, with value 1/3, at chi = 1/sqrt(2); tends to 1 as chi grows.
    """
    values, scalar = _chi_array(chi)
    chi_sq = values * values
    result = (chi_sq * chi_sq + 0.5) / (1.0 + chi_sq) ** 2
    return float(result) if scalar else result


def mean_level_probabilities(chi):
    """Period-averaged populations of the three levels, starting from |n, 1>.

    (P1, P2, P3) = ((chi^4 + 1/2) / (1 + chi^2)^2,
                    1 / (2 (1 + chi^2)),
                    (3/2) chi^2 / (1 + chi^2)^2),
    which sum to 1 identically. The middle and bottom forms follow from
    period-averaging the squared evolution amplitudes; the test suite pins
    them against direct quadrature.
    """
    values, scalar = _chi_array(chi)
    chi_sq = values * values
    top = (chi_sq * chi_sq + 0.5) / (1.0 + chi_sq) ** 2
    middle = 0.5 / (1.0 + chi_sq)
    bottom = 1.5 * chi_sq / (1.0 + chi_sq) ** 2
    if scalar:
        return (float(top), float(middle), float(bottom))
    return (top, middle, bottom)


def sub_threshold_measure(chi: float, epsilon: float, coupling: float) -> float:
    """Total time per period spent below mean survival minus ``epsilon``.

    Lebesgue measure of {t in [0, T_p] : P(t) < mean - epsilon}, computed by
    inverting the survival formula through arccos. Writing tau for the
    threshold, P(t) < tau exactly when cos(wt) lies strictly between
    -sqrt(tau) (1 + chi^2) - chi^2 and +sqrt(tau) (1 + chi^2) - chi^2; both
    roots matter when chi < 1 (the pre-squared amplitude changes sign there)
    and each bound is clipped to the cosine range before the angular measure
    2 (arccos(low) - arccos(high)) is taken. Returns 0 once the threshold
    falls to or below the survival floor.
    """
    epsilon = float(epsilon)
    if not (math.isfinite(epsilon) and epsilon > 0):
        raise ValueError("epsilon must be finite and > 0")
    base = _checked_coupling(coupling)
    values, _ = _chi_array(chi)
    chi_value = float(values)
    threshold = mean_survival(chi_value) - epsilon
    if threshold <= 0.0:
        return 0.0
    chi_sq = chi_value * chi_value
    w = base * math.sqrt(1.0 + chi_sq)
    root = math.sqrt(threshold)
    cos_high = min(1.0, max(-1.0, root * (1.0 + chi_sq) - chi_sq))
    cos_low = min(1.0, max(-1.0, -root * (1.0 + chi_sq) - chi_sq))
    angle = math.acos(cos_low) - math.acos(cos_high)
    return 2.0 * angle / w


@dataclass(frozen=True)
class GqzeInterval:
    """First interval [0, end] on which the hindered survival stays above
    the uncoupled reference, with its length in units of the hindered
    period."""

    start: float
    end: float
    period_ratio: float
    present: bool


def gqze_interval(
    chi: float,
    coupling: float,
    order_threshold: float = 0.5,
    points_per_period: int = 10_000,
    max_reference_periods: float = 4.0,
) -> Optional[GqzeInterval]:
    """Locate the first time the hindered survival falls back to the
    chi = 0 reference curve.

    Both curves start at 1 with the same quadratic decay, and for chi > 0
    the quartic term keeps the hindered curve strictly above the reference
    near t = 0. The first equality time is bracketed on a grid of
    ``points_per_period`` points per shorter period and refined by
    bisection. The hindering counts as present when the crossing lies at
    least ``order_threshold`` hindered periods out.

    chi = 0 reproduces the reference exactly and yields no interval. If no
    strict crossing occurs within ``max_reference_periods`` reference
    periods (possible only for commensurate frequencies, where the curves
    touch without crossing) the closest-approach grid point is reported.
    """
    values, _ = _chi_array(chi)
    chi_value = float(values)
    base = _checked_coupling(coupling)
    if not 0.0 < order_threshold <= 1.0:
        raise ValueError("order_threshold must lie in (0, 1]")
    if chi_value == 0.0:
        return None
    w = base * math.sqrt(1.0 + chi_value * chi_value)
    reference_period = _TWO_PI / base
    hindered_period = _TWO_PI / w
    step = min(reference_period, hindered_period) / float(points_per_period)
    count = int(math.ceil(max_reference_periods * reference_period / step))
    if count > 200_000_000:
        raise ValueError("chi too large for the requested grid resolution")

    times = np.arange(1, count + 1) * step
    gap = survival_probability(chi_value, w, times) - survival_probability(
        0.0, base, times
    )
    # Rounding can push the tiny small-t gap a few ulp negative; only a
    # clearly negative value counts as a crossing.
    crossing_tol = 1e-13
    below = np.nonzero(gap < -crossing_tol)[0]
    if below.size:
        first = int(below[0])
        positive_before = np.nonzero(gap[:first] > crossing_tol)[0]
        left = float(times[positive_before[-1]]) if positive_before.size else 0.0
        right = float(times[first])
        end = _bisect_gap(chi_value, w, base, left, right)
    else:
        end = float(times[int(np.argmin(gap))])
    ratio = end / hindered_period
    return GqzeInterval(0.0, end, ratio, ratio >= order_threshold)


def _bisect_gap(chi: float, w: float, base: float, left: float, right: float) -> float:
    def gap(t: float) -> float:
        return survival_probability(chi, w, t) - survival_probability(0.0, base, t)

    for _ in range(80):
        mid = 0.5 * (left + right)
        if gap(mid) > 0.0:
            left = mid
        else:
            right = mid
    return 0.5 * (left + right)


@dataclass(frozen=True)
class IndicatorReport:
    """Every hindering indicator for one coupling ratio.

    Times are in internal units (hbar = 1) for the given 1-2 coupling
    magnitude; callers that want the 1/omega(0) convention multiply by that
    magnitude.
    """

    chi: float
    coupling: float
    angular_frequency: float
    poincare_period: float
    survival_min: float
    time_of_min: float
    survival_mean: float
    level2_mean: float
    level3_mean: float
    epsilon: float
    sub_threshold_time: float
    gqze: Optional[GqzeInterval]

    def __post_init__(self) -> None:
        total = self.survival_mean + self.level2_mean + self.level3_mean
        if abs(total - 1.0) > 1e-12:
            raise ValueError("mean level probabilities must sum to 1")
        if not 0.0 <= self.survival_min <= self.survival_mean <= 1.0:
            raise ValueError("survival floor must not exceed the survival mean")
        if not 0.0 <= self.sub_threshold_time <= self.poincare_period * (1.0 + 1e-12):
            raise ValueError("sub-threshold time must lie within one period")


def indicator_report(
    chi: float,
    coupling: float,
    epsilon: float,
    order_threshold: float = 0.5,
) -> IndicatorReport:
    """Assemble the full indicator set for one coupling ratio."""
    values, _ = _chi_array(chi)
    chi_value = float(values)
    base = _checked_coupling(coupling)
    mean, level2, level3 = mean_level_probabilities(chi_value)
    return IndicatorReport(
        chi=chi_value,
        coupling=base,
        angular_frequency=angular_frequency(base, chi_value),
        poincare_period=poincare_time(base, chi_value),
        survival_min=min_survival(chi_value),
        time_of_min=time_of_min(base, chi_value),
        survival_mean=mean,
        level2_mean=level2,
        level3_mean=level3,
        epsilon=float(epsilon),
        sub_threshold_time=sub_threshold_measure(chi_value, epsilon, base),
        gqze=gqze_interval(chi_value, base, order_threshold),
    )


def chi_sweep(
    chi_values: Sequence[float],
    epsilon: float,
    coupling: float,
    order_threshold: float = 0.5,
) -> list[IndicatorReport]:
    """Indicator reports over a sorted grid of coupling ratios.

    Entries are independent and deterministic; the grid must be finite and
    non-decreasing.
    """
    values = np.asarray(chi_values, dtype=float)
    if values.ndim != 1 or values.size == 0:
        raise ValueError("chi_values must be a non-empty 1-D sequence")
    if not np.all(np.isfinite(values)):
        raise ValueError("chi_values must be finite")
    if np.any(np.diff(values) < 0):
        raise ValueError("chi_values must be sorted in non-decreasing order")
    return [
        indicator_report(float(value), coupling, epsilon, order_threshold)
        for value in values
    ]


# --- numeric twins -------------------------------------------------------
#
# The functions below sample the survival probability directly and act as
# independent cross-checks of the closed forms above. run_validate and the
# test suite compare the two routes; neither side may be dropped.


def min_survival_grid(chi: float, coupling: float = 1.0, samples: int = 100_000) -> float:
    """Grid minimum of the survival probability over one period."""
    period = poincare_time(coupling, chi)
    w = angular_frequency(coupling, chi)
    times = np.linspace(0.0, period, samples, endpoint=False)
    return float(np.min(survival_probability(chi, w, times)))


def time_of_min_grid(chi: float, coupling: float = 1.0, samples: int = 100_000) -> float:
    """First-occurrence grid argmin of the survival probability.

    The survival depends on time only through cos(wt), so it is symmetric
    about the half period and its first minimum always lies in the first
    half; restricting the argmin there makes "first occurrence" exact at
    grid resolution.
    """
    period = poincare_time(coupling, chi)
    w = angular_frequency(coupling, chi)
    times = np.linspace(0.0, 0.5 * period, samples)
    return float(times[int(np.argmin(survival_probability(chi, w, times)))])


def mean_survival_quadrature(
    chi: float, coupling: float = 1.0, panels: int = 100_000
) -> float:
    """Trapezoidal period average of the survival probability."""
    period = poincare_time(coupling, chi)
    w = angular_frequency(coupling, chi)
    times = np.linspace(0.0, period, panels + 1)
    probabilities = survival_probability(chi, w, times)
    weights = np.full(panels + 1, 1.0)
    weights[0] = weights[-1] = 0.5
    return float(np.sum(weights * probabilities) / panels)


def sub_threshold_measure_grid(
    chi: float, epsilon: float, coupling: float = 1.0, samples: int = 400_000
) -> float:
    """Midpoint-sampled measure of the sub-threshold set over one period."""
    if not (math.isfinite(float(epsilon)) and float(epsilon) > 0):
        raise ValueError("epsilon must be finite and > 0")
    period = poincare_time(coupling, chi)
    w = angular_frequency(coupling, chi)
    threshold = mean_survival(chi) - float(epsilon)
    step = period / samples
    times = (np.arange(samples) + 0.5) * step
    count = int(np.count_nonzero(survival_probability(chi, w, times) < threshold))
    return count * step
