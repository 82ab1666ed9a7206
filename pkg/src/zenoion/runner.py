"""Execution of the CLI run modes: sweeps, evolution runs, figure CSVs and
the self-validation harness.

All emitted time columns are omega(0)-scaled (units of 1/omega(0), where
omega(0) is the 1-2 coupling magnitude over hbar); each CSV starts with a
comment line restating that convention. Floats are written with 17
significant digits so the files round-trip 64-bit values exactly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from pathlib import Path
from typing import Callable, Iterable, Optional, Sequence

import numpy as np

from .config import ConfigError, RunConfig
from .dynamics import (
    BlockSystem,
    VibronicState,
    build_block,
    level_probabilities,
    propagate_analytic,
    propagate_oracle,
    survival_probability,
)
from .fock import (
    CouplingConstants,
    ModeVector,
    SidebandPattern,
    factorial_ratio_root,
)
from .indicators import (
    IndicatorReport,
    chi_sweep,
    indicator_report,
    mean_survival,
    mean_survival_quadrature,
    min_survival,
    min_survival_grid,
    sub_threshold_measure,
    sub_threshold_measure_grid,
    time_of_min,
    time_of_min_grid,
)

__all__ = [
    "run_evolve",
    "run_survival",
    "run_indicators",
    "run_sweep",
    "run_figures",
    "run_validate",
    "ValidationCheck",
    "ValidationReport",
    "write_csv",
]

_UNITS_COMMENT = "time columns in units of 1/omega(0), hbar = 1; probabilities dimensionless"

_FIGURE_CHIS = (0.0, 1.0, 5.0, 10.0)


def _format_value(value) -> str:
    if isinstance(value, (bool, np.bool_)):
        return str(int(value))
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    return f"{float(value):.16e}"


def write_csv(path: Path, comment: str, header: Sequence[str], rows: Iterable[Sequence]) -> None:
    """Write one CSV: a '#' unit comment, a header row, then data rows."""
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8", newline="") as handle:
        handle.write(f"# {comment}\n")
        handle.write(",".join(header) + "\n")
        for row in rows:
            handle.write(",".join(_format_value(value) for value in row) + "\n")


def _chi_grid(chi_max: float, chi_step: float) -> np.ndarray:
    # Rounding to 12 decimals pins grid points like 1.00 exactly, so
    # piecewise indicator branches switch at the printed value.
    count = int(round(chi_max / chi_step))
    return np.round(np.arange(count + 1) * chi_step, 12)


def _output_file(config: RunConfig, default_name: str) -> Path:
    target = Path(config.out)
    if target.suffix == ".csv":
        return target
    return target / default_name


@dataclass(frozen=True)
class ResolvedRun:
    """Block, coupling ratio and time scale implied by one configuration."""

    block: BlockSystem
    chi: float
    coupling: float  # |1-2 coupling|; equals omega(0) with hbar = 1


def _resolve(config: RunConfig) -> ResolvedRun:
    block = build_block(
        config.mode_vector(), config.sideband_pattern(), config.coupling_constants()
    )
    if block.dimension == 1:
        raise ConfigError(
            "the configured block is one dimensional (the 1-2 sideband finds "
            "no target state); there is no omega(0) time scale"
        )
    if block.is_degenerate:
        raise ConfigError(
            "the configured 1-2 coupling vanishes; survival indicators are undefined"
        )
    chi = abs(block.chi)
    return ResolvedRun(block=block, chi=chi, coupling=abs(block.coupling_12))


def run_evolve(config: RunConfig) -> Path:
    """Evolve |n, 1> over the scaled time grid; emit level populations."""
    run = _resolve(config)
    initial = VibronicState.basis_state(run.block.dimension, 0)
    t_scaled = np.linspace(0.0, config.t_max, config.samples)
    rows = []
    for value in t_scaled:
        state = propagate_analytic(run.block, initial, value / run.coupling)
        p1, p2, p3 = level_probabilities(state)
        survival = abs(initial.overlap(state)) ** 2
        rows.append((value, p1, p2, p3, survival))
    path = _output_file(config, "evolve.csv")
    write_csv(path, _UNITS_COMMENT, ("t_scaled", "p1", "p2", "p3", "survival"), rows)
    return path


def run_survival(config: RunConfig) -> Path:
    """Survival probability of |n, 1> over the scaled time grid."""
    run = _resolve(config)
    t_scaled = np.linspace(0.0, config.t_max, config.samples)
    scaled_frequency = run.block.angular_frequency / run.coupling
    values = survival_probability(run.chi, scaled_frequency, t_scaled)
    path = _output_file(config, "survival.csv")
    write_csv(
        path,
        _UNITS_COMMENT,
        ("t_scaled", "survival"),
        zip(t_scaled, values),
    )
    return path


_SWEEP_HEADER = (
    "chi",
    "omega_scaled",
    "T_p_scaled",
    "m",
    "t_m_scaled",
    "P_mean",
    "P2_mean",
    "P3_mean",
    "S_scaled",
    "S_over_Tp",
    "gqze_present",
    "t_chi_scaled",
    "t_chi_over_Tp",
)


def _report_row(report: IndicatorReport) -> tuple:
    scale = report.coupling  # omega(0), hbar = 1
    if report.gqze is None:
        present, end_scaled, ratio = False, math.nan, math.nan
    else:
        present = report.gqze.present
        end_scaled = report.gqze.end * scale
        ratio = report.gqze.period_ratio
    return (
        report.chi,
        report.angular_frequency / scale,
        report.poincare_period * scale,
        report.survival_min,
        report.time_of_min * scale,
        report.survival_mean,
        report.level2_mean,
        report.level3_mean,
        report.sub_threshold_time * scale,
        report.sub_threshold_time / report.poincare_period,
        present,
        end_scaled,
        ratio,
    )


def format_report(report: IndicatorReport) -> str:
    """Human-readable indicator report, raw and omega(0)-scaled times."""
    scale = report.coupling
    lines = [
        f"chi                    = {report.chi:.12g}",
        f"omega / omega(0)       = {report.angular_frequency / scale:.12g}",
        f"T_p * omega(0)         = {report.poincare_period * scale:.12g}",
        f"T_p (internal units)   = {report.poincare_period:.12g}",
        f"m                      = {report.survival_min:.12g}",
        f"t_m * omega(0)         = {report.time_of_min * scale:.12g}",
        f"t_m (internal units)   = {report.time_of_min:.12g}",
        f"P_mean                 = {report.survival_mean:.12g}",
        f"P2_mean                = {report.level2_mean:.12g}",
        f"P3_mean                = {report.level3_mean:.12g}",
        f"S * omega(0)           = {report.sub_threshold_time * scale:.12g}"
        f"  (epsilon = {report.epsilon:.12g})",
        f"S / T_p                = {report.sub_threshold_time / report.poincare_period:.12g}",
    ]
    if report.gqze is None:
        lines.append("hindering interval     = none (chi = 0 reproduces the reference)")
    else:
        verdict = "present" if report.gqze.present else "below order threshold"
        lines.append(
            f"hindering interval     = [0, {report.gqze.end * scale:.12g}] scaled, "
            f"t_chi / T_p = {report.gqze.period_ratio:.12g} ({verdict})"
        )
    return "\n".join(lines)


def run_indicators(config: RunConfig) -> tuple[str, Path]:
    """Indicator report for one configuration: text plus a one-row CSV."""
    run = _resolve(config)
    report = indicator_report(run.chi, run.coupling, config.epsilon, config.order_threshold)
    path = _output_file(config, "indicators.csv")
    write_csv(path, _UNITS_COMMENT, _SWEEP_HEADER, [_report_row(report)])
    return format_report(report), path


def run_sweep(config: RunConfig) -> Path:
    """Indicator reports over a chi grid (single point when chi is given).

    The sweep is dimensionless: the 1-2 coupling is normalized to 1, so the
    scaled and internal time units coincide.
    """
    if config.has_chi_override:
        grid = np.asarray([config.chi], dtype=float)
    else:
        grid = _chi_grid(config.chi_max, config.chi_step)
    reports = chi_sweep(grid, config.epsilon, 1.0, config.order_threshold)
    path = _output_file(config, "sweep.csv")
    write_csv(path, _UNITS_COMMENT, _SWEEP_HEADER, (_report_row(r) for r in reports))
    return path


def run_figures(config: RunConfig) -> list[Path]:
    """Emit fig1.csv ... fig4.csv under the output directory.

    fig1: survival vs scaled time for chi in {0, 1, 5, 10};
    fig2: survival minimum vs chi on [0, 3];
    fig3: scaled first-minimum time vs chi on [0, 3];
    fig4: period-averaged survival vs chi on [0, 5].
    All use the unit 1-2 coupling, so omega(0) = 1.
    """
    out_dir = Path(config.out)
    t_scaled = np.linspace(0.0, config.t_max, config.samples)
    columns = [
        survival_probability(chi, math.sqrt(1.0 + chi * chi), t_scaled)
        for chi in _FIGURE_CHIS
    ]
    fig1 = out_dir / "fig1.csv"
    write_csv(
        fig1,
        _UNITS_COMMENT,
        ("t_scaled", "P_chi0", "P_chi1", "P_chi5", "P_chi10"),
        zip(t_scaled, *columns),
    )

    chi_short = _chi_grid(3.0, config.chi_step)
    fig2 = out_dir / "fig2.csv"
    write_csv(
        fig2,
        "chi dimensionless; m = survival-probability minimum over one period",
        ("chi", "m"),
        zip(chi_short, min_survival(chi_short)),
    )

    fig3 = out_dir / "fig3.csv"
    write_csv(
        fig3,
        _UNITS_COMMENT,
        ("chi", "t_m_scaled"),
        zip(chi_short, time_of_min(1.0, chi_short)),
    )

    chi_long = _chi_grid(5.0, config.chi_step)
    fig4 = out_dir / "fig4.csv"
    write_csv(
        fig4,
        "chi dimensionless; P_mean = period-averaged survival probability",
        ("chi", "P_mean"),
        zip(chi_long, mean_survival(chi_long)),
    )
    return [fig1, fig2, fig3, fig4]


# --- validation harness ---------------------------------------------------


@dataclass(frozen=True)
class ValidationCheck:
    name: str
    max_deviation: float
    tolerance: float

    @property
    def passed(self) -> bool:
        return self.max_deviation <= self.tolerance


@dataclass(frozen=True)
class ValidationReport:
    checks: tuple[ValidationCheck, ...]

    @property
    def ok(self) -> bool:
        return all(check.passed for check in self.checks)

    def format_text(self) -> str:
        lines = []
        for check in self.checks:
            verdict = "PASS" if check.passed else "FAIL"
            lines.append(
                f"{check.name:<46} max dev {check.max_deviation:.3e}  "
                f"tol {check.tolerance:.1e}  {verdict}"
            )
        passed = sum(check.passed for check in self.checks)
        lines.append(f"overall: {'PASS' if self.ok else 'FAIL'} ({passed}/{len(self.checks)} checks)")
        return "\n".join(lines)


_THREE_CHAIN_PATTERNS = (
    ((3, 1, 0), (1, 0, 0), (1, 1, 0)),
    ((2, 2, 2), (1, 1, 0), (0, 1, 1)),
    ((1, 0, 0), (1, 0, 0), (0, 0, 0)),
    ((4, 3, 2), (2, 1, 0), (1, 1, 1)),
    ((0, 0, 0), (0, 0, 0), (0, 0, 0)),
    ((5, 0, 1), (2, 0, 0), (1, 0, 1)),
)

_TWO_CHAIN_PATTERNS = (
    ((1, 0, 0), (1, 0, 0), (1, 0, 0)),
    ((2, 1, 0), (1, 1, 0), (2, 0, 0)),
    ((0, 3, 0), (0, 2, 0), (0, 2, 0)),
)

_ONE_CHAIN_PATTERNS = (
    ((0, 0, 0), (1, 0, 0), (0, 0, 0)),
    ((2, 0, 1), (0, 1, 0), (1, 1, 1)),
)


def _random_unit_state(rng: np.random.Generator, dimension: int) -> VibronicState:
    amps = rng.standard_normal(dimension) + 1j * rng.standard_normal(dimension)
    return VibronicState(amps / np.linalg.norm(amps))


def random_cases(rng: np.random.Generator, count: int = 100):
    """Randomized (block, state, time) cases spanning chi in [0, 20].

    Yields three-chain blocks with chi swept uniformly over [0, 20] (random
    coupling phases and magnitudes), plus a tail of two- and one-chain
    blocks so every dimension is exercised.
    """
    cases = []
    targets = np.linspace(0.0, 20.0, count)
    for index, target in enumerate(targets):
        n, r, l = _THREE_CHAIN_PATTERNS[index % len(_THREE_CHAIN_PATTERNS)]
        mode = ModeVector.of(n)
        pattern = SidebandPattern(r, l)
        ratio_12 = factorial_ratio_root(mode, r)
        ratio_23 = factorial_ratio_root(mode.remove(r), l)
        gamma1 = rng.uniform(0.3, 2.0) * np.exp(1j * rng.uniform(0.0, 2.0 * math.pi))
        gamma2 = (
            target
            * gamma1
            * (ratio_12 / ratio_23)
            * np.exp(1j * rng.uniform(0.0, 2.0 * math.pi))
        )
        block = build_block(mode, pattern, CouplingConstants(gamma1, gamma2))
        period = 2.0 * math.pi / block.angular_frequency
        time = rng.uniform(-3.0, 3.0) * period
        cases.append((block, _random_unit_state(rng, block.dimension), time))
    for n, r, l in _TWO_CHAIN_PATTERNS + _ONE_CHAIN_PATTERNS:
        gamma1 = rng.uniform(0.3, 2.0) * np.exp(1j * rng.uniform(0.0, 2.0 * math.pi))
        gamma2 = rng.uniform(0.3, 2.0) * np.exp(1j * rng.uniform(0.0, 2.0 * math.pi))
        block = build_block(
            ModeVector.of(n), SidebandPattern(r, l), CouplingConstants(gamma1, gamma2)
        )
        if block.angular_frequency > 0:
            period = 2.0 * math.pi / block.angular_frequency
        else:
            period = 1.0
        time = rng.uniform(-3.0, 3.0) * period
        cases.append((block, _random_unit_state(rng, block.dimension), time))
    return cases


Propagator = Callable[[BlockSystem, VibronicState, float], VibronicState]


def run_validate(
    config: RunConfig, propagator: Propagator = propagate_analytic
) -> ValidationReport:
    """Cross-check the closed-form dynamics and indicators against their
    numeric twins.

    ``propagator`` is swappable so the harness itself can be shown to catch
    an injected fault; production use always passes the closed-form path.
    """
    rng = np.random.default_rng(config.seed)
    cases = random_cases(rng, count=100)

    dev_oracle = 0.0
    dev_norm = 0.0
    dev_reverse = 0.0
    dev_period = 0.0
    dev_rabi = 0.0
    dev_overlap = 0.0
    for block, state, time in cases:
        evolved = propagator(block, state, time)
        reference = propagate_oracle(block, state, time)
        dev_oracle = max(
            dev_oracle, float(np.max(np.abs(evolved.amplitudes - reference.amplitudes)))
        )
        dev_norm = max(dev_norm, abs(evolved.norm - 1.0))
        back = propagator(block, evolved, -time)
        dev_reverse = max(
            dev_reverse, float(np.max(np.abs(back.amplitudes - state.amplitudes)))
        )
        if block.angular_frequency > 0:
            period = 2.0 * math.pi / block.angular_frequency
            shifted = propagator(block, state, time + period)
            dev_period = max(
                dev_period,
                float(np.max(np.abs(shifted.amplitudes - evolved.amplitudes))),
            )
        if block.dimension == 2 and not block.is_degenerate:
            top = VibronicState.basis_state(2, 0)
            p1 = level_probabilities(propagator(block, top, time))[0]
            expected = math.cos(abs(block.coupling_12) * time) ** 2
            dev_rabi = max(dev_rabi, abs(p1 - expected))
        if block.dimension == 3 and not block.is_degenerate:
            top = VibronicState.basis_state(3, 0)
            evolved_top = propagator(block, top, time)
            closed = survival_probability(
                abs(block.chi), block.angular_frequency, time
            )
            dev_overlap = max(
                dev_overlap, abs(abs(top.overlap(evolved_top)) ** 2 - closed)
            )

    chi_grid = np.logspace(-2, 2, 25)
    dev_min = max(
        abs(min_survival(chi) - min_survival_grid(chi)) for chi in chi_grid
    )
    dev_mean = max(
        abs(mean_survival(chi) - mean_survival_quadrature(chi)) for chi in chi_grid
    )
    argmin_samples = 100_000
    dev_argmin_steps = 0.0
    for chi in chi_grid:
        step = 0.5 * (2.0 * math.pi / math.sqrt(1.0 + chi * chi)) / (argmin_samples - 1)
        gap = abs(time_of_min(1.0, chi) - time_of_min_grid(chi, samples=argmin_samples))
        dev_argmin_steps = max(dev_argmin_steps, gap / step)
    dev_measure = 0.0
    for chi in (0.3, 0.7, 1.0, 2.0):
        period = 2.0 * math.pi / math.sqrt(1.0 + chi * chi)
        gap = abs(
            sub_threshold_measure(chi, config.epsilon, 1.0)
            - sub_threshold_measure_grid(chi, config.epsilon)
        )
        dev_measure = max(dev_measure, gap / (period / 1e4))

    checks = (
        ValidationCheck("analytic vs eigendecomposition amplitudes", dev_oracle, 1e-10),
        ValidationCheck("propagated-state norm", dev_norm, 1e-12),
        ValidationCheck("forward-backward reversibility", dev_reverse, 1e-10),
        ValidationCheck("one-period recurrence", dev_period, 1e-10),
        ValidationCheck("two-level Rabi limit", dev_rabi, 1e-12),
        ValidationCheck("survival formula vs overlap", dev_overlap, 1e-12),
        ValidationCheck("survival minimum: closed vs grid", dev_min, 1e-6),
        ValidationCheck("survival mean: closed vs quadrature", dev_mean, 1e-8),
        ValidationCheck("first-minimum time vs grid argmin (steps)", dev_argmin_steps, 1.0),
        ValidationCheck("sub-threshold measure vs grid (T_p/1e4)", dev_measure, 1.0),
    )
    return ValidationReport(checks)
