"""Temperature and elastic-constant sweeps with transition detection.

A temperature sweep walks a T grid (physically: cooling), sets
d = alpha2*(T - T2star) at each point, minimizes from the previous converged
state of each branch (warm start) plus fresh seeds, and keeps the
lowest-energy converged result per branch.  Transitions are read off the
amplitude records: the layering onset from delta_rho_max, the tilt onset
from theta_max, both refined by linear interpolation of the squared
amplitude (the pitchfork normal form makes amplitude^2 linear in T).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np

from .energy1d import Evaluator, mean_tilt
from .minimize import MinimizeOptions, minimize, seed_state
from .params import ModelParams1D, temperature_from_d
from .spectral import SpectralState, default_grid
from .stability import spectrum

__all__ = [
    "SweepConfig",
    "SweepRecord",
    "SweepError",
    "ElasticRecord",
    "sweep_temperature",
    "detect_transitions",
    "pitchfork_exponent",
    "elastic_sweep",
]


class SweepError(RuntimeError):
    """Raised when too many points of a sweep fail to converge."""


@dataclass(frozen=True)
class SweepConfig:
    """Temperature grid and solver policy for a sweep.

    ``seeds`` lists the fresh seed kinds tried at every temperature in
    addition to the warm start; both pitchfork branch signs are always run.
    ``eps_detect`` is the amplitude threshold separating phase labels.
    """

    t_start: float
    t_end: float
    dt: float
    seeds: tuple[str, ...] = ("smectic-seed",)
    eps_detect: float = 1e-3
    record_morse: bool = False
    cold_start: bool = False
    n_modes: int = 64
    options: MinimizeOptions = MinimizeOptions()
    max_failure_fraction: float = 0.2

    def __post_init__(self) -> None:
        if self.dt == 0:
            raise ValueError("dt must be nonzero")
        if not self.eps_detect > 0:
            raise ValueError(f"eps_detect must be positive, got {self.eps_detect}")

    def temperatures(self) -> np.ndarray:
        span = self.t_end - self.t_start
        step = math.copysign(abs(self.dt), span if span != 0 else 1.0)
        count = int(math.floor(abs(span) / abs(step) + 1e-9)) + 1
        return self.t_start + step * np.arange(count)


@dataclass(frozen=True)
class SweepRecord:
    """One temperature point of a bifurcation diagram."""

    T: float
    d: float
    branch: str
    delta_rho_max: float
    theta_max: float
    energy: float
    morse_index: int | None
    converged: bool


@dataclass(frozen=True)
class ElasticRecord:
    """One elastic-constant point: mean tilt of the relaxed state."""

    value: float
    theta_bar: float
    delta_rho_max: float
    energy: float
    converged: bool


def _signed_seed(kind: str, sign: float, params: ModelParams1D, n: int) -> SpectralState:
    base = seed_state(kind, params, n)
    return SpectralState(n=n, h=base.h, theta_c=base.theta_c.copy(), rho_s=sign * base.rho_s)


def _normalize_tilt_sign(state: SpectralState) -> SpectralState:
    """Flip theta -> -theta when the mean tilt is negative.

    The energy is exactly even in theta, so tilted minimizers come in sign
    pairs; records report the positive-tilt representative.
    """
    if state.theta_c[0] < 0:
        return SpectralState(n=state.n, h=state.h, theta_c=-state.theta_c, rho_s=state.rho_s)
    return state


def _relax(
    candidates: list[SpectralState],
    params: ModelParams1D,
    config: SweepConfig,
    evaluator: Evaluator,
) -> tuple[SpectralState, float, bool]:
    """Minimize from every candidate; lowest-energy converged result wins.

    A converged result always beats a non-converged one; non-converged best
    iterates are reported only when nothing converged.
    """
    best: tuple[bool, float, SpectralState] | None = None
    for cand in candidates:
        state, report = minimize(cand, params, config.options, evaluator=evaluator)
        key = (report.converged, report.final_energy, state)
        if best is None:
            best = key
        elif key[0] and not best[0]:
            best = key
        elif key[0] == best[0] and key[1] < best[1]:
            best = key
    assert best is not None
    return _normalize_tilt_sign(best[2]), best[1], best[0]


def sweep_temperature(params: ModelParams1D, config: SweepConfig) -> list[SweepRecord]:
    """Cooling sweep over both pitchfork branches.

    Returns records ordered as the temperature grid, one per (T, branch).
    Non-converged points are recorded with ``converged=False``; the sweep
    aborts only when more than ``max_failure_fraction`` of all points fail.
    """
    temps = config.temperatures()
    grid = default_grid(config.n_modes, params.h)
    records: list[SweepRecord] = []
    warm: dict[str, SpectralState | None] = {"+": None, "-": None}
    failures = 0
    for t_val in temps:
        params_t = params.at_temperature(float(t_val))
        evaluator = Evaluator(config.n_modes, params_t)
        for branch, sign in (("+", 1.0), ("-", -1.0)):
            candidates: list[SpectralState] = []
            if not config.cold_start and warm[branch] is not None:
                candidates.append(warm[branch])
            candidates.extend(_signed_seed(kind, sign, params_t, config.n_modes) for kind in config.seeds)
            state, energy_val, converged = _relax(candidates, params_t, config, evaluator)
            if converged:
                warm[branch] = state
            else:
                failures += 1
            morse = spectrum(state, params_t).morse_index if config.record_morse else None
            records.append(
                SweepRecord(
                    T=float(t_val),
                    d=params_t.d,
                    branch=branch,
                    delta_rho_max=float(np.max(state.rho_values(grid))),
                    theta_max=float(np.max(state.theta_values(grid))),
                    energy=energy_val,
                    morse_index=morse,
                    converged=converged,
                )
            )
    if failures > config.max_failure_fraction * len(records):
        raise SweepError(f"{failures} of {len(records)} sweep points failed to converge")
    return records


def _refine_onset(seq: list[SweepRecord], amplitudes: list[float], idx: int) -> float:
    """Zero crossing of the squared amplitude, linear in T (pitchfork normal form)."""
    t_i, a_i = seq[idx].T, amplitudes[idx]
    if idx + 1 < len(seq) and amplitudes[idx + 1] > a_i:
        t_j, a_j = seq[idx + 1].T, amplitudes[idx + 1]
        return t_i - a_i**2 * (t_j - t_i) / (a_j**2 - a_i**2)
    if idx > 0:
        return 0.5 * (seq[idx - 1].T + t_i)
    return t_i


def detect_transitions(records: list[SweepRecord], eps_detect: float) -> tuple[float | None, float | None]:
    """Locate the layering and tilt onsets in a cooling sweep.

    Records must be ordered by decreasing T.  The first record (largest T)
    with delta_rho_max >= eps_detect marks the layering transition; the
    first with theta_max >= eps_detect marks the tilt transition.  Both are
    refined by linear interpolation of the squared amplitude against T.
    Returns None for a transition absent from the swept range.
    """
    if not records:
        return None, None
    branch = records[0].branch
    seq = [r for r in records if r.branch == branch]
    temps = [r.T for r in seq]
    if any(t2 >= t1 for t1, t2 in zip(temps, temps[1:])):
        raise ValueError("records must be ordered by strictly decreasing T")

    t_chs: float | None = None
    t_hssc: float | None = None
    rho_amp = [r.delta_rho_max for r in seq]
    theta_amp = [r.theta_max for r in seq]
    for idx, r in enumerate(seq):
        if r.delta_rho_max >= eps_detect:
            t_chs = _refine_onset(seq, rho_amp, idx)
            break
    for idx, r in enumerate(seq):
        if r.theta_max >= eps_detect:
            t_hssc = _refine_onset(seq, theta_amp, idx)
            break
    return t_chs, t_hssc


def pitchfork_exponent(
    records: list[SweepRecord],
    d0: float,
    window: float,
    eps_detect: float = 1e-3,
) -> float:
    """Least-squares slope of log(delta_rho_max) against log(d0 - d).

    Uses the layered records with d in (d0 - window, d0); a clean pitchfork
    gives slope 1/2.

    Raises
    ------
    ValueError
        If fewer than five usable records fall inside the window.
    """
    pts = [
        (r.d, r.delta_rho_max)
        for r in records
        if d0 - window < r.d < d0 and r.delta_rho_max >= eps_detect and r.converged
    ]
    if len(pts) < 5:
        raise ValueError(f"insufficient records for the pitchfork fit: {len(pts)} inside the window, need >= 5")
    x = np.log([d0 - d for d, _ in pts])
    y = np.log([amp for _, amp in pts])
    slope, _ = np.polyfit(x, y, 1)
    return float(slope)


def elastic_sweep(
    params: ModelParams1D,
    values: list[float],
    vary: str,
    n_modes: int = 64,
    options: MinimizeOptions = MinimizeOptions(),
    seeds: tuple[str, ...] = ("smectic-seed", "conical-seed"),
    max_failure_fraction: float = 0.2,
) -> list[ElasticRecord]:
    """Sweep the nematic (vary="k") or smectic (vary="lambda") elastic constants.

    Each point sets k1 = k2 = k3 = v (or lambda1 = lambda2 = v), relaxes
    from fresh seeds of both signs, keeps the lowest-energy converged state
    and records its mean tilt.  Cold starts keep the points independent.
    """
    if vary not in ("k", "lambda"):
        raise ValueError(f"vary must be 'k' or 'lambda', got {vary!r}")
    records: list[ElasticRecord] = []
    failures = 0
    grid = default_grid(n_modes, params.h)
    config = SweepConfig(t_start=0.0, t_end=0.0, dt=1.0, options=options, n_modes=n_modes)
    for v in values:
        if vary == "k":
            params_v = replace(params, k1=v, k2=v, k3=v)
        else:
            params_v = replace(params, lambda1=v, lambda2=v)
        evaluator = Evaluator(n_modes, params_v)
        candidates = [
            _signed_seed(kind, sign, params_v, n_modes) for kind in seeds for sign in (1.0, -1.0)
        ]
        state, energy_val, converged = _relax(candidates, params_v, config, evaluator)
        if not converged:
            failures += 1
        records.append(
            ElasticRecord(
                value=float(v),
                theta_bar=mean_tilt(state, params_v, grid),
                delta_rho_max=float(np.max(state.rho_values(grid))),
                energy=energy_val,
                converged=converged,
            )
        )
    if failures > max_failure_fraction * len(records):
        raise SweepError(f"{failures} of {len(records)} elastic-sweep points failed to converge")
    return records


def transition_temperature_analytic(params: ModelParams1D) -> float:
    """Temperature at which the trivial state loses stability: T2star + d0/alpha2."""
    from .stability import d_critical

    return temperature_from_d(d_critical(params), params)
