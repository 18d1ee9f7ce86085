"""Optical Bloch dynamics, time-domain experiment simulators and fitters.

The driven two-level emitter is described by the Bloch vector (u, v, w) with
w = -1 the ground state and equations of motion

    du/dt = -u/T2 + Delta v
    dv/dt = -v/T2 - Delta u + Omega w
    dw/dt = -Omega v - (w + 1)/T1

for a resonant drive of Rabi rate Omega (rad/s) detuned by Delta (rad/s).
Pulse sequences are piecewise constant, so each segment is propagated with
the exact matrix exponential of the affine system (machine precision and
strictly contractive, which keeps the Bloch vector inside the unit ball).
An adaptive Runge-Kutta path is kept for cross-validation.
"""

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.integrate import solve_ivp
from scipy.linalg import expm
from scipy.optimize import curve_fit

from .errors import FitError, InconsistencyError, ValidationError
from .quantities import AngularRate, OrdinaryFrequency
from .spectral import dominant_beat
from .trace import TimeTrace

RADIATIVE_LIMIT_TOLERANCE = 1.05

# Defaults for the adaptive integrator path.
RTOL = 1e-8
ATOL = 1e-10


@dataclass(frozen=True)
class TwoLevelParams:
    """Drive and relaxation parameters of the two-level emitter.

    T2 above the radiative limit 2*T1 is clamped to 2*T1 within a 5%
    tolerance band and rejected beyond it. Infinite lifetimes are allowed
    (undamped dynamics).
    """

    rabi: AngularRate = 0.0
    detuning: AngularRate = 0.0
    t1: float = math.inf
    t2: float = math.inf

    def __post_init__(self):
        if self.t1 <= 0.0 or self.t2 <= 0.0:
            raise ValidationError("T1 and T2 must be positive")
        limit = 2.0 * self.t1
        if self.t2 > limit * RADIATIVE_LIMIT_TOLERANCE:
            raise InconsistencyError(
                f"T2 = {self.t2:.3g} s exceeds the radiative limit 2*T1 = {limit:.3g} s"
            )
        if self.t2 > limit:
            object.__setattr__(self, "t2", limit)


@dataclass(frozen=True)
class PulseSegment:
    """One piecewise-constant drive interval; rabi = 0 means free evolution."""

    duration: float
    rabi: AngularRate = 0.0
    phase: float = 0.0
    detuning: AngularRate = 0.0

    def __post_init__(self):
        if self.duration < 0.0:
            raise ValidationError(f"segment duration must be non-negative, got {self.duration}")


@dataclass(frozen=True)
class PulseSequence:
    segments: tuple[PulseSegment, ...]

    def __post_init__(self):
        if len(self.segments) == 0:
            raise ValidationError("pulse sequence must contain at least one segment")

    @property
    def total_duration(self) -> float:
        return sum(s.duration for s in self.segments)


@dataclass(frozen=True)
class BlochState:
    u: float = 0.0
    v: float = 0.0
    w: float = -1.0

    def as_array(self) -> np.ndarray:
        return np.array([self.u, self.v, self.w], dtype=float)

    def norm(self) -> float:
        return math.sqrt(self.u**2 + self.v**2 + self.w**2)

    @property
    def excited_population(self) -> float:
        return (1.0 + self.w) / 2.0


GROUND = BlochState(0.0, 0.0, -1.0)


def bloch_generator(p: TwoLevelParams, phase: float = 0.0) -> tuple[np.ndarray, np.ndarray]:
    """Matrix A and inhomogeneous term b of d(u,v,w)/dt = A (u,v,w) + b."""
    g1 = 0.0 if math.isinf(p.t1) else 1.0 / p.t1
    g2 = 0.0 if math.isinf(p.t2) else 1.0 / p.t2
    ox = p.rabi * math.cos(phase)
    oy = p.rabi * math.sin(phase)
    a = np.array(
        [
            [-g2, p.detuning, oy],
            [-p.detuning, -g2, ox],
            [-oy, -ox, -g1],
        ]
    )
    b = np.array([0.0, 0.0, -g1])
    return a, b


def bloch_evolve(
    state: BlochState,
    p: TwoLevelParams,
    duration: float,
    method: str = "exact",
    phase: float = 0.0,
    rtol: float = RTOL,
    atol: float = ATOL,
) -> BlochState:
    """Evolve a Bloch state under constant drive for ``duration`` seconds.

    method "exact" uses the matrix exponential of the augmented affine
    system (exact for constant coefficients); "adaptive" integrates with an
    embedded Runge-Kutta pair at the given tolerances and exists mainly to
    cross-check the exact path.
    """
    if duration < 0.0:
        raise ValidationError("duration must be non-negative")
    if duration == 0.0:
        return state
    a, b = bloch_generator(p, phase=phase)
    if method == "exact":
        aug = np.zeros((4, 4))
        aug[:3, :3] = a
        aug[:3, 3] = b
        propagated = expm(aug * duration) @ np.append(state.as_array(), 1.0)
        return BlochState(*propagated[:3])
    if method == "adaptive":
        sol = solve_ivp(
            lambda t, y: a @ y + b,
            (0.0, duration),
            state.as_array(),
            method="RK45",
            rtol=rtol,
            atol=atol,
        )
        if not sol.success:
            raise FitError(f"Bloch integrator failed: {sol.message}")
        return BlochState(*sol.y[:, -1])
    raise ValidationError(f"unknown method '{method}'")


def evolve_sequence(
    state: BlochState,
    sequence: PulseSequence,
    t1: float,
    t2: float,
    method: str = "exact",
) -> BlochState:
    """Apply each segment of a pulse sequence in order."""
    for seg in sequence.segments:
        p = TwoLevelParams(rabi=seg.rabi, detuning=seg.detuning, t1=t1, t2=t2)
        state = bloch_evolve(state, p, seg.duration, method=method, phase=seg.phase)
    return state


def steady_state(p: TwoLevelParams) -> BlochState:
    """Analytic steady state of the driven, damped Bloch equations."""
    if math.isinf(p.t1) or math.isinf(p.t2):
        raise ValidationError("steady state requires finite T1 and T2")
    a, b = bloch_generator(p)
    return BlochState(*np.linalg.solve(a, -b))


def rabi_nutation_scan(
    g0: AngularRate,
    nbar: np.ndarray,
    pulse_duration: float,
    t1: float,
    t2: float,
    detuning: AngularRate = 0.0,
) -> TimeTrace:
    """Excited population after a square pulse, versus cavity photon number.

    The intracavity field drives the emitter at Omega = 2 g0 sqrt(nbar);
    the recorded photoluminescence is proportional to the excited population
    at the end of the pulse.
    """
    if pulse_duration <= 0.0:
        raise ValidationError("pulse duration must be positive")
    nbar = np.asarray(nbar, dtype=float)
    if np.any(nbar < 0.0):
        raise ValidationError("photon numbers must be non-negative")
    pl = np.empty_like(nbar)
    for i, n in enumerate(nbar):
        p = TwoLevelParams(rabi=2.0 * g0 * math.sqrt(n), detuning=detuning, t1=t1, t2=t2)
        pl[i] = bloch_evolve(GROUND, p, pulse_duration).excited_population
    return TimeTrace(
        x=nbar,
        y=pl,
        x_name="nbar",
        x_unit="photons",
        y_name="excited_population",
        y_unit="dimensionless",
        metadata={
            "g0_rad_s": g0,
            "pulse_s": pulse_duration,
            "t1_s": t1,
            "t2_s": t2,
            "detuning_rad_s": detuning,
        },
    )


def extract_rabi_frequencies(
    scan: TimeTrace, pulse_duration: float
) -> tuple[np.ndarray, np.ndarray]:
    """Rabi rates from the extrema of a nutation scan.

    Peaks correspond to odd multiples of pi pulse area and valleys to even
    multiples; walking the extrema in order of increasing nbar assigns the
    areas pi, 2pi, 3pi, ... so Omega = area / pulse_duration at each
    extremum. Returns (nbar values, Omega values in rad/s).
    """
    y = scan.y
    interior = np.arange(1, y.size - 1)
    is_peak = (y[interior] > y[interior - 1]) & (y[interior] >= y[interior + 1])
    is_valley = (y[interior] < y[interior - 1]) & (y[interior] <= y[interior + 1])
    extrema = interior[is_peak | is_valley]
    if extrema.size == 0:
        raise FitError("no Rabi extrema found in scan")
    areas = math.pi * np.arange(1, extrema.size + 1)
    return scan.x[extrema], areas / pulse_duration


def simulate_ramsey(
    delays: np.ndarray,
    t2_star: float,
    beat: OrdinaryFrequency = 0.0,
    detuning: OrdinaryFrequency = 0.0,
    t1_background: float | None = None,
    envelope_shape: str = "exponential",
) -> TimeTrace:
    """Normalized Ramsey fringes for two pi/2 pulses separated by ``delays``.

    The probed doublet is split by ``beat`` (Hz), giving the two-frequency
    interference S(t) = (1 + cos(2 pi detuning t) cos(pi beat t) env(t)) / 2
    whose envelope has nodes spaced by 1/beat. env is exp(-t/T2*) by
    default; ``envelope_shape="gaussian"`` selects exp(-(t/T2*)^2) instead
    (the extraction routines assume the exponential form). When
    ``t1_background`` is given the raw (non-normalized) signal including the
    population-decay background exp(-t/T1) is returned instead.
    """
    if t2_star <= 0.0:
        raise ValidationError("T2* must be positive")
    delays = np.asarray(delays, dtype=float)
    if envelope_shape == "exponential":
        envelope = np.exp(-delays / t2_star)
    elif envelope_shape == "gaussian":
        envelope = np.exp(-((delays / t2_star) ** 2))
    else:
        raise ValidationError(f"unknown envelope shape '{envelope_shape}'")
    fringe = (
        np.cos(2.0 * math.pi * detuning * delays)
        * np.cos(math.pi * beat * delays)
        * envelope
    )
    signal = 0.5 * (1.0 + fringe)
    if t1_background is not None:
        signal = signal * np.exp(-delays / t1_background)
    return TimeTrace(
        x=delays,
        y=signal,
        x_name="delay",
        x_unit="s",
        y_name="ramsey_signal",
        y_unit="dimensionless",
        metadata={
            "t2_star_s": t2_star,
            "beat_hz": beat,
            "detuning_hz": detuning,
            "t1_background_s": t1_background,
            "envelope_shape": envelope_shape,
        },
    )


@dataclass(frozen=True)
class FitResult:
    """Point estimate with standard error and residual diagnostics."""

    value: float
    stderr: float
    residual_rms: float
    n_points: int
    extras: dict = field(default_factory=dict)


def _log_linear_fit(t: np.ndarray, amplitude: np.ndarray) -> tuple[float, float, float]:
    """Least-squares line through (t, log amplitude): slope, slope SE, rms."""
    mask = amplitude > 0.0
    if np.count_nonzero(mask) < 2:
        raise FitError("not enough positive points for a log-linear fit")
    t = t[mask]
    logy = np.log(amplitude[mask])
    design = np.vstack([t, np.ones_like(t)]).T
    coeffs, residuals, _, _ = np.linalg.lstsq(design, logy, rcond=None)
    slope = float(coeffs[0])
    fitted = design @ coeffs
    rms = float(np.sqrt(np.mean((logy - fitted) ** 2)))
    dof = max(t.size - 2, 1)
    variance = float(np.sum((logy - fitted) ** 2)) / dof
    t_centered = t - t.mean()
    sxx = float(np.dot(t_centered, t_centered))
    slope_se = math.sqrt(variance / sxx) if sxx > 0.0 else math.inf
    return slope, slope_se, rms


def extract_t2star(trace: TimeTrace, baseline: float | None = None) -> FitResult:
    """Inhomogeneous dephasing time from the decay of a fringe pattern.

    An oscillating trace is referenced to its mean (the fringes average
    out) and fitted globally to A cos(2 pi f t + phi) exp(-t/T2*), with the
    fringe frequency seeded from the spectrum; the fitted f, amplitude and
    phase are reported in ``extras``. A monotone trace is treated as a bare
    envelope and fitted by log-linear regression. Pass ``baseline`` to
    override the reference level.
    """
    if len(trace) < 8:
        raise FitError("need at least 8 points to extract T2*")
    if baseline is None:
        mean = float(np.mean(trace.y))
        sign_changes = int(np.count_nonzero(np.diff(np.sign(trace.y - mean)) != 0))
        baseline = mean if sign_changes >= 4 else 0.0
    detrended = trace.y - baseline
    sign_changes = int(np.count_nonzero(np.diff(np.sign(detrended)) != 0))
    if sign_changes >= 4:
        return _fit_damped_fringe(trace.x, detrended)
    env = np.abs(detrended)
    slope, slope_se, rms = _log_linear_fit(trace.x, env)
    if slope >= 0.0:
        raise FitError("envelope does not decay; cannot extract T2*")
    return FitResult(
        value=-1.0 / slope,
        stderr=slope_se / slope**2,
        residual_rms=rms,
        n_points=int(trace.x.size),
    )


def _fit_damped_fringe(t: np.ndarray, signal: np.ndarray) -> FitResult:
    """Nonlinear least squares of A cos(2 pi f t + phi) exp(-t/tau) + c.

    The free offset c absorbs the residual baseline error left by the mean
    subtraction (the fringe does not average to exactly zero over a finite
    window), which matters downstream when the envelope is divided out.
    """
    f0 = dominant_beat(t, signal)

    def model(tt, amplitude, frequency, phase, tau, offset):
        return (
            amplitude * np.cos(2.0 * math.pi * frequency * tt + phase) * np.exp(-tt / tau)
            + offset
        )

    p0 = (float(np.max(np.abs(signal))), f0, 0.0, float(t[-1] - t[0]) / 3.0, 0.0)
    try:
        popt, pcov = curve_fit(model, t, signal, p0=p0, maxfev=20000)
    except RuntimeError as exc:
        raise FitError(f"fringe fit did not converge: {exc}") from None
    tau = popt[3]
    if not np.isfinite(tau) or tau <= 0.0:
        raise FitError("envelope does not decay; cannot extract T2*")
    residuals = signal - model(t, *popt)
    return FitResult(
        value=float(tau),
        stderr=float(np.sqrt(pcov[3, 3])),
        residual_rms=float(np.sqrt(np.mean(residuals**2))),
        n_points=int(t.size),
        extras={
            "amplitude": float(abs(popt[0])),
            "fringe_frequency_hz": float(abs(popt[1])),
            "phase_rad": float(popt[2]),
            "offset": float(popt[4]),
        },
    )


def ramsey_beat_frequency(trace: TimeTrace) -> float:
    """Beat frequency of a Ramsey fringe pattern, in Hz.

    The fringe envelope |cos(pi beat t)| repeats at the beat frequency, so
    squaring the detrended signal puts a spectral line exactly there. The
    envelope decay and residual baseline are divided out first (using the
    fitted fringe model) so that their spectral feet cannot outgrow the
    beat line.
    """
    fit = extract_t2star(trace)
    baseline = float(np.mean(trace.y)) + fit.extras.get("offset", 0.0)
    flattened = (trace.y - baseline) * np.exp(trace.x / fit.value)
    return dominant_beat(trace.x, flattened**2)


def simulate_echo_decay(
    t12: np.ndarray,
    t2: float,
    envelope=None,
    intensity0: float = 1.0,
) -> TimeTrace:
    """Two-pulse photon-echo intensity versus inter-pulse delay t12.

    I(t12) = I0 exp(-4 t12 / T2) V(t12)^2 with V the superhyperfine echo
    envelope: a callable tau -> V, a TimeTrace on the same t12 grid, or
    None for V = 1. The factor 4 reflects the intensity convention: the
    echo amplitude decays as exp(-2 t12/T2) over the total
    dephasing-rephasing time 2*t12.
    """
    if t2 <= 0.0:
        raise ValidationError("T2 must be positive")
    t12 = np.asarray(t12, dtype=float)
    if envelope is None:
        modulation = np.ones_like(t12)
    elif callable(envelope):
        modulation = np.asarray(envelope(t12), dtype=float) ** 2
    else:
        if envelope.x.shape != t12.shape or not np.allclose(envelope.x, t12):
            raise ValidationError("envelope must be sampled on the same t12 grid")
        modulation = envelope.y**2
    intensity = intensity0 * np.exp(-4.0 * t12 / t2) * modulation
    return TimeTrace(
        x=t12,
        y=intensity,
        x_name="t12",
        x_unit="s",
        y_name="echo_intensity",
        y_unit="dimensionless",
        metadata={"t2_s": t2, "modulated": envelope is not None},
    )


def fit_t2_from_echo(trace: TimeTrace, t_min: float = 0.0) -> FitResult:
    """T2 from the linear section of a log-intensity echo decay.

    Restricts the log-linear regression to t12 >= t_min (discarding the
    superhyperfine-modulated head); T2 = -4/slope. The residual rms in the
    report flags fits contaminated by modulation.
    """
    mask = trace.x >= t_min
    if np.count_nonzero(mask) < 5:
        raise FitError(f"need at least 5 points beyond t_min = {t_min:.3g} s")
    slope, slope_se, rms = _log_linear_fit(trace.x[mask], trace.y[mask])
    if slope >= 0.0:
        raise FitError("echo intensity does not decay")
    t2 = -4.0 / slope
    return FitResult(
        value=t2,
        stderr=4.0 * slope_se / slope**2,
        residual_rms=rms,
        n_points=int(np.count_nonzero(mask)),
    )


def fit_pure_dephasing(points: np.ndarray) -> FitResult:
    """Pure dephasing rate gamma* from paired (T1, T2) measurements.

    Fits 1/(pi T2) = 1/(2 pi T1) + gamma* with unit slope, i.e. gamma* is
    the mean of y - x; the standard error is that of the mean. Input is an
    (n, 2) array of (T1, T2) in seconds; the result is in Hz.
    """
    points = np.asarray(points, dtype=float)
    if points.ndim != 2 or points.shape[1] != 2 or points.shape[0] < 2:
        raise FitError("need at least two (T1, T2) pairs")
    if np.any(points <= 0.0):
        raise ValidationError("lifetimes must be positive")
    t1, t2 = points[:, 0], points[:, 1]
    offsets = 1.0 / (math.pi * t2) - 1.0 / (2.0 * math.pi * t1)
    gamma_star = float(np.mean(offsets))
    stderr = float(np.std(offsets, ddof=1) / math.sqrt(offsets.size))
    rms = float(np.sqrt(np.mean((offsets - gamma_star) ** 2)))
    return FitResult(value=gamma_star, stderr=stderr, residual_rms=rms, n_points=offsets.size)


@dataclass(frozen=True)
class PowerLawFit:
    exponent: float
    amplitude: float
    exponent_stderr: float
    residual_rms: float
    n_points: int


def fit_power_law(detuning: np.ndarray, counts: np.ndarray) -> PowerLawFit:
    """Fit N(Delta) = A * Delta^-p by linear regression in log-log space."""
    detuning = np.asarray(detuning, dtype=float)
    counts = np.asarray(counts, dtype=float)
    if detuning.size != counts.size or detuning.size < 2:
        raise FitError("need at least two (detuning, count) points")
    if np.any(detuning <= 0.0) or np.any(counts <= 0.0):
        raise ValidationError("power-law data must be strictly positive")
    logx = np.log(detuning)
    logy = np.log(counts)
    design = np.vstack([logx, np.ones_like(logx)]).T
    coeffs, _, _, _ = np.linalg.lstsq(design, logy, rcond=None)
    slope, intercept = float(coeffs[0]), float(coeffs[1])
    fitted = design @ coeffs
    residuals = logy - fitted
    rms = float(np.sqrt(np.mean(residuals**2)))
    dof = max(logx.size - 2, 1)
    variance = float(np.sum(residuals**2)) / dof
    x_centered = logx - logx.mean()
    sxx = float(np.dot(x_centered, x_centered))
    slope_se = math.sqrt(variance / sxx) if sxx > 0.0 else math.inf
    return PowerLawFit(
        exponent=-slope,
        amplitude=math.exp(intercept),
        exponent_stderr=slope_se,
        residual_rms=rms,
        n_points=int(logx.size),
    )


def single_ion_threshold(amplitude: float, exponent: float) -> float:
    """Detuning beyond which fewer than one ion falls in the excitation bandwidth.

    Solves A * Delta^-p = 1, so Delta* = A^(1/p) in whatever detuning unit
    the amplitude was fitted in.
    """
    if amplitude <= 0.0 or exponent <= 0.0:
        raise ValidationError("amplitude and exponent must be positive")
    return amplitude ** (1.0 / exponent)
