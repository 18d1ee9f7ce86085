"""Pulsed photon counting: emitter Monte Carlo, g2 estimation, spectral statistics.

All randomness is drawn from counter-based Philox streams keyed by
(master seed, stream id), and work is split into fixed-size chunks whose
stream ids depend only on the parameters. Results are therefore bit-identical
for a given seed no matter how many workers evaluate the chunks.
"""

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np
from numpy.random import Generator, Philox

from .errors import FitError, ValidationError
from .trace import TimeTrace

CHUNK = 65536

# Fixed stream ids for the emitter draw layout.
_STREAM_EXCITE = 0
_STREAM_DETECT = 1
_STREAM_SHELVE = 2
_STREAM_RECOVER = 3
_STREAM_BACKGROUND = 4


def _stream(seed: int, stream_id: int) -> Generator:
    """Independent deterministic generator for (seed, stream_id)."""
    return Generator(Philox(key=np.array([seed, stream_id], dtype=np.uint64)))


@dataclass(frozen=True)
class EmitterLevelScheme:
    """Effective multilevel emitter for per-pulse Monte Carlo.

    An active ion is excited by a pulse with probability p_excite and then
    emits one photon (the Purcell-shortened lifetime is far below the pulse
    period), detected with probability p_detect. Each emission shelves the
    ion with probability p_shelve into a dark state that recovers at rate
    shelf_recovery (Hz) between pulses.
    """

    p_excite: float
    p_detect: float
    p_shelve: float = 0.0
    shelf_recovery: float = 1.0  # Hz
    lifetime: float = 2.1e-6     # s, cavity-shortened T1

    def __post_init__(self):
        for name in ("p_excite", "p_detect", "p_shelve"):
            if not 0.0 <= getattr(self, name) <= 1.0:
                raise ValidationError(f"{name} must lie in [0, 1]")
        if self.shelf_recovery <= 0.0 or self.lifetime <= 0.0:
            raise ValidationError("rates and lifetimes must be positive")


@dataclass(frozen=True)
class BackgroundModel:
    """Pulse-synchronous Poissonian background plus detector dark counts."""

    mean_per_pulse: float = 0.0
    dark_count_rate: float = 0.0  # Hz

    def __post_init__(self):
        if self.mean_per_pulse < 0.0 or self.dark_count_rate < 0.0:
            raise ValidationError("background rates must be non-negative")

    def counts_per_pulse(self, period: float) -> float:
        return self.mean_per_pulse + self.dark_count_rate * period


@dataclass(frozen=True)
class CountRecord:
    """Detected photon counts for every excitation pulse of one run."""

    counts: np.ndarray  # integer counts per pulse
    period: float       # s
    seed: int

    def __post_init__(self):
        if self.counts.ndim != 1 or self.counts.size == 0:
            raise ValidationError("counts must be a non-empty 1-d array")
        if np.any(self.counts < 0):
            raise ValidationError("counts must be non-negative")

    @property
    def n_pulses(self) -> int:
        return int(self.counts.size)

    @property
    def mean_rate(self) -> float:
        """Mean detected count rate in counts/s."""
        return float(np.mean(self.counts)) / self.period


def _shelf_activity(
    emitted: np.ndarray, shelve_draw: np.ndarray, recover_draw: np.ndarray
) -> np.ndarray:
    """Active/shelved state walk over precomputed per-pulse event draws.

    A shelving emission at pulse j makes pulses j+1 .. k-1 dark, where k is
    the first later pulse whose preceding period contained a recovery.
    """
    n = emitted.size
    active = np.ones(n, dtype=bool)
    shelf_candidates = np.flatnonzero(emitted & shelve_draw)
    recover_idx = np.flatnonzero(recover_draw)
    pos = 0
    while True:
        nxt = np.searchsorted(shelf_candidates, pos)
        if nxt == shelf_candidates.size:
            break
        j = shelf_candidates[nxt]
        r = np.searchsorted(recover_idx, j + 1)
        k = recover_idx[r] if r < recover_idx.size else n
        active[j + 1 : k] = False
        pos = k
    return active


def simulate_emitter_stream(
    scheme: EmitterLevelScheme,
    background: BackgroundModel,
    n_pulses: int,
    period: float,
    seed: int,
) -> CountRecord:
    """Per-pulse Monte Carlo of the shelving emitter plus background.

    Fully determined by (parameters, seed): every random decision comes from
    a fixed Philox stream, so reruns reproduce the record bit for bit.
    """
    if n_pulses < 1:
        raise ValidationError("need at least one pulse")
    if period <= 0.0:
        raise ValidationError("pulse period must be positive")
    excite = _stream(seed, _STREAM_EXCITE).random(n_pulses) < scheme.p_excite
    detect = _stream(seed, _STREAM_DETECT).random(n_pulses) < scheme.p_detect
    if scheme.p_shelve > 0.0:
        shelve = _stream(seed, _STREAM_SHELVE).random(n_pulses) < scheme.p_shelve
        q_recover = -math.expm1(-scheme.shelf_recovery * period)
        recover = _stream(seed, _STREAM_RECOVER).random(n_pulses) < q_recover
        active = _shelf_activity(excite, shelve, recover)
    else:
        active = True
    signal = (excite & detect & active).astype(np.int64)
    b = background.counts_per_pulse(period)
    if b > 0.0:
        signal = signal + _stream(seed, _STREAM_BACKGROUND).poisson(b, n_pulses)
    return CountRecord(counts=signal, period=period, seed=seed)


def g2_zero_analytic(signal_fraction: float) -> float:
    """Zero-lag autocorrelation of one emitter over Poissonian background.

    With a signal fraction rho = S/(S+B), g2(0) = 1 - rho^2.
    """
    if not 0.0 <= signal_fraction <= 1.0:
        raise ValidationError("signal fraction must lie in [0, 1]")
    return 1.0 - signal_fraction**2


def g2_estimator(
    record: CountRecord,
    max_lag: int,
    norm_window: tuple[int, int] | None = None,
    min_norm_coincidences: float = 1e4,
) -> TimeTrace:
    """Pulsed intensity autocorrelation g2 versus lag.

    g2(m) = <n_i n_{i+m}> / norm for m > 0 and <n_i (n_i - 1)> / norm at
    m = 0, with norm the mean pair rate over a far-lag window (by default
    the last quarter of the computed lags) where correlations have died out.
    The 'sigma' column is the 1-sigma statistical error from Poisson
    counting of coincidences.
    """
    counts = record.counts
    if counts.size == 0:
        raise ValidationError("empty count record")
    if max_lag < 4:
        raise ValidationError("max_lag must be at least 4")
    if max_lag >= counts.size:
        raise ValidationError("max_lag must be smaller than the record length")
    c = counts.astype(np.float64)
    n = c.size
    lags = np.arange(max_lag + 1)
    coincidences = np.empty(max_lag + 1)
    pairs = np.empty(max_lag + 1)
    coincidences[0] = float(np.dot(c, c) - c.sum())  # sum of n(n-1)
    pairs[0] = n
    for m in range(1, max_lag + 1):
        coincidences[m] = float(np.dot(c[:-m], c[m:]))
        pairs[m] = n - m
    rates = coincidences / pairs
    if norm_window is None:
        norm_window = (int(math.ceil(0.75 * max_lag)), max_lag)
    lo, hi = norm_window
    if not 0 < lo < hi <= max_lag:
        raise ValidationError(f"invalid normalization window {norm_window}")
    window = slice(lo, hi + 1)
    window_coincidences = float(np.sum(coincidences[window]))
    if window_coincidences < min_norm_coincidences:
        raise FitError(
            f"normalization window holds {window_coincidences:.0f} coincidences "
            f"(< {min_norm_coincidences:.0f}); use a longer record"
        )
    norm = float(np.mean(rates[window]))
    g2 = rates / norm
    sigma = np.sqrt(np.maximum(coincidences, 1.0)) / pairs / norm
    return TimeTrace(
        x=lags * record.period,
        y=g2,
        x_name="lag",
        x_unit="s",
        y_name="g2",
        y_unit="dimensionless",
        metadata={
            "n_pulses": n,
            "period_s": record.period,
            "seed": record.seed,
            "norm_window": (lo, hi),
            "norm_rate": norm,
        },
        extra={"sigma": sigma, "lag_pulses": lags.astype(float)},
    )


def bunching_curve(
    scheme: EmitterLevelScheme,
    background: BackgroundModel,
    n_pulses: int,
    period: float,
    seed: int,
    max_lag: int,
    norm_window: tuple[int, int] | None = None,
) -> TimeTrace:
    """g2 of a shelving emitter; shows g2 > 1 at lags below the shelf time."""
    if scheme.p_shelve <= 0.0:
        raise ValidationError("bunching requires a positive shelving probability")
    record = simulate_emitter_stream(scheme, background, n_pulses, period, seed)
    return g2_estimator(record, max_lag, norm_window)


def bunching_lag_constant(trace: TimeTrace) -> float:
    """Decay lag of the bunching shoulder: exponential fit to g2 - 1, in seconds.

    Only lags where the excess still exceeds 5% of its peak enter the fit;
    beyond that the excess is statistical noise around zero.
    """
    excess = trace.y[1:] - 1.0
    lag = trace.x[1:]
    usable = excess > 0.05 * np.max(excess)
    if np.count_nonzero(usable) < 4:
        raise FitError("no bunching shoulder to fit")
    design = np.vstack([lag[usable], np.ones(int(np.count_nonzero(usable)))]).T
    coeffs, _, _, _ = np.linalg.lstsq(design, np.log(excess[usable]), rcond=None)
    if coeffs[0] >= 0.0:
        raise FitError("bunching excess does not decay")
    return -1.0 / float(coeffs[0])


def _chunked_indices(total: int) -> list[tuple[int, int, int]]:
    """(chunk_id, start, stop) partition with fixed chunk size."""
    return [
        (cid, start, min(start + CHUNK, total))
        for cid, start in enumerate(range(0, total, CHUNK))
    ]


def _run_chunks(task, chunks, workers: int):
    if workers <= 1:
        return [task(c) for c in chunks]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(task, chunks))


def sfs_generate(
    amplitude: float,
    exponent: float,
    detuning_min: float,
    detuning_max: float,
    bin_width: float,
    seed: int,
    workers: int = 1,
    detuning_unit: str = "GHz",
) -> TimeTrace:
    """Statistical fine structure of the inhomogeneous line tail.

    Each bin draws an ion count from Poisson(A * Delta^-p), Delta being the
    bin-center detuning in the same unit the amplitude was calibrated in.
    The 'shot_noise' column carries the projected sqrt(N) envelope and
    'expected' the model mean.
    """
    if amplitude < 0.0 or exponent <= 0.0:
        raise ValidationError("amplitude must be non-negative and exponent positive")
    if detuning_min <= 0.0 or detuning_max <= detuning_min or bin_width <= 0.0:
        raise ValidationError("need 0 < detuning_min < detuning_max and positive bin width")
    n_bins = int(math.floor((detuning_max - detuning_min) / bin_width))
    if n_bins < 1:
        raise ValidationError("detuning range shorter than one bin")
    centers = detuning_min + bin_width * (np.arange(n_bins) + 0.5)
    expected = amplitude * centers ** (-exponent)

    def draw(chunk):
        cid, start, stop = chunk
        return _stream(seed, cid).poisson(expected[start:stop])

    pieces = _run_chunks(draw, _chunked_indices(n_bins), workers)
    observed = np.concatenate(pieces).astype(float)
    return TimeTrace(
        x=centers,
        y=observed,
        x_name="detuning",
        x_unit=detuning_unit,
        y_name="ion_count",
        y_unit="ions/bandwidth",
        metadata={
            "amplitude": amplitude,
            "exponent": exponent,
            "bin_width": bin_width,
            "seed": seed,
        },
        extra={"expected": expected, "shot_noise": np.sqrt(expected)},
    )


def coupling_histogram(
    samples: int,
    seed: int,
    bins: int = 25,
    workers: int = 1,
    at_antinode: bool = False,
) -> TimeTrace:
    """Distribution of relative emission rate over random ion positions.

    Ions are placed uniformly in a surrogate standing-wave mode: relative
    coupling |cos(2 pi x/lambda_eff)| * exp(-(y^2+z^2)/w^2) over one axial
    period and a transverse box of one waist. The relative photoluminescence
    follows the Purcell rate map, PL ~ (g/g_max)^2. Returns bin-center
    fractions; 'count' holds the raw histogram.
    """
    if samples < 1000:
        raise ValidationError("need at least 1000 samples for a stable histogram")
    if bins < 2:
        raise ValidationError("need at least 2 bins")
    edges = np.linspace(0.0, 1.0, bins + 1)

    def draw(chunk):
        cid, start, stop = chunk
        m = stop - start
        if at_antinode:
            pl = np.ones(m)
        else:
            rng = _stream(seed, cid)
            x = rng.random(m)  # axial position in units of lambda_eff, one period
            y = rng.uniform(-1.0, 1.0, m)  # transverse, units of the waist
            z = rng.uniform(-1.0, 1.0, m)
            g_rel = np.abs(np.cos(2.0 * math.pi * x)) * np.exp(-(y**2 + z**2))
            pl = g_rel**2
        hist, _ = np.histogram(pl, bins=edges)
        return hist

    pieces = _run_chunks(draw, _chunked_indices(samples), workers)
    hist = np.sum(pieces, axis=0)
    centers = 0.5 * (edges[:-1] + edges[1:])
    return TimeTrace(
        x=centers,
        y=hist / samples,
        x_name="relative_pl",
        x_unit="dimensionless",
        y_name="fraction_of_ions",
        y_unit="dimensionless",
        metadata={"samples": samples, "seed": seed, "bins": bins, "at_antinode": at_antinode},
        extra={"count": hist.astype(float)},
    )
