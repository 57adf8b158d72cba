"""Synthetic free-decay traces and Q extraction from their envelope."""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import curve_fit

from .errors import FitError, ValidationError

MIN_DECAY_TIMES = 0.1


@dataclass(frozen=True)
class RingdownSeries:
    time: np.ndarray
    amplitude: np.ndarray

    def __len__(self):
        return self.time.size

    def to_csv(self):
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["time_s", "amplitude"])
        for t, a in zip(self.time.tolist(), self.amplitude.tolist()):
            writer.writerow([repr(t), repr(a)])
        return buf.getvalue()

    @classmethod
    def from_csv(cls, text):
        rows = list(csv.reader(io.StringIO(text)))
        if not rows or rows[0] != ["time_s", "amplitude"]:
            raise ValidationError("ringdown", "expected header 'time_s,amplitude'")
        data = np.array([[float(a), float(b)] for a, b in rows[1:]], dtype=float).reshape(-1, 2)
        return cls(data[:, 0], data[:, 1])


@dataclass(frozen=True)
class RingdownFit:
    q: float
    q_stderr: float
    amplitude0: float
    decay_time: float
    samples_used: int


def decay_time(Q, omega_m):
    """Amplitude 1/e time 2Q/omega."""
    return 2 * Q / omega_m


def synthesize_ringdown(Q, omega_m, amplitude, sample_rate, duration, noise=0.0, seed=0):
    """Envelope A exp(-omega t / 2Q) plus white Gaussian noise of rms ``noise * A``."""
    for name, value in (("Q", Q), ("omega_m", omega_m), ("amplitude", amplitude),
                        ("sample_rate", sample_rate), ("duration", duration)):
        if not (math.isfinite(value) and value > 0):
            raise ValidationError(name, "must be positive and finite")
    if noise < 0:
        raise ValidationError("noise", "must be >= 0")
    count = int(math.floor(duration * sample_rate + 1e-9)) + 1
    t = np.arange(count) / sample_rate
    envelope = amplitude * np.exp(-t * omega_m / (2 * Q))
    if noise:
        rng = np.random.default_rng(seed)
        envelope = envelope + noise * amplitude * rng.standard_normal(count)
    return RingdownSeries(t, envelope)


def fit_ringdown(series, omega_m, floor=0.0):
    """Fit an exponential envelope and return Q = omega / (2 |slope|).

    A weighted straight line through log(envelope) of the samples above
    ``floor`` gives the starting slope. Because log(y + noise) is biased
    low where the noise is comparable to y, the result is refined by least
    squares on the amplitude itself. That refinement uses every sample up to
    the time the seed envelope reaches ``floor``, so the cut depends on the
    model rather than on the noisy values.
    """
    t = np.asarray(series.time, dtype=float)
    y = np.asarray(series.amplitude, dtype=float)
    finite = np.isfinite(t) & np.isfinite(y)
    t, y = t[finite], y[finite]
    keep = y > max(floor, 0.0)
    if np.count_nonzero(keep) < 4:
        raise FitError("fewer than four usable samples above the noise floor")
    tk, yk = t[keep], y[keep]
    if np.ptp(tk) == 0:
        raise FitError("samples span zero time")
    (slope, intercept) = np.polyfit(tk, np.log(yk), 1, w=yk)
    if not slope < 0:
        raise FitError("envelope does not decay")
    a0, rate = math.exp(float(intercept)), -float(slope)
    if floor > 0 and a0 > floor:
        window = t <= t[0] + math.log(a0 / floor) / rate
    else:
        window = np.ones_like(t, dtype=bool)
    tw, yw = t[window], y[window]
    if tw.size < 4:
        raise FitError("fewer than four samples before the envelope reaches the floor")
    t0 = tw[0]
    try:
        popt, pcov = curve_fit(
            lambda tt, a, b: a * np.exp(-b * (tt - t0)),
            tw, yw, p0=(a0 * math.exp(-rate * t0), rate),
        )
    except (RuntimeError, ValueError) as exc:
        raise FitError(f"envelope fit did not converge ({exc})") from None
    amp, rate = float(popt[0]), float(popt[1])
    if not (rate > 0 and math.isfinite(rate)):
        raise FitError("envelope does not decay")
    span = float(np.ptp(tw))
    if span * rate < MIN_DECAY_TIMES:
        raise FitError(f"series covers only {span * rate:.3g} decay times; need {MIN_DECAY_TIMES}")
    rate_err = math.sqrt(max(float(pcov[1, 1]), 0.0)) if np.all(np.isfinite(pcov)) else math.inf
    q = float(omega_m / (2 * rate))
    return RingdownFit(
        q=q,
        q_stderr=float(q * rate_err / rate),
        amplitude0=amp * math.exp(rate * t0),
        decay_time=1 / rate,
        samples_used=int(tw.size),
    )
