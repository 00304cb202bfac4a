"""Twin-beam noise criteria: noise figures, difference noise, gemellity.

All quantities are linear relative to the standard quantum limit
(vacuum variance = 1); decibel helpers convert via 10 log10.  The
gemellity of a pair with amplitude noise figures F_a, F_b and
normalized correlation C_ab is

    (F_a + F_b)/2 - sqrt(C_ab^2 F_a F_b + ((F_a - F_b)/2)^2),

the smallest difference noise reachable by optimally weighting the two
photocurrents; values below 1 certify nonclassical twin correlations.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .gaussian import CovarianceState

__all__ = [
    "NoiseFigures",
    "InferenceResult",
    "db_from_linear",
    "linear_from_db",
    "noise_figures",
    "gemellity",
    "gemellity_db",
    "balanced_difference_noise",
    "weighted_difference_noise",
    "optimal_weights",
    "infer_from_measurement",
    "electronic_noise_correction",
]

_VARIANCE_FLOOR = 1e-12


@dataclass(frozen=True)
class NoiseFigures:
    """Amplitude-quadrature noise figures of a beam pair.

    f_a, f_b are the individual variances relative to the SQL and c_ab
    is the normalized amplitude correlation <X_a X_b>/sqrt(F_a F_b).
    """

    f_a: float
    f_b: float
    c_ab: float

    def __post_init__(self):
        if self.f_a <= 0.0 or self.f_b <= 0.0:
            raise ValueError(
                f"noise figures must be positive, got ({self.f_a}, {self.f_b})"
            )
        if abs(self.c_ab) > 1.0 + 1e-9:
            raise ValueError(f"correlation must lie in [-1, 1], got {self.c_ab}")


@dataclass(frozen=True)
class InferenceResult:
    """Noise figures and gemellity reconstructed from measured spectra."""

    figures: NoiseFigures
    gemellity: float
    gemellity_db: float


def db_from_linear(x: float) -> float:
    if x <= 0.0:
        raise ValueError(f"cannot express nonpositive ratio {x} in dB")
    return 10.0 * np.log10(x)


def linear_from_db(x_db: float) -> float:
    return float(10.0 ** (x_db / 10.0))


def _rotation_to_mean(mean: complex) -> np.ndarray:
    """2x2 quadrature rotation aligning X with the mean-field phase."""
    phi = np.angle(mean) if abs(mean) > 0 else 0.0
    c, s = np.cos(phi), np.sin(phi)
    return np.array([[c, s], [-s, c]])


def noise_figures(state: CovarianceState) -> NoiseFigures:
    """Extract amplitude noise figures from a Gaussian state.

    The amplitude quadrature of each mode is taken along its mean field
    when the mean is nonzero (intensity detection measures fluctuations
    in phase with the carrier); modes with zero mean use X as is.
    """
    r = np.zeros((4, 4))
    r[:2, :2] = _rotation_to_mean(state.mean[0])
    r[2:, 2:] = _rotation_to_mean(state.mean[1])
    cov = r @ state.cov @ r.T
    f_a, f_b = cov[0, 0], cov[2, 2]
    if f_a < _VARIANCE_FLOOR or f_b < _VARIANCE_FLOOR:
        raise ValueError("degenerate covariance, amplitude variance is not positive")
    c_ab = cov[0, 2] / np.sqrt(f_a * f_b)
    return NoiseFigures(float(f_a), float(f_b), float(np.clip(c_ab, -1.0, 1.0)))


def gemellity(figures: NoiseFigures) -> float:
    """Twin-beam criterion; equals the weighted difference noise at the
    optimal power splitting and is symmetric under beam exchange."""
    fa, fb, c = figures.f_a, figures.f_b, figures.c_ab
    return (fa + fb) / 2.0 - np.sqrt(c * c * fa * fb + ((fa - fb) / 2.0) ** 2)


def gemellity_db(figures: NoiseFigures) -> float:
    return db_from_linear(gemellity(figures))


def balanced_difference_noise(figures: NoiseFigures) -> float:
    """Noise of (X_a - X_b)/sqrt(2), the equal-weight difference."""
    fa, fb, c = figures.f_a, figures.f_b, figures.c_ab
    return (fa + fb) / 2.0 - c * np.sqrt(fa * fb)


def weighted_difference_noise(figures: NoiseFigures, p_a: float, p_b: float) -> float:
    """Intensity-difference noise for beam powers p_a, p_b, relative to
    the SQL of the total detected power."""
    _check_powers(p_a, p_b)
    fa, fb, c = figures.f_a, figures.f_b, figures.c_ab
    num = p_a * fa + p_b * fb - 2.0 * np.sqrt(p_a * p_b) * c * np.sqrt(fa * fb)
    return num / (p_a + p_b)


def optimal_weights(figures: NoiseFigures) -> tuple[float, float]:
    """Power fractions (summing to 1) at which the weighted difference
    noise attains its minimum, which is the gemellity.  For c_ab < 0
    the same fractions apply with the analyzer summing instead of
    subtracting the photocurrents."""
    fa, fb, c = figures.f_a, figures.f_b, figures.c_ab
    root = np.sqrt(c * c * fa * fb + ((fa - fb) / 2.0) ** 2)
    if root == 0.0:
        # isotropic case, any split realizes the minimum
        return 0.5, 0.5
    p_a = (root + (fb - fa) / 2.0) / (2.0 * root)
    return float(p_a), float(1.0 - p_a)


def _check_powers(p_a: float, p_b: float) -> None:
    if p_a < 0.0 or p_b < 0.0:
        raise ValueError(f"powers must be nonnegative, got ({p_a}, {p_b})")
    if p_a + p_b <= 0.0:
        raise ValueError("total power must be positive")


def infer_from_measurement(
    diff_db: float,
    f_a_db: float,
    f_b_db: float,
    p_a: float,
    p_b: float,
) -> InferenceResult:
    """Reconstruct C_ab and the gemellity from measured spectra.

    Parameters
    ----------
    diff_db : float
        Intensity-difference noise relative to the SQL of the total
        power, in dB.
    f_a_db, f_b_db : float
        Individual noise figures in dB.
    p_a, p_b : float
        Detected beam powers (any common unit).
    """
    _check_powers(p_a, p_b)
    if p_a == 0.0 or p_b == 0.0:
        raise ValueError("correlation is undefined when one beam power vanishes")
    s = linear_from_db(diff_db)
    fa = linear_from_db(f_a_db)
    fb = linear_from_db(f_b_db)
    c = (p_a * fa + p_b * fb - s * (p_a + p_b)) / (
        2.0 * np.sqrt(p_a * p_b * fa * fb)
    )
    if abs(c) > 1.0 + 1e-9:
        raise ValueError(
            f"inferred correlation {c:.6f} lies outside [-1, 1]; "
            "measurement inputs are inconsistent"
        )
    figures = NoiseFigures(fa, fb, float(np.clip(c, -1.0, 1.0)))
    g = gemellity(figures)
    return InferenceResult(figures, float(g), db_from_linear(g))


def electronic_noise_correction(raw_db: float, floor_db: float | None = None) -> float:
    """Subtract an electronic noise floor in linear power units.

    A floor of None means no correction.  The floor must lie strictly
    below the raw level.
    """
    if floor_db is None:
        return raw_db
    if floor_db >= raw_db:
        raise ValueError(
            f"noise floor {floor_db} dB is not below the raw level {raw_db} dB"
        )
    return db_from_linear(linear_from_db(raw_db) - linear_from_db(floor_db))
