"""
Bernoulli function, weight function and the Green's function for the flux.

    B(z) = z / (e^z - 1)
    W(z) = (e^z - 1 - z) / (z (e^z - 1)) = (1 - B(z)) / z

All functions accept scalars or numpy arrays and return the same shape
(a Python float for scalar input). Evaluation is split into a Taylor branch
near z = 0, an expm1 branch, and asymptotic branches for large |z| so that
no exponential is ever taken of an argument beyond the asymptotic threshold.
"""
import logging
from typing import Literal

import numpy as np

from cfs.exceptions import DomainError

logger = logging.getLogger("cfs.scheme.special_functions")

# Below this |z| the direct formulas lose digits to cancellation
BERNOULLI_SERIES_THRESHOLD = 1e-4
WEIGHT_SERIES_THRESHOLD = 5e-2
# Beyond this |z|, e^{-|z|} is below double precision relative to 1
ASYMPTOTIC_THRESHOLD = 35.0

Side = Literal["left", "right"]


def _as_array(z):
    return np.atleast_1d(np.asarray(z, dtype=float))


def _restore(z, out: np.ndarray):
    if np.ndim(z) == 0:
        return float(out[0])
    return out.reshape(np.shape(z))


def bernoulli(z):
    """
    Numerically stable Bernoulli function B(z) = z / (e^z - 1).

    B(0) = 1 by continuity. For large positive z the result underflows
    gracefully to 0; for large negative z it follows -z via B(-z) = z + B(z).
    """
    z_arr = _as_array(z)
    out = np.empty_like(z_arr)

    small = np.abs(z_arr) < BERNOULLI_SERIES_THRESHOLD
    big_pos = z_arr > ASYMPTOTIC_THRESHOLD
    big_neg = z_arr < -ASYMPTOTIC_THRESHOLD
    mid = ~(small | big_pos | big_neg)

    zs = z_arr[small]
    zs2 = zs * zs
    out[small] = 1.0 - zs / 2.0 + zs2 / 12.0 - zs2 * zs2 / 720.0

    zm = z_arr[mid]
    out[mid] = zm / np.expm1(zm)

    zp = z_arr[big_pos]
    out[big_pos] = zp * np.exp(-zp)

    # B(z) = -z + B(-z) with B(-z) ~ -z e^{z}
    zn = z_arr[big_neg]
    out[big_neg] = -zn * (1.0 + np.exp(zn))

    return _restore(z, out)


def weight(z):
    """
    Weight function W(z) = (1 - B(z)) / z, with W(0) = 1/2.

    Satisfies 0 <= W(z) <= 1 and W(-z) + W(z) = 1.
    """
    z_arr = _as_array(z)
    out = np.empty_like(z_arr)

    small = np.abs(z_arr) < WEIGHT_SERIES_THRESHOLD
    zs = z_arr[small]
    zs2 = zs * zs
    # 1/2 - z/12 + z^3/720 - z^5/30240 + z^7/1209600
    out[small] = 0.5 - zs / 12.0 * (
        1.0 - zs2 / 60.0 * (1.0 - zs2 / 42.0 * (1.0 - zs2 / 40.0))
    )

    zr = z_arr[~small]
    out[~small] = (1.0 - bernoulli(zr)) / zr

    return _restore(z, out)


def _green_left(sigma: np.ndarray, peclet: float) -> np.ndarray:
    # (1 - e^{-P sigma}) / (1 - e^{-P}), rescaled so exponents stay <= 0
    if peclet > 0:
        return np.expm1(-peclet * sigma) / np.expm1(-peclet)
    return np.exp(peclet * (1.0 - sigma)) * np.expm1(peclet * sigma) / np.expm1(peclet)


def _green_right(sigma: np.ndarray, peclet: float) -> np.ndarray:
    # -(1 - e^{P(1 - sigma)}) / (1 - e^{P}), rescaled so exponents stay <= 0
    if peclet < 0:
        return -np.expm1(peclet * (1.0 - sigma)) / np.expm1(peclet)
    return -np.exp(-peclet * sigma) * np.expm1(-peclet * (1.0 - sigma)) / np.expm1(-peclet)


def green_flux(sigma, peclet: float, side: Side = "left"):
    """
    Green's function for the flux of a constant-coefficient cell.

    Args:
        sigma: Normalised position(s) in [0, 1] along the cell.
        peclet: Cell Peclet number P (P = 0 returns the diffusion limit).
        side: Branch used exactly at sigma = 1/2, where G jumps by one:
            "left" gives G(1/2-), "right" gives G(1/2+).

    Returns:
        G(sigma; P) with the shape of ``sigma``.

    Raises:
        DomainError: if any sigma lies outside [0, 1] or side is unknown.
    """
    if side not in ("left", "right"):
        raise DomainError(f"side must be 'left' or 'right', got {side!r}")
    s_arr = _as_array(sigma)
    if np.any((s_arr < 0.0) | (s_arr > 1.0)) or not np.all(np.isfinite(s_arr)):
        raise DomainError(f"sigma must lie in [0, 1], got {sigma!r}")
    peclet = float(peclet)

    on_left = (s_arr < 0.5) | ((s_arr == 0.5) & (side == "left"))
    out = np.empty_like(s_arr)
    if peclet == 0.0:
        out[on_left] = s_arr[on_left]
        out[~on_left] = s_arr[~on_left] - 1.0
    else:
        out[on_left] = _green_left(s_arr[on_left], peclet)
        out[~on_left] = _green_right(s_arr[~on_left], peclet)
    return _restore(sigma, out)
