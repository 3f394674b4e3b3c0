"""Autoregressive fitting kernel: autocovariances, Levinson-Durbin, likelihoods.

A time series is a 1-D float array.  Everything here treats the input as
already mean-corrected unless noted; use :func:`mean_correct` first.

Coefficient sign convention: an AR(p) fit is stored as the vector
``(b_1, ..., b_p)`` of the whitening filter

    x[t] + b_1 * x[t-1] + ... + b_p * x[t-p] = e[t],

so a process generated as ``x[t] = a * x[t-1] + e[t]`` fits with
``coeffs[0] ~= -a``.  The simulation module uses the generating convention
and negates at the boundary.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

__all__ = [
    "AutocovSeq",
    "ARFit",
    "DegenerateFitError",
    "mean_correct",
    "sample_autocov",
    "levinson_durbin",
    "conditional_loglik",
    "fit_ar",
    "bic_select_order",
]

LOG_2PI = math.log(2.0 * math.pi)


class DegenerateFitError(ArithmeticError):
    """The Yule-Walker system is singular or broke down mid-recursion."""


def as_series(values) -> np.ndarray:
    """Coerce to a 1-D float array and validate basic invariants."""
    x = np.asarray(values, dtype=float)
    if x.ndim != 1:
        x = x.ravel()
    if x.size < 1:
        raise ValueError("time series must contain at least one observation")
    if not np.all(np.isfinite(x)):
        raise ValueError("time series contains non-finite values")
    return x


@dataclass(frozen=True)
class AutocovSeq:
    """Sample autocovariances gamma[0..max_lag] plus the sample size behind them."""

    gamma: np.ndarray
    sample_size: int

    @property
    def max_lag(self) -> int:
        return len(self.gamma) - 1


@dataclass(frozen=True)
class ARFit:
    """AR(p) fit: whitening coefficients, innovation variance, optional loglik."""

    order: int
    coeffs: np.ndarray
    sigma2: float
    loglik: float | None = None


def mean_correct(values) -> np.ndarray:
    """Subtract the arithmetic mean; the result sums to zero up to rounding."""
    x = as_series(values)
    return x - x.mean()


def sample_autocov(values, max_lag: int) -> AutocovSeq:
    """Sample autocovariances with divisor T at every lag.

    gamma[j] = (1/T) * sum_{t=j}^{T-1} x[t] * x[t-j] for j = 0..max_lag.
    No mean is subtracted here; the caller mean-corrects first.  The
    divisor-T form keeps the sequence positive semidefinite, which the
    Levinson-Durbin recursion relies on.
    """
    x = as_series(values)
    n = len(x)
    if not 0 <= max_lag < n:
        raise ValueError(f"max_lag must be in [0, {n - 1}], got {max_lag}")
    gamma = np.empty(max_lag + 1)
    for j in range(max_lag + 1):
        gamma[j] = x[j:] @ x[: n - j] / n
    return AutocovSeq(gamma=gamma, sample_size=n)


def _levinson_path(gamma: np.ndarray, order: int) -> tuple[np.ndarray, np.ndarray]:
    """Run the recursion up to `order`.

    Returns (phi, sigma2s) where phi[p-1, :p] are the predictor coefficients
    of the order-p solution (x[t] ~ sum phi_j x[t-j]) and sigma2s[p] is the
    innovation variance at order p.  Raises DegenerateFitError if a stage
    cannot be completed.
    """
    sigma2s = np.empty(order + 1)
    sigma2s[0] = gamma[0]
    phi = np.zeros((order, order)) if order else np.zeros((0, 0))
    for m in range(1, order + 1):
        prev = sigma2s[m - 1]
        if not (prev > 0.0) or not math.isfinite(prev):
            raise DegenerateFitError(
                f"Levinson-Durbin broke down entering order {m}: "
                f"residual variance {prev!r} at order {m - 1}"
            )
        acc = gamma[m]
        if m > 1:
            acc -= phi[m - 2, : m - 1] @ gamma[m - 1 : 0 : -1]
        reflect = acc / prev
        phi[m - 1, m - 1] = reflect
        if m > 1:
            phi[m - 1, : m - 1] = phi[m - 2, : m - 1] - reflect * phi[m - 2, m - 2 :: -1]
        sigma2s[m] = prev * (1.0 - reflect * reflect)
    return phi, sigma2s


def levinson_durbin(acov: AutocovSeq, order: int) -> ARFit:
    """Solve the Yule-Walker equations for the given order.

    Coefficients come out in the whitening convention (see module docstring):
    they solve -Gamma_p @ coeffs = gamma_p, and
    sigma2 = gamma[0] + gamma_p @ coeffs.  Equivalent to a dense Toeplitz
    solve but O(p^2).

    Raises
    ------
    ValueError
        if the autocovariance sequence is shorter than the order requires.
    DegenerateFitError
        if gamma[0] <= 0 with order >= 1, or a recursion stage yields a
        non-positive residual variance.
    """
    if order < 0:
        raise ValueError("order must be nonnegative")
    gamma = np.asarray(acov.gamma, dtype=float)
    if len(gamma) < order + 1:
        raise ValueError(
            f"need autocovariances to lag {order}, have {len(gamma) - 1}"
        )
    if order == 0:
        return ARFit(order=0, coeffs=np.empty(0), sigma2=float(gamma[0]))
    if not gamma[0] > 0.0:
        raise DegenerateFitError(
            "Levinson-Durbin broke down entering order 1: gamma[0] is not positive"
        )
    phi, sigma2s = _levinson_path(gamma, order)
    coeffs = -phi[order - 1, :order].copy()
    return ARFit(order=order, coeffs=coeffs, sigma2=float(sigma2s[order]))


def _whitening_residuals(x: np.ndarray, coeffs: np.ndarray) -> np.ndarray:
    """e[t] = x[t] + sum_j coeffs[j] * x[t-j-1] for t = p..T-1 (0-based)."""
    p = len(coeffs)
    if p == 0:
        return x
    e = x[p:].copy()
    n = len(x)
    for j, b in enumerate(coeffs, start=1):
        e += b * x[p - j : n - j]
    return e


def conditional_loglik(values, fit: ARFit) -> float:
    """Gaussian log-likelihood conditional on the first `order` observations.

    Sums log N(e[t]; 0, sigma2) over t = order..T-1; the first `order`
    points seed the filter and contribute no terms.
    """
    x = as_series(values)
    if fit.sigma2 <= 0.0:
        raise ValueError("conditional_loglik requires sigma2 > 0")
    if len(x) <= fit.order:
        raise ValueError(
            f"series of length {len(x)} too short for order {fit.order}"
        )
    e = _whitening_residuals(x, fit.coeffs)
    n = len(e)
    return float(-0.5 * (n * (LOG_2PI + math.log(fit.sigma2)) + e @ e / fit.sigma2))


def fit_ar(values, order: int) -> ARFit:
    """Yule-Walker fit of a mean-corrected series, with loglik filled in."""
    x = as_series(values)
    if len(x) <= order:
        raise ValueError(f"series of length {len(x)} too short for order {order}")
    fit = levinson_durbin(sample_autocov(x, order), order)
    return ARFit(
        order=fit.order,
        coeffs=fit.coeffs,
        sigma2=fit.sigma2,
        loglik=conditional_loglik(x, fit),
    )


def bic_select_order(values, max_order: int) -> int:
    """Pick the AR order in 0..max_order minimizing BIC; ties go to the smallest.

    BIC(p) = -2 * conditional_loglik + (p + 1) * log(T).
    """
    x = as_series(values)
    if max_order < 1:
        raise ValueError("max_order must be >= 1")
    if len(x) <= max_order:
        raise ValueError(
            f"series of length {len(x)} too short for max_order {max_order}"
        )
    log_t = math.log(len(x))
    best_order = None
    best_bic = math.inf
    errors: list[str] = []
    for p in range(max_order + 1):
        try:
            fit = fit_ar(x, p)
        except (DegenerateFitError, ValueError) as exc:
            errors.append(f"order {p}: {exc}")
            continue
        bic = -2.0 * fit.loglik + (p + 1) * log_t
        if bic < best_bic:
            best_bic = bic
            best_order = p
    if best_order is None:
        raise DegenerateFitError(
            "BIC order selection failed at every order: " + "; ".join(errors)
        )
    return best_order
