"""Brute-force quadrature engine used as ground truth for the closed forms.

Nothing in the analytic modules depends on this one; it is imported by the
test suite and by ``certify``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .crosswigner import PhaseSpaceField
from .errors import ConfigError, NumericalError, TruncationError
from .propagation import kernel
from .states import PhysicalConfig

__all__ = [
    "SampledWavefunction",
    "sample",
    "aligned_axis",
    "cw_quadrature",
    "cw_field",
    "wigner_quadrature",
    "overlap",
    "fourier_transform",
    "propagate",
    "compose_kernels",
    "DECAY_TOL",
]

# Relative amplitude allowed at the ends of a sampled axis (1e-12 in the product).
DECAY_TOL = 1e-6


@dataclass(frozen=True)
class SampledWavefunction:
    x_axis: np.ndarray
    values: np.ndarray

    def __post_init__(self):
        x = np.asarray(self.x_axis, dtype=float)
        v = np.asarray(self.values, dtype=complex)
        if x.ndim != 1 or x.shape != v.shape or x.size < 3:
            raise ConfigError("axis and values must be matching 1-D arrays", "x_axis")
        step = np.diff(x)
        if np.any(step <= 0) or np.ptp(step) > 1e-9 * step[0]:
            raise ConfigError("axis must be uniform and increasing", "x_axis")
        object.__setattr__(self, "x_axis", x)
        object.__setattr__(self, "values", v)

    @property
    def h(self) -> float:
        return float(self.x_axis[1] - self.x_axis[0])

    def norm(self) -> float:
        return math.sqrt(np.trapezoid(np.abs(self.values) ** 2, self.x_axis))

    def check_decay(self, tol=DECAY_TOL):
        a = np.abs(self.values)
        peak = a.max()
        edge = max(a[0], a[-1])
        if peak == 0 or edge > tol * peak:
            raise TruncationError(f"edge amplitude {edge / peak if peak else 1:.2e} of peak "
                                  f"exceeds {tol:g}; widen the sample axis")


def sample(fn, x_axis) -> SampledWavefunction:
    """Sample a callable (a GaussianState or any vectorised function) on ``x_axis``."""
    x = np.asarray(x_axis, dtype=float)
    return SampledWavefunction(x, np.asarray(fn(x), dtype=complex))


def aligned_axis(x_out, extent: float, max_step: float) -> np.ndarray:
    """Uniform sample axis containing every point of the uniform grid ``x_out``.

    The step divides the output spacing and is at most ``max_step``; the axis
    covers at least ``[-extent, extent]``.
    """
    x_out = np.asarray(x_out, dtype=float)
    if x_out.size < 2:
        h = max_step
        origin = float(x_out[0]) if x_out.size else 0.0
    else:
        dx = x_out[1] - x_out[0]
        h = dx / math.ceil(dx / max_step)
        origin = float(x_out[0])
    lo = origin - h * math.ceil((origin + extent) / h)
    hi_n = math.ceil((extent - lo) / h)
    return lo + h * np.arange(hi_n + 1)


def _shared(phi, psi):
    if phi.x_axis.shape != psi.x_axis.shape or not np.array_equal(phi.x_axis, psi.x_axis):
        raise ConfigError("phi and psi must share one sample axis", "x_axis")


def cw_quadrature(phi: SampledWavefunction, psi: SampledWavefunction, x, k,
                  check: bool = True):
    """Cross-Wigner ``CW_{phi,psi}(x, k)`` by direct quadrature.

    Returns an array of shape ``(len(x), len(k))``. Output positions that
    coincide with sample points use the exact samples at ``x +- h j`` (so the
    shift is ``y = 2 h j``); other positions fall back to linear interpolation
    on a ``y`` grid of step ``h``.
    """
    _shared(phi, psi)
    if check:
        phi.check_decay()
        psi.check_decay()
    xs, h = phi.x_axis, phi.h
    n = xs.size
    x = np.atleast_1d(np.asarray(x, dtype=float))
    k = np.atleast_1d(np.asarray(k, dtype=float))
    if x.min() < xs[0] or x.max() > xs[-1]:
        raise ConfigError("output x outside the sample axis", "x")

    pos = (x - xs[0]) / h
    idx = np.rint(pos).astype(int)
    on_grid = np.abs(pos - idx) < 1e-6
    out = np.empty((x.size, k.size), dtype=complex)
    cphi = np.conj(phi.values)

    if np.any(on_grid):
        ii = idx[on_grid]
        jmax = int(np.max(np.minimum(ii, n - 1 - ii)))
        j = np.arange(-jmax, jmax + 1)
        a = ii[:, None] + j[None, :]
        b = ii[:, None] - j[None, :]
        valid = (a >= 0) & (a < n) & (b >= 0) & (b < n)
        f = np.where(valid, cphi[np.clip(a, 0, n - 1)] * psi.values[np.clip(b, 0, n - 1)], 0)
        # trapezoid weights vanish at the truncation ends anyway
        e = np.exp(-2j * h * np.outer(j, k))
        out[on_grid] = f @ e * (2.0 * h / (2.0 * np.pi))

    off = ~on_grid
    if np.any(off):
        span = xs[-1] - xs[0]
        y = h * np.arange(-math.floor(span / h), math.floor(span / h) + 1)
        e = np.exp(-1j * np.outer(y, k))
        for i in np.flatnonzero(off):
            xp, xm = x[i] + 0.5 * y, x[i] - 0.5 * y
            fp = np.interp(xp, xs, cphi.real, left=0, right=0) + 1j * np.interp(
                xp, xs, cphi.imag, left=0, right=0)
            fm = np.interp(xm, xs, psi.values.real, left=0, right=0) + 1j * np.interp(
                xm, xs, psi.values.imag, left=0, right=0)
            out[i] = np.trapezoid((fp * fm)[:, None] * e, y, axis=0) / (2.0 * np.pi)
    return out


def cw_field(phi, psi, x_axis, k_axis, check=True) -> PhaseSpaceField:
    return PhaseSpaceField(x_axis, k_axis, cw_quadrature(phi, psi, x_axis, k_axis, check),
                           "oracle")


def wigner_quadrature(psi: SampledWavefunction, x, k, check=True, imag_tol=1e-12):
    w = cw_quadrature(psi, psi, x, k, check)
    peak = np.abs(w).max()
    resid = np.abs(w.imag).max()
    if peak and resid > imag_tol * peak:
        raise NumericalError(f"Wigner imaginary residue {resid / peak:.2e} of peak")
    return w.real


def overlap(phi: SampledWavefunction, psi: SampledWavefunction) -> complex:
    """``<phi|psi>`` by the trapezoid rule."""
    _shared(phi, psi)
    return complex(np.trapezoid(np.conj(phi.values) * psi.values, phi.x_axis))


def fourier_transform(psi: SampledWavefunction, k_axis, check=True) -> SampledWavefunction:
    """``(1/sqrt(2 pi)) int exp(-ikx) psi(x) dx`` sampled on ``k_axis``."""
    if check:
        psi.check_decay()
    k = np.asarray(k_axis, dtype=float)
    vals = np.empty(k.size, dtype=complex)
    # chunked to bound memory for long axes
    step = max(1, 4_000_000 // psi.x_axis.size)
    for s in range(0, k.size, step):
        e = np.exp(-1j * np.outer(k[s:s + step], psi.x_axis))
        vals[s:s + step] = np.trapezoid(e * psi.values[None, :], psi.x_axis, axis=1)
    return SampledWavefunction(k, vals / math.sqrt(2.0 * math.pi))


def propagate(cfg: PhysicalConfig, psi: SampledWavefunction, x_out, dt: float,
              check=True) -> np.ndarray:
    """Free evolution of sampled ``psi`` over ``dt`` by kernel quadrature."""
    if check:
        psi.check_decay()
    x_out = np.atleast_1d(np.asarray(x_out, dtype=float))
    out = np.empty(x_out.size, dtype=complex)
    step = max(1, 4_000_000 // psi.x_axis.size)
    for s in range(0, x_out.size, step):
        g = kernel(cfg, x_out[s:s + step, None], psi.x_axis[None, :], dt)
        out[s:s + step] = np.trapezoid(g * psi.values[None, :], psi.x_axis, axis=1)
    return out


def compose_kernels(cfg: PhysicalConfig, x: float, xi: float, dt1: float, dt2: float,
                    width: float, points_per_period: int = 12) -> complex:
    """``int K(x, y, dt1) K(y, xi, dt2) dy`` for the non-decaying free kernel.

    The integrand is damped by a Gaussian window of width ``width`` about the
    stationary point. The window bias is leading-order ``1/width^2``, so the
    results at ``width`` and ``2 width`` are Richardson-combined.
    """
    a1 = cfg.mass / (2.0 * cfg.hbar * dt1)
    a2 = cfg.mass / (2.0 * cfg.hbar * dt2)
    ys = (a1 * x + a2 * xi) / (a1 + a2)

    def damped(w):
        half = 7.0 * w
        # local frequency of the chirp at the far edge sets the step
        fmax = 2.0 * (a1 * (abs(x - ys) + half) + a2 * (abs(xi - ys) + half))
        h = 2.0 * math.pi / (points_per_period * fmax)
        y = ys + h * np.arange(-math.ceil(half / h), math.ceil(half / h) + 1)
        f = kernel(cfg, x, y, dt1) * kernel(cfg, y, xi, dt2) * np.exp(-0.5 * ((y - ys) / w) ** 2)
        return complex(np.trapezoid(f, y))

    return (4.0 * damped(2.0 * width) - damped(width)) / 3.0
