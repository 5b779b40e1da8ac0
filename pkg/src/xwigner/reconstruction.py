"""Intensity sinograms and phase-space tomography by filtered backprojection.

With the cross-Wigner sign convention used throughout, ``k`` is minus the
wavenumber, so free flight shears phase space as ``x -> x - (hbar tau / m) k``.
In the scaled coordinates ``X = x / s``, ``K = k s`` the shear is a projection
onto ``X cos(theta) - K sin(theta)`` with ``theta = arctan(hbar tau / (m s^2))``
and the position axis magnified by ``1 / cos(theta)``, so each screen row is
one Radon projection of the slit-plane Wigner function.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .crosswigner import PhaseSpaceField
from .errors import ConfigError, ConsistencyError, CoverageError
from .propagation import eval_free, eval_slit, screen_norm, slit_evolve, slit_plane_state
from .states import PhysicalConfig

__all__ = [
    "Sinogram",
    "AngleMap",
    "natural_scale",
    "theta_window",
    "angle_map",
    "projection_axes",
    "intensity_sinogram",
    "interference_term",
    "ramp_filter",
    "inverse_radon",
    "reconstruct_wigner",
    "reconstruct_cw",
    "free_sinogram",
    "MIN_SPAN",
]

# Smallest angular coverage, after mirror completion, accepted for inversion.
MIN_SPAN = 2.0 * math.pi / 3.0


@dataclass(frozen=True)
class Sinogram:
    """Stack of screen profiles, one row per slit-to-screen time.

    ``x_axis`` is either shared (1-D) or given per row (shape ``(ntau, nx)``),
    each row uniform.
    """

    x_axis: np.ndarray
    tau_axis: np.ndarray
    values: np.ndarray
    kind: str = "intensity"
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        tau = np.asarray(self.tau_axis, dtype=float)
        v = np.asarray(self.values, dtype=float)
        x = np.asarray(self.x_axis, dtype=float)
        if self.kind not in ("intensity", "interference"):
            raise ConfigError(f"unknown sinogram kind {self.kind!r}", "kind")
        if v.shape[0] != tau.size:
            raise ConfigError("one row per tau required", "values")
        if x.ndim == 1:
            if v.shape != (tau.size, x.size):
                raise ConfigError("values do not match axes", "values")
        elif x.shape != v.shape:
            raise ConfigError("per-row x axes must match values", "x_axis")
        if self.kind == "intensity" and v.size and v.min() < -1e-12:
            raise ConfigError("intensity must be non-negative", "values")
        object.__setattr__(self, "x_axis", x)
        object.__setattr__(self, "tau_axis", tau)
        object.__setattr__(self, "values", v)

    def row_axis(self, i: int) -> np.ndarray:
        return self.x_axis if self.x_axis.ndim == 1 else self.x_axis[i]

    def __add__(self, other: "Sinogram") -> "Sinogram":
        if not (np.array_equal(self.x_axis, other.x_axis)
                and np.array_equal(self.tau_axis, other.tau_axis)):
            raise ConfigError("sinograms must share axes", "x_axis")
        kind = "intensity" if self.kind == other.kind == "intensity" else "interference"
        return Sinogram(self.x_axis, self.tau_axis, self.values + other.values, kind,
                        dict(self.meta))


@dataclass(frozen=True)
class AngleMap:
    scale_x: float
    scale_k: float
    tau: np.ndarray
    theta: np.ndarray
    magnification: np.ndarray

    @property
    def span_deg(self) -> float:
        return float(np.degrees(self.theta[-1] - self.theta[0]))


def _velocity(cfg):
    return cfg.hbar / cfg.mass


def natural_scale(cfg: PhysicalConfig) -> float:
    """Position scale that makes one slit packet's spreads in X and K equal.

    Uses ``(<x^2> / <k^2>)^(1/4)`` of a single packet at the slit plane.
    """
    s = slit_plane_state(cfg, "plus")
    x2 = s.center**2 + 0.5 * s.width**2
    k2 = s.chirp**2 * x2 + 0.5 / s.width**2
    return (x2 / k2) ** 0.25


def theta_window(cfg: PhysicalConfig, n: int, theta_max: float = math.pi / 2,
                 scale_x: float | None = None, theta_min: float = 0.0) -> np.ndarray:
    """Slit-to-screen times sampling ``theta`` uniformly on ``[theta_min, theta_max)``."""
    if n < 2:
        raise ConfigError("need at least two projections", "n")
    if not 0 <= theta_min < theta_max <= math.pi / 2:
        raise ConfigError("angles must satisfy 0 <= min < max <= pi/2", "theta_max")
    sx = natural_scale(cfg) if scale_x is None else scale_x
    th = theta_min + (theta_max - theta_min) * np.arange(n) / n
    return sx**2 * np.tan(th) / _velocity(cfg)


def angle_map(cfg: PhysicalConfig, tau_list, scale_x: float | None = None) -> AngleMap:
    tau = np.asarray(tau_list, dtype=float)
    if tau.ndim != 1 or tau.size < 2:
        raise ConfigError("need at least two times", "tau_list")
    if np.any(tau < 0) or np.any(np.diff(tau) <= 0):
        raise ConfigError("times must be non-negative and strictly increasing", "tau_list")
    sx = natural_scale(cfg) if scale_x is None else float(scale_x)
    if not sx > 0:
        raise ConfigError("must be > 0", "scale_x")
    theta = np.arctan(_velocity(cfg) * tau / sx**2)
    if np.any(np.diff(theta) <= 0):
        raise CoverageError("angle map is degenerate: times too close for this scale")
    return AngleMap(sx, 1.0 / sx, tau, theta, 1.0 / np.cos(theta))


def projection_axes(amap: AngleMap, rho) -> np.ndarray:
    """Per-row screen positions at which row ``i`` samples the dimensionless ``rho`` axis."""
    return np.outer(amap.magnification, np.asarray(rho, dtype=float) * amap.scale_x)


def _amplitudes(cfg, x, tau):
    if tau == 0:
        return slit_plane_state(cfg, "plus")(x), slit_plane_state(cfg, "minus")(x)
    c = cfg.with_(tau=float(tau))
    return eval_slit(c, "plus", x), eval_slit(c, "minus", x)


def _rows(x_axis, tau):
    x = np.asarray(x_axis, dtype=float)
    if x.ndim == 1:
        return [x] * tau.size
    if x.shape[0] != tau.size:
        raise ConfigError("one x row per tau required", "x_axis")
    return list(x)


def intensity_sinogram(cfg: PhysicalConfig, x_axis, tau_list) -> Sinogram:
    """Rows ``|Psi(x; tau)|^2`` of the normalised screen state; ``tau = 0`` is the slit plane."""
    tau = np.asarray(tau_list, dtype=float)
    if np.any(tau < 0) or np.any(np.diff(tau) <= 0):
        raise ConfigError("times must be non-negative and strictly increasing", "tau_list")
    nrm2 = screen_norm(cfg) ** 2
    vals = []
    for tt, x in zip(tau, _rows(x_axis, tau)):
        p1, p2 = _amplitudes(cfg, x, tt)
        vals.append(np.abs(p1 + p2) ** 2 / nrm2)
    return Sinogram(x_axis, tau, np.array(vals), "intensity", {"normalization": nrm2})


def interference_term(cfg: PhysicalConfig, x_axis, tau_list, tol: float = 1e-8) -> Sinogram:
    """``|psi_1 + psi_2|^2 - |psi_1|^2 - |psi_2|^2`` for the unnormalised sum.

    Cross-checked row by row against ``2 sqrt(I_1 I_2) cos(2 Delta x)``.
    """
    tau = np.asarray(tau_list, dtype=float)
    if np.any(tau < 0) or np.any(np.diff(tau) <= 0):
        raise ConfigError("times must be non-negative and strictly increasing", "tau_list")
    vals = []
    for tt, x in zip(tau, _rows(x_axis, tau)):
        p1, p2 = _amplitudes(cfg, x, tt)
        i1, i2 = np.abs(p1) ** 2, np.abs(p2) ** 2
        sub = np.abs(p1 + p2) ** 2 - i1 - i2
        delta = 0.0 if tt == 0 else slit_evolve(cfg.with_(tau=float(tt))).Delta
        closed = 2.0 * np.sqrt(i1 * i2) * np.cos(2.0 * delta * x)
        scale = max(float(np.max(i1 + i2)), 1e-300)
        err = float(np.max(np.abs(sub - closed))) / scale
        if err > tol:
            raise ConsistencyError(f"interference term mismatch {err:.2e} at tau={tt:g} s")
        vals.append(sub)
    return Sinogram(x_axis, tau, np.array(vals), "interference",
                    {"normalization": screen_norm(cfg) ** 2})


def ramp_filter(proj, drho: float, pad: int = 4):
    """Apply ``|r|`` with a raised-cosine roll-off to each row of ``proj``."""
    proj = np.atleast_2d(proj)
    n = proj.shape[-1]
    npad = pad * n
    r = 2.0 * np.pi * np.fft.fftfreq(npad, drho)
    win = 0.5 * (1.0 + np.cos(np.pi * r / np.abs(r).max()))
    spec = np.fft.fft(proj, npad, axis=-1) * (np.abs(r) * win)
    return np.real(np.fft.ifft(spec, axis=-1))[..., :n] / (2.0 * np.pi)


def _complete(theta, proj, mirror):
    th = list(theta)
    pr = list(proj)
    if mirror:
        for a, p in zip(theta, proj):
            if 0 < a < math.pi / 2 + 1e-12 and not np.isclose(math.pi - a, th).any():
                th.append(math.pi - a)
                pr.append(p[::-1])
    th = np.asarray(th)
    order = np.argsort(th)
    return th[order], np.asarray(pr)[order]


def _span(theta):
    ext = np.concatenate([theta, [theta[0] + math.pi]])
    return math.pi - float(np.max(np.diff(ext)))


def inverse_radon(sino: Sinogram, amap: AngleMap, x_axis, k_axis, rho=None,
                  mirror: bool = True, plane_tau: float = 0.0, v: float | None = None,
                  min_span: float = MIN_SPAN, scale: float = 1.0) -> PhaseSpaceField:
    """Filtered backprojection of a screen sinogram to the slit-plane phase space.

    Parameters
    ----------
    sino, amap : Sinogram, AngleMap
        Rows and their angles. Row ``i`` is resampled onto ``rho * s / cos(theta_i)``.
    x_axis, k_axis : array_like
        Output grid in SI units.
    rho : array_like, optional
        Dimensionless projection axis; defaults to the extent of the longest row.
    mirror : bool
        Add the projection at ``pi - theta`` as the reversed row. Exact only for
        fields even in ``k``.
    plane_tau : float
        Report the field after a further free flight ``plane_tau``, i.e. at
        ``W(x + v plane_tau k, k)``; needs ``v = hbar / m``.
    scale : float
        Factor applied to the result.
    """
    if not np.array_equal(np.asarray(sino.tau_axis), amap.tau):
        raise ConfigError("sinogram and angle map disagree on tau", "tau_list")
    sx = amap.scale_x
    if rho is None:
        ext = min(float(np.max(np.abs(sino.row_axis(i)))) / (sx * amap.magnification[i])
                  for i in range(amap.tau.size))
        rho = np.linspace(-ext, ext, 2001)
    rho = np.asarray(rho, dtype=float)
    proj = np.empty((amap.tau.size, rho.size))
    for i in range(amap.tau.size):
        xr = rho * sx * amap.magnification[i]
        proj[i] = np.interp(xr, sino.row_axis(i), sino.values[i], left=0.0, right=0.0)
        proj[i] *= sx * amap.magnification[i]
    theta, proj = _complete(amap.theta, proj, mirror)
    span = _span(theta)
    if span < min_span:
        raise CoverageError(f"angular coverage {math.degrees(span):.1f} deg below "
                            f"{math.degrees(min_span):.1f} deg")
    ext = np.concatenate([[theta[-1] - math.pi], theta, [theta[0] + math.pi]])
    weights = 0.5 * (ext[2:] - ext[:-2])
    q = ramp_filter(proj, rho[1] - rho[0])

    x = np.asarray(x_axis, dtype=float)[:, None]
    k = np.asarray(k_axis, dtype=float)[None, :]
    if plane_tau:
        if v is None:
            raise ConfigError("v = hbar/m needed to shift the plane", "v")
        x = x + v * plane_tau * k
    xx = np.broadcast_to(x / sx, (x.shape[0], k.shape[1]))
    kk = np.broadcast_to(k * sx, xx.shape)
    out = np.zeros(xx.shape)
    for a, w, qi in zip(theta, weights, q):
        out += w * np.interp(xx * math.cos(a) - kk * math.sin(a), rho, qi, left=0.0, right=0.0)
    meta = {"scale_x": sx, "theta_span_deg": math.degrees(span), "n_proj": int(amap.tau.size),
            "mirror": mirror, "plane_tau": plane_tau}
    return PhaseSpaceField(np.asarray(x_axis, float), np.asarray(k_axis, float),
                           scale * out, "reconstructed", meta)


def _pipeline(cfg, tau_list, x_axis, k_axis, which, scale_x, plane_tau, rho, min_span):
    amap = angle_map(cfg, tau_list, scale_x)
    if rho is None:
        rho = np.linspace(-40.0, 40.0, 4001)
    rows = projection_axes(amap, rho)
    if which == "wigner":
        sino = intensity_sinogram(cfg, rows, amap.tau)
        factor = 1.0
    else:
        sino = interference_term(cfg, rows, amap.tau)
        # I_int is 2 Re(conj(psi_1) psi_2) for unit-norm packets
        factor = 0.5
    field_ = inverse_radon(sino, amap, x_axis, k_axis, rho=rho, plane_tau=plane_tau,
                           v=cfg.hbar / cfg.mass, min_span=min_span, scale=factor)
    return field_, sino, amap


def reconstruct_wigner(cfg: PhysicalConfig, tau_list, x_axis, k_axis, scale_x=None,
                       plane_tau: float = 0.0, rho=None, min_span: float = MIN_SPAN):
    """Wigner function of the two-slit state from its intensity sinogram.

    Returns ``(field, sinogram, angle_map)``. The field refers to the slit plane
    shifted by ``plane_tau``.
    """
    return _pipeline(cfg, tau_list, x_axis, k_axis, "wigner", scale_x, plane_tau, rho,
                     min_span)


def reconstruct_cw(cfg: PhysicalConfig, tau_list, x_axis, k_axis, scale_x=None,
                   plane_tau: float = 0.0, rho=None, min_span: float = MIN_SPAN):
    """Real part of ``CW_{psi_1, psi_2}`` from the interference sinogram."""
    return _pipeline(cfg, tau_list, x_axis, k_axis, "cw", scale_x, plane_tau, rho, min_span)


def free_sinogram(cfg: PhysicalConfig, x_axis, tau_list) -> Sinogram:
    """Rows ``|psi(x, tau)|^2`` for the initial packet in free flight (no slits)."""
    tau = np.asarray(tau_list, dtype=float)
    vals = [np.abs(eval_free(cfg, float(tt), x)) ** 2 for tt, x in zip(tau, _rows(x_axis, tau))]
    return Sinogram(x_axis, tau, np.array(vals), "intensity", {"source": "free"})
