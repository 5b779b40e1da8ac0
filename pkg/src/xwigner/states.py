"""Correlated Gaussian initial states and their second moments."""

from __future__ import annotations

import math
from dataclasses import dataclass, fields, replace

import numpy as np
from scipy import constants

from .errors import ConfigError

__all__ = [
    "PhysicalConfig",
    "GaussianState",
    "CovarianceReport",
    "NEUTRON",
    "make_initial_state",
    "eval_state",
    "gaussian_overlap",
    "covariance",
    "quadrature_variances",
    "gamma_from_correlation",
]


@dataclass(frozen=True)
class PhysicalConfig:
    """Physical parameters of a run, all in SI units.

    Parameters
    ----------
    mass : float
        Particle mass [kg].
    hbar : float
        Reduced Planck constant [J s].
    sigma0 : float
        Transverse width of the initial packet [m].
    gamma : float
        Position-momentum correlation parameter. Negative values give a
        contractive (initially focusing) packet.
    beta : float
        Width of the Gaussian slit transmission [m].
    d : float
        Slit separation [m].
    t : float
        Source-to-slit flight time [s].
    tau : float
        Slit-to-screen flight time [s].
    """

    mass: float = 1.67e-27
    hbar: float = constants.hbar
    sigma0: float = 7.8e-6
    gamma: float = 0.0
    beta: float = 7.8e-6
    d: float = 100e-6
    t: float = 50e-3
    tau: float = 50e-3

    def __post_init__(self):
        for f in fields(self):
            value = getattr(self, f.name)
            if not isinstance(value, (int, float, np.floating, np.integer)):
                raise ConfigError(f"expected a real number, got {value!r}", f.name)
            if not math.isfinite(value):
                raise ConfigError("must be finite", f.name)
        for name in ("mass", "hbar", "sigma0", "beta"):
            if getattr(self, name) <= 0:
                raise ConfigError("must be > 0", name)
        for name in ("d", "t", "tau"):
            if getattr(self, name) < 0:
                raise ConfigError("must be >= 0", name)

    def with_(self, **changes) -> "PhysicalConfig":
        return replace(self, **changes)

    @classmethod
    def from_lab_units(cls, *, mass=1.67e-27, sigma0_um=7.8, gamma=0.0,
                       beta_um=7.8, d_um=100.0, t_ms=50.0, tau_ms=50.0,
                       hbar=constants.hbar) -> "PhysicalConfig":
        """Build a config from micrometre / millisecond quantities."""
        return cls(mass=mass, hbar=hbar, sigma0=sigma0_um * 1e-6, gamma=gamma,
                   beta=beta_um * 1e-6, d=d_um * 1e-6, t=t_ms * 1e-3,
                   tau=tau_ms * 1e-3)


NEUTRON = PhysicalConfig()


@dataclass(frozen=True)
class GaussianState:
    """Closed-form Gaussian wave packet.

    ``norm * exp(-(x-c)^2/(2 w^2) + i chirp (x-c)^2/2 + i tilt x + i phase)``
    with ``c = center``, ``w = width`` and ``phase = global_phase``.
    """

    norm: complex
    center: float
    width: float
    chirp: float
    tilt: float
    global_phase: float

    def __post_init__(self):
        if not self.width > 0:
            raise ConfigError("must be > 0", "width")

    def __call__(self, x):
        return eval_state(self, x)

    def _quadratic(self):
        # state = exp(-a x^2 + b x + c)
        a = 1.0 / (2.0 * self.width**2) - 0.5j * self.chirp
        b = 2.0 * a * self.center + 1j * self.tilt
        c = -a * self.center**2 + 1j * self.global_phase + np.log(complex(self.norm))
        return a, b, c


def make_initial_state(cfg: PhysicalConfig) -> GaussianState:
    """Correlated Gaussian at the source, normalised to one."""
    return GaussianState(
        norm=(cfg.sigma0 * math.sqrt(math.pi)) ** -0.5,
        center=0.0,
        width=cfg.sigma0,
        chirp=cfg.gamma / cfg.sigma0**2,
        tilt=0.0,
        global_phase=0.0,
    )


def eval_state(s: GaussianState, x):
    x = np.asarray(x, dtype=float)
    u = x - s.center
    expo = (-u**2 / (2.0 * s.width**2) + 0.5j * s.chirp * u**2
            + 1j * s.tilt * x + 1j * s.global_phase)
    return s.norm * np.exp(expo)


def gaussian_overlap(phi: GaussianState, psi: GaussianState) -> complex:
    """Exact ``<phi|psi> = integral of conj(phi) psi dx``."""
    a1, b1, c1 = phi._quadratic()
    a2, b2, c2 = psi._quadratic()
    a = np.conj(a1) + a2
    b = np.conj(b1) + b2
    c = np.conj(c1) + c2
    return complex(np.sqrt(np.pi / a) * np.exp(b * b / (4.0 * a) + c))


@dataclass(frozen=True)
class CovarianceReport:
    sigma_xx: float
    sigma_pp: float
    sigma_xp: float
    corr_r: float


def covariance(cfg: PhysicalConfig) -> CovarianceReport:
    """Position/momentum spreads and covariance of the initial state.

    ``sigma_xx`` and ``sigma_pp`` are standard deviations, ``sigma_xp`` is the
    symmetrised covariance, so ``sigma_xx**2 * sigma_pp**2 - sigma_xp**2``
    equals ``hbar**2 / 4`` for every gamma.
    """
    g = cfg.gamma
    sxx = cfg.sigma0 / math.sqrt(2.0)
    spp = math.sqrt(1.0 + g * g) * cfg.hbar / (math.sqrt(2.0) * cfg.sigma0)
    sxp = cfg.hbar * g / 2.0
    return CovarianceReport(sxx, spp, sxp, sxp / (sxx * spp))


def quadrature_variances(cfg: PhysicalConfig, theta_rot):
    """Variances of the rotated dimensionless quadratures X1 and X2."""
    g = cfg.gamma
    th = np.asarray(theta_rot, dtype=float)
    s2 = np.sin(2.0 * th)
    var1 = 0.5 * (1.0 + g * s2 + g * g * np.sin(th) ** 2)
    var2 = 0.5 * (1.0 - g * s2 + g * g * np.cos(th) ** 2)
    return var1, var2


def gamma_from_correlation(r):
    """Invert ``corr_r = gamma / sqrt(1 + gamma^2)``.

    r = +-1 maps to +-inf.
    """
    r = np.asarray(r, dtype=float)
    if np.any(np.abs(r) > 1):
        raise ConfigError("correlation coefficient must lie in [-1, 1]", "r")
    with np.errstate(divide="ignore"):
        out = r / np.sqrt(1.0 - r * r)
    return out if out.ndim else float(out)
