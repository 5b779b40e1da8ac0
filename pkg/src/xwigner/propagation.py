"""Free flight and Gaussian double-slit evolution of the correlated packet."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ConfigError, FocusSingularityError
from .states import GaussianState, PhysicalConfig

__all__ = [
    "FreeEvolution",
    "SlitEvolution",
    "WIDTH_FLOOR",
    "aging_time",
    "free_evolve",
    "free_state",
    "eval_free",
    "kernel",
    "slit_transmission",
    "slit_evolve",
    "slit_state",
    "eval_slit",
    "screen_norm",
    "screen_state",
    "slit_plane_state",
]

# Widths below this are treated as a focus singularity.
WIDTH_FLOOR = 1e-12

_SIGNS = {"plus": 1.0, "minus": -1.0}


def _sign(which):
    try:
        return _SIGNS[which]
    except KeyError:
        raise ConfigError(f"expected 'plus' or 'minus', got {which!r}", "which") from None


@dataclass(frozen=True)
class FreeEvolution:
    """Envelope parameters of the freely evolved packet.

    ``chirp`` is ``m / (hbar r)``, so the wavefront radius ``r`` (a time) is
    infinite exactly when ``chirp == 0``.
    """

    b: float
    chirp: float
    mu: float
    tau0: float
    mass: float
    hbar: float

    @property
    def r(self) -> float:
        if self.chirp == 0:
            return math.inf
        return self.mass / (self.hbar * self.chirp)


@dataclass(frozen=True)
class SlitEvolution:
    """Parameters of the packet transmitted by one slit and observed at the screen.

    ``B`` width, ``R`` wavefront radius (a time), ``D`` separation of the two
    packets, ``Delta`` linear phase slope, ``theta_phase`` and ``mu_prime``
    constant phases, ``C`` the auxiliary time-squared term entering ``R``.
    ``Delta`` and ``D`` carry the sign of the slit.
    """

    B: float
    R: float
    D: float
    Delta: float
    theta_phase: float
    mu_prime: float
    C: float
    chirp: float


def aging_time(cfg: PhysicalConfig) -> float:
    """Time scale ``m sigma0^2 / hbar`` on which the packet departs from its initial form."""
    return cfg.mass * cfg.sigma0**2 / cfg.hbar


def _q(cfg, t, tau0):
    g = cfg.gamma
    return t * t + tau0 * tau0 + 2.0 * t * tau0 * g + t * t * g * g


def free_evolve(cfg: PhysicalConfig, t: float) -> FreeEvolution:
    if t < 0:
        raise ConfigError("evolution time must be >= 0", "t")
    g = cfg.gamma
    tau0 = aging_time(cfg)
    q = _q(cfg, t, tau0)
    b = cfg.sigma0 / tau0 * math.sqrt(q)
    if b < WIDTH_FLOOR:
        raise FocusSingularityError(f"packet width {b:.3e} m below floor at t={t:g} s")
    chirp = cfg.mass / cfg.hbar * (t * (1.0 + g * g) + g * tau0) / q
    mu = -0.5 * math.atan2(t, tau0 + g * t)
    return FreeEvolution(b=b, chirp=chirp, mu=mu, tau0=tau0, mass=cfg.mass, hbar=cfg.hbar)


def free_state(cfg: PhysicalConfig, t: float) -> GaussianState:
    fe = free_evolve(cfg, t)
    return GaussianState(
        norm=(fe.b * math.sqrt(math.pi)) ** -0.5,
        center=0.0,
        width=fe.b,
        chirp=fe.chirp,
        tilt=0.0,
        global_phase=fe.mu,
    )


def eval_free(cfg: PhysicalConfig, t: float, x):
    return free_state(cfg, t)(x)


def kernel(cfg: PhysicalConfig, x, xi, dt: float):
    """Free-particle propagator from ``xi`` to ``x`` over a time ``dt``."""
    if not dt > 0:
        raise ConfigError("propagation time must be > 0", "dt")
    a = cfg.mass / (2.0 * cfg.hbar * dt)
    x = np.asarray(x, dtype=float)
    xi = np.asarray(xi, dtype=float)
    pref = np.sqrt(a / math.pi) * np.exp(-0.25j * math.pi)
    return pref * np.exp(1j * a * (x - xi) ** 2)


def slit_transmission(cfg: PhysicalConfig, which: str, x):
    """Gaussian aperture amplitude of slit ``which``, centred at -d/2 for 'plus'."""
    s = _sign(which)
    x = np.asarray(x, dtype=float)
    return (cfg.beta * math.sqrt(math.pi)) ** -0.5 * np.exp(
        -((x + s * cfg.d / 2.0) ** 2) / (2.0 * cfg.beta**2))


def slit_evolve(cfg: PhysicalConfig, which: str = "plus") -> SlitEvolution:
    s = _sign(which)
    if not cfg.t > 0:
        raise ConfigError("source-to-slit time must be > 0", "t")
    if not cfg.tau > 0:
        raise ConfigError("slit-to-screen time must be > 0", "tau")
    m, hb, s0, be, g = cfg.mass, cfg.hbar, cfg.sigma0, cfg.beta, cfg.gamma
    t, tau = cfg.t, cfg.tau
    d = s * cfg.d
    fe = free_evolve(cfg, t)
    tau0, b = fe.tau0, fe.b
    q = _q(cfg, t, tau0)
    rinv = fe.chirp * hb / m

    inv_w2 = 1.0 / be**2 + 1.0 / b**2
    curv = m / hb * (1.0 / tau + rinv)
    lk = inv_w2**2 + curv**2
    big_b2 = lk / ((m / (hb * tau)) ** 2 * inv_w2)
    big_b = math.sqrt(big_b2)
    if big_b < WIDTH_FLOOR:
        raise FocusSingularityError(f"slit packet width {big_b:.3e} m below floor")
    c_aux = (tau0**2 + t * tau0**2 / tau + tau0**2 * g * g + tau0**3 * g / tau
             + t * tau0**2 * g * g / tau + 2.0 * tau0**2 * s0**2 / be**2)
    r_den = 1.0 / be**4 + c_aux / (s0**4 * q)
    chirp = m / hb * r_den / (tau * lk)
    big_r = math.inf if r_den == 0 else tau * lk / r_den
    delta = tau * s0**2 * d / (2.0 * tau0 * be**2 * big_b2)
    theta = m * d * d * (1.0 / tau + rinv) / (8.0 * hb * be**4 * lk)
    big_d = d * (1.0 + tau * rinv) / (1.0 + be**2 / b**2)
    # Sum of the two single-step Gouy phases keeps the branch continuous
    # once the accumulated angle passes pi/2.
    mu_p = fe.mu - 0.5 * math.atan2(inv_w2, curv)
    return SlitEvolution(B=big_b, R=big_r, D=big_d, Delta=delta, theta_phase=theta,
                         mu_prime=mu_p, C=c_aux, chirp=chirp)


def slit_state(cfg: PhysicalConfig, which: str = "plus") -> GaussianState:
    se = slit_evolve(cfg, which)
    c = -se.D / 2.0
    # chirp is referenced to x = 0; re-reference it to the packet centre
    return GaussianState(
        norm=(se.B * math.sqrt(math.pi)) ** -0.5,
        center=c,
        width=se.B,
        chirp=se.chirp,
        tilt=se.Delta + se.chirp * c,
        global_phase=se.theta_phase + se.mu_prime - 0.5 * se.chirp * c * c,
    )


def eval_slit(cfg: PhysicalConfig, which: str, x):
    return slit_state(cfg, which)(x)


def screen_norm(cfg: PhysicalConfig) -> float:
    """Norm of ``psi_1 + psi_2``, i.e. ``sqrt(2 + 2 <psi_2|psi_1>)``."""
    se = slit_evolve(cfg, "plus")
    return math.sqrt(2.0 + 2.0 * math.exp(-se.D**2 / (4.0 * se.B**2) - se.Delta**2 * se.B**2))


def screen_state(cfg: PhysicalConfig, x):
    """Normalised superposition of both slit packets at the screen."""
    return (eval_slit(cfg, "plus", x) + eval_slit(cfg, "minus", x)) / screen_norm(cfg)


def slit_plane_state(cfg: PhysicalConfig, which: str = "plus") -> GaussianState:
    """Normalised packet just behind slit ``which`` (zero slit-to-screen time)."""
    s = _sign(which)
    fe = free_evolve(cfg, cfg.t)
    lam = 1.0 / fe.b**2 + 1.0 / cfg.beta**2
    w = 1.0 / math.sqrt(lam)
    c = -s * cfg.d / (2.0 * cfg.beta**2 * lam)
    return GaussianState(
        norm=(w * math.sqrt(math.pi)) ** -0.5,
        center=c,
        width=w,
        chirp=fe.chirp,
        tilt=fe.chirp * c,
        global_phase=fe.mu - 0.5 * fe.chirp * c * c,
    )
