"""Closed-form cross-Wigner distributions and Gouy phase differences.

Convention: ``CW_{phi,psi}(x, k) = (1/2pi) int dy exp(-iky) conj(phi(x+y/2)) psi(x-y/2)``.
The free and screen fields use ``phi`` = evolved state and ``psi`` = initial
state; the slit field uses ``phi = psi_1`` and ``psi = psi_2``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace

import numpy as np

from .errors import ConfigError, DegenerateOverlapError
from .propagation import free_evolve, screen_norm, slit_evolve
from .states import PhysicalConfig

__all__ = [
    "CwFreeParams",
    "CwScreenParams",
    "PhaseSpaceField",
    "PROVENANCES",
    "cw_free_params",
    "eval_cw_free",
    "cw_slits",
    "cw_screen_params",
    "eval_cw_screen",
    "gouy_delta_free",
    "gouy_delta_slit",
    "quasi_prob",
    "default_axes",
    "resolved_axes",
    "free_cw_field",
    "slits_cw_field",
    "screen_cw_field",
    "OVERLAP_FLOOR",
]

PROVENANCES = ("analytic", "oracle", "reconstructed")
OVERLAP_FLOOR = 1e-12


@dataclass(frozen=True)
class PhaseSpaceField:
    """Complex samples on a uniform (x, k) grid, ``values[i, j]`` at ``(x_axis[i], k_axis[j])``."""

    x_axis: np.ndarray
    k_axis: np.ndarray
    values: np.ndarray
    provenance: str = "analytic"
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        x = np.asarray(self.x_axis, dtype=float)
        k = np.asarray(self.k_axis, dtype=float)
        v = np.asarray(self.values)
        for name, ax in (("x_axis", x), ("k_axis", k)):
            if ax.ndim != 1 or ax.size < 2:
                raise ConfigError("axis needs at least two points", name)
            step = np.diff(ax)
            if np.any(step <= 0):
                raise ConfigError("axis must be strictly increasing", name)
            if np.ptp(step) > 1e-9 * abs(step[0]):
                raise ConfigError("axis must be uniform", name)
        if v.shape != (x.size, k.size):
            raise ConfigError(f"values shape {v.shape} does not match axes ({x.size}, {k.size})",
                              "values")
        if self.provenance not in PROVENANCES:
            raise ConfigError(f"unknown provenance {self.provenance!r}", "provenance")
        object.__setattr__(self, "x_axis", x)
        object.__setattr__(self, "k_axis", k)
        object.__setattr__(self, "values", v)

    @property
    def dx(self) -> float:
        return float(self.x_axis[1] - self.x_axis[0])

    @property
    def dk(self) -> float:
        return float(self.k_axis[1] - self.k_axis[0])

    def peak(self) -> float:
        return float(np.max(np.abs(self.values)))

    def normalized(self) -> "PhaseSpaceField":
        """Divide by the maximum modulus; the figure normalisation used for output."""
        meta = dict(self.meta, normalization="max-abs")
        return replace(self, values=self.values / self.peak(), meta=meta)

    def marginal_x(self):
        """Integral over k, a function of x."""
        return np.trapezoid(self.values, self.k_axis, axis=1)

    def marginal_k(self):
        """Integral over x, a function of k."""
        return np.trapezoid(self.values, self.x_axis, axis=0)

    def total(self) -> complex:
        return complex(np.trapezoid(self.marginal_x(), self.x_axis))


# -- free evolution ----------------------------------------------------------

@dataclass(frozen=True)
class CwFreeParams:
    N: float
    A: float
    a1: float
    a2: float
    a3: float
    a4: float
    a5: float
    a6: float
    a11: float
    a22: float
    xi: float
    delta_mu: float
    mu: float


def _pq(width, chirp, cfg):
    s2 = cfg.sigma0**2
    p = 0.5 / width**2 + 0.5 / s2
    qm = 0.5 * chirp - 0.5 * cfg.gamma / s2
    mm = 0.5 / width**2 - 0.5 / s2
    qp = 0.5 * chirp + 0.5 * cfg.gamma / s2
    return p, qm, mm, qp


def cw_free_params(cfg: PhysicalConfig, t: float) -> CwFreeParams:
    """Parameters of ``CW_{psi(t), psi_0}``."""
    fe = free_evolve(cfg, t)
    p, qm, mm, qp = _pq(fe.b, fe.chirp, cfg)
    a = p * p + qm * qm
    n = 1.0 / (math.pi * math.sqrt(fe.b * cfg.sigma0) * a**0.25)
    a11 = ((mm * mm - qp * qp) * p + 2.0 * mm * qp * qm) / a
    # the cross term pairs Qm (not Qp) with M^2 - Qp^2
    a22 = -(mm * mm - qp * qp) * qm / a + 2.0 * mm * p * qp / a
    xi = -0.5 * math.atan2(qm, p)
    return CwFreeParams(
        N=n, A=a,
        a1=p - a11, a2=-qm + a22,
        a3=p / a, a4=qm / a,
        a5=2.0 * (mm * qm - qp * p) / a,
        a6=2.0 * (qp * qm + mm * p) / a,
        a11=a11, a22=a22,
        xi=xi, delta_mu=xi - fe.mu, mu=fe.mu,
    )


def eval_cw_free(p: CwFreeParams, x, k, gouy: bool = True):
    """Evaluate the free cross-Wigner; ``x`` and ``k`` broadcast against each other."""
    x = np.asarray(x, dtype=float)
    k = np.asarray(k, dtype=float)
    dmu = p.delta_mu if gouy else 0.0
    env = np.exp(-p.a1 * x * x - p.a3 * k * k + p.a5 * k * x)
    return p.N * env * np.exp(1j * (p.a2 * x * x + p.a4 * k * k + p.a6 * k * x + dmu))


def gouy_delta_free(cfg: PhysicalConfig, t: float) -> float:
    if t == 0:
        return 0.0
    return cw_free_params(cfg, t).delta_mu


# -- two slit packets --------------------------------------------------------

def cw_slits(cfg: PhysicalConfig, x, k):
    """``CW_{psi_1, psi_2}`` at the screen. No Gouy phase survives."""
    se = slit_evolve(cfg, "plus")
    x = np.asarray(x, dtype=float)
    k = np.asarray(k, dtype=float)
    kk = k + se.chirp * x
    env = np.exp(-x * x / se.B**2 - kk * kk * se.B**2)
    return env * np.exp(1j * (kk * se.D - 2.0 * se.Delta * x)) / math.pi


# -- screen superposition against the initial state ---------------------------

@dataclass(frozen=True)
class CwScreenParams:
    Nprime: float
    Aprime: float
    alpha1: float
    alpha2: float
    b1: float
    b2: float
    b3: float
    b4: float
    b5: float
    b6: float
    b7: float
    b8: float
    b9: float
    b10: float
    b11: float
    b12: float
    xi_prime: float
    delta_mu_prime: float
    mu_prime: float
    theta_phase: float
    D: float
    B: float


def cw_screen_params(cfg: PhysicalConfig) -> CwScreenParams:
    """Parameters of ``CW_{Psi, psi_0}`` with ``Psi`` the normalised screen state."""
    se = slit_evolve(cfg, "plus")
    bw, ch, dd, dl = se.B, se.chirp, se.D, se.Delta
    s2, g = cfg.sigma0**2, cfg.gamma
    p, qm, mm, qp = _pq(bw, ch, cfg)
    a = p * p + qm * qm
    n = 1.0 / (math.pi * math.sqrt(bw * cfg.sigma0) * a**0.25 * screen_norm(cfg))
    quart = 0.25 / bw**4 - 0.25 / s2**2
    mix = ch / s2 + g / (s2 * bw**2)
    alpha1 = ((mm * mm - qp * qp) * p + 2.0 * mm * qp * qm) / a
    alpha2 = -(mm * mm - qp * qp) * qm / a + 2.0 * qp * quart / a
    b1 = (dd * dd / (16.0 * bw**4) - dl * dl / 4.0) * p / a + qm * dl * dd / (4.0 * bw**2 * a)
    b2 = p / a
    b3 = p - alpha1
    b4 = mix / a
    b5 = ((quart + 0.25 * ch * ch - 0.25 * g * g / s2**2) * dd / (2.0 * bw**2 * a)
          - dl * mix / (2.0 * a) - dd / (2.0 * bw**2))
    b6 = qm * dd / (2.0 * bw**2 * a) - p * dl / a
    b7 = alpha2 - 0.5 * ch + 0.5 * g / s2
    half = 2.0 * quart + 0.5 * ch * ch - 0.5 * g * g / s2**2
    b8 = half / a
    b9 = (-dd * dd / (16.0 * bw**4) + dl * dl / 4.0) * qm / a + p * dl * dd / (4.0 * bw**2 * a)
    b10 = qm / a
    b11 = dl * half / (2.0 * a) + 0.5 * mix * dd / (2.0 * bw**2 * a) - dl
    b12 = p * dd / (2.0 * bw**2 * a) + qm * dl / a
    xi = -0.5 * math.atan2(qm, p)
    return CwScreenParams(
        Nprime=n, Aprime=a, alpha1=alpha1, alpha2=alpha2,
        b1=b1, b2=b2, b3=b3, b4=b4, b5=b5, b6=b6, b7=b7, b8=b8, b9=b9,
        b10=b10, b11=b11, b12=b12,
        xi_prime=xi, delta_mu_prime=xi - se.mu_prime, mu_prime=se.mu_prime,
        theta_phase=se.theta_phase, D=dd, B=bw,
    )


def eval_cw_screen(p: CwScreenParams, x, k, gouy: bool = True):
    x = np.asarray(x, dtype=float)
    k = np.asarray(k, dtype=float)
    dmu = p.delta_mu_prime if gouy else 0.0
    phi1 = p.b7 * x * x + p.b8 * k * x + p.b9 + p.b10 * k * k - p.theta_phase + dmu
    phi2 = p.b11 * x + p.b12 * k
    # the linear term is folded into each exponent so that neither overflows
    quad = -p.D**2 / (8.0 * p.B**2) + p.b1 - p.b2 * k * k - p.b3 * x * x - p.b4 * k * x
    lin = p.b5 * x + p.b6 * k
    return p.Nprime * (np.exp(quad + lin + 1j * (phi1 + phi2))
                       + np.exp(quad - lin + 1j * (phi1 - phi2)))


def gouy_delta_slit(cfg: PhysicalConfig) -> float:
    return cw_screen_params(cfg).delta_mu_prime


# -- quasi-probability and grids -----------------------------------------------

def quasi_prob(f: PhaseSpaceField, overlap: complex) -> PhaseSpaceField:
    """Cross-Wigner divided by ``<phi|psi>``."""
    if abs(overlap) < OVERLAP_FLOOR:
        raise DegenerateOverlapError(f"|overlap| = {abs(overlap):.3e} below {OVERLAP_FLOOR:g}")
    return replace(f, values=f.values / overlap, meta=dict(f.meta, overlap=complex(overlap)))


def default_axes(cfg: PhysicalConfig, scenario: str = "free", nx: int = 201, nk: int = 201,
                 x_span=None, k_span=None):
    """Display grid: ``x`` to 4 widths and ``k`` to ``4/sigma0`` unless spans are given."""
    if scenario not in ("free", "slits", "screen"):
        raise ConfigError(f"unknown scenario {scenario!r}", "scenario")
    if x_span is None:
        widths = [cfg.sigma0]
        if scenario == "free":
            widths.append(free_evolve(cfg, cfg.t).b)
        else:
            widths.append(slit_evolve(cfg).B)
        x_span = 4.0 * max(widths)
    if k_span is None:
        k_span = 4.0 / cfg.sigma0
    return np.linspace(-x_span, x_span, nx), np.linspace(-k_span, k_span, nk)


def _forms(cfg, scenario, t=None):
    """Quadratic forms of a field as ``(real, phase, linear)``.

    ``real = (cxx, ckk, cxk)`` is the decay exponent, ``phase = (pxx, pkk, pxk,
    px, pk)`` the phase, ``linear = (lx, lk)`` the branch offsets of the
    exponent (screen field only).
    """
    if scenario == "free":
        p = cw_free_params(cfg, cfg.t if t is None else t)
        return (p.a1, p.a3, -p.a5), (p.a2, p.a4, p.a6, 0.0, 0.0), (0.0, 0.0)
    if scenario == "slits":
        se = slit_evolve(cfg)
        b2, ch = se.B**2, se.chirp
        real = (1.0 / b2 + b2 * ch * ch, b2, 2.0 * b2 * ch)
        return real, (0.0, 0.0, 0.0, ch * se.D - 2.0 * se.Delta, se.D), (0.0, 0.0)
    p = cw_screen_params(cfg)
    return ((p.b3, p.b2, p.b4), (p.b7, p.b10, p.b8, abs(p.b11), abs(p.b12)),
            (abs(p.b5), abs(p.b6)))


def resolved_axes(cfg: PhysicalConfig, scenario: str = "free", points_per_period: int = 3,
                  min_points: int = 201, level: float = 18.0, t: float | None = None):
    """Grid that resolves a closed-form field well enough for integration.

    Spans cover the region where the envelope exceeds ``exp(-level)``; steps
    give ``points_per_period`` samples per shortest local oscillation there
    and at least two per conditional envelope width. ``t`` overrides
    ``cfg.t`` for the free scenario.
    """
    if scenario not in ("free", "slits", "screen"):
        raise ConfigError(f"unknown scenario {scenario!r}", "scenario")
    (cxx, ckk, cxk), (pxx, pkk, pxk, px, pk), (lx, lk) = _forms(cfg, scenario, t)
    m = np.array([[2.0 * cxx, cxk], [cxk, 2.0 * ckk]])
    cov = np.linalg.inv(m)
    centre = np.abs(cov @ np.array([lx, lk]))
    r2 = 2.0 * level
    x_span = centre[0] + math.sqrt(r2 * cov[0, 0])
    k_span = centre[1] + math.sqrt(r2 * cov[1, 1])

    def peak_rate(g, const):
        g = np.asarray(g)
        return abs(const) + abs(g @ centre) + math.sqrt(r2 * g @ cov @ g)

    fx = peak_rate([2.0 * pxx, pxk], px)
    fk = peak_rate([pxk, 2.0 * pkk], pk)
    dx = 0.5 / math.sqrt(cxx)
    dk = 0.5 / math.sqrt(ckk)
    if fx > 0:
        dx = min(dx, 2.0 * math.pi / (points_per_period * fx))
    if fk > 0:
        dk = min(dk, 2.0 * math.pi / (points_per_period * fk))
    nx = max(min_points, 2 * math.ceil(x_span / dx) + 1)
    nk = max(min_points, 2 * math.ceil(k_span / dk) + 1)
    return np.linspace(-x_span, x_span, nx), np.linspace(-k_span, k_span, nk)


def _grid(x_axis, k_axis):
    return np.asarray(x_axis, float)[:, None], np.asarray(k_axis, float)[None, :]


def free_cw_field(cfg, t, x_axis, k_axis, gouy=True) -> PhaseSpaceField:
    p = cw_free_params(cfg, t)
    x, k = _grid(x_axis, k_axis)
    return PhaseSpaceField(x_axis, k_axis, eval_cw_free(p, x, k, gouy), "analytic",
                           {"scenario": "free", "t": t, "gouy": gouy, "delta_mu": p.delta_mu})


def slits_cw_field(cfg, x_axis, k_axis) -> PhaseSpaceField:
    x, k = _grid(x_axis, k_axis)
    return PhaseSpaceField(x_axis, k_axis, cw_slits(cfg, x, k), "analytic",
                           {"scenario": "slits", "t": cfg.t, "tau": cfg.tau})


def screen_cw_field(cfg, x_axis, k_axis, gouy=True) -> PhaseSpaceField:
    p = cw_screen_params(cfg)
    x, k = _grid(x_axis, k_axis)
    return PhaseSpaceField(x_axis, k_axis, eval_cw_screen(p, x, k, gouy), "analytic",
                           {"scenario": "screen", "t": cfg.t, "tau": cfg.tau, "gouy": gouy,
                            "delta_mu_prime": p.delta_mu_prime})
