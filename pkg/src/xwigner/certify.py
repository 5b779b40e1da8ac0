"""Oracle-versus-closed-form certification suite.

Each check compares one closed form or identity with the quadrature oracle and
reports the largest error next to its tolerance.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, replace

import numpy as np

from . import crosswigner as cw
from . import oracle as orc
from .propagation import (eval_free, eval_slit, free_evolve, free_state, kernel, screen_state,
                          slit_evolve, slit_state, slit_transmission)
from .states import PhysicalConfig, gaussian_overlap, make_initial_state

__all__ = ["CheckResult", "FAULTS", "run_checks", "format_report"]

FAULTS = ("a5-sign",)

# Oracle sample spacing [m].
SAMPLE_STEP = 0.5e-6


@dataclass(frozen=True)
class CheckResult:
    name: str
    error: float
    tol: float
    passed: bool

    @property
    def verdict(self) -> str:
        return "PASS" if self.passed else "FAIL"


def _rel(a, b):
    return float(np.max(np.abs(a - b)) / np.max(np.abs(b)))


def _result(name, err, tol):
    return CheckResult(name, err, tol, bool(err < tol))


def _free_params(cfg, t, faults):
    p = cw.cw_free_params(cfg, t)
    if "a5-sign" in faults:
        p = replace(p, a5=-p.a5)
    return p


def _states(cfg, scenario, t=None):
    """``(phi, psi, typical width)`` for one scenario."""
    if scenario == "free":
        t = cfg.t if t is None else t
        return free_state(cfg, t), make_initial_state(cfg), free_evolve(cfg, t).b
    big_b = slit_evolve(cfg).B
    if scenario == "slits":
        return slit_state(cfg, "plus"), slit_state(cfg, "minus"), big_b
    return (lambda x: screen_state(cfg, x)), make_initial_state(cfg), big_b


def _analytic(cfg, scenario, x, k, faults, t=None, gouy=True):
    xx, kk = np.asarray(x)[:, None], np.asarray(k)[None, :]
    if scenario == "free":
        return cw.eval_cw_free(_free_params(cfg, cfg.t if t is None else t, faults), xx, kk, gouy)
    if scenario == "slits":
        return cw.cw_slits(cfg, xx, kk)
    return cw.eval_cw_screen(cw.cw_screen_params(cfg), xx, kk, gouy)


def _sampled(cfg, scenario, x_out, t=None):
    phi, psi, width = _states(cfg, scenario, t)
    extent = 12.0 * max(width, cfg.sigma0) + cfg.d
    xs = orc.aligned_axis(x_out, max(extent, float(np.max(np.abs(x_out)))), SAMPLE_STEP)
    return orc.sample(phi, xs), orc.sample(psi, xs)


def check_closed_form(cfg, scenario, faults=(), t=None, tol=None):
    """Closed-form field against oracle quadrature on the display grid."""
    tol = tol or (1e-5 if scenario == "screen" else 1e-6)
    c = cfg if t is None else cfg.with_(t=t)
    xa, ka = cw.default_axes(c, scenario)
    phi, psi = _sampled(c, scenario, xa)
    num = orc.cw_quadrature(phi, psi, xa, ka)
    err = _rel(_analytic(c, scenario, xa, ka, faults), num)
    tag = f"{scenario}_cw[g={cfg.gamma:g}" + (f",t={c.t * 1e3:g}ms]" if scenario == "free" else "]")
    return _result(tag, err, tol)


def check_marginals(cfg, scenario, faults=(), tol=1e-4):
    """Both marginals of the closed form against products of states and transforms."""
    xa, ka = cw.resolved_axes(cfg, scenario)
    f = _analytic(cfg, scenario, xa, ka, faults)
    phi, psi, _ = _states(cfg, scenario)
    ref_x = np.conj(phi(xa)) * psi(xa)
    mx = np.trapezoid(f, ka, axis=1)
    sp, sq = _sampled(cfg, scenario, xa)
    # with this sign convention the x-marginal is conj(F phi(-k)) F psi(-k)
    fp = orc.fourier_transform(sp, -ka[::-1])
    fq = orc.fourier_transform(sq, -ka[::-1])
    ref_k = (np.conj(fp.values) * fq.values)[::-1]
    mk = np.trapezoid(f, xa, axis=0)
    tag = f"[{scenario},g={cfg.gamma:g}]"
    return [_result("marginal_k" + tag, _rel(mx, ref_x), tol),
            _result("marginal_x" + tag, _rel(mk, ref_k), tol)]


def check_quasi_prob(cfg, scenario, faults=(), tol=1e-3):
    """Real and imaginary sums of ``rho = CW / <phi|psi>``."""
    xa, ka = cw.resolved_axes(cfg, scenario)
    f = cw.PhaseSpaceField(xa, ka, _analytic(cfg, scenario, xa, ka, faults))
    if scenario == "free":
        ov = gaussian_overlap(free_state(cfg, cfg.t), make_initial_state(cfg))
    else:
        sp, sq = _sampled(cfg, scenario, xa)
        ov = orc.overlap(sp, sq)
    total = cw.quasi_prob(f, ov).total()
    tag = f"[{scenario},g={cfg.gamma:g}]"
    return [_result("rho_re_sum" + tag, abs(total.real - 1.0), tol),
            _result("rho_im_sum" + tag, abs(total.imag), tol)]


def check_interference(cfg, tol=1e-8):
    """``W(psi1+psi2) - W(psi1) - W(psi2) - 2 Re CW(psi1, psi2)`` from the oracle."""
    xa, ka = cw.default_axes(cfg, "slits")
    s1, s2 = _sampled(cfg, "slits", xa)
    tot = orc.SampledWavefunction(s1.x_axis, s1.values + s2.values)
    w = orc.wigner_quadrature(tot, xa, ka)
    w1 = orc.wigner_quadrature(s1, xa, ka)
    w2 = orc.wigner_quadrature(s2, xa, ka)
    c12 = orc.cw_quadrature(s1, s2, xa, ka)
    resid = w - w1 - w2 - 2.0 * c12.real
    return _result(f"interference_decomposition[g={cfg.gamma:g}]",
                   float(np.max(np.abs(resid)) / np.max(np.abs(w))), tol)


def check_gouy_phase(cfg, scenario, faults=(), tol=1e-12):
    """The Gouy difference multiplies the whole field by one unit phasor."""
    xa, ka = cw.default_axes(cfg, scenario)
    on = _analytic(cfg, scenario, xa, ka, faults, gouy=True)
    off = _analytic(cfg, scenario, xa, ka, faults, gouy=False)
    if scenario == "free":
        dmu = cw.gouy_delta_free(cfg, cfg.t)
    else:
        dmu = cw.gouy_delta_slit(cfg)
    mod = float(np.max(np.abs(np.abs(on) - np.abs(off))) / np.max(np.abs(off)))
    mask = np.abs(off) > 1e-200
    ph = np.angle(on[mask] * np.conj(off[mask]) * np.exp(-1j * dmu))
    tag = f"[{scenario},g={cfg.gamma:g}]"
    return [_result("gouy_modulus" + tag, mod, tol),
            _result("gouy_offset" + tag, float(np.max(np.abs(ph))), tol)]


def check_gouy_structure(cfg):
    tau0 = cfg.mass * cfg.sigma0**2 / cfg.hbar
    lim = abs(free_evolve(cfg.with_(gamma=0.0), 100.0 * tau0).mu + math.pi / 4)
    d0 = abs(cw.gouy_delta_free(cfg.with_(gamma=0.0), cfg.t))
    d1 = abs(cw.gouy_delta_free(cfg.with_(gamma=-1.0), cfg.t))
    # ratio below one means the contractive packet shows the larger difference
    return [_result("gouy_free_limit", lim, 0.01),
            _result("gouy_contractive_ratio", d0 / d1, 1.0),
            CheckResult("gouy_initial_zero", abs(cw.gouy_delta_free(cfg, 0.0)), 0.0,
                        cw.gouy_delta_free(cfg, 0.0) == 0.0)]


def check_free_propagator(cfg, t_over_tau0, tol=1e-4):
    tau0 = cfg.mass * cfg.sigma0**2 / cfg.hbar
    t = t_over_tau0 * tau0
    b = free_evolve(cfg, t).b
    step = min(SAMPLE_STEP, 0.02 * cfg.sigma0)
    xs = np.arange(-14.0 * cfg.sigma0, 14.0 * cfg.sigma0 + step / 2, step)
    psi0 = orc.sample(make_initial_state(cfg), xs)
    x_out = np.linspace(-5.0 * b, 5.0 * b, 201)
    num = orc.propagate(cfg, psi0, x_out, t)
    err = float(np.max(np.abs(num - eval_free(cfg, t, x_out))))
    return _result(f"propagator_free[g={cfg.gamma:g},t={t_over_tau0:g}tau0]", err, tol)


def check_slit_propagator(cfg, tol=1e-4):
    """Kernel flight to the slits, Gaussian aperture, kernel flight to the screen."""
    step = min(SAMPLE_STEP, 0.02 * cfg.sigma0)
    xs0 = np.arange(-14.0 * cfg.sigma0, 14.0 * cfg.sigma0 + step / 2, step)
    psi0 = orc.sample(make_initial_state(cfg), xs0)
    half = cfg.d / 2.0 + 12.0 * cfg.beta
    x_slit = np.arange(-half, half + 0.25 * SAMPLE_STEP, 0.25 * SAMPLE_STEP)
    at_slit = orc.propagate(cfg, psi0, x_slit, cfg.t)
    big = slit_evolve(cfg)
    x_out = np.linspace(-4.0 * big.B, 4.0 * big.B, 201) - big.D / 2.0
    results = []
    for which in ("plus", "minus"):
        # the closed form is renormalised, so normalise the propagated packet
        s = orc.SampledWavefunction(x_slit, at_slit * slit_transmission(cfg, which, x_slit))
        s = orc.SampledWavefunction(x_slit, s.values / s.norm())
        xo = x_out if which == "plus" else -x_out
        num = orc.propagate(cfg, s, xo, cfg.tau)
        err = float(np.max(np.abs(num - eval_slit(cfg, which, xo))))
        results.append(_result(f"propagator_slit[{which},g={cfg.gamma:g}]", err, tol))
    return results


def check_kernel_composition(cfg, tol=1e-4):
    dt1, dt2 = 1e-3, 2e-3
    x, xi = 20e-6, -10e-6
    exact = kernel(cfg, x, xi, dt1 + dt2)
    num = orc.compose_kernels(cfg, x, xi, dt1, dt2, width=2e-4)
    return _result("kernel_composition", abs(num - exact) / abs(exact), tol)


def _tasks(cfg, gammas, free_times, faults):
    tasks = []
    for g in gammas:
        c = cfg.with_(gamma=float(g))
        for t in free_times:
            tasks.append(lambda c=c, t=t: [check_closed_form(c, "free", faults, t=t)])
        tasks.append(lambda c=c: [check_closed_form(c, "slits", faults)])
        tasks.append(lambda c=c: [check_closed_form(c, "screen", faults)])
        for sc in ("free", "slits", "screen"):
            tasks.append(lambda c=c, sc=sc: check_marginals(c, sc, faults))
        for sc in ("free", "screen"):
            tasks.append(lambda c=c, sc=sc: check_quasi_prob(c, sc, faults))
        tasks.append(lambda c=c: [check_interference(c)])
        for sc in ("free", "screen"):
            tasks.append(lambda c=c, sc=sc: check_gouy_phase(c, sc, faults))
        tasks.append(lambda c=c: check_slit_propagator(c))
    for g in (-1.0, 0.0, 1.0):
        for r in (0.5, 1.0, 5.0):
            tasks.append(lambda g=g, r=r: [check_free_propagator(cfg.with_(gamma=g), r)])
    tasks.append(lambda: check_gouy_structure(cfg))
    tasks.append(lambda: [check_kernel_composition(cfg)])
    return tasks


def run_checks(cfg: PhysicalConfig, gammas=(0.0, -1.0), free_times=(10e-3, 50e-3),
               faults=(), threads: int = 1) -> list[CheckResult]:
    """Run the certification suite; results keep a fixed order whatever ``threads`` is."""
    bad = set(faults) - set(FAULTS)
    if bad:
        from .errors import ConfigError

        raise ConfigError(f"unknown fault {sorted(bad)[0]!r}", "inject")
    tasks = _tasks(cfg, gammas, free_times, tuple(faults))
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            chunks = list(pool.map(lambda f: f(), tasks))
    else:
        chunks = [f() for f in tasks]
    return [r for chunk in chunks for r in chunk]


def format_report(results, run_id: str = "") -> str:
    lines = [f"# run_id={run_id}", "name,max_error,tolerance,verdict"]
    for r in results:
        lines.append(f"{r.name},{r.error:.3e},{r.tol:.1e},{r.verdict}")
    n_fail = sum(not r.passed for r in results)
    lines.append(f"# summary={len(results) - n_fail}/{len(results)} passed")
    return "\n".join(lines) + "\n"
