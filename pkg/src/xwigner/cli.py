"""Command-line front end: ``xwigner <verb> [options]``.

Lengths are given in micrometres, times in milliseconds and wavenumbers in
inverse micrometres; everything is converted to SI on entry.
"""

from __future__ import annotations

import argparse
import math
import os
import sys
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import crosswigner as cw
from . import io as xio
from . import oracle as orc
from . import reconstruction as rc
from .certify import FAULTS, format_report, run_checks
from .errors import ConfigError, GridIOError, XWignerError
from .propagation import free_evolve, screen_state, slit_evolve
from .states import PhysicalConfig

__all__ = ["RunConfig", "build_parser", "main"]

VERBS = ("free-cw", "slit-cw", "gouy-map", "reconstruct", "certify")
UM, MS = 1e-6, 1e-3
A10_TOL = {"wigner": 0.08, "cw": 0.10}


@dataclass(frozen=True)
class RunConfig:
    physical: PhysicalConfig
    scenario: str
    out: Path | None
    fmt: str = "csv"
    nx: int = 201
    nk: int = 201
    x_span: float | None = None
    k_span: float | None = None
    gouy: bool | None = None
    normalize: bool = False
    tau_window: tuple | None = None
    projections: int = 180
    gamma_given: bool = False
    gamma_range: tuple = (-3.0, 3.0, 121)
    time_range: tuple = (0.5e-3, 100e-3, 200)
    run_id: str = "0"
    faults: tuple = ()
    threads: int = 1

    def __post_init__(self):
        if self.scenario not in VERBS:
            raise ConfigError(f"unknown scenario {self.scenario!r}", "scenario")
        if self.nx < 16 or self.nk < 16:
            raise ConfigError("grid sizes must be >= 16", "grid")
        for name in ("x_span", "k_span"):
            v = getattr(self, name)
            if v is not None and not v > 0:
                raise ConfigError("spans must be positive", "span")
        if self.fmt not in ("csv", "bin"):
            raise ConfigError(f"unknown format {self.fmt!r}", "format")


# -- argument handling -------------------------------------------------------

def _floats(text, n, name):
    try:
        parts = [float(p) for p in str(text).split(",")]
    except ValueError:
        raise ConfigError(f"expected {n} comma-separated numbers, got {text!r}", name) from None
    if len(parts) != n:
        raise ConfigError(f"expected {n} comma-separated numbers, got {text!r}", name)
    return parts


def _range(text, name):
    lo, hi, n = _floats(text, 3, name)
    if n != int(n) or n < 1:
        raise ConfigError("point count must be a positive integer", name)
    n = int(n)
    if hi < lo or (n > 1 and hi == lo):
        raise ConfigError(f"empty range {text!r}", name)
    return lo, hi, n


def _threads():
    raw = os.environ.get("XWIGNER_THREADS", "1")
    try:
        n = int(raw)
    except ValueError:
        raise ConfigError(f"expected a positive integer, got {raw!r}", "XWIGNER_THREADS") from None
    if n < 1:
        raise ConfigError("must be >= 1", "XWIGNER_THREADS")
    return n


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    g = common.add_argument_group("physical parameters")
    g.add_argument("--config", metavar="FILE", help="key=value file; flags override it")
    g.add_argument("--mass", type=float, help="particle mass [kg]")
    g.add_argument("--sigma0", type=float, help="initial width [um]")
    g.add_argument("--gamma", type=float, help="correlation parameter")
    g.add_argument("--beta", type=float, help="slit width [um]")
    g.add_argument("--dslit", type=float, help="slit separation [um]")
    g.add_argument("--t", type=float, help="source-to-slit time [ms]")
    g.add_argument("--tau", type=float, help="slit-to-screen time [ms]")
    o = common.add_argument_group("output")
    o.add_argument("--grid", metavar="NX,NK", help="grid size (default 201,201)")
    o.add_argument("--span", metavar="X,K", help="half-widths in um and 1/um")
    o.add_argument("--tau-window", metavar="LO,HI,N", help="slit-to-screen times [ms]")
    o.add_argument("--gouy", action=argparse.BooleanOptionalAction, default=None,
                   help="emit only the field with (--gouy) or without (--no-gouy) the "
                        "Gouy difference; both by default")
    o.add_argument("--normalize", action="store_true", help="divide fields by max |value|")
    o.add_argument("--out", metavar="PATH", help="output directory (report file for certify)")
    o.add_argument("--format", choices=("csv", "bin"), help="grid file format")
    o.add_argument("--run-id", help="identifier written into metadata")

    parser = argparse.ArgumentParser(
        prog="xwigner",
        description="Cross-Wigner fields, Gouy phases and phase-space tomography "
                    "for correlated Gaussian matter waves.")
    sub = parser.add_subparsers(dest="verb", required=True, metavar="VERB")
    sub.add_parser("free-cw", parents=[common], help="free-evolution cross-Wigner grids")
    sub.add_parser("slit-cw", parents=[common], help="double-slit cross-Wigner grids")
    p = sub.add_parser("gouy-map", parents=[common], help="Gouy difference surfaces")
    p.add_argument("--gamma-range", metavar="LO,HI,N", help="default -3,3,121")
    p.add_argument("--time-range", metavar="LO,HI,N", help="times [ms], default 0.5,100,200")
    p = sub.add_parser("reconstruct", parents=[common], help="tomographic reconstruction")
    p.add_argument("--projections", type=int, help="projections over a quarter turn")
    p = sub.add_parser("certify", parents=[common], help="oracle certification report")
    p.add_argument("--inject-fault", choices=FAULTS, action="append", help=argparse.SUPPRESS)
    return parser


_FILE_KEYS = {"mass", "sigma0", "gamma", "beta", "dslit", "t", "tau", "grid", "span",
              "tau-window", "format", "out", "run-id", "normalize", "gouy", "gamma-range",
              "time-range", "projections"}


def _merge(ns) -> dict:
    vals = {}
    if getattr(ns, "config", None):
        for key, val in xio.read_config_file(ns.config).items():
            if key not in _FILE_KEYS:
                raise ConfigError(f"unknown key {key!r} in {ns.config}", key)
            vals[key] = val
    for key in _FILE_KEYS:
        attr = key.replace("-", "_")
        v = getattr(ns, attr, None)
        if v is not None and not (attr == "normalize" and v is False):
            vals[key] = v
    return vals


def _num(vals, key, default, scale=1.0):
    if key not in vals:
        return default
    try:
        return float(vals[key]) * scale
    except ValueError:
        raise ConfigError(f"expected a number, got {vals[key]!r}", key) from None


def _bool(v):
    if isinstance(v, bool):
        return v
    s = str(v).strip().lower()
    if s in ("1", "true", "yes", "on"):
        return True
    if s in ("0", "false", "no", "off"):
        return False
    raise ConfigError(f"expected a boolean, got {v!r}", "flag")


def run_config_from_args(ns) -> RunConfig:
    vals = _merge(ns)
    base = PhysicalConfig()
    phys = PhysicalConfig(
        mass=_num(vals, "mass", base.mass),
        sigma0=_num(vals, "sigma0", base.sigma0, UM),
        gamma=_num(vals, "gamma", base.gamma),
        beta=_num(vals, "beta", base.beta, UM),
        d=_num(vals, "dslit", base.d, UM),
        t=_num(vals, "t", base.t, MS),
        tau=_num(vals, "tau", base.tau, MS),
    )
    kw = {}
    if "grid" in vals:
        nx, nk = _floats(vals["grid"], 2, "grid")
        if nx != int(nx) or nk != int(nk):
            raise ConfigError("grid sizes must be integers", "grid")
        kw.update(nx=int(nx), nk=int(nk))
    if "span" in vals:
        xs, ks = _floats(vals["span"], 2, "span")
        kw.update(x_span=xs * UM, k_span=ks / UM)
    if "tau-window" in vals:
        lo, hi, n = _range(vals["tau-window"], "tau-window")
        kw["tau_window"] = (lo * MS, hi * MS, n)
    if "gamma-range" in vals:
        kw["gamma_range"] = _range(vals["gamma-range"], "gamma-range")
    if "time-range" in vals:
        lo, hi, n = _range(vals["time-range"], "time-range")
        kw["time_range"] = (lo * MS, hi * MS, n)
    if "projections" in vals:
        n = _num(vals, "projections", 180)
        if n != int(n) or n < 2:
            raise ConfigError("must be an integer >= 2", "projections")
        kw["projections"] = int(n)
    if "gouy" in vals:
        kw["gouy"] = _bool(vals["gouy"])
    out = vals.get("out")
    return RunConfig(
        physical=phys,
        scenario=ns.verb,
        out=Path(out) if out else None,
        fmt=vals.get("format", "csv"),
        normalize=_bool(vals.get("normalize", False)),
        gamma_given="gamma" in vals,
        run_id=str(vals.get("run-id", "0")),
        faults=tuple(getattr(ns, "inject_fault", None) or ()),
        threads=_threads(),
        **kw,
    )


# -- output helpers ------------------------------------------------------------

def _meta(rc_: RunConfig, cfg: PhysicalConfig | None = None, **extra):
    p = cfg or rc_.physical
    meta = {"run_id": rc_.run_id, "mass": p.mass, "hbar": p.hbar, "sigma0": p.sigma0,
            "gamma": p.gamma, "beta": p.beta, "d": p.d, "t": p.t, "tau": p.tau,
            "normalization": "max-abs" if rc_.normalize else "none"}
    meta.update(extra)
    return meta


def _dir(rc_: RunConfig) -> Path:
    out = rc_.out or Path("xwigner-out")
    try:
        out.mkdir(parents=True, exist_ok=True)
    except OSError as exc:
        raise GridIOError(f"{out}: {exc.strerror or exc}") from exc
    return out


def _emit_field(rc_, cfg, path, f: cw.PhaseSpaceField, **extra):
    if rc_.normalize:
        f = f.normalized()
    meta = _meta(rc_, cfg, **extra)
    meta.update({k: v for k, v in f.meta.items() if k not in meta})
    xio.write_field(path, f, rc_.fmt, meta)
    return path


def _emit_grid(rc_, cfg, path, a0, a1, values, names, **extra):
    values = np.asarray(values, dtype=complex)
    if rc_.normalize:
        values = values / np.max(np.abs(values))
    if rc_.fmt == "bin":
        xio.write_grid_bin(path, a0, a1, values)
    else:
        xio.write_grid_csv(path, a0, a1, values, _meta(rc_, cfg, **extra), names)
    return path


def _gammas(rc_):
    return (rc_.physical.gamma,) if rc_.gamma_given else (0.0, -1.0)


def _gouy_variants(rc_):
    if rc_.gouy is None:
        return (True, False)
    return (rc_.gouy,)


def _axes(rc_, cfg, scenario):
    return cw.default_axes(cfg, scenario, rc_.nx, rc_.nk, rc_.x_span, rc_.k_span)


def _tag(g):
    return f"g{g:+g}"


# -- verbs ---------------------------------------------------------------------

def cmd_free_cw(rc_: RunConfig) -> list[Path]:
    out, ext, written = _dir(rc_), rc_.fmt, []
    for g in _gammas(rc_):
        cfg = rc_.physical.with_(gamma=g)
        xa, ka = _axes(rc_, cfg, "free")
        for gouy in _gouy_variants(rc_):
            f = cw.free_cw_field(cfg, cfg.t, xa, ka, gouy)
            name = f"free_cw_{_tag(g)}_{'gouy' if gouy else 'nogouy'}.{ext}"
            written.append(_emit_field(rc_, cfg, out / name, f, figure="free-cw"))
        # x-t slice at k = 0
        ts = np.linspace(0.0, 2.0 * cfg.t, rc_.nk)
        span = rc_.x_span or 4.0 * max(free_evolve(cfg, ts[-1]).b, cfg.sigma0)
        xs = np.linspace(-span, span, rc_.nx)
        vals = np.column_stack([cw.eval_cw_free(cw.cw_free_params(cfg, t), xs, 0.0,
                                                rc_.gouy is not False) for t in ts])
        written.append(_emit_grid(rc_, cfg, out / f"free_cw_{_tag(g)}_xt_k0.{ext}", xs, ts, vals,
                                  ("x", "t"), figure="free-cw-slice", units="x[m],t[s]"))
    return written


def cmd_slit_cw(rc_: RunConfig) -> list[Path]:
    out, ext, written = _dir(rc_), rc_.fmt, []
    cfg0 = rc_.physical
    xa, ka = _axes(rc_, cfg0, "slits")
    written.append(_emit_field(rc_, cfg0, out / f"slits_cw.{ext}", cw.slits_cw_field(cfg0, xa, ka),
                               figure="slits-cw"))
    rows = {"gamma": [], "delta_mu_prime": [], "max_abs_difference": []}
    for g in _gammas(rc_):
        cfg = cfg0.with_(gamma=g)
        xa, ka = _axes(rc_, cfg, "screen")
        fields = {}
        for gouy in _gouy_variants(rc_):
            f = cw.screen_cw_field(cfg, xa, ka, gouy)
            fields[gouy] = f
            name = f"screen_cw_{_tag(g)}_{'gouy' if gouy else 'nogouy'}.{ext}"
            written.append(_emit_field(rc_, cfg, out / name, f, figure="screen-cw"))
        p = cw.cw_screen_params(cfg)
        on = cw.eval_cw_screen(p, xa[:, None], ka[None, :], True)
        off = cw.eval_cw_screen(p, xa[:, None], ka[None, :], False)
        peak = np.max(np.abs(off))
        rows["gamma"].append(g)
        rows["delta_mu_prime"].append(p.delta_mu_prime)
        rows["max_abs_difference"].append(float(np.max(np.abs(on - off)) / peak))
        # x-tau slice at k = 0
        taus = np.linspace(2.0 * cfg.tau / rc_.nk, 2.0 * cfg.tau, rc_.nk)
        span = rc_.x_span or 4.0 * max(slit_evolve(cfg.with_(tau=taus[-1])).B, cfg.sigma0)
        xs = np.linspace(-span, span, rc_.nx)
        vals = np.column_stack([
            cw.eval_cw_screen(cw.cw_screen_params(cfg.with_(tau=tt)), xs, 0.0,
                              rc_.gouy is not False) for tt in taus])
        written.append(_emit_grid(rc_, cfg, out / f"screen_cw_{_tag(g)}_xtau_k0.{ext}", xs, taus,
                                  vals, ("x", "tau"), figure="screen-cw-slice",
                                  units="x[m],tau[s]"))
    path = out / "gouy_discrepancy.csv"
    xio.write_table(path, rows, _meta(rc_, metric="max|with-without|/max|field|"))
    written.append(path)
    return written


def cmd_gouy_map(rc_: RunConfig) -> list[Path]:
    out, ext, written = _dir(rc_), rc_.fmt, []
    gammas = np.linspace(*rc_.gamma_range)
    times = np.linspace(*rc_.time_range)
    cfg = rc_.physical
    free = np.array([[abs(cw.gouy_delta_free(cfg.with_(gamma=g), t)) for t in times]
                     for g in gammas])
    slit = np.array([[abs(cw.gouy_delta_slit(cfg.with_(gamma=g, tau=t))) for t in times]
                     for g in gammas])
    written.append(_emit_grid(rc_, cfg, out / f"gouy_free_map.{ext}", gammas, times, free,
                              ("gamma", "t"), figure="gouy-free", units="gamma[1],t[s]"))
    written.append(_emit_grid(rc_, cfg, out / f"gouy_slit_map.{ext}", gammas, times, slit,
                              ("gamma", "tau"), figure="gouy-slit", units="gamma[1],tau[s]"))
    return written


def _reconstruction_times(rc_, cfg):
    if rc_.tau_window is None:
        return rc.theta_window(cfg, rc_.projections)
    lo, hi, n = rc_.tau_window
    if n < 2:
        raise ConfigError("need at least two times", "tau-window")
    sx = rc.natural_scale(cfg)
    v = cfg.hbar / cfg.mass
    th = np.linspace(math.atan(v * lo / sx**2), math.atan(v * hi / sx**2), n)
    return sx**2 * np.tan(th) / v


def cmd_reconstruct(rc_: RunConfig) -> list[Path]:
    cfg = rc_.physical
    taus = _reconstruction_times(rc_, cfg)
    xa, ka = _axes(rc_, cfg, "slits")
    rho = np.linspace(-40.0, 40.0, 4001)
    # coverage is checked before any output is written
    w_rec, sino_i, amap = rc.reconstruct_wigner(cfg, taus, xa, ka, plane_tau=cfg.tau, rho=rho)
    c_rec, sino_c, _ = rc.reconstruct_cw(cfg, taus, xa, ka, plane_tau=cfg.tau, rho=rho)
    out, ext, written = _dir(rc_), rc_.fmt, []
    extra = {"scale_x": amap.scale_x, "theta_span_deg": w_rec.meta["theta_span_deg"],
             "n_proj": int(amap.tau.size)}
    for name, s in (("sinogram_intensity", sino_i), ("sinogram_interference", sino_c)):
        written.append(_emit_grid(rc_, cfg, out / f"{name}.{ext}", amap.tau, rho, s.values,
                                  ("tau", "rho"), figure=name,
                                  units="tau[s],rho[1];x=rho*scale_x/cos(theta)", **extra))
    written.append(_emit_field(rc_, cfg, out / f"wigner_fbp.{ext}", w_rec, figure="wigner-fbp"))
    written.append(_emit_field(rc_, cfg, out / f"recon_cw.{ext}", c_rec, figure="recon-cw"))

    big_b = slit_evolve(cfg).B
    xs = orc.aligned_axis(xa, 12.0 * big_b + cfg.d, 0.5e-6)
    w_ref = orc.wigner_quadrature(orc.sample(lambda x: screen_state(cfg, x), xs), xa, ka)
    c_ref = cw.slits_cw_field(cfg, xa, ka).values.real
    X, K = np.meshgrid(xa, ka, indexing="ij")
    central = (np.abs(X) <= 0.5 * xa[-1]) & (np.abs(K) <= 0.5 * ka[-1])

    def l2(a, b):
        return float(np.linalg.norm((a - b)[central]) / np.linalg.norm(b[central]))

    e_w, e_c = l2(w_rec.values, w_ref), l2(c_rec.values, c_ref)
    path = out / "metrics.csv"
    xio.write_table(path, {
        "l2_wigner": [e_w], "tol_wigner": [A10_TOL["wigner"]],
        "l2_cw": [e_c], "tol_cw": [A10_TOL["cw"]],
        "theta_span_deg": [w_rec.meta["theta_span_deg"]], "scale_x": [amap.scale_x],
        "n_proj": [amap.tau.size], "plane_tau": [cfg.tau],
    }, _meta(rc_, region="central half of the output grid in x and k",
             pass_wigner=e_w < A10_TOL["wigner"], pass_cw=e_c < A10_TOL["cw"]))
    written.append(path)
    return written


def cmd_certify(rc_: RunConfig) -> tuple[str, bool]:
    gammas = _gammas(rc_)
    results = run_checks(rc_.physical, gammas=gammas, faults=rc_.faults, threads=rc_.threads)
    report = format_report(results, rc_.run_id)
    if rc_.out is not None:
        try:
            rc_.out.parent.mkdir(parents=True, exist_ok=True)
            rc_.out.write_text(report)
        except OSError as exc:
            raise GridIOError(f"{rc_.out}: {exc.strerror or exc}") from exc
    return report, all(r.passed for r in results)


def _limit_threads(n):
    try:
        from threadpoolctl import threadpool_limits
    except ImportError:  # pragma: no cover
        return None
    return threadpool_limits(limits=n)


def main(argv=None) -> int:
    parser = build_parser()
    ns = parser.parse_args(argv)
    try:
        rc_ = run_config_from_args(ns)
        _limit_threads(rc_.threads)
        if rc_.scenario == "certify":
            report, ok = cmd_certify(rc_)
            sys.stdout.write(report)
            return 0 if ok else 3
        cmd = {"free-cw": cmd_free_cw, "slit-cw": cmd_slit_cw, "gouy-map": cmd_gouy_map,
               "reconstruct": cmd_reconstruct}[rc_.scenario]
        for path in cmd(rc_):
            print(path)
        return 0
    except XWignerError as exc:
        print(f"xwigner: error: {exc}", file=sys.stderr)
        return exc.exit_code
    except OSError as exc:
        print(f"xwigner: error: {exc}", file=sys.stderr)
        return 4


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
