"""Batch driver: ``weylmeasure {matrix,scan,verify,density,geometry}``.

A run is described by one JSON config whose keys match the long flags
(``--N-list`` is ``N_list``); flags given on the command line override the file.
Exit codes: 0 success, 1 verification failure, 2 configuration error,
3 numerical failure.
"""

from __future__ import annotations

import argparse
import hashlib
from dataclasses import asdict, dataclass, field, fields
import json
from pathlib import Path
import sys

from threadpoolctl import threadpool_limits

from .errors import ConfigError, NumericalError
from .hermite import BasisTruncation
from .io import header_lines, load_measure, save_operator
from .measures import CATALOG, Smooth, TConv, curve_catalog

EXIT_OK, EXIT_VERIFY, EXIT_CONFIG, EXIT_NUMERIC = 0, 1, 2, 3
COMMANDS = ("matrix", "scan", "verify", "density", "geometry")

DEFAULT_TEST_BUMPS = (
    {"center": [1.0, 0.0], "radius": 0.6},
    {"center": [0.0, 1.0], "radius": 0.6},
    {"center": [-0.7, 0.7], "radius": 0.6},
)


@dataclass
class ExperimentConfig:
    command: str | None = None
    measure: str | None = None
    out: str = "out"
    n: int | None = None
    N: int | None = None
    N_list: list = field(default_factory=lambda: [32, 64, 128, 256])
    K: int = 8
    quad_order: int | None = None
    panels: int | None = None
    method: str = "quadrature"
    mode: str = "product"
    seed: int = 0
    threads: int = 1
    format: str = "csv"
    tau_dec: float = 1e-3
    tau_flat: float = 1e-1
    eps_j: float = 1e-6
    rank_tol: float = 1e-8
    tolerance: float | None = None
    suites: list | None = None
    grid: int = 64
    box: list = field(default_factory=lambda: [-2.5, 2.5])
    seeds: int = 256
    test_functions: list = field(default_factory=lambda: [dict(b) for b in DEFAULT_TEST_BUMPS])
    pairing_tol: float = 1e-3
    curve: str | None = None
    samples: int = 16
    max_order: int = 8

    def validate(self):
        if self.command not in COMMANDS:
            raise ConfigError(f"command must be one of {', '.join(COMMANDS)}, got {self.command!r}")
        if self.n is not None and self.n not in (1, 2):
            raise ConfigError(f"n must be 1 or 2, got {self.n}")
        for name in ("K", "grid", "seeds", "samples", "max_order", "threads"):
            v = getattr(self, name)
            if not isinstance(v, int) or v < 1:
                raise ConfigError(f"{name} must be a positive integer, got {v!r}")
        for name in ("N", "quad_order", "panels"):
            v = getattr(self, name)
            if v is not None and (not isinstance(v, int) or v < 1):
                raise ConfigError(f"{name} must be a positive integer, got {v!r}")
        for name in ("tau_dec", "tau_flat", "eps_j", "rank_tol", "pairing_tol"):
            if not getattr(self, name) > 0:
                raise ConfigError(f"threshold {name} must be positive, got {getattr(self, name)!r}")
        if self.tolerance is not None and not self.tolerance > 0:
            raise ConfigError(f"tolerance must be positive, got {self.tolerance!r}")
        if not self.N_list or any(not isinstance(v, int) or v < 1 for v in self.N_list):
            raise ConfigError(f"N_list must be positive integers, got {self.N_list!r}")
        if any(b <= a for a, b in zip(self.N_list, self.N_list[1:])):
            raise ConfigError(f"N_list must be strictly increasing, got {self.N_list}")
        if self.mode not in ("product", "direct"):
            raise ConfigError(f"mode must be 'product' or 'direct', got {self.mode!r}")
        if self.method not in ("quadrature", "recurrence"):
            raise ConfigError(f"method must be 'quadrature' or 'recurrence', got {self.method!r}")
        if self.format not in ("csv", "npz"):
            raise ConfigError(f"format must be 'csv' or 'npz', got {self.format!r}")
        if len(self.box) != 2 or not self.box[0] < self.box[1]:
            raise ConfigError(f"box must be [lo, hi] with lo < hi, got {self.box!r}")
        if self.command == "scan" and self.K >= self.N_list[0]:
            raise ConfigError(f"need K < min(N_list) = {self.N_list[0]}, got K={self.K}")
        if self.command in ("matrix", "scan", "density") and self.measure is None:
            raise ConfigError(f"command {self.command!r} needs a measure file")
        if self.command == "geometry" and self.curve is None and self.measure is None:
            raise ConfigError("geometry needs a curve name or a measure file")
        return self

    def digest_dict(self) -> dict:
        """Config entries that influence results (thread count excluded)."""
        d = asdict(self)
        d.pop("threads")
        d.pop("out")
        if self.measure is not None:
            # hash the file contents, not where it happens to live
            try:
                d["measure"] = hashlib.sha256(Path(self.measure).read_bytes()).hexdigest()
            except OSError:
                pass
        return d


_FIELDS = {f.name for f in fields(ExperimentConfig)}


def load_config(path) -> dict:
    path = Path(path)
    try:
        data = json.loads(path.read_text())
    except FileNotFoundError:
        raise ConfigError(f"config file not found: {path}") from None
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{path}: malformed JSON at line {exc.lineno}, column {exc.colno}: {exc.msg}") from None
    if not isinstance(data, dict):
        raise ConfigError(f"{path}: config must be a JSON object")
    unknown = sorted(set(data) - _FIELDS)
    if unknown:
        raise ConfigError(f"{path}: unknown config keys {unknown}")
    # measure paths are relative to the config file
    if data.get("measure") and not Path(data["measure"]).is_absolute():
        data["measure"] = str(path.parent / data["measure"])
    return data


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="weylmeasure", description=__doc__.splitlines()[0])
    ap.add_argument("command", nargs="?", choices=COMMANDS)
    ap.add_argument("--config", help="JSON experiment config")
    ap.add_argument("--measure", help="JSON measure file")
    ap.add_argument("--out", help="output directory")
    ap.add_argument("--n", type=int)
    ap.add_argument("--N", type=int, help="truncation size per coordinate")
    ap.add_argument("--N-list", dest="N_list", help="comma separated, strictly increasing")
    ap.add_argument("--K", type=int, help="probe / block size")
    ap.add_argument("--quad-order", dest="quad_order", type=int, help="Gauss-Legendre order per panel")
    ap.add_argument("--panels", type=int)
    ap.add_argument("--method", choices=("quadrature", "recurrence"))
    ap.add_argument("--mode", choices=("direct", "product"), help="twisted convolution evaluation")
    ap.add_argument("--seed", type=int)
    ap.add_argument("--threads", type=int)
    ap.add_argument("--format", choices=("csv", "npz"))
    ap.add_argument("--tau-dec", dest="tau_dec", type=float)
    ap.add_argument("--tau-flat", dest="tau_flat", type=float)
    ap.add_argument("--eps-j", dest="eps_j", type=float)
    ap.add_argument("--rank-tol", dest="rank_tol", type=float)
    ap.add_argument("--tolerance", type=float, help="override every verify tolerance")
    ap.add_argument("--grid", type=int, help="density cells per axis")
    ap.add_argument("--curve", choices=sorted(CATALOG), help="geometry: catalog curve")
    ap.add_argument("--samples", type=int)
    ap.add_argument("--max-order", dest="max_order", type=int)
    ap.add_argument("--seeds", type=int, help="density: root-finding seeds per curve")
    ap.add_argument("--box", help="density: lo,hi of the square sweep box")
    ap.add_argument("--pairing-tol", dest="pairing_tol", type=float)
    ap.add_argument("--suites", help="verify: comma separated suite names")
    return ap


def resolve_config(args) -> ExperimentConfig:
    data = load_config(args.config) if args.config else {}
    flags = {k: v for k, v in vars(args).items() if k != "config" and v is not None}
    if "N_list" in flags:
        try:
            flags["N_list"] = [int(v) for v in flags["N_list"].split(",")]
        except ValueError:
            raise ConfigError(f"--N-list must be comma separated integers, got {args.N_list!r}") from None
    if "box" in flags:
        try:
            flags["box"] = [float(v) for v in flags["box"].split(",")]
        except ValueError:
            raise ConfigError(f"--box must be lo,hi, got {args.box!r}") from None
    if "suites" in flags:
        flags["suites"] = flags["suites"].split(",")
    data.update(flags)
    try:
        cfg = ExperimentConfig(**data)
    except TypeError as exc:
        raise ConfigError(str(exc)) from None
    return cfg.validate()


def _measure(cfg):
    m = load_measure(cfg.measure)
    if cfg.n is not None and m.n != cfg.n:
        raise ConfigError(f"measure file has n={m.n}, config says n={cfg.n}")
    return m


def _header(cfg, command):
    return header_lines(cfg.digest_dict(), command=command)


def _write(path: Path, text: str):
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(text)
    print(f"wrote {path}")


def cmd_matrix(cfg) -> int:
    from .weyl import weyl_matrix
    m = _measure(cfg)
    M = weyl_matrix(m, BasisTruncation(m.n, cfg.N or 32), cfg.mode, method=cfg.method, panels=cfg.panels,
                    order=cfg.quad_order, workers=cfg.threads)
    out = Path(cfg.out) / f"matrix.{cfg.format}"
    out.parent.mkdir(parents=True, exist_ok=True)
    save_operator(out, M, _header(cfg, "matrix"))
    print(f"wrote {out}")
    return EXIT_OK


def cmd_scan(cfg) -> int:
    from .weyl import compactness_scan
    m = _measure(cfg)
    rep = compactness_scan(m, cfg.N_list, cfg.K, tau_dec=cfg.tau_dec, tau_flat=cfg.tau_flat,
                           tconv_mode=cfg.mode, method=cfg.method, panels=cfg.panels,
                           order=cfg.quad_order, workers=cfg.threads)
    head = _header(cfg, "scan")
    _write(Path(cfg.out) / "scan.csv", rep.to_csv(head))
    _write(Path(cfg.out) / "scan.json", rep.to_json(header=head))
    print(f"trend: {rep.trend}")
    return EXIT_OK


def cmd_verify(cfg) -> int:
    from . import verify
    m = _measure(cfg) if cfg.measure else None
    suites = tuple(cfg.suites) if cfg.suites else verify.SUITES
    unknown = set(suites) - set(verify.SUITES)
    if unknown:
        raise ConfigError(f"unknown suites {sorted(unknown)}; available: {list(verify.SUITES)}")
    results = verify.run_suites(seed=cfg.seed, suites=suites, tolerance=cfg.tolerance, measure=m,
                                N=cfg.N or 64, workers=cfg.threads)
    for r in results:
        print(f"{'PASS' if r.passed else 'FAIL'} {r.name}: error {r.error:.3e} (tolerance {r.tolerance:.1e})")
    _write(Path(cfg.out) / "verify.json", verify.report_json(results, _header(cfg, "verify")))
    return EXIT_OK if all(r.passed for r in results) else EXIT_VERIFY


def _curve_pair(m):
    if not (isinstance(m, TConv) and len(m.children) == 2
            and all(isinstance(c, Smooth) for c in m.children)):
        raise ConfigError("density needs a tconv of exactly two smooth curve measures")
    return m.children


def cmd_density(cfg) -> int:
    from .twisted import CurvePairDensity, bump_function, density_sweep, pairing_oracle
    m = _measure(cfg)
    if m.n != 1:
        raise ConfigError("density is implemented for n = 1")
    a, b = _curve_pair(m)
    dens = CurvePairDensity(a.spec, b.spec, seeds=cfg.seeds, eps_j_rel=cfg.eps_j)
    lo, hi = [cfg.box[0]] * 2, [cfg.box[1]] * 2
    sweep = density_sweep(dens, lo, hi, cfg.grid)
    head = _header(cfg, "density")
    _write(Path(cfg.out) / "density.csv", sweep.to_csv(head))
    checks, ok = [], True
    for tf in cfg.test_functions:
        g = bump_function(tf["center"], tf["radius"], tf.get("height", 1.0))
        value, excluded = sweep.pairing(g)
        ref = pairing_oracle(a, b, g)
        denom = abs(ref) if abs(ref) > 0 else 1.0
        rel = abs(value - ref) / denom
        ok &= rel <= cfg.pairing_tol
        checks.append({"test_function": tf, "grid_pairing": [value.real, value.imag],
                       "oracle": [ref.real, ref.imag], "relative_residual": rel,
                       "excluded_cells": excluded})
        print(f"pairing {tf['center']} r={tf['radius']}: relative residual {rel:.3e}, "
              f"{len(excluded)} excluded cells")
    counts = {s: sweep.status.count(s) for s in ("ok", "empty", "near_critical")}
    summary = {"header": head, "grid": cfg.grid, "box": cfg.box, "cells": counts,
               "pairing_tol": cfg.pairing_tol, "pairings": checks, "passed": bool(ok)}
    _write(Path(cfg.out) / "density.json", json.dumps(summary, indent=2, sort_keys=True) + "\n")
    return EXIT_OK if ok else EXIT_VERIFY


def cmd_geometry(cfg) -> int:
    from .geometry import (
        finite_type_scan, greedy_spanning_points, hyperplane_containment, uniform_samples,
    )
    if cfg.curve is not None:
        charts = {cfg.curve: curve_catalog(cfg.curve)}
    else:
        m = _measure(cfg)
        leaves = m.children if isinstance(m, TConv) else (m,)
        charts = {f"{i}:{c.spec.chart.name}": c.spec.chart
                  for i, c in enumerate(leaves) if isinstance(c, Smooth)}
        if not charts:
            raise ConfigError("geometry needs smooth curve measures")
    report = {"header": _header(cfg, "geometry"), "charts": {}}
    for name, c in charts.items():
        if c.param_dim != 1:
            raise ConfigError(f"geometry checks are for curves; {name} has {c.param_dim} parameters")
        s = uniform_samples(c, cfg.samples)
        ft = finite_type_scan(c, s, cfg.max_order, cfg.rank_tol)
        hp = hyperplane_containment(c, s)
        report["charts"][name] = {
            "finite_type": ft.to_json_dict(),
            "spanning_points": greedy_spanning_points(c, s, rtol=cfg.rank_tol).to_json_dict(),
            "hyperplane": None if hp is None else hp.to_json_dict(),
        }
        orders = sorted({str(o) for o in ft.orders})
        print(f"{name}: finite type orders {orders}, hyperplane {'found' if hp else 'none'}")
    if cfg.curve is None and len(charts) == 2:
        from .twisted import critical_set_area
        report["critical_set_area"] = [list(r) for r in critical_set_area(*charts.values())]
    _write(Path(cfg.out) / "geometry.json", json.dumps(report, indent=2, sort_keys=True) + "\n")
    return EXIT_OK


HANDLERS = {"matrix": cmd_matrix, "scan": cmd_scan, "verify": cmd_verify,
            "density": cmd_density, "geometry": cmd_geometry}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = resolve_config(args)
        # BLAS stays single-threaded so results do not depend on --threads
        with threadpool_limits(limits=1):
            return HANDLERS[cfg.command](cfg)
    except ConfigError as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except NumericalError as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC


if __name__ == "__main__":
    sys.exit(main())
