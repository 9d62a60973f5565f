"""Command-line front end.

Subcommands: exact, mc, interface, localization, wetting, discontinuity,
bounds, fields.  Every subcommand accepts the same long flags (one per
RunConfig field) plus ``--config FILE`` holding line-oriented ``key=value``
pairs; explicit flags override the file.  Exit codes: 0 success, 2 usage
error, 3 precondition error, 4 runtime (cap / IO) error.
"""

from __future__ import annotations

import argparse
import dataclasses
import sys
from dataclasses import dataclass

from . import analytics, experiments
from .contours import interface_histogram
from .errors import CapExceededError, PreconditionError
from .exact import exact_gibbs
from .io import run_directory, write_csv, write_json
from .lattice import CouplingModel, Volume, dobrushin_bc, plus_bc
from .mc import McParams, mc_magnetization

SUBCOMMANDS = (
    "exact", "mc", "interface", "localization",
    "wetting", "discontinuity", "bounds", "fields",
)


@dataclass(frozen=True)
class RunConfig:
    subcommand: str
    alpha: float = 1.5
    beta: float = 2.0
    j1: float = 1.0
    L: int = 4
    N: int = 16
    L1: int = 64
    n: tuple[int, ...] = (8, 10, 12)
    cutoff: int = 1000
    epsilon: float = 0.5
    sweeps: int = 20_000
    burnin: int = 2_000
    chains: int = 4
    thin: int = 1
    seed: int = 0
    engine: str = "exact"
    out_dir: str = "runs"

    def __post_init__(self) -> None:
        if self.subcommand not in SUBCOMMANDS:
            raise PreconditionError(f"unknown subcommand {self.subcommand!r}")
        if self.engine not in ("exact", "mc"):
            raise PreconditionError("engine: must be 'exact' or 'mc'")
        if not 1.0 < self.alpha <= 2.0:
            raise PreconditionError("alpha: must lie in (1, 2]")
        if self.beta < 0.0:
            raise PreconditionError("beta: must be >= 0")
        if self.j1 < 1.0:
            raise PreconditionError("j1: must be >= 1")
        for key in ("L", "N", "L1", "cutoff", "sweeps", "chains", "thin"):
            if getattr(self, key) < 1:
                raise PreconditionError(f"{key}: must be >= 1")
        if self.burnin < 0:
            raise PreconditionError("burnin: must be >= 0")
        if not self.n or any(v < 1 for v in self.n):
            raise PreconditionError("n: must be a non-empty list of positive integers")
        if not 0.0 <= self.epsilon < 1.0:
            raise PreconditionError("epsilon: must lie in [0, 1)")

    @property
    def mc_params(self) -> McParams:
        return McParams(self.sweeps, self.burnin, self.chains, self.seed, self.thin)


_FIELD_TYPES = {f.name: f for f in dataclasses.fields(RunConfig) if f.name != "subcommand"}


def _parse_value(key: str, raw: str):
    if key not in _FIELD_TYPES:
        raise _Usage(f"unknown key {key!r}")
    try:
        if key == "n":
            return tuple(int(part) for part in raw.split(","))
        if key in ("engine", "out_dir"):
            return raw
        if key in ("alpha", "beta", "j1", "epsilon"):
            return float(raw)
        return int(raw)
    except ValueError:
        raise _Usage(f"{key}: cannot parse value {raw!r}") from None


class _Usage(Exception):
    pass


def _read_config(path: str) -> dict:
    try:
        with open(path) as fh:
            lines = fh.readlines()
    except OSError as exc:
        raise _Usage(f"config: {exc}") from None
    values = {}
    for line in lines:
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise _Usage(f"config: expected key=value, got {line!r}")
        key, _, raw = line.partition("=")
        values[key.strip()] = _parse_value(key.strip(), raw.strip())
    return values


def _build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", metavar="FILE", help="key=value config file")
    for name in _FIELD_TYPES:
        common.add_argument(f"--{name}", default=None, metavar=name.upper())
    parser = argparse.ArgumentParser(
        prog="dysonlab",
        description="Long-range one-dimensional Ising laboratory.",
    )
    sub = parser.add_subparsers(dest="subcommand", required=True)
    helps = {
        "exact": "exact magnetization profile on [-L, L], plus boundary",
        "mc": "Metropolis magnetization profile on [-L, L], plus boundary",
        "interface": "interface-location histogram on [-L, L], mixed boundary",
        "localization": "escape-probability study over a range of sizes",
        "wetting": "frozen-minus-interval conditional profile study",
        "discontinuity": "conditional gap between plus/minus annulus pasts",
        "bounds": "alternating remainder and boundary-observable bound tables",
        "fields": "four-term boundary field profile for both annulus signs",
    }
    for name in SUBCOMMANDS:
        sub.add_parser(name, parents=[common], help=helps[name])
    return parser


def parse_cli(argv: list[str]) -> RunConfig:
    ns = _build_parser().parse_args(argv)
    values = _read_config(ns.config) if ns.config else {}
    for key in _FIELD_TYPES:
        raw = getattr(ns, key)
        if raw is not None:
            values[key] = _parse_value(key, raw)
    return RunConfig(subcommand=ns.subcommand, **values)


# ---------------------------------------------------------------------------
# Dispatch
# ---------------------------------------------------------------------------

def _emit_report(cfg: RunConfig, report: experiments.ExperimentReport) -> str:
    path = run_directory(cfg.out_dir, report.name, report.parameters)
    for name, table in report.tables.items():
        write_csv(f"{path}/{name}.csv", table.header, table.rows)
    write_json(f"{path}/report.json", {
        "experiment": report.name,
        "parameters": report.parameters,
        "tables": sorted(report.tables),
        "verdicts": [dataclasses.asdict(v) for v in report.verdicts],
    })
    return path


def _emit_simple(cfg: RunConfig, name: str, parameters: dict,
                 tables: dict[str, tuple]) -> str:
    path = run_directory(cfg.out_dir, name, parameters)
    for fname, (header, rows) in tables.items():
        write_csv(f"{path}/{fname}.csv", header, rows)
    write_json(f"{path}/report.json", {
        "experiment": name,
        "parameters": parameters,
        "tables": sorted(tables),
        "verdicts": [],
    })
    return path


def _run_exact(cfg: RunConfig) -> str:
    vol = Volume(-cfg.L, cfg.L)
    res = exact_gibbs(vol, plus_bc(cfg.cutoff), CouplingModel(cfg.alpha, cfg.beta, cfg.j1))
    params = {"alpha": cfg.alpha, "beta": cfg.beta, "j1": cfg.j1, "L": cfg.L,
              "cutoff": cfg.cutoff, "log_partition": res.log_partition}
    rows = tuple((s, m, 0.0, 1) for s, m in res.magnetization.items())
    return _emit_simple(cfg, "exact", params,
                        {"magnetization": (("site", "mean", "std_error", "n_samples"), rows)})


def _run_mc(cfg: RunConfig) -> str:
    vol = Volume(-cfg.L, cfg.L)
    est = mc_magnetization(vol, plus_bc(cfg.cutoff),
                           CouplingModel(cfg.alpha, cfg.beta, cfg.j1),
                           None, list(vol.sites()), cfg.mc_params)
    params = {"alpha": cfg.alpha, "beta": cfg.beta, "j1": cfg.j1, "L": cfg.L,
              "cutoff": cfg.cutoff, "sweeps": cfg.sweeps, "burnin": cfg.burnin,
              "chains": cfg.chains, "thin": cfg.thin, "seed": cfg.seed}
    rows = tuple((s, e.mean, e.std_error, e.n_samples) for s, e in est.items())
    return _emit_simple(cfg, "mc", params,
                        {"magnetization": (("site", "mean", "std_error", "n_samples"), rows)})


def _run_interface(cfg: RunConfig) -> str:
    vol = Volume(-cfg.L, cfg.L)
    hist = interface_histogram(
        vol, CouplingModel(cfg.alpha, cfg.beta, cfg.j1), dobrushin_bc(cfg.cutoff),
        cfg.engine, cfg.mc_params if cfg.engine == "mc" else None,
    )
    params = {"alpha": cfg.alpha, "beta": cfg.beta, "j1": cfg.j1, "L": cfg.L,
              "cutoff": cfg.cutoff, "engine": cfg.engine,
              "seed": cfg.seed if cfg.engine == "mc" else None,
              "escape_probability": hist.escape_probability(cfg.epsilon),
              "epsilon": cfg.epsilon}
    errs = hist.std_errors or {}
    rows = tuple(
        (theta, hist.probabilities[theta], errs.get(theta, 0.0))
        for theta in hist.grid.values
    )
    return _emit_simple(cfg, "interface", params,
                        {"histogram": (("theta", "probability", "std_error"), rows)})


def _run_bounds(cfg: RunConfig) -> str:
    ns = tuple(range(1, cfg.N + 1))
    rem = analytics.alternating_remainder(ns, cfg.alpha)
    rem_rows = tuple(
        (n, r, (n + 1) ** -cfg.alpha) for n, r in zip(ns, rem)
    )
    bmax_rows = []
    for L1 in range(2, cfg.L1 + 1):
        rep = analytics.b_max(L1, cfg.alpha)
        bmax_rows.append((L1, rep.computed_value, rep.analytic_bound))
    params = {"alpha": cfg.alpha, "N": cfg.N, "L1": cfg.L1}
    return _emit_simple(cfg, "bounds", params, {
        "remainder": (("N", "remainder", "bound"), rem_rows),
        "bmax": (("L1", "value", "bound"), tuple(bmax_rows)),
    })


def _run_fields(cfg: RunConfig) -> str:
    n = cfg.n[-1]
    spec_minus = analytics.FieldProfileSpec(cfg.L, cfg.N, n, cfg.alpha, annulus_sign=-1)
    spec_plus = analytics.FieldProfileSpec(cfg.L, cfg.N, n, cfg.alpha, annulus_sign=1)
    xs = range(0, 2 * n + 1)
    rows = tuple(
        (x, analytics.field_profile(spec_minus, x), analytics.field_profile(spec_plus, x))
        for x in xs
    )
    params = {"alpha": cfg.alpha, "L": cfg.L, "N": cfg.N, "n": n}
    return _emit_simple(cfg, "fields", params,
                        {"field_profile": (("x", "h_minus_annulus", "h_plus_annulus"), rows)})


def _dispatch(cfg: RunConfig) -> str:
    if cfg.subcommand == "exact":
        return _run_exact(cfg)
    if cfg.subcommand == "mc":
        return _run_mc(cfg)
    if cfg.subcommand == "interface":
        return _run_interface(cfg)
    if cfg.subcommand == "bounds":
        return _run_bounds(cfg)
    if cfg.subcommand == "fields":
        return _run_fields(cfg)
    mcp = cfg.mc_params if cfg.engine == "mc" else None
    if cfg.subcommand == "localization":
        report = experiments.run_localization(
            cfg.alpha, cfg.beta, cfg.j1, engine=cfg.engine, params=mcp,
            cutoff=cfg.cutoff,
        )
    elif cfg.subcommand == "wetting":
        report = experiments.run_wetting(
            cfg.alpha, cfg.beta, cfg.j1, cfg.L, cfg.N, engine=cfg.engine,
            params=mcp, eps=cfg.epsilon, cutoff=cfg.cutoff,
        )
    else:
        report = experiments.run_discontinuity(
            cfg.alpha, cfg.beta, cfg.j1, cfg.L, cfg.N, cfg.n,
            engine=cfg.engine, params=mcp, cutoff=cfg.cutoff,
        )
    return _emit_report(cfg, report)


def main(argv: list[str] | None = None) -> int:
    argv = sys.argv[1:] if argv is None else argv
    try:
        cfg = parse_cli(argv)
    except _Usage as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except PreconditionError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    try:
        path = _dispatch(cfg)
    except PreconditionError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except (CapExceededError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 4
    print(path)
    return 0


if __name__ == "__main__":
    sys.exit(main())
