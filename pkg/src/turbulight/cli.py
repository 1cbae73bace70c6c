"""Command-line front end: config loading, sweeps, CSV/JSON artifacts.

One JSON config file describes one run; the only flags are ``--config``,
``--out-dir`` and ``--seed-override``.  Configs are schema-checked before
any computation starts, and unknown keys anywhere in the tree are
rejected -- a typo should fail loudly, not silently fall back to a
default.  Scenarios:

``bell``
    CHSH parameter swept over squeezing or a preselection threshold.
    CSV columns ``param,B,valid``.
``mandel``
    Output Mandel Q swept over input mean photon number at fixed input Q.
    CSV columns ``param,mandel_q,valid``.
``squeeze``
    Postselected squeezing (dB) swept over the postselection threshold.
    CSV columns ``eta_ps,squeezing_db,valid``.
``dgcz``
    Entanglement-preservation domain scan over real displacements
    (d_a, d_b) for two-mode squeezed vacua on a squeezing grid.
    CSV columns ``da,db,xi,preserved``.
``pdt-info``
    Transmittance-law summary (moments, support) as JSON.

Every run writes ``manifest.json`` into the output directory: the echoed
inputs (with the effective seed after any override), the library version,
the seed, the wall time, artifact names, and ingestion reports for any
empirical transmittance files.  With a fixed config and seed the CSV/JSON
artifacts are byte-identical across runs; only ``wall_time_s`` in the
manifest varies.

Numbers in CSVs carry 17 significant digits, enough to round-trip IEEE
doubles, so every value is reproducible by direct library calls with the
manifest's parameters.  Booleans are written as ``1``/``0``.

Exit codes: 0 success; 2 config rejected; 3 numerical failure; 4 empty
selection everywhere.  Failures print a one-line JSON error category to
stderr.
"""

from __future__ import annotations

import argparse
import csv
import json
import math
import os
import sys
import time
from dataclasses import dataclass

from . import __version__
from .bell import BellSettings, BellSingularityError, bell_sweep
from .entangle import preservation_domain
from .homodyne import postselect_sweep
from .numerics import QuadratureAccuracyError
from .pdt import (
    AdaptiveCorrelated,
    Beta,
    Dirac,
    Empirical,
    EmptySelectionError,
    PerfectlyCorrelated,
    Product,
    Scaled,
    TruncatedLogNormal,
)
from .photocount import DetectorModel, mandel_out
from .states import squeezed_vacuum_db, tmsv

__all__ = [
    "ConfigError",
    "EmptySelectionEverywhere",
    "IngestReport",
    "ingest_pdt",
    "run",
    "main",
]


class ConfigError(ValueError):
    """Configuration rejected before computation (exit code 2)."""


class EmptySelectionEverywhere(RuntimeError):
    """No sweep point retained any channel mass (exit code 4)."""


@dataclass(frozen=True)
class IngestReport:
    """Summary of one empirical transmittance file ingestion."""

    path: str
    bins: int
    total_weight: float
    renormalization: float


# ---------------------------------------------------------------------------
# schema helpers
# ---------------------------------------------------------------------------


def _check_keys(node, where, required, optional=()):
    if not isinstance(node, dict):
        raise ConfigError(f"{where}: expected an object")
    allowed = set(required) | set(optional)
    unknown = sorted(set(node) - allowed)
    if unknown:
        raise ConfigError(
            f"{where}: unknown keys {unknown}; allowed keys are {sorted(allowed)}"
        )
    missing = sorted(set(required) - set(node))
    if missing:
        raise ConfigError(f"{where}: missing required keys {missing}")


def _as_real(value, where):
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ConfigError(f"{where}: expected a number, got {value!r}")
    if not math.isfinite(value):
        raise ConfigError(f"{where}: must be finite, got {value!r}")
    return float(value)


def _as_int(value, where):
    if isinstance(value, bool) or not isinstance(value, int):
        raise ConfigError(f"{where}: expected an integer, got {value!r}")
    return value


def _as_str(value, where):
    if not isinstance(value, str) or not value:
        raise ConfigError(f"{where}: expected a nonempty string, got {value!r}")
    return value


def _as_grid(value, where):
    if not isinstance(value, list) or not value:
        raise ConfigError(f"{where}: expected a nonempty list of numbers")
    return [_as_real(v, f"{where}[{i}]") for i, v in enumerate(value)]


def _as_pair(value, where):
    grid = _as_grid(value, where)
    if len(grid) != 2:
        raise ConfigError(f"{where}: expected exactly two numbers")
    return grid


def _lift(where, build, *args, **kwargs):
    """Run a library constructor, converting ValueError to ConfigError."""
    try:
        return build(*args, **kwargs)
    except ConfigError:
        raise
    except ValueError as exc:
        raise ConfigError(f"{where}: {exc}") from exc


# ---------------------------------------------------------------------------
# empirical-file ingestion
# ---------------------------------------------------------------------------


def ingest_pdt(path):
    """Load an ``eta,weight`` CSV into an Empirical law plus a report.

    Weights are renormalized to unit mass; the report records the factor
    they were multiplied by.  Malformed content is rejected with the
    offending line number.
    """
    try:
        fh = open(path, newline="")
    except OSError as exc:
        raise ConfigError(f"cannot read transmittance file {path}: {exc}") from exc
    etas = []
    weights = []
    with fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header is None or [c.strip() for c in header] != ["eta", "weight"]:
            raise ConfigError(
                f"{path}, line 1: header must be exactly 'eta,weight'"
            )
        for row in reader:
            line = reader.line_num
            if not row:
                continue  # blank line, e.g. trailing newline
            if len(row) != 2:
                raise ConfigError(
                    f"{path}, line {line}: expected 2 fields, got {len(row)}"
                )
            try:
                eta = float(row[0])
                weight = float(row[1])
            except ValueError as exc:
                raise ConfigError(f"{path}, line {line}: {exc}") from exc
            if not (math.isfinite(eta) and 0.0 <= eta <= 1.0):
                raise ConfigError(
                    f"{path}, line {line}: eta must lie in [0, 1], got {eta!r}"
                )
            if not (math.isfinite(weight) and weight >= 0.0):
                raise ConfigError(
                    f"{path}, line {line}: weight must be >= 0, got {weight!r}"
                )
            etas.append(eta)
            weights.append(weight)
    if not etas:
        raise ConfigError(f"{path}: no data rows")
    total = math.fsum(weights)
    if total <= 0.0:
        raise ConfigError(f"{path}: weights sum to {total!r}, need > 0")
    dist = _lift(path, Empirical, tuple(etas), tuple(weights))
    report = IngestReport(
        path=str(path),
        bins=len(etas),
        total_weight=total,
        renormalization=1.0 / total,
    )
    return dist, report


# ---------------------------------------------------------------------------
# config -> domain objects
# ---------------------------------------------------------------------------


def _build_pdt(node, where, config_dir, reports):
    _check_keys(node, where, ("family",), ("eta", "p", "q", "lo", "mu",
                                           "sigma", "path", "factor", "inner"))
    family = _as_str(node.get("family"), f"{where}.family")
    if family == "dirac":
        _check_keys(node, where, ("family", "eta"))
        return _lift(where, Dirac, _as_real(node["eta"], f"{where}.eta"))
    if family == "beta":
        _check_keys(node, where, ("family", "p", "q"), ("lo",))
        return _lift(
            where,
            Beta,
            _as_real(node["p"], f"{where}.p"),
            _as_real(node["q"], f"{where}.q"),
            _as_real(node.get("lo", 0.0), f"{where}.lo"),
        )
    if family == "lognormal":
        _check_keys(node, where, ("family", "mu", "sigma"), ("lo",))
        return _lift(
            where,
            TruncatedLogNormal,
            _as_real(node["mu"], f"{where}.mu"),
            _as_real(node["sigma"], f"{where}.sigma"),
            _as_real(node.get("lo", 0.0), f"{where}.lo"),
        )
    if family == "empirical":
        _check_keys(node, where, ("family", "path"))
        path = _as_str(node["path"], f"{where}.path")
        if not os.path.isabs(path):
            path = os.path.join(config_dir, path)
        dist, report = ingest_pdt(path)
        reports.append(report)
        return dist
    if family == "scaled":
        _check_keys(node, where, ("family", "factor", "inner"))
        inner = _build_pdt(node["inner"], f"{where}.inner", config_dir, reports)
        return _lift(
            where, Scaled, inner, _as_real(node["factor"], f"{where}.factor")
        )
    raise ConfigError(
        f"{where}.family: unknown family {family!r}; expected one of "
        "dirac, beta, lognormal, empirical, scaled"
    )


def _build_joint(node, where, config_dir, reports):
    _check_keys(node, where, ("kind",), ("a", "b", "dist"))
    kind = _as_str(node.get("kind"), f"{where}.kind")
    if kind == "product":
        _check_keys(node, where, ("kind", "a", "b"))
        return Product(
            _build_pdt(node["a"], f"{where}.a", config_dir, reports),
            _build_pdt(node["b"], f"{where}.b", config_dir, reports),
        )
    if kind == "correlated":
        _check_keys(node, where, ("kind", "dist"))
        return PerfectlyCorrelated(
            _build_pdt(node["dist"], f"{where}.dist", config_dir, reports)
        )
    if kind == "adaptive":
        _check_keys(node, where, ("kind", "a", "b"))
        return AdaptiveCorrelated(
            _build_pdt(node["a"], f"{where}.a", config_dir, reports),
            _build_pdt(node["b"], f"{where}.b", config_dir, reports),
        )
    raise ConfigError(
        f"{where}.kind: unknown kind {kind!r}; expected one of "
        "product, correlated, adaptive"
    )


def _build_detector(node, where):
    _check_keys(node, where, (), ("efficiency", "noise_counts"))
    return _lift(
        where,
        DetectorModel,
        efficiency=_as_real(node.get("efficiency", 1.0), f"{where}.efficiency"),
        noise_counts=_as_real(
            node.get("noise_counts", 0.0), f"{where}.noise_counts"
        ),
    )


# ---------------------------------------------------------------------------
# artifact writers
# ---------------------------------------------------------------------------


def _fmt(value):
    return format(float(value), ".17g")


def _flag(value):
    return "1" if value else "0"


def _write_csv(path, header, rows):
    os.makedirs(os.path.dirname(path) or ".", exist_ok=True)
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(header)
        writer.writerows(rows)


def _write_json(path, payload):
    os.makedirs(os.path.dirname(path) or ".", exist_ok=True)
    with open(path, "w") as fh:
        json.dump(payload, fh, indent=2, sort_keys=True)
        fh.write("\n")


# ---------------------------------------------------------------------------
# scenarios
# ---------------------------------------------------------------------------

_COMMON_OPTIONAL = ("seed", "output")


def _require_some_valid(points):
    if not any(p.valid for p in points):
        raise EmptySelectionEverywhere(
            "every sweep point left zero surviving channel mass"
        )


def _run_bell(cfg, out_path, config_dir, reports):
    _check_keys(
        cfg,
        "config",
        ("scenario", "channel", "detector", "sweep"),
        _COMMON_OPTIONAL + ("squeezing", "angles_a", "angles_b"),
    )
    channel = _build_joint(cfg["channel"], "config.channel", config_dir, reports)
    detector = _build_detector(cfg["detector"], "config.detector")
    sweep = cfg["sweep"]
    _check_keys(sweep, "config.sweep", ("parameter", "grid"))
    parameter = _as_str(sweep["parameter"], "config.sweep.parameter")
    grid = _as_grid(sweep["grid"], "config.sweep.grid")

    extra = {}
    for key in ("angles_a", "angles_b"):
        if key in cfg:
            extra[key] = tuple(_as_pair(cfg[key], f"config.{key}"))

    if parameter == "squeezing":
        if "squeezing" in cfg:
            raise ConfigError(
                "config.squeezing: remove this key when sweeping squeezing; "
                "the sweep grid supplies it"
            )
        for i, value in enumerate(grid):
            if value < 0.0:
                raise ConfigError(
                    f"config.sweep.grid[{i}]: squeezing must be >= 0"
                )
        settings = _lift(
            "config", BellSettings, grid[0], detector, channel, **extra
        )
        points = bell_sweep(settings, squeezing_grid=grid)
    elif parameter == "preselection":
        if "squeezing" not in cfg:
            raise ConfigError(
                "config.squeezing: required when sweeping preselection"
            )
        for i, value in enumerate(grid):
            if not 0.0 <= value < 1.0:
                raise ConfigError(
                    f"config.sweep.grid[{i}]: threshold must lie in [0, 1)"
                )
        settings = _lift(
            "config",
            BellSettings,
            _as_real(cfg["squeezing"], "config.squeezing"),
            detector,
            channel,
            **extra,
        )
        points = bell_sweep(settings, preselection_grid=grid)
        _require_some_valid(points)
    else:
        raise ConfigError(
            "config.sweep.parameter: expected 'squeezing' or 'preselection', "
            f"got {parameter!r}"
        )
    rows = [(_fmt(p.param), _fmt(p.value), _flag(p.valid)) for p in points]
    _write_csv(out_path, ("param", "B", "valid"), rows)


def _run_mandel(cfg, out_path, config_dir, reports):
    _check_keys(
        cfg,
        "config",
        ("scenario", "pdt", "q_in", "n_grid"),
        _COMMON_OPTIONAL + ("detector",),
    )
    dist = _build_pdt(cfg["pdt"], "config.pdt", config_dir, reports)
    detector = _build_detector(cfg.get("detector", {}), "config.detector")
    q_in = _as_real(cfg["q_in"], "config.q_in")
    if q_in < -1.0:
        raise ConfigError(f"config.q_in: must be >= -1, got {q_in!r}")
    grid = _as_grid(cfg["n_grid"], "config.n_grid")
    for i, n in enumerate(grid):
        if n <= 0.0:
            raise ConfigError(f"config.n_grid[{i}]: mean photon number must be > 0")
    rows = [
        (_fmt(n), _fmt(mandel_out(q_in, n, dist, detector)), _flag(True))
        for n in grid
    ]
    _write_csv(out_path, ("param", "mandel_q", "valid"), rows)


def _run_squeeze(cfg, out_path, config_dir, reports):
    _check_keys(
        cfg,
        "config",
        ("scenario", "pdt", "input_db", "thresholds"),
        _COMMON_OPTIONAL + ("displacement", "angle", "phase"),
    )
    dist = _build_pdt(cfg["pdt"], "config.pdt", config_dir, reports)
    input_db = _as_real(cfg["input_db"], "config.input_db")
    displacement = _as_pair(cfg.get("displacement", [0.0, 0.0]),
                            "config.displacement")
    angle = _as_real(cfg.get("angle", 0.0), "config.angle")
    phase = _as_real(cfg.get("phase", 0.0), "config.phase")
    thresholds = _as_grid(cfg["thresholds"], "config.thresholds")
    for i, value in enumerate(thresholds):
        if not 0.0 <= value < 1.0:
            raise ConfigError(
                f"config.thresholds[{i}]: threshold must lie in [0, 1)"
            )
    state = _lift(
        "config.input_db",
        squeezed_vacuum_db,
        input_db,
        angle=angle,
        mean=complex(displacement[0], displacement[1]),
    )
    points = postselect_sweep(state, dist, thresholds, phase=phase)
    _require_some_valid(points)
    rows = [
        (_fmt(p.eta_ps), _fmt(p.squeezing_db), _flag(p.valid)) for p in points
    ]
    _write_csv(out_path, ("eta_ps", "squeezing_db", "valid"), rows)


def _run_dgcz(cfg, out_path, config_dir, reports):
    _check_keys(
        cfg,
        "config",
        ("scenario", "xi_grid", "da_grid", "db_grid"),
        _COMMON_OPTIONAL,
    )
    xi_grid = _as_grid(cfg["xi_grid"], "config.xi_grid")
    for i, xi in enumerate(xi_grid):
        if xi <= 0.0:
            raise ConfigError(
                f"config.xi_grid[{i}]: squeezing must be > 0 for the domain scan"
            )
    da_grid = _as_grid(cfg["da_grid"], "config.da_grid")
    db_grid = _as_grid(cfg["db_grid"], "config.db_grid")
    rows = []
    for xi in xi_grid:
        state = tmsv(xi)
        for da in da_grid:
            for db in db_grid:
                preserved = preservation_domain(state, da, db)
                rows.append((_fmt(da), _fmt(db), _fmt(xi), _flag(preserved)))
    _write_csv(out_path, ("da", "db", "xi", "preserved"), rows)


def _run_pdt_info(cfg, out_path, config_dir, reports):
    _check_keys(cfg, "config", ("scenario", "pdt"), _COMMON_OPTIONAL)
    dist = _build_pdt(cfg["pdt"], "config.pdt", config_dir, reports)
    lo, hi = dist.support
    payload = {
        "moments": {
            "0.5": dist.moment(0.5),
            "1": dist.moment(1.0),
            "2": dist.moment(2.0),
        },
        "mean": dist.mean(),
        "variance": dist.variance(),
        "t_mean": dist.t_mean(),
        "t_variance": dist.t_variance(),
        "support": [lo, hi],
    }
    _write_json(out_path, payload)


_SCENARIOS = {
    "bell": (_run_bell, "bell.csv"),
    "mandel": (_run_mandel, "mandel.csv"),
    "squeeze": (_run_squeeze, "squeeze.csv"),
    "dgcz": (_run_dgcz, "dgcz.csv"),
    "pdt-info": (_run_pdt_info, "pdt_info.json"),
}


# ---------------------------------------------------------------------------
# orchestration
# ---------------------------------------------------------------------------


def _load_config(path):
    try:
        with open(path) as fh:
            raw = json.load(fh)
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config {path} is not valid JSON: {exc}") from exc
    if not isinstance(raw, dict):
        raise ConfigError("config root must be a JSON object")
    return raw


def run(config, out_dir, config_dir=".", seed_override=None):
    """Execute one validated run; returns the manifest dictionary.

    Raises ConfigError / EmptySelection errors / numerical errors for the
    caller (the CLI entry point maps them to exit codes).
    """
    started = time.perf_counter()
    if "scenario" not in config:
        raise ConfigError("config: missing required keys ['scenario']")
    scenario = _as_str(config["scenario"], "config.scenario")
    if scenario not in _SCENARIOS:
        raise ConfigError(
            f"config.scenario: unknown scenario {scenario!r}; expected one of "
            f"{sorted(_SCENARIOS)}"
        )
    runner, default_output = _SCENARIOS[scenario]

    seed = _as_int(config.get("seed", 0), "config.seed")
    if seed_override is not None:
        seed = _as_int(seed_override, "--seed-override")
    if seed < 0:
        raise ConfigError(f"config.seed: must be >= 0, got {seed!r}")
    output = _as_str(config.get("output", default_output), "config.output")

    reports = []
    out_path = os.path.join(out_dir, output)
    runner(config, out_path, config_dir, reports)

    echo = dict(config)
    echo["seed"] = seed
    manifest = {
        "version": __version__,
        "seed": seed,
        "inputs": echo,
        "artifacts": [output],
        "ingestion": [
            {
                "path": r.path,
                "bins": r.bins,
                "total_weight": r.total_weight,
                "renormalization": r.renormalization,
            }
            for r in reports
        ],
        "wall_time_s": time.perf_counter() - started,
    }
    _write_json(os.path.join(out_dir, "manifest.json"), manifest)
    return manifest


def _fail(code, category, message):
    print(json.dumps({"category": category, "message": message}),
          file=sys.stderr)
    return code


def main(argv=None):
    parser = argparse.ArgumentParser(
        prog="turbulight",
        description="Nonclassical-light transfer through fluctuating-loss "
                    "channels: deterministic sweeps from a JSON config.",
    )
    parser.add_argument("--config", required=True, help="path to JSON run config")
    parser.add_argument("--out-dir", default=".",
                        help="directory for CSV/JSON artifacts (default: .)")
    parser.add_argument("--seed-override", type=int, default=None,
                        help="replace the config's RNG seed")
    args = parser.parse_args(argv)

    try:
        config = _load_config(args.config)
        run(
            config,
            args.out_dir,
            config_dir=os.path.dirname(os.path.abspath(args.config)),
            seed_override=args.seed_override,
        )
    except ConfigError as exc:
        return _fail(2, "config", str(exc))
    except (EmptySelectionError, EmptySelectionEverywhere) as exc:
        return _fail(4, "empty-selection", str(exc))
    except (QuadratureAccuracyError, BellSingularityError, ArithmeticError,
            ValueError) as exc:
        return _fail(3, "numerical", str(exc))
    return 0


if __name__ == "__main__":
    sys.exit(main())
