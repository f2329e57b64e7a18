"""Command-line driver: batch checks, deterministic seeding, reports.

Five commands share one config format (a single JSON document; CLI flags
override its top-level fields) and one report layout: a JSON document with
the full results, an RFC 4180 CSV with one row per relation check, and,
unless plots are disabled, PNG figures beside them.

  selftest    transform/entropy/commutator invariant sweeps on one grid
  verify      relation checks (entropic, robertson, covariance_psd, chain)
              for configured or randomly drawn states
  saturate    derivative-free search for the entropic infimum in a family
  scan        random (state, operator-pair) sweeps of all relation checks
  conjecture  ranked pushforward-entropy probes of non-quadrature pairs

Exit codes: 0 success, 1 relation-check failure, 2 config error,
3 resolution error. Every pseudo-random choice derives from the single
seed; worker count and scheduling never change any output byte.
"""

from __future__ import annotations

import argparse
import csv
import json
import math
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import __version__
from .bounds import (
    BoundReport,
    check_chain,
    check_covariance_psd,
    check_entropic,
    check_robertson,
    covariance_of,
    entropic_rhs,
)
from .conjecture import parse_observable, probe
from .entropy import differential_entropy
from .errors import ConfigError, ResolutionError
from .frft import fourier_apply, frft_apply, wrap_angle
from .optimize import FAMILY_IDS, StateFamily, minimize
from .quadrature import (
    QuadratureOp,
    commutator_value,
    distribution_of,
    global_rotate,
    local_rotate,
    momentum_op,
    position_op,
    random_quadrature_pair,
    rotation_matrix,
)
from .states import (
    GridSpec,
    make_gaussian,
    make_vacuum,
    position_density,
    random_ensemble,
    random_superposition,
)

SCHEMA_VERSION = "1"
CSV_COLUMNS = (
    "relation_id",
    "n",
    "coeffs_A",
    "coeffs_B",
    "lhs",
    "rhs",
    "margin",
    "pass",
    "diagnostics_summary",
)

EXIT_OK = 0
EXIT_CHECK_FAILED = 1
EXIT_CONFIG_ERROR = 2
EXIT_RESOLUTION_ERROR = 3

_GRID_DEFAULTS = {1: (2048, 20.0), 2: (256, 12.0)}
_TOP_LEVEL_KEYS = {
    "command",
    "seed",
    "out",
    "workers",
    "plots",
    "grid",
    "operators",
    "states",
    "family",
    "optimizer",
    "observables",
    "scan",
}


@dataclass
class RunConfig:
    command: str
    seed: int = 0
    out: str = "cventropic_report"
    workers: int = 1
    plots: bool = True
    grid: GridSpec = field(default_factory=lambda: GridSpec(2048, 20.0, 1))
    op_a: QuadratureOp | None = None
    op_b: QuadratureOp | None = None
    states: dict = field(default_factory=dict)
    family: dict = field(default_factory=dict)
    optimizer: dict = field(default_factory=dict)
    observables: dict = field(default_factory=dict)
    scan: dict = field(default_factory=dict)
    raw: dict = field(default_factory=dict)


def _expect(condition: bool, message: str) -> None:
    if not condition:
        raise ConfigError(message)


def _grid_from_config(section) -> GridSpec:
    _expect(isinstance(section, dict), "grid must be an object")
    unknown = set(section) - {"points", "half_extent", "axes"}
    _expect(not unknown, f"unknown grid keys: {sorted(unknown)}")
    axes = section.get("axes", 1)
    _expect(axes in (1, 2), "grid.axes must be 1 or 2")
    default_points, default_extent = _GRID_DEFAULTS[axes]
    points = section.get("points", default_points)
    half_extent = section.get("half_extent", default_extent)
    _expect(isinstance(points, int) and points > 0, "grid.points must be a positive integer")
    _expect(
        isinstance(half_extent, (int, float)) and half_extent > 0,
        "grid.half_extent must be positive",
    )
    try:
        return GridSpec(points, float(half_extent), axes)
    except ValueError as exc:
        raise ConfigError(f"invalid grid: {exc}") from exc


def _operator_from_list(values, axes: int, name: str) -> QuadratureOp:
    _expect(isinstance(values, list) and values, f"operators.{name} must be a list")
    _expect(
        all(isinstance(v, (int, float)) for v in values),
        f"operators.{name} entries must be numbers",
    )
    _expect(
        len(values) == 2 * axes,
        f"operators.{name} must have length {2 * axes} for {axes} mode(s)",
    )
    try:
        return QuadratureOp(tuple(float(v) for v in values))
    except ValueError as exc:
        raise ConfigError(f"invalid operators.{name}: {exc}") from exc


def load_config(command: str, path: str | None, overrides: dict) -> RunConfig:
    """Assemble the run configuration; every failure maps to exit code 2."""
    raw: dict = {}
    if path is not None:
        try:
            text = Path(path).read_text(encoding="utf-8")
        except OSError as exc:
            raise ConfigError(f"cannot read config {path}: {exc}") from exc
        try:
            raw = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ConfigError(f"config {path} is not valid JSON: {exc}") from exc
        _expect(isinstance(raw, dict), "config root must be a JSON object")

    unknown = set(raw) - _TOP_LEVEL_KEYS
    _expect(not unknown, f"unknown config keys: {sorted(unknown)}")
    if "command" in raw:
        _expect(
            raw["command"] == command,
            f"config names command {raw['command']!r} but {command!r} was invoked",
        )

    merged = dict(raw)
    for key, value in overrides.items():
        if value is not None:
            merged[key] = value

    seed = merged.get("seed", 0)
    _expect(isinstance(seed, int) and 0 <= seed < 2**64, "seed must be a 64-bit integer")
    workers = merged.get("workers", 1)
    _expect(isinstance(workers, int) and workers >= 1, "workers must be a positive integer")
    plots = merged.get("plots", True)
    _expect(isinstance(plots, bool), "plots must be a boolean")
    out = merged.get("out", "cventropic_report")
    _expect(isinstance(out, str) and out, "out must be a non-empty path string")

    grid = _grid_from_config(merged.get("grid", {}))

    cfg = RunConfig(
        command=command,
        seed=seed,
        out=out,
        workers=workers,
        plots=plots,
        grid=grid,
        states=merged.get("states", {}),
        family=merged.get("family", {}),
        optimizer=merged.get("optimizer", {}),
        observables=merged.get("observables", {}),
        scan=merged.get("scan", {}),
        raw=merged,
    )
    _expect(isinstance(cfg.states, dict), "states must be an object")
    _expect(isinstance(cfg.family, dict), "family must be an object")
    _expect(isinstance(cfg.optimizer, dict), "optimizer must be an object")
    _expect(isinstance(cfg.observables, dict), "observables must be an object")
    _expect(isinstance(cfg.scan, dict), "scan must be an object")

    operators = merged.get("operators")
    if operators is None:
        cfg.op_a = position_op(grid.axes, 0)
        cfg.op_b = momentum_op(grid.axes, 0)
    else:
        _expect(isinstance(operators, dict), "operators must be an object")
        unknown = set(operators) - {"a", "b"}
        _expect(not unknown, f"unknown operators keys: {sorted(unknown)}")
        _expect(
            "a" in operators and "b" in operators,
            "operators needs both 'a' and 'b' coefficient lists",
        )
        cfg.op_a = _operator_from_list(operators["a"], grid.axes, "a")
        cfg.op_b = _operator_from_list(operators["b"], grid.axes, "b")
    return cfg


def _item_rng(seed: int, index: int) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence([seed, index]))


def _build_state(spec: dict, grid: GridSpec, rng: np.random.Generator):
    kind = spec.get("kind", "vacuum")
    if kind == "vacuum":
        return make_vacuum(grid)
    if kind == "gaussian":
        axes = grid.axes

        def per_axis(name, default):
            value = spec.get(name, default)
            if isinstance(value, (int, float)):
                return (float(value),) * axes
            _expect(
                isinstance(value, list) and len(value) == axes,
                f"states.{name} must be a number or a list of {axes}",
            )
            return tuple(float(v) for v in value)

        return make_gaussian(
            grid,
            per_axis("center_x", 0.0),
            per_axis("center_p", 0.0),
            per_axis("squeeze", 1.0),
            per_axis("rotation", 0.0),
        )
    if kind == "random":
        return random_superposition(
            grid, rng, max_components=spec.get("max_components", 4)
        )
    if kind == "ensemble":
        return random_ensemble(
            grid,
            rng,
            members=spec.get("members", 2),
            max_components=spec.get("max_components", 3),
        )
    raise ConfigError(f"unknown states.kind {kind!r}")


def _summarize(diagnostics: dict) -> str:
    parts = []
    for key in sorted(diagnostics):
        value = diagnostics[key]
        if isinstance(value, bool):
            text = "true" if value else "false"
        elif isinstance(value, float):
            text = f"{value:.6g}"
        else:
            text = str(value).replace("\n", " ")
        parts.append(f"{key}={text}")
    return "; ".join(parts)


def _coeff_text(op: QuadratureOp | None) -> str:
    if op is None:
        return ""
    return " ".join(repr(float(v)) for v in op.coefficients)


def _report_row(
    report: BoundReport,
    n: int,
    op_a: QuadratureOp | None,
    op_b: QuadratureOp | None,
    extra: dict | None = None,
) -> dict:
    diagnostics = dict(report.diagnostics)
    if extra:
        diagnostics.update(extra)
    return {
        "relation_id": report.relation_id,
        "n": n,
        "coeffs_A": _coeff_text(op_a),
        "coeffs_B": _coeff_text(op_b),
        "lhs": report.lhs,
        "rhs": report.rhs,
        "margin": report.margin,
        "pass": report.passed,
        "diagnostics": diagnostics,
    }


def _error_row(relation_id: str, n: int, message: str, extra: dict | None = None) -> dict:
    diagnostics = {"error": message}
    if extra:
        diagnostics.update(extra)
    return {
        "relation_id": relation_id,
        "n": n,
        "coeffs_A": "",
        "coeffs_B": "",
        "lhs": math.nan,
        "rhs": math.nan,
        "margin": math.nan,
        "pass": False,
        "diagnostics": diagnostics,
    }


def _csv_cell(value) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, (float, np.floating)):
        return repr(float(value))
    return str(value)


def _write_csv(path: Path, rows: list[dict]) -> None:
    with path.open("w", encoding="utf-8", newline="") as handle:
        writer = csv.writer(handle, lineterminator="\r\n")
        writer.writerow(CSV_COLUMNS)
        for row in rows:
            writer.writerow(
                [
                    row["relation_id"],
                    row["n"],
                    row["coeffs_A"],
                    row["coeffs_B"],
                    _csv_cell(row["lhs"]),
                    _csv_cell(row["rhs"]),
                    _csv_cell(row["margin"]),
                    _csv_cell(row["pass"]),
                    _summarize(row["diagnostics"]),
                ]
            )


def _json_safe(value):
    if isinstance(value, dict):
        return {str(k): _json_safe(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_json_safe(v) for v in value]
    if isinstance(value, np.ndarray):
        return [_json_safe(v) for v in value.tolist()]
    if isinstance(value, (np.floating, float)):
        value = float(value)
        return value if math.isfinite(value) else repr(value)
    if isinstance(value, np.integer):
        return int(value)
    return value


def _parallel_map(fn, indices, workers: int) -> list:
    if workers == 1:
        return [fn(i) for i in indices]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, indices))


def _config_echo(cfg: RunConfig) -> dict:
    echo = dict(cfg.raw)
    echo.update(
        {
            "command": cfg.command,
            "seed": cfg.seed,
            "out": cfg.out,
            "workers": cfg.workers,
            "plots": cfg.plots,
            "grid": {
                "points": cfg.grid.points_per_axis,
                "half_extent": cfg.grid.half_extent,
                "axes": cfg.grid.axes,
            },
        }
    )
    if cfg.op_a is not None:
        echo["operators"] = {
            "a": list(cfg.op_a.coefficients),
            "b": list(cfg.op_b.coefficients),
        }
    return echo


def _write_report(cfg: RunConfig, rows: list[dict], extras: dict | None = None) -> Path:
    out_dir = Path(cfg.out)
    out_dir.mkdir(parents=True, exist_ok=True)

    csv_rows = [dict(row) for row in rows]
    _write_csv(out_dir / "results.csv", csv_rows)

    passed = sum(1 for row in rows if row["pass"])
    errors = sum(1 for row in rows if "error" in row["diagnostics"])
    document = {
        "schema_version": SCHEMA_VERSION,
        "tool": {"name": "cventropic", "version": __version__},
        "command": cfg.command,
        "seed": cfg.seed,
        "config": _config_echo(cfg),
        "results": rows,
        "summary": {
            "total": len(rows),
            "passed": passed,
            "failed": len(rows) - passed,
            "errors": errors,
        },
    }
    if extras:
        document.update(extras)
    with (out_dir / "report.json").open("w", encoding="utf-8") as handle:
        json.dump(_json_safe(document), handle, indent=2, sort_keys=True)
        handle.write("\n")
    return out_dir


def _render_margins(cfg: RunConfig, rows: list[dict], out_dir: Path, title: str) -> None:
    if not cfg.plots or not rows:
        return
    from . import figures

    fig_dir = out_dir / "figures"
    fig_dir.mkdir(exist_ok=True)
    figures.margins_figure(rows, str(fig_dir / "margins.png"), title)


def _exit_code(rows: list[dict]) -> int:
    if any("error" in row["diagnostics"] for row in rows):
        return EXIT_RESOLUTION_ERROR
    if any(not row["pass"] for row in rows):
        return EXIT_CHECK_FAILED
    return EXIT_OK


def _l2_distance(state_a, state_b) -> float:
    volume = state_a.grid.cell_volume()
    diff = state_a.amplitudes - state_b.amplitudes
    return float(math.sqrt(np.sum(np.abs(diff) ** 2) * volume))


def _selftest_checks(cfg: RunConfig):
    """Yield (name, tolerance, runner) triples; runners return measured error."""
    grid = cfg.grid
    seed = cfg.seed

    def additivity() -> float:
        worst = 0.0
        for i in range(10):
            rng = _item_rng(seed, 1000 + i)
            state = random_superposition(grid, rng, max_components=3)
            theta1, theta2 = rng.uniform(-math.pi, math.pi, size=2)
            for axis in range(grid.axes):
                stepped = frft_apply(frft_apply(state, theta1, axis), theta2, axis)
                direct = frft_apply(state, wrap_angle(theta1 + theta2), axis)
                worst = max(worst, _l2_distance(stepped, direct))
        return worst

    def unitarity() -> float:
        worst = 0.0
        for i in range(20):
            rng = _item_rng(seed, 2000 + i)
            state = random_superposition(grid, rng, max_components=3)
            theta = rng.uniform(-math.pi, math.pi)
            moved = frft_apply(state, theta, axis=0)
            worst = max(worst, abs(moved.meta.get("norm_drift", 0.0)))
        return worst

    def fourier_match() -> float:
        rng = _item_rng(seed, 3000)
        state = random_superposition(grid, rng, max_components=3)
        return _l2_distance(
            frft_apply(state, math.pi / 2.0, axis=0), fourier_apply(state, axis=0)
        )

    def entropy_scaling() -> float:
        worst = 0.0
        for i in range(5):
            rng = _item_rng(seed, 4000 + i)
            state = random_superposition(grid, rng, max_components=3)
            density = position_density(state)
            base = differential_entropy(density).value
            for c in (0.5, 2.0, math.e):
                shifted = differential_entropy(density.scaled(c)).value
                worst = max(worst, abs(shifted - base - math.log(c)))
        return worst

    def commutator_invariance() -> float:
        worst = 0.0
        n = grid.axes
        for i in range(10):
            rng = _item_rng(seed, 5000 + i)
            op_a, op_b = random_quadrature_pair(n, rng)
            kappa = commutator_value(op_a, op_b)
            angles = tuple(rng.uniform(-math.pi, math.pi, size=n))
            rotated = commutator_value(
                local_rotate(op_a, angles), local_rotate(op_b, angles)
            )
            worst = max(worst, abs(rotated - kappa))
            if n == 2:
                rot = rotation_matrix(rng.uniform(-math.pi, math.pi))
                globally = commutator_value(
                    global_rotate(op_a, rot), global_rotate(op_b, rot)
                )
                worst = max(worst, abs(globally - kappa))
        return worst

    def vacuum_saturation() -> float:
        vacuum = make_vacuum(grid)
        h_x = differential_entropy(
            distribution_of(vacuum, position_op(grid.axes, 0))
        ).value
        h_p = differential_entropy(
            distribution_of(vacuum, momentum_op(grid.axes, 0))
        ).value
        return abs(h_x + h_p - entropic_rhs(position_op(), momentum_op()))

    yield "frft_additivity", 1e-5, additivity
    yield "frft_unitarity", 1e-6, unitarity
    yield "frft_fourier_match", 1e-8, fourier_match
    yield "entropy_scaling", 5e-4, entropy_scaling
    yield "commutator_invariance", 1e-12, commutator_invariance
    yield "vacuum_saturation", 5e-3, vacuum_saturation


def run_selftest(cfg: RunConfig) -> int:
    """Invariant sweeps; rows report measured error against tolerance.

    Selftest rows set lhs = measured error and rhs = tolerance, so a
    positive margin (rhs - lhs here) means the invariant held with room.
    """
    rows = []
    for name, tolerance, runner in _selftest_checks(cfg):
        try:
            measured = runner()
        except ResolutionError as exc:
            rows.append(
                _error_row(f"selftest_{name}", cfg.grid.axes, str(exc))
            )
            continue
        margin = tolerance - measured
        rows.append(
            {
                "relation_id": f"selftest_{name}",
                "n": cfg.grid.axes,
                "coeffs_A": "",
                "coeffs_B": "",
                "lhs": measured,
                "rhs": tolerance,
                "margin": margin,
                "pass": bool(margin >= 0.0),
                "diagnostics": {"tolerance": tolerance},
            }
        )
    out_dir = _write_report(cfg, rows)
    _render_margins(cfg, rows, out_dir, "selftest margins")
    return _exit_code(rows)


def _relation_rows(state, n: int, op_a, op_b, extra: dict) -> list[dict]:
    """The four relation checks every verify/scan item emits."""
    rows = [
        _report_row(check_entropic(state, op_a, op_b), n, op_a, op_b, extra),
        _report_row(check_robertson(state, op_a, op_b), n, op_a, op_b, extra),
        _report_row(check_covariance_psd(covariance_of(state)), n, None, None, extra),
        _report_row(check_chain(state, op_a, op_b), n, op_a, op_b, extra),
    ]
    return rows


def run_verify(cfg: RunConfig) -> int:
    states_spec = dict(cfg.states) or {"kind": "vacuum"}
    count = states_spec.pop("count", 1)
    _expect(isinstance(count, int) and count >= 1, "states.count must be >= 1")

    def item(index: int) -> list[dict]:
        extra = {"state_index": index}
        try:
            state = _build_state(states_spec, cfg.grid, _item_rng(cfg.seed, index))
            return _relation_rows(state, cfg.grid.axes, cfg.op_a, cfg.op_b, extra)
        except ResolutionError as exc:
            return [_error_row("verify_state", cfg.grid.axes, str(exc), extra)]

    row_groups = _parallel_map(item, range(count), cfg.workers)
    rows = [row for group in row_groups for row in group]
    out_dir = _write_report(cfg, rows)
    _render_margins(cfg, rows, out_dir, "relation margins")
    return _exit_code(rows)


def run_scan(cfg: RunConfig) -> int:
    count = cfg.scan.get("count", 25)
    _expect(isinstance(count, int) and count >= 1, "scan.count must be >= 1")
    min_commutator = cfg.scan.get("min_commutator", 0.2)
    max_components = cfg.scan.get("max_components", 4)

    def item(index: int) -> list[dict]:
        rng = _item_rng(cfg.seed, index)
        extra = {"item_index": index}
        try:
            state = random_superposition(cfg.grid, rng, max_components=max_components)
            op_a, op_b = random_quadrature_pair(
                cfg.grid.axes, rng, min_commutator=min_commutator
            )
            return _relation_rows(state, cfg.grid.axes, op_a, op_b, extra)
        except ResolutionError as exc:
            return [_error_row("scan_item", cfg.grid.axes, str(exc), extra)]

    row_groups = _parallel_map(item, range(count), cfg.workers)
    rows = [row for group in row_groups for row in group]
    out_dir = _write_report(cfg, rows)
    _render_margins(cfg, rows, out_dir, "scan margins")
    return _exit_code(rows)


def run_saturate(cfg: RunConfig) -> int:
    family_id = cfg.family.get("id", "gaussian")
    _expect(family_id in FAMILY_IDS, f"family.id must be one of {FAMILY_IDS}")
    components = cfg.family.get("components", 1)
    _expect(
        isinstance(components, int) and components >= 1,
        "family.components must be >= 1",
    )
    budget = cfg.optimizer.get("budget", 2000)
    restarts = cfg.optimizer.get("restarts", 3)
    attain_tol = cfg.optimizer.get("attain_tolerance", 0.02)
    safety_tol = cfg.optimizer.get("safety_tolerance", 5e-3)
    _expect(isinstance(budget, int) and budget >= 100, "optimizer.budget must be >= 100")
    _expect(isinstance(restarts, int) and restarts >= 1, "optimizer.restarts must be >= 1")

    try:
        family = StateFamily(family_id, cfg.grid, components=components)
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc

    result = minimize(
        family, cfg.op_a, cfg.op_b, budget=budget, restarts=restarts, seed=cfg.seed
    )
    bound = entropic_rhs(cfg.op_a, cfg.op_b)
    attained = result.gap_to_bound <= attain_tol
    safe = result.gap_to_bound >= -safety_tol
    rows = [
        {
            "relation_id": "entropic_attainment",
            "n": cfg.grid.axes,
            "coeffs_A": _coeff_text(cfg.op_a),
            "coeffs_B": _coeff_text(cfg.op_b),
            "lhs": result.best_value,
            "rhs": bound,
            "margin": result.gap_to_bound,
            "pass": bool(attained and safe),
            "diagnostics": {
                "family": family_id,
                "components": components,
                "evaluations": result.evaluations,
                "attain_tolerance": attain_tol,
                "safety_tolerance": safety_tol,
                "attained": attained,
                "safe": safe,
            },
        }
    ]
    extras = {
        "optimum": {
            "best_value": result.best_value,
            "best_params": result.best_params,
            "evaluations": result.evaluations,
            "gap_to_bound": result.gap_to_bound,
        }
    }
    out_dir = _write_report(cfg, rows, extras)
    if cfg.plots:
        try:
            best_state = family.build(result.best_params)
            dist_a = distribution_of(best_state, cfg.op_a)
            dist_b = distribution_of(best_state, cfg.op_b)
        except ResolutionError:
            pass
        else:
            from . import figures

            fig_dir = out_dir / "figures"
            fig_dir.mkdir(exist_ok=True)
            figures.densities_figure(
                dist_a,
                dist_b,
                str(fig_dir / "best_state.png"),
                f"best {family_id} state (gap {result.gap_to_bound:.2e})",
                labels=("observable A", "observable B"),
            )
    return _exit_code(rows)


def run_conjecture(cfg: RunConfig) -> int:
    f_specs = cfg.observables.get("f", ["x", "x^2", "x^3"])
    g_specs = cfg.observables.get("g", ["p", "p^2"])
    _expect(
        isinstance(f_specs, list) and f_specs and all(isinstance(s, str) for s in f_specs),
        "observables.f must be a list of spec strings",
    )
    _expect(
        isinstance(g_specs, list) and g_specs and all(isinstance(s, str) for s in g_specs),
        "observables.g must be a list of spec strings",
    )
    _expect(cfg.grid.axes == 1, "conjecture probes are 1-D only")

    f_observables = [parse_observable(cfg.grid, text) for text in f_specs]
    g_observables = [parse_observable(cfg.grid, text) for text in g_specs]
    for obs in f_observables:
        _expect(obs.basis == "position", f"observables.f entry {obs.label!r} is not in x")
    for obs in g_observables:
        _expect(obs.basis == "momentum", f"observables.g entry {obs.label!r} is not in p")

    states_spec = dict(cfg.states)
    states_spec.setdefault("kind", "random")
    count = states_spec.pop("count", 20)
    _expect(isinstance(count, int) and count >= 1, "states.count must be >= 1")
    if states_spec["kind"] == "random":
        states_spec.setdefault("max_components", 2)

    def item(index: int) -> list[dict]:
        label = f"state_{index}"
        try:
            state = _build_state(states_spec, cfg.grid, _item_rng(cfg.seed, index))
        except ResolutionError as exc:
            return [_error_row("conjecture_probe", 1, str(exc), {"state": label})]
        rows = []
        for f_obs in f_observables:
            for g_obs in g_observables:
                try:
                    record = probe(state, f_obs, g_obs, state_label=label)
                except ResolutionError as exc:
                    rows.append(
                        _error_row(
                            "conjecture_probe",
                            1,
                            str(exc),
                            {"state": label, "f": f_obs.label, "g": g_obs.label},
                        )
                    )
                    continue
                rows.append(
                    {
                        "relation_id": "conjecture_probe",
                        "n": 1,
                        "coeffs_A": record.f_label,
                        "coeffs_B": record.g_label,
                        "lhs": record.h_a + record.h_b,
                        "rhs": record.rhs,
                        "margin": record.margin,
                        "pass": bool(record.margin >= 0.0),
                        "diagnostics": {
                            "state": record.state_label,
                            "h_a": record.h_a,
                            "h_b": record.h_b,
                            "commutator_expectation": record.commutator,
                            "low_confidence": record.low_confidence,
                            "degenerate": record.degenerate,
                        },
                    }
                )
        return rows

    row_groups = _parallel_map(item, range(count), cfg.workers)
    rows = [row for group in row_groups for row in group]
    # Ranked by margin, most negative first; degenerate (vacuous) records last.
    rows.sort(
        key=lambda row: (
            not math.isfinite(row["margin"]),
            row["margin"] if math.isfinite(row["margin"]) else 0.0,
            row["diagnostics"].get("state", ""),
            row["coeffs_A"],
            row["coeffs_B"],
        )
    )
    ranked = [
        {
            "state": row["diagnostics"].get("state", ""),
            "f": row["coeffs_A"],
            "g": row["coeffs_B"],
            "margin": row["margin"],
            "low_confidence": row["diagnostics"].get("low_confidence", False),
        }
        for row in rows
        if "error" not in row["diagnostics"]
    ]
    out_dir = _write_report(cfg, rows, {"ranked_records": ranked})
    if cfg.plots and rows:
        from . import figures

        fig_dir = out_dir / "figures"
        fig_dir.mkdir(exist_ok=True)
        figures.ranked_margins_figure(
            [
                {
                    "margin": row["margin"],
                    "low_confidence": row["diagnostics"].get("low_confidence", False),
                }
                for row in rows
                if "error" not in row["diagnostics"]
            ],
            str(fig_dir / "ranked_margins.png"),
            "conjecture probe margins (ranked)",
        )
    # Negative margins are findings, not failures; only real errors gate.
    if any("error" in row["diagnostics"] for row in rows):
        return EXIT_RESOLUTION_ERROR
    return EXIT_OK


_COMMANDS = {
    "selftest": run_selftest,
    "verify": run_verify,
    "saturate": run_saturate,
    "scan": run_scan,
    "conjecture": run_conjecture,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="cventropic",
        description="Entropic and variance uncertainty-relation checks "
        "for continuous-variable states on grids.",
    )
    parser.add_argument("command", choices=sorted(_COMMANDS))
    parser.add_argument("--config", help="path to a JSON config document")
    parser.add_argument("--seed", type=int, help="override the config seed")
    parser.add_argument("--out", help="override the output directory")
    parser.add_argument("--workers", type=int, help="parallel worker count")
    parser.add_argument(
        "--no-plots",
        action="store_true",
        help="skip figure rendering on the report path",
    )
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    overrides = {
        "seed": args.seed,
        "out": args.out,
        "workers": args.workers,
    }
    if args.no_plots:
        overrides["plots"] = False
    try:
        cfg = load_config(args.command, args.config, overrides)
        return _COMMANDS[args.command](cfg)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG_ERROR
    except ResolutionError as exc:
        print(f"resolution error: {exc}", file=sys.stderr)
        return EXIT_RESOLUTION_ERROR


if __name__ == "__main__":
    sys.exit(main())
