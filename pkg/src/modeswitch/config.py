"""Run configuration: INI-style sections with strictly validated keys.

Grammar (all keys shown; unknown sections or keys are rejected):

    [model]
    name = double_tank            ; or a builtin, or switched_linear
    x0 = 2.0, 2.0                 ; optional for builtins (defaults apply)
    a = [[[-1.0]], [[-1.0]]]      ; switched_linear only: per-mode A (JSON)
    b = [[0.0], [2.0]]            ; switched_linear only: per-mode offsets
    q = [[1.0]]                   ; switched_linear only: cost weight
    target = [1.0]                ; switched_linear only: cost target

    [grid]
    t_horizon = 20.0
    dt = 0.01

    [schedule]
    blocks = 0:10.0, 1:10.0       ; mode_index:duration, left to right

    [optimizer]
    alpha = 0.5
    beta = 0.5
    eta = 0.6
    max_iters = 100
    d_tol = 1e-3                  ; optional
    max_backtracks = 40           ; optional
    selection_rule = leftmost     ; optional; or most_negative_first

    [output]
    dir = runs/double_tank        ; optional
    seed = 0                      ; optional, validation probes only
"""
from __future__ import annotations

import configparser
import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import ConfigError
from .grid import TimeGrid
from .models import BUILTIN_MODELS, Benchmark, make_switched_linear
from .optimizer import OptimizerParams, SelectionRule

_KNOWN_KEYS = {
    "model": {"name", "x0", "a", "b", "q", "target"},
    "grid": {"t_horizon", "dt"},
    "schedule": {"blocks"},
    "optimizer": {"alpha", "beta", "eta", "max_iters", "d_tol",
                  "max_backtracks", "selection_rule"},
    "output": {"dir", "seed"},
}
_REQUIRED = {
    "model": {"name"},
    "grid": {"t_horizon", "dt"},
    "schedule": {"blocks"},
    "optimizer": {"alpha", "beta", "eta", "max_iters"},
}


@dataclass(frozen=True)
class RunConfig:
    model_name: str
    x0: np.ndarray | None
    grid: TimeGrid
    blocks: tuple[tuple[int, float], ...]
    optimizer: OptimizerParams
    linear_params: dict | None
    output_dir: str | None
    seed: int


def _float(parser, section: str, key: str) -> float:
    try:
        return float(parser.get(section, key))
    except ValueError as exc:
        raise ConfigError(f"[{section}] {key} is not a number", f"{section}.{key}") from exc


def _int(parser, section: str, key: str, default=None) -> int:
    if default is not None and not parser.has_option(section, key):
        return default
    try:
        return int(parser.get(section, key))
    except ValueError as exc:
        raise ConfigError(f"[{section}] {key} is not an integer", f"{section}.{key}") from exc


def _json(parser, section: str, key: str):
    try:
        return json.loads(parser.get(section, key))
    except json.JSONDecodeError as exc:
        raise ConfigError(f"[{section}] {key} is not valid JSON", f"{section}.{key}") from exc


def _parse_blocks(raw: str) -> tuple[tuple[int, float], ...]:
    blocks = []
    for part in raw.split(","):
        part = part.strip()
        if not part:
            continue
        try:
            mode_s, dur_s = part.split(":")
            blocks.append((int(mode_s), float(dur_s)))
        except ValueError as exc:
            raise ConfigError(
                f"bad block entry {part!r}; expected mode:duration",
                "schedule.blocks") from exc
    if not blocks:
        raise ConfigError("blocks must not be empty", "schedule.blocks")
    return tuple(blocks)


def parse_run_config(text: str) -> RunConfig:
    parser = configparser.ConfigParser(inline_comment_prefixes=(";", "#"))
    try:
        parser.read_string(text)
    except configparser.Error as exc:
        raise ConfigError(f"unparseable config: {exc}") from exc

    for section in parser.sections():
        if section not in _KNOWN_KEYS:
            raise ConfigError(f"unknown section [{section}]", section)
        for key in parser.options(section):
            if key not in _KNOWN_KEYS[section]:
                raise ConfigError(f"unknown key {key!r} in [{section}]",
                                  f"{section}.{key}")
    for section, keys in _REQUIRED.items():
        if not parser.has_section(section):
            raise ConfigError(f"missing section [{section}]", section)
        for key in keys:
            if not parser.has_option(section, key):
                raise ConfigError(f"missing key {key!r} in [{section}]",
                                  f"{section}.{key}")

    name = parser.get("model", "name").strip()
    linear_params = None
    if name == "switched_linear":
        for key in ("a", "b", "q"):
            if not parser.has_option("model", key):
                raise ConfigError(f"switched_linear needs [model] {key}",
                                  f"model.{key}")
        linear_params = {
            "a": _json(parser, "model", "a"),
            "b": _json(parser, "model", "b"),
            "q": _json(parser, "model", "q"),
            "target": (_json(parser, "model", "target")
                       if parser.has_option("model", "target") else None),
        }
    elif name not in BUILTIN_MODELS:
        raise ConfigError(
            f"unknown model {name!r}; builtins: {sorted(BUILTIN_MODELS)}",
            "model.name")

    x0 = None
    if parser.has_option("model", "x0"):
        try:
            x0 = np.array([float(v) for v in parser.get("model", "x0").split(",")])
        except ValueError as exc:
            raise ConfigError("[model] x0 must be comma-separated numbers",
                              "model.x0") from exc
    if x0 is None and name == "switched_linear":
        raise ConfigError("switched_linear needs [model] x0", "model.x0")

    try:
        grid = TimeGrid(horizon=_float(parser, "grid", "t_horizon"),
                        dt=_float(parser, "grid", "dt"))
    except ValueError as exc:
        raise ConfigError(str(exc), "grid") from exc

    blocks = _parse_blocks(parser.get("schedule", "blocks"))
    total = sum(d for _, d in blocks)
    if abs(total - grid.horizon) > 1e-9 * max(1.0, grid.horizon):
        raise ConfigError(
            f"block durations sum to {total}, grid horizon is {grid.horizon}",
            "schedule.blocks")

    rule_raw = (parser.get("optimizer", "selection_rule", fallback="leftmost")
                .strip().lower())
    try:
        rule = SelectionRule(rule_raw)
    except ValueError as exc:
        raise ConfigError(f"unknown selection_rule {rule_raw!r}",
                          "optimizer.selection_rule") from exc
    try:
        optimizer = OptimizerParams(
            alpha=_float(parser, "optimizer", "alpha"),
            beta=_float(parser, "optimizer", "beta"),
            eta=_float(parser, "optimizer", "eta"),
            max_iters=_int(parser, "optimizer", "max_iters"),
            d_tol=(_float(parser, "optimizer", "d_tol")
                   if parser.has_option("optimizer", "d_tol") else 1e-3),
            max_backtracks=_int(parser, "optimizer", "max_backtracks", default=40),
            selection_rule=rule,
        )
    except ValueError as exc:
        raise ConfigError(str(exc), "optimizer") from exc

    output_dir = parser.get("output", "dir", fallback=None)
    seed = _int(parser, "output", "seed", default=0) if parser.has_section("output") else 0
    return RunConfig(name, x0, grid, blocks, optimizer, linear_params,
                     output_dir, seed)


def load_run_config(path: str | Path) -> RunConfig:
    p = Path(path)
    if not p.is_file():
        raise ConfigError(f"config file {p} does not exist")
    return parse_run_config(p.read_text())


def bundled_config_path(name: str = "double_tank_paper") -> Path:
    """Path of a configuration shipped with the package."""
    from importlib import resources
    path = Path(str(resources.files("modeswitch").joinpath(f"data/{name}.cfg")))
    if not path.is_file():
        raise ConfigError(f"no bundled config named {name!r}")
    return path


def resolve_benchmark(config: RunConfig) -> Benchmark:
    """Instantiate the configured system with the config's grid and x0."""
    if config.model_name == "switched_linear":
        lp = config.linear_params
        system = make_switched_linear(lp["a"], lp["b"], lp["q"], lp["target"])
        x0 = config.x0
        blocks = config.blocks
        return Benchmark("switched_linear", system, x0, config.grid, blocks)
    built = BUILTIN_MODELS[config.model_name]()
    x0 = built.x0 if config.x0 is None else config.x0
    if x0.shape != (built.system.state_dim,):
        raise ConfigError(
            f"x0 has {len(x0)} entries, model needs {built.system.state_dim}",
            "model.x0")
    return Benchmark(built.name, built.system, x0, config.grid, config.blocks)
