"""Subcommands of the nevanlab CLI. Each module exposes ``add_parser`` and ``run``."""

import argparse
import logging
from pathlib import Path

import pandas as pd
import plotly.graph_objects as go

from engine.errors import ConfigError, PropertyViolation
from utils.config import RunConfig
from utils.export import write_csv, write_figure, write_json

logger = logging.getLogger(__name__)

EXIT_OK = 0


def float_list(text: str) -> list[float]:
    """argparse type for comma-separated floats: ``0.5,1,2``."""
    try:
        return [float(v) for v in text.split(",") if v.strip()]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}") from exc


def as_complex(value) -> complex:
    """Numbers, ``"0.3+0.1j"`` strings, or ``[re, im]`` pairs."""
    if isinstance(value, (list, tuple)) and len(value) == 2:
        return complex(float(value[0]), float(value[1]))
    if isinstance(value, (int, float, complex)):
        return complex(value)
    if isinstance(value, str):
        try:
            return complex(value.replace(" ", "").replace("i", "j"))
        except ValueError as exc:
            raise ConfigError(f"not a complex number: {value!r}") from exc
    raise ConfigError(f"not a complex number: {value!r}")


def params(args: argparse.Namespace, config: RunConfig, command: str, defaults: dict) -> dict:
    """Defaults, then the config table, then flags actually given on the command line."""
    merged = dict(defaults)
    table = config.section(command)
    unknown = set(table) - set(defaults)
    if unknown:
        raise ConfigError(f"unknown key(s) in [{command}]: {', '.join(sorted(unknown))}")
    merged.update(table)
    for key in defaults:
        value = getattr(args, key, None)
        if value is not None:
            merged[key] = value
    return merged


class Artifacts:
    """Writes one command's outputs under ``<out>/<command>/`` with the run config embedded."""

    def __init__(self, config: RunConfig, command: str, resolved: dict | None = None):
        self.root = Path(config.out) / command
        self.header = {**config.to_dict(), "command": command, "resolved": resolved or {}}
        self.written: list[Path] = []

    def csv(self, name: str, df: pd.DataFrame) -> Path:
        path = write_csv(df, self.root / f"{name}.csv", self.header)
        self.written.append(path)
        return path

    def json(self, name: str, report: dict) -> Path:
        path = write_json(report, self.root / f"{name}.json", self.header)
        self.written.append(path)
        return path

    def figure(self, name: str, fig: go.Figure) -> Path:
        path = write_figure(fig, self.root / f"{name}.figure.json")
        self.written.append(path)
        return path

    def finish(self, passed: bool, summary: str) -> int:
        """Call after every artifact is written; a failed run raises PropertyViolation."""
        logger.info("%d files in %s", len(self.written), self.root)
        if not passed:
            raise PropertyViolation(f"{summary} (details in {self.root})")
        print(f"PASS {summary}")
        return EXIT_OK
