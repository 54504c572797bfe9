"""Configuration loading for nevanlab: curve files and run configs (TOML)."""

import sys
from dataclasses import dataclass, field, replace
from pathlib import Path

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib

from engine.entire_curves import EntireCurve, load_curve
from engine.errors import ConfigError
from utils.constants import QUADRATURE

REPO_ROOT = Path(__file__).resolve().parent.parent
CURVES_DIR = REPO_ROOT / "curves"

COMMANDS = ("tcurve", "fmt", "zeros", "cover", "cartan", "heights", "auxpoly", "count", "windows", "suite")
TOP_LEVEL_KEYS = {"curve", "seed", "tol", "jobs", "out", *COMMANDS}


def read_toml(path: str | Path) -> dict:
    """Parse a TOML file, turning I/O and syntax problems into ConfigError."""
    path = Path(path)
    try:
        with path.open("rb") as fh:
            return tomllib.load(fh)
    except FileNotFoundError as exc:
        raise ConfigError(f"config file not found: {path}") from exc
    except tomllib.TOMLDecodeError as exc:
        raise ConfigError(f"{path}: {exc}") from exc


def resolve_curve_path(ref: str | Path, base: Path | None = None) -> Path:
    """A curve reference is a path (absolute or relative to ``base``) or a shipped curve name."""
    candidates = [Path(ref)]
    if base is not None:
        candidates.append(base / ref)
    candidates.append(CURVES_DIR / f"{ref}.toml")
    for path in candidates:
        if path.is_file():
            return path
    shipped = ", ".join(sorted(p.stem for p in CURVES_DIR.glob("*.toml")))
    raise ConfigError(f"unknown curve {str(ref)!r}; shipped curves: {shipped}")


def load_curve_file(ref: str | Path, base: Path | None = None) -> EntireCurve:
    path = resolve_curve_path(ref, base)
    data = read_toml(path)
    data.setdefault("name", path.stem)
    return load_curve(data)


@dataclass(frozen=True)
class RunConfig:
    """Resolved settings for one command run.

    Args:
        curve: Curve reference (path or shipped name), or None for curve-free commands.
        seed: Seed for every randomised sweep.
        tol: Default quadrature/evaluation tolerance.
        jobs: Worker threads for table sweeps.
        out: Output directory.
        params: Per-command tables, e.g. {"tcurve": {"radii": [0.5, 1]}}.
        source: The config file the values came from, if any.
    """

    curve: str | None = None
    seed: int = 0
    tol: float = QUADRATURE["default_tol"]
    jobs: int = 1
    out: str = "out"
    params: dict = field(default_factory=dict)
    source: str | None = None

    def section(self, command: str) -> dict:
        return dict(self.params.get(command, {}))

    def param(self, command: str, key: str, default=None):
        return self.params.get(command, {}).get(key, default)

    def with_overrides(self, **overrides) -> "RunConfig":
        """Apply command-line values that were actually given."""
        given = {k: v for k, v in overrides.items() if v is not None}
        return replace(self, **given)

    def load_curve(self) -> EntireCurve:
        if self.curve is None:
            raise ConfigError("this command needs a curve (set `curve` in the config or pass --curve)")
        base = Path(self.source).parent if self.source else None
        return load_curve_file(self.curve, base)

    def to_dict(self) -> dict:
        return {
            "curve": self.curve,
            "seed": self.seed,
            "tol": self.tol,
            "jobs": self.jobs,
            "out": self.out,
            "params": self.params,
            "source": self.source,
        }


def run_config_from_dict(data: dict, source: str | None = None) -> RunConfig:
    unknown = set(data) - TOP_LEVEL_KEYS
    if unknown:
        raise ConfigError(f"unknown config key(s): {', '.join(sorted(unknown))}")
    for command in COMMANDS:
        if command in data and not isinstance(data[command], dict):
            raise ConfigError(f"[{command}] must be a table")
    try:
        seed = int(data.get("seed", 0))
        tol = float(data.get("tol", QUADRATURE["default_tol"]))
        jobs = int(data.get("jobs", 1))
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"bad value in run config: {exc}") from exc
    if not tol > 0:
        raise ConfigError(f"tol must be positive, got {tol!r}")
    if jobs < 1:
        raise ConfigError(f"jobs must be >= 1, got {jobs!r}")
    return RunConfig(
        curve=data.get("curve"),
        seed=seed,
        tol=tol,
        jobs=jobs,
        out=str(data.get("out", "out")),
        params={c: data[c] for c in COMMANDS if c in data},
        source=source,
    )


def load_run_config(path: str | Path | None) -> RunConfig:
    if path is None:
        return RunConfig()
    return run_config_from_dict(read_toml(path), source=str(path))
