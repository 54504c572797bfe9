import pytest

from engine.errors import ConfigError
from utils.config import (
    CURVES_DIR,
    load_curve_file,
    load_run_config,
    resolve_curve_path,
    run_config_from_dict,
)


def test_defaults_without_a_file():
    config = load_run_config(None)
    assert config.curve is None
    assert config.jobs == 1
    with pytest.raises(ConfigError):
        config.load_curve()


def test_shipped_configs_load():
    for name in ("suite", "exp", "interpolation"):
        config = load_run_config(CURVES_DIR.parent / "configs" / f"{name}.toml")
        assert config.tol > 0


@pytest.mark.parametrize(
    "data",
    [{"colour": "red"}, {"tol": 0}, {"tol": "small"}, {"jobs": 0}, {"tcurve": 3}],
)
def test_rejected_run_configs(data):
    with pytest.raises(ConfigError):
        run_config_from_dict(data)


def test_overrides_skip_missing_values():
    config = run_config_from_dict({"curve": "exp", "seed": 3}).with_overrides(curve=None, seed=9, out="x")
    assert config.curve == "exp"
    assert config.seed == 9
    assert config.out == "x"


def test_command_tables():
    config = run_config_from_dict({"tcurve": {"radii": [1, 2]}})
    assert config.section("tcurve") == {"radii": [1, 2]}
    assert config.section("fmt") == {}
    assert config.param("tcurve", "radii") == [1, 2]


def test_every_shipped_curve_parses():
    for path in sorted(CURVES_DIR.glob("*.toml")):
        curve = load_curve_file(path)
        assert curve.name == path.stem


def test_curve_reference_relative_to_config(tmp_path):
    (tmp_path / "mine.toml").write_text('kind = "affine"\ncomponents = ["z"]\n')
    assert resolve_curve_path("mine.toml", tmp_path) == tmp_path / "mine.toml"
    with pytest.raises(ConfigError):
        resolve_curve_path("nowhere")


def test_syntax_error_is_a_config_error(tmp_path):
    bad = tmp_path / "bad.toml"
    bad.write_text("curve = \n")
    with pytest.raises(ConfigError):
        load_run_config(bad)
