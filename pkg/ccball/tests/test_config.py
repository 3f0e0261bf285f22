import json
import logging

import pytest

from ccball.core.config import (
    DEFAULT_NUMERICS,
    NumericSettings,
    RunConfig,
    load_run_config,
    parse_numerics,
    parse_run_config,
)
from ccball.core.exceptions import ConfigurationError, UnknownConfigKey
from ccball.core.logging import LogManager, default_home


class TestRunConfig:
    def test_defaults(self):
        config = load_run_config(None)
        assert config.potential == {"kind": "quadratic", "c": 1.0}
        assert config.delta0 == 1.0
        assert config.output_format == "csv"
        assert config.numerics is DEFAULT_NUMERICS

    def test_load_file(self, tmp_path):
        path = tmp_path / "run.json"
        path.write_text(json.dumps({
            "potential": {"kind": "disc_array"},
            "delta0": 30,
            "seed": 7,
            "output_format": "json",
            "numerics": {"quad_rel_tol": 1e-10, "scan_grid": 16},
        }))
        config = load_run_config(str(path))
        assert config.potential == {"kind": "disc_array"}
        assert config.delta0 == 30.0
        assert config.seed == 7
        assert config.numerics.quad_rel_tol == 1e-10
        assert config.numerics.scan_grid == 16
        assert config.numerics.quad_limit == DEFAULT_NUMERICS.quad_limit

    def test_unknown_top_level_key(self):
        with pytest.raises(UnknownConfigKey) as info:
            parse_run_config({"delta": 1.0})
        assert info.value.key == "delta"
        assert info.value.exit_code == 2

    def test_unknown_numerics_key(self):
        with pytest.raises(UnknownConfigKey, match="numerics"):
            parse_numerics({"tolerance": 1e-3})

    @pytest.mark.parametrize("data", [
        {"delta0": "1"},
        {"seed": True},
        {"seed": 1.5},
        {"delta0": -1.0},
        {"eval_budget": 0},
        {"output_format": "xml"},
        {"schema": "cc2"},
        {"potential": {"c": 1.0}},
        {"numerics": {"scan_grid": 2.5}},
        [],
    ])
    def test_invalid_values(self, data):
        with pytest.raises(ConfigurationError):
            parse_run_config(data)

    def test_missing_file(self, tmp_path):
        with pytest.raises(ConfigurationError, match="not found"):
            load_run_config(str(tmp_path / "absent.json"))

    def test_invalid_json(self, tmp_path):
        path = tmp_path / "broken.json"
        path.write_text("{not json")
        with pytest.raises(ConfigurationError, match="invalid JSON"):
            load_run_config(str(path))

    def test_output_may_be_null(self):
        assert parse_run_config({"output": None}).output is None


class TestNumericSettings:
    def test_tolerances(self):
        numerics = NumericSettings()
        assert numerics.fd_step(3 + 4j) == pytest.approx(6e-4)
        assert numerics.area_tolerance(1.0) == pytest.approx(1e-6)
        assert numerics.area_tolerance(0.0) == pytest.approx(1e-8)

    def test_config_is_frozen(self):
        with pytest.raises(Exception):
            RunConfig().delta0 = 2.0


class TestLogging:
    def test_home_from_environment(self, ccball_home):
        assert default_home() == ccball_home

    def test_log_files_created(self, ccball_home):
        manager = LogManager(verbose=True)
        assert manager.log_dir == ccball_home / "logs"
        logging.getLogger("ccball.test").warning("something to keep")
        for handler in logging.getLogger("ccball").handlers:
            handler.flush()
        names = [p.name for p in manager.get_log_files()]
        assert any(n.startswith("ccball_errors_") for n in names)
        assert "something to keep" in manager.error_file.read_text(encoding="utf-8")
