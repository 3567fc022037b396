import json

import pytest

from src.config import (
    THREADS_ENV,
    DiagnosticsPolicy,
    QuadraturePolicy,
    Settings,
    load_settings,
    merge_settings,
    user_config_path,
)
from src.errors import ModelFormatError


class TestPolicies:
    @pytest.mark.cli
    def test_defaults(self):
        settings = Settings()
        assert settings.quadrature.tolerance == 1e-10
        assert settings.diagnostics.x_hi == 1e4
        assert settings.threads == 1

    @pytest.mark.cli
    def test_invalid_values(self):
        with pytest.raises(ModelFormatError, match="policy.quadrature.tolerance"):
            QuadraturePolicy(tolerance=0.0)
        with pytest.raises(ModelFormatError):
            DiagnosticsPolicy(x_lo=100.0, x_hi=10.0)


class TestMerge:
    @pytest.mark.cli
    def test_partial_override(self):
        settings = merge_settings(Settings(), {"quadrature": {"tolerance": 1e-8}, "threads": 4})
        assert settings.quadrature.tolerance == 1e-8
        assert settings.quadrature.max_subdivisions == QuadraturePolicy().max_subdivisions
        assert settings.threads == 4

    @pytest.mark.cli
    def test_empty_override_is_identity(self):
        base = Settings()
        assert merge_settings(base, None) is base
        assert merge_settings(base, {}) is base

    @pytest.mark.cli
    @pytest.mark.parametrize("overrides, location", [
        ({"solver": {}}, "policy"),
        ({"quadrature": {"tol": 1.0}}, "policy.quadrature"),
        ({"quadrature": 3}, "policy.quadrature"),
        ({"threads": 0}, "policy.threads"),
        ({"diagnostics": {"run": 1}}, "policy.diagnostics.run"),
        ({"quadrature": {"tolerance": "tight"}}, "policy.quadrature"),
    ])
    def test_rejects(self, overrides, location):
        with pytest.raises(ModelFormatError) as err:
            merge_settings(Settings(), overrides)
        assert err.value.location.startswith(location)

    @pytest.mark.cli
    def test_origin_in_location(self):
        with pytest.raises(ModelFormatError, match=r"^--set\.series"):
            merge_settings(Settings(), {"series": {"chunks": 1}}, origin="--set")


class TestLoad:
    @pytest.mark.cli
    def test_missing_file_gives_defaults(self, tmp_path, monkeypatch):
        monkeypatch.delenv(THREADS_ENV, raising=False)
        assert load_settings(str(tmp_path / "absent.json")) == Settings()

    @pytest.mark.cli
    def test_file_then_environment(self, tmp_path, monkeypatch):
        path = tmp_path / "config.json"
        path.write_text(json.dumps({"threads": 2, "series": {"tolerance": 1e-9}}))
        monkeypatch.setenv(THREADS_ENV, "6")
        settings = load_settings(str(path))
        assert settings.series.tolerance == 1e-9
        assert settings.threads == 6
        assert load_settings(str(path), use_env=False).threads == 2

    @pytest.mark.cli
    def test_bad_environment(self, tmp_path, monkeypatch):
        monkeypatch.setenv(THREADS_ENV, "many")
        with pytest.raises(ModelFormatError, match=THREADS_ENV):
            load_settings(str(tmp_path / "absent.json"))

    @pytest.mark.cli
    def test_syntax_error_reports_position(self, tmp_path, monkeypatch):
        monkeypatch.delenv(THREADS_ENV, raising=False)
        path = tmp_path / "config.json"
        path.write_text('{\n  "threads": ,\n}')
        with pytest.raises(ModelFormatError, match="line 2"):
            load_settings(str(path))

    @pytest.mark.cli
    def test_user_config_path(self):
        assert user_config_path().endswith("config.json")
        assert "phasemix" in user_config_path()
