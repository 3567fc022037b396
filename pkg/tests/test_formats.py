import io
import json
import math

import numpy as np
import pytest

from src.errors import ModelFormatError, NonStochasticInitial, NotSubIntensity
from src.formats import load_model, parse_model, parse_scaler, read_rows, write_document, write_rows
from src.scaling import FiniteDiscreteScaler, ParetoScaler

PH = {"beta": [1.0], "lambda": [[-1.0]]}


class TestModelFiles:
    @pytest.mark.cli
    def test_ph_only(self):
        model = parse_model({"beta": [0.3, 0.7], "lambda": [[-1.0, 0.0], [0.0, -3.0]]})
        assert model.G.order == 2
        assert model.H is None
        with pytest.raises(ModelFormatError, match="scaler"):
            model.mixture

    @pytest.mark.cli
    def test_mixture_with_policy(self):
        model = parse_model({"ph": PH, "scaler": {"family": "pareto", "alpha": 2.5},
                             "policy": {"diagnostics": {"x_hi": 1e3}}})
        assert model.H == ParetoScaler(2.5)
        assert model.settings.diagnostics.x_hi == 1e3
        assert model.mixture.settings.diagnostics.x_hi == 1e3

    @pytest.mark.cli
    def test_finite_scaler(self):
        H = parse_scaler({"family": "finite", "points": [3, 1], "probs": [0.25, 0.75]})
        assert H == FiniteDiscreteScaler((1.0, 3.0), (0.75, 0.25))

    @pytest.mark.cli
    @pytest.mark.parametrize("document, location", [
        ([1, 2], "<model>"),
        ({"ph": PH, "extra": 1}, "<model>"),
        ({"ph": {"beta": [1.0]}}, "ph"),
        ({"ph": {"beta": [1.0], "lambda": [[-1.0]], "mu": 1}}, "ph"),
        ({"ph": {"beta": [1.0, "a"], "lambda": [[-1.0, 0.0], [0.0, -1.0]]}}, "ph.beta[1]"),
        ({"ph": {"beta": [1.0], "lambda": [[-1.0, 0.0]]}}, "ph.lambda[0]"),
        ({"ph": {"beta": [1.0], "lambda": [[True]]}}, "ph.lambda[0][0]"),
        ({"ph": PH, "scaler": {"alpha": 2.0}}, "scaler"),
        ({"ph": PH, "scaler": {"family": "cauchy"}}, "scaler.family"),
        ({"ph": PH, "scaler": {"family": "pareto"}}, "scaler"),
        ({"ph": PH, "scaler": {"family": "pareto", "alpha": 2.0, "xm": 1.0}}, "scaler"),
        ({"ph": PH, "scaler": {"family": "pareto", "alpha": "2"}}, "scaler.alpha"),
        ({"ph": PH, "policy": {"quadrature": {"tol": 1}}}, "policy.quadrature"),
    ])
    def test_malformed(self, document, location):
        with pytest.raises(ModelFormatError) as err:
            parse_model(document)
        assert err.value.location == location

    @pytest.mark.cli
    def test_invalid_ph_keeps_error_type(self):
        with pytest.raises(NonStochasticInitial, match="^ph: "):
            parse_model({"ph": {"beta": [0.5], "lambda": [[-1.0]]}})
        with pytest.raises(NotSubIntensity):
            parse_model({"ph": {"beta": [1.0], "lambda": [[1.0]]}})

    @pytest.mark.cli
    def test_load_reports_line_and_column(self, tmp_path):
        path = tmp_path / "broken.json"
        path.write_text('{"ph":\n  {"beta": [1.0],,}}')
        with pytest.raises(ModelFormatError, match="line 2, column"):
            load_model(str(path))

    @pytest.mark.cli
    def test_load_missing_file(self, tmp_path):
        with pytest.raises(ModelFormatError, match="cannot read"):
            load_model(str(tmp_path / "absent.json"))

    @pytest.mark.cli
    def test_load(self, write_model):
        model = load_model(write_model({"ph": PH, "scaler": {"family": "geometric", "p": 0.5}}))
        assert model.H.describe() == "geometric(p=0.5)"


class TestOutput:
    @pytest.mark.cli
    def test_csv(self):
        out = io.StringIO()
        write_rows(out, ("x", "tail"), [(1.0, 0.1), (2.0, 1 / 3)])
        assert out.getvalue() == "x,tail\n1.0,0.1\n2.0,0.3333333333333333\n"

    @pytest.mark.cli
    def test_json_nonfinite(self):
        out = io.StringIO()
        write_rows(out, ("order", "moment"), [(1, 2.0), (2, math.inf)], "json")
        assert json.loads(out.getvalue()) == [{"order": 1, "moment": 2.0}, {"order": 2, "moment": "inf"}]

    @pytest.mark.cli
    def test_text_columns_align(self):
        out = io.StringIO()
        write_rows(out, ("field", "value"), [("mda", "Gumbel"), ("tail_class", "heavy")], "text")
        lines = out.getvalue().splitlines()
        assert lines[0].index("value") == lines[1].index("Gumbel") == lines[2].index("heavy")

    @pytest.mark.cli
    def test_unknown_format(self):
        with pytest.raises(ValueError):
            write_rows(io.StringIO(), ("x",), [], "xml")

    @pytest.mark.cli
    @pytest.mark.parametrize("fmt", ["csv", "json"])
    def test_read_back(self, tmp_path, fmt):
        rows = [(0.1, 0.9048374180359595), (10.0, 4.5399929762484854e-05)]
        path = tmp_path / f"table.{fmt}"
        with open(path, "w") as f:
            write_rows(f, ("x", "tail"), rows, fmt)
        table = read_rows(str(path))
        assert [(r["x"], r["tail"]) for r in table] == rows

    @pytest.mark.cli
    def test_document_with_arrays(self):
        out = io.StringIO()
        write_document(out, {"values": np.array([1.0, 2.0])})
        assert json.loads(out.getvalue()) == {"values": [1.0, 2.0]}
