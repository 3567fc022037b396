import csv
import io
import json
import math

import pytest
from scipy import special

from src.errors import DomainError, ModelFormatError
from src.main import RunConfig, _resolve, build_parser, config_from_args, main, run

pytestmark = pytest.mark.usefixtures("restore_logging")

EXP = {"beta": [1.0], "lambda": [[-1.0]]}
EXP_EXP = {"ph": EXP, "scaler": {"family": "exponential", "beta": 1.0}}
EXP_PARETO = {"ph": EXP, "scaler": {"family": "pareto", "alpha": 2.5}}
EXP_GEOMETRIC = {"ph": EXP, "scaler": {"family": "geometric", "p": 0.5}}


def execute(command, model_path, **options):
    out = io.StringIO()
    assert run(RunConfig(command=command, model_path=model_path, **options), out) == 0
    return out.getvalue()


def csv_rows(text):
    return list(csv.DictReader(text.splitlines()))


class TestArguments:
    @pytest.mark.cli
    def test_parse_full_command_line(self):
        args = build_parser().parse_args([
            "mda", "-m", "model.json", "--grid", "1:100:4", "--format", "json", "--theta", "0.5,2",
            "--set", "quadrature.tolerance=1e-8", "--set", "diagnostics.run=4", "--threads", "3", "-q",
        ])
        config = config_from_args(args)
        assert config.grid == (1.0, 100.0, 4)
        assert config.thetas == (0.5, 2.0)
        assert config.overrides == {"quadrature": {"tolerance": 1e-8}, "diagnostics": {"run": 4}}
        assert config.threads == 3
        assert args.quiet

    @pytest.mark.cli
    @pytest.mark.parametrize("argv", [
        ["tail", "-m", "m.json", "--grid", "1:100"],
        ["tail", "-m", "m.json", "--theta", "a,b"],
        ["tail", "-m", "m.json", "--set", "tolerance"],
        ["tail", "-m", "m.json", "--x", "1", "--grid", "1:10:2"],
        ["fit", "-m", "m.json"],
        ["tail"],
    ])
    def test_rejected(self, argv):
        with pytest.raises(SystemExit) as err:
            build_parser().parse_args(argv)
        assert err.value.code == 2

    @pytest.mark.cli
    @pytest.mark.parametrize("options", [
        {"grid": (10.0, 1.0, 4)},
        {"grid": (1.0, 10.0, 0)},
        {"x": -1.0},
        {"fmt": "xml"},
        {"count": 0},
    ])
    def test_invalid_run_config(self, options):
        with pytest.raises(DomainError):
            RunConfig(command="tail", model_path="m.json", **options)

    @pytest.mark.cli
    def test_grid_points(self):
        config = RunConfig(command="tail", model_path="m.json", grid=(1.0, 100.0, 2))
        assert len(config.xs) == 5
        assert list(RunConfig(command="tail", model_path="m.json", x=3.0).xs) == [3.0]


class TestSettingsLayers:
    @pytest.mark.cli
    def test_model_policy_then_flags(self, write_model):
        path = write_model({**EXP_EXP, "policy": {"quadrature": {"tolerance": 1e-9}, "diagnostics": {"run": 3}}})
        config = RunConfig(command="tail", model_path=path, overrides={"diagnostics": {"run": 6}}, threads=2)
        model = _resolve(config)
        assert model.settings.quadrature.tolerance == 1e-9
        assert model.settings.diagnostics.run == 6
        assert model.settings.threads == 2

    @pytest.mark.cli
    def test_bad_threads(self, write_model):
        with pytest.raises(DomainError):
            _resolve(RunConfig(command="tail", model_path=write_model(EXP_EXP), threads=0))


class TestCommands:
    @pytest.mark.cli
    def test_tail_at_one(self, write_model):
        rows = csv_rows(execute("tail", write_model(EXP_EXP), x=1.0))
        assert rows[0]["x"] == "1.0"
        assert float(rows[0]["tail"]) == pytest.approx(2.0 * special.k1(2.0), rel=1e-8)

    @pytest.mark.cli
    def test_ph_only_tail_and_pdf(self, write_model):
        path = write_model(EXP)
        rows = csv_rows(execute("tail", path, grid=(0.1, 10.0, 2)))
        assert len(rows) == 5
        for row in rows:
            assert float(row["tail"]) == pytest.approx(math.exp(-float(row["x"])), rel=1e-10)
        rows = csv_rows(execute("pdf", path, x=2.0))
        assert float(rows[0]["pdf"]) == pytest.approx(math.exp(-2.0), rel=1e-10)

    @pytest.mark.cli
    def test_mixture_pdf(self, write_model):
        rows = csv_rows(execute("pdf", write_model(EXP_EXP), x=4.0))
        assert float(rows[0]["pdf"]) == pytest.approx(2.0 * special.k0(4.0), rel=1e-6)

    @pytest.mark.cli
    def test_moments(self, write_model):
        records = json.loads(execute("moments", write_model(EXP_PARETO), order=3, fmt="json"))
        assert records[0] == {"order": 1, "moment": pytest.approx(2.5 / 1.5)}
        assert records[2]["moment"] == "inf"
        rows = csv_rows(execute("moments", write_model(EXP), order=2))
        assert [float(r["moment"]) for r in rows] == pytest.approx([1.0, 2.0])

    @pytest.mark.cli
    def test_sample_is_seeded(self, write_model):
        path = write_model(EXP_GEOMETRIC)
        first = execute("sample", path, seed=11, count=50)
        assert first == execute("sample", path, seed=11, count=50)
        assert first != execute("sample", path, seed=12, count=50)
        assert len(csv_rows(first)) == 50

    @pytest.mark.cli
    def test_asymptote(self, write_model):
        rows = {r["constant"]: r["value"] for r in csv_rows(execute("asymptote", write_model(EXP_PARETO)))}
        assert rows["kind"] == "pareto_exact"
        assert rows["calibrated"] == "false"
        assert float(rows["C"]) == pytest.approx(special.gamma(3.5))

    @pytest.mark.cli
    def test_asymptote_needs_closed_form(self, write_model):
        path = write_model({"ph": EXP, "scaler": {"family": "weibull", "scale": 1.0, "shape": 0.5}})
        with pytest.raises(DomainError):
            execute("asymptote", path)

    @pytest.mark.cli
    def test_asymptote_needs_scaler(self, write_model):
        with pytest.raises(ModelFormatError):
            execute("asymptote", write_model(EXP))

    @pytest.mark.cli
    def test_mda_summary(self, write_model):
        rows = {r["field"]: r["value"] for r in csv_rows(execute("mda", write_model(EXP_PARETO)))}
        assert rows["mda"] == "Frechet(2.5)"
        assert rows["tail_class"] == "heavy"
        assert "c_n (n=100)" in rows

    @pytest.mark.cli
    def test_compare(self, write_model):
        rows = csv_rows(execute("compare", write_model(EXP_EXP), grid=(10.0, 1000.0, 1)))
        assert [float(r["x"]) for r in rows] == pytest.approx([10.0, 100.0, 1000.0])
        for row in rows:
            assert float(row["ratio"]) == pytest.approx(1.0, rel=1e-6)

    @pytest.mark.cli
    def test_compare_input_needs_tail_column(self, write_model, tmp_path):
        table = tmp_path / "pdf.csv"
        table.write_text("x,pdf\n1.0,0.5\n")
        with pytest.raises(ModelFormatError):
            execute("compare", write_model(EXP_EXP), input_path=str(table))

    @pytest.mark.cli
    def test_series_bounds(self, write_model):
        rows = csv_rows(execute("series-bounds", write_model(EXP_GEOMETRIC), grid=(10.0, 1000.0, 1)))
        assert len(rows) == 3
        for row in rows:
            assert float(row["lower"]) <= float(row["integral"]) <= float(row["upper"])

    @pytest.mark.cli
    def test_series_bounds_need_infinite_discrete(self, write_model):
        with pytest.raises(DomainError):
            execute("series-bounds", write_model(EXP_PARETO), x=10.0)


class TestMain:
    @pytest.mark.cli
    def test_success(self, write_model, capsys):
        assert main(["tail", "-m", write_model(EXP_EXP), "--x", "1", "-q"]) == 0
        out = capsys.readouterr().out
        assert out.startswith("x,tail\n")

    @pytest.mark.cli
    def test_validation_error_exit(self, write_model, capsys):
        path = write_model({"beta": [1.0, 0.0], "lambda": [[-1.0, 0.0], [0.0, 1.0]]})
        assert main(["tail", "-m", path, "--x", "1"]) == 2
        err = capsys.readouterr().err
        assert "phasemix: NotSubIntensity:" in err

    @pytest.mark.cli
    def test_missing_model_exit(self, tmp_path, capsys):
        assert main(["tail", "-m", str(tmp_path / "absent.json")]) == 2
        assert "ModelFormatError" in capsys.readouterr().err

    @pytest.mark.cli
    def test_log_file(self, write_model, tmp_path, capsys):
        log = tmp_path / "run.log"
        assert main(["moments", "-m", write_model(EXP), "--log-file", str(log)]) == 0
        assert "moments finished" in log.read_text()
