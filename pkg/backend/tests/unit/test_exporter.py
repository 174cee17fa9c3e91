# File: backend/tests/unit/test_exporter.py
# Purpose: CSV/JSON rendering with provenance headers and file output
import io
import json

from app.api.schemas.sweep import SweepResult
from app.config import APP_VERSION
from app.services.result_exporter import ResultExporter


def _result() -> SweepResult:
    return SweepResult(
        kind="jitter",
        columns=["sigma_pct", "protocol", "mean_fidelity"],
        rows=[
            {"sigma_pct": 0.0, "protocol": "ghz3", "mean_fidelity": 1.0},
            {"sigma_pct": 5.0, "protocol": "ghz3", "mean_fidelity": 0.1 + 0.2},
        ],
        summary={"note": "x"},
        seed=7,
    )


class TestCsv:
    def test_header_then_table(self, run_config):
        text = ResultExporter(run_config, "jitter --protocol ghz3").to_csv(_result())
        lines = text.splitlines()
        assert lines[0] == f"# tool: bimodal-sim {APP_VERSION}"
        assert lines[1] == "# command: jitter --protocol ghz3"
        assert lines[2].startswith("# config: {")
        assert json.loads(lines[2][len("# config: ") :])["seed"] == 7
        assert lines[3] == "# seed: 7"
        assert lines[4].startswith("# units: ")
        assert lines[5] == '# summary: {"note":"x"}'
        assert lines[6] == "sigma_pct,protocol,mean_fidelity"
        assert lines[7] == "0,ghz3,1"
        # full round-trip precision
        assert lines[8] == "5,ghz3,0.30000000000000004"

    def test_unix_line_endings(self, run_config):
        assert "\r" not in ResultExporter(run_config, "cmd").to_csv(_result())

    def test_deterministic(self, run_config):
        exporter = ResultExporter(run_config, "cmd")
        assert exporter.to_csv(_result()) == exporter.to_csv(_result())


class TestJson:
    def test_payload(self, run_config):
        payload = json.loads(ResultExporter(run_config, "cmd").to_json(_result()))
        assert payload["columns"] == ["sigma_pct", "protocol", "mean_fidelity"]
        assert payload["rows"][1]["mean_fidelity"] == 0.1 + 0.2
        assert payload["header"]["seed"] == 7
        assert payload["header"]["config"]["reps"] == 20

    def test_render_follows_config(self, run_config):
        exporter = ResultExporter(run_config.model_copy(update={"format": "json"}), "cmd")
        assert exporter.render(_result()).startswith("{")
        assert exporter.render(_result(), "csv").startswith("# tool")

    def test_seed_falls_back_to_config(self, run_config):
        result = SweepResult(kind="positions", columns=["a"], rows=[{"a": 1}])
        assert ResultExporter(run_config, "cmd").header(result)["seed"] == 7


class TestWrite:
    def test_stream_without_path(self, run_config):
        stream = io.StringIO()
        ResultExporter(run_config, "cmd").write(_result(), stream)
        assert stream.getvalue().startswith("# tool")

    def test_file_output(self, run_config, tmp_path):
        stream = io.StringIO()
        target = tmp_path / "nested" / "out.csv"
        ResultExporter(run_config, "cmd").write(_result(), stream, out=str(target))
        assert stream.getvalue() == ""
        assert target.read_bytes().decode("utf-8").splitlines()[6] == "sigma_pct,protocol,mean_fidelity"
