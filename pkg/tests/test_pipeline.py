"""
流水线：阶段产物、确定性、分阶段组合、退出码和报告结构
"""

import json
from pathlib import Path

import pandas as pd
import pytest

from conftest import small_config_data
from lightqrng.application.dto.run_report import ReportDocument
from lightqrng.application.services.pipeline_service import (
    STAGES,
    PipelineService,
    load_run_report,
    run_pipeline,
)
from lightqrng.config.settings import build_config, load_config
from lightqrng.domain.exceptions import PipelineStageError, QuantizerMismatchError
from lightqrng.interfaces.cli.main import read_schema

ARTIFACTS = (
    "lo_off.raw",
    "lo_on.raw",
    "simulation.json",
    "entropy.json",
    "extracted.bin",
    "extraction.json",
    "battery.json",
    "report.json",
    "timings.json",
)

CONFIG_DIR = Path(__file__).resolve().parent.parent / "configs"


def config_with(**sections):
    return build_config(small_config_data(**sections))


@pytest.fixture
def quiet_config():
    """不运行统计检验的配置，退出码只取决于认证"""
    return config_with(battery={"enabled": False})


def read_json(path):
    return json.loads(path.read_text(encoding="utf-8"))


class TestRun:
    def test_artifacts(self, small_config, tmp_path):
        report = run_pipeline(small_config)
        run_dir = tmp_path / "run"
        for name in ARTIFACTS:
            assert (run_dir / name).is_file(), name
        assert report.exit_code in (0, 5)
        assert set(STAGES) <= set(report.timings)
        assert set(read_json(run_dir / "timings.json")) == set(report.timings)
        assert "timings" not in read_json(run_dir / "report.json")

    def test_certified_within_budget(self, quiet_config, tmp_path):
        report = run_pipeline(quiet_config, tmp_path)
        extraction = report.document["extraction"]
        assert report.exit_code == 0
        assert extraction["certified_bits"] == min(
            extraction["block_output_bits"], extraction["budget"]
        )
        assert extraction["certified_bits"] == (20_000 * 8 // 900) * 200
        assert extraction["budget"] == report.document["entropy"]["extractable_length"]
        assert report.document["status"] == {
            "certified": True,
            "battery_passed": None,
            "exit_code": 0,
        }
        assert "statistical battery disabled" in report.warnings

    def test_budget_truncates_output(self, tmp_path):
        config = config_with(battery={"enabled": False}, entropy={"sup_jf": 32})
        report = run_pipeline(config, tmp_path)
        extraction = report.document["extraction"]
        assert 0 < extraction["budget"] < extraction["block_output_bits"]
        assert extraction["certified_bits"] == extraction["budget"]
        assert report.document["entropy"]["adc_penalty"] == pytest.approx(5.0)

    def test_deterministic_across_run_dirs(self, quiet_config, tmp_path):
        run_pipeline(quiet_config, tmp_path / "a")
        run_pipeline(quiet_config, tmp_path / "b")
        for name in ("lo_off.raw", "lo_on.raw", "extracted.bin", "entropy.json", "report.json"):
            assert (tmp_path / "a" / name).read_bytes() == (tmp_path / "b" / name).read_bytes()

    def test_seed_changes_output(self, tmp_path):
        run_pipeline(config_with(battery={"enabled": False}), tmp_path / "a")
        run_pipeline(
            config_with(battery={"enabled": False}, sessions={"seed": 4321}), tmp_path / "b"
        )
        assert (tmp_path / "a" / "lo_on.raw").read_bytes() != (tmp_path / "b" / "lo_on.raw").read_bytes()

    def test_stages_compose_to_run(self, small_config, tmp_path):
        run_pipeline(small_config, tmp_path / "whole")
        service = PipelineService(small_config, tmp_path / "staged")
        service.simulate()
        service.certify()
        service.extract()
        service.test()
        service.report()
        for name in ("extracted.bin", "battery.json", "report.json"):
            assert (tmp_path / "whole" / name).read_bytes() == (tmp_path / "staged" / name).read_bytes()

    def test_report_is_idempotent(self, quiet_config, tmp_path):
        run_pipeline(quiet_config, tmp_path)
        first = (tmp_path / "report.json").read_bytes()
        PipelineService(quiet_config, tmp_path).report()
        assert (tmp_path / "report.json").read_bytes() == first

    def test_load_run_report(self, quiet_config, tmp_path):
        report = run_pipeline(quiet_config, tmp_path)
        loaded = load_run_report(quiet_config, tmp_path)
        assert loaded.document == read_json(tmp_path / "report.json")
        assert loaded.certified_bits == report.certified_bits
        assert set(loaded.timings) == set(report.timings)

    def test_hex_copy(self, tmp_path):
        config = config_with(battery={"enabled": False}, extractor={"hex_output": True})
        run_pipeline(config, tmp_path)
        data = (tmp_path / "extracted.bin").read_bytes()
        assert (tmp_path / "extracted.hex").read_text().strip()
        assert data[:4] == b"QBIT"


class TestExitCodes:
    def test_classical_share_leaves_nothing_certified(self, tmp_path):
        # 经典分量吃掉全部香农熵，H_q 截断为 0
        config = config_with(entropy={"imbalance_entropy": 16.0})
        report = run_pipeline(config, tmp_path)
        assert report.exit_code == 4
        assert report.certified_bits == 0
        assert report.document["battery"] is None
        assert report.document["status"]["certified"] is False
        assert report.document["entropy"]["shannon_quantum"] == 0.0
        assert "no certified bits; statistical battery not run" in report.warnings

    def test_battery_failure(self, tmp_path):
        # α 接近 1 时几乎必有检验失败
        config = config_with(battery={"alpha": 0.999})
        report = run_pipeline(config, tmp_path)
        assert report.exit_code == 5
        assert report.document["status"]["battery_passed"] is False
        assert report.document["battery"]["results"]

    def test_missing_raw_files(self, quiet_config, tmp_path):
        with pytest.raises(PipelineStageError) as info:
            PipelineService(quiet_config, tmp_path).certify()
        assert info.value.stage == "acquisition"
        assert info.value.exit_code == 3

    def test_extract_needs_entropy_report(self, quiet_config, tmp_path):
        service = PipelineService(quiet_config, tmp_path)
        service.simulate()
        with pytest.raises(PipelineStageError) as info:
            service.extract()
        assert info.value.stage == "extract"
        assert info.value.exit_code == 1

    def test_entropy_report_missing_field(self, quiet_config, tmp_path):
        service = PipelineService(quiet_config, tmp_path)
        service.simulate()
        service.certify()
        path = tmp_path / "entropy.json"
        data = read_json(path)
        del data["extractable_length"]
        path.write_text(json.dumps(data))
        with pytest.raises(PipelineStageError, match="extractable_length"):
            service.extract()

    def test_quantizer_mismatch(self, quiet_config, tmp_path):
        PipelineService(quiet_config, tmp_path).simulate()
        other = config_with(battery={"enabled": False}, quantizer={"bits": 10})
        with pytest.raises(PipelineStageError) as info:
            PipelineService(other, tmp_path).certify()
        assert isinstance(info.value.cause, QuantizerMismatchError)
        assert info.value.stage == "config"
        assert info.value.exit_code == 2

    def test_bad_seed_file_is_config_error(self, tmp_path):
        config = config_with(
            battery={"enabled": False},
            extractor={"seed_source": "file", "seed_file": str(tmp_path / "missing.bin")},
        )
        with pytest.raises(PipelineStageError) as info:
            run_pipeline(config, tmp_path / "run")
        assert info.value.exit_code == 2


class TestCalibratedRun:
    @pytest.mark.slow
    def test_certified_bits_follow_budget(self, tmp_path):
        config = load_config(
            CONFIG_DIR / "calibrated_12bit.toml",
            overrides=[
                "sessions.sample_count=1000000",
                "sessions.sweep.enabled=false",
                "battery.enabled=false",
                "plots.enabled=false",
            ],
        )
        report = run_pipeline(config, tmp_path / "run")
        extraction = report.document["extraction"]
        assert extraction["input_len"] == 900
        assert extraction["output_len"] == 200
        assert extraction["certified_bits"] == min(
            extraction["block_output_bits"], extraction["budget"]
        )
        assert extraction["certified_bits"] > 0
        assert "realized_ratio" in extraction
        assert extraction["reference_ratio"] == pytest.approx(0.0195)
        assert report.certified_bits == extraction["certified_bits"]


class TestSweepAndPlots:
    def test_sweep_csv(self, tmp_path):
        config = config_with(
            battery={"enabled": False},
            sessions={"sweep": {"enabled": True, "gains": [0.5, 1.0, 1.5]}},
        )
        report = run_pipeline(config, tmp_path)
        frame = pd.read_csv(tmp_path / "sweep.csv")
        assert frame["gain"].tolist() == [0.5, 1.0, 1.5]
        assert frame["variance"].is_monotonic_increasing
        sweep = report.document["simulation"]["sweep"]
        assert sweep["slope"] == pytest.approx(1.0, rel=0.1)

    def test_plots(self, tmp_path):
        config = config_with(battery={"enabled": False}, plots={"enabled": True})
        run_pipeline(config, tmp_path)
        names = sorted(p.name for p in (tmp_path / "plots").iterdir())
        assert names == ["adc_penalty.png", "distributions.png", "min_entropy_vs_n.png"]

    def test_p_value_plot(self, small_config, tmp_path):
        service = PipelineService(small_config, tmp_path)
        service.run()
        paths = service.plot()
        assert tmp_path / "plots" / "p_values.png" in paths
        assert all(p.read_bytes()[:4] == b"\x89PNG" for p in paths)


class TestReportSchema:
    def test_schema_matches_document_model(self):
        schema = json.loads(read_schema())
        assert set(schema["required"]) == set(ReportDocument.model_fields)
        assert set(schema["properties"]) == set(ReportDocument.model_fields)
        assert schema["properties"]["schema_version"]["const"] == "report_v1"

    def test_report_validates(self, quiet_config, tmp_path):
        report = run_pipeline(quiet_config, tmp_path)
        document = ReportDocument.model_validate(report.document)
        assert document.schema_version == "report_v1"
        assert "run_dir" not in report.document["config"]["output"]
