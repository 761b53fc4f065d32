"""Pipeline tests: config parsing, stage logic, reports, determinism."""

from __future__ import annotations

import dataclasses
import json
import warnings
from importlib import resources
from pathlib import Path

import numpy as np
import pytest

from ardlkit.ardl import CointVerdict
from ardlkit.diagnostics import CusumResult
from ardlkit.errors import ConfigError, I2Error, NoCointegrationError, PipelineError
from ardlkit.pipeline import (
    PipelineConfig,
    emit_cusum_plot,
    load_config,
    render_report,
    report_to_dict,
    run_pipeline,
    significance_stars,
)


def reference_config() -> PipelineConfig:
    with resources.as_file(
        resources.files("ardlkit.data").joinpath("reference_config.toml")
    ) as p:
        return load_config(p)


def write_csv(path: Path, names, cols, start=1379) -> Path:
    with path.open("w") as fh:
        fh.write("year," + ",".join(names) + "\n")
        for i in range(len(cols[0])):
            fh.write(str(start + i) + "," + ",".join(repr(float(c[i])) for c in cols) + "\n")
    return path


class TestStars:
    @pytest.mark.parametrize(
        "pvalue, stars",
        [(0.0050, "***"), (0.0505, "*"), (0.0676, "*"), (0.04, "**"), (0.2, ""), (0.0999, "*")],
    )
    def test_convention(self, pvalue, stars):
        assert significance_stars(pvalue) == stars


class TestConfig:
    def test_reference_config_loads(self):
        cfg = reference_config()
        assert cfg.dependent == "Y"
        assert cfg.regressors == ("RD", "K", "L")
        assert Path(cfg.data).exists()

    def test_unknown_key_is_error(self, tmp_path):
        p = tmp_path / "bad.toml"
        p.write_text('dependent = "Y"\nregressors = ["X"]\nfrobnicate = 1\n')
        with pytest.raises(ConfigError, match="frobnicate"):
            load_config(p)

    def test_missing_roles(self, tmp_path):
        p = tmp_path / "bad.toml"
        p.write_text('dependent = "Y"\nregressors = []\n')
        with pytest.raises(ConfigError):
            load_config(p)

    def test_dependent_not_regressor(self):
        with pytest.raises(ConfigError):
            PipelineConfig(dependent="Y", regressors=("Y",))

    def test_unknown_adf_variable(self, tmp_path, rng):
        data = write_csv(
            tmp_path / "d.csv", ["Y", "X"], [np.exp(rng.normal(size=30) / 10 + 3)] * 2
        )
        cfg = PipelineConfig(
            dependent="Y",
            regressors=("X",),
            data=str(data),
            adf_deterministic={"NOPE": "c"},
        )
        with pytest.raises(ConfigError, match="NOPE"):
            run_pipeline(cfg)


class TestRunPipeline:
    def test_reference_run_completes(self):
        with warnings.catch_warnings():
            warnings.simplefilter("ignore")
            report = run_pipeline(reference_config())
        assert report.bounds.verdict is CointVerdict.COINTEGRATED
        assert report.long_run is not None and report.ecm is not None
        assert len(report.diagnostics) == 3
        assert len(report.unit_root) == 4
        assert report.cusum.path.size > 0
        assert report.provenance["schema_version"] == 1
        assert "data_sha256" in report.provenance

    def test_byte_identical_json(self):
        with warnings.catch_warnings():
            warnings.simplefilter("ignore")
            a = render_report(run_pipeline(reference_config()), "json")
            b = render_report(run_pipeline(reference_config()), "json")
        assert a.encode() == b.encode()

    def test_json_roundtrip_exact(self):
        with warnings.catch_warnings():
            warnings.simplefilter("ignore")
            report = run_pipeline(reference_config())
        doc = json.loads(render_report(report, "json"))
        assert doc["bounds"]["fstat"] == report.bounds.fstat
        assert doc["ecm"]["coef"] == report.ecm.lam
        assert doc["long_run"]["coefficients"][0]["coef"] == float(report.long_run.theta[0])
        assert doc["cusum"]["path"] == [float(v) for v in report.cusum.path]

    def test_text_sections(self):
        with warnings.catch_warnings():
            warnings.simplefilter("ignore")
            text = render_report(run_pipeline(reference_config()), "text")
        for heading in (
            "1. Unit-root pretests (levels)",
            "2. Unit-root pretests (first differences)",
            "3. Bounds cointegration test",
            "4. Residual diagnostics",
            "5. Long-run coefficients",
            "6. Error-correction model",
            "CUSUM coefficient stability",
        ):
            assert heading in text
        assert "F = 11.444651 > upper bound 4.84 at 1%" in text

    def test_i2_variable_aborts(self, tmp_path):
        rng = np.random.Generator(np.random.Philox(key=0))
        T = 30
        ly = np.cumsum(np.cumsum(rng.normal(0, 0.5, T)))
        lx = np.cumsum(rng.normal(0, 0.5, T))
        data = write_csv(tmp_path / "i2.csv", ["Y", "X"], [np.exp(ly / 5), np.exp(lx)])
        cfg = PipelineConfig(dependent="Y", regressors=("X",), data=str(data))
        with warnings.catch_warnings():
            warnings.simplefilter("ignore")
            with pytest.raises(I2Error, match="LY"):
                run_pipeline(cfg)

    def _independent_walks(self, tmp_path, key):
        rng = np.random.Generator(np.random.Philox(key=key))
        T = 40
        ly = np.cumsum(rng.normal(0, 0.2, T)) + 5
        lx = np.cumsum(rng.normal(0, 0.2, T)) + 3
        return write_csv(tmp_path / f"w{key}.csv", ["Y", "X"], [np.exp(ly), np.exp(lx)])

    def test_no_cointegration_blocks_long_run(self, tmp_path):
        data = self._independent_walks(tmp_path, 1001)
        cfg = PipelineConfig(
            dependent="Y", regressors=("X",), data=str(data), ardl_order=(1, 0)
        )
        with warnings.catch_warnings():
            warnings.simplefilter("ignore")
            with pytest.raises(NoCointegrationError):
                run_pipeline(cfg)
            report = run_pipeline(dataclasses.replace(cfg, long_run_output=False))
        assert report.bounds.verdict is CointVerdict.NOT_COINTEGRATED
        assert report.long_run is None and report.ecm is None

    def test_inconclusive_requires_override(self, tmp_path):
        data = self._independent_walks(tmp_path, 1000)
        cfg = PipelineConfig(
            dependent="Y", regressors=("X",), data=str(data), ardl_order=(1, 0)
        )
        with warnings.catch_warnings():
            warnings.simplefilter("ignore")
            report = run_pipeline(cfg)
            assert report.bounds.verdict is CointVerdict.INCONCLUSIVE
            assert report.long_run is None
            assert any("inconclusive" in n for n in report.notes)
            forced = run_pipeline(dataclasses.replace(cfg, inconclusive_override=True))
        assert forced.long_run is not None

    def test_stage_label_on_ingest_failure(self, tmp_path):
        cfg = PipelineConfig(
            dependent="Y", regressors=("X",), data=str(tmp_path / "missing.csv")
        )
        with pytest.raises(PipelineError, match=r"\[ingest\]") as err:
            run_pipeline(cfg)
        assert err.value.stage == "ingest"

    def test_config_echo_in_provenance(self):
        with warnings.catch_warnings():
            warnings.simplefilter("ignore")
            report = run_pipeline(reference_config())
        echo = report.provenance["config"]
        assert echo["dependent"] == "Y"
        assert echo["regressors"] == ["RD", "K", "L"]
        assert echo["seed"] == 20230415


class TestCusumArtifacts:
    def test_csv_and_svg(self, tmp_path):
        with warnings.catch_warnings():
            warnings.simplefilter("ignore")
            report = run_pipeline(reference_config())
        csv_path, svg_path = emit_cusum_plot(report.cusum, tmp_path / "cusum")
        lines = csv_path.read_text().strip().splitlines()
        assert lines[0] == "period,path,lower,upper,crossed"
        assert len(lines) - 1 == len(report.cusum.path)
        first = lines[1].split(",")
        assert int(first[0]) == report.cusum.start_period
        assert float(first[1]) == pytest.approx(report.cusum.path[0])
        svg = svg_path.read_text()
        assert svg.startswith("<svg") and "polyline" in svg

    def test_crossing_flag(self, tmp_path):
        path = np.array([0.0, 5.0, 9.0])
        upper = np.array([4.0, 5.5, 7.0])
        res = CusumResult(
            path=path,
            upper=upper,
            lower=-upper,
            stable=False,
            level=0.05,
            sigma=1.0,
            start_period=1390,
        )
        csv_path, _ = emit_cusum_plot(res, tmp_path / "c")
        rows = [line.split(",") for line in csv_path.read_text().strip().splitlines()[1:]]
        assert [r[4] for r in rows] == ["0", "0", "1"]

    def test_zero_path_plot(self, tmp_path):
        res = CusumResult(
            path=np.zeros(5),
            upper=np.linspace(3, 5, 5),
            lower=-np.linspace(3, 5, 5),
            stable=True,
            level=0.05,
            sigma=0.0,
            start_period=1385,
        )
        csv_path, svg_path = emit_cusum_plot(res, tmp_path / "z")
        assert svg_path.exists()
        assert len(csv_path.read_text().strip().splitlines()) == 6


class TestReportDict:
    def test_schema_top_level(self):
        with warnings.catch_warnings():
            warnings.simplefilter("ignore")
            doc = report_to_dict(run_pipeline(reference_config()))
        assert set(doc) == {
            "schema_version",
            "provenance",
            "unit_root",
            "ardl",
            "bounds",
            "diagnostics",
            "long_run",
            "ecm",
            "cusum",
            "notes",
        }
        assert doc["schema_version"] == 1
        assert doc["bounds"]["bounds"]["0.01"] == [3.42, 4.84]
