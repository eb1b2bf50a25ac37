"""Declarative experiment configs, the simulate-estimate-compare runner,
and suite aggregation with per-row error capture."""

import json
import math
import os

import pytest

from packdim import ConfigError, ScaleUnrepresentableError
from packdim.experiment import ExperimentConfig, run_experiment, run_suite

MINIMAL = {"name": "t", "alpha": 0.5, "d": 1, "seed": 1}

GRAPH_LINE = {
    "name": "graph-line",
    "alpha": 0.5,
    "d": 1,
    "seed": 7,
    "set": {"kind": "interval"},
    "resolution": 2048,
    "grid": {"j_min": 3, "j_max": 7},
    "replicas": 2,
    "mode": "graph",
    "method": "regression",
    "tolerance": 0.35,
}

THIRDS_IMAGE = {
    "name": "thirds-image",
    "alpha": 0.3,
    "d": 1,
    "seed": 3,
    "set": {"kind": "cantor", "branches": 2, "ratio": 1.0 / 3.0, "level": 7},
    "grid": {"j_min": 2, "j_max": 5},
    "replicas": 2,
    "mode": "image",
    "tolerance": 0.3,
}


class TestConfigParsing:
    def test_defaults(self):
        cfg = ExperimentConfig.from_dict(MINIMAL)
        assert cfg.n == 1
        assert cfg.set_spec == {"kind": "interval"}
        assert cfg.drift is None
        assert cfg.resolution == 4096
        assert cfg.grid == {"j_min": 4, "j_max": 9, "base": 2.0}
        assert cfg.replicas == 1
        assert cfg.mode == "image"
        assert cfg.method == "regression"
        assert cfg.box_method == "regression"
        assert cfg.tolerance == 0.25

    def test_box_method_follows_method(self):
        cfg = ExperimentConfig.from_dict({**MINIMAL, "method": "tail-max"})
        assert cfg.box_method == "tail-max"
        cfg2 = ExperimentConfig.from_dict(
            {**MINIMAL, "method": "tail-max", "box_method": "regression"}
        )
        assert cfg2.box_method == "regression"

    def test_unknown_key(self):
        with pytest.raises(ConfigError, match="unknown config keys"):
            ExperimentConfig.from_dict({**MINIMAL, "alfa": 0.5})

    def test_missing_required_key(self):
        for key in ("name", "alpha", "d", "seed"):
            raw = {k: v for k, v in MINIMAL.items() if k != key}
            with pytest.raises(ConfigError, match=key):
                ExperimentConfig.from_dict(raw)

    def test_rejects_bad_values(self):
        bad = [
            {"alpha": 1.5},
            {"replicas": 0},
            {"mode": "shadow"},
            {"method": "chord"},
            {"box_method": "chord"},
            {"tolerance": 0.0},
            {"resolution": 2**15},
            {"name": "a,b"},
            {"grid": {"j_min": 4, "j_max": 9, "octaves": 3}},
            {"grid": {"j_min": 4, "j_max": 5}},
            {"set": {"kind": "carpet"}},
            {"drift": {"kind": "constant"}},
            {"drift": {"kind": "spiral"}},
        ]
        for patch in bad:
            with pytest.raises(ConfigError):
                ExperimentConfig.from_dict({**MINIMAL, **patch})

    def test_graph_mode_needs_line_domain(self):
        with pytest.raises(ConfigError):
            ExperimentConfig.from_dict({**MINIMAL, "mode": "graph", "n": 2})

    def test_cantor_lives_on_the_line(self):
        with pytest.raises(ConfigError):
            ExperimentConfig.from_dict(
                {
                    **MINIMAL,
                    "n": 2,
                    "set": {"kind": "cantor", "branches": 2, "ratio": 0.3, "level": 4},
                }
            )

    def test_set_parameters_checked_at_build_time(self):
        # kind membership is a parse-time check; per-kind parameters are
        # read when the set is built
        cfg = ExperimentConfig.from_dict(
            {**MINIMAL, "set": {"kind": "cantor", "branches": 2, "ratio": 0.3}}
        )
        with pytest.raises(ConfigError, match="level"):
            run_experiment(cfg)


class TestConfigHash:
    def test_stable_across_instances(self):
        a = ExperimentConfig.from_dict(GRAPH_LINE)
        b = ExperimentConfig.from_dict(GRAPH_LINE)
        assert a.config_hash() == b.config_hash()
        assert len(a.config_hash()) == 12

    def test_any_field_changes_the_hash(self):
        base = ExperimentConfig.from_dict(GRAPH_LINE).config_hash()
        for patch in ({"seed": 8}, {"tolerance": 0.36}, {"name": "other"}):
            other = ExperimentConfig.from_dict({**GRAPH_LINE, **patch})
            assert other.config_hash() != base

    def test_round_trip_preserves_hash(self, tmp_path):
        cfg = ExperimentConfig.from_dict(GRAPH_LINE)
        path = tmp_path / "cfg.json"
        cfg.to_json(str(path))
        again = ExperimentConfig.from_json(str(path))
        assert again == cfg
        assert again.config_hash() == cfg.config_hash()


class TestRunExperiment:
    def test_graph_line(self):
        rep = run_experiment(ExperimentConfig.from_dict(GRAPH_LINE))
        assert rep.predicted["dimension"] == pytest.approx(1.5, rel=1e-15)
        assert rep.estimated["box"]["value"] == pytest.approx(
            1.3642680850771165, rel=1e-12
        )
        assert rep.estimated["kernel"]["value"] == pytest.approx(
            1.4178713340471425, rel=1e-12
        )
        assert rep.passed

    def test_graph_floor_reported(self):
        cfg = ExperimentConfig.from_dict(
            {**THIRDS_IMAGE, "name": "thirds-graph", "mode": "graph", "tolerance": 2.0}
        )
        rep = run_experiment(cfg)
        assert "graph_floor" in rep.predicted
        assert rep.predicted["graph_floor"] <= rep.predicted["dimension"] + 1e-12

    def test_critical_regime(self):
        # alpha d = 1: the box count carries a log-correction, so the
        # limsup readers sit visibly below 2 at any workable resolution and
        # the config declares the wider tolerance that honesty costs
        cfg = ExperimentConfig.from_dict(
            {
                "name": "image-critical",
                "alpha": 0.5,
                "d": 2,
                "seed": 6,
                "set": {"kind": "interval"},
                "resolution": 4096,
                "grid": {"j_min": 3, "j_max": 8},
                "replicas": 2,
                "mode": "image",
                "method": "tail-max",
                "box_method": "tail-max",
                "tolerance": 0.6,
            }
        )
        rep = run_experiment(cfg)
        assert rep.predicted["dimension"] == 2.0
        assert rep.estimated["box"]["value"] == pytest.approx(
            1.7869098992762666, rel=1e-12
        )
        assert rep.estimated["kernel"]["value"] == pytest.approx(
            1.4547682833196813, rel=1e-12
        )
        assert rep.passed

    def test_threads_do_not_change_values(self):
        cfg = ExperimentConfig.from_dict(THIRDS_IMAGE)
        solo = run_experiment(cfg, threads=1)
        pooled = run_experiment(cfg, threads=3)
        assert solo.estimated["box"]["replicas_values"] == (
            pooled.estimated["box"]["replicas_values"]
        )
        assert solo.to_dict() == pooled.to_dict()

    def test_output_files_are_byte_deterministic(self, tmp_path):
        cfg = ExperimentConfig.from_dict(THIRDS_IMAGE)
        d1, d2 = tmp_path / "a", tmp_path / "b"
        run_experiment(cfg, out_dir=str(d1))
        run_experiment(cfg, out_dir=str(d2))
        for ext in ("csv", "json"):
            f1 = (d1 / f"thirds-image.{ext}").read_bytes()
            f2 = (d2 / f"thirds-image.{ext}").read_bytes()
            assert f1 == f2
            assert cfg.config_hash().encode() in f1

    def test_json_report_is_auditable(self, tmp_path):
        cfg = ExperimentConfig.from_dict(THIRDS_IMAGE)
        run_experiment(cfg, out_dir=str(tmp_path))
        payload = json.loads((tmp_path / "thirds-image.json").read_text())
        assert payload["config_hash"] == cfg.config_hash()
        assert payload["estimated"]["box"]["seed"] == cfg.seed
        assert payload["estimated"]["box"]["method"] == "regression"
        assert payload["pass"] is True

    def test_stage_labelled_errors(self):
        # an unrepresentable txset level fails in the set-building stage
        cfg = ExperimentConfig.from_dict(
            {
                **MINIMAL,
                "name": "too-deep",
                "set": {"kind": "txset", "beta": 0.5, "level": 3},
                "grid": {"j_min": 2, "j_max": 5},
            }
        )
        with pytest.raises(ScaleUnrepresentableError):
            run_experiment(cfg)


class TestRunSuite:
    def write_config(self, directory, payload):
        path = os.path.join(str(directory), f"{payload['name']}.json")
        with open(path, "w", encoding="utf-8") as fh:
            json.dump(payload, fh, indent=2, sort_keys=True)
        return path

    def test_suite_with_error_row(self, tmp_path):
        self.write_config(tmp_path, THIRDS_IMAGE)
        self.write_config(
            tmp_path,
            {
                **MINIMAL,
                "name": "unbuildable",
                "set": {"kind": "txset", "beta": 0.5, "level": 3},
                "grid": {"j_min": 2, "j_max": 5},
            },
        )
        rows = run_suite(str(tmp_path))
        assert len(rows) == 2
        by_name = {r["name"]: r for r in rows}
        assert by_name["thirds-image"]["pass"] is True
        assert by_name["unbuildable"]["pass"] == "error:ScaleUnrepresentableError"
        assert math.isnan(by_name["unbuildable"]["gap"])
        summary = (tmp_path / "summary.csv").read_text()
        assert "name,predicted,estimate_box,estimate_kernel,gap,pass" in summary
        assert "error:ScaleUnrepresentableError" in summary

    def test_summary_is_byte_deterministic(self, tmp_path):
        self.write_config(tmp_path, THIRDS_IMAGE)
        out1 = tmp_path / "s1.csv"
        out2 = tmp_path / "s2.csv"
        run_suite(str(tmp_path), out_path=str(out1))
        run_suite(str(tmp_path), out_path=str(out2))
        assert out1.read_bytes() == out2.read_bytes()

    def test_empty_directory(self, tmp_path):
        with pytest.raises(ConfigError):
            run_suite(str(tmp_path))

    def test_missing_directory(self, tmp_path):
        with pytest.raises(FileNotFoundError):
            run_suite(str(tmp_path / "nowhere"))
