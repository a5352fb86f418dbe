import json
import math

import numpy as np
import pytest

from pettylab import MSpec, cli, hull, lp_ball_body, m_add, volume
from pettylab.harness import (
    THREADS_ENV,
    ConfigError,
    build_c_set,
    c_set_body,
    estimate,
    lln_target,
    report_to_csv,
    report_to_json,
    resolve_threads,
    run_emp_petty_2,
    run_lln,
    run_theorem_1_2,
    v1_against_evaluator,
)
from pettylab.mixed import v1
from pettylab.projections import support_evaluator_of
from pettylab.bodies import sphere_directions, support

SQUARE = {"type": "cube", "dim": 2}
TRIANGLE = {"type": "simplex", "dim": 2}

THM12_SMALL = {
    "dim": 2,
    "seed": 5,
    "trials": 40,
    "blocks": [{"density": {"type": "gaussian"}, "m": 3}],
    "c_set": {"kind": "simplex", "m": 3},
}


class TestValidation:
    def test_dimension_gate(self):
        bad = dict(THM12_SMALL, dim=4)
        with pytest.raises(ConfigError):
            run_theorem_1_2(bad)

    def test_trials_gate(self):
        with pytest.raises(ConfigError):
            run_theorem_1_2(dict(THM12_SMALL, trials=0))

    def test_block_count(self):
        bad = dict(THM12_SMALL)
        bad["blocks"] = bad["blocks"] * 2
        with pytest.raises(ConfigError):
            run_theorem_1_2(bad)

    def test_c_set_size_must_match_block(self):
        bad = dict(THM12_SMALL, c_set={"kind": "simplex", "m": 4})
        with pytest.raises(ConfigError):
            run_theorem_1_2(bad)

    def test_lebesgue_needs_full_dimensional_images(self):
        bad = dict(
            THM12_SMALL,
            blocks=[{"density": {"type": "gaussian"}, "m": 2}],
            c_set={"kind": "simplex", "m": 2},
        )
        with pytest.raises(ConfigError):
            run_theorem_1_2(bad)

    def test_bp_rejects_bad_exponents(self):
        with pytest.raises(ConfigError):
            build_c_set({"kind": "bp", "m": 2, "p": 0.5}, 2)
        with pytest.raises(ConfigError):
            build_c_set({"kind": "bp", "m": 5, "p": 2.0}, 2)

    def test_msum_components_must_be_balls(self):
        with pytest.raises(ConfigError):
            build_c_set(
                {"kind": "msum",
                 "components": [{"kind": "simplex", "m": 2},
                                {"kind": "bp", "m": 2, "p": 2.0}]},
                2,
            )

    def test_unknown_kind(self):
        with pytest.raises(ConfigError):
            build_c_set({"kind": "orlicz", "m": 2}, 2)

    def test_threads_resolution(self, monkeypatch):
        monkeypatch.delenv(THREADS_ENV, raising=False)
        assert resolve_threads(None) == 1
        assert resolve_threads(4) == 4
        with pytest.raises(ConfigError):
            resolve_threads(0)
        monkeypatch.setenv(THREADS_ENV, "3")
        assert resolve_threads(1) == 3
        monkeypatch.setenv(THREADS_ENV, "zero")
        with pytest.raises(ConfigError):
            resolve_threads(None)
        monkeypatch.setenv(THREADS_ENV, "0")
        with pytest.raises(ConfigError):
            resolve_threads(None)

    def test_unknown_functional(self):
        with pytest.raises(ConfigError):
            estimate("petty_product", THM12_SMALL)


class TestCSets:
    def test_cube_matches_unit_ball_image(self):
        gen = np.random.default_rng(60)
        X = gen.normal(size=(3, 2))
        a = c_set_body(build_c_set({"kind": "cube", "m": 3}, 2), X)
        b = c_set_body(build_c_set({"kind": "bp", "m": 3, "p": math.inf}, 2), X)
        assert np.array_equal(a.generators, b.generators)

    def test_crosspolytope_image_is_a_signed_hull(self):
        gen = np.random.default_rng(61)
        X = gen.normal(size=(3, 2))
        body = c_set_body(build_c_set({"kind": "bp", "m": 3, "p": 1.0}, 2), X)
        assert volume(body) == pytest.approx(
            volume(hull(np.vstack([X, -X]))), rel=1e-12
        )

    def test_msum_with_l1_pattern_is_a_minkowski_sum(self):
        spec = {
            "kind": "msum",
            "components": [
                {"kind": "bp", "m": 2, "p": 2.0},
                {"kind": "bp", "m": 2, "p": 2.0},
            ],
            "M": {"p": 1.0},
        }
        cset = build_c_set(spec, 2)
        assert cset["kind"] == "explicit" and cset["m"] == 4
        gen = np.random.default_rng(62)
        X = gen.normal(size=(4, 2))
        body = c_set_body(cset, X)
        ball = lp_ball_body(2, 2.0)
        A = hull(ball.vertices @ X[:2])
        B = hull(ball.vertices @ X[2:])
        known = m_add(MSpec.lp(1.0), [A, B])
        assert volume(body) == pytest.approx(volume(known), rel=1e-9)
        for u in sphere_directions(2, 16):
            assert support(body, u) == pytest.approx(support(known, u), rel=1e-9)

    def test_msum_with_cross_pattern_is_a_convex_union(self):
        spec = {
            "kind": "msum",
            "components": [
                {"kind": "bp", "m": 2, "p": 2.0},
                {"kind": "bp", "m": 2, "p": 2.0},
            ],
            "M": {"type": "polygon",
                  "vertices": [[1, 0], [0, 1], [-1, 0], [0, -1]]},
        }
        cset = build_c_set(spec, 2)
        gen = np.random.default_rng(63)
        X = gen.normal(size=(4, 2))
        body = c_set_body(cset, X)
        ball = lp_ball_body(2, 2.0)
        A = hull(ball.vertices @ X[:2])
        B = hull(ball.vertices @ X[2:])
        known = m_add(MSpec.lp(math.inf), [A, B])
        assert volume(body) == pytest.approx(volume(known), rel=1e-9)


class TestEstimates:
    def test_expected_hull_volume_in_a_triangle(self):
        # three uniform points in a triangle span 1/12 of it on average
        config = {
            "dim": 2,
            "seed": 17,
            "trials": 20000,
            "blocks": [
                {"density": {"type": "uniform", "body": TRIANGLE}, "m": 3}
            ],
            "c_sets": [{"kind": "simplex", "m": 3}],
        }
        gen = np.random.default_rng(64)
        bary = gen.dirichlet(np.ones(3), size=1_000_000)
        verts = np.array([[0.0, 0.0], [1.0, 0.0], [0.0, 1.0]])
        pts = bary @ verts
        a = pts[0::3][: 333_000]
        b = pts[1::3][: 333_000]
        c = pts[2::3][: 333_000]
        d1, d2 = b - a, c - a
        areas = 0.5 * np.abs(d1[:, 0] * d2[:, 1] - d1[:, 1] * d2[:, 0])
        oracle_mean = float(areas.mean())
        oracle_err = float(areas.std(ddof=1) / math.sqrt(len(areas)))
        est = estimate("volume", config)
        joint = 3.0 * (est.stderr + oracle_err)
        assert abs(est.mean - oracle_mean) <= joint
        assert abs(est.mean - 0.5 / 12.0) <= joint

    def test_reports_are_identical_across_thread_counts(self):
        serial = report_to_json(run_theorem_1_2(THM12_SMALL, threads=1))
        parallel = report_to_json(run_theorem_1_2(THM12_SMALL, threads=2))
        assert serial == parallel

    def test_report_shape_and_verdict_vocabulary(self):
        report = run_theorem_1_2(THM12_SMALL)
        assert report["experiment"] == "thm12"
        assert report["direction"] == "le"
        assert set(report["lhs"]) >= {"mean", "stderr", "ci_low", "ci_high"}
        assert report["verdict"] in ("consistent", "violated", "inconclusive")
        assert "threads" not in report["config"]
        assert "wall_time" not in report


class TestPairingLimit:
    def test_square_target_value(self):
        assert lln_target(SQUARE) == pytest.approx(2.0 / 3.0, abs=1e-12)

    def test_target_does_not_depend_on_the_body(self):
        for lit in (TRIANGLE, {"type": "ball", "dim": 2, "radius": 1.3}):
            assert lln_target(lit) == pytest.approx(2.0 / 3.0, abs=1e-9)

    def test_v1_from_an_evaluator_matches_the_polytope_form(self):
        gen = np.random.default_rng(65)
        K = hull(gen.normal(size=(7, 2)))
        L = hull(gen.normal(size=(6, 2)))
        got = v1_against_evaluator(K, support_evaluator_of(L))
        assert got == pytest.approx(v1(K, L), rel=1e-9)

    def test_sweep_report_structure(self):
        report = run_lln(
            {
                "dim": 2,
                "seed": 2,
                "trials": 30,
                "body": SQUARE,
                "m1_list": [8, 16],
                "m2_list": [8, 16],
                "family": [SQUARE, TRIANGLE],
            }
        )
        assert len(report["rows"]) == 2
        row = report["rows"][0]
        assert set(row) == {"m1", "m2", "estimate", "target", "within_3_stderr"}
        assert report["target"] == pytest.approx(2.0 / 3.0, abs=1e-12)
        assert report["constancy"]["relative_spread"] <= 1e-9
        assert report["verdict"] in ("consistent", "inconclusive")


class TestSerialization:
    def test_two_sided_csv(self):
        report = run_theorem_1_2(dict(THM12_SMALL, trials=10))
        text = report_to_csv(report)
        lines = text.strip().split("\n")
        assert lines[0].startswith("experiment,side,mean")
        assert len(lines) == 3
        assert lines[1].startswith("thm12,lhs")

    def test_sweep_csv(self):
        report = run_lln(
            {"dim": 2, "seed": 1, "trials": 10, "body": SQUARE,
             "m1_list": [4], "m2_list": [4]}
        )
        lines = report_to_csv(report).strip().split("\n")
        assert lines[0].startswith("experiment,m1,m2")
        assert len(lines) == 2

    def test_json_is_stable(self):
        a = report_to_json(run_emp_petty_2(
            {"dim": 2, "seed": 3, "trials": 12, "body": SQUARE,
             "m1": 6, "m2": 6}
        ))
        b = report_to_json(run_emp_petty_2(
            {"dim": 2, "seed": 3, "trials": 12, "body": SQUARE,
             "m1": 6, "m2": 6}
        ))
        assert a == b
        json.loads(a)


class TestCli:
    def _write(self, tmp_path, payload):
        path = tmp_path / "config.json"
        path.write_text(json.dumps(payload))
        return str(path)

    def test_petty_round_trip(self, tmp_path, capsys):
        cfg = self._write(tmp_path, SQUARE)
        assert cli.main(["petty", "--config", cfg]) == 0
        report = json.loads(capsys.readouterr().out)
        assert report["product"] == pytest.approx(2.0, abs=1e-12)
        assert report["verdict"] == "consistent"

    def test_petty_csv_format(self, tmp_path, capsys):
        cfg = self._write(tmp_path, SQUARE)
        assert cli.main(["petty", "--config", cfg, "--format", "csv"]) == 0
        out = capsys.readouterr().out.strip().split("\n")
        assert out[0].startswith("dim,volume,product")

    def test_output_file(self, tmp_path):
        cfg = self._write(tmp_path, SQUARE)
        dest = tmp_path / "report.json"
        assert cli.main(["petty", "--config", cfg, "--out", str(dest)]) == 0
        assert json.loads(dest.read_text())["dim"] == 2

    def test_experiment_with_overrides(self, tmp_path, capsys):
        cfg = self._write(tmp_path, {
            "dim": 2,
            "body": SQUARE,
            "m1": 4,
            "m2": 4,
            "trials": 500,
        })
        code = cli.main([
            "emppetty2", "--config", cfg, "--trials", "15", "--seed", "9"
        ])
        assert code == 0
        report = json.loads(capsys.readouterr().out)
        assert report["trials"] == 15
        assert report["seed"] == 9

    def test_usage_errors_exit_one(self, tmp_path, capsys):
        assert cli.main(["no-such-command"]) == 1
        assert cli.main(["petty"]) == 1
        assert cli.main(["petty", "--config", str(tmp_path / "missing.json")]) == 1
        broken = tmp_path / "broken.json"
        broken.write_text("{not json")
        assert cli.main(["petty", "--config", str(broken)]) == 1
        bad = self._write(tmp_path, dict(THM12_SMALL, dim=4))
        assert cli.main(["thm12", "--config", bad]) == 1
        capsys.readouterr()

    def test_violated_verdict_exits_two(self, tmp_path, monkeypatch, capsys):
        cfg = self._write(tmp_path, {})
        monkeypatch.setitem(
            cli.RUNNERS, "thm12",
            lambda config, threads=None: {"verdict": "violated"},
        )
        assert cli.main(["thm12", "--config", cfg]) == 2
        capsys.readouterr()
