import numpy as np
import pytest
import yaml

from resilient_consensus.cli import main
from resilient_consensus.scenario import parse_scenario
from resilient_consensus.errors import ScenarioError
from resilient_consensus.graph import complete_graph, from_edge_list, format_edge_list

P2_EDGES = "2 1\n0 1\n"


@pytest.fixture
def p2_file(tmp_path):
    path = tmp_path / "p2.txt"
    path.write_text(P2_EDGES)
    return str(path)


def write_scenario(tmp_path, name="scenario.yaml", **overrides):
    doc = {
        "schema": 1,
        "protocol": "adaptive",
        "alpha": 1.0,
        "dt": 0.01,
        "t_final": 40.0,
        "x0": [0.0, 0.0],
        "w": [1.0, 0.0],
    }
    doc.update(overrides)
    path = tmp_path / name
    path.write_text(yaml.safe_dump(doc))
    return str(path)


class TestScenarioParsing:
    def test_minimal_nominal(self, p2):
        sc = parse_scenario(
            {"schema": 1, "protocol": "nominal", "x0": [1.0, -1.0]}, p2
        )
        assert sc.config.protocol == "nominal"
        assert np.array_equal(sc.w, [0.0, 0.0])
        assert sc.config.t_final == pytest.approx(10.0)  # 20 / lambda_2

    def test_schema_required(self, p2):
        with pytest.raises(ScenarioError):
            parse_scenario({"protocol": "nominal", "x0": [0.0, 0.0]}, p2)

    def test_length_mismatch(self, p2):
        with pytest.raises(ScenarioError):
            parse_scenario(
                {"schema": 1, "protocol": "nominal", "x0": [0.0, 0.0, 0.0]}, p2
            )

    def test_adaptive_needs_alpha(self, p2):
        with pytest.raises(ScenarioError):
            parse_scenario({"schema": 1, "protocol": "adaptive", "x0": [0.0, 0.0]}, p2)

    def test_x_hat0_override_flagged(self, p2):
        sc = parse_scenario(
            {
                "schema": 1,
                "protocol": "adaptive",
                "alpha": 1.0,
                "x0": [1.0, 0.0],
                "x_hat0": [0.0, 0.0],
                "t_final": 1.0,
            },
            p2,
        )
        assert sc.x_hat0_overridden


class TestSimulateCommand:
    def test_nominal_consensus(self, tmp_path, p2_file, capsys):
        scenario = write_scenario(
            tmp_path, protocol="nominal", alpha=None, x0=[1.0, -1.0], w=[0.0, 0.0],
            t_final=10.0,
        )
        out = tmp_path / "traj.csv"
        code = main(
            ["simulate", "--graph", p2_file, "--scenario", scenario, "--out", str(out)]
        )
        assert code == 0
        assert out.exists()
        out_text = capsys.readouterr().out
        report = yaml.safe_load(out_text.split(")\n", 1)[1].split("trajectory written")[0])
        assert report["consensus_error_final"] <= 1e-6

    def test_adaptive_recovery(self, tmp_path, p2_file, capsys):
        scenario = write_scenario(tmp_path)
        out = tmp_path / "traj.csv"
        code = main(
            ["simulate", "--graph", p2_file, "--scenario", scenario, "--out", str(out)]
        )
        assert code == 0
        text = capsys.readouterr().out
        report = yaml.safe_load(text.split(")\n", 1)[1].split("trajectory written")[0])
        assert report["what_error_inf_final"] <= 1e-4
        assert report["stability_verdict"] is True

    def test_malformed_edge_list(self, tmp_path, capsys):
        bad = tmp_path / "bad.txt"
        bad.write_text("2 1\n0 zebra\n")
        scenario = write_scenario(tmp_path)
        code = main(
            [
                "simulate",
                "--graph",
                str(bad),
                "--scenario",
                scenario,
                "--out",
                str(tmp_path / "t.csv"),
            ]
        )
        assert code == 1
        assert "line 2" in capsys.readouterr().err

    def test_seed_is_echoed(self, tmp_path, p2_file, capsys):
        scenario = write_scenario(tmp_path, t_final=1.0)
        main(
            [
                "--seed",
                "42",
                "simulate",
                "--graph",
                p2_file,
                "--scenario",
                scenario,
                "--out",
                str(tmp_path / "t.csv"),
            ]
        )
        assert "seed: 42" in capsys.readouterr().out


class TestVerifyCommand:
    def test_p2(self, p2_file, capsys):
        code = main(["verify", "--graph", p2_file, "--alpha", "1.0"])
        assert code == 0
        out = capsys.readouterr().out
        report = yaml.safe_load(out.split(")\n", 1)[1].split("VERDICT")[0])
        assert report["spectral_abscissa"] == pytest.approx(-0.5, abs=1e-9)
        assert report["theorem_verdict"] is True

    def test_disconnected(self, tmp_path, capsys):
        path = tmp_path / "disc.txt"
        path.write_text(format_edge_list(from_edge_list(4, [(0, 1), (2, 3)])))
        code = main(["verify", "--graph", str(path), "--alpha", "1.0"])
        assert code == 1
        assert "not connected" in capsys.readouterr().err

    def test_k3_large_alpha(self, tmp_path):
        path = tmp_path / "k3.txt"
        path.write_text(format_edge_list(complete_graph(3)))
        assert main(["verify", "--graph", str(path), "--alpha", "10.0"]) == 0


class TestSweepCommand:
    def test_bound_column(self, tmp_path, p2_file):
        scenario = write_scenario(tmp_path, t_final=60.0)
        out = tmp_path / "sweep.csv"
        code = main(
            [
                "sweep",
                "--graph",
                p2_file,
                "--scenario",
                scenario,
                "--alpha",
                "1",
                "4",
                "16",
                "--out",
                str(out),
            ]
        )
        assert code == 0
        lines = out.read_text().strip().splitlines()
        assert lines[0] == "alpha,sup_xtilde,bound,centroid_drift,decay_rate"
        rows = [line.split(",") for line in lines[1:]]
        bounds = [float(r[2]) for r in rows]
        assert bounds == pytest.approx([1.0, 0.5, 0.25])
        for r in rows:
            assert float(r[1]) <= float(r[2]) + 1e-9

    def test_empty_alpha_list(self, tmp_path, p2_file):
        scenario = write_scenario(tmp_path)
        code = main(
            [
                "sweep",
                "--graph",
                p2_file,
                "--scenario",
                scenario,
                "--alpha",
                "--out",
                str(tmp_path / "s.csv"),
            ]
        )
        assert code == 1


class TestAnalyzeCommand:
    def test_round_trip_identical_report(self, tmp_path, p2_file, capsys):
        scenario = write_scenario(tmp_path)
        out = tmp_path / "traj.csv"
        assert (
            main(
                [
                    "simulate",
                    "--graph",
                    p2_file,
                    "--scenario",
                    scenario,
                    "--out",
                    str(out),
                ]
            )
            == 0
        )
        sim_out = capsys.readouterr().out
        sim_report = sim_out.split(")\n", 1)[1].split("trajectory written")[0]
        assert (
            main(
                [
                    "analyze",
                    "--trajectory",
                    str(out),
                    "--graph",
                    p2_file,
                    "--scenario",
                    scenario,
                ]
            )
            == 0
        )
        an_out = capsys.readouterr().out
        an_report = an_out.split(")\n", 1)[1]
        assert an_report == sim_report

    def test_truncated_csv(self, tmp_path, p2_file, capsys):
        scenario = write_scenario(tmp_path, t_final=1.0)
        out = tmp_path / "traj.csv"
        main(["simulate", "--graph", p2_file, "--scenario", scenario, "--out", str(out)])
        capsys.readouterr()
        lines = out.read_text().splitlines()
        truncated = tmp_path / "trunc.csv"
        truncated.write_text("\n".join(lines[:5])[:-7] + "\n")
        code = main(
            [
                "analyze",
                "--trajectory",
                str(truncated),
                "--graph",
                p2_file,
                "--scenario",
                scenario,
            ]
        )
        assert code == 1

    def test_nominal_disturbed_run_flags_disagreement(self, tmp_path, p2_file, capsys):
        # steady-state disagreement pinv(L) w on P2 with w = [1, -1] is 1
        scenario = write_scenario(
            tmp_path, protocol="nominal", alpha=None, x0=[0.0, 0.0], w=[1.0, -1.0],
            t_final=20.0,
        )
        out = tmp_path / "traj.csv"
        main(["simulate", "--graph", p2_file, "--scenario", scenario, "--out", str(out)])
        capsys.readouterr()
        main(
            [
                "analyze",
                "--trajectory",
                str(out),
                "--graph",
                p2_file,
                "--scenario",
                scenario,
            ]
        )
        report = yaml.safe_load(capsys.readouterr().out.split(")\n", 1)[1])
        assert report["consensus_error_final"] == pytest.approx(1.0, abs=1e-6)
