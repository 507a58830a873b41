"""End-to-end tests of the command-line interface and file formats."""

import json
import math
import xml.etree.ElementTree as ET

import pytest

from localmatch.cli import main
from localmatch.generators import gen_random
from localmatch.io import (
    InstanceFile,
    InstanceFormatError,
    instance_from_objects,
    load_instance,
    save_instance,
)
from localmatch.matching import optimal_matching


SQUARE = {"points": [[0.0, 0.0], [1.0, 0.0], [1.0, 1.0], [0.0, 1.0]]}


def write_json(path, payload):
    path.write_text(json.dumps(payload))
    return str(path)


class TestInstanceIO:
    def test_round_trip_is_exact(self, tmp_path):
        ps = gen_random(8, seed=11)
        inst = instance_from_objects(ps, optimal_matching(ps), {"note": "test"})
        path = tmp_path / "inst.json"
        save_instance(path, inst)
        back = load_instance(path)
        assert back.points == inst.points  # repr round-trip, no 1e-12 loss
        assert back.matching == inst.matching
        assert back.metadata == inst.metadata

    def test_csv_import(self, tmp_path):
        path = tmp_path / "pts.csv"
        path.write_text("0,0\n1.5,2.25\n\n3,4\n1,1\n")
        inst = load_instance(path)
        assert inst.points == [(0.0, 0.0), (1.5, 2.25), (3.0, 4.0), (1.0, 1.0)]
        assert inst.matching is None

    def test_malformed_json(self, tmp_path):
        path = tmp_path / "bad.json"
        path.write_text("{not json")
        with pytest.raises(InstanceFormatError):
            load_instance(path)

    def test_bad_points(self, tmp_path):
        path = write_json(tmp_path / "bad.json", {"points": [[0, 0], [1]]})
        with pytest.raises(InstanceFormatError):
            load_instance(path)

    def test_matching_must_be_perfect(self, tmp_path):
        inst = InstanceFile(points=[(0, 0), (1, 0), (0, 1), (1, 1)], matching=[(0, 1)])
        with pytest.raises(InstanceFormatError):
            inst.matching_obj()


class TestSolveCommand:
    def test_square_maximize(self, tmp_path, capsys):
        inp = write_json(tmp_path / "sq.json", SQUARE)
        out = tmp_path / "solved.json"
        assert main(["solve", "--input", inp, "--output", str(out)]) == 0
        solved = load_instance(out)
        assert sorted(tuple(p) for p in solved.matching) == [(0, 2), (1, 3)]
        assert solved.metadata["weight"] == pytest.approx(2 * math.sqrt(2))

    def test_malformed_input_exit_1(self, tmp_path):
        path = tmp_path / "bad.json"
        path.write_text("nope")
        assert main(["solve", "--input", str(path)]) == 1

    def test_missing_file_exit_1(self, tmp_path):
        assert main(["solve", "--input", str(tmp_path / "missing.json")]) == 1

    def test_cap_exit_2(self, tmp_path):
        ps = gen_random(30, seed=2)
        inp = tmp_path / "big.json"
        save_instance(inp, instance_from_objects(ps))
        assert main(["solve", "--input", str(inp)]) == 2


class TestVerifyCommand:
    def test_local_matching_exit_0(self, tmp_path):
        inp = write_json(
            tmp_path / "sq.json", {**SQUARE, "matching": [[0, 2], [1, 3]]}
        )
        out = tmp_path / "report.json"
        assert main(["verify", "--input", inp, "--k", "2", "--output", str(out)]) == 0
        report = json.loads(out.read_text())
        assert report["is_local_max"] is True
        assert report["ratio"] == pytest.approx(1.0)

    def test_violating_matching_exit_3(self, tmp_path):
        inp = write_json(
            tmp_path / "sq.json", {**SQUARE, "matching": [[0, 1], [2, 3]]}
        )
        out = tmp_path / "report.json"
        assert main(["verify", "--input", inp, "--k", "2", "--output", str(out)]) == 3
        report = json.loads(out.read_text())
        assert report["violating_subset"] == [[0, 1], [2, 3]]

    def test_k1_always_passes(self, tmp_path):
        inp = write_json(
            tmp_path / "sq.json", {**SQUARE, "matching": [[0, 1], [2, 3]]}
        )
        assert main(["verify", "--input", inp, "--k", "1"]) == 0


class TestCertifyCommand:
    def test_certificate_and_svg(self, tmp_path):
        inp = write_json(
            tmp_path / "x.json",
            {
                "points": [[0, 0], [1, 1], [0, 1], [1, 0]],
                "matching": [[0, 1], [2, 3]],
            },
        )
        out = tmp_path / "cert.json"
        svg = tmp_path / "fig.svg"
        code = main(
            ["certify", "--input", inp, "--kind", "local2",
             "--output", str(out), "--svg", str(svg)]
        )
        assert code == 0
        cert = json.loads(out.read_text())
        assert cert["witness"]["slack"] < 0
        for row in cert["per_edge_checks"]:
            assert row["star_sum"] <= row["bound"] + 1e-7
        root = ET.fromstring(svg.read_text())
        assert root.tag.endswith("svg")
        assert root.attrib["version"] == "1.1"

    def test_non_local_matching_exit_3(self, tmp_path):
        inp = write_json(
            tmp_path / "sq.json", {**SQUARE, "matching": [[0, 1], [2, 3]]}
        )
        assert main(["certify", "--input", inp, "--kind", "local2"]) == 3


class TestCrossingCommand:
    def test_square_diagonals(self, tmp_path):
        inp = write_json(
            tmp_path / "sq.json", {**SQUARE, "matching": [[0, 2], [1, 3]]}
        )
        out = tmp_path / "cross.json"
        assert main(["crossing", "--input", inp, "--output", str(out)]) == 0
        report = json.loads(out.read_text())
        assert report["is_pairwise_crossing"] is True
        assert report["balance_ok"] is True
        assert report["unique"] is True
        assert report["globally_maximum"] is True

    def test_collinear_input_exit_1(self, tmp_path):
        inp = write_json(
            tmp_path / "col.json",
            {"points": [[0, 0], [1, 0], [2, 0], [0, 1]], "matching": [[0, 3], [1, 2]]},
        )
        assert main(["crossing", "--input", inp]) == 1


class TestGenCommand:
    def test_deterministic_output(self, tmp_path):
        a = tmp_path / "a.json"
        b = tmp_path / "b.json"
        assert main(["gen", "--family", "random", "--n", "6", "--seed", "4",
                     "--output", str(a)]) == 0
        assert main(["gen", "--family", "random", "--n", "6", "--seed", "4",
                     "--output", str(b)]) == 0
        assert a.read_text() == b.read_text()

    def test_circle_family_carries_matching(self, tmp_path):
        out = tmp_path / "circle.json"
        assert main(["gen", "--family", "circle", "--n", "5", "--eps", "0.05",
                     "--output", str(out)]) == 0
        inst = load_instance(out)
        assert len(inst.points) == 10
        assert len(inst.matching) == 5


class TestMineCommand:
    def test_deterministic_file_and_monotone_log(self, tmp_path, capsys):
        args = ["mine", "--k", "2", "--n", "6", "--seed", "6", "--budget", "400",
                "--restarts", "2"]
        out1 = tmp_path / "m1.json"
        out2 = tmp_path / "m2.json"
        assert main(args + ["--output", str(out1)]) == 0
        log = capsys.readouterr().out
        ratios = [
            float(line.rsplit(" ", 1)[1])
            for line in log.splitlines()
            if line.startswith("restart")
        ]
        assert ratios == sorted(ratios, reverse=True)
        assert main(args + ["--output", str(out2)]) == 0
        assert out1.read_text() == out2.read_text()

    def test_verify_reproduces_stored_ratio(self, tmp_path):
        out = tmp_path / "mined.json"
        assert main(["mine", "--k", "2", "--n", "6", "--seed", "6", "--budget", "400",
                     "--restarts", "2", "--output", str(out)]) == 0
        mined = json.loads(out.read_text())
        rep_path = tmp_path / "rep.json"
        assert main(["verify", "--input", str(out), "--k", "2",
                     "--output", str(rep_path)]) == 0
        report = json.loads(rep_path.read_text())
        stored = mined["metadata"]["provenance"]["ratio"]
        assert report["ratio"] == pytest.approx(stored, abs=1e-9)


class TestSuiteCommand:
    def test_smoke_suite_passes(self, tmp_path, capsys):
        out = tmp_path / "summary.json"
        code = main(["suite", "--scale", "smoke", "--output", str(out)])
        printed = capsys.readouterr().out
        assert code == 0
        summary = json.loads(out.read_text())
        assert summary["failures"] == 0
        assert {c["name"] for c in summary["checks"]} >= {
            "oracle_equivalence",
            "k_local_theorem",
            "disk_enlargement",
            "pairwise_crossing",
        }
        assert printed.count("PASS") == summary["total"]

    def test_failing_check_gives_nonzero_exit(self, monkeypatch, capsys):
        from localmatch import suite as suite_mod

        monkeypatch.setattr(
            suite_mod,
            "CHECKS",
            [("always_fails", lambda scale: (False, "injected failure"))],
        )
        assert main(["suite", "--scale", "smoke"]) == 3
        assert "FAIL always_fails" in capsys.readouterr().out
