"""Command-line harness: formats, exit codes, determinism."""

import json
from fractions import Fraction

from almostfull import Polygonal, from_ratstr, pow2
from almostfull.cli import main

F = Fraction


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


class TestIntegrate:
    def test_identity_json(self, capsys):
        code, out, _ = run(capsys, "integrate", "--function", "identity",
                           "--precision", "10", "--method", "lebesgue")
        assert code == 0
        report = json.loads(out)
        assert report["results"]["value"] == "1/2"
        assert report["error_bounds"]["value"] == "1/1024"
        assert report["prefix_depths"]["approximation_index"] == 12

    def test_square_precision_16(self, capsys):
        code, out, _ = run(capsys, "integrate", "--function", "square",
                           "--precision", "16")
        assert code == 0
        value = from_ratstr(json.loads(out)["results"]["value"])
        assert abs(value - F(1, 3)) <= pow2(-16)

    def test_step_riemann_net(self, capsys):
        code, out, _ = run(capsys, "integrate", "--function", "ae-step",
                           "--precision", "10", "--method", "riemann-net")
        assert code == 0
        value = from_ratstr(json.loads(out)["results"]["value"])
        assert abs(value - F(1, 2)) <= pow2(-10)

    def test_unknown_function_exit_2(self, capsys):
        code, _, err = run(capsys, "integrate", "--function", "nope")
        assert code == 2
        assert "unknown function" in err

    def test_missing_certificate_exit_3(self, capsys):
        code, _, err = run(capsys, "integrate", "--function", "osc",
                           "--method", "riemann-net")
        assert code == 3
        assert "certificate" in err

    def test_csv_format(self, capsys):
        code, out, _ = run(capsys, "integrate", "--function", "tent",
                           "--precision", "8", "--csv")
        assert code == 0
        header, row = out.strip().split("\n")
        assert header == "function,precision,method,value,error_bound"
        assert row.startswith("tent,8,lebesgue,")

    def test_no_floats_in_report(self, capsys):
        _, out, _ = run(capsys, "integrate", "--function", "square",
                        "--precision", "12")
        for token in json.loads(out)["results"].values():
            assert not isinstance(token, float)

    def test_polygonal_json_input(self, capsys, tmp_path):
        h = Polygonal.from_pairs([(0, 0), (F(1, 2), 1), (1, 0)])
        path = tmp_path / "bump.json"
        path.write_text(h.to_json())
        code, out, _ = run(capsys, "integrate", "--function", f"poly:{path}",
                           "--precision", "8")
        assert code == 0
        assert json.loads(out)["results"]["value"] == "1/2"


class TestNetTable:
    def test_identity_rows(self, capsys):
        code, out, _ = run(capsys, "net-table", "--function", "identity",
                           "--m-min", "2", "--m-max", "6")
        assert code == 0
        rows = json.loads(out)["results"]["rows"]
        assert [r["m"] for r in rows] == [2, 3, 4, 5, 6]
        for r in rows:
            assert abs(from_ratstr(r["integral"]) - F(1, 2)) <= pow2(-r["m"]) \
                + pow2(-(r["m"] + 2))
        for r in rows[1:]:
            assert from_ratstr(r["l1_step"]) < 2 * pow2(-(r["m"] - 1))

    def test_constant_rows_flat(self, capsys):
        code, out, _ = run(capsys, "net-table", "--function", "constant",
                           "--m-min", "1", "--m-max", "4", "--precision", "8")
        assert code == 0
        rows = json.loads(out)["results"]["rows"]
        for r in rows:
            assert abs(from_ratstr(r["integral"]) - 1) <= pow2(-8)

    def test_step_table_monotone_toward_half(self, capsys):
        code, out, _ = run(capsys, "net-table", "--function", "ae-step",
                           "--m-min", "2", "--m-max", "5")
        assert code == 0
        rows = json.loads(out)["results"]["rows"]
        for r in rows:
            assert abs(from_ratstr(r["integral"]) - F(1, 2)) <= pow2(-4)

    def test_bad_range_exit_2(self, capsys):
        code, _, _ = run(capsys, "net-table", "--function", "identity",
                         "--m-min", "3", "--m-max", "2")
        assert code == 2


class TestVerify:
    def test_all_suites_pass(self, capsys):
        for suite in ("regularity", "witnesses", "integrals", "bridge"):
            code, out, _ = run(capsys, "verify", "--suite", suite, "--seed", "7")
            assert code == 0, suite
            assert json.loads(out)["results"]["ok"] is True

    def test_unknown_suite_exit_2(self, capsys):
        code, _, _ = run(capsys, "verify", "--suite", "nope", "--seed", "1")
        assert code == 2

    def test_corrupted_catalog_fails_naming_invariant(self, capsys):
        code, out, _ = run(capsys, "verify", "--suite", "bridge", "--seed", "3",
                           "--corrupt-catalog")
        assert code == 1
        checks = json.loads(out)["results"]["checks"]
        failed = [c for c in checks if not c["ok"]]
        assert failed and "invariant" in failed[0]["detail"]


class TestBudget:
    def test_exhaustion_exit_4(self, capsys, monkeypatch):
        monkeypatch.setenv("ALMOSTFULL_BUDGET", "1")
        code, _, err = run(capsys, "verify", "--suite", "witnesses",
                           "--seed", "7")
        assert code == 4
        assert "budget" in err.lower()


class TestDeterminism:
    def test_integrate_byte_identical(self, capsys):
        _, out1, _ = run(capsys, "integrate", "--function", "tent",
                         "--precision", "9")
        _, out2, _ = run(capsys, "integrate", "--function", "tent",
                         "--precision", "9")
        assert out1 == out2

    def test_verify_byte_identical(self, capsys):
        _, out1, _ = run(capsys, "verify", "--suite", "integrals", "--seed", "7")
        _, out2, _ = run(capsys, "verify", "--suite", "integrals", "--seed", "7")
        assert out1 == out2

    def test_different_seed_changes_inputs_only(self, capsys):
        _, out1, _ = run(capsys, "verify", "--suite", "regularity", "--seed", "1")
        _, out2, _ = run(capsys, "verify", "--suite", "regularity", "--seed", "2")
        assert json.loads(out1)["results"]["ok"]
        assert json.loads(out2)["results"]["ok"]
