import json

import pytest

from burkbench.report import ExperimentReport, canonical_json, emit_report, write_csv


class TestCanonicalJson:
    def test_sorted_keys_and_float_format(self):
        text = canonical_json({"b": 1.0 / 3.0, "a": 2})
        assert text.index('"a"') < text.index('"b"')
        assert "0.33333333333333331" in text

    def test_round_trips_through_json(self):
        payload = {"x": 1.5, "nested": {"v": [1, 2.25, "s"], "flag": True, "none": None}}
        parsed = json.loads(canonical_json(payload))
        assert parsed == payload

    def test_byte_identical_for_equal_input(self):
        a = canonical_json({"m": [0.1, 0.2], "k": {"z": 1e-300}})
        b = canonical_json({"k": {"z": 1e-300}, "m": [0.1, 0.2]})
        assert a == b

    def test_numpy_scalars_handled(self):
        import numpy as np

        text = canonical_json({"v": np.float64(0.5), "n": np.int64(3), "arr": np.array([1.0, 2.0])})
        parsed = json.loads(text)
        assert parsed == {"v": 0.5, "n": 3, "arr": [1.0, 2.0]}

    def test_string_escaping(self):
        parsed = json.loads(canonical_json({"s": 'quote " backslash \\ tab \t'}))
        assert parsed["s"] == 'quote " backslash \\ tab \t'


class TestEmitReport:
    def test_writes_and_parses(self, tmp_path):
        rep = ExperimentReport(name="demo", parameters={"p": 3.0}, metrics={"gap": 1e-13}, verdict="pass")
        path = tmp_path / "out" / "demo.json"
        emit_report(rep, str(path))
        parsed = json.loads(path.read_text())
        assert parsed["name"] == "demo"
        assert parsed["schema"] == 1
        assert parsed["verdict"] == "pass"

    def test_same_report_twice_is_byte_identical(self, tmp_path):
        rep = ExperimentReport(name="d", parameters={"seed": 7}, metrics={"v": 0.1 + 0.2})
        p1, p2 = tmp_path / "a.json", tmp_path / "b.json"
        emit_report(rep, str(p1))
        emit_report(rep, str(p2))
        assert p1.read_bytes() == p2.read_bytes()

    def test_not_asserted_report_names_precondition(self, tmp_path):
        rep = ExperimentReport(name="d", verdict="not-asserted", precondition_failures=["smallness bound"])
        path = tmp_path / "d.json"
        emit_report(rep, str(path))
        parsed = json.loads(path.read_text())
        assert parsed["precondition_failures"] == ["smallness bound"]

    def test_io_error_carries_path(self):
        rep = ExperimentReport(name="d")
        with pytest.raises(OSError, match="no/such"):
            emit_report(rep, "/proc/no/such/dir/x.json")


class TestCsv:
    def test_header_and_float_formatting(self, tmp_path):
        path = tmp_path / "t.csv"
        write_csv(str(path), ["alpha", "ratio"], [[0.6, 2.5], [0.55, 2.6]])
        lines = path.read_text().strip().splitlines()
        assert lines[0] == "alpha,ratio"
        # 17 significant digits: round-trips exactly
        assert float(lines[1].split(",")[0]) == 0.6
        assert lines[1].split(",")[0] == format(0.6, ".17g")
