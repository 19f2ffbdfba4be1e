import numpy as np
import pytest

from conftest import TOY_ALIST
from nbldpc.cli import _parse_ebn0, _parse_kappa, main


@pytest.fixture
def toy_path(tmp_path):
    path = tmp_path / "toy.alist"
    path.write_text(TOY_ALIST)
    return str(path)


class TestParsing:
    def test_kappa(self):
        assert _parse_kappa("inf") == float("inf")
        assert _parse_kappa("2.5") == 2.5
        with pytest.raises(Exception):
            _parse_kappa("-1")

    def test_ebn0_list(self):
        assert _parse_ebn0("1,2,3.5") == (1.0, 2.0, 3.5)

    def test_ebn0_range_inclusive(self):
        assert _parse_ebn0("1:2:0.5") == (1.0, 1.5, 2.0)


class TestCheck:
    def test_valid_file(self, toy_path, capsys):
        assert main(["check", "--code", toy_path]) == 0
        out = capsys.readouterr().out
        assert "n=3 m=2 q=4" in out

    def test_missing_file_is_io_error(self, tmp_path):
        assert main(["check", "--code", str(tmp_path / "nope.alist")]) == 2

    def test_malformed_file_is_config_error(self, tmp_path):
        bad = tmp_path / "bad.alist"
        bad.write_text("3 2 4\n2 2\n")
        assert main(["check", "--code", str(bad)]) == 1

    def test_bad_flag_is_config_error(self, toy_path):
        assert main(["simulate", "--code", toy_path, "--decoder", "bogus",
                     "--ebn0", "1"]) == 1


class TestSimulate:
    def test_writes_csv(self, toy_path, tmp_path, capsys):
        out = tmp_path / "fer.csv"
        rc = main([
            "simulate", "--code", toy_path, "--decoder", "both", "--ebn0", "8,10",
            "--target-errors", "2", "--max-frames", "8", "--seed", "1",
            "--out", str(out),
        ])
        assert rc == 0
        lines = out.read_text().strip().splitlines()
        assert lines[0].startswith("decoder,ebn0_db")
        assert len(lines) == 5
        printed = capsys.readouterr().out
        assert printed.count("\n") == 5

    def test_second_run_resumes(self, toy_path, tmp_path):
        out = tmp_path / "fer.csv"
        args = [
            "simulate", "--code", toy_path, "--ebn0", "8", "--target-errors", "2",
            "--max-frames", "8", "--out", str(out),
        ]
        assert main(args) == 0
        first = out.read_text()
        assert main(args) == 0
        assert out.read_text() == first


def test_oracle_selftest(capsys):
    assert main(["oracle-selftest", "--trials", "2", "--seed", "3"]) == 0
    assert "OK" in capsys.readouterr().out
