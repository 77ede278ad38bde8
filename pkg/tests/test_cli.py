"""Tests for the command-line front end."""
import json

import pytest

from app import cli
from app.cli import build_parser, main
from app.config import settings
from app.models import RowVerification


def run_json(capsys, argv):
    """Run the CLI with ``--json`` and parse what it prints.

    :returns: Exit code and decoded report
    """
    code = main(argv + ["--json"])
    return code, json.loads(capsys.readouterr().out)


@pytest.mark.cli
@pytest.mark.integration
class TestCommands:
    """Tests for each subcommand on small groups."""

    def test_classify(self, capsys, spec_file, rot90_spec):
        """Test classification of the quarter turn."""
        code, report = run_json(capsys, ["classify", str(spec_file(rot90_spec))])
        assert code == 0
        assert report["command"] == "classify"
        assert report["canonical_class"]["family_row"] == "Z_4"
        assert report["canonical_class"]["group_order"] == 4

    def test_classify_summary(self, capsys, spec_file, glide_spec):
        """Test the plain-text summary of a glide reflection."""
        assert main(["classify", str(spec_file(glide_spec))]) == 0
        out = capsys.readouterr().out
        assert "Canonical row: D_1/l0" in out
        assert "glide ShiftGlide" in out

    def test_cells(self, capsys, spec_file, rot90_spec):
        """Test the cell census report."""
        code, report = run_json(capsys, ["cells", str(spec_file(rot90_spec))])
        assert code == 0
        assert report["census"]["relations"] == [[1, 3]]
        assert report["census"]["domain"]["tiling_ok"] is True
        assert report["counting"]["faces_identity"] is True

    def test_isotropy(self, capsys, spec_file, rot90_spec):
        """Test the isotropy report of the quarter turn."""
        code, report = run_json(capsys, ["isotropy", str(spec_file(rot90_spec))])
        assert code == 0
        assert report["isotropy"]["vertices"] == ["Z_4", "Z_2", "Z_4", "Z_2"]
        assert report["isotropy"]["golden"] == []

    def test_bundles(self, capsys, spec_file, trivial_spec):
        """Test the bundle report of the trivial group."""
        code, report = run_json(capsys, ["bundles", str(spec_file(trivial_spec)), "--rank", "2"])
        assert code == 0
        assert report["bundles"]["theorem_case"] == "A"
        assert report["bundles"]["tuple_count_by_rank"] == {"1": 1, "2": 1}

    def test_bundles_summary(self, capsys, spec_file, rot90_spec):
        """Test the plain-text bundle summary."""
        assert main(["bundles", str(spec_file(rot90_spec)), "--rank", "1"]) == 0
        out = capsys.readouterr().out
        assert "case A" in out
        assert "rank 1: 32 invariant tuples" in out

    def test_output_file(self, capsys, tmp_path, spec_file, rot90_spec):
        """Test that --output writes the JSON report."""
        target = tmp_path / "report.json"
        assert main(["cells", str(spec_file(rot90_spec)), "--output", str(target)]) == 0
        assert json.loads(target.read_text(encoding="utf-8"))["command"] == "cells"
        assert "Census:" in capsys.readouterr().out

    def test_verify_tables_row(self, capsys):
        """Test verification of the Z_4 instantiations."""
        code, report = run_json(capsys, ["verify-tables", "--row", "Z_4"])
        assert code == 0
        rows = report["verification"]["rows"]
        assert [(r["m1"], r["m2"]) for r in rows] == [(1, 1), (2, 2)]
        assert all(not r["mismatches"] for r in rows)

    def test_version(self, capsys):
        """Test --version."""
        with pytest.raises(SystemExit) as exc:
            main(["--version"])
        assert exc.value.code == 0
        assert "torus-bundles" in capsys.readouterr().out


@pytest.mark.cli
@pytest.mark.unit
class TestExitCodes:
    """Tests for error reporting through exit codes."""

    def test_missing_file(self, tmp_path):
        """Test that a missing specification is an input error."""
        assert main(["classify", str(tmp_path / "none.json")]) == 2

    def test_malformed_spec(self, spec_file):
        """Test that an invalid specification is an input error."""
        assert main(["classify", str(spec_file({"gram": [["1"]]}))]) == 2

    def test_cap_exceeded(self, spec_file, rot90_spec, restore_settings):
        """Test that an exceeded closure cap exits with 3."""
        assert main(["classify", str(spec_file(rot90_spec)), "--cap", "3"]) == 3
        assert settings.closure_cap == 3

    def test_rank_cap_exceeded(self, spec_file, rot90_spec):
        """Test that a rank above the cap exits with 3."""
        assert main(["bundles", str(spec_file(rot90_spec)), "--rank", "99"]) == 3

    def test_non_isometry(self, spec_file, rot90_spec):
        """Test that a generator violating the Gram form exits with 4."""
        rot90_spec["gram"] = [["1", "0"], ["0", "2"]]
        assert main(["classify", str(spec_file(rot90_spec))]) == 4

    def test_shear_generator(self, spec_file, rot90_spec):
        """Test that a shear on the square lattice exits with 4."""
        rot90_spec["generators"][0]["matrix"] = [[1, 1], [0, 1]]
        assert main(["classify", str(spec_file(rot90_spec))]) == 4

    def test_continuous_out_of_scope(self, spec_file, rot90_spec):
        """Test that --continuous is refused with exit 2."""
        assert main(["bundles", str(spec_file(rot90_spec)), "--rank", "1", "--continuous"]) == 2

    def test_unsupported_group(self, spec_file):
        """Test that a nonsymmorphic group exits with 2."""
        payload = {
            "gram": [["1", "0"], ["0", "1"]],
            "generators": [
                {"matrix": [[1, 0], [0, -1]], "translation": ["1/2", "1/2"]},
                {"matrix": [[-1, 0], [0, 1]], "translation": ["1/2", "1/2"]},
            ],
        }
        assert main(["classify", str(spec_file(payload))]) == 2

    def test_golden_mismatch(self, capsys, tmp_path, monkeypatch, spec_file, rot90_spec):
        """Test that a golden-table mismatch exits with 1."""
        golden = tmp_path / "golden.csv"
        golden.write_text("family_row,point_kind,index,label,published_label,note\nZ_4,face,-1,Z_2,Z_2,\n", encoding="utf-8")
        monkeypatch.setattr(settings, "golden_tables_path", str(golden))
        assert main(["isotropy", str(spec_file(rot90_spec))]) == 1
        assert "[mismatch] face -1" in capsys.readouterr().out

    def test_failed_row_verification(self, mocker):
        """Test that a failing row makes verify-tables exit with 1."""
        failing = RowVerification(
            family_row="Z_4", m1=1, m2=1, round_trip=False, tiling=True,
            domain_1d=True, counting=True, edge_face_claim=True,
        )
        verify = mocker.patch.object(cli, "verify_row", return_value=failing)
        assert main(["verify-tables", "--row", "Z_4", "--json"]) == 1
        assert verify.call_count == 2

    def test_unknown_row(self):
        """Test that an unmatched row selector exits with 2."""
        assert main(["verify-tables", "--row", "Z_5"]) == 2


@pytest.mark.cli
@pytest.mark.unit
class TestParser:
    """Tests for argument parsing."""

    def test_bundles_needs_rank(self):
        """Test that --rank is required for bundles."""
        with pytest.raises(SystemExit):
            build_parser().parse_args(["bundles", "group.json"])

    def test_common_options(self):
        """Test the shared options on a subcommand."""
        args = build_parser().parse_args(["cells", "g.json", "--cap", "10", "--log-level", "DEBUG"])
        assert args.cap == 10
        assert args.log_level == "DEBUG"
        assert args.command == "cells"
