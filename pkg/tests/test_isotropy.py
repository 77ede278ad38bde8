"""Tests for isotropy labels, counting identities and golden tables."""
import pytest

from app.canon import ROWS, CanonicalClass
from app.config import settings
from app.errors import InvalidParams
from app.isotropy import (
    compare_with_golden,
    cone_isotropy,
    edge_interior_isotropy,
    edge_isotropy,
    face_isotropy,
    golden_rows,
    isotropy_report,
    verify_counting,
    vertex_isotropy,
)
from app.torusgroup import PointGroupLabel

GOLDEN_HEADER = "family_row,point_kind,index,label,published_label,note\n"


def labels(*texts):
    return [PointGroupLabel.parse(t) for t in texts]


@pytest.mark.unit
@pytest.mark.isotropy
class TestLabels:
    """Tests for face, vertex, edge and cone labels."""

    @pytest.mark.parametrize("row_id,expected", [
        ("Z_4", "id"),
        ("D_3", "Z_3"),
        ("D_4", "D_{1,4}"),
        ("D_6", "D_{3,2}"),
    ])
    def test_face(self, row_class, row_id, expected):
        """Test the face stabilizer label."""
        assert face_isotropy(row_class(row_id)) == PointGroupLabel.parse(expected)

    def test_vertices(self, row_class):
        """Test vertex labels and relations of Z_4."""
        found, relations = vertex_isotropy(row_class("Z_4"))
        assert found == labels("Z_4", "Z_2", "Z_4", "Z_2")
        assert relations == [(1, 3)]

    def test_edges(self, row_class):
        """Test edge labels of D_4 and D_3."""
        assert edge_isotropy(row_class("D_4")) == labels("D_{1,2}", "D_1", "D_{1,2}", "D_1")
        assert edge_isotropy(row_class("D_3")) == labels("D_{1,3}", "D_{1,-3}", "D_1")

    def test_edge_interiors_drop_half_turns(self, row_class):
        """Test that D_6 edge interiors keep only the mirror."""
        assert edge_interior_isotropy(row_class("D_6")) == labels("D_{1,3}", "D_{1,-3}", "D_1")

    def test_cones(self, row_class):
        """Test the cone stabilizers of D_4 and D_6."""
        assert cone_isotropy(row_class("D_4")) == {
            0: PointGroupLabel.parse("D_{1,4}"),
            1: PointGroupLabel.trivial(),
            2: PointGroupLabel.parse("D_{1,4}"),
        }
        assert cone_isotropy(row_class("D_6")) == {
            0: PointGroupLabel.parse("D_{1,6}"),
            1: PointGroupLabel.parse("D_{1,-6}"),
        }


@pytest.mark.unit
@pytest.mark.isotropy
class TestReport:
    """Tests for the assembled isotropy report."""

    def test_counting(self, row_class):
        """Test the counting identities for Z_4 with Λ = 2Λ_t."""
        counting = verify_counting(row_class("Z_4", 2, 2))
        assert counting.ok
        assert counting.translations == 4

    def test_edge_face_claim(self, row_class):
        """Test the edge-face intersection claim on Z_4 and D_6."""
        assert isotropy_report(row_class("Z_4")).edge_face_claim
        assert isotropy_report(row_class("D_6")).edge_face_claim

    def test_sublattice_keeps_labels(self, row_class):
        """Test that labels do not depend on Λ."""
        base = isotropy_report(row_class("D_4"))
        scaled = isotropy_report(row_class("D_4", 2, 2))
        assert scaled.vertex_labels == base.vertex_labels
        assert scaled.edge_labels == base.edge_labels


@pytest.mark.isotropy
class TestGolden:
    """Tests for comparison with the golden tables."""

    @pytest.fixture
    def golden_file(self, tmp_path, monkeypatch):
        """Point the golden tables at a temporary CSV.

        :returns: ``write(body)`` storing the rows and activating the file
        """
        def write(body: str):
            path = tmp_path / "golden.csv"
            path.write_text(GOLDEN_HEADER + body, encoding="utf-8")
            monkeypatch.setattr(settings, "golden_tables_path", str(path))
            return path
        return write

    def test_shipped_tables_load(self):
        """Test that the shipped tables hold the Z_4 face entry."""
        rows = golden_rows("Z_4")
        assert any(r.point_kind == "face" and r.label == "id" for r in rows)

    def test_z4_matches(self, row_class):
        """Test that Z_4 has no differences."""
        assert compare_with_golden(row_class("Z_4")) == []

    def test_d4_face_flagged(self, row_class):
        """Test that the annotated D_4 face entry is reported as flagged."""
        diffs = compare_with_golden(row_class("D_4"))
        assert [(d.point_kind, d.status) for d in diffs] == [("face", "flagged")]

    def test_mismatch_detected(self, row_class, golden_file):
        """Test that a wrong expected label is a mismatch."""
        golden_file("Z_4,face,-1,Z_2,Z_2,\nZ_4,area,-1,1/4,1/4,\n")
        diffs = compare_with_golden(row_class("Z_4"))
        assert len(diffs) == 1
        assert diffs[0].status == "mismatch"
        assert diffs[0].computed == "id"

    def test_published_disagreement_without_note(self, row_class, golden_file):
        """Test that a published label differing from the computation needs a note."""
        golden_file("Z_4,face,-1,id,Z_2,\n")
        diffs = compare_with_golden(row_class("Z_4"))
        assert [(d.status, d.expected, d.computed) for d in diffs] == [("mismatch", "Z_2", "id")]

    def test_published_disagreement_with_note(self, row_class, golden_file):
        """Test that an annotated published disagreement is flagged, not failed."""
        golden_file('Z_4,face,-1,id,Z_2,"published as Z_2, computed id"\n')
        diffs = compare_with_golden(row_class("Z_4"))
        assert [(d.status, d.expected) for d in diffs] == [("flagged", "Z_2")]
        assert diffs[0].note == "published as Z_2, computed id"

    def test_equivalent_published_axis(self, row_class):
        """Test that D_{2,3/2} in the published column matches the computed D_{2,-3}."""
        diffs = compare_with_golden(row_class("D_6"))
        assert [d for d in diffs if d.point_kind == "edge"] == []

    def test_notes_keep_both_readings(self):
        """Test that the D_4 face note records both published readings in full."""
        (face,) = [r for r in golden_rows("D_4") if r.point_kind == "face"]
        assert "D_{1,2}" in face.note
        assert "D_{1,4}" in face.note
        (edge,) = [r for r in golden_rows("D_{2,2}") if r.point_kind == "edge" and r.index == 1]
        assert edge.note.startswith("published as D_{1,4};")
        assert edge.published_label == "D_{1,4}"

    def test_missing_entry(self, row_class, golden_file):
        """Test that an entry with no computed value is a mismatch."""
        golden_file("Z_4,vertex,7,Z_2,Z_2,\n")
        diffs = compare_with_golden(row_class("Z_4"))
        assert diffs[0].computed == "<missing>"

    def test_row_without_entries(self, row_class, golden_file):
        """Test that a family absent from the tables raises."""
        golden_file("Z_4,area,-1,1/4,1/4,\n")
        with pytest.raises(InvalidParams):
            compare_with_golden(row_class("D_4"))

    @pytest.mark.slow
    def test_catalog_has_no_mismatches(self):
        """Test every tabulated row against the shipped tables."""
        for row in ROWS:
            if not golden_rows(row.row_id):
                continue
            cc = CanonicalClass.for_row(row.row_id)
            mismatches = [d for d in compare_with_golden(cc) if d.status == "mismatch"]
            assert mismatches == [], row.row_id
