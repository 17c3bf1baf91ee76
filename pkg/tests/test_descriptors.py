"""Descriptor files: JSON bodies and fields, the voxel binary + sidecar
pair, and the CSV writers.

The format contract under test: writers are byte-deterministic, loaders
round-trip exactly, and every malformed input maps to FormatError with a
message naming the problem.
"""

import json

import numpy as np
import pytest

from fracgeo.bodies import Ball, Ellipsoid, Polytope, RadialTable
from fracgeo.descriptors import (
    CsvTable,
    body_from_descriptor,
    body_to_descriptor,
    descriptor_digest,
    field_from_descriptor,
    field_to_descriptor,
    load_descriptor,
    load_voxel,
    radial_profile_from_csv,
    radial_profile_to_csv,
    radial_table_to_csv,
    read_csv_table,
    save_voxel,
    write_json,
)
from fracgeo.errors import FormatError
from fracgeo.fields import IndicatorOfBody, RadialProfile, VoxelGrid
from fracgeo.quadrature import sphere_grid


class TestBodyRoundTrip:
    @pytest.mark.parametrize("body", [
        Ball(1.5, n=2),
        Ball(0.5, n=3, center=[0.1, 0.2, 0.3]),
        Ellipsoid.from_semi_axes([2.0, 0.5]),
        Polytope.from_vertices([[-0.25, -0.25], [0.75, -0.25],
                                [-0.25, 0.75]]),
    ])
    def test_round_trip(self, body):
        back = body_from_descriptor(body_to_descriptor(body))
        assert type(back) is type(body)
        if isinstance(body, Ball):
            assert back.r == body.r and back.n == body.n
            assert np.array_equal(back.center_array, body.center_array)
        elif isinstance(body, Ellipsoid):
            assert np.array_equal(back.A, body.A)
        else:
            assert np.array_equal(back.vertices, body.vertices)

    def test_box_kind_reads_as_polytope(self):
        body = body_from_descriptor(
            {"kind": "box", "lo": [0.0, 0.0], "hi": [1.0, 2.0]})
        assert isinstance(body, Polytope)
        from fracgeo.bodies import exact_volume
        assert exact_volume(body) == pytest.approx(2.0, rel=1e-12)

    def test_semi_axes_spelling(self):
        body = body_from_descriptor(
            {"kind": "ellipsoid", "semi_axes": [2.0, 0.5]})
        ref = Ellipsoid.from_semi_axes([2.0, 0.5])
        assert np.allclose(body.A, ref.A)

    def test_missing_keys(self):
        with pytest.raises(FormatError, match="missing key"):
            body_from_descriptor({"kind": "ball", "n": 2})
        with pytest.raises(FormatError, match="A or semi_axes"):
            body_from_descriptor({"kind": "ellipsoid"})
        with pytest.raises(FormatError, match="unknown body kind"):
            body_from_descriptor({"kind": "blob"})


class TestFieldRoundTrip:
    def test_indicator(self):
        f = IndicatorOfBody(Ball(1.0, n=2), height=2.5)
        back = field_from_descriptor(field_to_descriptor(f))
        assert isinstance(back, IndicatorOfBody)
        assert back.height == 2.5
        assert back.body.r == 1.0

    def test_radial_profile(self):
        f = RadialProfile(2, [0.5, 1.0], [2.0, 1.0])
        back = field_from_descriptor(field_to_descriptor(f))
        assert isinstance(back, RadialProfile)
        assert np.array_equal(back.radii, f.radii)
        assert np.array_equal(back.values, f.values)

    def test_voxel_needs_payload_name(self):
        g = VoxelGrid([0.0, 0.0], [1.0, 1.0], np.ones((4, 4)))
        with pytest.raises(FormatError, match="payload"):
            field_to_descriptor(g)

    def test_unknown_kind(self):
        with pytest.raises(FormatError, match="unknown field kind"):
            field_from_descriptor({"kind": "mesh"})


class TestVoxelBinary:
    def _grid(self):
        rng = np.random.default_rng(0)
        return VoxelGrid([-1.0, -0.5], [1.0, 0.5], rng.random((8, 16)))

    def test_round_trip_exact(self, tmp_path):
        g = self._grid()
        path = str(tmp_path / "field.bin")
        save_voxel(g, path)
        back = load_voxel(path)
        assert np.array_equal(back.values, g.values)
        assert np.array_equal(back.lo, g.lo)
        assert np.array_equal(back.hi, g.hi)

    def test_sidecar_loads_through_descriptor(self, tmp_path):
        g = self._grid()
        save_voxel(g, str(tmp_path / "field.bin"))
        back = load_descriptor(str(tmp_path / "field.json"))
        assert isinstance(back, VoxelGrid)
        assert np.array_equal(back.values, g.values)

    def test_bare_bin_loads_directly(self, tmp_path):
        g = self._grid()
        path = str(tmp_path / "field.bin")
        save_voxel(g, path)
        back = load_descriptor(path)
        assert np.array_equal(back.values, g.values)

    def test_writer_is_byte_deterministic(self, tmp_path):
        g = self._grid()
        p1, p2 = str(tmp_path / "a.bin"), str(tmp_path / "b.bin")
        save_voxel(g, p1)
        save_voxel(g, p2)
        assert open(p1, "rb").read() == open(p2, "rb").read()

    def test_truncated_header(self, tmp_path):
        path = tmp_path / "bad.bin"
        path.write_bytes(b"\x02\x00\x00")
        with pytest.raises(FormatError, match="truncated"):
            load_voxel(str(path))

    def test_implausible_dimension(self, tmp_path):
        path = tmp_path / "bad.bin"
        path.write_bytes(np.asarray([99], dtype="<i8").tobytes())
        with pytest.raises(FormatError, match="implausible dimension"):
            load_voxel(str(path))

    def test_payload_length_mismatch(self, tmp_path):
        g = self._grid()
        path = tmp_path / "field.bin"
        save_voxel(g, str(path))
        raw = path.read_bytes()
        path.write_bytes(raw[:-8])  # drop one float
        with pytest.raises(FormatError, match="header promises"):
            load_voxel(str(path))

    def test_sidecar_disagreement(self, tmp_path):
        g = self._grid()
        save_voxel(g, str(tmp_path / "field.bin"))
        sidecar = tmp_path / "field.json"
        desc = json.loads(sidecar.read_text())
        desc["counts"] = [8, 99]
        sidecar.write_text(json.dumps(desc))
        with pytest.raises(FormatError, match="disagrees"):
            load_descriptor(str(sidecar))

    def test_missing_file(self, tmp_path):
        with pytest.raises(FormatError, match="cannot read"):
            load_voxel(str(tmp_path / "absent.bin"))


class TestLoadDescriptor:
    def test_bad_json_reports_position(self, tmp_path):
        path = tmp_path / "bad.json"
        path.write_text('{"kind": "ball",\n  "r": }\n')
        with pytest.raises(FormatError, match=r"line 2"):
            load_descriptor(str(path))

    def test_non_object_rejected(self, tmp_path):
        path = tmp_path / "arr.json"
        path.write_text("[1, 2, 3]\n")
        with pytest.raises(FormatError, match="JSON object"):
            load_descriptor(str(path))

    def test_unknown_kind(self, tmp_path):
        path = tmp_path / "odd.json"
        path.write_text('{"kind": "spline"}\n')
        with pytest.raises(FormatError, match="unknown kind"):
            load_descriptor(str(path))

    def test_body_file(self, tmp_path):
        path = tmp_path / "ball.json"
        write_json({"kind": "ball", "n": 2, "r": 1.0}, str(path))
        body = load_descriptor(str(path))
        assert isinstance(body, Ball)

    def test_write_json_is_byte_deterministic(self, tmp_path):
        obj = {"b": 2, "a": [1.0, 2.0], "c": {"z": 0, "y": 1}}
        p1, p2 = tmp_path / "x.json", tmp_path / "y.json"
        write_json(obj, str(p1))
        write_json(obj, str(p2))
        assert p1.read_bytes() == p2.read_bytes()
        assert p1.read_text().endswith("\n")


class TestDigest:
    def test_digest_is_key_order_independent(self):
        a = {"kind": "ball", "n": 2, "r": 1.0}
        b = {"r": 1.0, "n": 2, "kind": "ball"}
        assert descriptor_digest(a) == descriptor_digest(b)
        assert len(descriptor_digest(a)) == 16

    def test_digest_separates_values(self):
        a = {"kind": "ball", "n": 2, "r": 1.0}
        b = {"kind": "ball", "n": 2, "r": 2.0}
        assert descriptor_digest(a) != descriptor_digest(b)


class TestCsv:
    def test_radial_table_round_trip_exact(self, tmp_path):
        q = sphere_grid(2, 16)
        radii = 1.0 + 0.1 * np.cos(2.0 * np.arange(16.0))
        # Mirror the values so the table validates as origin symmetric.
        from fracgeo.quadrature import antipodal_indices
        perm = antipodal_indices(q)
        radii = 0.5 * (radii + radii[perm])
        table = RadialTable(q, radii, origin_symmetric=True)
        path = str(tmp_path / "table.csv")
        radial_table_to_csv(table, path)
        back = read_csv_table(path)
        assert back.header == ["u_1", "u_2", "radius"]
        # %.17g preserves doubles exactly.
        assert np.array_equal(back.columns[:, 2], table.radii)
        assert np.array_equal(back.columns[:, :2], q.nodes)

    def test_custom_value_column(self, tmp_path):
        q = sphere_grid(2, 8)
        table = RadialTable(q, np.ones(8), origin_symmetric=True)
        path = str(tmp_path / "support.csv")
        radial_table_to_csv(table, path, value_name="support",
                            values=2.0 * np.ones(8))
        back = read_csv_table(path)
        assert back.header[-1] == "support"
        assert np.all(back.columns[:, 2] == 2.0)

    def test_value_length_mismatch(self, tmp_path):
        q = sphere_grid(2, 8)
        table = RadialTable(q, np.ones(8), origin_symmetric=True)
        with pytest.raises(FormatError, match="length"):
            radial_table_to_csv(table, str(tmp_path / "x.csv"),
                                values=np.ones(5))

    def test_radial_profile_round_trip(self, tmp_path):
        f = RadialProfile(2, [0.5, 1.0, 1.5], [3.0, 2.0, 0.25])
        path = str(tmp_path / "profile.csv")
        radial_profile_to_csv(f, path)
        back = radial_profile_from_csv(path, 2)
        assert np.array_equal(back.radii, f.radii)
        assert np.array_equal(back.values, f.values)

    def test_profile_header_checked(self, tmp_path):
        path = tmp_path / "wrong.csv"
        path.write_text("r,v\n0.5,1.0\n")
        with pytest.raises(FormatError, match="expected header"):
            radial_profile_from_csv(str(path), 2)

    def test_read_rejects_garbage(self, tmp_path):
        path = tmp_path / "bad.csv"
        path.write_text("a,b\n1.0,two\n")
        with pytest.raises(FormatError, match="non-numeric"):
            read_csv_table(str(path))
        empty = tmp_path / "empty.csv"
        empty.write_text("")
        with pytest.raises(FormatError, match="empty"):
            read_csv_table(str(empty))
        ragged = tmp_path / "ragged.csv"
        ragged.write_text("a,b\n1.0\n")
        with pytest.raises(FormatError, match="ragged"):
            read_csv_table(str(ragged))

    def test_empty_data_rows_allowed(self, tmp_path):
        path = tmp_path / "none.csv"
        path.write_text("a,b\n")
        back = read_csv_table(str(path))
        assert isinstance(back, CsvTable)
        assert back.columns.shape == (0, 2)
