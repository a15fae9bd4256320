import csv

import numpy as np
import pytest

from apps.cli_io.writers import (
    REPORT_COLUMNS,
    fmt,
    read_field_vtk,
    read_points_csv,
    write_field_vtk,
    write_points_csv,
    write_report_csv,
    write_table_csv,
    write_trace_csv,
)
from apps.core.exceptions import DomainError
from apps.core.tests.factories import GridFactory, RandomFieldFactory
from apps.cycle.models import CycleRecord, DiagnosticSample, SolveReport
from apps.grid.models import Field
from apps.grid.services import make_grid
from apps.problems.models import VectorField

GOLDEN_2D = """# vtk DataFile Version 3.0
u
ASCII
DATASET STRUCTURED_POINTS
DIMENSIONS 3 3 1
ORIGIN 0 0 0
SPACING 0.5 0.5 1
POINT_DATA 9
SCALARS u double 1
LOOKUP_TABLE default
""" + "1.5\n" * 9


def read_csv(path):
    with path.open(newline="") as handle:
        return list(csv.reader(handle))


class TestVtk:
    def test_golden_scalar_file(self, tmp_path):
        path = write_field_vtk(Field.full(make_grid(2, 1), 1.5), tmp_path / "u.vtk")
        assert path.read_text() == GOLDEN_2D

    def test_cube_header(self, tmp_path):
        path = write_field_vtk(Field.full(make_grid(3, 1), 2.0), tmp_path / "u.vtk", "phi")
        lines = path.read_text().splitlines()
        assert lines[1] == "phi"
        assert lines[4] == "DIMENSIONS 3 3 3"
        assert lines[6] == "SPACING 0.5 0.5 0.5"
        assert lines[7] == "POINT_DATA 27"
        assert lines[8] == "SCALARS phi double 1"
        assert len(lines) == 10 + 27

    def test_values_round_trip_in_linear_order(self, tmp_path):
        field = RandomFieldFactory(grid=GridFactory(dim=3, n=2))
        data = read_field_vtk(write_field_vtk(field, tmp_path / "out" / "u.vtk"))
        assert data.dimensions == (5, 5, 5)
        assert data.spacing == (0.25, 0.25, 0.25)
        assert data.name == "u"
        assert np.array_equal(data.values[:, 0], field.linear())

    def test_linear_order_is_x_fastest(self, tmp_path):
        grid = make_grid(2, 1)
        field = Field.from_function(grid, lambda x, y: x + 10 * y)
        data = read_field_vtk(write_field_vtk(field, tmp_path / "u.vtk"))
        assert data.values[:4, 0].tolist() == [0.0, 0.5, 1.0, 5.0]

    def test_2d_vectors_are_padded(self, tmp_path):
        grid = make_grid(2, 2)
        v = VectorField((Field.full(grid, 1.0), Field.full(grid, -2.0)))
        data = read_field_vtk(write_field_vtk(v, tmp_path / "v.vtk", "v"))
        assert data.values.shape == (25, 3)
        assert np.all(data.values == [1.0, -2.0, 0.0])

    def test_missing_data_block(self, tmp_path):
        path = tmp_path / "empty.vtk"
        path.write_text("# vtk DataFile Version 3.0\nempty\nASCII\n")
        with pytest.raises(DomainError):
            read_field_vtk(path)


class TestCsv:
    def test_fmt(self):
        assert fmt(None) == ""
        assert fmt(0.1) == "0.10000000000000001"
        assert float(fmt(np.pi)) == np.pi

    def test_points_round_trip(self, tmp_path):
        points = np.random.default_rng(0).random((7, 3))
        path = write_points_csv(points, tmp_path / "points.csv")
        assert read_csv(path)[0] == ["x", "y", "z"]
        assert np.array_equal(read_points_csv(path), points)

    def test_points_without_header(self, tmp_path):
        path = tmp_path / "seeds.csv"
        path.write_text("0.1, 0.2\n\n0.3,0.4\n")
        assert read_points_csv(path).tolist() == [[0.1, 0.2], [0.3, 0.4]]

    @pytest.mark.parametrize("content", ["x,y\n", "0.1,0.2\n0.3\n", "0.1\n0.2\n", "0.1,0.2\nfoo,bar\n"])
    def test_bad_points(self, tmp_path, content):
        path = tmp_path / "bad.csv"
        path.write_text(content)
        with pytest.raises(DomainError):
            read_points_csv(path)

    def test_report_and_trace(self, tmp_path):
        report = SolveReport(
            records=[
                CycleRecord(0, 9, 0.5, (DiagnosticSample(0, 1, 0.7), DiagnosticSample(1, 0, 0.6)), 0.01),
                CycleRecord(1, 18, 0.25, (DiagnosticSample(0, 1, 0.4),)),
            ]
        )
        rows = read_csv(write_report_csv(report, tmp_path / "report.csv"))
        assert tuple(rows[0]) == REPORT_COLUMNS
        assert rows[1] == ["0", "9", "0.5", "0.59999999999999998", "0.01"]
        assert rows[2] == ["1", "18", "0.25", "0.40000000000000002", ""]
        trace = read_csv(write_trace_csv(report, tmp_path / "trace.csv"))
        assert len(trace) == 4
        assert trace[3] == ["1", "0", "1", "0.40000000000000002"]

    def test_table(self, tmp_path):
        rows = read_csv(write_table_csv([{"n": 2, "time": 0.5}, {"n": 3, "time": 1.25}], tmp_path / "t.csv"))
        assert rows == [["n", "time"], ["2", "0.5"], ["3", "1.25"]]
