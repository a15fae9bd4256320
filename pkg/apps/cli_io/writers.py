"""
Legacy ASCII VTK structured points and plain CSV files.

Floats are written with 17 significant digits so every value round-trips.
"""

import csv
import logging
from collections.abc import Iterable, Mapping, Sequence
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from apps.core.exceptions import DomainError
from apps.cycle.models import SolveReport
from apps.grid.models import Field, Grid
from apps.problems.models import VectorField

logger = logging.getLogger(__name__)

REPORT_COLUMNS = ("cycle", "work_units", "residual", "diag_residual_min", "l1_error")
TRACE_COLUMNS = ("cycle", "pass", "level", "diag_residual")


def fmt(value: float | None) -> str:
    if value is None:
        return ""
    return format(float(value), ".17g")


def _prepare(path: Path) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    return path


def write_field_vtk(field: Field | VectorField, path: Path, name: str = "u") -> Path:
    """STRUCTURED_POINTS file with one SCALARS or VECTORS block in linear node order."""
    grid: Grid = field.grid
    h = fmt(grid.h)
    if grid.dim == 2:
        dimensions, spacing = f"{grid.N} {grid.N} 1", f"{h} {h} 1"
    else:
        dimensions, spacing = f"{grid.N} {grid.N} {grid.N}", f"{h} {h} {h}"
    lines = [
        "# vtk DataFile Version 3.0",
        name,
        "ASCII",
        "DATASET STRUCTURED_POINTS",
        f"DIMENSIONS {dimensions}",
        "ORIGIN 0 0 0",
        f"SPACING {spacing}",
        f"POINT_DATA {grid.size}",
    ]
    if isinstance(field, VectorField):
        vectors = np.column_stack([component.linear() for component in field.components])
        if vectors.shape[1] == 2:
            vectors = np.column_stack([vectors, np.zeros(grid.size)])
        lines.append(f"VECTORS {name} double")
        lines.extend(" ".join(fmt(v) for v in row) for row in vectors)
    else:
        lines.extend([f"SCALARS {name} double 1", "LOOKUP_TABLE default"])
        lines.extend(fmt(v) for v in field.linear())

    path = _prepare(path)
    with path.open("w", newline="\n") as handle:
        handle.write("\n".join(lines) + "\n")
    logger.info("Wrote %s", path)
    return path


@dataclass(frozen=True, eq=False)
class VtkData:
    dimensions: tuple[int, ...]
    spacing: tuple[float, ...]
    name: str
    values: np.ndarray  # (points, components)


def read_field_vtk(path: Path) -> VtkData:
    """Parse a file written by :func:`write_field_vtk`."""
    lines = Path(path).read_text().splitlines()
    header: dict[str, list[str]] = {}
    for index, line in enumerate(lines):
        if not line.strip():
            continue
        keyword, *rest = line.split()
        if keyword in ("DIMENSIONS", "SPACING", "POINT_DATA"):
            header[keyword] = rest
        elif keyword == "SCALARS":
            name, start, components = rest[0], index + 2, 1
            break
        elif keyword == "VECTORS":
            name, start, components = rest[0], index + 1, 3
            break
    else:
        raise DomainError(f"{path} holds no SCALARS or VECTORS block.")

    points = int(header["POINT_DATA"][0])
    data = np.array([float(token) for line in lines[start : start + points] for token in line.split()])
    return VtkData(
        dimensions=tuple(int(v) for v in header["DIMENSIONS"]),
        spacing=tuple(float(v) for v in header["SPACING"]),
        name=name,
        values=data.reshape(points, components),
    )


def write_rows(path: Path, columns: Sequence[str], rows: Iterable[Sequence[object]]) -> Path:
    path = _prepare(path)
    with path.open("w", newline="") as handle:
        writer = csv.writer(handle, lineterminator="\n")
        writer.writerow(columns)
        for row in rows:
            writer.writerow([fmt(v) if isinstance(v, float) else v for v in row])
    logger.info("Wrote %s", path)
    return path


def write_report_csv(report: SolveReport, path: Path) -> Path:
    return write_rows(
        path,
        REPORT_COLUMNS,
        (
            (record.cycle, record.work_units, record.residual, record.diag_residual_min, fmt(record.l1_error))
            for record in report.records
        ),
    )


def write_trace_csv(report: SolveReport, path: Path) -> Path:
    return write_rows(
        path,
        TRACE_COLUMNS,
        (
            (record.cycle, sample.index, sample.level, sample.residual)
            for record in report.records
            for sample in record.trace
        ),
    )


def write_points_csv(points: np.ndarray, path: Path, columns: Sequence[str] | None = None) -> Path:
    points = np.atleast_2d(points)
    columns = columns or ("x", "y", "z")[: points.shape[1]]
    return write_rows(path, columns, ([float(v) for v in row] for row in points))


def write_table_csv(rows: Sequence[Mapping[str, object]], path: Path) -> Path:
    columns = list(rows[0]) if rows else []
    return write_rows(path, columns, ([row[column] for column in columns] for row in rows))


def read_points_csv(path: Path) -> np.ndarray:
    """One point per line, ``x,y[,z]``; a non-numeric first line is taken as a header."""
    points = []
    with Path(path).open(newline="") as handle:
        for number, row in enumerate(csv.reader(handle)):
            cells = [cell.strip() for cell in row if cell.strip()]
            if not cells:
                continue
            try:
                points.append([float(cell) for cell in cells])
            except ValueError as exc:
                if number == 0:
                    continue
                raise DomainError(f"{path}:{number + 1}: not a point: {row}") from exc
    if not points or len({len(point) for point in points}) != 1 or len(points[0]) not in (2, 3):
        raise DomainError(f"{path} must hold 2D or 3D points of one dimension.")
    return np.array(points)
