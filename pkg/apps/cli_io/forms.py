"""
Forms for command-line runs.
"""

import math
from collections.abc import Mapping
from pathlib import Path
from typing import Any

from apps.core.conf import settings
from apps.core.exceptions import DomainError, ValidationError
from apps.grid.services import MAX_LEVEL
from apps.problems.models import CapacitorMode

from .models import RunConfig
from .writers import read_points_csv

# Largest grid exponent a command may allocate, per dimension
MAX_N = {2: 12, 3: 8}


class RunConfigForm:
    """
    Validate raw flag values into a RunConfig before anything is allocated.

    Missing values fall back to ``initial`` (per-command defaults), then to settings.
    """

    fields = (
        "command",
        "dim",
        "n",
        "n_min",
        "nr",
        "tol",
        "max_cycles",
        "safety",
        "threads",
        "a",
        "r",
        "mode",
        "t",
        "steps",
        "curve",
        "closed",
        "seeds",
        "out",
    )

    def __init__(self, data: Mapping[str, Any], initial: Mapping[str, Any] | None = None):
        self.data = dict(data)
        self.initial = dict(initial or {})
        self.cleaned_data: dict[str, Any] = {}
        self.errors: dict[str, str] = {}

    def value(self, name: str) -> Any:
        value = self.data.get(name)
        return self.initial.get(name) if value is None else value

    def is_valid(self) -> bool:
        self.cleaned_data, self.errors = {}, {}
        for name in self.fields:
            try:
                self.cleaned_data[name] = getattr(self, f"clean_{name}")()
            except ValidationError as exc:
                self.errors[name] = exc.errors.get("__all__", str(exc))
        if not self.errors:
            try:
                self.clean()
            except ValidationError as exc:
                self.errors.update(exc.errors)
        return not self.errors

    def clean(self) -> None:
        """Cross-field checks."""
        data = self.cleaned_data
        if data["curve"] is not None:
            # a curve file fixes the grid dimension
            try:
                data["dim"] = read_points_csv(data["curve"]).shape[1]
            except DomainError as exc:
                raise ValidationError({"curve": str(exc)}) from exc
        if data["n"] > MAX_N[data["dim"]]:
            raise ValidationError({"n": f"At most {MAX_N[data['dim']]} for a {data['dim']}D grid."})
        if data["n_min"] > data["n"]:
            raise ValidationError({"n_min": "Must not exceed n."})

    def save(self) -> RunConfig:
        if not self.is_valid():
            raise ValidationError(self.errors)
        data = dict(self.cleaned_data)
        data["n_r"] = data.pop("nr")
        return RunConfig(**data)

    # Helpers

    def _number(self, name: str, cast, default=None):
        value = self.value(name)
        if value is None:
            value = default
        try:
            number = cast(value)
        except (TypeError, ValueError) as exc:
            raise ValidationError(f"Not a valid number: {value!r}.") from exc
        if isinstance(number, float) and not math.isfinite(number):
            raise ValidationError("Must be finite.")
        return number

    def _existing_path(self, name: str) -> Path | None:
        value = self.value(name)
        if value is None:
            return None
        path = Path(value)
        if not path.is_file():
            raise ValidationError(f"File not found: {path}.")
        return path

    # Fields

    def clean_command(self) -> str:
        command = self.value("command")
        if not command:
            raise ValidationError("A subcommand is required.")
        return str(command)

    def clean_dim(self) -> int:
        dim = self._number("dim", int, 2)
        if dim not in (2, 3):
            raise ValidationError("Dimension must be 2 or 3.")
        return dim

    def clean_n(self) -> int:
        n = self._number("n", int)
        if not 1 <= n <= MAX_LEVEL:
            raise ValidationError(f"Grid exponent must lie in [1, {MAX_LEVEL}].")
        return n

    def clean_n_min(self) -> int:
        n_min = self._number("n_min", int, 1)
        if n_min < 1:
            raise ValidationError("Must be at least 1.")
        return n_min

    def clean_nr(self) -> int | None:
        value = self.value("nr")
        if value is None:
            value = settings.SGML_NR
        if str(value).strip().lower() in ("inf", "none", "unlimited"):
            return None
        n_r = self._number("nr", int, value)
        if n_r < 1:
            raise ValidationError("Must be at least 1, or 'inf'.")
        return n_r

    def clean_tol(self) -> float:
        tol = self._number("tol", float, settings.SGML_TOL)
        if tol <= 0.0:
            raise ValidationError("Tolerance must be positive.")
        return tol

    def clean_max_cycles(self) -> int:
        max_cycles = self._number("max_cycles", int, settings.SGML_MAX_CYCLES)
        if max_cycles < 1:
            raise ValidationError("Must be at least 1.")
        return max_cycles

    def clean_safety(self) -> float:
        safety = self._number("safety", float, settings.SGML_SAFETY)
        if not 0.0 < safety <= 1.0:
            raise ValidationError("Safety factor must lie in (0, 1].")
        return safety

    def clean_threads(self) -> int:
        threads = self._number("threads", int, settings.SGML_THREADS)
        if threads < 1:
            raise ValidationError("Must be at least 1.")
        return threads

    def clean_a(self) -> float:
        return self._number("a", float, 0.1)

    def clean_r(self) -> float:
        r = self._number("r", float, 0.14)
        if r <= 0.0:
            raise ValidationError("Radius must be positive.")
        return r

    def clean_mode(self) -> CapacitorMode | None:
        value = self.value("mode")
        if value is None:
            return None
        try:
            return CapacitorMode(str(value).lower())
        except ValueError as exc:
            raise ValidationError("Mode must be 'high' or 'low'.") from exc

    def clean_t(self) -> float:
        t = self._number("t", float, 1.0)
        if t < 0.0:
            raise ValidationError("Pseudo-time must be non-negative.")
        return t

    def clean_steps(self) -> int:
        steps = self._number("steps", int, 20)
        if steps < 1:
            raise ValidationError("Must be at least 1.")
        return steps

    def clean_curve(self) -> Path | None:
        return self._existing_path("curve")

    def clean_closed(self) -> bool:
        return bool(self.value("closed"))

    def clean_seeds(self) -> Path | None:
        return self._existing_path("seeds")

    def clean_out(self) -> Path:
        value = self.value("out")
        if value is None:
            return Path(settings.SGML_OUTPUT_DIR) / self.cleaned_data.get("command", "run")
        return Path(value)
