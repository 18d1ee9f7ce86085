"""Sampled observable series passed between simulators, fitters and the CLI."""

from dataclasses import dataclass, field

import numpy as np

from .errors import ValidationError


@dataclass
class TimeTrace:
    """One sampled curve: abscissa, ordinate, names/units and run metadata.

    ``extra`` holds optional aligned columns (e.g. statistical sigma or a
    shot-noise envelope) keyed by column name.
    """

    x: np.ndarray
    y: np.ndarray
    x_name: str = "time"
    x_unit: str = "s"
    y_name: str = "signal"
    y_unit: str = "dimensionless"
    metadata: dict = field(default_factory=dict)
    extra: dict = field(default_factory=dict)

    def __post_init__(self):
        self.x = np.asarray(self.x, dtype=float)
        self.y = np.asarray(self.y, dtype=float)
        if self.x.ndim != 1 or self.x.shape != self.y.shape:
            raise ValidationError("abscissa and ordinate must be 1-d arrays of equal length")
        if self.x.size == 0:
            raise ValidationError("trace must contain at least one point")
        if np.any(np.diff(self.x) <= 0.0):
            raise ValidationError("abscissa must be strictly increasing")
        if not np.all(np.isfinite(self.x)) or not np.all(np.isfinite(self.y)):
            raise ValidationError("trace values must be finite")
        for name, column in self.extra.items():
            column = np.asarray(column, dtype=float)
            if column.shape != self.x.shape:
                raise ValidationError(f"extra column '{name}' length mismatch")
            self.extra[name] = column

    def __len__(self) -> int:
        return self.x.size
