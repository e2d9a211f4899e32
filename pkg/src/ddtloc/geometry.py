"""Axis-aligned boxes in inclusive pixel coordinates."""

from __future__ import annotations

from dataclasses import dataclass

from .errors import ValidationError


@dataclass(frozen=True)
class BoundingBox:
    """Inclusive box: a 1x1-pixel box has xmin == xmax and area 1."""

    xmin: int
    ymin: int
    xmax: int
    ymax: int

    def __post_init__(self):
        for name in ("xmin", "ymin", "xmax", "ymax"):
            value = getattr(self, name)
            if not isinstance(value, (int,)) or isinstance(value, bool):
                raise ValidationError(f"box {name} must be an int, got {value!r}")
            if value < 0:
                raise ValidationError(f"box {name} must be >= 0, got {value}")
        if self.xmax < self.xmin:
            raise ValidationError(f"box has xmax {self.xmax} < xmin {self.xmin}")
        if self.ymax < self.ymin:
            raise ValidationError(f"box has ymax {self.ymax} < ymin {self.ymin}")

    @property
    def width(self) -> int:
        return self.xmax - self.xmin + 1

    @property
    def height(self) -> int:
        return self.ymax - self.ymin + 1

    @property
    def area(self) -> int:
        return self.width * self.height

    def as_list(self) -> list[int]:
        """[xmin, ymin, xmax, ymax], the on-disk ordering."""
        return [self.xmin, self.ymin, self.xmax, self.ymax]

    @classmethod
    def from_list(cls, values) -> "BoundingBox":
        values = list(values)
        if len(values) != 4:
            raise ValidationError(f"box needs 4 coordinates, got {len(values)}")
        coords = []
        for v in values:
            if isinstance(v, bool) or not isinstance(v, int):
                raise ValidationError(f"box coordinates must be ints, got {v!r}")
            coords.append(v)
        return cls(*coords)
