"""Descriptor grids, descriptor sets, annotations, and the DDTD file format.

A DDTD file stores one image's convolutional descriptor grid:

    bytes 0..3    magic "DDTD"
    bytes 4..5    format version, uint16 little-endian (currently 1)
    bytes 6..7    reserved, must be zero
    bytes 8..31   grid height, grid width, descriptor dim, image height,
                  image width, image-id byte length: six uint32 little-endian
    next id_len   image id, UTF-8
    rest          float32 little-endian descriptors, row-major (row, col, channel)
"""

from __future__ import annotations

import struct
from dataclasses import dataclass
from pathlib import Path
from typing import BinaryIO, Iterator, Mapping

import json

import numpy as np

from .errors import (
    DescriptorFormatError,
    DimensionMismatchError,
    TruncatedPayloadError,
    ValidationError,
)
from .geometry import BoundingBox

MAGIC = b"DDTD"
FORMAT_VERSION = 1

# magic, version, reserved, grid_h, grid_w, dim, img_h, img_w, id_len
_HEADER = struct.Struct("<4sHHIIIIII")


@dataclass(frozen=True, eq=False)
class DescriptorGrid:
    """One image's h x w grid of d-dimensional descriptors (float32).

    ``img_h``/``img_w`` are the source image's pixel dimensions, kept so
    cell-level results can be mapped back to pixel coordinates.
    """

    image_id: str
    data: np.ndarray
    img_h: int
    img_w: int

    def __post_init__(self):
        if not self.image_id:
            raise ValidationError("image_id must be non-empty")
        data = np.asarray(self.data)
        if data.ndim != 3:
            raise ValidationError(
                f"{self.image_id}: descriptor data must be (h, w, d), got shape {data.shape}"
            )
        if 0 in data.shape:
            raise ValidationError(f"{self.image_id}: descriptor grid has a zero dimension")
        data = np.ascontiguousarray(data, dtype=np.float32)
        if not np.isfinite(data).all():
            raise ValidationError(f"{self.image_id}: descriptors contain non-finite values")
        data.flags.writeable = False
        object.__setattr__(self, "data", data)
        for name in ("img_h", "img_w"):
            value = getattr(self, name)
            if not isinstance(value, int) or isinstance(value, bool) or value <= 0:
                raise ValidationError(f"{self.image_id}: {name} must be a positive int")
        if self.h > self.img_h or self.w > self.img_w:
            raise ValidationError(
                f"{self.image_id}: grid {self.h}x{self.w} exceeds image {self.img_h}x{self.img_w}"
            )

    @property
    def h(self) -> int:
        return self.data.shape[0]

    @property
    def w(self) -> int:
        return self.data.shape[1]

    @property
    def d(self) -> int:
        return self.data.shape[2]

    @property
    def n_cells(self) -> int:
        return self.h * self.w

    @property
    def rows(self) -> np.ndarray:
        """(h*w, d) float32 view, one descriptor per row in raster order."""
        return self.data.reshape(self.n_cells, self.d)

    def __eq__(self, other):
        if not isinstance(other, DescriptorGrid):
            return NotImplemented
        return (
            self.image_id == other.image_id
            and self.img_h == other.img_h
            and self.img_w == other.img_w
            and self.data.shape == other.data.shape
            and np.array_equal(self.data, other.data)
        )


@dataclass(frozen=True, eq=False)
class DescriptorSet:
    """Ordered collection of grids sharing one descriptor dimensionality."""

    grids: tuple[DescriptorGrid, ...]

    def __post_init__(self):
        grids = tuple(self.grids)
        if not grids:
            raise ValidationError("descriptor set must contain at least one grid")
        d = grids[0].d
        for g in grids[1:]:
            if g.d != d:
                raise DimensionMismatchError(
                    f"grid {g.image_id!r} has d={g.d}, expected d={d} "
                    f"(set by {grids[0].image_id!r})"
                )
        seen = set()
        for g in grids:
            if g.image_id in seen:
                raise ValidationError(f"duplicate image_id {g.image_id!r} in set")
            seen.add(g.image_id)
        object.__setattr__(self, "grids", grids)

    @property
    def d(self) -> int:
        return self.grids[0].d

    @property
    def n_images(self) -> int:
        return len(self.grids)

    @property
    def total_descriptors(self) -> int:
        return sum(g.n_cells for g in self.grids)

    def __len__(self) -> int:
        return len(self.grids)

    def __iter__(self) -> Iterator[DescriptorGrid]:
        return iter(self.grids)

    def __getitem__(self, index) -> DescriptorGrid:
        return self.grids[index]


@dataclass(frozen=True)
class Annotation:
    """Ground-truth boxes for one image; an empty tuple marks a noisy image."""

    image_id: str
    boxes: tuple[BoundingBox, ...]

    @property
    def is_noisy(self) -> bool:
        return len(self.boxes) == 0


def write_descriptor_file(grid: DescriptorGrid, dest) -> None:
    """Write ``grid`` to a path or binary stream in DDTD format."""
    id_bytes = grid.image_id.encode("utf-8")
    header = _HEADER.pack(
        MAGIC, FORMAT_VERSION, 0, grid.h, grid.w, grid.d, grid.img_h, grid.img_w, len(id_bytes)
    )
    payload = grid.data.astype("<f4", copy=False).tobytes()
    if isinstance(dest, (str, Path)):
        with open(dest, "wb") as fh:
            fh.write(header)
            fh.write(id_bytes)
            fh.write(payload)
    else:
        dest.write(header)
        dest.write(id_bytes)
        dest.write(payload)


def _read_exact(fh: BinaryIO, n: int, what: str, name: str) -> bytes:
    data = fh.read(n)
    if len(data) != n:
        raise TruncatedPayloadError(
            f"{name}: expected {n} bytes of {what}, got {len(data)}"
        )
    return data


def read_descriptor_file(source) -> DescriptorGrid:
    """Read one DDTD file from a path or binary stream."""
    if isinstance(source, (str, Path)):
        with open(source, "rb") as fh:
            return _read_stream(fh, str(source))
    return _read_stream(source, getattr(source, "name", "<stream>"))


def _read_stream(fh: BinaryIO, name: str) -> DescriptorGrid:
    raw = _read_exact(fh, _HEADER.size, "header", name)
    magic, version, reserved, h, w, d, img_h, img_w, id_len = _HEADER.unpack(raw)
    if magic != MAGIC:
        raise DescriptorFormatError(f"{name}: bad magic {magic!r}, expected {MAGIC!r}")
    if version != FORMAT_VERSION:
        raise DescriptorFormatError(
            f"{name}: unsupported format version {version}, expected {FORMAT_VERSION}"
        )
    if reserved != 0:
        raise DescriptorFormatError(f"{name}: reserved header field must be zero, got {reserved}")
    if min(h, w, d, img_h, img_w) == 0:
        raise DescriptorFormatError(f"{name}: zero dimension in header")
    if id_len == 0:
        raise DescriptorFormatError(f"{name}: empty image id")
    try:
        image_id = _read_exact(fh, id_len, "image id", name).decode("utf-8")
    except UnicodeDecodeError as exc:
        raise DescriptorFormatError(f"{name}: image id is not valid UTF-8") from exc
    n_bytes = h * w * d * 4
    payload = _read_exact(fh, n_bytes, "descriptor payload", name)
    data = np.frombuffer(payload, dtype="<f4").reshape(h, w, d)
    try:
        return DescriptorGrid(image_id=image_id, data=data, img_h=img_h, img_w=img_w)
    except ValidationError as exc:
        raise ValidationError(f"{name}: {exc}") from exc


def load_manifest(manifest_path) -> list[tuple[str, str]]:
    """Parse a manifest: one ``image_id<TAB>filename`` per line.

    Blank lines and lines starting with '#' are skipped.
    """
    entries = []
    text = Path(manifest_path).read_text(encoding="utf-8")
    for lineno, line in enumerate(text.splitlines(), start=1):
        stripped = line.strip()
        if not stripped or stripped.startswith("#"):
            continue
        parts = stripped.split("\t")
        if len(parts) != 2 or not parts[0] or not parts[1]:
            raise ValidationError(
                f"{manifest_path}:{lineno}: expected 'image_id<TAB>filename', got {line!r}"
            )
        entries.append((parts[0], parts[1]))
    if not entries:
        raise ValidationError(f"{manifest_path}: manifest lists no images")
    return entries


def load_set(directory, manifest_path) -> DescriptorSet:
    """Load every manifest entry from ``directory``, preserving manifest order."""
    directory = Path(directory)
    grids = []
    for image_id, filename in load_manifest(manifest_path):
        path = directory / filename
        grid = read_descriptor_file(path)
        if grid.image_id != image_id:
            raise ValidationError(
                f"{path}: stored image id {grid.image_id!r} does not match "
                f"manifest id {image_id!r}"
            )
        grids.append(grid)
    return DescriptorSet(grids=tuple(grids))


def read_annotations(path, image_sizes: Mapping[str, tuple[int, int]] | None = None) -> dict[str, Annotation]:
    """Read ground-truth boxes: JSON object mapping image_id to a list of boxes.

    Each box is [xmin, ymin, xmax, ymax] in inclusive pixel coordinates; an
    empty list marks a noisy image.  When ``image_sizes`` maps ids to
    (img_h, img_w), boxes are checked against image bounds.
    """
    with open(path, "r", encoding="utf-8") as fh:
        raw = json.load(fh)
    if not isinstance(raw, dict):
        raise ValidationError(f"{path}: annotations must be a JSON object")
    annotations = {}
    for image_id, box_list in raw.items():
        if not isinstance(box_list, list):
            raise ValidationError(f"{path}: {image_id!r}: boxes must be a list")
        boxes = []
        for entry in box_list:
            if not isinstance(entry, list):
                raise ValidationError(f"{path}: {image_id!r}: each box must be a list")
            try:
                box = BoundingBox.from_list(entry)
            except ValidationError as exc:
                raise ValidationError(f"{path}: {image_id!r}: {exc}") from exc
            if image_sizes is not None and image_id in image_sizes:
                img_h, img_w = image_sizes[image_id]
                if box.xmax >= img_w or box.ymax >= img_h:
                    raise ValidationError(
                        f"{path}: {image_id!r}: box {box.as_list()} exceeds "
                        f"image bounds {img_w}x{img_h}"
                    )
            boxes.append(box)
        annotations[image_id] = Annotation(image_id=image_id, boxes=tuple(boxes))
    return annotations
