"""Localization and noise-detection metrics.

CorLoc counts an image correct when the predicted box overlaps some
ground-truth box with IoU strictly above 0.5.  Images annotated with zero
boxes are noisy: they are excluded from both the numerator and denominator.

The ROC treats noisy as the positive class: at threshold t an image is
predicted noisy when its noise score is at or below t.  Points are swept
over every observed score plus the two infinities; the area accumulates in
integer counts so a perfect separation yields exactly 1.0.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping

from .descriptors import Annotation
from .errors import ValidationError
from .geometry import BoundingBox

CORLOC_IOU_THRESHOLD = 0.5


def iou(a: BoundingBox, b: BoundingBox) -> float:
    """Intersection over union of two inclusive pixel boxes."""
    ix = min(a.xmax, b.xmax) - max(a.xmin, b.xmin) + 1
    iy = min(a.ymax, b.ymax) - max(a.ymin, b.ymin) + 1
    if ix <= 0 or iy <= 0:
        return 0.0
    intersection = ix * iy
    union = a.area + b.area - intersection
    return intersection / union


@dataclass(frozen=True)
class ImageEvaluation:
    """Per-image outcome; ``correct`` is None for images excluded as noisy."""

    image_id: str
    box: BoundingBox | None
    best_iou: float | None
    correct: bool | None


@dataclass(frozen=True, eq=False)
class CorLocReport:
    per_image: tuple[ImageEvaluation, ...]
    n_evaluated: int
    n_correct: int

    @property
    def corloc(self) -> float:
        return self.n_correct / self.n_evaluated


def evaluate_corloc(
    predictions: Mapping[str, BoundingBox | None],
    annotations: Mapping[str, Annotation],
) -> CorLocReport:
    """Score predictions against annotations over every annotated image.

    Every non-noisy annotated image must have a prediction entry (a None
    prediction counts as incorrect).
    """
    missing = [
        image_id
        for image_id, ann in annotations.items()
        if not ann.is_noisy and image_id not in predictions
    ]
    if missing:
        raise ValidationError(
            f"no prediction for annotated images: {', '.join(sorted(missing))}"
        )
    per_image = []
    n_evaluated = 0
    n_correct = 0
    for image_id, ann in annotations.items():
        if ann.is_noisy:
            box = predictions.get(image_id)
            per_image.append(
                ImageEvaluation(image_id=image_id, box=box, best_iou=None, correct=None)
            )
            continue
        box = predictions[image_id]
        if box is None:
            per_image.append(
                ImageEvaluation(image_id=image_id, box=None, best_iou=0.0, correct=False)
            )
            n_evaluated += 1
            continue
        best = max(iou(box, gt) for gt in ann.boxes)
        correct = best > CORLOC_IOU_THRESHOLD
        per_image.append(
            ImageEvaluation(image_id=image_id, box=box, best_iou=best, correct=correct)
        )
        n_evaluated += 1
        n_correct += int(correct)
    if n_evaluated == 0:
        raise ValidationError("no non-noisy annotated images to evaluate")
    return CorLocReport(
        per_image=tuple(per_image), n_evaluated=n_evaluated, n_correct=n_correct
    )


@dataclass(frozen=True, eq=False)
class RocReport:
    """ROC points as (fpr, tpr) swept from -inf to +inf thresholds."""

    points: tuple[tuple[float, float], ...]
    auc: float
    n_noisy: int
    n_clean: int


def evaluate_roc(
    scores: Mapping[str, float],
    labels: Mapping[str, str],
) -> RocReport:
    """ROC over noise scores; an image is flagged noisy when score <= threshold."""
    missing = sorted(set(scores) - set(labels))
    if missing:
        raise ValidationError(f"no label for scored images: {', '.join(missing)}")
    for image_id, label in labels.items():
        if label not in ("noisy", "clean"):
            raise ValidationError(
                f"{image_id!r}: label must be 'noisy' or 'clean', got {label!r}"
            )
    noisy = [s for i, s in scores.items() if labels[i] == "noisy"]
    clean = [s for i, s in scores.items() if labels[i] == "clean"]
    if not noisy or not clean:
        raise ValidationError("ROC requires at least one noisy and one clean image")

    thresholds = sorted(set(scores.values()))
    n_noisy, n_clean = len(noisy), len(clean)
    # Integer counts per threshold; floats appear only in the emitted points.
    count_pairs = [(0, 0)]  # threshold -inf: nothing flagged
    for t in thresholds:
        fp = sum(1 for s in clean if s <= t)
        tp = sum(1 for s in noisy if s <= t)
        count_pairs.append((fp, tp))
    # threshold +inf flags everything; the max-score point already does.
    if count_pairs[-1] != (n_clean, n_noisy):
        count_pairs.append((n_clean, n_noisy))

    area_twice = 0  # sum of (fp1-fp0)*(tp0+tp1), trapezoids scaled by 2*n_clean*n_noisy
    for (fp0, tp0), (fp1, tp1) in zip(count_pairs, count_pairs[1:]):
        area_twice += (fp1 - fp0) * (tp0 + tp1)
    auc = area_twice / (2 * n_clean * n_noisy)
    points = tuple((fp / n_clean, tp / n_noisy) for fp, tp in count_pairs)
    return RocReport(points=points, auc=auc, n_noisy=n_noisy, n_clean=n_clean)
