"""Dataset containers, synthetic generators, and CSV/LIBSVM ingestion."""

from __future__ import annotations

import csv
import json
from dataclasses import dataclass

import numpy as np

__all__ = [
    "DataFormatError",
    "SampleDataset",
    "PopulationDataset",
    "long_servedio_population",
    "unhinged_failure_population",
    "sample_from_population",
    "mease_sample",
    "load_csv",
    "save_csv",
    "load_libsvm",
    "standardize",
    "StandardizeParams",
]


class DataFormatError(ValueError):
    """Raised on malformed dataset files, with the offending line when known."""


@dataclass(frozen=True)
class SampleDataset:
    """A finite sample: instance matrix (n, d) and labels in {-1, +1}."""

    instances: np.ndarray
    labels: np.ndarray

    def __post_init__(self):
        x = np.asarray(self.instances, dtype=float)
        y = np.asarray(self.labels, dtype=float)
        if x.ndim != 2 or x.shape[0] < 1:
            raise ValueError("instances must be a non-empty (n, d) matrix")
        if y.shape != (x.shape[0],):
            raise ValueError("labels must be a vector matching the instance count")
        if not np.all(np.isfinite(x)):
            raise ValueError("instances must be finite")
        if not np.all(np.isin(y, (-1.0, 1.0))):
            raise ValueError("labels must be -1 or +1")
        object.__setattr__(self, "instances", x)
        object.__setattr__(self, "labels", y)

    @property
    def n(self) -> int:
        return self.instances.shape[0]

    @property
    def dim(self) -> int:
        return self.instances.shape[1]


@dataclass(frozen=True)
class PopulationDataset:
    """A finite weighted population: support points, probability mass, and
    the positive-class probability eta at each point."""

    support: np.ndarray
    mass: np.ndarray
    eta: np.ndarray

    def __post_init__(self):
        x = np.asarray(self.support, dtype=float)
        m = np.asarray(self.mass, dtype=float)
        e = np.asarray(self.eta, dtype=float)
        if x.ndim != 2 or x.shape[0] < 1:
            raise ValueError("support must be a non-empty (m, d) matrix")
        if m.shape != (x.shape[0],) or e.shape != (x.shape[0],):
            raise ValueError("mass and eta must match the support size")
        if np.any(m < 0):
            raise ValueError("mass must be non-negative")
        if abs(m.sum() - 1.0) > 1e-12:
            raise ValueError(f"mass must sum to 1, got {m.sum()!r}")
        if np.any(e < 0) or np.any(e > 1):
            raise ValueError("eta must lie in [0, 1]")
        object.__setattr__(self, "support", x)
        object.__setattr__(self, "mass", m)
        object.__setattr__(self, "eta", e)

    @property
    def dim(self) -> int:
        return self.support.shape[1]

    def to_json(self) -> str:
        return json.dumps(
            {
                "support": self.support.tolist(),
                "mass": self.mass.tolist(),
                "eta": self.eta.tolist(),
            }
        )

    @classmethod
    def from_json(cls, text: str) -> "PopulationDataset":
        try:
            doc = json.loads(text)
            return cls(
                support=np.array(doc["support"], dtype=float),
                mass=np.array(doc["mass"], dtype=float),
                eta=np.array(doc["eta"], dtype=float),
            )
        except (KeyError, TypeError, json.JSONDecodeError) as exc:
            raise DataFormatError(f"bad population JSON: {exc}") from exc


def long_servedio_population(gamma: float) -> PopulationDataset:
    """Linearly separable all-positive 2D population on which convex
    potentials fail under label noise.

    Support {(1, 0), (gamma, 5*gamma), (gamma, -gamma)} with mass
    {1/4, 1/4, 1/2}; the half-mass point stands for the duplicated
    (gamma, -gamma) instance of the four-point presentation.  The
    noise-defeats-convex-potentials guarantee needs gamma < 1/6, but larger
    values (e.g. 1/2) are accepted for illustration runs.
    """
    gamma = float(gamma)
    if not (0.0 < gamma < 1.0):
        raise ValueError(f"gamma must lie in (0, 1), got {gamma}")
    support = np.array([[1.0, 0.0], [gamma, 5.0 * gamma], [gamma, -gamma]])
    return PopulationDataset(
        support=support,
        mass=np.array([0.25, 0.25, 0.5]),
        eta=np.ones(3),
    )


def unhinged_failure_population() -> PopulationDataset:
    """Three-point separable population where the regularized centroid
    scorer misclassifies a positive instance while least squares is perfect."""
    return PopulationDataset(
        support=np.array([[1.0, 2.0], [1.0, -4.0], [-1.0, 1.0]]),
        mass=np.full(3, 1.0 / 3.0),
        eta=np.array([1.0, 1.0, 0.0]),
    )


def sample_from_population(pop: PopulationDataset, n: int, seed: int) -> SampleDataset:
    """Draw n i.i.d. examples: instance by mass, label +1 with probability eta.

    One instance draw and one label draw per example, in index order, so the
    sample is reproducible from the seed alone.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    rng = np.random.default_rng(seed)
    idx = rng.choice(pop.support.shape[0], size=n, p=pop.mass)
    labels = np.where(rng.random(n) < pop.eta[idx], 1.0, -1.0)
    return SampleDataset(instances=pop.support[idx], labels=labels)


def mease_sample(n: int, seed: int) -> SampleDataset:
    """Uniform sample on [0,1]^20 labeled by a sparse hyperplane: +1 iff the
    first five coordinates sum past 2.5 (ties labeled -1)."""
    if n < 1:
        raise ValueError("n must be >= 1")
    rng = np.random.default_rng(seed)
    x = rng.random((n, 20))
    labels = np.where(x[:, :5].sum(axis=1) > 2.5, 1.0, -1.0)
    return SampleDataset(instances=x, labels=labels)


def _map_labels(raw: np.ndarray, where: str) -> np.ndarray:
    values = set(np.unique(raw).tolist())
    if values <= {-1.0, 1.0}:
        return raw
    if values <= {0.0, 1.0}:
        return np.where(raw == 0.0, -1.0, 1.0)
    raise DataFormatError(f"{where}: labels must be in {{-1,1}} or {{0,1}}, got {sorted(values)}")


def load_csv(path) -> SampleDataset:
    """Read a header CSV whose final column is named "label".

    Labels may be {-1, 1} or {0, 1} (0 is remapped to -1).
    """
    rows = []
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise DataFormatError(f"{path}: empty file") from None
        if not header or header[-1].strip() != "label":
            raise DataFormatError(f"{path}: last column must be named 'label'")
        width = len(header)
        for lineno, row in enumerate(reader, start=2):
            if not row:
                continue
            if len(row) != width:
                raise DataFormatError(f"{path}:{lineno}: expected {width} fields, got {len(row)}")
            try:
                rows.append([float(v) for v in row])
            except ValueError as exc:
                raise DataFormatError(f"{path}:{lineno}: {exc}") from exc
    if not rows:
        raise DataFormatError(f"{path}: no data rows")
    arr = np.array(rows, dtype=float)
    labels = _map_labels(arr[:, -1], str(path))
    return SampleDataset(instances=arr[:, :-1], labels=labels)


def save_csv(data: SampleDataset, path) -> None:
    """Write the loadable CSV form (features f0..f{d-1}, then label)."""
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow([f"f{i}" for i in range(data.dim)] + ["label"])
        for x, y in zip(data.instances, data.labels):
            writer.writerow([repr(float(v)) for v in x] + [str(int(y))])


def load_libsvm(path) -> SampleDataset:
    """Read "<label> idx:val ..." lines with 1-based indices, densified to
    the maximum index seen in the file."""
    labels = []
    entries = []
    max_idx = 0
    with open(path) as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            parts = line.split()
            try:
                labels.append(float(parts[0]))
            except ValueError as exc:
                raise DataFormatError(f"{path}:{lineno}: bad label {parts[0]!r}") from exc
            feats = {}
            for tok in parts[1:]:
                try:
                    idx_s, val_s = tok.split(":", 1)
                    idx = int(idx_s)
                    val = float(val_s)
                except ValueError as exc:
                    raise DataFormatError(f"{path}:{lineno}: bad feature {tok!r}") from exc
                if idx < 1:
                    raise DataFormatError(f"{path}:{lineno}: indices are 1-based, got {idx}")
                feats[idx] = val
                max_idx = max(max_idx, idx)
            entries.append(feats)
    if not entries:
        raise DataFormatError(f"{path}: empty file")
    x = np.zeros((len(entries), max_idx))
    for i, feats in enumerate(entries):
        for idx, val in feats.items():
            x[i, idx - 1] = val
    labels = _map_labels(np.array(labels, dtype=float), str(path))
    return SampleDataset(instances=x, labels=labels)


@dataclass(frozen=True)
class StandardizeParams:
    """Per-feature affine transform fitted on a training set."""

    mean: np.ndarray
    scale: np.ndarray

    def apply(self, data: SampleDataset) -> SampleDataset:
        x = (data.instances - self.mean) / self.scale
        return SampleDataset(instances=x, labels=data.labels)

    def to_json(self) -> str:
        return json.dumps({"mean": self.mean.tolist(), "scale": self.scale.tolist()})

    @classmethod
    def from_json(cls, text: str) -> "StandardizeParams":
        doc = json.loads(text)
        return cls(mean=np.array(doc["mean"], dtype=float), scale=np.array(doc["scale"], dtype=float))


def standardize(train: SampleDataset, *others: SampleDataset):
    """Center/scale features to mean 0, std 1 on the training set and apply
    the same transform to any further datasets.

    Constant features get a std floor of 1e-12 (so they map to zero).
    Returns ([train', others'...], params).
    """
    mean = train.instances.mean(axis=0)
    scale = np.maximum(train.instances.std(axis=0), 1e-12)
    params = StandardizeParams(mean=mean, scale=scale)
    out = [params.apply(train)] + [params.apply(d) for d in others]
    return out, params
