"""Symmetric label-noise corruption for samples and exact populations."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .data import PopulationDataset, SampleDataset
from .kernels import KernelSpec, gram
from .losses import _as_rho

__all__ = [
    "CorruptionRecord",
    "corrupt_sample",
    "corrupt_population",
    "verify_mean_map_scaling",
]


@dataclass(frozen=True)
class CorruptionRecord:
    """Bookkeeping for one seeded corruption pass."""

    rho: float
    seed: int
    flipped_count: int


def corrupt_sample(data: SampleDataset, rho, seed: int):
    """Independently negate each label with probability rho.

    Consumes one uniform draw per label in index order, so the flip pattern
    is reproducible and independent of how the caller parallelizes.
    Instances are untouched.  Returns (corrupted dataset, record).
    """
    r = _as_rho(rho)
    rng = np.random.default_rng(seed)
    flips = rng.random(data.n) < r
    labels = np.where(flips, -data.labels, data.labels)
    record = CorruptionRecord(rho=r, seed=int(seed), flipped_count=int(flips.sum()))
    return SampleDataset(instances=data.instances, labels=labels), record


def corrupt_population(pop: PopulationDataset, rho) -> PopulationDataset:
    """Exact corruption: support and mass unchanged, eta -> (1-2*rho)*eta + rho."""
    r = _as_rho(rho)
    eta = (1.0 - 2.0 * r) * pop.eta + r
    return PopulationDataset(support=pop.support, mass=pop.mass, eta=eta)


def verify_mean_map_scaling(pop: PopulationDataset, rho, spec: KernelSpec, probes) -> float:
    """Max relative deviation between the clean signed kernel mean and the
    rescaled corrupted one, over probe points.

    Both expectations are exact sums over the support; the corrupted side is
    divided by (1 - 2*rho).  The signed mean map is preserved by label noise
    up to that scaling, so the deviation is zero up to float rounding.
    """
    r = _as_rho(rho)
    probes = np.atleast_2d(np.asarray(probes, dtype=float))
    k = gram(spec, pop.support, probes)  # (m, n_probes)
    clean = ((2.0 * pop.eta - 1.0) * pop.mass) @ k
    eta_bar = (1.0 - 2.0 * r) * pop.eta + r
    corrupted = (((2.0 * eta_bar - 1.0) * pop.mass) @ k) / (1.0 - 2.0 * r)
    denom = np.maximum(np.maximum(np.abs(clean), np.abs(corrupted)), 1e-15)
    return float(np.max(np.abs(clean - corrupted) / denom))
