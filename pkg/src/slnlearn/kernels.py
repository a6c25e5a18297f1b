"""Kernels, explicit feature maps, random Fourier features, Gram matrices, MMD."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

__all__ = [
    "KernelSpec",
    "FeatureMap",
    "linear_kernel",
    "rbf_kernel",
    "rff_kernel",
    "kernel_spec_by_name",
    "kernel_eval",
    "gram",
    "rff_build",
    "feature_map_for",
    "mmd",
    "nadaraya_ratio",
]


@dataclass(frozen=True)
class KernelSpec:
    """Kernel selector: "linear", "rbf" (needs sigma), or "rff" (sigma, dim, seed)."""

    kind: str
    sigma: float | None = None
    dim: int | None = None
    seed: int | None = None

    def __post_init__(self):
        if self.kind not in ("linear", "rbf", "rff"):
            raise ValueError(f"unknown kernel kind {self.kind!r}")
        if self.kind in ("rbf", "rff"):
            if self.sigma is None or not self.sigma > 0:
                raise ValueError("sigma must be positive")
        if self.kind == "rff":
            if self.dim is None or self.dim < 1:
                raise ValueError("rff dim must be >= 1")
            if self.seed is None:
                raise ValueError("rff requires an explicit seed")

    @property
    def name(self) -> str:
        if self.kind == "linear":
            return "linear"
        if self.kind == "rbf":
            return f"rbf:{self.sigma:g}"
        return f"rff:{self.sigma:g}:{self.dim}:{self.seed}"


def linear_kernel() -> KernelSpec:
    return KernelSpec("linear")


def rbf_kernel(sigma: float) -> KernelSpec:
    return KernelSpec("rbf", sigma=float(sigma))


def rff_kernel(sigma: float, dim: int, seed: int) -> KernelSpec:
    return KernelSpec("rff", sigma=float(sigma), dim=int(dim), seed=int(seed))


def kernel_spec_by_name(name: str) -> KernelSpec:
    """Parse "linear", "rbf:<sigma>" or "rff:<sigma>:<dim>:<seed>"."""
    parts = name.split(":")
    try:
        if parts[0] == "linear" and len(parts) == 1:
            return linear_kernel()
        if parts[0] == "rbf" and len(parts) == 2:
            return rbf_kernel(float(parts[1]))
        if parts[0] == "rff" and len(parts) == 4:
            return rff_kernel(float(parts[1]), int(parts[2]), int(parts[3]))
    except ValueError as exc:
        raise ValueError(f"bad kernel spec {name!r}") from exc
    raise ValueError(f"bad kernel spec {name!r}")


@dataclass(frozen=True)
class FeatureMap:
    """Explicit finite-dimensional feature map with a deterministic apply."""

    spec: KernelSpec
    input_dim: int
    output_dim: int
    apply: Callable[[np.ndarray], np.ndarray]

    def __call__(self, x: np.ndarray) -> np.ndarray:
        return self.apply(x)


def rff_build(sigma: float, dim: int, input_dim: int, seed: int) -> FeatureMap:
    """Random Fourier feature map approximating the RBF kernel.

    Uses paired (cos, sin) projections scaled by sqrt(2/dim), with
    frequencies drawn i.i.d. N(0, 1/sigma^2) per coordinate; no random phase.
    Every mapped point has unit squared norm, and the map depends on x - z
    only, so inner products are translation invariant.  dim must be even.
    """
    dim = int(dim)
    if dim % 2 != 0 or dim < 2:
        raise ValueError(f"rff dim must be even and >= 2, got {dim}")
    if not sigma > 0:
        raise ValueError("sigma must be positive")
    rng = np.random.default_rng(seed)
    freqs = rng.normal(scale=1.0 / sigma, size=(input_dim, dim // 2))
    scale = np.sqrt(2.0 / dim)

    def apply(x: np.ndarray) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        proj = x @ freqs
        return scale * np.concatenate([np.cos(proj), np.sin(proj)], axis=-1)

    return FeatureMap(
        spec=rff_kernel(sigma, dim, seed),
        input_dim=input_dim,
        output_dim=dim,
        apply=apply,
    )


def feature_map_for(spec: KernelSpec, input_dim: int) -> FeatureMap:
    """Explicit feature map for a spec; the RBF kernel has none and raises."""
    if spec.kind == "linear":
        return FeatureMap(
            spec=spec,
            input_dim=input_dim,
            output_dim=input_dim,
            apply=lambda x: np.asarray(x, dtype=float),
        )
    if spec.kind == "rff":
        return rff_build(spec.sigma, spec.dim, input_dim, spec.seed)
    raise ValueError(f"kernel {spec.name!r} has no explicit finite feature map")


def _sq_dists(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    aa = np.sum(a * a, axis=1)[:, None]
    bb = np.sum(b * b, axis=1)[None, :]
    d = aa + bb - 2.0 * (a @ b.T)
    return np.maximum(d, 0.0)


def gram(spec: KernelSpec, a: np.ndarray, b: np.ndarray | None = None) -> np.ndarray:
    """Kernel matrix k(a_i, b_j); b defaults to a."""
    a = np.atleast_2d(np.asarray(a, dtype=float))
    b = a if b is None else np.atleast_2d(np.asarray(b, dtype=float))
    if a.shape[1] != b.shape[1]:
        raise ValueError(f"dimension mismatch: {a.shape[1]} vs {b.shape[1]}")
    if spec.kind == "linear":
        return a @ b.T
    if spec.kind == "rbf":
        return np.exp(-_sq_dists(a, b) / (2.0 * spec.sigma**2))
    fmap = feature_map_for(spec, a.shape[1])
    return fmap(a) @ fmap(b).T


def kernel_eval(spec: KernelSpec, x: np.ndarray, z: np.ndarray) -> float:
    """Kernel value for a single pair of vectors."""
    x = np.asarray(x, dtype=float).ravel()
    z = np.asarray(z, dtype=float).ravel()
    if x.shape != z.shape:
        raise ValueError(f"dimension mismatch: {x.shape} vs {z.shape}")
    return float(gram(spec, x[None, :], z[None, :])[0, 0])


def mmd(pos_points: np.ndarray, neg_points: np.ndarray, spec: KernelSpec) -> float:
    """Maximum mean discrepancy between two samples.

    Biased V-statistic (diagonal terms kept) so that the value equals the
    norm of the difference of empirical kernel mean embeddings exactly.
    """
    p = np.atleast_2d(np.asarray(pos_points, dtype=float))
    q = np.atleast_2d(np.asarray(neg_points, dtype=float))
    if p.shape[0] == 0 or q.shape[0] == 0:
        raise ValueError("mmd requires non-empty point sets")
    val = gram(spec, p).mean() - 2.0 * gram(spec, p, q).mean() + gram(spec, q).mean()
    return float(np.sqrt(max(val, 0.0)))


def nadaraya_ratio(pos_points, neg_points, pi: float, spec: KernelSpec, x) -> float:
    """Kernel-smoothed odds estimate pi/(1-pi) * mean_P k(., x) / mean_Q k(., x).

    Estimates eta(x) / (1 - eta(x)).  Raises when the negative-class
    aggregate similarity vanishes (the estimate is undefined there).
    """
    if not (0.0 < pi < 1.0):
        raise ValueError(f"pi must lie in (0, 1), got {pi}")
    p = np.atleast_2d(np.asarray(pos_points, dtype=float))
    q = np.atleast_2d(np.asarray(neg_points, dtype=float))
    x = np.asarray(x, dtype=float).ravel()
    num = gram(spec, p, x[None, :]).mean()
    den = gram(spec, q, x[None, :]).mean()
    if den <= 0.0:
        raise ZeroDivisionError("aggregate similarity to the negative class is zero at x")
    return float(pi / (1.0 - pi) * num / den)
