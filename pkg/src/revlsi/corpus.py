"""Seeded, reproducible corpora of Gaussian and Gaussian-mixture densities.

Each density ``i`` draws from its own PCG64 stream seeded with
``SeedSequence(seed, spawn_key=(i,))``, so the first ``k`` densities of a
corpus do not depend on ``count``.
"""
from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass
from pathlib import Path

import numpy as np

from .density import Density, GaussianSpec, MixtureSpec, from_json, to_json
from .errors import LabError


@dataclass(frozen=True)
class CorpusSpec:
    seed: int = 42
    count: int = 100
    dimension: int | None = None  # None: each density draws n from {1, 2}
    family: str = "mixture"
    max_components: int = 4
    mean_range: tuple = (-2.0, 2.0)
    eigen_range: tuple = (0.25, 4.0)

    def __post_init__(self):
        if self.count < 1:
            raise LabError("corpus count must be >= 1")
        if self.dimension not in (None, 1, 2):
            raise LabError("corpus dimension must be 1, 2 or None (mixed)")
        if self.family not in ("gaussian", "mixture"):
            raise LabError(f"unknown corpus family {self.family!r}")
        if not 1 <= self.max_components <= 4:
            raise LabError("mixtures have at most 4 components")
        object.__setattr__(self, "mean_range", tuple(float(v) for v in self.mean_range))
        object.__setattr__(self, "eigen_range", tuple(float(v) for v in self.eigen_range))

    def to_dict(self) -> dict:
        return asdict(self) | {"mean_range": list(self.mean_range), "eigen_range": list(self.eigen_range)}

    @classmethod
    def from_dict(cls, d: dict) -> "CorpusSpec":
        return cls(**d)


def stream(seed: int, index: int) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence(seed, spawn_key=(index,))))


def _rotation(rng, n):
    if n == 1:
        return np.ones((1, 1))
    theta = rng.uniform(0.0, 2.0 * math.pi)
    c, s = math.cos(theta), math.sin(theta)
    return np.array([[c, -s], [s, c]])


def _gaussian(rng, n, spec: CorpusSpec) -> GaussianSpec:
    mean = rng.uniform(*spec.mean_range, size=n)
    eig = rng.uniform(*spec.eigen_range, size=n)
    R = _rotation(rng, n)
    cov = (R * eig) @ R.T
    return GaussianSpec(mean, 0.5 * (cov + cov.T))


def _draw(spec: CorpusSpec, index: int) -> Density:
    rng = stream(spec.seed, index)
    n = spec.dimension if spec.dimension is not None else int(rng.integers(1, 3))
    if spec.family == "gaussian":
        return _gaussian(rng, n, spec)
    k = int(rng.integers(min(2, spec.max_components), spec.max_components + 1))
    comps = tuple(_gaussian(rng, n, spec) for _ in range(k))
    w = rng.dirichlet(np.full(k, 2.0))
    w = w / w.sum()
    return MixtureSpec(w, comps)


def generate(spec: CorpusSpec) -> list[Density]:
    return [_draw(spec, i) for i in range(spec.count)]


def dumps(densities, spec: CorpusSpec | None = None) -> str:
    header = {"seed": spec.seed if spec else None, "spec": spec.to_dict() if spec else None}
    return json.dumps({"header": header, "densities": [to_json(d) for d in densities]})


def save(densities, path, spec: CorpusSpec | None = None) -> None:
    Path(path).write_text(dumps(densities, spec))


def load(path) -> list[Density]:
    return loads(Path(path).read_text())


def loads(text: str) -> list[Density]:
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise LabError(f"corpus file is not valid JSON: {exc}") from exc
    if not isinstance(obj, dict) or not isinstance(obj.get("densities"), list):
        raise LabError("corpus file must hold an object with a 'densities' list")
    return [from_json(d) for d in obj["densities"]]


def load_header(path) -> dict:
    obj = json.loads(Path(path).read_text())
    return obj.get("header", {}) if isinstance(obj, dict) else {}
