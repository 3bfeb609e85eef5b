"""Pairwise distance matrices over a model set, one measure at a time.

Pair values are computed from per-model features extracted once up front;
pairs can be fanned out to a process pool, and the assembled matrix is
identical regardless of worker count or scheduling.
"""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .ged import ged_similarity
from .measures import (
    DEFAULT_GED_BUDGET,
    DEFAULT_LANG_CAP,
    Measure,
    _full_from_traces,
    capped_traces,
    dice,
    sim_node,
)
from .petri import (
    DEFAULT_BOUND,
    DEFAULT_ENUM_CAP,
    LocalProcessModel,
    bounded_language,
    ef_relation,
)


@dataclass(frozen=True)
class MatrixParams:
    """Knobs shared by the language- and search-based measures."""

    bound: int = DEFAULT_BOUND
    lang_cap: int = DEFAULT_LANG_CAP
    enum_cap: int = DEFAULT_ENUM_CAP
    ged_budget: int = DEFAULT_GED_BUDGET
    workers: int = 1


@dataclass(frozen=True, eq=False)
class DistanceMatrix:
    """Symmetric pairwise distances in [0, 1] with per-pair approximation flags."""

    ids: tuple[str, ...]
    values: np.ndarray
    measure: str
    approx: np.ndarray = field(default=None)  # type: ignore[assignment]

    def __post_init__(self):
        values = np.asarray(self.values, dtype=float)
        object.__setattr__(self, "ids", tuple(self.ids))
        object.__setattr__(self, "values", values)
        if self.approx is None:
            object.__setattr__(self, "approx", np.zeros(values.shape, dtype=bool))
        else:
            object.__setattr__(self, "approx", np.asarray(self.approx, dtype=bool))
        n = len(self.ids)
        if len(set(self.ids)) != n:
            raise ValueError("model ids must be unique")
        if values.shape != (n, n) or self.approx.shape != (n, n):
            raise ValueError("matrix shape does not match the id list")
        if not np.allclose(values, values.T, atol=0.0):
            raise ValueError("distance matrix must be symmetric")
        if np.any(np.diag(values) != 0.0):
            raise ValueError("self-distances must be zero")
        if values.min() < 0.0 or values.max() > 1.0:
            raise ValueError("distances must lie in [0, 1]")
        self.values.setflags(write=False)
        self.approx.setflags(write=False)

    def __len__(self) -> int:
        return len(self.ids)

    def index(self, model_id: str) -> int:
        try:
            return self.ids.index(model_id)
        except ValueError:
            raise KeyError(f"unknown model id {model_id!r}") from None

    def entry(self, id_a: str, id_b: str) -> float:
        return float(self.values[self.index(id_a), self.index(id_b)])

    def submatrix(self, ids: Sequence[str]) -> "DistanceMatrix":
        idx = [self.index(i) for i in ids]
        return DistanceMatrix(
            ids=tuple(ids),
            values=self.values[np.ix_(idx, idx)].copy(),
            measure=self.measure,
            approx=self.approx[np.ix_(idx, idx)].copy(),
        )

    def rounded(self, decimals: int = 6) -> "DistanceMatrix":
        """Quantized copy, matching the CSV export precision."""
        return DistanceMatrix(
            ids=self.ids,
            values=np.round(self.values, decimals),
            measure=self.measure,
            approx=self.approx.copy(),
        )


def _extract_features(
    models: Sequence[LocalProcessModel], measure: Measure, params: MatrixParams
) -> list[tuple[object, bool]]:
    if measure is Measure.TRANSITION:
        return [(m.net.activity_labels(), False) for m in models]
    if measure is Measure.EFG:
        features = []
        for m in models:
            lang = bounded_language(m, params.bound, params.enum_cap)
            features.append((ef_relation(lang), lang.truncated))
        return features
    if measure is Measure.FULL:
        features = []
        for m in models:
            lang = bounded_language(m, params.bound, params.enum_cap)
            traces, capped = capped_traces(lang, params.lang_cap)
            features.append((traces, lang.truncated or capped))
        return features
    return [(m, False) for m in models]  # node and ged work on the models


def _pair_value(
    measure: Measure,
    feature_a: tuple[object, bool],
    feature_b: tuple[object, bool],
    params: MatrixParams,
) -> tuple[float, bool]:
    fa, approx_a = feature_a
    fb, approx_b = feature_b
    if measure is Measure.TRANSITION:
        return 1.0 - dice(fa, fb), False
    if measure is Measure.NODE:
        return 1.0 - sim_node(fa, fb), False
    if measure is Measure.EFG:
        return 1.0 - dice(fa, fb), approx_a or approx_b
    if measure is Measure.FULL:
        return 1.0 - _full_from_traces(fa, fb), approx_a or approx_b
    sim, exact = ged_similarity(fa, fb, params.ged_budget)
    return 1.0 - sim, not exact


def _pairs_chunk(args) -> list[tuple[int, int, float, bool]]:
    measure_value, features, params, pairs = args
    measure = Measure(measure_value)
    out = []
    for i, j in pairs:
        value, approx = _pair_value(measure, features[i], features[j], params)
        out.append((i, j, value, approx))
    return out


def distance_matrix(
    models: Sequence[LocalProcessModel],
    measure: Measure | str,
    params: MatrixParams | None = None,
) -> DistanceMatrix:
    """All pairwise distances under one measure; needs >= 2 uniquely-id'd models."""
    measure = Measure(measure)
    params = params or MatrixParams()
    if len(models) < 2:
        raise ValueError("a distance matrix needs at least two models")
    ids = tuple(m.id for m in models)
    if len(set(ids)) != len(ids):
        raise ValueError("duplicate model ids in the input set")
    features = _extract_features(models, measure, params)
    pairs = [(i, j) for i in range(len(models)) for j in range(i + 1, len(models))]
    if params.workers > 1 and len(pairs) > 1:
        chunk_count = min(len(pairs), params.workers * 4)
        chunks = [
            (measure.value, features, params, pairs[k::chunk_count]) for k in range(chunk_count)
        ]
        results: list[tuple[int, int, float, bool]] = []
        with ProcessPoolExecutor(max_workers=params.workers) as pool:
            for part in pool.map(_pairs_chunk, chunks):
                results.extend(part)
    else:
        results = _pairs_chunk((measure.value, features, params, pairs))
    n = len(models)
    values = np.zeros((n, n))
    approx = np.zeros((n, n), dtype=bool)
    for i, j, value, flag in results:
        values[i, j] = values[j, i] = value
        approx[i, j] = approx[j, i] = flag
    return DistanceMatrix(ids=ids, values=values, measure=measure.value, approx=approx)
