"""The five process-model similarity measures and their shared kernels.

All measures map a model pair into [0, 1] and are symmetric; distances are
one minus the similarity. Dice-style overlaps of two empty sets score 1
(identically empty behavior), of one empty set 0.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import AbstractSet, Sequence

import numpy as np
from scipy.optimize import linear_sum_assignment

from .petri import (
    DEFAULT_BOUND,
    DEFAULT_ENUM_CAP,
    BoundedLanguage,
    LocalProcessModel,
    LabeledPetriNet,
    Trace,
    bounded_language,
    ef_relation,
)

DEFAULT_LANG_CAP = 1000
DEFAULT_GED_BUDGET = 1_000_000


class Measure(str, Enum):
    TRANSITION = "transition"
    NODE = "node"
    EFG = "efg"
    FULL = "full"
    GED = "ged"

    def __str__(self) -> str:  # argparse/CSV friendliness
        return self.value


def dice(a: AbstractSet, b: AbstractSet) -> float:
    """Set overlap 2|a & b| / (|a| + |b|); both empty -> 1."""
    if not a and not b:
        return 1.0
    return 2.0 * len(a & b) / (len(a) + len(b))


def levenshtein(t1: Sequence[str], t2: Sequence[str]) -> int:
    """Unit-cost edit distance between two label sequences."""
    if len(t1) < len(t2):
        t1, t2 = t2, t1
    prev = list(range(len(t2) + 1))
    for i, x in enumerate(t1, start=1):
        cur = [i]
        for j, y in enumerate(t2, start=1):
            cur.append(min(prev[j] + 1, cur[j - 1] + 1, prev[j - 1] + (x != y)))
        prev = cur
    return prev[-1]


def normalized_levenshtein(t1: Sequence[str], t2: Sequence[str]) -> float:
    """Edit distance divided by the longer length; two empty traces -> 0."""
    longest = max(len(t1), len(t2))
    if longest == 0:
        return 0.0
    return levenshtein(t1, t2) / longest


@dataclass(frozen=True)
class Assignment:
    """A one-to-one row/column matching with maximal total gain."""

    pairs: tuple[tuple[int, int], ...]
    total_gain: float


def optimal_assignment(gains: np.ndarray | Sequence[Sequence[float]]) -> Assignment:
    """Maximum-gain assignment of rows to columns (rectangular allowed).

    Unmatched rows or columns of the larger side contribute zero gain,
    matching the zero-padded square formulation.
    """
    matrix = np.asarray(gains, dtype=float)
    if matrix.size == 0:
        return Assignment((), 0.0)
    if matrix.ndim != 2:
        raise ValueError("gain matrix must be two-dimensional")
    if not np.all(np.isfinite(matrix)):
        raise ValueError("gain matrix entries must be finite")
    if matrix.min() < 0.0 or matrix.max() > 1.0:
        raise ValueError("gain matrix entries must lie in [0, 1]")
    rows, cols = linear_sum_assignment(matrix, maximize=True)
    order = np.argsort(rows)
    pairs = tuple((int(rows[k]), int(cols[k])) for k in order)
    total = float(sum(matrix[r, c] for r, c in pairs))
    return Assignment(pairs, total)


def _ordered(a: LocalProcessModel, b: LocalProcessModel) -> tuple[LocalProcessModel, LocalProcessModel]:
    """Canonical orientation so float results are bit-identical under swap."""
    return (a, b) if a.fingerprint() <= b.fingerprint() else (b, a)


def sim_transition(a: LocalProcessModel, b: LocalProcessModel) -> float:
    """Overlap of the non-silent transition label sets."""
    return dice(a.net.activity_labels(), b.net.activity_labels())


def place_gain(net_a: LabeledPetriNet, p1: str, net_b: LabeledPetriNet, p2: str) -> float:
    """Matching gain of two places: mean of preset- and postset-label overlap.

    The surrounding label sets keep silent labels; a silent transition is
    part of a place's structural context even though it is not an activity.
    """
    return 0.5 * dice(net_a.preset_labels(p1), net_b.preset_labels(p2)) + 0.5 * dice(
        net_a.postset_labels(p1), net_b.postset_labels(p2)
    )


def _place_gain_matrix(net_a: LabeledPetriNet, net_b: LabeledPetriNet) -> np.ndarray:
    places_a = sorted(net_a.places)
    places_b = sorted(net_b.places)
    gains = np.zeros((len(places_a), len(places_b)))
    for i, p1 in enumerate(places_a):
        for j, p2 in enumerate(places_b):
            gains[i, j] = place_gain(net_a, p1, net_b, p2)
    return gains


def sim_node(a: LocalProcessModel, b: LocalProcessModel) -> float:
    """Transition label overlap combined with an optimal place matching."""
    a, b = _ordered(a, b)
    labels_a = a.net.activity_labels()
    labels_b = b.net.activity_labels()
    denom = len(labels_a) + len(labels_b) + len(a.net.places) + len(b.net.places)
    if denom == 0:
        return 1.0
    g_places = optimal_assignment(_place_gain_matrix(a.net, b.net)).total_gain
    return (2.0 * len(labels_a & labels_b) + 2.0 * g_places) / denom


def sim_efg(
    a: LocalProcessModel,
    b: LocalProcessModel,
    bound: int = DEFAULT_BOUND,
    cap: int = DEFAULT_ENUM_CAP,
) -> float:
    """Overlap of the eventually-follows relations of the bounded languages."""
    ef_a = ef_relation(bounded_language(a, bound, cap))
    ef_b = ef_relation(bounded_language(b, bound, cap))
    return dice(ef_a, ef_b)


def capped_traces(language: BoundedLanguage, lang_cap: int = DEFAULT_LANG_CAP) -> tuple[tuple[Trace, ...], bool]:
    """Deterministic (length, lexicographic) trace selection up to the cap."""
    traces = sorted(language.traces, key=lambda t: (len(t), t))
    capped = len(traces) > lang_cap
    return tuple(traces[:lang_cap]), capped


def _full_from_traces(traces_a: Sequence[Trace], traces_b: Sequence[Trace]) -> float:
    if not traces_a and not traces_b:
        return 1.0
    if not traces_a or not traces_b:
        return 0.0
    if (len(traces_b), tuple(traces_b)) < (len(traces_a), tuple(traces_a)):
        traces_a, traces_b = traces_b, traces_a
    gains = np.zeros((len(traces_a), len(traces_b)))
    for i, t1 in enumerate(traces_a):
        for j, t2 in enumerate(traces_b):
            gains[i, j] = 1.0 - normalized_levenshtein(t1, t2)
    g_traces = optimal_assignment(gains).total_gain
    return 2.0 * g_traces / (len(traces_a) + len(traces_b))


def sim_full(
    a: LocalProcessModel,
    b: LocalProcessModel,
    bound: int = DEFAULT_BOUND,
    lang_cap: int = DEFAULT_LANG_CAP,
    cap: int = DEFAULT_ENUM_CAP,
) -> float:
    """Optimal trace matching between the bounded languages.

    Trace pair gains invert the normalized Levenshtein distance; both
    languages empty scores 1, exactly one empty 0.
    """
    traces_a, _ = capped_traces(bounded_language(a, bound, cap), lang_cap)
    traces_b, _ = capped_traces(bounded_language(b, bound, cap), lang_cap)
    return _full_from_traces(traces_a, traces_b)


def sim_ged(
    a: LocalProcessModel,
    b: LocalProcessModel,
    budget: int = DEFAULT_GED_BUDGET,
) -> float:
    """Graph edit distance similarity, normalized by the summed net sizes."""
    from .ged import ged_similarity

    return ged_similarity(a, b, budget)[0]


def similarity(
    measure: Measure | str,
    a: LocalProcessModel,
    b: LocalProcessModel,
    *,
    bound: int = DEFAULT_BOUND,
    lang_cap: int = DEFAULT_LANG_CAP,
    enum_cap: int = DEFAULT_ENUM_CAP,
    ged_budget: int = DEFAULT_GED_BUDGET,
) -> float:
    """Dispatch to one of the five measures by name."""
    measure = Measure(measure)
    if measure is Measure.TRANSITION:
        return sim_transition(a, b)
    if measure is Measure.NODE:
        return sim_node(a, b)
    if measure is Measure.EFG:
        return sim_efg(a, b, bound, enum_cap)
    if measure is Measure.FULL:
        return sim_full(a, b, bound, lang_cap, enum_cap)
    return sim_ged(a, b, ged_budget)


def distance(
    measure: Measure | str,
    a: LocalProcessModel,
    b: LocalProcessModel,
    **params,
) -> float:
    """The inverse of the similarity: 1 - sim."""
    return 1.0 - similarity(measure, a, b, **params)
