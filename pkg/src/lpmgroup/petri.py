"""Labeled Petri nets, local process model checks, and bounded behavior.

A local process model (LPM) is a small accepting labeled Petri net: one
weakly connected component in which every place has at least one incoming
and one outgoing arc. Its behavior is the set of valid complete firing
sequences: transition sequences that lead from the initial to the final
marking while no place receives more than one token from transitions with
an empty preset ("unrestricted" transitions).
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Iterable, Mapping

# Label of silent transitions. Activity names are non-empty strings, so the
# empty string can never collide with a real activity.
SILENT = ""

DEFAULT_BOUND = 10
DEFAULT_ENUM_CAP = 100_000

Trace = tuple[str, ...]
FiringSequence = tuple[str, ...]
EFRelation = frozenset[tuple[str, str]]


def is_silent(label: str) -> bool:
    return label == SILENT


class NetStructureError(ValueError):
    """The arc/label structure violates the labeled-Petri-net invariants."""


@dataclass(frozen=True, eq=False)
class LabeledPetriNet:
    """Places, transitions, directed place<->transition arcs, and labels.

    ``labels`` must be total on transitions; silent transitions carry
    ``SILENT``. Duplicate labels are allowed.
    """

    places: frozenset[str]
    transitions: frozenset[str]
    arcs: frozenset[tuple[str, str]]
    labels: Mapping[str, str]

    def __init__(
        self,
        places: Iterable[str],
        transitions: Iterable[str],
        arcs: Iterable[tuple[str, str]],
        labels: Mapping[str, str],
    ):
        object.__setattr__(self, "places", frozenset(places))
        object.__setattr__(self, "transitions", frozenset(transitions))
        object.__setattr__(self, "arcs", frozenset((str(a), str(b)) for a, b in arcs))
        object.__setattr__(self, "labels", dict(labels))
        self._check()
        pre: dict[str, set[str]] = {n: set() for n in self.places | self.transitions}
        post: dict[str, set[str]] = {n: set() for n in self.places | self.transitions}
        for src, dst in self.arcs:
            post[src].add(dst)
            pre[dst].add(src)
        object.__setattr__(self, "_pre", {n: frozenset(s) for n, s in pre.items()})
        object.__setattr__(self, "_post", {n: frozenset(s) for n, s in post.items()})
        object.__setattr__(self, "_key", self._fingerprint())

    def _check(self) -> None:
        overlap = self.places & self.transitions
        if overlap:
            raise NetStructureError(f"place and transition ids overlap: {sorted(overlap)}")
        for src, dst in self.arcs:
            for node in (src, dst):
                if node not in self.places and node not in self.transitions:
                    raise NetStructureError(f"arc ({src}, {dst}) references unknown node {node!r}")
            if (src in self.places) == (dst in self.places):
                raise NetStructureError(f"arc ({src}, {dst}) does not connect a place and a transition")
        missing = self.transitions - set(self.labels)
        if missing:
            raise NetStructureError(f"transitions without a label: {sorted(missing)}")
        extra = set(self.labels) - self.transitions
        if extra:
            raise NetStructureError(f"labels for unknown transitions: {sorted(extra)}")

    def _fingerprint(self) -> tuple:
        return (
            tuple(sorted(self.places)),
            tuple(sorted(self.transitions)),
            tuple(sorted(self.arcs)),
            tuple(sorted(self.labels.items())),
        )

    def preset(self, node: str) -> frozenset[str]:
        return self._pre[node]  # type: ignore[attr-defined]

    def postset(self, node: str) -> frozenset[str]:
        return self._post[node]  # type: ignore[attr-defined]

    def label(self, transition: str) -> str:
        return self.labels[transition]

    def activity_labels(self) -> frozenset[str]:
        """Non-silent labels carried by the transitions."""
        return frozenset(l for l in self.labels.values() if not is_silent(l))

    def preset_labels(self, place: str) -> frozenset[str]:
        """Labels (silent included) of the transitions feeding ``place``."""
        return frozenset(self.labels[t] for t in self.preset(place))

    def postset_labels(self, place: str) -> frozenset[str]:
        """Labels (silent included) of the transitions consuming from ``place``."""
        return frozenset(self.labels[t] for t in self.postset(place))

    @property
    def size(self) -> int:
        return len(self.places) + len(self.transitions) + len(self.arcs)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, LabeledPetriNet):
            return NotImplemented
        return self._key == other._key  # type: ignore[attr-defined]

    def __hash__(self) -> int:
        return hash(self._key)  # type: ignore[attr-defined]

    def __repr__(self) -> str:
        return (
            f"LabeledPetriNet(|P|={len(self.places)}, |T|={len(self.transitions)}, "
            f"|F|={len(self.arcs)})"
        )


@dataclass(frozen=True)
class Marking:
    """Immutable multiset of places; the state of a net."""

    counts: tuple[tuple[str, int], ...] = ()

    def __init__(self, tokens: Iterable[str] | Mapping[str, int] = ()):
        if isinstance(tokens, Mapping):
            items = {p: int(c) for p, c in tokens.items() if int(c) != 0}
        else:
            items = {}
            for p in tokens:
                items[p] = items.get(p, 0) + 1
        if any(c < 0 for c in items.values()):
            raise ValueError("token counts must be non-negative")
        object.__setattr__(self, "counts", tuple(sorted(items.items())))

    def get(self, place: str) -> int:
        for p, c in self.counts:
            if p == place:
                return c
        return 0

    def places(self) -> frozenset[str]:
        return frozenset(p for p, _ in self.counts)

    def as_dict(self) -> dict[str, int]:
        return dict(self.counts)

    @property
    def total(self) -> int:
        return sum(c for _, c in self.counts)

    def covers(self, places: Iterable[str]) -> bool:
        """True if every listed place holds at least one token."""
        return all(self.get(p) >= 1 for p in places)

    def consume_produce(self, consume: Iterable[str], produce: Iterable[str]) -> "Marking":
        counts = dict(self.counts)
        for p in consume:
            counts[p] = counts.get(p, 0) - 1
            if counts[p] < 0:
                raise ValueError(f"cannot consume token from empty place {p!r}")
        for p in produce:
            counts[p] = counts.get(p, 0) + 1
        return Marking(counts)

    def __bool__(self) -> bool:
        return bool(self.counts)

    def __repr__(self) -> str:
        inner = ", ".join(f"{p}:{c}" for p, c in self.counts)
        return f"Marking({{{inner}}})"


@dataclass(frozen=True, eq=False)
class LocalProcessModel:
    """An accepting labeled Petri net with a stable identifier.

    Construction does not enforce the LPM well-formedness rules; run
    ``validate_lpm`` to obtain a violation report.
    """

    id: str
    net: LabeledPetriNet
    initial: Marking
    final: Marking

    def fingerprint(self) -> tuple:
        """Content key, used for canonical ordering of model pairs."""
        return (self.net._key, self.initial.counts, self.final.counts)  # type: ignore[attr-defined]

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, LocalProcessModel):
            return NotImplemented
        return self.id == other.id and self.fingerprint() == other.fingerprint()

    def __hash__(self) -> int:
        return hash((self.id, self.fingerprint()))


@dataclass(frozen=True)
class ValidationReport:
    violations: tuple[str, ...]

    @property
    def ok(self) -> bool:
        return not self.violations


def validate_lpm(net: LabeledPetriNet, initial: Marking, final: Marking) -> ValidationReport:
    """Check the LPM well-formedness rules; violations are data, not errors.

    Rules: the net is one weakly connected component, every place has at
    least one incoming and one outgoing arc, and both markings reference
    existing places.
    """
    violations: list[str] = []
    nodes = net.places | net.transitions
    if nodes:
        seen = set()
        queue = deque([min(nodes)])
        seen.add(min(nodes))
        while queue:
            node = queue.popleft()
            for nxt in net.preset(node) | net.postset(node):
                if nxt not in seen:
                    seen.add(nxt)
                    queue.append(nxt)
        unreached = nodes - seen
        if unreached:
            violations.append(f"disconnected: {sorted(unreached)} not connected to {min(nodes)!r}")
    for place in sorted(net.places):
        if not net.preset(place):
            violations.append(f"place without incoming arc: {place!r}")
        if not net.postset(place):
            violations.append(f"place without outgoing arc: {place!r}")
    for name, marking in (("initial", initial), ("final", final)):
        for place in sorted(marking.places() - net.places):
            violations.append(f"{name} marking references unknown place: {place!r}")
    return ValidationReport(tuple(violations))


def unrestricted_transitions(net: LabeledPetriNet) -> frozenset[str]:
    """Transitions with an empty preset; they may inject tokens."""
    return frozenset(t for t in net.transitions if not net.preset(t))


def enabled(
    net: LabeledPetriNet,
    marking: Marking,
    used_free_places: frozenset[str] = frozenset(),
) -> frozenset[str]:
    """Transitions that may fire in ``marking``.

    A transition is enabled when its preset is marked. An unrestricted
    transition is additionally blocked when any of its postset places
    already received a token from an unrestricted transition earlier in the
    run (``used_free_places``): every place accepts at most one free token.
    """
    free = unrestricted_transitions(net)
    out = set()
    for t in net.transitions:
        if not marking.covers(net.preset(t)):
            continue
        if t in free and net.postset(t) & used_free_places:
            continue
        out.add(t)
    return frozenset(out)


def fire(
    net: LabeledPetriNet,
    marking: Marking,
    transition: str,
    used_free_places: frozenset[str] = frozenset(),
) -> tuple[Marking, frozenset[str]]:
    """Fire an enabled transition; returns the new marking and free-place set.

    Firing a transition that is not enabled is a contract violation and
    raises ``ValueError``.
    """
    if transition not in enabled(net, marking, used_free_places):
        raise ValueError(f"transition {transition!r} is not enabled in {marking!r}")
    new_marking = marking.consume_produce(net.preset(transition), net.postset(transition))
    if not net.preset(transition):
        used_free_places = used_free_places | net.postset(transition)
    return new_marking, used_free_places


@dataclass(frozen=True)
class EnumerationResult:
    """Valid complete firing sequences of length <= bound, set-deduplicated."""

    sequences: frozenset[FiringSequence]
    bound: int
    truncated: bool


@dataclass(frozen=True)
class BoundedLanguage:
    """Silent-free label traces of the valid complete firing sequences."""

    bound: int
    traces: frozenset[Trace]
    truncated: bool


def valid_complete_firing_sequences(
    lpm: LocalProcessModel,
    bound: int = DEFAULT_BOUND,
    cap: int = DEFAULT_ENUM_CAP,
) -> EnumerationResult:
    """Enumerate all valid complete firing sequences with at most ``bound`` steps.

    Breadth-first over run prefixes; each prefix carries its marking and the
    places already fed by unrestricted transitions. The empty sequence is
    never reported. When more than ``cap`` prefixes would be explored the
    result is cut short and flagged truncated.
    """
    if bound < 1:
        raise ValueError("bound must be >= 1")
    net = lpm.net
    order = sorted(net.transitions)
    free = unrestricted_transitions(net)
    pre = {t: net.preset(t) for t in order}
    post = {t: net.postset(t) for t in order}
    complete: set[FiringSequence] = set()
    truncated = False
    explored = 0
    frontier: deque[tuple[Marking, frozenset[str], FiringSequence]] = deque(
        [(lpm.initial, frozenset(), ())]
    )
    while frontier and not truncated:
        marking, used, seq = frontier.popleft()
        if len(seq) >= bound:
            continue
        for t in order:
            if not marking.covers(pre[t]):
                continue
            if t in free and post[t] & used:
                continue
            if explored >= cap:
                truncated = True
                break
            explored += 1
            new_marking = marking.consume_produce(pre[t], post[t])
            new_used = used | post[t] if t in free else used
            new_seq = seq + (t,)
            if new_marking == lpm.final:
                complete.add(new_seq)
            frontier.append((new_marking, new_used, new_seq))
    return EnumerationResult(frozenset(complete), bound, truncated)


def bounded_language(
    lpm: LocalProcessModel,
    bound: int = DEFAULT_BOUND,
    cap: int = DEFAULT_ENUM_CAP,
) -> BoundedLanguage:
    """Project the valid complete firing sequences onto non-silent labels."""
    result = valid_complete_firing_sequences(lpm, bound, cap)
    labels = lpm.net.labels
    traces = frozenset(
        tuple(labels[t] for t in seq if not is_silent(labels[t])) for seq in result.sequences
    )
    return BoundedLanguage(bound=bound, traces=traces, truncated=result.truncated)


def ef_relation(language: BoundedLanguage) -> EFRelation:
    """Ordered label pairs (a, b) with a strictly before b in some trace."""
    pairs: set[tuple[str, str]] = set()
    for trace in language.traces:
        for i in range(len(trace)):
            for j in range(i + 1, len(trace)):
                pairs.add((trace[i], trace[j]))
    return frozenset(pairs)
