"""Brute-force reference implementations, independent of the library code.

These recompute the combinatorial kernels from their definitions: plain
generate-and-test firing-sequence enumeration, permutation search for the
assignment problem, the textbook recursive edit distance, and an
exhaustive node-mapping minimum for the graph edit distance.
"""

from __future__ import annotations

from functools import lru_cache
from itertools import combinations, permutations


def _marking_of(marking) -> dict[str, int]:
    return {p: c for p, c in marking.counts if c > 0}


def oracle_sequences(lpm, bound: int) -> set[tuple[str, ...]]:
    """All non-empty transition sequences of length <= bound that replay from
    the initial to the final marking and whose unrestricted firings feed
    pairwise-disjoint place sets."""
    net = lpm.net
    transitions = sorted(net.transitions)
    pre = {t: sorted(net.preset(t)) for t in transitions}
    post = {t: sorted(net.postset(t)) for t in transitions}
    free = {t for t in transitions if not pre[t]}
    final = _marking_of(lpm.final)
    found: set[tuple[str, ...]] = set()

    def valid_free_use(seq: tuple[str, ...]) -> bool:
        for i in range(len(seq)):
            for j in range(i + 1, len(seq)):
                if seq[i] in free and seq[j] in free:
                    if set(post[seq[i]]) & set(post[seq[j]]):
                        return False
        return True

    def extend(seq: tuple[str, ...], marking: dict[str, int]) -> None:
        if len(seq) >= bound:
            return
        for t in transitions:
            if any(marking.get(p, 0) < 1 for p in pre[t]):
                continue
            new = dict(marking)
            for p in pre[t]:
                new[p] -= 1
            for p in post[t]:
                new[p] = new.get(p, 0) + 1
            new = {p: c for p, c in new.items() if c > 0}
            new_seq = seq + (t,)
            if new == final and valid_free_use(new_seq):
                found.add(new_seq)
            extend(new_seq, new)

    extend((), _marking_of(lpm.initial))
    return found


def oracle_assignment(gains) -> float:
    """Maximum total gain over all one-to-one row/column matchings."""
    rows = [list(row) for row in gains]
    if not rows or not rows[0]:
        return 0.0
    if len(rows) > len(rows[0]):
        rows = [list(col) for col in zip(*rows)]
    n, m = len(rows), len(rows[0])
    best = 0.0
    for perm in permutations(range(m), n):
        best = max(best, sum(rows[i][perm[i]] for i in range(n)))
    return best


def oracle_levenshtein(a, b) -> int:
    """Textbook recursive definition with memoization."""
    a, b = tuple(a), tuple(b)

    @lru_cache(maxsize=None)
    def rec(i: int, j: int) -> int:
        if i == 0:
            return j
        if j == 0:
            return i
        return min(
            rec(i - 1, j) + 1,
            rec(i, j - 1) + 1,
            rec(i - 1, j - 1) + (a[i - 1] != b[j - 1]),
        )

    return rec(len(a), len(b))


def _oracle_dice(x: frozenset, y: frozenset) -> float:
    if not x and not y:
        return 1.0
    return 2.0 * len(x & y) / (len(x) + len(y))


def _oracle_node_cost(model_a, u: str, model_b, v: str) -> float:
    net_a, net_b = model_a.net, model_b.net
    u_place = u in net_a.places
    v_place = v in net_b.places
    if u_place != v_place:
        return 1.0
    if not u_place:
        return 0.0 if net_a.labels[u] == net_b.labels[v] else 1.0
    gain = 0.5 * _oracle_dice(
        frozenset(net_a.labels[t] for t in net_a.preset(u)),
        frozenset(net_b.labels[t] for t in net_b.preset(v)),
    ) + 0.5 * _oracle_dice(
        frozenset(net_a.labels[t] for t in net_a.postset(u)),
        frozenset(net_b.labels[t] for t in net_b.postset(v)),
    )
    return 1.0 - gain


def oracle_ged(model_a, model_b) -> float:
    """Exhaustive minimum cost over all injective node mappings."""
    net_a, net_b = model_a.net, model_b.net
    nodes_a = sorted(net_a.places | net_a.transitions)
    nodes_b = sorted(net_b.places | net_b.transitions)
    arcs_a, arcs_b = net_a.arcs, net_b.arcs
    best = float("inf")
    for k in range(min(len(nodes_a), len(nodes_b)) + 1):
        for chosen in combinations(nodes_a, k):
            for image in permutations(nodes_b, k):
                mapping = dict(zip(chosen, image))
                cost = float(len(nodes_a) - k + len(nodes_b) - k)
                for u, v in mapping.items():
                    cost += _oracle_node_cost(model_a, u, model_b, v)
                for u, w in arcs_a:
                    v, x = mapping.get(u), mapping.get(w)
                    if v is not None and x is not None and (v, x) in arcs_b:
                        cost += 0.5 * (
                            _oracle_node_cost(model_a, u, model_b, v)
                            + _oracle_node_cost(model_a, w, model_b, x)
                        )
                    else:
                        cost += 1.0
                inverse = {v: u for u, v in mapping.items()}
                for v, x in arcs_b:
                    u, w = inverse.get(v), inverse.get(x)
                    if u is not None and w is not None and (u, w) in arcs_a:
                        continue
                    cost += 1.0
                best = min(best, cost)
    return best


def oracle_medoid(cluster_ids, matrix) -> str:
    """Cluster member with minimal mean distance to the others."""
    ids = sorted(cluster_ids)
    if len(ids) == 1:
        return ids[0]
    best_id, best_mean = None, float("inf")
    for i in ids:
        mean = sum(matrix.entry(i, j) for j in ids if j != i) / (len(ids) - 1)
        if mean < best_mean:
            best_id, best_mean = i, mean
    return best_id


def oracle_mean_pairwise(ids, matrix) -> float:
    ids = list(ids)
    pairs = [(a, b) for k, a in enumerate(ids) for b in ids[k + 1 :]]
    return sum(matrix.entry(a, b) for a, b in pairs) / len(pairs)
