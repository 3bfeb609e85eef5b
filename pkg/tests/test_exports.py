"""CSV/JSON/DOT exports: formats, round-trips, determinism."""

import random

import numpy as np

from lpmgroup import (
    DistanceMatrix,
    Measure,
    RankedModelSet,
    distance_matrix,
    diversity_report,
    export_clusters,
    export_dot,
    export_matrix,
    export_reports,
    load_matrix,
    reduction_curve,
    representatives,
    sweep,
)
from genmodels import chain_lpm, planted_groups, random_lpm


class TestMatrixExport:
    def test_zero_matrix_layout(self, tmp_path):
        matrix = DistanceMatrix(ids=("a", "b"), values=np.zeros((2, 2)), measure="transition")
        path = tmp_path / "matrix.csv"
        export_matrix(matrix, path)
        lines = path.read_text(encoding="utf-8").splitlines()
        assert lines[0] == "id,a,b"
        assert lines[1] == "a,0.000000,0.000000"
        assert len(lines) == 3

    def test_export_load_export_is_byte_identical(self, tmp_path):
        rng = random.Random(5)
        models = [random_lpm(rng, f"m{k}", max_transitions=4, max_places=3) for k in range(6)]
        matrix = distance_matrix(models, Measure.NODE).rounded()
        first = tmp_path / "one.csv"
        export_matrix(matrix, first)
        again = tmp_path / "two.csv"
        export_matrix(load_matrix(first, measure="node"), again)
        assert first.read_bytes() == again.read_bytes()

    def test_approx_flags_written_separately(self, tmp_path):
        values = np.array([[0.0, 0.5], [0.5, 0.0]])
        approx = np.array([[False, True], [True, False]])
        matrix = DistanceMatrix(ids=("a", "b"), values=values, measure="efg", approx=approx)
        path = tmp_path / "matrix.csv"
        export_matrix(matrix, path)
        flags = tmp_path / "matrix_approx.csv"
        assert flags.exists()
        assert flags.read_text(encoding="utf-8").splitlines()[1] == "a,b"


class TestClusterExport:
    def test_row_count_and_flags(self, tmp_path):
        ids = [f"m{i}" for i in range(1, 16)]
        models = tuple(chain_lpm(i, ["a"]) for i in ids)
        ranked = RankedModelSet(models=models, ranks={i: int(i[1:]) for i in ids})
        clusters = (frozenset(ids[:5]), frozenset(ids[5:10]), frozenset(ids[10:]))
        reps = ("m1", "m6", "m11")
        path = tmp_path / "clusters.csv"
        export_clusters(clusters, reps, ranked, path)
        lines = path.read_text(encoding="utf-8").splitlines()
        assert len(lines) == 16  # header + 15 models
        assert sum(line.endswith(",true") for line in lines[1:]) == 3

    def test_partition_survives_reload(self, tmp_path):
        import csv

        from lpmgroup import check_partition

        ids = [f"m{i}" for i in range(1, 7)]
        models = tuple(chain_lpm(i, ["a"]) for i in ids)
        ranked = RankedModelSet(models=models, ranks={i: int(i[1:]) for i in ids})
        clusters = (frozenset(ids[:2]), frozenset(ids[2:]))
        path = tmp_path / "clusters.csv"
        export_clusters(clusters, ("m1", "m3"), ranked, path)
        with path.open(newline="", encoding="utf-8") as handle:
            rows = list(csv.DictReader(handle))
        regrouped: dict[str, set[str]] = {}
        for row in rows:
            regrouped.setdefault(row["cluster_id"], set()).add(row["model_id"])
        check_partition(tuple(frozenset(v) for v in regrouped.values()), ids)


class TestReportExport:
    def test_writes_curve_diversity_and_json(self, tmp_path):
        ranked = planted_groups(groups=2, copies=3)
        matrix = distance_matrix(ranked.models, Measure.TRANSITION)
        curve = reduction_curve(ranked, Measure.TRANSITION, ns=[2, 6], matrix=matrix)
        result = sweep(matrix)
        reps = representatives(result.selected.clusters, "dist", ranked, matrix)
        report = diversity_report(ranked, ranked.subset(reps), Measure.TRANSITION, ns=[2], matrix=matrix)
        export_reports(curve, report, tmp_path)
        assert (tmp_path / "reduction_curve.csv").exists()
        assert (tmp_path / "diversity.csv").exists()
        assert (tmp_path / "report.json").exists()
        header = (tmp_path / "reduction_curve.csv").read_text(encoding="utf-8").splitlines()[0]
        assert header.split(",")[:4] == ["measure", "n", "model_count", "representative_count"]


class TestDotExport:
    def test_counts_nodes_and_edges(self):
        lpm = chain_lpm("m", ["a", "b"])
        dot = export_dot(lpm)
        assert dot.count("shape=circle") == 1
        assert dot.count("shape=box") == 2
        assert dot.count("->") == 2

    def test_silent_transition_is_filled_and_unlabeled(self):
        from lpmgroup import LabeledPetriNet, LocalProcessModel, Marking, SILENT

        net = LabeledPetriNet(
            places={"p"}, transitions={"t", "s"},
            arcs=[("t", "p"), ("p", "s")], labels={"t": "a", "s": SILENT},
        )
        lpm = LocalProcessModel(id="m", net=net, initial=Marking(), final=Marking())
        dot = export_dot(lpm)
        assert 'label="", style=filled, fillcolor=black' in dot

    def test_deterministic_across_runs(self, tmp_path):
        rng = random.Random(7)
        lpm = random_lpm(rng, "m")
        assert export_dot(lpm) == export_dot(lpm)
        path = tmp_path / "m.dot"
        export_dot(lpm, path)
        assert path.read_text(encoding="utf-8") == export_dot(lpm)
