"""Model-set manifests: which nets to load, under which ids and ranks.

A manifest is a JSON document::

    {
      "bound": 10,                 // optional default for efg/full
      "measure": "efg",            // optional default measure
      "models": [
        {"id": "m1", "path": "nets/m1.pnml", "rank": 1},
        ...
      ]
    }

Paths are resolved relative to the manifest file. Every model is checked
against the local-process-model rules on load; invalid models abort the
load unless ``skip_invalid`` is set, because silently dropping entries
would distort rank-based analytics.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

from .clustering import RankedModelSet
from .petri import LocalProcessModel, validate_lpm
from .pnml import PnmlError, parse_pnml_file


class ManifestError(ValueError):
    """The manifest or one of its models cannot be loaded."""


@dataclass(frozen=True)
class ManifestEntry:
    id: str
    path: Path
    rank: int


@dataclass(frozen=True)
class Manifest:
    entries: tuple[ManifestEntry, ...]
    bound: int | None = None
    measure: str | None = None


@dataclass(frozen=True)
class LoadedModels:
    manifest: Manifest
    ranked: RankedModelSet
    skipped: tuple[tuple[str, tuple[str, ...]], ...]  # (id, violations)


def read_manifest(path: Path | str) -> Manifest:
    """Parse and structurally validate a manifest file."""
    path = Path(path)
    if not path.exists():
        raise ManifestError(f"manifest {path} does not exist")
    try:
        raw = json.loads(path.read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise ManifestError(f"manifest is not valid JSON: {exc}") from exc
    if not isinstance(raw, dict) or not isinstance(raw.get("models"), list):
        raise ManifestError("manifest must be an object with a 'models' list")
    entries = []
    for k, item in enumerate(raw["models"]):
        if not isinstance(item, dict):
            raise ManifestError(f"models[{k}] is not an object")
        try:
            model_id = str(item["id"])
            rel = str(item["path"])
            rank = item["rank"]
        except KeyError as exc:
            raise ManifestError(f"models[{k}] is missing {exc}") from exc
        if not isinstance(rank, int) or rank < 1:
            raise ManifestError(f"models[{k}] rank must be a positive integer")
        entries.append(ManifestEntry(id=model_id, path=(path.parent / rel).resolve(), rank=rank))
    by_id: dict[str, str] = {}
    by_rank: dict[int, str] = {}
    for entry in entries:
        if entry.id in by_id:
            raise ManifestError(f"duplicate model id {entry.id!r}")
        by_id[entry.id] = entry.id
        if entry.rank in by_rank:
            raise ManifestError(
                f"duplicate rank {entry.rank}: entries {by_rank[entry.rank]!r} and {entry.id!r}"
            )
        by_rank[entry.rank] = entry.id
    missing = [str(e.path) for e in entries if not e.path.exists()]
    if missing:
        raise ManifestError(f"model files not found: {missing}")
    bound = raw.get("bound")
    if bound is not None and (not isinstance(bound, int) or bound < 1):
        raise ManifestError("bound must be a positive integer")
    measure = raw.get("measure")
    if measure is not None:
        measure = str(measure)
    return Manifest(entries=tuple(entries), bound=bound, measure=measure)


def load_manifest(path: Path | str, skip_invalid: bool = False) -> LoadedModels:
    """Load, parse, and validate every model named by the manifest."""
    manifest = read_manifest(path)
    models = []
    ranks = {}
    skipped = []
    for entry in manifest.entries:
        try:
            net, initial, final = parse_pnml_file(entry.path)
        except PnmlError as exc:
            raise ManifestError(f"model {entry.id!r} ({entry.path}): {exc}") from exc
        report = validate_lpm(net, initial, final)
        if not report.ok:
            if skip_invalid:
                skipped.append((entry.id, report.violations))
                continue
            raise ManifestError(
                f"model {entry.id!r} is not a valid local process model: "
                + "; ".join(report.violations)
            )
        models.append(LocalProcessModel(id=entry.id, net=net, initial=initial, final=final))
        ranks[entry.id] = entry.rank
    return LoadedModels(
        manifest=manifest,
        ranked=RankedModelSet(models=tuple(models), ranks=ranks),
        skipped=tuple(skipped),
    )
