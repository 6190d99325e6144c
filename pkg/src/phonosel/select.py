"""Stratified test-set construction and top-k data selection.

Selections are total orders: perplexity or centroid-distance ties break
by ascending id, so every manifest is a pure function of its inputs
(plus the seed for random sampling).

Manifest TSV: header comment ``# selection name=<..> criterion=<..>
k=<..> seed=<..>`` followed by ``id<TAB>score`` lines.

Embedding binary format ``EMB1`` (all integers little-endian): magic
``EMB1``, u32 record count, u32 dimension, then per record a u16 id
byte length, the UTF-8 id bytes, and ``dim`` float32 components. A
centroid file is the same format with count 1 and id ``__centroid__``.
"""

from __future__ import annotations

import math
import struct
import warnings
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from .corpus import ScoredSentence, format_score
from .errors import DataError
from .rng import sample_without_replacement

EMB_MAGIC = b"EMB1"
CENTROID_ID = "__centroid__"

CRITERIA = ("lowest-ppl", "highest-ppl", "random", "nearest-centroid")


@dataclass(frozen=True)
class SelectionManifest:
    name: str
    criterion: str
    members: tuple[tuple[str, float], ...]
    seed: int | None = None

    def ids(self) -> list[str]:
        return [uid for uid, _ in self.members]


@dataclass(frozen=True)
class EmbeddingSet:
    """Id-keyed sentence vectors; insertion order is file order."""

    dim: int
    rows: dict[str, np.ndarray]

    def __len__(self) -> int:
        return len(self.rows)

    def matrix(self) -> np.ndarray:
        return np.stack(list(self.rows.values())) if self.rows else np.empty((0, self.dim))


def _check_unique_ids(scores: Sequence[ScoredSentence]) -> None:
    seen: set[str] = set()
    for s in scores:
        if s.id in seen:
            raise DataError(f"duplicate id {s.id!r} in scores")
        seen.add(s.id)


def select_by_perplexity(
    scores: Sequence[ScoredSentence],
    k: int,
    mode: str = "lowest",
    name: str | None = None,
) -> SelectionManifest:
    """Exact top-k by perplexity, ascending for ``lowest`` and
    descending for ``highest``; ties break by ascending id."""
    if mode not in ("lowest", "highest"):
        raise DataError(f"unknown selection mode {mode!r}")
    _check_unique_ids(scores)
    if k > len(scores):
        raise DataError(f"k={k} exceeds the {len(scores)} available scores")
    if k == 0:
        warnings.warn("k=0 selection produces an empty manifest")
    if mode == "lowest":
        ranked = sorted(scores, key=lambda s: (s.perplexity, s.id))
        criterion = "lowest-ppl"
    else:
        ranked = sorted(scores, key=lambda s: (-s.perplexity, s.id))
        criterion = "highest-ppl"
    members = tuple((s.id, s.perplexity) for s in ranked[:k])
    return SelectionManifest(name=name or criterion, criterion=criterion, members=members)


def make_testsets(
    scores: Sequence[ScoredSentence],
    size: int,
    seed: int,
    allow_overlap: bool = False,
) -> tuple[SelectionManifest, SelectionManifest, SelectionManifest]:
    """Build the (T-SIM, T-DIFF, T-RAN) stratified test sets.

    T-SIM takes the ``size`` lowest perplexities and T-DIFF the
    ``size`` highest; T-RAN is a seeded uniform sample. By default the
    three sets are pairwise disjoint: T-DIFF is drawn after removing
    T-SIM (which only matters under extreme score ties) and T-RAN is
    sampled from what remains. ``allow_overlap`` instead draws each
    set from the full score list independently.
    """
    _check_unique_ids(scores)
    if len(scores) < 3 * size:
        raise DataError(
            f"need at least {3 * size} scores to build three disjoint sets of {size}, "
            f"got {len(scores)}"
        )
    t_sim = select_by_perplexity(scores, size, mode="lowest", name="t-sim")

    diff_pool = scores if allow_overlap else [s for s in scores if s.id not in set(t_sim.ids())]
    t_diff = select_by_perplexity(diff_pool, size, mode="highest", name="t-diff")

    if allow_overlap:
        ran_pool = list(scores)
    else:
        taken = set(t_sim.ids()) | set(t_diff.ids())
        ran_pool = [s for s in scores if s.id not in taken]
    candidates = sorted(ran_pool, key=lambda s: s.id)
    sampled = sample_without_replacement(candidates, size, seed)
    members = tuple((s.id, s.perplexity) for s in sorted(sampled, key=lambda s: (s.perplexity, s.id)))
    t_ran = SelectionManifest(name="t-ran", criterion="random", members=members, seed=seed)
    return t_sim, t_diff, t_ran


def centroid(embeddings: EmbeddingSet) -> np.ndarray:
    """Arithmetic per-dimension mean of all vectors, in float64."""
    if not embeddings.rows:
        raise DataError("cannot take the centroid of an empty embedding set")
    return embeddings.matrix().astype(np.float64).mean(axis=0)


def select_by_centroid(
    pool: EmbeddingSet,
    center: np.ndarray,
    k: int,
    name: str | None = None,
) -> SelectionManifest:
    """k ids nearest to ``center`` by L2 distance, ties by ascending id.

    Distances are compared on squared L2; the manifest records the
    true (root) distance.
    """
    center = np.asarray(center, dtype=np.float64)
    if center.ndim != 1 or center.shape[0] != pool.dim:
        raise DataError(
            f"centroid dimension {center.shape} does not match pool dimension {pool.dim}"
        )
    if k > len(pool):
        raise DataError(f"k={k} exceeds the {len(pool)} pool vectors")
    if k == 0:
        warnings.warn("k=0 selection produces an empty manifest")
    diff = pool.matrix().astype(np.float64) - center[None, :]
    sq_dist = np.einsum("ij,ij->i", diff, diff)
    order = sorted(zip(pool.rows.keys(), sq_dist), key=lambda t: (t[1], t[0]))
    members = tuple((uid, math.sqrt(d2)) for uid, d2 in order[:k])
    return SelectionManifest(name=name or "nearest-centroid", criterion="nearest-centroid", members=members)


def write_manifest(manifest: SelectionManifest, path: str | Path) -> None:
    if manifest.criterion not in CRITERIA:
        raise DataError(f"unknown criterion {manifest.criterion!r}")
    if not manifest.name or any(ch.isspace() for ch in manifest.name):
        raise DataError(f"manifest name {manifest.name!r} must be non-empty without whitespace")
    seed = "-" if manifest.seed is None else str(manifest.seed)
    lines = [
        f"# selection name={manifest.name} criterion={manifest.criterion} "
        f"k={len(manifest.members)} seed={seed}\n"
    ]
    lines.extend(f"{uid}\t{format_score(score)}\n" for uid, score in manifest.members)
    Path(path).write_text("".join(lines), encoding="utf-8")


def read_manifest(path: str | Path) -> SelectionManifest:
    path = Path(path)
    lines = path.read_text(encoding="utf-8").splitlines()
    if not lines or not lines[0].startswith("# selection "):
        raise DataError(f"{path}: missing manifest header")
    try:
        fields = dict(part.split("=", 1) for part in lines[0][len("# selection "):].split())
        name = fields["name"]
        criterion = fields["criterion"]
        k = int(fields["k"])
        seed = None if fields["seed"] == "-" else int(fields["seed"])
    except (ValueError, KeyError) as exc:
        raise DataError(f"{path}: malformed manifest header") from exc
    if criterion not in CRITERIA:
        raise DataError(f"{path}: unknown criterion {criterion!r}")
    members: list[tuple[str, float]] = []
    for lineno, line in enumerate(lines[1:], start=2):
        parts = line.split("\t")
        if len(parts) != 2:
            raise DataError(f"{path}:{lineno}: malformed manifest line")
        try:
            score = float(parts[1])
        except ValueError as exc:
            raise DataError(f"{path}:{lineno}: unparseable manifest score") from exc
        members.append((parts[0], score))
    if len(members) != k:
        raise DataError(f"{path}: header k={k} but {len(members)} members present")
    return SelectionManifest(name=name, criterion=criterion, members=tuple(members), seed=seed)


def write_embeddings(
    records: Iterable[tuple[str, np.ndarray]] | EmbeddingSet,
    path: str | Path,
) -> None:
    if isinstance(records, EmbeddingSet):
        items = list(records.rows.items())
        dim = records.dim
    else:
        items = list(records)
        if not items:
            raise DataError("cannot write an empty embedding file")
        dim = len(items[0][1])
    with open(path, "wb") as fh:
        fh.write(EMB_MAGIC)
        fh.write(struct.pack("<II", len(items), dim))
        for uid, vec in items:
            vec32 = np.asarray(vec, dtype="<f4")
            if vec32.shape != (dim,):
                raise DataError(f"vector for {uid!r} has shape {vec32.shape}, expected ({dim},)")
            if not np.isfinite(vec32).all():
                raise DataError(f"vector for {uid!r} contains NaN or Inf")
            id_bytes = uid.encode("utf-8")
            if len(id_bytes) > 0xFFFF:
                raise DataError(f"embedding id {uid[:40]!r}... exceeds 65535 bytes")
            fh.write(struct.pack("<H", len(id_bytes)))
            fh.write(id_bytes)
            fh.write(vec32.tobytes())


def read_embeddings(path: str | Path) -> EmbeddingSet:
    path = Path(path)
    data = path.read_bytes()
    if data[:4] != EMB_MAGIC:
        raise DataError(f"{path}: bad magic, not an EMB1 file")
    if len(data) < 12:
        raise DataError(f"{path}: truncated header")
    count, dim = struct.unpack_from("<II", data, 4)
    rows: dict[str, np.ndarray] = {}
    offset = 12
    for _ in range(count):
        if offset + 2 > len(data):
            raise DataError(f"{path}: truncated record")
        (id_len,) = struct.unpack_from("<H", data, offset)
        offset += 2
        end = offset + id_len + 4 * dim
        if end > len(data):
            raise DataError(f"{path}: truncated record")
        uid = data[offset : offset + id_len].decode("utf-8")
        offset += id_len
        vec = np.frombuffer(data, dtype="<f4", count=dim, offset=offset).copy()
        offset += 4 * dim
        if uid in rows:
            raise DataError(f"{path}: duplicate embedding id {uid!r}")
        if not np.isfinite(vec).all():
            raise DataError(f"{path}: vector for {uid!r} contains NaN or Inf")
        rows[uid] = vec
    if offset != len(data):
        raise DataError(f"{path}: {len(data) - offset} trailing bytes after records")
    return EmbeddingSet(dim=dim, rows=rows)


def write_centroid(vector: np.ndarray, path: str | Path) -> None:
    write_embeddings([(CENTROID_ID, np.asarray(vector))], path)


def read_centroid(path: str | Path) -> np.ndarray:
    embeddings = read_embeddings(path)
    if len(embeddings) != 1:
        raise DataError(f"{path}: centroid file must hold exactly one record")
    return next(iter(embeddings.rows.values())).astype(np.float64)
