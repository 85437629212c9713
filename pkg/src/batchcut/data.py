"""Datasets of samples annotated with knowledge-description sets.

A sample owns a set of description IDs; the algorithms only ever look at
those IDs. Loading remaps arbitrary source IDs to a dense 0-based range so
that downstream code can use array-indexed structures; the original IDs are
kept for writing output.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

from .exceptions import DatasetFormatError
from .partition import Partition


@dataclass
class Sample:
    """One training sample: a dense id, a sorted array of description ids,
    and opaque passthrough label/text."""

    sample_id: int
    descriptions: np.ndarray
    label: str | None = None
    text: str | None = None

    def __post_init__(self):
        self.descriptions = np.unique(np.asarray(self.descriptions, dtype=np.int64))
        self.descriptions.setflags(write=False)


@dataclass
class Dataset:
    """Ordered samples plus the dense description-id universe size.

    ``sample_ids``/``description_ids`` map dense ids back to the source ids
    (identity when the dataset was generated rather than loaded).
    """

    samples: list[Sample]
    num_descriptions: int
    sample_ids: np.ndarray = field(default=None)
    description_ids: np.ndarray = field(default=None)

    def __post_init__(self):
        if self.sample_ids is None:
            self.sample_ids = np.arange(len(self.samples), dtype=np.int64)
        if self.description_ids is None:
            self.description_ids = np.arange(self.num_descriptions, dtype=np.int64)
        for pos, s in enumerate(self.samples):
            if s.sample_id != pos:
                raise ValueError(f"sample at position {pos} has id {s.sample_id}")
            if s.descriptions.size and s.descriptions[-1] >= self.num_descriptions:
                raise ValueError(
                    f"sample {pos} references description id "
                    f"{int(s.descriptions[-1])} >= {self.num_descriptions}"
                )
            if s.descriptions.size and s.descriptions[0] < 0:
                raise ValueError(f"sample {pos} has a negative description id")

    @property
    def n(self) -> int:
        return len(self.samples)

    def description_sets(self) -> list[np.ndarray]:
        return [s.descriptions for s in self.samples]

    def set_sizes(self) -> np.ndarray:
        return np.array([s.descriptions.size for s in self.samples], dtype=np.int64)


def load_dataset(path, format: str = "jsonl") -> Dataset:
    """Load a dataset file, remapping sample and description ids densely.

    Each line is an object ``{"id": int, "descriptions": [int...],
    "label": str?, "text": str?}``. Samples are ordered by source id.
    """
    if format != "jsonl":
        raise ValueError(f"unsupported format: {format!r}")
    records = []
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            if not line.strip():
                continue
            try:
                obj = json.loads(line)
            except json.JSONDecodeError as exc:
                raise DatasetFormatError(f"line {lineno}: {exc}") from exc
            try:
                sid = int(obj["id"])
                descs = [int(d) for d in obj["descriptions"]]
            except (KeyError, TypeError, ValueError) as exc:
                raise DatasetFormatError(
                    f"line {lineno}: expected integer 'id' and integer list 'descriptions'"
                ) from exc
            if sid < 0:
                raise DatasetFormatError(f"line {lineno}: negative sample id {sid}")
            if any(d < 0 for d in descs):
                raise DatasetFormatError(f"line {lineno}: negative description id")
            records.append((sid, descs, obj.get("label"), obj.get("text"), lineno))

    if not records:
        raise DatasetFormatError("empty dataset")

    seen: dict[int, int] = {}
    for sid, _, _, _, lineno in records:
        if sid in seen:
            raise DatasetFormatError(
                f"line {lineno}: duplicate sample id {sid} (first seen on line {seen[sid]})"
            )
        seen[sid] = lineno

    records.sort(key=lambda r: r[0])
    all_descs = sorted({d for _, descs, _, _, _ in records for d in descs})
    dense_of = {orig: i for i, orig in enumerate(all_descs)}

    samples = [
        Sample(
            sample_id=pos,
            descriptions=np.array([dense_of[d] for d in descs], dtype=np.int64),
            label=label,
            text=text,
        )
        for pos, (_, descs, label, text, _) in enumerate(records)
    ]
    return Dataset(
        samples=samples,
        num_descriptions=len(all_descs),
        sample_ids=np.array([r[0] for r in records], dtype=np.int64),
        description_ids=np.array(all_descs, dtype=np.int64),
    )


def write_dataset(dataset: Dataset, path) -> None:
    """Write the dataset back out in the JSONL schema, using source ids."""
    with open(path, "w", encoding="utf-8") as fh:
        for s in dataset.samples:
            obj = {
                "id": int(dataset.sample_ids[s.sample_id]),
                "descriptions": [int(dataset.description_ids[d]) for d in s.descriptions],
            }
            if s.label is not None:
                obj["label"] = s.label
            if s.text is not None:
                obj["text"] = s.text
            fh.write(json.dumps(obj, sort_keys=True) + "\n")


@dataclass
class TriggerLexicon:
    """Trigger phrases mapped to description ids; a description may have
    several triggers."""

    entries: list[tuple[str, int]]

    def __post_init__(self):
        cleaned = []
        for phrase, did in self.entries:
            phrase = phrase.strip().lower()
            if not phrase:
                raise ValueError("empty trigger phrase")
            if int(did) < 0:
                raise ValueError(f"negative description id {did}")
            cleaned.append((phrase, int(did)))
        self.entries = cleaned

    def description_ids(self) -> list[int]:
        return sorted({did for _, did in self.entries})


def load_lexicon(path) -> TriggerLexicon:
    """Read a TSV lexicon: one ``trigger_phrase<TAB>description_id`` per line."""
    entries = []
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.rstrip("\n")
            if not line.strip():
                continue
            parts = line.split("\t")
            if len(parts) != 2:
                raise DatasetFormatError(f"line {lineno}: expected 'phrase<TAB>id'")
            phrase, raw_id = parts
            try:
                did = int(raw_id)
            except ValueError as exc:
                raise DatasetFormatError(f"line {lineno}: bad description id {raw_id!r}") from exc
            if not phrase.strip():
                raise DatasetFormatError(f"line {lineno}: empty trigger phrase")
            if did < 0:
                raise DatasetFormatError(f"line {lineno}: negative description id {did}")
            entries.append((phrase, did))
    if not entries:
        raise DatasetFormatError("empty lexicon")
    return TriggerLexicon(entries)


def _phrase_occurs(phrase_tokens: list[str], text_tokens: list[str]) -> bool:
    m = len(phrase_tokens)
    if m == 0 or m > len(text_tokens):
        return False
    for start in range(len(text_tokens) - m + 1):
        if text_tokens[start:start + m] == phrase_tokens:
            return True
    return False


def match_triggers(texts: list[str], lexicon: TriggerLexicon) -> Dataset:
    """Derive description sets from raw text by trigger-phrase matching.

    A trigger matches when its lowercase tokens appear as a contiguous run of
    whitespace tokens in the text, so "home" does not fire inside "homework".
    No stemming is applied.
    """
    if not lexicon.entries:
        raise ValueError("lexicon is empty")
    lex_ids = lexicon.description_ids()
    dense_of = {orig: i for i, orig in enumerate(lex_ids)}
    phrase_tokens = [(phrase.split(), dense_of[did]) for phrase, did in lexicon.entries]

    samples = []
    for pos, text in enumerate(texts):
        tokens = text.lower().split()
        matched = {did for ptoks, did in phrase_tokens if _phrase_occurs(ptoks, tokens)}
        samples.append(
            Sample(
                sample_id=pos,
                descriptions=np.array(sorted(matched), dtype=np.int64),
                text=text,
            )
        )
    return Dataset(
        samples=samples,
        num_descriptions=len(lex_ids),
        description_ids=np.array(lex_ids, dtype=np.int64),
    )


def generate_planted(
    n: int,
    k_clusters: int,
    shared_per_cluster: int,
    private_per_sample: int,
    noise_overlap: float = 0.0,
    seed: int = 0,
) -> tuple[Dataset, Partition]:
    """Synthesize a dataset with known ground-truth clusters.

    Samples are grouped into ``k_clusters`` contiguous clusters of equal size.
    Every member of a cluster carries that cluster's ``shared_per_cluster``
    common descriptions plus ``private_per_sample`` descriptions unique to the
    sample. With probability ``noise_overlap`` a sample additionally picks up
    one description from another cluster's shared pool, creating weak
    cross-cluster edges. Deterministic given ``seed``.

    Returns the dataset and the planted ground-truth partition.
    """
    if n < 1 or k_clusters < 1:
        raise ValueError("n and k_clusters must be >= 1")
    if n % k_clusters != 0:
        raise ValueError(f"n={n} is not divisible by k_clusters={k_clusters}")
    if not 0.0 <= noise_overlap <= 1.0:
        raise ValueError("noise_overlap must be in [0, 1]")
    if shared_per_cluster < 0 or private_per_sample < 0:
        raise ValueError("description counts must be non-negative")

    rng = np.random.default_rng(seed)
    cluster_size = n // k_clusters
    shared_base = 0
    private_base = k_clusters * shared_per_cluster
    num_descriptions = private_base + n * private_per_sample

    samples = []
    for i in range(n):
        c = i // cluster_size
        parts = [
            np.arange(
                shared_base + c * shared_per_cluster,
                shared_base + (c + 1) * shared_per_cluster,
                dtype=np.int64,
            ),
            np.arange(
                private_base + i * private_per_sample,
                private_base + (i + 1) * private_per_sample,
                dtype=np.int64,
            ),
        ]
        if noise_overlap > 0.0 and k_clusters > 1 and shared_per_cluster > 0:
            if rng.random() < noise_overlap:
                other = int(rng.integers(k_clusters - 1))
                if other >= c:
                    other += 1
                off = int(rng.integers(shared_per_cluster))
                parts.append(
                    np.array([shared_base + other * shared_per_cluster + off], dtype=np.int64)
                )
        samples.append(Sample(sample_id=i, descriptions=np.concatenate(parts)))

    dataset = Dataset(samples=samples, num_descriptions=num_descriptions)
    truth = Partition(
        assignment=np.arange(n, dtype=np.int64) // cluster_size, k=k_clusters
    )
    return dataset, truth


def truncate_descriptions(dataset: Dataset, cap: int) -> Dataset:
    """Keep only the first ``cap`` descriptions of each sample (by dense id)."""
    if cap < 0:
        raise ValueError("cap must be non-negative")
    samples = [
        Sample(
            sample_id=s.sample_id,
            descriptions=s.descriptions[:cap],
            label=s.label,
            text=s.text,
        )
        for s in dataset.samples
    ]
    return Dataset(
        samples=samples,
        num_descriptions=dataset.num_descriptions,
        sample_ids=dataset.sample_ids,
        description_ids=dataset.description_ids,
    )
