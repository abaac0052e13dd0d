"""Taxonomy entries, embedding providers and hybrid candidate selection."""
from __future__ import annotations

import json
import zlib
from collections import Counter
from dataclasses import dataclass, field
from pathlib import Path
from typing import Protocol, Sequence

import numpy as np

from .fuzzy import token_set_ratio

TOP_PER_METHOD = 3


@dataclass(frozen=True)
class TaxonomySkill:
    id: str
    preferred_label: str
    alt_labels: tuple[str, ...] = field(default_factory=tuple)
    description: str = ""

    def __post_init__(self):
        if not self.preferred_label.strip():
            raise ValueError(f"taxonomy skill {self.id!r} has an empty preferred label")
        object.__setattr__(self, "alt_labels", tuple(self.alt_labels))

    @property
    def labels(self) -> tuple[str, ...]:
        return (self.preferred_label, *self.alt_labels)

    def to_json(self) -> dict:
        return {"id": self.id, "preferred_label": self.preferred_label,
                "alt_labels": list(self.alt_labels), "description": self.description}


def load_taxonomy(path: str | Path) -> list[TaxonomySkill]:
    return [TaxonomySkill(d["id"], d["preferred_label"], tuple(d.get("alt_labels", ())),
                          d.get("description", ""))
            for d in json.loads(Path(path).read_text())]


class EmbeddingProvider(Protocol):
    def embed(self, text: str) -> np.ndarray: ...


class TrigramEmbedding:
    """Character-trigram counts hashed into a fixed number of buckets."""

    def __init__(self, dim: int = 512):
        self.dim = dim

    def embed(self, text: str) -> np.ndarray:
        padded = f"  {text.lower().strip()} "
        counts = Counter(padded[i:i + 3] for i in range(len(padded) - 2))
        v = np.zeros(self.dim)
        for gram, n in counts.items():
            v[zlib.crc32(gram.encode("utf-8")) % self.dim] += n
        return v


def cosine(a: np.ndarray, b: np.ndarray) -> float:
    na, nb = np.linalg.norm(a), np.linalg.norm(b)
    if na == 0.0 or nb == 0.0:
        return 0.0
    return float(a @ b / (na * nb))


def rule_score(surface: str, skill: TaxonomySkill) -> float:
    key = surface.strip().lower()
    if any(key == label.strip().lower() for label in skill.labels):
        return 1.0
    return max(token_set_ratio(surface, label) for label in skill.labels)


def _top(scored: list[tuple[float, TaxonomySkill]], n: int) -> list[tuple[float, TaxonomySkill]]:
    return sorted(scored, key=lambda p: (-p[0], p[1].id))[:n]


class CandidateIndex:
    """Caches taxonomy embeddings so repeated lookups only embed the surface form."""

    def __init__(self, taxonomy: Sequence[TaxonomySkill], embed: EmbeddingProvider):
        if not taxonomy:
            raise ValueError("taxonomy is empty")
        self.taxonomy = list(taxonomy)
        self.embedder = embed
        self._vectors = [embed.embed(f"{s.preferred_label} {s.description}".strip()) for s in self.taxonomy]

    def select(self, surface: str) -> list[TaxonomySkill]:
        by_rule = _top([(rule_score(surface, s), s) for s in self.taxonomy], TOP_PER_METHOD)
        q = self.embedder.embed(surface)
        by_embed = _top([(cosine(q, v), s) for s, v in zip(self.taxonomy, self._vectors)], TOP_PER_METHOD)
        best: dict[str, float] = {}
        skills: dict[str, TaxonomySkill] = {}
        for score, s in by_rule + by_embed:
            if score > best.get(s.id, -1.0):
                best[s.id] = score
                skills[s.id] = s
        return [skills[i] for i in sorted(best, key=lambda i: (-best[i], i))]


def select_candidates(surface: str, taxonomy: Sequence[TaxonomySkill],
                      embed: EmbeddingProvider) -> list[TaxonomySkill]:
    """Union of the top three taxonomy skills by string rules and by embeddings."""
    return CandidateIndex(taxonomy, embed).select(surface)
