"""Skill mention extraction, taxonomy matching and level resolution."""
from __future__ import annotations

import logging
import re
import string
from dataclasses import dataclass, field
from importlib import resources
from typing import Iterable, Mapping, Sequence

from .clients import ExtractionReply, ExtractorClient, MatcherClient
from .taxonomy import TaxonomySkill
from .text import SentenceGroup

log = logging.getLogger(__name__)

LEVEL_LABELS = ("beginner", "intermediate", "expert", "unknown")
LEVEL_VALUES = {"beginner": 1, "intermediate": 2, "expert": 3}
# Level assumed for an unknown (or non-conforming) label, per document kind.
UNKNOWN_DEFAULT = {"resume": 1, "job": 3, "course_prereq": 2, "course_target": 2}
MAX_OPTIONS = 6
LETTERS = string.ascii_uppercase[:MAX_OPTIONS]

_PAIR = re.compile(r"\(\s*([^(),]+?)\s*,\s*([^()]*?)\s*\)")


@dataclass(frozen=True)
class ExtractedSkill:
    surface: str
    level: str  # one of LEVEL_LABELS, or the raw model output when it is none of them
    doc_id: str = ""
    group: int = -1

    @property
    def is_other(self) -> bool:
        return self.level not in LEVEL_LABELS

    @property
    def has_level(self) -> bool:
        return self.level in LEVEL_VALUES


def _normalise_level(raw: str) -> str:
    low = raw.strip().strip("'\"").lower()
    return low if low in LEVEL_LABELS else raw.strip()


def parse_extraction_reply(reply: ExtractionReply) -> list[tuple[str, str]] | None:
    """(surface, level) pairs from a model reply; None when the reply is unusable.

    Accepts either ``(surface, level)`` lines or ``{"skills": [...]}``.
    """
    if isinstance(reply, Mapping):
        items = reply.get("skills")
        if not isinstance(items, list):
            return None
        out = []
        for item in items:
            if not isinstance(item, Mapping) or not str(item.get("surface", "")).strip():
                return None
            out.append((str(item["surface"]).strip(), _normalise_level(str(item.get("level", "unknown")))))
        return out
    if not isinstance(reply, str):
        return None
    text = reply.strip()
    if not text or text.lower().rstrip(".") in ("none", "no skills"):
        return []
    pairs = [(m.group(1).strip().strip("'\""), _normalise_level(m.group(2))) for m in _PAIR.finditer(text)]
    return pairs or None


def extract_skills(group: SentenceGroup, client: ExtractorClient, demonstrations: str = "") -> list[ExtractedSkill]:
    reply = client.extract(group.text, demonstrations)
    pairs = parse_extraction_reply(reply)
    if pairs is None:
        log.warning("unparseable extraction reply for %s#%d: %r", group.doc_id, group.position, reply)
        return []
    return [ExtractedSkill(s, lvl, group.doc_id, group.position) for s, lvl in pairs if s]


@dataclass
class MatchStats:
    calls: int = 0
    matched: int = 0
    no_match: int = 0
    invalid: int = 0


def format_options(candidates: Sequence[TaxonomySkill]) -> list[tuple[str, str, str]]:
    return [(LETTERS[i], c.preferred_label, c.description) for i, c in enumerate(candidates)]


def render_match_prompt(surface: str, candidates: Sequence[TaxonomySkill]) -> str:
    template = resources.files("skillpath.sem").joinpath("prompts/matching_template.txt").read_text()
    body = "\n".join(l for l in template.splitlines() if not l.startswith("#"))
    opts = "\n".join(f"{l}. {lab}: {d}" if d else f"{l}. {lab}" for l, lab, d in format_options(candidates))
    return body.format(surface=surface, options=opts)


def _parse_choice(answer: str, n: int) -> int | None | str:
    a = answer.strip().lower()
    if not a or a.startswith("no match") or a in ("none", "no"):
        return None
    m = re.match(r"^\(?([a-z])(?:[).:\s]|$)", a)
    if m and m.group(1).upper() in LETTERS[:n]:
        return LETTERS.index(m.group(1).upper())
    return "invalid"


def match_skill(surface: str, candidates: Sequence[TaxonomySkill], client: MatcherClient,
                stats: MatchStats | None = None) -> str | None:
    """Ask the matcher to pick one of the lettered candidates; None means no match."""
    if not candidates:
        return None
    if len(candidates) > MAX_OPTIONS:
        raise ValueError(f"at most {MAX_OPTIONS} candidates, got {len(candidates)}")
    answer = client.choose(surface, format_options(candidates))
    choice = _parse_choice(answer, len(candidates))
    if stats is not None:
        stats.calls += 1
        if choice is None:
            stats.no_match += 1
        elif choice == "invalid":
            stats.invalid += 1
        else:
            stats.matched += 1
    if choice is None or choice == "invalid":
        if choice == "invalid":
            log.info("matcher answer %r for %r is not an option; treated as no match", answer, surface)
        return None
    return candidates[choice].id


def resolve_level(kind: str, label: str) -> int:
    return LEVEL_VALUES.get(label, UNKNOWN_DEFAULT[kind])


def resolve_unknown_levels(kind: str, skills: Iterable[tuple[str, str]]) -> dict[str, int]:
    """Turn matched (skill id, label) pairs into levels; repeats keep the highest."""
    if kind not in UNKNOWN_DEFAULT:
        raise ValueError(f"unknown document kind {kind!r}")
    out: dict[str, int] = {}
    for sid, label in skills:
        level = resolve_level(kind, label)
        if level > out.get(sid, 0):
            out[sid] = level
    return out


@dataclass
class DocumentResult:
    doc_id: str
    kind: str
    words: int
    sentences: int
    extracted: list[ExtractedSkill] = field(default_factory=list)
    # (taxonomy id, level label) for each extraction that found a match
    matched: list[tuple[str, str]] = field(default_factory=list)

    def skill_map(self) -> dict[str, int]:
        return resolve_unknown_levels(self.kind, self.matched)

    def to_json(self) -> dict:
        return {
            "id": self.doc_id, "kind": self.kind, "words": self.words, "sentences": self.sentences,
            "extracted": [{"surface": e.surface, "level": e.level, "group": e.group} for e in self.extracted],
            "matched": [{"skill": s, "level": l} for s, l in self.matched],
        }

    @classmethod
    def from_json(cls, d: Mapping) -> "DocumentResult":
        return cls(d["id"], d["kind"], int(d["words"]), int(d["sentences"]),
                   [ExtractedSkill(e["surface"], e["level"], d["id"], int(e.get("group", -1))) for e in d["extracted"]],
                   [(m["skill"], m["level"]) for m in d["matched"]])
