"""Model clients for skill extraction and candidate matching.

Remote wire format (HTTP POST, JSON bodies, ``Authorization: Bearer $TOKEN``):

extraction request  {"text": str, "demonstrations": str,
                     "temperature": 0.0, "top_p": 1.0}
extraction reply    {"skills": [{"surface": str, "level": str}, ...]}
matching request    {"surface": str,
                     "options": [{"letter": "A", "label": str, "description": str}, ...],
                     "temperature": 0.0, "top_p": 1.0}
matching reply      {"choice": "A" | ... | "no match"}
"""
from __future__ import annotations

import json
import os
import re
import urllib.error
import urllib.request
from importlib import resources
from typing import Mapping, Protocol, Sequence

from .fuzzy import token_set_ratio
from .text import split_sentences

GENERATION_SETTINGS = {"temperature": 0.0, "top_p": 1.0, "frequency_penalty": 0.0, "presence_penalty": 0.0}
TOKEN_ENV_VAR = "SKILLPATH_API_TOKEN"


class TransportError(RuntimeError):
    """The request never produced a model answer; safe to retry."""


Option = tuple[str, str, str]  # letter, label, description
ExtractionReply = str | Mapping


class ExtractorClient(Protocol):
    def extract(self, text: str, demonstrations: str) -> ExtractionReply: ...


class MatcherClient(Protocol):
    def choose(self, surface: str, options: Sequence[Option]) -> str: ...


def default_demonstrations() -> str:
    return resources.files("skillpath.sem").joinpath("prompts/extraction_demos.txt").read_text()


class ScriptedExtractorClient:
    """Returns canned answers: one fixed reply, or a lookup keyed by group text."""

    def __init__(self, reply: ExtractionReply = "", by_text: Mapping[str, ExtractionReply] | None = None):
        self.reply = reply
        self.by_text = dict(by_text or {})

    def extract(self, text, demonstrations):
        return self.by_text.get(text, self.reply)


LEVEL_CUES = {
    "expert": ("expert", "advanced", "extensive", "deep", "mastery", "senior", "strong"),
    "intermediate": ("intermediate", "working knowledge", "solid", "proficient", "hands-on"),
    "beginner": ("beginner", "basic", "basics", "introductory", "introduction", "fundamentals", "novice"),
}


class LexiconExtractorClient:
    """Offline stand-in for the extraction model.

    Finds known skill phrases (longest first, word bounded) in each sentence
    and labels them with the first level cue found in that sentence, or
    ``unknown``. Replies in the ``(surface, level)`` line format.
    """

    def __init__(self, phrases: Sequence[str]):
        uniq = sorted({p.lower().strip() for p in phrases if p.strip()}, key=lambda p: (-len(p), p))
        self._patterns = [(p, re.compile(r"(?<![0-9a-z])" + re.escape(p) + r"(?![0-9a-z])")) for p in uniq]
        cue_alt = "|".join(re.escape(c) for cues in LEVEL_CUES.values() for c in cues)
        self._cue = re.compile(r"(?<![0-9a-z])(" + cue_alt + r")(?![0-9a-z])")
        self._cue_level = {c: lvl for lvl, cues in LEVEL_CUES.items() for c in cues}

    def extract(self, text, demonstrations):
        lines = []
        for sentence in split_sentences(text):
            low = sentence.lower()
            m = self._cue.search(low)
            level = self._cue_level[m.group(1)] if m else "unknown"
            taken: list[tuple[int, int]] = []
            found: list[tuple[int, str]] = []
            for phrase, pat in self._patterns:
                for hit in pat.finditer(low):
                    span = hit.span()
                    if any(span[0] < e and s < span[1] for s, e in taken):
                        continue
                    taken.append(span)
                    found.append((span[0], phrase))
            for _, phrase in sorted(found):
                lines.append(f"({phrase}, {level})")
        return "\n".join(lines)


class FixedMatcherClient:
    def __init__(self, answer: str):
        self.answer = answer

    def choose(self, surface, options):
        return self.answer


class LexicalMatcherClient:
    """Offline stand-in for the matching model: best token-set match above a floor."""

    def __init__(self, threshold: float = 0.75):
        self.threshold = threshold

    def choose(self, surface, options):
        best, best_score = "no match", self.threshold - 1e-12
        for letter, label, _ in options:
            score = token_set_ratio(surface, label)
            if score > best_score:
                best, best_score = letter, score
        return best


def _post_json(endpoint: str, body: dict, timeout: float) -> dict:
    headers = {"Content-Type": "application/json"}
    token = os.environ.get(TOKEN_ENV_VAR)
    if token:
        headers["Authorization"] = f"Bearer {token}"
    req = urllib.request.Request(endpoint, data=json.dumps(body).encode("utf-8"), headers=headers, method="POST")
    try:
        with urllib.request.urlopen(req, timeout=timeout) as resp:
            return json.loads(resp.read().decode("utf-8"))
    except (urllib.error.URLError, TimeoutError, ConnectionError) as exc:
        raise TransportError(f"POST {endpoint} failed: {exc}") from exc


class RemoteExtractorClient:
    def __init__(self, endpoint: str, timeout: float = 60.0):
        self.endpoint = endpoint
        self.timeout = timeout

    def extract(self, text, demonstrations):
        body = {"text": text, "demonstrations": demonstrations,
                "temperature": GENERATION_SETTINGS["temperature"], "top_p": GENERATION_SETTINGS["top_p"]}
        return _post_json(self.endpoint, body, self.timeout)


class RemoteMatcherClient:
    def __init__(self, endpoint: str, timeout: float = 60.0):
        self.endpoint = endpoint
        self.timeout = timeout

    def choose(self, surface, options):
        body = {"surface": surface,
                "options": [{"letter": l, "label": lab, "description": d} for l, lab, d in options],
                "temperature": GENERATION_SETTINGS["temperature"], "top_p": GENERATION_SETTINGS["top_p"]}
        reply = _post_json(self.endpoint, body, self.timeout)
        return str(reply.get("choice", ""))
