"""Documents, rule-based sentence splitting and sentence grouping."""
from __future__ import annotations

import re
from dataclasses import dataclass

DOC_KINDS = ("job", "course_prereq", "course_target", "resume")

# Lowercased tokens that end with "." without ending a sentence.
ABBREVIATIONS = frozenset({
    "e.g", "i.e", "etc", "vs", "mr", "mrs", "ms", "dr", "prof", "inc", "ltd", "co",
    "jr", "sr", "st", "no", "approx", "dept", "fig", "incl", "min", "max", "yrs",
})

_TERMINATOR = re.compile(r"[.!?]+")


@dataclass(frozen=True)
class RawDocument:
    id: str
    kind: str
    text: str

    def __post_init__(self):
        if self.kind not in DOC_KINDS:
            raise ValueError(f"document {self.id!r}: unknown kind {self.kind!r}")
        if not self.text.strip():
            raise ValueError(f"document {self.id!r}: empty text")

    def word_count(self) -> int:
        return len(self.text.split())


@dataclass(frozen=True)
class SentenceGroup:
    doc_id: str
    position: int
    sentences: tuple[str, ...]

    @property
    def text(self) -> str:
        return " ".join(self.sentences)


def _ends_sentence(text: str, end: int, start_of_token: int) -> bool:
    token = text[start_of_token:end].rstrip(".!?").lower()
    if text[end - 1] == "." and token in ABBREVIATIONS:
        return False
    # single capital initials such as "J." in names
    if text[end - 1] == "." and len(token) == 1 and token.isalpha():
        return False
    # decimal numbers like 3.5 have no space after the dot
    return end >= len(text) or text[end].isspace() or text[end] in "\"')]"


def split_sentences(text: str) -> list[str]:
    """Split on . ! ? followed by whitespace, and on line breaks."""
    out: list[str] = []
    for line in text.splitlines():
        line = line.strip()
        if not line:
            continue
        start = 0
        for m in _TERMINATOR.finditer(line):
            end = m.end()
            tok_start = line.rfind(" ", 0, m.start()) + 1
            if _ends_sentence(line, end, tok_start):
                # keep closing quotes/brackets with their sentence
                while end < len(line) and line[end] in "\"')]":
                    end += 1
                piece = line[start:end].strip()
                if piece:
                    out.append(piece)
                start = end
        tail = line[start:].strip()
        if tail:
            out.append(tail)
    return out


def group_size(kind: str) -> int:
    return 1 if kind == "resume" else 2


def segment(doc: RawDocument) -> list[SentenceGroup]:
    """Resume sentences stand alone; job and course sentences go in pairs.

    With an odd count the last group holds a single sentence.
    """
    sentences = split_sentences(doc.text)
    size = group_size(doc.kind)
    return [
        SentenceGroup(doc.id, pos, tuple(sentences[i:i + size]))
        for pos, i in enumerate(range(0, len(sentences), size))
    ]
