"""End-to-end extraction and matching over documents, plus corpus statistics."""
from __future__ import annotations

import csv
import io
from collections import Counter, defaultdict
from concurrent.futures import ThreadPoolExecutor
from typing import Iterable, Sequence

from ..skills import CourseRecord, JobRecord, LearnerProfile
from .clients import ExtractorClient, MatcherClient
from .extract import DocumentResult, MatchStats, extract_skills, match_skill
from .taxonomy import CandidateIndex, EmbeddingProvider, TaxonomySkill, TrigramEmbedding
from .text import DOC_KINDS, RawDocument, segment


class SemPipeline:
    """Segment, extract, select candidates and match, one document at a time.

    Sentence groups of a document may be sent to the extractor concurrently
    (``max_workers``); results are always merged back in document order.
    """

    def __init__(self, taxonomy: Sequence[TaxonomySkill], extractor: ExtractorClient,
                 matcher: MatcherClient, embed: EmbeddingProvider | None = None,
                 demonstrations: str = "", max_workers: int = 1):
        self.index = CandidateIndex(taxonomy, embed or TrigramEmbedding())
        self.extractor = extractor
        self.matcher = matcher
        self.demonstrations = demonstrations
        self.max_workers = max_workers
        self.match_stats = MatchStats()
        self._match_cache: dict[str, str | None] = {}

    def match(self, surface: str) -> str | None:
        key = surface.strip().lower()
        if key not in self._match_cache:
            self._match_cache[key] = match_skill(surface, self.index.select(surface), self.matcher, self.match_stats)
        return self._match_cache[key]

    def process(self, doc: RawDocument) -> DocumentResult:
        groups = segment(doc)
        if self.max_workers > 1 and len(groups) > 1:
            with ThreadPoolExecutor(self.max_workers) as pool:
                per_group = list(pool.map(lambda g: extract_skills(g, self.extractor, self.demonstrations), groups))
        else:
            per_group = [extract_skills(g, self.extractor, self.demonstrations) for g in groups]
        extracted = [e for batch in per_group for e in batch]
        matched = []
        for e in extracted:
            sid = self.match(e.surface)
            if sid is not None:
                matched.append((sid, e.level))
        return DocumentResult(doc.id, doc.kind, doc.word_count(), sum(len(g.sentences) for g in groups),
                              extracted, matched)

    def process_corpus(self, docs: Iterable[RawDocument]) -> list[DocumentResult]:
        return [self.process(d) for d in docs]


def build_records(results: Sequence[DocumentResult]):
    """Courses, jobs and learners from matched results; records left empty are dropped.

    A course is assembled from its ``course_prereq`` and ``course_target``
    documents sharing one id. Returns ``(courses, jobs, learners, dropped_ids)``.
    """
    from ..data import normalize_course_levels

    prereq: dict[str, dict[str, int]] = {}
    target: dict[str, dict[str, int]] = {}
    jobs, learners, dropped = [], [], []
    for r in results:
        m = r.skill_map()
        if r.kind == "job":
            if m:
                jobs.append(JobRecord(r.doc_id, m))
            else:
                dropped.append(r.doc_id)
        elif r.kind == "resume":
            learners.append(LearnerProfile(r.doc_id, m))
        elif r.kind == "course_prereq":
            prereq[r.doc_id] = m
        else:
            target[r.doc_id] = m
    courses = []
    for cid in sorted(set(prereq) | set(target)):
        provided = target.get(cid, {})
        if not provided:
            dropped.append(cid)
            continue
        courses.append(normalize_course_levels(CourseRecord(cid, prereq.get(cid, {}), provided)))
    return courses, jobs, learners, dropped


STATS_COLUMNS = ("kind", "docs", "words_per_doc", "sentences_per_doc", "skills_extracted",
                 "levels_extracted_pct", "skills_matched",
                 "pct_expert", "pct_intermediate", "pct_beginner", "pct_unknown", "pct_other")


def extraction_stats(results: Sequence[DocumentResult]) -> list[dict]:
    """Per-kind averages of document length, extraction and matching counts.

    ``levels_extracted_pct`` averages, over documents with at least one
    extraction, the share of mentions labelled beginner/intermediate/expert.
    The ``pct_*`` columns pool all mentions of a kind.
    """
    by_kind: dict[str, list[DocumentResult]] = defaultdict(list)
    for r in results:
        by_kind[r.kind].append(r)
    rows = []
    for kind in DOC_KINDS:
        docs = by_kind.get(kind)
        if not docs:
            continue
        n = len(docs)
        leveled = [100.0 * sum(e.has_level for e in d.extracted) / len(d.extracted) for d in docs if d.extracted]
        labels = Counter("other" if e.is_other else e.level for d in docs for e in d.extracted)
        total = sum(labels.values())
        row = {
            "kind": kind,
            "docs": n,
            "words_per_doc": sum(d.words for d in docs) / n,
            "sentences_per_doc": sum(d.sentences for d in docs) / n,
            "skills_extracted": sum(len({e.surface.lower() for e in d.extracted}) for d in docs) / n,
            "levels_extracted_pct": sum(leveled) / len(leveled) if leveled else 0.0,
            "skills_matched": sum(len({s for s, _ in d.matched}) for d in docs) / n,
        }
        for label in ("expert", "intermediate", "beginner", "unknown", "other"):
            row[f"pct_{label}"] = 100.0 * labels[label] / total if total else 0.0
        rows.append(row)
    return rows


def stats_csv(rows: Sequence[dict]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(STATS_COLUMNS)
    for r in rows:
        w.writerow([r[c] if isinstance(r[c], (str, int)) else f"{r[c]:.2f}" for c in STATS_COLUMNS])
    return buf.getvalue()


def stats_table(rows: Sequence[dict]) -> str:
    """Columns per document kind, one line per statistic."""
    if not rows:
        return "(no documents)\n"
    names = [r["kind"] for r in rows]
    lines = [f"{'':24s}" + "".join(f"{n:>15s}" for n in names)]
    for col in STATS_COLUMNS[1:]:
        cells = "".join(f"{r[col]:>15d}" if isinstance(r[col], int) else f"{r[col]:>15.1f}" for r in rows)
        lines.append(f"{col:24s}{cells}")
    return "\n".join(lines) + "\n"
