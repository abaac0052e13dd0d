from .clients import (FixedMatcherClient, LexicalMatcherClient, LexiconExtractorClient,
                      RemoteExtractorClient, RemoteMatcherClient, ScriptedExtractorClient,
                      TransportError, default_demonstrations)
from .extract import (DocumentResult, ExtractedSkill, MatchStats, extract_skills, match_skill,
                      parse_extraction_reply, resolve_unknown_levels)
from .fuzzy import levenshtein, token_set_ratio
from .pipeline import SemPipeline, build_records, extraction_stats
from .taxonomy import CandidateIndex, TaxonomySkill, TrigramEmbedding, load_taxonomy, select_candidates
from .text import RawDocument, SentenceGroup, segment, split_sentences
