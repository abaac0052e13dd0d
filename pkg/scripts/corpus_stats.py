"""Render synthetic documents, run extraction with the offline clients, print corpus statistics."""
import argparse

from skillpath.data import SyntheticConfig, filter_short_documents, generate_synthetic, synthetic_documents
from skillpath.sem.clients import LexicalMatcherClient, LexiconExtractorClient, default_demonstrations
from skillpath.sem.pipeline import SemPipeline, extraction_stats, stats_table


def main():
    p = argparse.ArgumentParser(description=__doc__)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--skills", type=int, default=60)
    args = p.parse_args()

    bundle = generate_synthetic(SyntheticConfig(seed=args.seed, n_skills=args.skills))
    docs = filter_short_documents(synthetic_documents(bundle, args.seed))
    phrases = [label for s in bundle.taxonomy for label in s.labels]
    pipe = SemPipeline(bundle.taxonomy, LexiconExtractorClient(phrases), LexicalMatcherClient(),
                       demonstrations=default_demonstrations())
    results = pipe.process_corpus(docs)
    print(stats_table(extraction_stats(results)), end="")
    m = pipe.match_stats
    print(f"matcher calls {m.calls}: matched {m.matched}, no match {m.no_match}, invalid {m.invalid}")


if __name__ == "__main__":
    main()
