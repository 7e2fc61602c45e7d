#pragma once

#include <cstdint>

#include "keygraph/corpus.hpp"
#include "keygraph/keywords.hpp"

namespace keygraph {

// Generator for corpora where keyword counting is provably imperfect. A
// shared pivot word belongs to class 0's keyword list but is used by every
// class: class-0 documents repeat it alongside class-0 keywords, ordinary
// documents of other classes mention it once, outnumbered by their own
// keywords, and an "ambiguous" slice of documents raises its count until
// counting ties toward class 0 and mislabels them. The ambiguous documents
// share their induced subgraphs with correctly-counted documents of the same
// class, so the mislabeling lives purely in token counts: a subgraph
// annotator can label every pivot document by its context while counting
// provably cannot.
struct SynthSpec {
  int classes = 2;
  int context_words_per_class = 3;     // per-class keyword vocabulary
  int initial_keywords_per_class = 3;  // prefix of the pool given to the user set
  int theme_words_per_class = 12;      // class-flavored non-keyword words
  int shared_filler_words = 30;        // class-neutral noise words
  double ambiguity = 0.3;              // fraction of pivot-misleading documents
  double pivot_in_class0 = 0.3;        // chance a class-0 document repeats the pivot
  double pivot_in_others = 1.0;        // chance a non-ambiguous document of
                                       // another class mentions the pivot once
  double class0_prior = 0.35;          // class balance among unambiguous documents;
                                       // the rest is split over the other classes
  int num_documents = 5000;
  std::uint64_t seed = 1;
};

struct SynthResult {
  Corpus corpus;                // gold labels filled in
  KeywordSet initial_keywords;  // class 0 holds the pivot plus its prefix words
  int ambiguous_count = 0;
  int covered = 0;  // documents containing at least one initial keyword
  int counting_correct = 0;
  // Exact accuracy of keyword counting on covered documents, computed from
  // the generator's own per-document vote bookkeeping.
  double counting_accuracy = 0.0;
};

SynthResult generate_synthetic_corpus(const SynthSpec& spec);

}  // namespace keygraph
