#pragma once

#include <string>
#include <vector>

#include "keygraph/annotator.hpp"
#include "keygraph/corpus.hpp"
#include "keygraph/metrics.hpp"

namespace keygraph {

// Pseudo-label file: one {"id", "label", "confidence"} record per covered
// document, corpus order.
void save_pseudo_labels(const PseudoLabeling& labels, const Corpus& corpus,
                        const std::string& path);
PseudoLabeling load_pseudo_labels(const std::string& path, const Corpus& corpus);

// Prediction file: one record per document (total).
void save_predictions(const std::vector<PseudoLabel>& preds,
                      const Corpus& corpus, const std::string& path);
std::vector<PseudoLabel> load_predictions(const std::string& path,
                                          const Corpus& corpus);

// Metrics record with stable field names. Wall time is intentionally not
// persisted so reports from identical runs compare byte-for-byte; it is
// logged alongside instead.
void save_metrics(const MetricsReport& metrics, const std::string& path);
MetricsReport load_metrics(const std::string& path);

}  // namespace keygraph
