#pragma once

#include <optional>
#include <vector>

namespace keygraph {

struct EvalResult {
  double micro_f1 = 0.0;
  double macro_f1 = 0.0;
  double accuracy = 0.0;
};

// Single-label multiclass scores. Micro-F1 comes from global TP/FP/FN (and
// equals accuracy when every item has exactly one prediction); macro-F1 is
// the unweighted mean of per-class F1 over classes present in gold or
// prediction. Errors on length mismatch.
EvalResult evaluate(const std::vector<int>& predicted,
                    const std::vector<int>& gold);

struct MetricsReport {
  int iteration = 0;
  std::optional<EvalResult> classifier;   // vs gold, all labeled documents
  std::optional<EvalResult> pseudo;       // vs gold, covered documents
  double coverage = 0.0;
  int covered_count = 0;
  double delta = 0.0;
  double wall_time_seconds = 0.0;  // logged separately, not persisted
};

}  // namespace keygraph
