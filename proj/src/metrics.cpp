#include "keygraph/metrics.hpp"

#include <algorithm>
#include <stdexcept>

namespace keygraph {

EvalResult evaluate(const std::vector<int>& predicted,
                    const std::vector<int>& gold) {
  if (predicted.size() != gold.size())
    throw std::invalid_argument("evaluate: prediction/gold length mismatch");
  if (predicted.empty()) throw std::invalid_argument("evaluate: empty input");

  int max_class = 0;
  for (int c : predicted) max_class = std::max(max_class, c);
  for (int c : gold) max_class = std::max(max_class, c);
  const int C = max_class + 1;

  std::vector<long long> tp(C, 0), fp(C, 0), fn(C, 0);
  long long correct = 0;
  for (size_t i = 0; i < predicted.size(); ++i) {
    if (predicted[i] == gold[i]) {
      ++tp[predicted[i]];
      ++correct;
    } else {
      ++fp[predicted[i]];
      ++fn[gold[i]];
    }
  }

  long long tp_all = 0, fp_all = 0, fn_all = 0;
  double macro_sum = 0.0;
  int macro_classes = 0;
  for (int c = 0; c < C; ++c) {
    tp_all += tp[c];
    fp_all += fp[c];
    fn_all += fn[c];
    if (tp[c] + fp[c] + fn[c] == 0) continue;  // absent from gold and prediction
    const double denom = 2.0 * tp[c] + fp[c] + fn[c];
    macro_sum += denom > 0.0 ? 2.0 * tp[c] / denom : 0.0;
    ++macro_classes;
  }

  EvalResult r;
  const double micro_denom = 2.0 * tp_all + fp_all + fn_all;
  r.micro_f1 = micro_denom > 0.0 ? 2.0 * tp_all / micro_denom : 0.0;
  r.macro_f1 = macro_classes > 0 ? macro_sum / macro_classes : 0.0;
  r.accuracy = static_cast<double>(correct) / predicted.size();
  return r;
}

}  // namespace keygraph
