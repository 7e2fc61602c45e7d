#include "keygraph/io.hpp"

#include <fstream>
#include <stdexcept>
#include <unordered_map>

#include <json.hpp>

namespace keygraph {

namespace {

std::unordered_map<std::string, int> id_index(const Corpus& corpus) {
  std::unordered_map<std::string, int> index;
  for (size_t i = 0; i < corpus.documents.size(); ++i)
    index.emplace(corpus.documents[i].id, static_cast<int>(i));
  return index;
}

nlohmann::json parse_line(const std::string& line, const std::string& path,
                          long long line_no) {
  try {
    return nlohmann::json::parse(line);
  } catch (const nlohmann::json::exception& e) {
    throw std::runtime_error(path + ": line " + std::to_string(line_no) +
                             ": invalid JSON: " + e.what());
  }
}

}  // namespace

void save_pseudo_labels(const PseudoLabeling& labels, const Corpus& corpus,
                        const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write '" + path + "'");
  for (size_t i = 0; i < labels.per_doc.size(); ++i) {
    if (!labels.per_doc[i]) continue;
    nlohmann::json rec;
    rec["id"] = corpus.documents[i].id;
    rec["label"] = labels.per_doc[i]->label;
    rec["confidence"] = labels.per_doc[i]->confidence;
    out << rec.dump() << "\n";
  }
}

PseudoLabeling load_pseudo_labels(const std::string& path, const Corpus& corpus) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open '" + path + "'");
  const auto index = id_index(corpus);
  PseudoLabeling labels;
  labels.per_doc.resize(corpus.documents.size());
  std::string line;
  long long line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const auto rec = parse_line(line, path, line_no);
    const auto it = index.find(rec.at("id").get<std::string>());
    if (it == index.end())
      throw std::runtime_error(path + ": line " + std::to_string(line_no) +
                               ": unknown document id");
    labels.per_doc[it->second] =
        PseudoLabel{rec.at("label").get<int>(), rec.at("confidence").get<double>()};
    ++labels.covered_count;
  }
  return labels;
}

void save_predictions(const std::vector<PseudoLabel>& preds,
                      const Corpus& corpus, const std::string& path) {
  if (preds.size() != corpus.documents.size())
    throw std::invalid_argument("save_predictions: not aligned with corpus");
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write '" + path + "'");
  for (size_t i = 0; i < preds.size(); ++i) {
    nlohmann::json rec;
    rec["id"] = corpus.documents[i].id;
    rec["label"] = preds[i].label;
    rec["confidence"] = preds[i].confidence;
    out << rec.dump() << "\n";
  }
}

std::vector<PseudoLabel> load_predictions(const std::string& path,
                                          const Corpus& corpus) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open '" + path + "'");
  const auto index = id_index(corpus);
  std::vector<PseudoLabel> preds(corpus.documents.size(), PseudoLabel{-1, 0.0});
  std::vector<bool> seen(corpus.documents.size(), false);
  std::string line;
  long long line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const auto rec = parse_line(line, path, line_no);
    const auto it = index.find(rec.at("id").get<std::string>());
    if (it == index.end())
      throw std::runtime_error(path + ": line " + std::to_string(line_no) +
                               ": unknown document id");
    preds[it->second] =
        PseudoLabel{rec.at("label").get<int>(), rec.at("confidence").get<double>()};
    seen[it->second] = true;
  }
  for (size_t i = 0; i < seen.size(); ++i)
    if (!seen[i])
      throw std::runtime_error(path + ": missing prediction for document '" +
                               corpus.documents[i].id + "'");
  return preds;
}

namespace {

nlohmann::json eval_to_json(const EvalResult& r) {
  nlohmann::json j;
  j["micro_f1"] = r.micro_f1;
  j["macro_f1"] = r.macro_f1;
  j["accuracy"] = r.accuracy;
  return j;
}

EvalResult eval_from_json(const nlohmann::json& j) {
  EvalResult r;
  r.micro_f1 = j.at("micro_f1").get<double>();
  r.macro_f1 = j.at("macro_f1").get<double>();
  r.accuracy = j.at("accuracy").get<double>();
  return r;
}

}  // namespace

void save_metrics(const MetricsReport& metrics, const std::string& path) {
  nlohmann::json j;
  j["iteration"] = metrics.iteration;
  j["coverage"] = metrics.coverage;
  j["covered_count"] = metrics.covered_count;
  j["delta"] = metrics.delta;
  j["classifier"] =
      metrics.classifier ? eval_to_json(*metrics.classifier) : nlohmann::json();
  j["pseudo"] = metrics.pseudo ? eval_to_json(*metrics.pseudo) : nlohmann::json();
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write '" + path + "'");
  out << j.dump(2) << "\n";
}

MetricsReport load_metrics(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open '" + path + "'");
  nlohmann::json j;
  in >> j;
  MetricsReport m;
  m.iteration = j.at("iteration").get<int>();
  m.coverage = j.at("coverage").get<double>();
  m.covered_count = j.at("covered_count").get<int>();
  m.delta = j.at("delta").get<double>();
  if (!j.at("classifier").is_null()) m.classifier = eval_from_json(j["classifier"]);
  if (!j.at("pseudo").is_null()) m.pseudo = eval_from_json(j["pseudo"]);
  return m;
}

}  // namespace keygraph
