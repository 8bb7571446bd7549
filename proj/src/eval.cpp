#include "mlbinet/eval.hpp"

#include <algorithm>

#include "mlbinet/errors.hpp"

namespace mlbinet {

EvalReport score_predictions(
    const std::vector<data::Document>& docs,
    const std::vector<std::vector<std::vector<data::Span>>>& predictions) {
  if (predictions.size() != docs.size())
    throw DataError("score_predictions: prediction count does not match documents");
  EvalReport report;
  for (std::size_t d = 0; d < docs.size(); ++d) {
    const data::Document& doc = docs[d];
    if (static_cast<int>(predictions[d].size()) != doc.real_sentence_count)
      throw DataError("score_predictions: sentence count mismatch in document " + doc.doc_id);
    for (int i = 0; i < doc.real_sentence_count; ++i) {
      const auto& gold = doc.sentences[i].gold_spans;
      std::vector<data::Span> pred = predictions[d][i];
      std::sort(pred.begin(), pred.end());
      long correct = 0;
      for (const auto& p : pred)
        if (std::binary_search(gold.begin(), gold.end(), p)) ++correct;

      report.overall.gold += static_cast<long>(gold.size());
      report.overall.predicted += static_cast<long>(pred.size());
      report.overall.correct += correct;
      EvalCounts* bucket = nullptr;
      if (gold.size() == 1) bucket = &report.single_event;
      else if (gold.size() >= 2) bucket = &report.multi_event;
      if (bucket) {
        bucket->gold += static_cast<long>(gold.size());
        bucket->predicted += static_cast<long>(pred.size());
        bucket->correct += correct;
      }
    }
  }
  return report;
}

EvalReport evaluate(const nn::Model& model, const std::vector<data::Document>& docs) {
  std::vector<std::vector<std::vector<data::Span>>> predictions;
  predictions.reserve(docs.size());
  for (const auto& doc : docs) predictions.push_back(model.predict(doc));
  return score_predictions(docs, predictions);
}

}  // namespace mlbinet
