#pragma once

#include <vector>

#include "mlbinet/data.hpp"
#include "mlbinet/model.hpp"

namespace mlbinet {

// Trigger classification counts: a prediction is correct iff sentence,
// span boundaries and event type all match a gold trigger exactly.
struct EvalCounts {
  long gold = 0;
  long predicted = 0;
  long correct = 0;

  double precision() const { return predicted == 0 ? 0.0 : static_cast<double>(correct) / predicted; }
  double recall() const { return gold == 0 ? 0.0 : static_cast<double>(correct) / gold; }
  double f1() const {
    double p = precision(), r = recall();
    return p + r == 0.0 ? 0.0 : 2.0 * p * r / (p + r);
  }
};

// single_event covers sentences with exactly one gold trigger, multi_event
// those with two or more. Sentences without gold triggers contribute their
// false positives to the overall counts only.
struct EvalReport {
  EvalCounts overall;
  EvalCounts single_event;
  EvalCounts multi_event;
};

EvalReport evaluate(const nn::Model& model, const std::vector<data::Document>& docs);

// Scores an explicit set of predictions against the gold corpus; evaluate()
// is this applied to model.predict(). Outer index: document, inner: real
// sentence.
EvalReport score_predictions(
    const std::vector<data::Document>& docs,
    const std::vector<std::vector<std::vector<data::Span>>>& predictions);

}  // namespace mlbinet
