#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "fxlabel/core.hpp"

namespace fxlabel {

enum class Task { Binary, Location, Side, Stage, Implants };

std::string_view to_token(Task t);

enum class Polarity { Positive, Negative };

// Fracture is the positive class; Normal and Other are both negative.
Polarity binarize(TriClass label);

struct ConfusionCounts {
  long tp = 0;
  long fp = 0;
  long fn = 0;
  long tn = 0;
  long total() const { return tp + fp + fn + tn; }
};

struct Prf {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
};

// Harmonic mean of precision and recall; 0 when both are 0.
double f1_score(double precision, double recall);

// 0/0 cases resolve to 0 by convention.
Prf prf1(const ConfusionCounts& c);

struct ClassMetrics {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  long support = 0;
};

struct MetricsReport {
  Task task = Task::Binary;
  // class name -> metrics, in a fixed class order per task
  std::vector<std::pair<std::string, ClassMetrics>> per_class;
  double accuracy = 0.0;
  double balanced_accuracy = 0.0;
  std::optional<double> roc_auc;
};

// One-vs-rest confusion for the binary task. Every gt study must be
// predicted (MissingPrediction otherwise); extra predictions are ignored.
ConfusionCounts confusion(const PredictionSet& preds, const LabeledCorpus& gt,
                          Polarity target);

// Unweighted mean of per-class recalls over classes with support > 0.
double balanced_accuracy(const PredictionSet& preds, const LabeledCorpus& gt);
double balanced_accuracy(const LabeledCorpus& preds, const LabeledCorpus& gt,
                         Task task);

// Mann-Whitney statistic normalized by (#pos * #neg); ties count 1/2.
// Throws UndefinedAUC when either class is empty, MissingScore when an
// overlapping prediction has no score.
double roc_auc(const PredictionSet& preds, const LabeledCorpus& gt);

// Binary task only: label-level predictions (ROC-AUC present when every
// overlapping prediction carries a score, absent when none do).
MetricsReport evaluate_binary(const PredictionSet& preds,
                              const LabeledCorpus& gt);
std::vector<MetricsReport> evaluate(const PredictionSet& preds,
                                    const LabeledCorpus& gt);

// All five tasks from finding-level predictions. Attribute tasks are
// restricted to studies whose ground truth is Fracture.
std::vector<MetricsReport> evaluate(const LabeledCorpus& preds,
                                    const LabeledCorpus& gt);

double round3(double x);

// Fixed-key-order JSON document; values rounded to 3 decimals at this
// presentation boundary only.
std::string reports_to_json(const std::vector<MetricsReport>& reports,
                            const std::string& model_name,
                            std::size_t n_studies);

}  // namespace fxlabel
