#include "fxlabel/metrics.hpp"

#include <algorithm>
#include <cmath>

#include <json.hpp>

namespace fxlabel {

namespace {

using ordered_json = nlohmann::ordered_json;

// gt study ids joined with their predictions; throws on a missing one.
template <typename Value, typename Map>
std::vector<std::pair<const FractureFinding*, const Value*>> join(
    const Map& preds, const LabeledCorpus& gt) {
  if (gt.entries.empty()) throw EmptyEvaluationError();
  std::vector<std::pair<const FractureFinding*, const Value*>> out;
  out.reserve(gt.entries.size());
  for (const auto& [study_id, finding] : gt.entries) {
    const auto it = preds.find(study_id);
    if (it == preds.end()) throw MissingPredictionError(study_id);
    out.emplace_back(&finding, &it->second);
  }
  return out;
}

double safe_div(double num, double den) { return den == 0.0 ? 0.0 : num / den; }

struct BinaryPair {
  bool gt_pos;
  bool pred_pos;
  std::optional<double> score;
};

std::vector<BinaryPair> binary_pairs(const PredictionSet& preds,
                                     const LabeledCorpus& gt) {
  std::vector<BinaryPair> pairs;
  for (const auto& [finding, pred] :
       join<Prediction>(preds.entries, gt)) {
    pairs.push_back(BinaryPair{
        binarize(finding->tri_class()) == Polarity::Positive,
        binarize(pred->label) == Polarity::Positive, pred->score});
  }
  return pairs;
}

ConfusionCounts count_binary(const std::vector<BinaryPair>& pairs,
                             bool positive_class) {
  ConfusionCounts c;
  for (const BinaryPair& p : pairs) {
    const bool gt_in = p.gt_pos == positive_class;
    const bool pred_in = p.pred_pos == positive_class;
    if (gt_in && pred_in) ++c.tp;
    else if (!gt_in && pred_in) ++c.fp;
    else if (gt_in && !pred_in) ++c.fn;
    else ++c.tn;
  }
  return c;
}

// Per-class one-vs-rest counts for a task, given membership predicates.
struct TaskData {
  std::vector<std::string> class_names;
  // class index -> (gt membership, pred membership) per study
  std::vector<std::vector<std::pair<bool, bool>>> membership;
  long exact_matches = 0;
  long n = 0;
};

template <typename MemberFn>
void fill_membership(TaskData& data, std::size_t n_classes,
                     const std::vector<std::pair<const FractureFinding*,
                                                 const FractureFinding*>>& rows,
                     MemberFn&& member) {
  data.membership.assign(n_classes, {});
  for (const auto& [gt_f, pred_f] : rows) {
    for (std::size_t c = 0; c < n_classes; ++c) {
      data.membership[c].emplace_back(member(*gt_f, c), member(*pred_f, c));
    }
  }
}

ConfusionCounts counts_for_class(const TaskData& data, std::size_t c) {
  ConfusionCounts counts;
  for (const auto& [gt_in, pred_in] : data.membership[c]) {
    if (gt_in && pred_in) ++counts.tp;
    else if (!gt_in && pred_in) ++counts.fp;
    else if (gt_in && !pred_in) ++counts.fn;
    else ++counts.tn;
  }
  return counts;
}

MetricsReport report_from_task(Task task, const TaskData& data) {
  MetricsReport report;
  report.task = task;
  double recall_sum = 0.0;
  long classes_with_support = 0;
  for (std::size_t c = 0; c < data.class_names.size(); ++c) {
    const ConfusionCounts counts = counts_for_class(data, c);
    const Prf prf = prf1(counts);
    ClassMetrics m;
    m.precision = prf.precision;
    m.recall = prf.recall;
    m.f1 = prf.f1;
    m.support = counts.tp + counts.fn;
    if (m.support > 0) {
      recall_sum += m.recall;
      ++classes_with_support;
    }
    report.per_class.emplace_back(data.class_names[c], m);
  }
  report.accuracy = safe_div(static_cast<double>(data.exact_matches),
                             static_cast<double>(data.n));
  // a set task can have no supported class at all; fall back to the
  // exact-match share
  report.balanced_accuracy =
      classes_with_support == 0
          ? report.accuracy
          : recall_sum / static_cast<double>(classes_with_support);
  return report;
}

using FindingRows =
    std::vector<std::pair<const FractureFinding*, const FractureFinding*>>;

TaskData binary_task_data(const FindingRows& rows) {
  TaskData data;
  data.class_names = {"positive", "negative"};
  fill_membership(data, 2, rows,
                  [](const FractureFinding& f, std::size_t c) {
                    const bool pos =
                        binarize(f.tri_class()) == Polarity::Positive;
                    return c == 0 ? pos : !pos;
                  });
  data.n = static_cast<long>(rows.size());
  for (const auto& [gt_f, pred_f] : rows) {
    if (binarize(gt_f->tri_class()) == binarize(pred_f->tri_class()))
      ++data.exact_matches;
  }
  return data;
}

TaskData attribute_task_data(Task task, const FindingRows& fracture_rows) {
  TaskData data;
  data.n = static_cast<long>(fracture_rows.size());
  switch (task) {
    case Task::Location: {
      for (Location l : kAllLocations)
        data.class_names.emplace_back(to_token(l));
      fill_membership(data, std::size(kAllLocations), fracture_rows,
                      [](const FractureFinding& f, std::size_t c) {
                        return f.locations().count(kAllLocations[c]) > 0;
                      });
      for (const auto& [gt_f, pred_f] : fracture_rows)
        if (gt_f->locations() == pred_f->locations()) ++data.exact_matches;
      break;
    }
    case Task::Side: {
      for (Side s : kAllSides) data.class_names.emplace_back(to_token(s));
      fill_membership(data, std::size(kAllSides), fracture_rows,
                      [](const FractureFinding& f, std::size_t c) {
                        return f.side() == kAllSides[c];
                      });
      for (const auto& [gt_f, pred_f] : fracture_rows)
        if (gt_f->side() == pred_f->side()) ++data.exact_matches;
      break;
    }
    case Task::Stage: {
      for (Stage s : kAllStages) data.class_names.emplace_back(to_token(s));
      fill_membership(data, std::size(kAllStages), fracture_rows,
                      [](const FractureFinding& f, std::size_t c) {
                        return f.stage() == kAllStages[c];
                      });
      for (const auto& [gt_f, pred_f] : fracture_rows)
        if (gt_f->stage() == pred_f->stage()) ++data.exact_matches;
      break;
    }
    case Task::Implants: {
      for (Implant i : kAllImplants)
        data.class_names.emplace_back(to_token(i));
      fill_membership(data, std::size(kAllImplants), fracture_rows,
                      [](const FractureFinding& f, std::size_t c) {
                        return f.implants().count(kAllImplants[c]) > 0;
                      });
      for (const auto& [gt_f, pred_f] : fracture_rows)
        if (gt_f->implants() == pred_f->implants()) ++data.exact_matches;
      break;
    }
    case Task::Binary:
      break;
  }
  return data;
}

}  // namespace

std::string_view to_token(Task t) {
  switch (t) {
    case Task::Binary: return "binary";
    case Task::Location: return "location";
    case Task::Side: return "side";
    case Task::Stage: return "stage";
    case Task::Implants: return "implants";
  }
  return "";
}

Polarity binarize(TriClass label) {
  return label == TriClass::Fracture ? Polarity::Positive : Polarity::Negative;
}

double f1_score(double precision, double recall) {
  return safe_div(2.0 * precision * recall, precision + recall);
}

Prf prf1(const ConfusionCounts& c) {
  Prf out;
  out.precision = safe_div(static_cast<double>(c.tp),
                           static_cast<double>(c.tp + c.fp));
  out.recall =
      safe_div(static_cast<double>(c.tp), static_cast<double>(c.tp + c.fn));
  out.f1 = f1_score(out.precision, out.recall);
  return out;
}

ConfusionCounts confusion(const PredictionSet& preds, const LabeledCorpus& gt,
                          Polarity target) {
  return count_binary(binary_pairs(preds, gt), target == Polarity::Positive);
}

double balanced_accuracy(const PredictionSet& preds, const LabeledCorpus& gt) {
  const auto pairs = binary_pairs(preds, gt);
  double recall_sum = 0.0;
  long classes = 0;
  for (bool positive_class : {true, false}) {
    const ConfusionCounts c = count_binary(pairs, positive_class);
    if (c.tp + c.fn > 0) {
      recall_sum += prf1(c).recall;
      ++classes;
    }
  }
  return safe_div(recall_sum, static_cast<double>(classes));
}

double balanced_accuracy(const LabeledCorpus& preds, const LabeledCorpus& gt,
                         Task task) {
  for (const MetricsReport& r : evaluate(preds, gt)) {
    if (r.task == task) return r.balanced_accuracy;
  }
  throw EmptyEvaluationError();
}

double roc_auc(const PredictionSet& preds, const LabeledCorpus& gt) {
  std::vector<double> pos, neg;
  for (const auto& [finding, pred] : join<Prediction>(preds.entries, gt)) {
    if (!pred->score) throw MissingScoreError(preds.model_name);
    if (binarize(finding->tri_class()) == Polarity::Positive)
      pos.push_back(*pred->score);
    else
      neg.push_back(*pred->score);
  }
  if (pos.empty() || neg.empty()) throw UndefinedAucError();

  // midrank formulation: AUC = (R_pos - n_pos(n_pos+1)/2) / (n_pos * n_neg)
  std::vector<std::pair<double, bool>> all;
  all.reserve(pos.size() + neg.size());
  for (double s : pos) all.emplace_back(s, true);
  for (double s : neg) all.emplace_back(s, false);
  std::sort(all.begin(), all.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  double rank_sum_pos = 0.0;
  std::size_t i = 0;
  while (i < all.size()) {
    std::size_t j = i;
    while (j < all.size() && all[j].first == all[i].first) ++j;
    const double midrank = (static_cast<double>(i + 1) +
                            static_cast<double>(j)) / 2.0;  // 1-based
    for (std::size_t k = i; k < j; ++k) {
      if (all[k].second) rank_sum_pos += midrank;
    }
    i = j;
  }
  const double n_pos = static_cast<double>(pos.size());
  const double n_neg = static_cast<double>(neg.size());
  const double u = rank_sum_pos - n_pos * (n_pos + 1.0) / 2.0;
  return u / (n_pos * n_neg);
}

MetricsReport evaluate_binary(const PredictionSet& preds,
                              const LabeledCorpus& gt) {
  FindingRows rows;
  std::vector<FractureFinding> pred_findings;
  const auto joined = join<Prediction>(preds.entries, gt);
  pred_findings.reserve(joined.size());
  std::size_t scored = 0;
  for (const auto& [finding, pred] : joined) {
    pred_findings.push_back(pred->label == TriClass::Fracture
                                ? FractureFinding::fracture({}, Side::NoneSide,
                                                            Stage::OtherStage,
                                                            {})
                                : FractureFinding(pred->label, {},
                                                  Side::NoneSide,
                                                  Stage::OtherStage, {}));
    if (pred->score) ++scored;
  }
  for (std::size_t i = 0; i < joined.size(); ++i)
    rows.emplace_back(joined[i].first, &pred_findings[i]);

  MetricsReport report = report_from_task(Task::Binary, binary_task_data(rows));
  if (scored == joined.size()) {
    report.roc_auc = roc_auc(preds, gt);
  } else if (scored > 0) {
    throw MissingScoreError(preds.model_name);
  }
  return report;
}

std::vector<MetricsReport> evaluate(const PredictionSet& preds,
                                    const LabeledCorpus& gt) {
  return {evaluate_binary(preds, gt)};
}

std::vector<MetricsReport> evaluate(const LabeledCorpus& preds,
                                    const LabeledCorpus& gt) {
  FindingRows rows;
  for (const auto& [finding, pred] :
       join<FractureFinding>(preds.entries, gt)) {
    rows.emplace_back(finding, pred);
  }
  FindingRows fracture_rows;
  for (const auto& row : rows) {
    if (row.first->tri_class() == TriClass::Fracture)
      fracture_rows.push_back(row);
  }

  std::vector<MetricsReport> reports;
  reports.push_back(report_from_task(Task::Binary, binary_task_data(rows)));
  for (Task task :
       {Task::Location, Task::Side, Task::Stage, Task::Implants}) {
    reports.push_back(
        report_from_task(task, attribute_task_data(task, fracture_rows)));
  }
  return reports;
}

double round3(double x) { return std::round(x * 1000.0) / 1000.0; }

std::string reports_to_json(const std::vector<MetricsReport>& reports,
                            const std::string& model_name,
                            std::size_t n_studies) {
  ordered_json doc;
  doc["model"] = model_name;
  doc["n_studies"] = n_studies;
  doc["tasks"] = ordered_json::array();
  for (const MetricsReport& r : reports) {
    ordered_json task;
    task["task"] = std::string(to_token(r.task));
    ordered_json per_class;
    for (const auto& [name, m] : r.per_class) {
      ordered_json cls;
      cls["precision"] = round3(m.precision);
      cls["recall"] = round3(m.recall);
      cls["f1"] = round3(m.f1);
      cls["support"] = m.support;
      per_class[name] = std::move(cls);
    }
    task["per_class"] = std::move(per_class);
    task["accuracy"] = round3(r.accuracy);
    task["balanced_accuracy"] = round3(r.balanced_accuracy);
    if (r.roc_auc) task["roc_auc"] = round3(*r.roc_auc);
    else task["roc_auc"] = nullptr;
    doc["tasks"].push_back(std::move(task));
  }
  return doc.dump(2) + "\n";
}

}  // namespace fxlabel
