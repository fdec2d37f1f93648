#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "fxlabel/core.hpp"

namespace fxlabel {

// Recall-first combination: a study is positive when any member says so.
// Scores are dropped; model_name becomes "union(n=K)".
PredictionSet ensemble_union(const std::vector<PredictionSet>& members);

// Finding-level union: locations/implants united, side/stage by majority
// vote with ties resolved to Both / OtherStage; evidence is cleared.
LabeledCorpus ensemble_union_findings(const std::vector<LabeledCorpus>& members);

// Legacy label table (rule-based labeler export): 1.0 positive; 0.0,
// -1.0 and absent all count as negative.
struct LegacyLabels {
  std::map<std::string, std::optional<double>> entries;
};

bool legacy_positive(const std::optional<double>& label);

struct Discrepancy {
  std::string study_id;
  std::optional<double> legacy;  // absent when the legacy table had a blank
  TriClass relabeled = TriClass::Other;
  std::string quote;
};

struct AuditResult {
  std::vector<Discrepancy> discrepancies;  // sorted by study_id
  long legacy_positive_count = 0;
  long relabeled_fracture_count = 0;
  long disagreement_count = 0;
  long skipped_count = 0;  // ids present on one side only
};

// Joins on study_id and reports every binary disagreement between the
// legacy interpretation and the relabeled corpus.
AuditResult audit(const LegacyLabels& legacy, const LabeledCorpus& relabeled);

}  // namespace fxlabel
