#include "fxlabel/aggregate.hpp"

#include <algorithm>

#include "fxlabel/metrics.hpp"

namespace fxlabel {

namespace {

template <typename Map>
void check_same_keys(const Map& first, const Map& other, std::size_t index) {
  if (first.size() != other.size() ||
      !std::equal(first.begin(), first.end(), other.begin(),
                  [](const auto& a, const auto& b) {
                    return a.first == b.first;
                  })) {
    throw MemberKeyMismatchError("member " + std::to_string(index) +
                                 " differs from member 0");
  }
}

}  // namespace

PredictionSet ensemble_union(const std::vector<PredictionSet>& members) {
  if (members.empty()) {
    throw MemberKeyMismatchError("ensemble needs at least one member");
  }
  for (std::size_t i = 1; i < members.size(); ++i) {
    check_same_keys(members[0].entries, members[i].entries, i);
  }
  PredictionSet out;
  out.model_name = "union(n=" + std::to_string(members.size()) + ")";
  for (const auto& [study_id, first] : members[0].entries) {
    bool any_fracture = false;
    bool any_normal = false;
    for (const PredictionSet& m : members) {
      const TriClass label = m.entries.at(study_id).label;
      any_fracture = any_fracture || label == TriClass::Fracture;
      any_normal = any_normal || label == TriClass::Normal;
    }
    Prediction p;
    p.label = any_fracture ? TriClass::Fracture
                           : (any_normal ? TriClass::Normal : TriClass::Other);
    out.entries.emplace(study_id, p);
  }
  return out;
}

LabeledCorpus ensemble_union_findings(
    const std::vector<LabeledCorpus>& members) {
  if (members.empty()) {
    throw MemberKeyMismatchError("ensemble needs at least one member");
  }
  for (std::size_t i = 1; i < members.size(); ++i) {
    check_same_keys(members[0].entries, members[i].entries, i);
  }
  LabeledCorpus out;
  out.provenance = members[0].provenance;
  for (const auto& [study_id, first] : members[0].entries) {
    bool any_fracture = false;
    bool any_normal = false;
    LocationSet locations;
    ImplantSet implants;
    std::map<Side, int> side_votes;
    std::map<Stage, int> stage_votes;
    for (const LabeledCorpus& m : members) {
      const FractureFinding& f = m.entries.at(study_id);
      any_normal = any_normal || f.tri_class() == TriClass::Normal;
      if (f.tri_class() != TriClass::Fracture) continue;
      any_fracture = true;
      locations.insert(f.locations().begin(), f.locations().end());
      implants.insert(f.implants().begin(), f.implants().end());
      ++side_votes[f.side()];
      ++stage_votes[f.stage()];
    }
    if (!any_fracture) {
      out.entries.emplace(study_id, any_normal ? FractureFinding::normal()
                                               : FractureFinding::other());
      continue;
    }
    auto winner = [](const auto& votes, auto tie_value) {
      int best = 0;
      for (const auto& [value, count] : votes) best = std::max(best, count);
      auto chosen = tie_value;
      int winners = 0;
      for (const auto& [value, count] : votes) {
        if (count == best) {
          ++winners;
          chosen = value;
        }
      }
      return winners == 1 ? chosen : tie_value;
    };
    const Side side = winner(side_votes, Side::Both);
    const Stage stage = winner(stage_votes, Stage::OtherStage);
    out.entries.emplace(study_id,
                        FractureFinding::fracture(std::move(locations), side,
                                                  stage, std::move(implants)));
  }
  return out;
}

bool legacy_positive(const std::optional<double>& label) {
  return label.has_value() && *label == 1.0;
}

AuditResult audit(const LegacyLabels& legacy, const LabeledCorpus& relabeled) {
  AuditResult result;
  for (const auto& [study_id, label] : legacy.entries) {
    if (!relabeled.entries.count(study_id)) ++result.skipped_count;
  }
  for (const auto& [study_id, finding] : relabeled.entries) {
    const auto it = legacy.entries.find(study_id);
    if (it == legacy.entries.end()) {
      ++result.skipped_count;
      continue;
    }
    const bool a_positive = legacy_positive(it->second);
    const bool b_positive =
        binarize(finding.tri_class()) == Polarity::Positive;
    if (a_positive) ++result.legacy_positive_count;
    if (finding.tri_class() == TriClass::Fracture)
      ++result.relabeled_fracture_count;
    if (a_positive != b_positive) {
      Discrepancy d;
      d.study_id = study_id;
      d.legacy = it->second;
      d.relabeled = finding.tri_class();
      d.quote = finding.evidence();
      result.discrepancies.push_back(std::move(d));
    }
  }
  result.disagreement_count =
      static_cast<long>(result.discrepancies.size());
  // relabeled.entries is ordered, so discrepancies already sort by study_id
  return result;
}

}  // namespace fxlabel
