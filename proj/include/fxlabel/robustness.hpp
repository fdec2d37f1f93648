#pragma once

#include <cstdint>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "fxlabel/core.hpp"
#include "fxlabel/labeler.hpp"
#include "fxlabel/lexicon.hpp"

namespace fxlabel {

struct PerturbationConfig {
  std::uint64_t seed = 0;
  double synonym_rate = 0.3;  // per-token probability
  double typo_rate = 0.1;     // per-token probability

  void validate() const;  // rates must lie in [0, 1]
};

// Test-visible typo primitives.
std::string transpose_at(std::string token, std::size_t pos);
std::string delete_at(std::string token, std::size_t pos);

// Deterministic lexical noise. Everything outside word tokens is kept
// byte-identical; each record draws its own stream from (seed, key) so
// processing order is irrelevant.
class Perturber {
 public:
  explicit Perturber(PerturbationConfig cfg,
                     const SynonymTable& synonyms = SynonymTable::bundled(),
                     const Lexicon& lexicon = Lexicon::bundled());

  std::string synonym_swap(std::string_view text,
                           std::string_view stream_key = "") const;
  std::string typo_inject(std::string_view text,
                          std::string_view stream_key = "") const;

  // synonym pass, then typo pass
  std::string perturb(std::string_view text,
                      std::string_view stream_key = "") const;
  std::vector<ReportRecord> perturb_corpus(
      const std::vector<ReportRecord>& corpus) const;

  // Negation-cue tokens and scope breakers; never typo-perturbed.
  const std::set<std::string>& protected_tokens() const { return protected_; }

 private:
  PerturbationConfig cfg_;
  const SynonymTable* synonyms_;
  std::set<std::string> protected_;
};

// One hand-labeled case: report text paired with its expected finding.
struct GoldCase {
  std::string study_id;
  std::string text;
  FractureFinding finding;
};

struct AccuracyPair {
  // share of cases whose binarized class matches gold
  double binary = 0.0;
  // over gold-Fracture cases: 0 when the parsed class is not Fracture,
  // else the fraction of the four attributes matching exactly; averaged
  double attribute = 0.0;
};

AccuracyPair score_against_gold(const std::vector<GoldCase>& gold,
                                const Labeler& labeler);

struct RobustnessReport {
  AccuracyPair clean;
  AccuracyPair perturbed;
  double binary_ratio = 0.0;     // perturbed / clean
  double attribute_ratio = 0.0;
};

RobustnessReport robustness_eval(const std::vector<GoldCase>& gold,
                                 const PerturbationConfig& cfg,
                                 const Labeler& labeler = Labeler());

}  // namespace fxlabel
