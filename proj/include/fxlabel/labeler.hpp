#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "fxlabel/core.hpp"
#include "fxlabel/lexicon.hpp"

namespace fxlabel {

// One sentence of a report: byte offsets into the source text plus the
// case-folded word tokens (with their byte ranges relative to the span).
struct SentenceSpan {
  std::size_t start = 0;
  std::size_t end = 0;
  std::string text;
  std::vector<std::string> tokens;
  std::vector<std::size_t> token_begin;
  std::vector<std::size_t> token_end;
};

// Half-open range of token indices.
struct TokenRange {
  std::size_t begin = 0;
  std::size_t end = 0;
  bool contains(std::size_t i) const { return i >= begin && i < end; }
};

// Splits on ".", "!", "?" and newlines. Decimal numbers ("3.5"), ordinal
// digits ("3." followed by a lowercase continuation) and common
// abbreviations ("e.g.", "vs.") do not split.
std::vector<SentenceSpan> split_sentences(std::string_view text);

// Rule-based parser: tri-class classification with sentence-scoped
// negation, then keyword attribute extraction.
class Labeler {
 public:
  Labeler() : lexicon_(&Lexicon::bundled()) {}
  explicit Labeler(const Lexicon& lexicon) : lexicon_(&lexicon) {}

  const Lexicon& lexicon() const { return *lexicon_; }

  // Token positions of fracture mentions (start of each match).
  std::vector<std::size_t> detect_fracture_mentions(
      const SentenceSpan& s) const;

  // Token ranges governed by a negation cue: rightward from the cue to the
  // sentence end, capped at 12 tokens, broken at "but"/"however" and at a
  // semicolon between tokens.
  std::vector<TokenRange> negation_scopes(const SentenceSpan& s) const;

  TriClass classify_report(std::string_view text) const;

  FractureFinding extract_attributes(std::string_view text) const;

  // One entry per record, provenance RuleParser. jobs > 1 labels records
  // in parallel; the result does not depend on the schedule.
  LabeledCorpus label_corpus(const std::vector<ReportRecord>& corpus,
                             int jobs = 1) const;

 private:
  const Lexicon* lexicon_;
};

inline constexpr std::size_t kNegationScopeTokens = 12;

}  // namespace fxlabel
