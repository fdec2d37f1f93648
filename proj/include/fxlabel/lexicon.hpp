#pragma once

#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "fxlabel/core.hpp"

namespace fxlabel {

enum class LexCategory {
  FractureTerm,
  NegationCue,
  LateralityCue,
  StageCue,
  AnatomyCue,
  ImplantCue,
};

std::string_view to_token(LexCategory c);

// Conditions restricting when a fracture_term pattern counts as a mention.
// BoneAdjacent: the term needs an anatomy cue right before it, or an
// "of (the) <anatomy>" tail ("clavicular deformity", "deformity of the
// clavicle"). WiresContext: the sentence must name sternal wires.
enum class MentionCondition { None, BoneAdjacent, WiresContext };

struct LexiconEntry {
  LexCategory category;
  std::vector<std::string> pattern;  // case-folded token sequence, non-empty
  std::string payload;  // cue categories: target enum token; fracture_term:
                        // optional condition tag; negation_cue: empty
};

MentionCondition mention_condition(const LexiconEntry& entry);

// Keyword table driving the labeler. Loaded from a plain-text table with
// one entry per line:
//
//   category<TAB>pattern[<TAB>payload]
//
// "#" starts a comment, blank lines are skipped, patterns may contain
// spaces ("sternal wires"). Payloads are validated per category.
class Lexicon {
 public:
  struct Match {
    std::size_t pos;    // token index of the first matched token
    std::size_t len;    // number of tokens matched
    const LexiconEntry* entry;
  };

  static Lexicon from_text(std::string_view text);
  static Lexicon from_file(const std::string& path);

  // The compiled-in copy of data/lexicon.txt.
  static const Lexicon& bundled();

  const std::vector<LexiconEntry>& entries(LexCategory category) const;
  std::size_t size() const;

  // Longest-match scan of a case-folded token list. Matches within one
  // category never overlap; the longest pattern wins at each position.
  std::vector<Match> match(LexCategory category,
                           const std::vector<std::string>& tokens) const;

  // True when the token occurs in any pattern of any category.
  bool knows_token(const std::string& folded_token) const;

  void add(LexiconEntry entry);

 private:
  std::vector<std::vector<LexiconEntry>> by_category_ =
      std::vector<std::vector<LexiconEntry>>(6);
};

// Label-preserving replacements for the perturbation harness, stored in
// the same line format with category "synonym"; the payload is the
// replacement and may span several words ("bilateral" -> "left and right").
class SynonymTable {
 public:
  static SynonymTable from_text(std::string_view text);
  static SynonymTable from_file(const std::string& path);
  static const SynonymTable& bundled();

  // Replacement tokens for a case-folded token, or nullptr.
  const std::vector<std::string>* lookup(const std::string& folded_token) const;
  std::size_t size() const { return map_.size(); }

 private:
  std::map<std::string, std::vector<std::string>> map_;
};

// Raw text of the bundled tables (identical to the files under data/).
std::string_view bundled_lexicon_text();
std::string_view bundled_synonyms_text();

}  // namespace fxlabel
