#include "fxlabel/labeler.hpp"

#include <algorithm>
#include <atomic>
#include <cctype>
#include <set>
#include <thread>

namespace fxlabel {

namespace {

bool is_word_char(unsigned char c) {
  return std::isalnum(c) || c >= 0x80;  // non-ASCII bytes stay inside tokens
}

bool is_space(unsigned char c) { return std::isspace(c); }

const std::set<std::string>& abbreviations() {
  static const std::set<std::string> abbrevs = {
      "eg", "ie", "vs", "etc", "dr", "mr", "mrs", "ms", "st", "approx",
  };
  return abbrevs;
}

// Word immediately before text[dot], periods stripped, case-folded.
std::string word_before(std::string_view text, std::size_t dot) {
  std::size_t begin = dot;
  while (begin > 0 && (is_word_char(text[begin - 1]) || text[begin - 1] == '.'))
    --begin;
  std::string word;
  for (std::size_t i = begin; i < dot; ++i) {
    if (text[i] != '.')
      word.push_back(static_cast<char>(
          std::tolower(static_cast<unsigned char>(text[i]))));
  }
  return word;
}

bool dot_is_boundary(std::string_view text, std::size_t i) {
  // "3.5", internal periods of "e.g."
  if (i + 1 < text.size() && is_word_char(text[i + 1])) return false;
  const std::string word = word_before(text, i);
  if (abbreviations().count(word)) return false;
  // ordinal "3." followed by a lowercase continuation or another number
  if (!word.empty() && std::isdigit(static_cast<unsigned char>(word.back()))) {
    std::size_t j = i + 1;
    while (j < text.size() && text[j] == ' ') ++j;
    if (j < text.size() &&
        (std::islower(static_cast<unsigned char>(text[j])) ||
         std::isdigit(static_cast<unsigned char>(text[j]))))
      return false;
  }
  return true;
}

void tokenize(SentenceSpan& span) {
  const std::string& s = span.text;
  std::size_t i = 0;
  while (i < s.size()) {
    if (!is_word_char(s[i])) {
      ++i;
      continue;
    }
    const std::size_t begin = i;
    while (i < s.size() && is_word_char(s[i])) ++i;
    std::string token;
    token.reserve(i - begin);
    for (std::size_t k = begin; k < i; ++k) {
      token.push_back(static_cast<char>(
          std::tolower(static_cast<unsigned char>(s[k]))));
    }
    span.tokens.push_back(std::move(token));
    span.token_begin.push_back(begin);
    span.token_end.push_back(i);
  }
}

// All gathered facts about one report, shared by classify and extract.
struct Analysis {
  std::vector<SentenceSpan> sentences;
  std::vector<std::vector<std::size_t>> mentions;       // per sentence
  std::vector<std::vector<TokenRange>> scopes;          // per sentence
  std::vector<bool> has_unnegated;                      // per sentence
  std::vector<bool> has_mention;                        // per sentence
};

bool in_any_scope(const std::vector<TokenRange>& scopes, std::size_t pos) {
  return std::any_of(scopes.begin(), scopes.end(),
                     [pos](const TokenRange& r) { return r.contains(pos); });
}

}  // namespace

std::vector<SentenceSpan> split_sentences(std::string_view text) {
  std::vector<SentenceSpan> spans;
  std::size_t i = 0;
  const std::size_t n = text.size();
  while (i < n) {
    while (i < n && is_space(text[i])) ++i;
    if (i >= n) break;
    const std::size_t start = i;
    std::size_t end = n;
    bool found = false;
    for (std::size_t j = start; j < n && !found; ++j) {
      const char c = text[j];
      if (c == '\n') {
        end = j;
        i = j + 1;
        found = true;
      } else if (c == '!' || c == '?') {
        end = j + 1;
        i = j + 1;
        found = true;
      } else if (c == '.' && dot_is_boundary(text, j)) {
        end = j + 1;
        // keep a trailing "..." / "?!" run inside this sentence
        while (end < n &&
               (text[end] == '.' || text[end] == '!' || text[end] == '?'))
          ++end;
        i = end;
        found = true;
      }
    }
    if (!found) i = n;
    while (end > start && is_space(text[end - 1])) --end;
    if (end <= start) continue;
    SentenceSpan span;
    span.start = start;
    span.end = end;
    span.text = std::string(text.substr(start, end - start));
    tokenize(span);
    spans.push_back(std::move(span));
  }
  return spans;
}

std::vector<std::size_t> Labeler::detect_fracture_mentions(
    const SentenceSpan& s) const {
  const auto anatomy = lexicon_->match(LexCategory::AnatomyCue, s.tokens);
  std::set<std::size_t> anatomy_tokens;
  bool wires_in_sentence = false;
  for (const auto& m : anatomy) {
    for (std::size_t k = m.pos; k < m.pos + m.len; ++k) anatomy_tokens.insert(k);
    if (parse_enum<Location>(m.entry->payload) == Location::SternalWires)
      wires_in_sentence = true;
  }

  std::vector<std::size_t> positions;
  for (const auto& m : lexicon_->match(LexCategory::FractureTerm, s.tokens)) {
    switch (mention_condition(*m.entry)) {
      case MentionCondition::None:
        positions.push_back(m.pos);
        break;
      case MentionCondition::BoneAdjacent: {
        const std::size_t p = m.pos;
        const bool before = p > 0 && anatomy_tokens.count(p - 1) > 0;
        const std::size_t after = p + m.len;
        const bool of_tail =
            after < s.tokens.size() && s.tokens[after] == "of" &&
            (anatomy_tokens.count(after + 1) || anatomy_tokens.count(after + 2) ||
             anatomy_tokens.count(after + 3));
        if (before || of_tail) positions.push_back(m.pos);
        break;
      }
      case MentionCondition::WiresContext:
        if (wires_in_sentence) positions.push_back(m.pos);
        break;
    }
  }
  return positions;
}

std::vector<TokenRange> Labeler::negation_scopes(const SentenceSpan& s) const {
  std::vector<TokenRange> scopes;
  for (const auto& cue : lexicon_->match(LexCategory::NegationCue, s.tokens)) {
    const std::size_t begin = cue.pos + cue.len;
    std::size_t bound = std::min(s.tokens.size(), begin + kNegationScopeTokens);
    for (std::size_t j = begin; j < bound; ++j) {
      if (s.tokens[j] == "but" || s.tokens[j] == "however") {
        bound = j;
        break;
      }
      if (j > 0) {
        const std::size_t gap_begin = s.token_end[j - 1];
        const std::size_t gap_end = s.token_begin[j];
        if (s.text.find(';', gap_begin) < gap_end) {
          bound = j;
          break;
        }
      }
    }
    if (bound > begin) scopes.push_back(TokenRange{begin, bound});
  }
  return scopes;
}

namespace {

Analysis analyze(const Labeler& labeler, std::string_view text) {
  Analysis a;
  a.sentences = split_sentences(text);
  a.mentions.reserve(a.sentences.size());
  for (const SentenceSpan& s : a.sentences) {
    auto mentions = labeler.detect_fracture_mentions(s);
    auto scopes = labeler.negation_scopes(s);
    bool unnegated = false;
    for (std::size_t pos : mentions) {
      if (!in_any_scope(scopes, pos)) {
        unnegated = true;
        break;
      }
    }
    a.has_mention.push_back(!mentions.empty());
    a.has_unnegated.push_back(unnegated);
    a.mentions.push_back(std::move(mentions));
    a.scopes.push_back(std::move(scopes));
  }
  return a;
}

}  // namespace

TriClass Labeler::classify_report(std::string_view text) const {
  const Analysis a = analyze(*this, text);
  bool any_mention = false;
  for (std::size_t i = 0; i < a.sentences.size(); ++i) {
    if (a.has_unnegated[i]) return TriClass::Fracture;
    any_mention = any_mention || a.has_mention[i];
  }
  return any_mention ? TriClass::Normal : TriClass::Other;
}

FractureFinding Labeler::extract_attributes(std::string_view text) const {
  const Analysis a = analyze(*this, text);

  bool any_mention = false;
  bool any_unnegated = false;
  std::string first_mention_sentence;
  std::string first_unnegated_sentence;
  for (std::size_t i = 0; i < a.sentences.size(); ++i) {
    if (a.has_mention[i] && first_mention_sentence.empty())
      first_mention_sentence = a.sentences[i].text;
    if (a.has_unnegated[i] && first_unnegated_sentence.empty())
      first_unnegated_sentence = a.sentences[i].text;
    any_mention = any_mention || a.has_mention[i];
    any_unnegated = any_unnegated || a.has_unnegated[i];
  }

  if (!any_unnegated) {
    if (any_mention) return FractureFinding::normal(first_mention_sentence);
    return FractureFinding::other();
  }

  LocationSet locations;
  ImplantSet implants;
  bool saw_left = false, saw_right = false, saw_both = false;
  bool saw_acute = false, saw_healed = false;

  for (std::size_t i = 0; i < a.sentences.size(); ++i) {
    if (!a.has_unnegated[i]) continue;
    const SentenceSpan& s = a.sentences[i];
    const auto& scopes = a.scopes[i];
    // cue tokens inside a negation scope describe the ruled-out finding
    auto unscoped = [&](const Lexicon::Match& m) {
      return !in_any_scope(scopes, m.pos);
    };
    for (const auto& m : lexicon_->match(LexCategory::AnatomyCue, s.tokens)) {
      if (unscoped(m)) locations.insert(parse_enum<Location>(m.entry->payload));
    }
    for (const auto& m :
         lexicon_->match(LexCategory::LateralityCue, s.tokens)) {
      if (!unscoped(m)) continue;
      switch (parse_enum<Side>(m.entry->payload)) {
        case Side::Left: saw_left = true; break;
        case Side::Right: saw_right = true; break;
        case Side::Both: saw_both = true; break;
        case Side::NoneSide: break;
      }
    }
    for (const auto& m : lexicon_->match(LexCategory::StageCue, s.tokens)) {
      if (!unscoped(m)) continue;
      switch (parse_enum<Stage>(m.entry->payload)) {
        case Stage::Acute: saw_acute = true; break;
        case Stage::Healed: saw_healed = true; break;
        case Stage::OtherStage: break;
      }
    }
    for (const auto& m : lexicon_->match(LexCategory::ImplantCue, s.tokens)) {
      if (unscoped(m)) implants.insert(parse_enum<Implant>(m.entry->payload));
    }
  }

  Side side = Side::NoneSide;
  if (saw_both || (saw_left && saw_right)) side = Side::Both;
  else if (saw_left) side = Side::Left;
  else if (saw_right) side = Side::Right;

  // acute findings dominate when both stages are described
  Stage stage = Stage::OtherStage;
  if (saw_acute) stage = Stage::Acute;
  else if (saw_healed) stage = Stage::Healed;

  return FractureFinding::fracture(std::move(locations), side, stage,
                                   std::move(implants),
                                   first_unnegated_sentence);
}

LabeledCorpus Labeler::label_corpus(const std::vector<ReportRecord>& corpus,
                                    int jobs) const {
  std::vector<FractureFinding> findings(corpus.size());
  const std::size_t n = corpus.size();
  const std::size_t workers =
      std::min<std::size_t>(std::max(jobs, 1), std::max<std::size_t>(n, 1));
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i)
      findings[i] = extract_attributes(corpus[i].text);
  } else {
    std::vector<std::thread> pool;
    std::atomic<std::size_t> next{0};
    for (std::size_t w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (std::size_t i = next.fetch_add(1); i < n; i = next.fetch_add(1))
          findings[i] = extract_attributes(corpus[i].text);
      });
    }
    for (auto& t : pool) t.join();
  }

  LabeledCorpus out;
  out.provenance = Provenance::RuleParser;
  for (std::size_t i = 0; i < n; ++i) {
    if (!out.entries.emplace(corpus[i].study_id, findings[i]).second)
      throw DuplicateStudyIdError(corpus[i].study_id);
  }
  return out;
}

}  // namespace fxlabel
