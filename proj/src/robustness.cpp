#include "fxlabel/robustness.hpp"

#include <cctype>

#include "fxlabel/metrics.hpp"
#include "fxlabel/rng.hpp"

namespace fxlabel {

namespace {

constexpr std::uint64_t kSynonymSalt = 1;
constexpr std::uint64_t kTypoSalt = 2;
constexpr std::size_t kMinTypoLength = 4;

bool is_word_char(unsigned char c) { return std::isalnum(c) || c >= 0x80; }

// Applies fn to every word token; everything between tokens is copied.
template <typename Fn>
std::string map_tokens(std::string_view text, Fn&& fn) {
  std::string out;
  out.reserve(text.size());
  std::size_t i = 0;
  while (i < text.size()) {
    if (!is_word_char(text[i])) {
      out.push_back(text[i]);
      ++i;
      continue;
    }
    const std::size_t begin = i;
    while (i < text.size() && is_word_char(text[i])) ++i;
    out += fn(text.substr(begin, i - begin));
  }
  return out;
}

std::string match_case(std::string replacement, std::string_view original) {
  if (!original.empty() && !replacement.empty() &&
      std::isupper(static_cast<unsigned char>(original.front()))) {
    replacement[0] = static_cast<char>(
        std::toupper(static_cast<unsigned char>(replacement[0])));
  }
  return replacement;
}

}  // namespace

void PerturbationConfig::validate() const {
  if (!(synonym_rate >= 0.0 && synonym_rate <= 1.0) ||
      !(typo_rate >= 0.0 && typo_rate <= 1.0)) {
    throw InvalidFindingError("perturbation rates must lie in [0, 1]");
  }
}

std::string transpose_at(std::string token, std::size_t pos) {
  if (pos + 1 < token.size()) std::swap(token[pos], token[pos + 1]);
  return token;
}

std::string delete_at(std::string token, std::size_t pos) {
  if (pos < token.size()) token.erase(pos, 1);
  return token;
}

Perturber::Perturber(PerturbationConfig cfg, const SynonymTable& synonyms,
                     const Lexicon& lexicon)
    : cfg_(cfg), synonyms_(&synonyms) {
  cfg_.validate();
  for (const LexiconEntry& e : lexicon.entries(LexCategory::NegationCue)) {
    for (const std::string& token : e.pattern) protected_.insert(token);
  }
  protected_.insert("but");
  protected_.insert("however");
}

std::string Perturber::synonym_swap(std::string_view text,
                                    std::string_view stream_key) const {
  SplitMix64 rng = derive_stream(cfg_.seed, stream_key, kSynonymSalt);
  return map_tokens(text, [&](std::string_view token) -> std::string {
    const std::vector<std::string>* replacement =
        synonyms_->lookup(fold_token(token));
    if (!replacement) return std::string(token);
    if (rng.next_unit() >= cfg_.synonym_rate) return std::string(token);
    std::string joined;
    for (std::size_t i = 0; i < replacement->size(); ++i) {
      if (i) joined += ' ';
      joined += (*replacement)[i];
    }
    return match_case(std::move(joined), token);
  });
}

std::string Perturber::typo_inject(std::string_view text,
                                   std::string_view stream_key) const {
  SplitMix64 rng = derive_stream(cfg_.seed, stream_key, kTypoSalt);
  return map_tokens(text, [&](std::string_view token) -> std::string {
    if (token.size() < kMinTypoLength) return std::string(token);
    if (protected_.count(fold_token(token))) return std::string(token);
    if (rng.next_unit() >= cfg_.typo_rate) return std::string(token);
    const bool transpose = (rng.next() & 1) == 0;
    if (transpose) {
      const std::size_t pos = rng.next_below(token.size() - 1);
      return transpose_at(std::string(token), pos);
    }
    const std::size_t pos = rng.next_below(token.size());
    return delete_at(std::string(token), pos);
  });
}

std::string Perturber::perturb(std::string_view text,
                               std::string_view stream_key) const {
  return typo_inject(synonym_swap(text, stream_key), stream_key);
}

std::vector<ReportRecord> Perturber::perturb_corpus(
    const std::vector<ReportRecord>& corpus) const {
  std::vector<ReportRecord> out;
  out.reserve(corpus.size());
  for (const ReportRecord& r : corpus) {
    out.push_back(ReportRecord{r.study_id, perturb(r.text, r.study_id)});
  }
  return out;
}

AccuracyPair score_against_gold(const std::vector<GoldCase>& gold,
                                const Labeler& labeler) {
  AccuracyPair acc;
  if (gold.empty()) return acc;
  long binary_hits = 0;
  double attribute_sum = 0.0;
  long fracture_cases = 0;
  for (const GoldCase& g : gold) {
    const FractureFinding parsed = labeler.extract_attributes(g.text);
    if (binarize(parsed.tri_class()) == binarize(g.finding.tri_class()))
      ++binary_hits;
    if (g.finding.tri_class() != TriClass::Fracture) continue;
    ++fracture_cases;
    if (parsed.tri_class() != TriClass::Fracture) continue;
    int matched = 0;
    matched += parsed.locations() == g.finding.locations();
    matched += parsed.side() == g.finding.side();
    matched += parsed.stage() == g.finding.stage();
    matched += parsed.implants() == g.finding.implants();
    attribute_sum += matched / 4.0;
  }
  acc.binary = static_cast<double>(binary_hits) /
               static_cast<double>(gold.size());
  acc.attribute = fracture_cases == 0
                      ? 1.0
                      : attribute_sum / static_cast<double>(fracture_cases);
  return acc;
}

RobustnessReport robustness_eval(const std::vector<GoldCase>& gold,
                                 const PerturbationConfig& cfg,
                                 const Labeler& labeler) {
  const Perturber perturber(cfg, SynonymTable::bundled(), labeler.lexicon());
  std::vector<GoldCase> perturbed;
  perturbed.reserve(gold.size());
  for (const GoldCase& g : gold) {
    perturbed.push_back(
        GoldCase{g.study_id, perturber.perturb(g.text, g.study_id), g.finding});
  }
  RobustnessReport report;
  report.clean = score_against_gold(gold, labeler);
  report.perturbed = score_against_gold(perturbed, labeler);
  report.binary_ratio = report.clean.binary == 0.0
                            ? 0.0
                            : report.perturbed.binary / report.clean.binary;
  report.attribute_ratio =
      report.clean.attribute == 0.0
          ? 0.0
          : report.perturbed.attribute / report.clean.attribute;
  return report;
}

}  // namespace fxlabel
