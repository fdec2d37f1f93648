#include "fxlabel/lexicon.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "fxlabel/errors.hpp"

namespace fxlabel {

namespace {

std::vector<std::string> fold_words(std::string_view s) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == ' ' || c == '\t') {
      if (!cur.empty()) {
        out.push_back(fold_token(cur));
        cur.clear();
      }
    } else {
      cur.push_back(c);
    }
  }
  if (!cur.empty()) out.push_back(fold_token(cur));
  return out;
}

LexCategory parse_category(const std::string& token, long line) {
  if (token == "fracture_term") return LexCategory::FractureTerm;
  if (token == "negation_cue") return LexCategory::NegationCue;
  if (token == "laterality_cue") return LexCategory::LateralityCue;
  if (token == "stage_cue") return LexCategory::StageCue;
  if (token == "anatomy_cue") return LexCategory::AnatomyCue;
  if (token == "implant_cue") return LexCategory::ImplantCue;
  throw ParseError(line, "unknown lexicon category \"" + token + "\"");
}

void validate_payload(const LexiconEntry& entry, long line) {
  try {
    switch (entry.category) {
      case LexCategory::FractureTerm:
        if (!entry.payload.empty() && entry.payload != "bone_adjacent" &&
            entry.payload != "wires_context") {
          throw ParseError(line, "fracture_term payload must be empty, "
                                 "bone_adjacent or wires_context");
        }
        break;
      case LexCategory::NegationCue:
        if (!entry.payload.empty()) {
          throw ParseError(line, "negation_cue entries take no payload");
        }
        break;
      case LexCategory::LateralityCue:
        parse_enum<Side>(entry.payload);
        break;
      case LexCategory::StageCue:
        parse_enum<Stage>(entry.payload);
        break;
      case LexCategory::AnatomyCue:
        parse_enum<Location>(entry.payload);
        break;
      case LexCategory::ImplantCue:
        parse_enum<Implant>(entry.payload);
        break;
    }
  } catch (const UnknownTokenError& e) {
    throw ParseError(line, e.what());
  }
}

// Shared line scanner for lexicon and synonym files.
template <typename Fn>
void for_each_entry_line(std::string_view text, Fn&& fn) {
  std::size_t pos = 0;
  long line_no = 0;
  while (pos <= text.size()) {
    const std::size_t nl = text.find('\n', pos);
    std::string_view line = text.substr(
        pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
    ++line_no;
    const std::size_t hash = line.find('#');
    if (hash != std::string_view::npos) line = line.substr(0, hash);
    // split on tabs, dropping empty cells so columns may be aligned
    std::vector<std::string> fields;
    std::string cur;
    for (char c : line) {
      if (c == '\t') {
        if (!cur.empty()) fields.push_back(cur);
        cur.clear();
      } else if (c != '\r') {
        cur.push_back(c);
      }
    }
    if (!cur.empty()) fields.push_back(cur);
    for (std::string& f : fields) {
      while (!f.empty() && f.back() == ' ') f.pop_back();
      while (!f.empty() && f.front() == ' ') f.erase(f.begin());
    }
    fields.erase(std::remove_if(fields.begin(), fields.end(),
                                [](const std::string& f) { return f.empty(); }),
                 fields.end());
    if (!fields.empty()) fn(fields, line_no);
    if (nl == std::string_view::npos) break;
    pos = nl + 1;
  }
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

}  // namespace

std::string_view to_token(LexCategory c) {
  switch (c) {
    case LexCategory::FractureTerm: return "fracture_term";
    case LexCategory::NegationCue: return "negation_cue";
    case LexCategory::LateralityCue: return "laterality_cue";
    case LexCategory::StageCue: return "stage_cue";
    case LexCategory::AnatomyCue: return "anatomy_cue";
    case LexCategory::ImplantCue: return "implant_cue";
  }
  return "";
}

MentionCondition mention_condition(const LexiconEntry& entry) {
  if (entry.payload == "bone_adjacent") return MentionCondition::BoneAdjacent;
  if (entry.payload == "wires_context") return MentionCondition::WiresContext;
  return MentionCondition::None;
}

Lexicon Lexicon::from_text(std::string_view text) {
  Lexicon lex;
  for_each_entry_line(text, [&](const std::vector<std::string>& fields,
                                long line_no) {
    if (fields.size() < 2 || fields.size() > 3) {
      throw ParseError(line_no,
                       "expected category<TAB>pattern[<TAB>payload]");
    }
    LexiconEntry entry;
    entry.category = parse_category(fields[0], line_no);
    entry.pattern = fold_words(fields[1]);
    if (entry.pattern.empty()) {
      throw ParseError(line_no, "empty pattern");
    }
    if (fields.size() == 3) entry.payload = fold_token(fields[2]);
    validate_payload(entry, line_no);
    lex.add(std::move(entry));
  });
  return lex;
}

Lexicon Lexicon::from_file(const std::string& path) {
  return from_text(read_file(path));
}

const Lexicon& Lexicon::bundled() {
  static const Lexicon lex = from_text(bundled_lexicon_text());
  return lex;
}

const std::vector<LexiconEntry>& Lexicon::entries(LexCategory category) const {
  return by_category_[static_cast<std::size_t>(category)];
}

std::size_t Lexicon::size() const {
  std::size_t n = 0;
  for (const auto& v : by_category_) n += v.size();
  return n;
}

void Lexicon::add(LexiconEntry entry) {
  by_category_[static_cast<std::size_t>(entry.category)].push_back(
      std::move(entry));
}

std::vector<Lexicon::Match> Lexicon::match(
    LexCategory category, const std::vector<std::string>& tokens) const {
  const auto& entries = by_category_[static_cast<std::size_t>(category)];
  std::vector<Match> out;
  for (std::size_t i = 0; i < tokens.size();) {
    const LexiconEntry* best = nullptr;
    for (const LexiconEntry& e : entries) {
      if (best && e.pattern.size() <= best->pattern.size()) continue;
      if (e.pattern.size() > tokens.size() - i) continue;
      bool ok = true;
      for (std::size_t k = 0; k < e.pattern.size(); ++k) {
        if (tokens[i + k] != e.pattern[k]) {
          ok = false;
          break;
        }
      }
      if (ok) best = &e;
    }
    if (best) {
      out.push_back(Match{i, best->pattern.size(), best});
      i += best->pattern.size();
    } else {
      ++i;
    }
  }
  return out;
}

bool Lexicon::knows_token(const std::string& folded_token) const {
  for (const auto& entries : by_category_) {
    for (const LexiconEntry& e : entries) {
      for (const std::string& t : e.pattern) {
        if (t == folded_token) return true;
      }
    }
  }
  return false;
}

SynonymTable SynonymTable::from_text(std::string_view text) {
  SynonymTable table;
  for_each_entry_line(text, [&](const std::vector<std::string>& fields,
                                long line_no) {
    if (fields.size() != 3 || fields[0] != "synonym") {
      throw ParseError(line_no, "expected synonym<TAB>token<TAB>replacement");
    }
    const std::string key = fold_token(fields[1]);
    if (key.empty() || key.find(' ') != std::string::npos) {
      throw ParseError(line_no, "synonym source must be a single token");
    }
    std::vector<std::string> replacement = fold_words(fields[2]);
    if (replacement.empty()) {
      throw ParseError(line_no, "empty replacement");
    }
    table.map_[key] = std::move(replacement);
  });
  return table;
}

SynonymTable SynonymTable::from_file(const std::string& path) {
  return from_text(read_file(path));
}

const SynonymTable& SynonymTable::bundled() {
  static const SynonymTable table = from_text(bundled_synonyms_text());
  return table;
}

const std::vector<std::string>* SynonymTable::lookup(
    const std::string& folded_token) const {
  const auto it = map_.find(folded_token);
  return it == map_.end() ? nullptr : &it->second;
}

}  // namespace fxlabel
