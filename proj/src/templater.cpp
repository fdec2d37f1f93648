#include "fxlabel/templater.hpp"

#include <cctype>

namespace fxlabel {

namespace {

std::string location_phrase(Location l) {
  switch (l) {
    case Location::Ribs: return "ribs";
    case Location::Clavicle: return "clavicle";
    case Location::Shoulder: return "shoulder";
    case Location::Spine: return "spine";
    case Location::Sternum: return "sternum";
    case Location::Scapula: return "scapula";
    case Location::SternalWires: return "sternal wires";
    case Location::OtherLocation: return "other bones";
  }
  return "";
}

std::string implant_noun(Implant i) {
  switch (i) {
    case Implant::Screws: return "screws";
    case Implant::Rods: return "rods";
    case Implant::Plates: return "plates";
    case Implant::OtherImplant: return "other hardware";
  }
  return "";
}

std::string stage_adjective(Stage s) {
  switch (s) {
    case Stage::Acute: return "acute";
    case Stage::Healed: return "healed";
    case Stage::OtherStage: return "";
  }
  return "";
}

std::string side_adjective(Side s) {
  switch (s) {
    case Side::Left: return "left";
    case Side::Right: return "right";
    case Side::Both: return "bilateral";
    case Side::NoneSide: return "";
  }
  return "";
}

// "left" -> "left-sided" for the location-free skeleton
std::string side_attribute(Side s) {
  switch (s) {
    case Side::Left: return "left-sided";
    case Side::Right: return "right-sided";
    case Side::Both: return "bilateral";
    case Side::NoneSide: return "";
  }
  return "";
}

std::string implant_clause(const ImplantSet& implants) {
  if (implants.empty()) return "";
  std::string nouns;
  std::size_t i = 0;
  for (Implant imp : implants) {
    if (i > 0) nouns += (i + 1 == implants.size()) ? " and " : ", ";
    nouns += implant_noun(imp);
    ++i;
  }
  return ", with " + nouns + " in place";
}

std::string capitalize(std::string s) {
  if (!s.empty())
    s[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(s[0])));
  return s;
}

std::string fracture_sentence(const FractureFinding& f, Location loc) {
  std::string s = stage_adjective(f.stage());
  if (!s.empty()) s += ' ';
  s += "fracture of the ";
  const std::string side = side_adjective(f.side());
  if (!side.empty()) s += side + ' ';
  s += location_phrase(loc);
  s += implant_clause(f.implants());
  s += '.';
  return capitalize(std::move(s));
}

std::string unlocated_fracture_sentence(const FractureFinding& f) {
  std::string s = stage_adjective(f.stage());
  const std::string side = side_attribute(f.side());
  if (!side.empty()) {
    if (!s.empty()) s += ' ';
    s += side;
  }
  if (!s.empty()) s += ' ';
  s += "fracture";
  s += implant_clause(f.implants());
  s += '.';
  return capitalize(std::move(s));
}

}  // namespace

std::string render_finding(const FractureFinding& f) {
  switch (f.tri_class()) {
    case TriClass::Normal: return "No evidence of fracture.";
    case TriClass::Other: return "";
    case TriClass::Fracture: break;
  }
  if (f.locations().empty()) return unlocated_fracture_sentence(f);
  std::string out;
  for (Location loc : f.locations()) {
    if (!out.empty()) out += ' ';
    out += fracture_sentence(f, loc);
  }
  return out;
}

std::vector<std::pair<std::string, std::string>> render_corpus(
    const LabeledCorpus& lc) {
  std::vector<std::pair<std::string, std::string>> rows;
  rows.reserve(lc.entries.size());
  for (const auto& [study_id, finding] : lc.entries) {
    rows.emplace_back(study_id, render_finding(finding));
  }
  return rows;
}

}  // namespace fxlabel
