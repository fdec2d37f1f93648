#include "fxlabel/core.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <sstream>

namespace fxlabel {

namespace {

template <typename E, std::size_t N>
E parse_from(std::string_view kind, const E (&values)[N],
             std::string_view token) {
  const std::string folded = fold_token(token);
  for (E v : values) {
    if (to_token(v) == folded) return v;
  }
  throw UnknownTokenError(std::string(kind), std::string(token));
}

std::vector<std::string> split_on(const std::string& s, char sep) {
  std::vector<std::string> parts;
  std::string cur;
  for (char c : s) {
    if (c == sep) {
      parts.push_back(cur);
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  parts.push_back(cur);
  return parts;
}

}  // namespace

std::string fold_token(std::string_view token) {
  std::size_t begin = 0;
  std::size_t end = token.size();
  while (begin < end && std::isspace(static_cast<unsigned char>(token[begin])))
    ++begin;
  while (end > begin &&
         std::isspace(static_cast<unsigned char>(token[end - 1])))
    --end;
  std::string out;
  out.reserve(end - begin);
  for (std::size_t i = begin; i < end; ++i) {
    out.push_back(static_cast<char>(
        std::tolower(static_cast<unsigned char>(token[i]))));
  }
  return out;
}

std::string_view to_token(TriClass v) {
  switch (v) {
    case TriClass::Fracture: return "fracture";
    case TriClass::Normal: return "normal";
    case TriClass::Other: return "other";
  }
  return "";
}

std::string_view to_token(Location v) {
  switch (v) {
    case Location::Ribs: return "ribs";
    case Location::Clavicle: return "clavicle";
    case Location::Shoulder: return "shoulder";
    case Location::Spine: return "spine";
    case Location::Sternum: return "sternum";
    case Location::Scapula: return "scapula";
    case Location::SternalWires: return "sternal wires";
    case Location::OtherLocation: return "other";
  }
  return "";
}

std::string_view to_token(Side v) {
  switch (v) {
    case Side::Left: return "left";
    case Side::Right: return "right";
    case Side::Both: return "both";
    case Side::NoneSide: return "none";
  }
  return "";
}

std::string_view to_token(Stage v) {
  switch (v) {
    case Stage::Acute: return "acute";
    case Stage::Healed: return "healed";
    case Stage::OtherStage: return "other";
  }
  return "";
}

std::string_view to_token(Implant v) {
  switch (v) {
    case Implant::Screws: return "screws";
    case Implant::Rods: return "rods";
    case Implant::Plates: return "plates";
    case Implant::OtherImplant: return "other";
  }
  return "";
}

std::string_view to_token(Provenance v) {
  switch (v) {
    case Provenance::RuleParser: return "rule-parser";
    case Provenance::LLM: return "llm";
    case Provenance::Legacy: return "legacy";
  }
  return "";
}

template <>
TriClass parse_enum<TriClass>(std::string_view token) {
  return parse_from("tri_class", kAllTriClasses, token);
}

template <>
Location parse_enum<Location>(std::string_view token) {
  return parse_from("location", kAllLocations, token);
}

template <>
Side parse_enum<Side>(std::string_view token) {
  return parse_from("side", kAllSides, token);
}

template <>
Stage parse_enum<Stage>(std::string_view token) {
  return parse_from("stage", kAllStages, token);
}

template <>
Implant parse_enum<Implant>(std::string_view token) {
  return parse_from("implant", kAllImplants, token);
}

template <>
Provenance parse_enum<Provenance>(std::string_view token) {
  constexpr Provenance all[] = {Provenance::RuleParser, Provenance::LLM,
                                Provenance::Legacy};
  return parse_from("provenance", all, token);
}

FractureFinding::FractureFinding()
    : tri_class_(TriClass::Other),
      side_(Side::NoneSide),
      stage_(Stage::OtherStage) {}

FractureFinding::FractureFinding(TriClass tri_class, LocationSet locations,
                                 Side side, Stage stage, ImplantSet implants,
                                 std::string evidence)
    : tri_class_(tri_class),
      locations_(std::move(locations)),
      side_(side),
      stage_(stage),
      implants_(std::move(implants)),
      evidence_(std::move(evidence)) {
  if (tri_class_ != TriClass::Fracture) {
    if (!locations_.empty() || !implants_.empty() || side_ != Side::NoneSide ||
        stage_ != Stage::OtherStage) {
      throw InvalidFindingError(
          std::string("non-fracture finding (") +
          std::string(to_token(tri_class_)) +
          ") must carry no locations/implants, side none and stage other");
    }
  }
}

FractureFinding FractureFinding::fracture(LocationSet locations, Side side,
                                          Stage stage, ImplantSet implants,
                                          std::string evidence) {
  return FractureFinding(TriClass::Fracture, std::move(locations), side, stage,
                         std::move(implants), std::move(evidence));
}

FractureFinding FractureFinding::normal(std::string evidence) {
  return FractureFinding(TriClass::Normal, {}, Side::NoneSide,
                         Stage::OtherStage, {}, std::move(evidence));
}

FractureFinding FractureFinding::other() { return FractureFinding(); }

FractureFinding FractureFinding::without_evidence() const {
  FractureFinding copy = *this;
  copy.evidence_.clear();
  return copy;
}

bool FractureFinding::operator==(const FractureFinding& rhs) const {
  return same_labels(rhs) && evidence_ == rhs.evidence_;
}

bool FractureFinding::same_labels(const FractureFinding& rhs) const {
  return tri_class_ == rhs.tri_class_ && locations_ == rhs.locations_ &&
         side_ == rhs.side_ && stage_ == rhs.stage_ &&
         implants_ == rhs.implants_;
}

void validate_score(const std::optional<double>& score,
                    const std::string& study_id) {
  if (!score) return;
  if (!std::isfinite(*score) || *score < 0.0 || *score > 1.0) {
    throw InvalidFindingError("score for study_id \"" + study_id +
                              "\" must be finite and within [0, 1]");
  }
}

FlatRecord serialize_finding(const FractureFinding& f) {
  FlatRecord rec;
  rec.tri_class = std::string(to_token(f.tri_class()));
  std::string locs;
  for (Location l : f.locations()) {
    if (!locs.empty()) locs += ';';
    locs += std::string(to_token(l));
  }
  rec.locations = locs;
  rec.side = std::string(to_token(f.side()));
  rec.stage = std::string(to_token(f.stage()));
  std::string imps;
  for (Implant i : f.implants()) {
    if (!imps.empty()) imps += ';';
    imps += std::string(to_token(i));
  }
  rec.implants = imps;
  rec.evidence = f.evidence();
  return rec;
}

FractureFinding deserialize_finding(const FlatRecord& rec) {
  const TriClass tri = parse_enum<TriClass>(rec.tri_class);
  LocationSet locations;
  if (!rec.locations.empty()) {
    for (const std::string& part : split_on(rec.locations, ';')) {
      locations.insert(parse_enum<Location>(part));
    }
  }
  ImplantSet implants;
  if (!rec.implants.empty()) {
    for (const std::string& part : split_on(rec.implants, ';')) {
      implants.insert(parse_enum<Implant>(part));
    }
  }
  const Side side = parse_enum<Side>(rec.side);
  const Stage stage = parse_enum<Stage>(rec.stage);
  return FractureFinding(tri, std::move(locations), side, stage,
                         std::move(implants), rec.evidence);
}

std::vector<FractureFinding> enumerate_findings() {
  std::vector<FractureFinding> all;
  all.reserve(49154);
  all.push_back(FractureFinding::normal());
  all.push_back(FractureFinding::other());
  const std::size_t n_loc = std::size(kAllLocations);
  const std::size_t n_imp = std::size(kAllImplants);
  for (std::uint32_t loc_bits = 0; loc_bits < (1u << n_loc); ++loc_bits) {
    LocationSet locations;
    for (std::size_t i = 0; i < n_loc; ++i) {
      if (loc_bits & (1u << i)) locations.insert(kAllLocations[i]);
    }
    for (Side side : kAllSides) {
      for (Stage stage : kAllStages) {
        for (std::uint32_t imp_bits = 0; imp_bits < (1u << n_imp);
             ++imp_bits) {
          ImplantSet implants;
          for (std::size_t i = 0; i < n_imp; ++i) {
            if (imp_bits & (1u << i)) implants.insert(kAllImplants[i]);
          }
          all.push_back(FractureFinding::fracture(locations, side, stage,
                                                  std::move(implants)));
        }
      }
    }
  }
  return all;
}

}  // namespace fxlabel
