#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "fxlabel/errors.hpp"

namespace fxlabel {

// Three-way report class: a fracture is described, explicitly ruled out,
// or not mentioned at all.
enum class TriClass { Fracture, Normal, Other };

enum class Location {
  Ribs,
  Clavicle,
  Shoulder,
  Spine,
  Sternum,
  Scapula,
  SternalWires,
  OtherLocation,
};

enum class Side { Left, Right, Both, NoneSide };

enum class Stage { Acute, Healed, OtherStage };

enum class Implant { Screws, Rods, Plates, OtherImplant };

inline constexpr TriClass kAllTriClasses[] = {TriClass::Fracture,
                                              TriClass::Normal,
                                              TriClass::Other};

inline constexpr Location kAllLocations[] = {
    Location::Ribs,    Location::Clavicle, Location::Shoulder,
    Location::Spine,   Location::Sternum,  Location::Scapula,
    Location::SternalWires, Location::OtherLocation,
};

inline constexpr Side kAllSides[] = {Side::Left, Side::Right, Side::Both,
                                     Side::NoneSide};

inline constexpr Stage kAllStages[] = {Stage::Acute, Stage::Healed,
                                       Stage::OtherStage};

inline constexpr Implant kAllImplants[] = {Implant::Screws, Implant::Rods,
                                           Implant::Plates,
                                           Implant::OtherImplant};

// Canonical lowercase forms. to_token is total; parse_enum<E> accepts the
// case-folded, trimmed canonical form and throws UnknownTokenError for
// anything else.
std::string_view to_token(TriClass v);
std::string_view to_token(Location v);
std::string_view to_token(Side v);
std::string_view to_token(Stage v);
std::string_view to_token(Implant v);

template <typename E>
E parse_enum(std::string_view token);

template <>
TriClass parse_enum<TriClass>(std::string_view token);
template <>
Location parse_enum<Location>(std::string_view token);
template <>
Side parse_enum<Side>(std::string_view token);
template <>
Stage parse_enum<Stage>(std::string_view token);
template <>
Implant parse_enum<Implant>(std::string_view token);

std::string fold_token(std::string_view token);  // trim + lowercase

using LocationSet = std::set<Location>;
using ImplantSet = std::set<Implant>;

// One structured finding. Construction enforces the normalization
// invariant: a non-Fracture finding carries no locations, no implants,
// side none and stage other.
class FractureFinding {
 public:
  FractureFinding();  // == other()

  FractureFinding(TriClass tri_class, LocationSet locations, Side side,
                  Stage stage, ImplantSet implants, std::string evidence = "");

  static FractureFinding fracture(LocationSet locations, Side side,
                                  Stage stage, ImplantSet implants,
                                  std::string evidence = "");
  static FractureFinding normal(std::string evidence = "");
  static FractureFinding other();

  TriClass tri_class() const { return tri_class_; }
  const LocationSet& locations() const { return locations_; }
  Side side() const { return side_; }
  Stage stage() const { return stage_; }
  const ImplantSet& implants() const { return implants_; }
  const std::string& evidence() const { return evidence_; }

  FractureFinding without_evidence() const;

  bool operator==(const FractureFinding& rhs) const;
  bool operator!=(const FractureFinding& rhs) const { return !(*this == rhs); }

  // Equality over everything except the evidence quote.
  bool same_labels(const FractureFinding& rhs) const;

 private:
  TriClass tri_class_;
  LocationSet locations_;
  Side side_;
  Stage stage_;
  ImplantSet implants_;
  std::string evidence_;
};

// One corpus row: opaque study key plus raw report text.
struct ReportRecord {
  std::string study_id;
  std::string text;
};

enum class Provenance { RuleParser, LLM, Legacy };

std::string_view to_token(Provenance v);
template <>
Provenance parse_enum<Provenance>(std::string_view token);

struct LabeledCorpus {
  std::map<std::string, FractureFinding> entries;
  Provenance provenance = Provenance::Legacy;
};

struct Prediction {
  TriClass label = TriClass::Other;
  std::optional<double> score;  // finite, in [0, 1] when present
};

struct PredictionSet {
  std::string model_name;
  std::map<std::string, Prediction> entries;
};

// Throws InvalidFindingError when score is non-finite or out of [0, 1].
void validate_score(const std::optional<double>& score,
                    const std::string& study_id);

// Flat record: the CSV-facing string form of one finding. Set fields are
// joined by ";" in enum declaration order.
struct FlatRecord {
  std::string tri_class;
  std::string locations;
  std::string side;
  std::string stage;
  std::string implants;
  std::string evidence;
};

FlatRecord serialize_finding(const FractureFinding& f);
FractureFinding deserialize_finding(const FlatRecord& rec);

// Every well-formed finding (non-Fracture attributes normalized), without
// evidence. 49,154 values; used by round-trip suites.
std::vector<FractureFinding> enumerate_findings();

}  // namespace fxlabel
