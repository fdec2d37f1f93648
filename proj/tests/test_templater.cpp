#include <doctest.h>

#include "fxlabel/labeler.hpp"
#include "fxlabel/rng.hpp"
#include "fxlabel/templater.hpp"

using namespace fxlabel;

TEST_CASE("render_finding instantiates the location templates") {
  CHECK(render_finding(FractureFinding::fracture({Location::Ribs}, Side::Left,
                                                 Stage::Acute, {})) ==
        "Acute fracture of the left ribs.");
  CHECK(render_finding(FractureFinding::normal()) ==
        "No evidence of fracture.");
  CHECK(render_finding(FractureFinding::other()).empty());
  CHECK(render_finding(FractureFinding::fracture({Location::SternalWires},
                                                 Side::NoneSide,
                                                 Stage::OtherStage, {})) ==
        "Fracture of the sternal wires.");
}

TEST_CASE("render_finding clause details") {
  CHECK(render_finding(FractureFinding::fracture(
            {Location::Clavicle}, Side::Both, Stage::Healed,
            {Implant::Screws, Implant::Plates})) ==
        "Healed fracture of the bilateral clavicle, with screws and plates "
        "in place.");
  // one sentence per location, enum order
  CHECK(render_finding(FractureFinding::fracture(
            {Location::Spine, Location::Ribs}, Side::NoneSide,
            Stage::OtherStage, {})) ==
        "Fracture of the ribs. Fracture of the spine.");
  // unlocated findings use the location-free skeleton
  CHECK(render_finding(FractureFinding::fracture({}, Side::Left, Stage::Acute,
                                                 {})) ==
        "Acute left-sided fracture.");
  CHECK(render_finding(FractureFinding::fracture({}, Side::NoneSide,
                                                 Stage::OtherStage, {})) ==
        "Fracture.");
}

TEST_CASE("render_corpus orders rows by study id") {
  CHECK(render_corpus(LabeledCorpus{}).empty());
  LabeledCorpus lc;
  lc.entries.emplace("b", FractureFinding::normal());
  lc.entries.emplace("a", FractureFinding::fracture({Location::Ribs},
                                                    Side::NoneSide,
                                                    Stage::OtherStage, {}));
  const auto rows = render_corpus(lc);
  REQUIRE(rows.size() == 2);
  CHECK(rows[0].first == "a");
  CHECK(rows[0].second == "Fracture of the ribs.");
  CHECK(rows[1].second == "No evidence of fracture.");
}

TEST_CASE("property: rendered sentences parse back to the finding") {
  const Labeler labeler;
  SplitMix64 rng(2024);
  const auto all = enumerate_findings();
  for (int i = 0; i < 2000; ++i) {
    const FractureFinding& f = all[rng.next_below(all.size())];
    const std::string text = render_finding(f);
    const FractureFinding parsed = labeler.extract_attributes(text);
    CAPTURE(text);
    CHECK(parsed.same_labels(f));
    if (f.tri_class() != TriClass::Other) {
      CHECK(parsed.evidence() == split_sentences(text)[0].text);
    }
  }
}

TEST_CASE("property: rendering is idempotent through a parse cycle") {
  const Labeler labeler;
  SplitMix64 rng(99);
  const auto all = enumerate_findings();
  for (int i = 0; i < 500; ++i) {
    const FractureFinding& f = all[rng.next_below(all.size())];
    const std::string once = render_finding(f);
    const std::string twice =
        render_finding(labeler.extract_attributes(once).without_evidence());
    CHECK(once == twice);
  }
}

TEST_CASE("property: template vocabulary is closed over the lexicon") {
  const Lexicon& lex = Lexicon::bundled();
  const std::set<std::string> function_words = {"of",    "the", "with",
                                                "in",    "place", "and",
                                                "sided", "other"};
  SplitMix64 rng(7);
  const auto all = enumerate_findings();
  for (int i = 0; i < 1000; ++i) {
    const FractureFinding& f = all[rng.next_below(all.size())];
    for (const SentenceSpan& s : split_sentences(render_finding(f))) {
      for (const std::string& token : s.tokens) {
        const bool known =
            lex.knows_token(token) || function_words.count(token) > 0;
        CAPTURE(token);
        CHECK(known);
      }
    }
  }
}
