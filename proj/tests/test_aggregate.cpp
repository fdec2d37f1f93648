#include <doctest.h>

#include <algorithm>

#include "fxlabel/aggregate.hpp"
#include "fxlabel/metrics.hpp"
#include "fxlabel/rng.hpp"
#include "oracles.hpp"

using namespace fxlabel;

namespace {

PredictionSet member_of(const std::vector<TriClass>& labels,
                        const std::string& name = "member") {
  PredictionSet ps;
  ps.model_name = name;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    ps.entries.emplace("s" + std::to_string(i), Prediction{labels[i], 0.5});
  }
  return ps;
}

PredictionSet random_member(SplitMix64& rng, int n, const std::string& name) {
  PredictionSet ps;
  ps.model_name = name;
  for (int i = 0; i < n; ++i) {
    const double u = rng.next_unit();
    const TriClass label = u < 0.3   ? TriClass::Fracture
                           : u < 0.6 ? TriClass::Normal
                                     : TriClass::Other;
    ps.entries.emplace("s" + std::to_string(i), Prediction{label, {}});
  }
  return ps;
}

}  // namespace

TEST_CASE("union rule: positive when any member is positive") {
  const auto u = ensemble_union({member_of({TriClass::Fracture}),
                                 member_of({TriClass::Other}),
                                 member_of({TriClass::Other})});
  CHECK(u.entries.at("s0").label == TriClass::Fracture);
  CHECK(u.model_name == "union(n=3)");
  CHECK_FALSE(u.entries.at("s0").score.has_value());  // scores are dropped

  const auto all_other = ensemble_union(
      {member_of({TriClass::Other}), member_of({TriClass::Other})});
  CHECK(all_other.entries.at("s0").label == TriClass::Other);

  const auto with_normal = ensemble_union(
      {member_of({TriClass::Other}), member_of({TriClass::Normal})});
  CHECK(with_normal.entries.at("s0").label == TriClass::Normal);
}

TEST_CASE("union rejects mismatched study sets") {
  auto a = member_of({TriClass::Other, TriClass::Other});
  auto b = member_of({TriClass::Other});
  CHECK_THROWS_AS(ensemble_union({a, b}), MemberKeyMismatchError);
  CHECK_THROWS_AS(ensemble_union({}), MemberKeyMismatchError);
}

TEST_CASE("union is idempotent, commutative and associative") {
  SplitMix64 rng(7);
  const auto a = random_member(rng, 25, "a");
  const auto b = random_member(rng, 25, "b");
  const auto c = random_member(rng, 25, "c");

  auto labels_of = [](const PredictionSet& ps) {
    std::vector<TriClass> out;
    for (const auto& [id, p] : ps.entries) out.push_back(p.label);
    return out;
  };

  CHECK(labels_of(ensemble_union({a, a})) == labels_of(ensemble_union({a})));
  CHECK(labels_of(ensemble_union({a, b})) ==
        labels_of(ensemble_union({b, a})));
  CHECK(labels_of(ensemble_union({ensemble_union({a, b}), c})) ==
        labels_of(ensemble_union({a, ensemble_union({b, c})})));
}

TEST_CASE("union positives equal the member set-union oracle") {
  SplitMix64 rng(13);
  for (int round = 0; round < 30; ++round) {
    std::vector<PredictionSet> members;
    for (int m = 0; m < 5; ++m)
      members.push_back(random_member(rng, 40, "m" + std::to_string(m)));
    const PredictionSet u = ensemble_union(members);
    std::set<std::string> want;
    for (const auto& m : members) {
      const auto pos = oracles::positive_ids(m);
      want.insert(pos.begin(), pos.end());
    }
    CHECK(oracles::positive_ids(u) == want);
    for (const auto& m : members) {
      const auto pos = oracles::positive_ids(m);
      CHECK(std::includes(want.begin(), want.end(), pos.begin(), pos.end()));
    }
  }
}

TEST_CASE("finding-level union merges attributes") {
  LabeledCorpus a, b, c;
  a.entries.emplace("s", FractureFinding::fracture({Location::Ribs},
                                                   Side::Left, Stage::Acute,
                                                   {Implant::Screws}, "q1"));
  b.entries.emplace("s", FractureFinding::fracture({Location::Clavicle},
                                                   Side::Left, Stage::Healed,
                                                   {Implant::Rods}, "q2"));
  c.entries.emplace("s", FractureFinding::normal("q3"));
  const LabeledCorpus u = ensemble_union_findings({a, b, c});
  const FractureFinding& f = u.entries.at("s");
  CHECK(f.tri_class() == TriClass::Fracture);
  CHECK(f.locations() == LocationSet{Location::Ribs, Location::Clavicle});
  CHECK(f.implants() == ImplantSet{Implant::Screws, Implant::Rods});
  CHECK(f.side() == Side::Left);           // majority
  CHECK(f.stage() == Stage::OtherStage);   // 1-1 tie
  CHECK(f.evidence().empty());

  // side tie resolves to Both
  LabeledCorpus d;
  d.entries.emplace("s", FractureFinding::fracture({}, Side::Right,
                                                   Stage::Acute, {}));
  LabeledCorpus e;
  e.entries.emplace("s", FractureFinding::fracture({}, Side::Left,
                                                   Stage::Acute, {}));
  const LabeledCorpus tie = ensemble_union_findings({d, e});
  CHECK(tie.entries.at("s").side() == Side::Both);
  CHECK(tie.entries.at("s").stage() == Stage::Acute);

  // no fracture votes: normal beats other
  LabeledCorpus n1, n2;
  n1.entries.emplace("s", FractureFinding::other());
  n2.entries.emplace("s", FractureFinding::normal());
  CHECK(ensemble_union_findings({n1, n2}).entries.at("s").tri_class() ==
        TriClass::Normal);
}

TEST_CASE("union recall dominates every member") {
  SplitMix64 rng(19);
  LabeledCorpus gt;
  for (int i = 0; i < 40; ++i) {
    gt.entries.emplace("s" + std::to_string(i),
                       rng.next_unit() < 0.5
                           ? FractureFinding::fracture({}, Side::NoneSide,
                                                       Stage::OtherStage, {})
                           : FractureFinding::other());
  }
  for (int round = 0; round < 10; ++round) {
    std::vector<PredictionSet> members;
    for (int m = 0; m < 5; ++m)
      members.push_back(random_member(rng, 40, "m" + std::to_string(m)));
    const PredictionSet u = ensemble_union(members);
    const double union_recall =
        prf1(confusion(u, gt, Polarity::Positive)).recall;
    for (const auto& m : members) {
      CHECK(union_recall >=
            prf1(confusion(m, gt, Polarity::Positive)).recall - 1e-12);
    }
  }
}

TEST_CASE("audit flags binary disagreements with quotes") {
  LabeledCorpus relabeled;
  relabeled.entries.emplace(
      "59981256",
      FractureFinding::fracture({Location::Ribs}, Side::NoneSide,
                                Stage::Healed, {},
                                "There are chronic rib fractures."));
  relabeled.entries.emplace(
      "54759244", FractureFinding::normal("No displaced fracture is seen."));

  LegacyLabels legacy;
  legacy.entries.emplace("59981256", std::nullopt);  // missed by legacy
  legacy.entries.emplace("54759244", 1.0);           // false legacy positive

  const AuditResult result = audit(legacy, relabeled);
  REQUIRE(result.discrepancies.size() == 2);
  CHECK(result.legacy_positive_count == 1);
  CHECK(result.relabeled_fracture_count == 1);
  CHECK(result.disagreement_count == 2);
  CHECK(result.skipped_count == 0);
  CHECK(result.discrepancies[0].study_id == "54759244");
  CHECK(result.discrepancies[0].legacy == 1.0);
  CHECK(result.discrepancies[0].relabeled == TriClass::Normal);
  CHECK(result.discrepancies[0].quote == "No displaced fracture is seen.");
  CHECK_FALSE(result.discrepancies[1].legacy.has_value());
  CHECK(result.discrepancies[1].relabeled == TriClass::Fracture);
}

TEST_CASE("audit of a corpus against itself is empty") {
  LabeledCorpus lc;
  lc.entries.emplace("a", FractureFinding::fracture({}, Side::NoneSide,
                                                    Stage::OtherStage, {}));
  lc.entries.emplace("b", FractureFinding::normal());
  lc.entries.emplace("c", FractureFinding::other());
  LegacyLabels converted;
  for (const auto& [id, f] : lc.entries) {
    converted.entries.emplace(
        id, f.tri_class() == TriClass::Fracture
                ? std::optional<double>(1.0)
                : std::optional<double>(0.0));
  }
  CHECK(audit(converted, lc).discrepancies.empty());
}

TEST_CASE("audit treats uncertain legacy labels as negative") {
  LabeledCorpus relabeled;
  relabeled.entries.emplace("a", FractureFinding::other());
  relabeled.entries.emplace("b", FractureFinding::fracture(
                                     {}, Side::NoneSide, Stage::OtherStage,
                                     {}));
  LegacyLabels legacy;
  legacy.entries.emplace("a", -1.0);
  legacy.entries.emplace("b", -1.0);
  const AuditResult result = audit(legacy, relabeled);
  CHECK(result.legacy_positive_count == 0);
  REQUIRE(result.discrepancies.size() == 1);
  CHECK(result.discrepancies[0].study_id == "b");
}

TEST_CASE("audit skips non-joined ids with a warning count") {
  LabeledCorpus relabeled;
  relabeled.entries.emplace("only_b", FractureFinding::other());
  LegacyLabels legacy;
  legacy.entries.emplace("only_a", 1.0);
  const AuditResult result = audit(legacy, relabeled);
  CHECK(result.discrepancies.empty());
  CHECK(result.skipped_count == 2);
}
