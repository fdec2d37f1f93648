// Acceptance suite: every release gate in one binary. Each criterion
// prints a single [PASS]/[FAIL] line; the exit code is the number of
// failed criteria.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <map>
#include <mutex>
#include <set>
#include <string>
#include <vector>

#include "fxlabel/aggregate.hpp"
#include "fxlabel/cli.hpp"
#include "fxlabel/csv.hpp"
#include "fxlabel/io.hpp"
#include "fxlabel/labeler.hpp"
#include "fxlabel/metrics.hpp"
#include "fxlabel/relabel.hpp"
#include "fxlabel/rng.hpp"
#include "fxlabel/robustness.hpp"
#include "fxlabel/templater.hpp"
#include "oracles.hpp"

using namespace fxlabel;

namespace {

const std::string kDataDir = FXLABEL_DATA_DIR;
int checks_failed = 0;

void expect(bool ok, const std::string& detail) {
  if (!ok) {
    ++checks_failed;
    std::printf("       failed: %s\n", detail.c_str());
  }
}

std::string temp_dir() {
  const auto dir =
      std::filesystem::temp_directory_path() / "fxlabel_acceptance";
  std::filesystem::create_directories(dir);
  return dir.string();
}

// ---------------------------------------------------------------------
// 1. Discrepancy-table fidelity: the rule labeler agrees with the
//    reference relabeling on all eight quoted reports and the audit
//    subcommand reports exactly the eight known disagreements.
// ---------------------------------------------------------------------
void criterion_1() {
  const auto reports = load_reports(kDataDir + "/fixtures/discrepancy_reports.csv");
  expect(reports.size() == 8, "fixture must hold 8 reports");
  const Labeler labeler;
  const LabeledCorpus corpus = labeler.label_corpus(reports);

  const std::map<std::string, TriClass> expected = {
      {"59981256", TriClass::Fracture}, {"56618763", TriClass::Fracture},
      {"59968351", TriClass::Fracture}, {"51830719", TriClass::Fracture},
      {"54759244", TriClass::Normal},   {"59041431", TriClass::Normal},
      {"53452091", TriClass::Normal},   {"59454336", TriClass::Normal},
  };
  for (const auto& [id, want] : expected) {
    expect(corpus.entries.at(id).tri_class() == want,
           "class mismatch on study " + id);
  }

  const AuditResult result =
      audit(load_legacy(kDataDir + "/fixtures/discrepancy_legacy.csv"), corpus);
  expect(result.disagreement_count == 8, "expected 8 discrepancies");
  expect(result.legacy_positive_count == 4, "expected 4 legacy positives");
  expect(result.relabeled_fracture_count == 4,
         "expected 4 relabeled fractures");

  // the same numbers through the audit subcommand
  const std::string dir = temp_dir();
  expect(cli_dispatch({"label", "--reports",
                       kDataDir + "/fixtures/discrepancy_reports.csv", "--out",
                       dir + "/labels.csv"}) == 0,
         "label subcommand failed");
  expect(cli_dispatch({"audit", "--legacy",
                       kDataDir + "/fixtures/discrepancy_legacy.csv",
                       "--relabeled", dir + "/labels.csv", "--out",
                       dir + "/disc.csv"}) == 0,
         "audit subcommand failed");
  const auto rows = csv::parse(read_text_file(dir + "/disc.csv"));
  expect(rows.size() == 9, "audit CSV must hold header + 8 rows, got " +
                               std::to_string(rows.size()));
}

// ---------------------------------------------------------------------
// 2. Published metric self-consistency: for all 18 result rows, the F1
//    recomputed from the row's precision and recall lands within 0.001
//    of the printed value after 3-decimal rounding.
// ---------------------------------------------------------------------
void criterion_2() {
  struct Row {
    double precision, recall, f1;
  };
  const std::vector<Row> rows = {
      // first encoder group, sorted by ROC-AUC, then its baseline
      {0.782, 0.513, 0.620}, {0.682, 0.584, 0.629}, {0.841, 0.377, 0.520},
      {0.757, 0.364, 0.491}, {0.688, 0.286, 0.404}, {0.833, 0.227, 0.357},
      {0.755, 0.240, 0.364}, {0.783, 0.117, 0.203}, {0.777, 0.045, 0.085},
      // second encoder group, then its baseline
      {0.750, 0.487, 0.591}, {0.764, 0.442, 0.560}, {0.836, 0.396, 0.537},
      {0.797, 0.409, 0.541}, {0.873, 0.357, 0.507}, {0.867, 0.338, 0.486},
      {0.842, 0.104, 0.185}, {0.800, 0.026, 0.050}, {0.791, 0.246, 0.376},
  };
  expect(rows.size() == 18, "expected 18 rows");
  for (const Row& row : rows) {
    const double recomputed = round3(f1_score(row.precision, row.recall));
    char detail[128];
    std::snprintf(detail, sizeof(detail),
                  "P=%.3f R=%.3f: recomputed F1 %.3f vs printed %.3f",
                  row.precision, row.recall, recomputed, row.f1);
    expect(std::abs(recomputed - row.f1) <= 0.001 + 1e-9, detail);
  }
}

// ---------------------------------------------------------------------
// 3. Template round-trip: every well-formed finding survives
//    render_finding -> extract_attributes unchanged (evidence aside).
// ---------------------------------------------------------------------
void criterion_3() {
  const Labeler labeler;
  const auto all = enumerate_findings();
  expect(all.size() == 49154,
         "enumeration size " + std::to_string(all.size()));
  long failures = 0;
  for (const FractureFinding& f : all) {
    if (!labeler.extract_attributes(render_finding(f)).same_labels(f))
      ++failures;
  }
  expect(failures == 0,
         std::to_string(failures) + " findings failed the round trip");
}

// ---------------------------------------------------------------------
// 4. Fixture-corpus parser accuracy: binary 100%, attributes >= 95%.
// ---------------------------------------------------------------------
void criterion_4() {
  const auto gold = load_gold_corpus(kDataDir + "/fixtures/gold_corpus.csv");
  expect(gold.size() >= 100,
         "fixture must span at least 100 sentences, has " +
             std::to_string(gold.size()));
  const AccuracyPair acc = score_against_gold(gold, Labeler());
  char detail[96];
  std::snprintf(detail, sizeof(detail), "binary=%.4f attribute=%.4f",
                acc.binary, acc.attribute);
  expect(acc.binary == 1.0, std::string("binary accuracy: ") + detail);
  expect(acc.attribute >= 0.95, std::string("attribute accuracy: ") + detail);
}

// ---------------------------------------------------------------------
// 5. Robustness bar: typo 0.1 / synonym 0.3 / seed 7 keeps both
//    accuracies at >= 0.85x clean, deterministically.
// ---------------------------------------------------------------------
void criterion_5() {
  const auto gold = load_gold_corpus(kDataDir + "/fixtures/gold_corpus.csv");
  PerturbationConfig cfg;
  cfg.seed = 7;
  cfg.synonym_rate = 0.3;
  cfg.typo_rate = 0.1;
  const RobustnessReport rep = robustness_eval(gold, cfg);
  char detail[160];
  std::snprintf(detail, sizeof(detail),
                "clean b=%.4f a=%.4f perturbed b=%.4f a=%.4f ratios "
                "b=%.4f a=%.4f",
                rep.clean.binary, rep.clean.attribute, rep.perturbed.binary,
                rep.perturbed.attribute, rep.binary_ratio,
                rep.attribute_ratio);
  expect(rep.binary_ratio >= 0.85, std::string("binary ratio: ") + detail);
  expect(rep.attribute_ratio >= 0.85,
         std::string("attribute ratio: ") + detail);

  // byte-identical perturbed corpus across repeated runs
  const Perturber first(cfg);
  const Perturber second(cfg);
  std::string bytes_a, bytes_b;
  for (const GoldCase& g : gold) {
    bytes_a += first.perturb(g.text, g.study_id);
    bytes_a += '\n';
    bytes_b += second.perturb(g.text, g.study_id);
    bytes_b += '\n';
  }
  expect(bytes_a == bytes_b, "perturbed corpus differs between runs");
}

// ---------------------------------------------------------------------
// 6. Metric oracle equivalence on 100 random 20-study instances.
// ---------------------------------------------------------------------
void criterion_6() {
  SplitMix64 rng(20240601);
  long mismatches = 0;
  for (int round = 0; round < 100; ++round) {
    std::vector<oracles::BinaryCase> cases;
    int positives = 0;
    for (int i = 0; i < 20; ++i) {
      oracles::BinaryCase c;
      c.study_id = "s" + std::to_string(i);
      c.gt_positive = rng.next_unit() < 0.45;
      c.pred_positive = rng.next_unit() < 0.5;
      c.score = static_cast<double>(rng.next_below(9)) / 8.0;
      positives += c.gt_positive;
      cases.push_back(c);
    }
    if (positives == 0) cases[0].gt_positive = true;
    if (positives == 20) cases[0].gt_positive = false;

    LabeledCorpus gt;
    PredictionSet preds;
    preds.model_name = "oracle";
    for (const auto& c : cases) {
      gt.entries.emplace(c.study_id,
                         c.gt_positive
                             ? FractureFinding::fracture({}, Side::NoneSide,
                                                         Stage::OtherStage, {})
                             : FractureFinding::other());
      preds.entries.emplace(
          c.study_id,
          Prediction{c.pred_positive ? TriClass::Fracture : TriClass::Other,
                     c.score});
    }

    const ConfusionCounts got = confusion(preds, gt, Polarity::Positive);
    const ConfusionCounts want = oracles::count_confusion(cases, true);
    if (got.tp != want.tp || got.fp != want.fp || got.fn != want.fn ||
        got.tn != want.tn)
      ++mismatches;

    const Prf got_prf = prf1(got);
    const Prf want_prf = prf1(want);
    if (got_prf.precision != want_prf.precision ||
        got_prf.recall != want_prf.recall || got_prf.f1 != want_prf.f1)
      ++mismatches;

    if (balanced_accuracy(preds, gt) != oracles::balanced_accuracy(cases))
      ++mismatches;

    if (std::abs(roc_auc(preds, gt) - oracles::pairwise_auc(cases)) > 1e-12)
      ++mismatches;
  }
  expect(mismatches == 0,
         std::to_string(mismatches) + " oracle mismatches over 100 rounds");
}

// ---------------------------------------------------------------------
// 7. Ensemble properties on 50 random 5-member instances.
// ---------------------------------------------------------------------
void criterion_7() {
  SplitMix64 rng(777);
  long violations = 0;
  for (int round = 0; round < 50; ++round) {
    LabeledCorpus gt;
    std::vector<PredictionSet> members(5);
    for (int m = 0; m < 5; ++m)
      members[m].model_name = "m" + std::to_string(m);
    for (int i = 0; i < 40; ++i) {
      const std::string id = "s" + std::to_string(i);
      gt.entries.emplace(
          id, (i < 2 || rng.next_unit() < 0.5)
                  ? FractureFinding::fracture({}, Side::NoneSide,
                                              Stage::OtherStage, {})
                  : FractureFinding::other());
      for (auto& m : members) {
        const double u = rng.next_unit();
        const TriClass label = u < 0.3   ? TriClass::Fracture
                               : u < 0.6 ? TriClass::Normal
                                         : TriClass::Other;
        m.entries.emplace(id, Prediction{label, {}});
      }
    }
    const PredictionSet u = ensemble_union(members);

    std::set<std::string> want;
    for (const auto& m : members) {
      const auto pos = oracles::positive_ids(m);
      want.insert(pos.begin(), pos.end());
    }
    if (oracles::positive_ids(u) != want) ++violations;

    const double union_recall =
        prf1(confusion(u, gt, Polarity::Positive)).recall;
    for (const auto& m : members) {
      if (union_recall <
          prf1(confusion(m, gt, Polarity::Positive)).recall - 1e-12)
        ++violations;
    }
  }
  expect(violations == 0,
         std::to_string(violations) + " ensemble property violations");
}

// ---------------------------------------------------------------------
// 8. Relabel-client contract with a deterministic transport double.
// ---------------------------------------------------------------------
class ScriptedTransport : public Transport {
 public:
  void script(const std::string& study_id, std::vector<Reply> replies) {
    scripts_[study_id] = std::move(replies);
  }
  Reply send(const AnnotationRequest& request) override {
    std::lock_guard<std::mutex> lock(mutex_);
    auto& queue = scripts_.at(request.study_id);
    Reply reply = queue.front();
    if (queue.size() > 1) queue.erase(queue.begin());
    return reply;
  }

 private:
  std::mutex mutex_;
  std::map<std::string, std::vector<Reply>> scripts_;
};

void criterion_8() {
  const std::vector<ReportRecord> corpus = {
      {"ok", "Acute fracture of the left ribs."},
      {"malformed", "No evidence of fracture."},
      {"quote_missing", "Heart size is normal."},
      {"flaky", "Healed fracture of the right clavicle."},
  };
  ScriptedTransport transport;
  transport.script(
      "ok",
      {{Transport::Status::Ok,
        R"({"class":"fracture","location":["ribs"],"side":"left","stage":"acute","implants":[],"quote":"Acute fracture of the left ribs."})"}});
  transport.script("malformed",
                   {{Transport::Status::Ok, "{\"class\": \"fractu"}});
  transport.script(
      "quote_missing",
      {{Transport::Status::Ok,
        R"({"class":"other","location":[],"side":"none","stage":"other","implants":[],"quote":"Not in the report."})"}});
  transport.script(
      "flaky",
      {{Transport::Status::TransientFailure, "HTTP 503"},
       {Transport::Status::TransientFailure, "HTTP 503"},
       {Transport::Status::Ok,
        R"({"class":"fracture","location":["clavicle"],"side":"right","stage":"healed","implants":[],"quote":"Healed fracture of the right clavicle."})"}});

  BatchPolicy policy;
  policy.base_delay_ms = 0;
  policy.concurrency = 2;
  const BatchResult result = run_batch(corpus, transport, policy);

  expect(result.corpus.entries.size() == 2, "expected exactly 2 entries");
  expect(result.corpus.entries.count("ok") == 1, "missing entry for ok");
  expect(result.corpus.entries.count("flaky") == 1, "missing entry for flaky");
  expect(result.corpus.provenance == Provenance::LLM,
         "provenance must be llm");
  expect(result.attempts.at("flaky") == 3, "flaky must take 3 attempts");
  expect(result.attempts.at("ok") == 1, "ok must take 1 attempt");
  expect(result.failures.size() == 2, "expected exactly 2 failures");
  bool malformed_logged = false, quote_logged = false;
  for (const BatchFailure& f : result.failures) {
    if (f.study_id == "malformed" &&
        f.reason.find("schema violation") != std::string::npos)
      malformed_logged = true;
    if (f.study_id == "quote_missing" &&
        f.reason.find("not found") != std::string::npos)
      quote_logged = true;
  }
  expect(malformed_logged, "malformed payload missing from the failure log");
  expect(quote_logged, "missing quote failure not logged");

  const std::string path = temp_dir() + "/relabeled.csv";
  aggregate_to_csv(result.corpus, path);
  const LoadedLabels loaded = load_labels(path);
  expect(loaded.corpus.has_value(), "round-trip did not produce a corpus");
  if (loaded.corpus) {
    expect(loaded.corpus->provenance == Provenance::LLM,
           "round-trip provenance");
    expect(loaded.corpus->entries.size() == result.corpus.entries.size() &&
               std::equal(loaded.corpus->entries.begin(),
                          loaded.corpus->entries.end(),
                          result.corpus.entries.begin(),
                          [](const auto& a, const auto& b) {
                            return a.first == b.first && a.second == b.second;
                          }),
           "round-trip corpus differs");
  }
}

struct Criterion {
  int number;
  const char* name;
  void (*run)();
  double time_limit_s;  // 0 = unbounded
};

}  // namespace

int main() {
  const std::vector<Criterion> criteria = {
      {1, "discrepancy-table fidelity (8 reports, 8 audit rows)",
       criterion_1, 1.0},
      {2, "published F1 self-consistency (18 rows, +/-0.001)", criterion_2,
       1.0},
      {3, "template round-trip over 49,154 findings", criterion_3, 30.0},
      {4, "fixture parser accuracy (binary 100%, attributes >= 95%)",
       criterion_4, 0.0},
      {5, "perturbation robustness (>= 0.85x clean, deterministic)",
       criterion_5, 0.0},
      {6, "metric equivalence vs brute-force oracle (100 instances)",
       criterion_6, 10.0},
      {7, "ensemble union properties (50 instances)", criterion_7, 0.0},
      {8, "relabel client contract (scripted transport)", criterion_8, 0.0},
  };

  int failed = 0;
  for (const Criterion& c : criteria) {
    checks_failed = 0;
    const auto start = std::chrono::steady_clock::now();
    try {
      c.run();
    } catch (const std::exception& e) {
      ++checks_failed;
      std::printf("       exception: %s\n", e.what());
    }
    const double elapsed =
        std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                      start)
            .count();
    if (c.time_limit_s > 0 && elapsed > c.time_limit_s) {
      ++checks_failed;
      std::printf("       too slow: %.2fs > %.2fs\n", elapsed,
                  c.time_limit_s);
    }
    const bool ok = checks_failed == 0;
    failed += !ok;
    std::printf("[%s] criterion %d: %s (%.2fs)\n", ok ? "PASS" : "FAIL",
                c.number, c.name, elapsed);
  }
  std::printf("%d/%zu criteria passed\n",
              static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed;
}
