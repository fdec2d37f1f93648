#include "fxlabel/cli.hpp"

#include <cstdio>
#include <filesystem>
#include <iostream>

#include <CLI11.hpp>

#include "fxlabel/aggregate.hpp"
#include "fxlabel/csv.hpp"
#include "fxlabel/io.hpp"
#include "fxlabel/labeler.hpp"
#include "fxlabel/metrics.hpp"
#include "fxlabel/relabel.hpp"
#include "fxlabel/robustness.hpp"
#include "fxlabel/templater.hpp"

namespace fxlabel {

namespace {

Lexicon load_lexicon_or_bundled(const std::string& path) {
  return path.empty() ? Lexicon::bundled() : Lexicon::from_file(path);
}

LabeledCorpus require_corpus(const std::string& path) {
  LoadedLabels loaded = load_labels(path);
  if (!loaded.corpus) {
    throw ParseError("\"" + path + "\" holds tri-class predictions; this "
                     "subcommand needs full label records");
  }
  return std::move(*loaded.corpus);
}

struct LabelArgs {
  std::string reports, out, lexicon;
  int jobs = 1;
};

struct RenderArgs {
  std::string labels, out;
};

struct EvalArgs {
  std::string pred, gt, out, model;
};

struct EnsembleArgs {
  std::vector<std::string> inputs;
  std::string out;
};

struct AuditArgs {
  std::string legacy, relabeled, out;
};

struct PerturbArgs {
  std::string reports, out, lexicon, synonyms;
  std::uint64_t seed = 0;
  double synonym_rate = 0.3;
  double typo_rate = 0.1;
};

struct RelabelArgs {
  std::string reports, out, failures;
  int jobs = 8;
  int max_attempts = 5;
  int base_delay_ms = 1000;
};

void run_label(const LabelArgs& a) {
  const Lexicon lexicon = load_lexicon_or_bundled(a.lexicon);
  const Labeler labeler(lexicon);
  const auto reports = load_reports(a.reports);
  save_labels(labeler.label_corpus(reports, a.jobs), a.out);
  std::cout << "labeled " << reports.size() << " reports -> " << a.out
            << "\n";
}

void run_render(const RenderArgs& a) {
  const LabeledCorpus corpus = require_corpus(a.labels);
  std::vector<csv::Row> rows;
  rows.push_back({"study_id", "sentence"});
  for (const auto& [study_id, sentence] : render_corpus(corpus)) {
    rows.push_back({study_id, sentence});
  }
  write_text_atomic(a.out, csv::format(rows));
  std::cout << "rendered " << corpus.entries.size() << " findings -> "
            << a.out << "\n";
}

void run_eval(const EvalArgs& a) {
  const LabeledCorpus gt = require_corpus(a.gt);
  LoadedLabels pred = load_labels(a.pred);
  std::vector<MetricsReport> reports;
  std::string model = a.model;
  if (pred.corpus) {
    reports = evaluate(*pred.corpus, gt);
    if (model.empty())
      model = std::filesystem::path(a.pred).stem().string();
  } else {
    if (model.empty()) model = pred.predictions->model_name;
    pred.predictions->model_name = model;
    reports = evaluate(*pred.predictions, gt);
  }
  write_text_atomic(a.out,
                    reports_to_json(reports, model, gt.entries.size()));
  std::cout << "evaluated " << gt.entries.size() << " studies -> " << a.out
            << "\n";
}

void run_ensemble(const EnsembleArgs& a) {
  std::vector<LabeledCorpus> corpora;
  std::vector<PredictionSet> predictions;
  for (const std::string& path : a.inputs) {
    LoadedLabels loaded = load_labels(path);
    if (loaded.corpus) corpora.push_back(std::move(*loaded.corpus));
    else predictions.push_back(std::move(*loaded.predictions));
  }
  if (!corpora.empty() && !predictions.empty()) {
    throw ParseError("ensemble inputs mix full label files with prediction "
                     "files");
  }
  if (!corpora.empty()) {
    save_labels(ensemble_union_findings(corpora), a.out);
  } else {
    save_predictions(ensemble_union(predictions), a.out);
  }
  std::cout << "union of " << a.inputs.size() << " members -> " << a.out
            << "\n";
}

void run_audit(const AuditArgs& a) {
  const LegacyLabels legacy = load_legacy(a.legacy);
  const LabeledCorpus relabeled = require_corpus(a.relabeled);
  const AuditResult result = audit(legacy, relabeled);
  std::vector<csv::Row> rows;
  rows.push_back({"study_id", "legacy", "relabeled", "quote"});
  for (const Discrepancy& d : result.discrepancies) {
    char legacy_cell[32] = "";
    if (d.legacy) std::snprintf(legacy_cell, sizeof(legacy_cell), "%.1f",
                                *d.legacy);
    rows.push_back({d.study_id, legacy_cell,
                    std::string(to_token(d.relabeled)), d.quote});
  }
  write_text_atomic(a.out, csv::format(rows));
  std::cout << "legacy positive: " << result.legacy_positive_count << "\n"
            << "relabeled fracture: " << result.relabeled_fracture_count
            << "\n"
            << "discrepancies: " << result.disagreement_count << "\n"
            << "skipped: " << result.skipped_count << "\n";
}

void run_perturb(const PerturbArgs& a) {
  PerturbationConfig cfg;
  cfg.seed = a.seed;
  cfg.synonym_rate = a.synonym_rate;
  cfg.typo_rate = a.typo_rate;
  const Lexicon lexicon = load_lexicon_or_bundled(a.lexicon);
  const SynonymTable synonyms = a.synonyms.empty()
                                    ? SynonymTable::bundled()
                                    : SynonymTable::from_file(a.synonyms);
  const Perturber perturber(cfg, synonyms, lexicon);
  const auto reports = load_reports(a.reports);
  save_reports(perturber.perturb_corpus(reports), a.out);
  std::cout << "perturbed " << reports.size() << " reports -> " << a.out
            << "\n";
}

void run_relabel(const RelabelArgs& a) {
  const auto reports = load_reports(a.reports);
  const auto transport = make_http_transport();
  BatchPolicy policy;
  policy.concurrency = a.jobs;
  policy.max_attempts = a.max_attempts;
  policy.base_delay_ms = a.base_delay_ms;
  const BatchResult result = run_batch(reports, *transport, policy);
  aggregate_to_csv(result.corpus, a.out);
  if (!a.failures.empty()) {
    std::vector<csv::Row> rows;
    rows.push_back({"study_id", "reason"});
    for (const BatchFailure& f : result.failures) {
      rows.push_back({f.study_id, f.reason});
    }
    write_text_atomic(a.failures, csv::format(rows));
  }
  std::cout << "annotated " << result.corpus.entries.size() << " of "
            << reports.size() << " reports -> " << a.out << " ("
            << result.failures.size() << " failures)\n";
}

}  // namespace

int cli_dispatch(const std::vector<std::string>& args) {
  CLI::App app{"Fracture report labeling and evaluation toolkit"};
  app.require_subcommand(1);

  LabelArgs label_args;
  auto* label = app.add_subcommand(
      "label", "Label free-text reports with the rule-based parser");
  label->add_option("--reports", label_args.reports, "reports CSV/JSONL")
      ->required();
  label->add_option("--out", label_args.out, "output labels file")->required();
  label->add_option("--lexicon", label_args.lexicon,
                    "lexicon table (default: bundled)");
  label->add_option("--jobs", label_args.jobs, "worker threads");

  RenderArgs render_args;
  auto* render = app.add_subcommand(
      "render", "Render labels into canonical templated sentences");
  render->add_option("--labels", render_args.labels, "labels file")
      ->required();
  render->add_option("--out", render_args.out, "output CSV")->required();

  EvalArgs eval_args;
  auto* eval = app.add_subcommand(
      "eval", "Score predictions against ground-truth labels");
  eval->add_option("--pred", eval_args.pred, "predictions or labels file")
      ->required();
  eval->add_option("--gt", eval_args.gt, "ground-truth labels file")
      ->required();
  eval->add_option("--out", eval_args.out, "metrics JSON")->required();
  eval->add_option("--model", eval_args.model, "model name for the report");

  EnsembleArgs ensemble_args;
  auto* ensemble = app.add_subcommand(
      "ensemble", "Union-combine several members' predictions");
  ensemble->add_option("inputs", ensemble_args.inputs, "member files")
      ->required()
      ->expected(-1);
  ensemble->add_option("--out", ensemble_args.out, "output file")->required();

  AuditArgs audit_args;
  auto* audit_cmd = app.add_subcommand(
      "audit", "Diff legacy binary labels against a relabeled corpus");
  audit_cmd->add_option("--legacy", audit_args.legacy, "legacy label CSV")
      ->required();
  audit_cmd->add_option("--relabeled", audit_args.relabeled, "labels file")
      ->required();
  audit_cmd->add_option("--out", audit_args.out, "discrepancy CSV")
      ->required();

  PerturbArgs perturb_args;
  auto* perturb = app.add_subcommand(
      "perturb", "Apply deterministic synonym/typo noise to reports");
  perturb->add_option("--reports", perturb_args.reports, "reports file")
      ->required();
  perturb->add_option("--out", perturb_args.out, "output reports file")
      ->required();
  perturb->add_option("--seed", perturb_args.seed, "stream seed");
  perturb->add_option("--synonym-rate", perturb_args.synonym_rate,
                      "per-token synonym probability");
  perturb->add_option("--typo-rate", perturb_args.typo_rate,
                      "per-token typo probability");
  perturb->add_option("--lexicon", perturb_args.lexicon,
                      "lexicon table (default: bundled)");
  perturb->add_option("--synonyms", perturb_args.synonyms,
                      "synonym table (default: bundled)");

  RelabelArgs relabel_args;
  auto* relabel = app.add_subcommand(
      "relabel", "Annotate reports through the configured LLM endpoint");
  relabel->add_option("--reports", relabel_args.reports, "reports file")
      ->required();
  relabel->add_option("--out", relabel_args.out, "output labels CSV")
      ->required();
  relabel->add_option("--failures", relabel_args.failures,
                      "write failures to this CSV");
  relabel->add_option("--jobs", relabel_args.jobs, "in-flight requests");
  relabel->add_option("--max-attempts", relabel_args.max_attempts,
                      "attempts per report");
  relabel->add_option("--base-delay-ms", relabel_args.base_delay_ms,
                      "initial retry backoff");

  std::vector<const char*> argv;
  argv.push_back("fxlabel");
  for (const std::string& a : args) argv.push_back(a.c_str());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 1;
  }

  try {
    if (label->parsed()) run_label(label_args);
    else if (render->parsed()) run_render(render_args);
    else if (eval->parsed()) run_eval(eval_args);
    else if (ensemble->parsed()) run_ensemble(ensemble_args);
    else if (audit_cmd->parsed()) run_audit(audit_args);
    else if (perturb->parsed()) run_perturb(perturb_args);
    else if (relabel->parsed()) run_relabel(relabel_args);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}

}  // namespace fxlabel
