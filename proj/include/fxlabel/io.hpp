#pragma once

#include <optional>
#include <string>
#include <vector>

#include "fxlabel/aggregate.hpp"
#include "fxlabel/core.hpp"
#include "fxlabel/robustness.hpp"

namespace fxlabel {

// Corpus files are CSV or JSONL, sniffed by extension. JSONL rows carry
// the same keys and string values as the CSV columns.

std::vector<ReportRecord> load_reports(const std::string& path);
void save_reports(const std::vector<ReportRecord>& reports,
                  const std::string& path);

// Label files hold flat records (study_id, tri_class, locations, side,
// stage, implants, evidence, optional provenance); prediction files hold
// study_id, tri_class and an optional score column. A "locations" header
// cell picks the first shape.
struct LoadedLabels {
  std::optional<LabeledCorpus> corpus;
  std::optional<PredictionSet> predictions;
};
LoadedLabels load_labels(const std::string& path);

void save_labels(const LabeledCorpus& lc, const std::string& path);
void save_predictions(const PredictionSet& ps, const std::string& path);

// study_id,fracture with 1.0 / 0.0 / -1.0 / blank (or NaN) cells.
LegacyLabels load_legacy(const std::string& path);

// study_id,text,tri_class,locations,side,stage,implants
std::vector<GoldCase> load_gold_corpus(const std::string& path);

std::string read_text_file(const std::string& path);

// Temp-file-then-rename so readers never observe a partial file.
void write_text_atomic(const std::string& path, std::string_view content);

}  // namespace fxlabel
