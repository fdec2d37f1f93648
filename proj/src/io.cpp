#include "fxlabel/io.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

#include <json.hpp>

#include "fxlabel/csv.hpp"

namespace fxlabel {

namespace {

using nlohmann::json;
using nlohmann::ordered_json;

enum class FileFormat { Csv, Jsonl };

bool ends_with(const std::string& s, std::string_view suffix) {
  return s.size() >= suffix.size() &&
         s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

FileFormat sniff_format(const std::string& path) {
  if (ends_with(path, ".csv")) return FileFormat::Csv;
  if (ends_with(path, ".jsonl")) return FileFormat::Jsonl;
  throw ParseError("unsupported file extension for \"" + path +
                   "\" (expected .csv or .jsonl)");
}

// Rows in file order with their source line, normalized across formats.
struct Table {
  std::vector<std::string> columns;
  std::vector<std::map<std::string, std::string>> rows;
  std::vector<long> lines;
};

Table load_table(const std::string& path) {
  Table table;
  const FileFormat format = sniff_format(path);
  const std::string text = read_text_file(path);
  if (format == FileFormat::Csv) {
    const csv::Parsed parsed = csv::parse_with_lines(text);
    if (parsed.rows.empty()) throw ParseError(1, "missing header row");
    table.columns = parsed.rows[0];
    for (std::size_t r = 1; r < parsed.rows.size(); ++r) {
      const csv::Row& row = parsed.rows[r];
      if (row.size() == 1 && row[0].empty()) continue;  // trailing blank line
      if (row.size() != table.columns.size()) {
        throw ParseError(parsed.line_numbers[r],
                         "expected " + std::to_string(table.columns.size()) +
                             " fields, got " + std::to_string(row.size()));
      }
      std::map<std::string, std::string> cells;
      for (std::size_t c = 0; c < row.size(); ++c)
        cells[table.columns[c]] = row[c];
      table.rows.push_back(std::move(cells));
      table.lines.push_back(parsed.line_numbers[r]);
    }
    return table;
  }
  // JSONL
  std::istringstream in(text);
  std::string line;
  long line_no = 0;
  std::map<std::string, bool> seen_keys;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line == "\r") continue;
    json obj;
    try {
      obj = json::parse(line);
    } catch (const json::parse_error& e) {
      throw ParseError(line_no, e.what());
    }
    if (!obj.is_object()) throw ParseError(line_no, "expected a JSON object");
    std::map<std::string, std::string> cells;
    for (const auto& [key, value] : obj.items()) {
      if (value.is_string()) cells[key] = value.get<std::string>();
      else if (value.is_null()) cells[key] = "";
      else cells[key] = value.dump();
      seen_keys[key] = true;
    }
    table.rows.push_back(std::move(cells));
    table.lines.push_back(line_no);
  }
  for (const auto& [key, unused] : seen_keys) table.columns.push_back(key);
  return table;
}

const std::string& cell(const std::map<std::string, std::string>& row,
                        const std::string& key, long line) {
  const auto it = row.find(key);
  if (it == row.end()) {
    throw ParseError(line, "missing \"" + key + "\" field");
  }
  return it->second;
}

bool has_column(const Table& table, std::string_view name) {
  for (const std::string& c : table.columns)
    if (c == name) return true;
  return false;
}

FlatRecord flat_from_row(const std::map<std::string, std::string>& row,
                         long line) {
  FlatRecord rec;
  rec.tri_class = cell(row, "tri_class", line);
  rec.locations = cell(row, "locations", line);
  rec.side = cell(row, "side", line);
  rec.stage = cell(row, "stage", line);
  rec.implants = cell(row, "implants", line);
  rec.evidence = cell(row, "evidence", line);
  return rec;
}

std::string format_score(double score) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", score);
  return buf;
}

double parse_double(const std::string& s, long line, const char* what) {
  try {
    std::size_t consumed = 0;
    const double v = std::stod(s, &consumed);
    if (consumed != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw ParseError(line, std::string("bad ") + what + " value \"" + s + "\"");
  }
}

std::string file_stem(const std::string& path) {
  return std::filesystem::path(path).stem().string();
}

}  // namespace

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_text_atomic(const std::string& path, std::string_view content) {
  namespace fs = std::filesystem;
  const fs::path target(path);
  fs::path tmp = target;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write " + tmp.string());
    out.write(content.data(),
              static_cast<std::streamsize>(content.size()));
    if (!out) throw IoError("short write to " + tmp.string());
  }
  std::error_code ec;
  fs::rename(tmp, target, ec);
  if (ec) {
    fs::remove(tmp);
    throw IoError("cannot rename " + tmp.string() + " to " + path + ": " +
                  ec.message());
  }
}

std::vector<ReportRecord> load_reports(const std::string& path) {
  const Table table = load_table(path);
  std::vector<ReportRecord> out;
  std::map<std::string, long> seen;
  for (std::size_t i = 0; i < table.rows.size(); ++i) {
    const long line = table.lines[i];
    ReportRecord rec;
    rec.study_id = cell(table.rows[i], "study_id", line);
    rec.text = cell(table.rows[i], "text", line);
    if (rec.study_id.empty()) throw ParseError(line, "empty study_id");
    if (!seen.emplace(rec.study_id, line).second) {
      throw DuplicateStudyIdError(rec.study_id, line);
    }
    out.push_back(std::move(rec));
  }
  return out;
}

void save_reports(const std::vector<ReportRecord>& reports,
                  const std::string& path) {
  if (sniff_format(path) == FileFormat::Csv) {
    std::vector<csv::Row> rows;
    rows.push_back({"study_id", "text"});
    for (const ReportRecord& r : reports) rows.push_back({r.study_id, r.text});
    write_text_atomic(path, csv::format(rows));
    return;
  }
  std::string out;
  for (const ReportRecord& r : reports) {
    ordered_json obj;
    obj["study_id"] = r.study_id;
    obj["text"] = r.text;
    out += obj.dump();
    out += '\n';
  }
  write_text_atomic(path, out);
}

LoadedLabels load_labels(const std::string& path) {
  const Table table = load_table(path);
  LoadedLabels out;
  if (has_column(table, "locations")) {
    LabeledCorpus corpus;
    bool any_provenance = false;
    for (std::size_t i = 0; i < table.rows.size(); ++i) {
      const long line = table.lines[i];
      const std::string& study_id = cell(table.rows[i], "study_id", line);
      FractureFinding finding = [&] {
        try {
          return deserialize_finding(flat_from_row(table.rows[i], line));
        } catch (const UnknownTokenError& e) {
          throw ParseError(line, e.what());
        } catch (const InvalidFindingError& e) {
          throw ParseError(line, e.what());
        }
      }();
      if (!corpus.entries.emplace(study_id, std::move(finding)).second) {
        throw DuplicateStudyIdError(study_id, line);
      }
      const auto prov = table.rows[i].find("provenance");
      if (prov != table.rows[i].end() && !prov->second.empty()) {
        any_provenance = true;
        try {
          corpus.provenance = parse_enum<Provenance>(prov->second);
        } catch (const UnknownTokenError& e) {
          throw ParseError(line, e.what());
        }
      }
    }
    if (!any_provenance) corpus.provenance = Provenance::Legacy;
    out.corpus = std::move(corpus);
    return out;
  }

  PredictionSet preds;
  preds.model_name = file_stem(path);
  for (std::size_t i = 0; i < table.rows.size(); ++i) {
    const long line = table.lines[i];
    const std::string& study_id = cell(table.rows[i], "study_id", line);
    Prediction p;
    try {
      p.label = parse_enum<TriClass>(cell(table.rows[i], "tri_class", line));
    } catch (const UnknownTokenError& e) {
      throw ParseError(line, e.what());
    }
    const auto score = table.rows[i].find("score");
    if (score != table.rows[i].end() && !score->second.empty()) {
      p.score = parse_double(score->second, line, "score");
      try {
        validate_score(p.score, study_id);
      } catch (const InvalidFindingError& e) {
        throw ParseError(line, e.what());
      }
    }
    if (!preds.entries.emplace(study_id, p).second) {
      throw DuplicateStudyIdError(study_id, line);
    }
  }
  out.predictions = std::move(preds);
  return out;
}

void save_labels(const LabeledCorpus& lc, const std::string& path) {
  const std::string prov(to_token(lc.provenance));
  if (sniff_format(path) == FileFormat::Csv) {
    std::vector<csv::Row> rows;
    rows.push_back({"study_id", "tri_class", "locations", "side", "stage",
                    "implants", "evidence", "provenance"});
    for (const auto& [study_id, finding] : lc.entries) {
      const FlatRecord rec = serialize_finding(finding);
      rows.push_back({study_id, rec.tri_class, rec.locations, rec.side,
                      rec.stage, rec.implants, rec.evidence, prov});
    }
    write_text_atomic(path, csv::format(rows));
    return;
  }
  std::string out;
  for (const auto& [study_id, finding] : lc.entries) {
    const FlatRecord rec = serialize_finding(finding);
    ordered_json obj;
    obj["study_id"] = study_id;
    obj["tri_class"] = rec.tri_class;
    obj["locations"] = rec.locations;
    obj["side"] = rec.side;
    obj["stage"] = rec.stage;
    obj["implants"] = rec.implants;
    obj["evidence"] = rec.evidence;
    obj["provenance"] = prov;
    out += obj.dump();
    out += '\n';
  }
  write_text_atomic(path, out);
}

void save_predictions(const PredictionSet& ps, const std::string& path) {
  bool any_score = false;
  for (const auto& [id, p] : ps.entries) any_score = any_score || p.score;
  std::vector<csv::Row> rows;
  csv::Row header = {"study_id", "tri_class"};
  if (any_score) header.push_back("score");
  rows.push_back(std::move(header));
  for (const auto& [study_id, p] : ps.entries) {
    csv::Row row = {study_id, std::string(to_token(p.label))};
    if (any_score) row.push_back(p.score ? format_score(*p.score) : "");
    rows.push_back(std::move(row));
  }
  write_text_atomic(path, csv::format(rows));
}

LegacyLabels load_legacy(const std::string& path) {
  const Table table = load_table(path);
  LegacyLabels out;
  for (std::size_t i = 0; i < table.rows.size(); ++i) {
    const long line = table.lines[i];
    const std::string& study_id = cell(table.rows[i], "study_id", line);
    const std::string& raw = cell(table.rows[i], "fracture", line);
    std::optional<double> value;
    const std::string folded = fold_token(raw);
    if (!folded.empty() && folded != "nan") {
      const double v = parse_double(raw, line, "fracture");
      if (v != 1.0 && v != 0.0 && v != -1.0) {
        throw ParseError(line, "legacy fracture label must be 1.0, 0.0, -1.0 "
                               "or blank, got \"" + raw + "\"");
      }
      value = v;
    }
    if (!out.entries.emplace(study_id, value).second) {
      throw DuplicateStudyIdError(study_id, line);
    }
  }
  return out;
}

std::vector<GoldCase> load_gold_corpus(const std::string& path) {
  const Table table = load_table(path);
  std::vector<GoldCase> out;
  std::map<std::string, long> seen;
  for (std::size_t i = 0; i < table.rows.size(); ++i) {
    const long line = table.lines[i];
    GoldCase g;
    g.study_id = cell(table.rows[i], "study_id", line);
    g.text = cell(table.rows[i], "text", line);
    FlatRecord rec;
    rec.tri_class = cell(table.rows[i], "tri_class", line);
    rec.locations = cell(table.rows[i], "locations", line);
    rec.side = cell(table.rows[i], "side", line);
    rec.stage = cell(table.rows[i], "stage", line);
    rec.implants = cell(table.rows[i], "implants", line);
    try {
      g.finding = deserialize_finding(rec);
    } catch (const Error& e) {
      throw ParseError(line, e.what());
    }
    if (!seen.emplace(g.study_id, line).second) {
      throw DuplicateStudyIdError(g.study_id, line);
    }
    out.push_back(std::move(g));
  }
  return out;
}

}  // namespace fxlabel
