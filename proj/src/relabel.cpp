#include "fxlabel/relabel.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <thread>

#include <json.hpp>

#include "fxlabel/io.hpp"

namespace fxlabel {

namespace {

using nlohmann::json;

template <typename E, std::size_t N>
std::string enum_list(const E (&values)[N]) {
  std::string out;
  for (std::size_t i = 0; i < N; ++i) {
    if (i) out += ", ";
    out += std::string(to_token(values[i]));
  }
  return out;
}

const std::string& system_prompt() {
  static const std::string prompt =
      "You are an experienced radiologist reviewing chest X-ray reports for "
      "bone fractures.\n"
      "Classify the report into exactly one class:\n"
      "- fracture: the report explicitly mentions or describes a fracture.\n"
      "- normal: the report explicitly states that there are no fractures or "
      "traumatic bone changes.\n"
      "- other: the report gives no information about fractures.\n"
      "For a fracture report, also extract:\n"
      "- location, any of: " + enum_list(kAllLocations) + "\n"
      "- side, one of: " + enum_list(kAllSides) + "\n"
      "- stage, one of: " + enum_list(kAllStages) + "\n"
      "- implants, any of: " + enum_list(kAllImplants) + "\n"
      "Cite the exact text snippet from the report that supports the "
      "classification.\n"
      "Respond with a single JSON object and nothing else:\n"
      "{\"class\": \"...\", \"location\": [\"...\"], \"side\": \"...\", "
      "\"stage\": \"...\", \"implants\": [\"...\"], \"quote\": \"...\"}\n"
      "For normal and other reports, location and implants must be empty, "
      "side must be \"none\" and stage must be \"other\". For normal "
      "reports, quote the negating sentence.";
  return prompt;
}

// Strips an optional ```json ... ``` fence some models wrap around JSON.
std::string strip_fence(const std::string& raw) {
  std::size_t begin = raw.find_first_not_of(" \t\r\n");
  if (begin == std::string::npos) return raw;
  if (raw.compare(begin, 3, "```") != 0) return raw;
  begin = raw.find('\n', begin);
  if (begin == std::string::npos) return raw;
  ++begin;
  const std::size_t end = raw.rfind("```");
  if (end == std::string::npos || end <= begin) return raw;
  return raw.substr(begin, end - begin);
}

std::string require_string(const json& obj, const char* key) {
  if (!obj.contains(key)) {
    throw SchemaViolationError(std::string("missing key \"") + key + "\"");
  }
  if (!obj[key].is_string()) {
    throw SchemaViolationError(std::string("key \"") + key +
                               "\" must be a string");
  }
  return obj[key].get<std::string>();
}

std::vector<std::string> require_string_array(const json& obj,
                                              const char* key) {
  if (!obj.contains(key)) {
    throw SchemaViolationError(std::string("missing key \"") + key + "\"");
  }
  if (!obj[key].is_array()) {
    throw SchemaViolationError(std::string("key \"") + key +
                               "\" must be an array");
  }
  std::vector<std::string> out;
  for (const json& item : obj[key]) {
    if (!item.is_string()) {
      throw SchemaViolationError(std::string("key \"") + key +
                                 "\" must contain only strings");
    }
    out.push_back(item.get<std::string>());
  }
  return out;
}

struct Outcome {
  AnnotationResponse response;
  std::string failure_reason;  // empty on success
  bool transport_failed = false;
  int attempts = 0;
};

Outcome annotate_one(const ReportRecord& record, Transport& transport,
                     const BatchPolicy& policy) {
  Outcome outcome;
  outcome.response.study_id = record.study_id;
  const AnnotationRequest request = build_request(record);
  long delay_ms = policy.base_delay_ms;
  std::string last_error;
  for (int attempt = 1; attempt <= policy.max_attempts; ++attempt) {
    outcome.attempts = attempt;
    const Transport::Reply reply = transport.send(request);
    if (reply.status == Transport::Status::Ok) {
      outcome.response.raw = reply.body;
      try {
        outcome.response.parsed = validate_response(reply.body, record);
        outcome.response.quote = outcome.response.parsed->evidence();
      } catch (const Error& e) {
        outcome.failure_reason = e.what();
      }
      return outcome;
    }
    last_error = reply.body;
    if (reply.status == Transport::Status::PermanentFailure) break;
    if (attempt < policy.max_attempts) {
      std::this_thread::sleep_for(std::chrono::milliseconds(delay_ms));
      delay_ms *= policy.backoff_factor;
    }
  }
  outcome.transport_failed = true;
  outcome.failure_reason = "transport failure: " + last_error;
  return outcome;
}

}  // namespace

AnnotationRequest build_request(const ReportRecord& record) {
  AnnotationRequest request;
  request.study_id = record.study_id;
  request.system_prompt = system_prompt();
  request.user_prompt = "Report:\n" + record.text;
  request.schema_id = std::string(kAnnotationSchemaId);
  return request;
}

FractureFinding validate_response(const std::string& raw,
                                  const ReportRecord& source) {
  json payload;
  try {
    payload = json::parse(strip_fence(raw));
  } catch (const json::parse_error& e) {
    throw SchemaViolationError(std::string("not valid JSON: ") + e.what());
  }
  if (!payload.is_object()) {
    throw SchemaViolationError("payload must be a JSON object");
  }

  const std::string tri_token = require_string(payload, "class");
  const std::string side_token = require_string(payload, "side");
  const std::string stage_token = require_string(payload, "stage");
  const std::string quote = require_string(payload, "quote");
  const auto location_tokens = require_string_array(payload, "location");
  const auto implant_tokens = require_string_array(payload, "implants");

  try {
    const TriClass tri = parse_enum<TriClass>(tri_token);
    LocationSet locations;
    for (const std::string& t : location_tokens)
      locations.insert(parse_enum<Location>(t));
    ImplantSet implants;
    for (const std::string& t : implant_tokens)
      implants.insert(parse_enum<Implant>(t));
    const Side side = parse_enum<Side>(side_token);
    const Stage stage = parse_enum<Stage>(stage_token);

    if (!quote.empty() && source.text.find(quote) == std::string::npos) {
      throw QuoteNotFoundError(quote);
    }
    return FractureFinding(tri, std::move(locations), side, stage,
                           std::move(implants), quote);
  } catch (const UnknownTokenError& e) {
    throw SchemaViolationError(e.what());
  } catch (const InvalidFindingError& e) {
    throw SchemaViolationError(e.what());
  }
}

BatchResult run_batch(const std::vector<ReportRecord>& corpus,
                      Transport& transport, const BatchPolicy& policy) {
  std::vector<Outcome> outcomes(corpus.size());
  const std::size_t n = corpus.size();
  const std::size_t workers = std::min<std::size_t>(
      std::max(policy.concurrency, 1), std::max<std::size_t>(n, 1));

  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i)
      outcomes[i] = annotate_one(corpus[i], transport, policy);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (std::size_t i = next.fetch_add(1); i < n; i = next.fetch_add(1))
          outcomes[i] = annotate_one(corpus[i], transport, policy);
      });
    }
    for (auto& t : pool) t.join();
  }

  BatchResult result;
  result.corpus.provenance = Provenance::LLM;
  std::size_t transport_failures = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const std::string& study_id = corpus[i].study_id;
    const Outcome& o = outcomes[i];
    auto [it, inserted] = result.attempts.emplace(study_id, o.attempts);
    if (!inserted) {
      // duplicate study_id in the input: last write wins
      ++result.duplicate_warnings;
      it->second = o.attempts;
    }
    if (o.response.parsed) {
      result.corpus.entries.insert_or_assign(study_id, *o.response.parsed);
    } else {
      if (o.transport_failed) ++transport_failures;
      result.failures.push_back(BatchFailure{study_id, o.failure_reason});
    }
  }
  if (n > 0 && transport_failures == n) {
    throw BatchAbortedError(n);
  }
  std::sort(result.failures.begin(), result.failures.end(),
            [](const BatchFailure& a, const BatchFailure& b) {
              return a.study_id < b.study_id;
            });
  return result;
}

void aggregate_to_csv(const LabeledCorpus& lc, const std::string& path) {
  save_labels(lc, path);
}

}  // namespace fxlabel
