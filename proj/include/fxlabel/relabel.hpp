#pragma once

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "fxlabel/core.hpp"

namespace fxlabel {

inline constexpr std::string_view kAnnotationSchemaId = "fracture-finding/v1";

struct AnnotationRequest {
  std::string study_id;
  std::string system_prompt;  // fixed radiologist instruction
  std::string user_prompt;    // the report text, verbatim
  std::string schema_id;
};

struct AnnotationResponse {
  std::string study_id;
  std::string raw;
  std::optional<FractureFinding> parsed;
  std::string quote;
};

// Deterministic prompt embedding the tri-class definitions and all four
// attribute enumerations, plus the response schema.
AnnotationRequest build_request(const ReportRecord& record);

// Parses and validates one raw model response against the v1 schema:
//
//   {"class": "fracture", "location": ["ribs"], "side": "both",
//    "stage": "other", "implants": [], "quote": "..."}
//
// Throws SchemaViolation on malformed payloads and QuoteNotFound when the
// cited snippet is not a verbatim substring of the report.
FractureFinding validate_response(const std::string& raw,
                                  const ReportRecord& source);

// Any request/response channel: the live HTTP client or a test double.
// send() may be called from several worker threads at once.
class Transport {
 public:
  enum class Status { Ok, TransientFailure, PermanentFailure };

  struct Reply {
    Status status = Status::PermanentFailure;
    std::string body;  // message content on Ok, error detail otherwise
  };

  virtual ~Transport() = default;
  virtual Reply send(const AnnotationRequest& request) = 0;
};

struct BatchPolicy {
  int max_attempts = 5;
  int base_delay_ms = 1000;  // doubles after each transient failure
  int backoff_factor = 2;
  int concurrency = 8;
};

struct BatchFailure {
  std::string study_id;
  std::string reason;
};

struct BatchResult {
  LabeledCorpus corpus;                  // provenance LLM
  std::vector<BatchFailure> failures;    // sorted by study_id
  std::map<std::string, int> attempts;   // transport attempts per study
  long duplicate_warnings = 0;
};

// Dispatches every record under the retry policy. Validation failures are
// recorded, never retried; BatchAborted only when every request fails at
// the transport level.
BatchResult run_batch(const std::vector<ReportRecord>& corpus,
                      Transport& transport, const BatchPolicy& policy = {});

// Flat-record CSV (with provenance column), rows sorted by study_id;
// loading the file back reproduces the corpus exactly.
void aggregate_to_csv(const LabeledCorpus& lc, const std::string& path);

// Live OpenAI-style chat-completions client configured from
// ANNOTATOR_ENDPOINT, ANNOTATOR_KEY and ANNOTATOR_MODEL.
std::unique_ptr<Transport> make_http_transport();
std::unique_ptr<Transport> make_http_transport(const std::string& endpoint,
                                               const std::string& api_key,
                                               const std::string& model);

}  // namespace fxlabel
