#include <cstdlib>

#include <httplib.h>
#include <json.hpp>

#include "fxlabel/relabel.hpp"

namespace fxlabel {

namespace {

using nlohmann::json;

std::string env_or(const char* name, const std::string& fallback) {
  const char* value = std::getenv(name);
  return value ? value : fallback;
}

class HttpTransport : public Transport {
 public:
  HttpTransport(std::string endpoint, std::string api_key, std::string model)
      : endpoint_(std::move(endpoint)),
        api_key_(std::move(api_key)),
        model_(std::move(model)) {}

  Reply send(const AnnotationRequest& request) override {
    json body;
    body["model"] = model_;
    body["messages"] = json::array({
        json{{"role", "system"}, {"content", request.system_prompt}},
        json{{"role", "user"}, {"content", request.user_prompt}},
    });
    body["response_format"] = json{{"type", "json_object"}};
    body["temperature"] = 0;

    httplib::Client client(endpoint_);
    client.set_connection_timeout(5, 0);
    client.set_read_timeout(60, 0);
    httplib::Headers headers;
    if (!api_key_.empty()) {
      headers.emplace("Authorization", "Bearer " + api_key_);
    }
    const httplib::Result res = client.Post("/v1/chat/completions", headers,
                                            body.dump(), "application/json");
    if (!res) {
      return Reply{Status::TransientFailure,
                   "connection error: " + httplib::to_string(res.error())};
    }
    if (res->status == 429 || res->status >= 500) {
      return Reply{Status::TransientFailure,
                   "HTTP " + std::to_string(res->status)};
    }
    if (res->status != 200) {
      return Reply{Status::PermanentFailure,
                   "HTTP " + std::to_string(res->status) + ": " + res->body};
    }
    try {
      const json envelope = json::parse(res->body);
      return Reply{Status::Ok,
                   envelope.at("choices").at(0).at("message").at("content")
                       .get<std::string>()};
    } catch (const json::exception& e) {
      return Reply{Status::PermanentFailure,
                   std::string("malformed completion envelope: ") + e.what()};
    }
  }

 private:
  std::string endpoint_;
  std::string api_key_;
  std::string model_;
};

}  // namespace

std::unique_ptr<Transport> make_http_transport(const std::string& endpoint,
                                               const std::string& api_key,
                                               const std::string& model) {
  return std::make_unique<HttpTransport>(endpoint, api_key, model);
}

std::unique_ptr<Transport> make_http_transport() {
  const std::string endpoint = env_or("ANNOTATOR_ENDPOINT", "");
  if (endpoint.empty()) {
    throw IoError("ANNOTATOR_ENDPOINT is not set (expected an origin such as "
                  "http://localhost:8080)");
  }
  return make_http_transport(endpoint, env_or("ANNOTATOR_KEY", ""),
                             env_or("ANNOTATOR_MODEL", "default"));
}

}  // namespace fxlabel
