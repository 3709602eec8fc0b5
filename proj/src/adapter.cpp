#include "threeyes/io/adapter.hpp"

#include <httplib.h>

#include <chrono>
#include <cstdlib>
#include <json.hpp>
#include <map>
#include <thread>

#include "threeyes/core/validate.hpp"
#include "threeyes/io/record_json.hpp"
#include "threeyes/util/errors.hpp"
#include "threeyes/util/kvconfig.hpp"

namespace threeyes::io {

using nlohmann::json;

void AdapterConfig::validate() const {
  if (base_url.empty()) throw ConfigError("adapter: base_url required");
  if (page_size < 1) throw ConfigError("adapter: page_size must be >= 1");
  if (retry_limit < 1 || retry_limit > 10) {
    throw ConfigError("adapter: retry_limit must be in [1, 10]");
  }
  if (backoff_initial_ms < 0) throw ConfigError("adapter: backoff must be >= 0");
}

AdapterConfig load_adapter_config(const std::string& path) {
  util::KvConfig kv = util::KvConfig::load(path);
  AdapterConfig cfg;
  cfg.base_url = kv.get_string("base_url", "");
  cfg.auth_token = kv.get_string("auth_token", "");
  std::string cycles = kv.get_string("cycle_ids", "");
  if (!cycles.empty()) {
    std::size_t pos = 0;
    while (pos <= cycles.size()) {
      std::size_t comma = cycles.find(',', pos);
      std::string part = util::trim(
          comma == std::string::npos ? cycles.substr(pos) : cycles.substr(pos, comma - pos));
      if (!part.empty()) cfg.cycle_ids.push_back(part);
      if (comma == std::string::npos) break;
      pos = comma + 1;
    }
  }
  cfg.page_size = int(kv.get_int("page_size", cfg.page_size));
  cfg.retry_limit = int(kv.get_int("retry_limit", cfg.retry_limit));
  cfg.backoff_initial_ms = int(kv.get_int("backoff_initial_ms", cfg.backoff_initial_ms));
  cfg.validate();
  return cfg;
}

namespace {

class PagedClient {
 public:
  explicit PagedClient(const AdapterConfig& cfg) : cfg_(cfg) {
    token_ = cfg.auth_token;
    if (token_.empty()) {
      if (const char* env = std::getenv("THREEYES_TOKEN")) token_ = env;
    }
  }

  /// All items of one endpoint, following cursors. `first_page_extra`
  /// receives the envelope of the first page when non-null.
  std::vector<json> fetch_all(const std::string& path, const httplib::Params& base_params,
                              json* first_page_extra = nullptr) {
    std::vector<json> items;
    std::string cursor;
    bool first = true;
    while (true) {
      httplib::Params params = base_params;
      params.emplace("limit", std::to_string(cfg_.page_size));
      if (!cursor.empty()) params.emplace("cursor", cursor);
      json page = get_with_retry(path, params);

      if (first && first_page_extra) *first_page_extra = page;
      first = false;

      if (!page.contains("items") || !page["items"].is_array()) {
        throw TransportError(path + ": malformed page (missing items)");
      }
      for (json& item : page["items"]) items.push_back(std::move(item));
      if (!page.value("has_more", false)) break;
      if (!page.contains("cursor") || !page["cursor"].is_string()) {
        throw TransportError(path + ": has_more without cursor");
      }
      cursor = page["cursor"].get<std::string>();
    }
    return items;
  }

 private:
  json get_with_retry(const std::string& path, const httplib::Params& params) {
    std::string query = httplib::detail::params_to_query_str(params);
    std::string target = path + (query.empty() ? "" : "?" + query);
    int backoff = cfg_.backoff_initial_ms;
    std::string last_error;

    for (int attempt = 1; attempt <= cfg_.retry_limit; ++attempt) {
      if (attempt > 1) {
        std::this_thread::sleep_for(std::chrono::milliseconds(backoff));
        backoff *= 2;
      }
      httplib::Client client(cfg_.base_url);
      client.set_connection_timeout(5);
      client.set_read_timeout(10);
      httplib::Headers headers = {{"Authorization", "Bearer " + token_}};
      httplib::Result res = client.Get(target, headers);

      if (!res) {
        last_error = "transport failure (" + httplib::to_string(res.error()) + ")";
        continue;
      }
      if (res->status == 401 || res->status == 403) {
        throw AuthError(path + ": server rejected token (HTTP " +
                        std::to_string(res->status) + ")");
      }
      if (res->status != 200) {
        last_error = "HTTP " + std::to_string(res->status);
        continue;
      }
      try {
        return json::parse(res->body);
      } catch (const json::parse_error& e) {
        last_error = std::string("malformed body: ") + e.what();
        continue;
      }
    }
    throw TransportError(target + ": giving up after " + std::to_string(cfg_.retry_limit) +
                         " attempts: " + last_error);
  }

  const AdapterConfig& cfg_;
  std::string token_;
};

}  // namespace

VenueSnapshot fetch_snapshot(const AdapterConfig& cfg) {
  cfg.validate();
  PagedClient client(cfg);
  VenueSnapshot s;

  for (const json& j : client.fetch_all("/v1/cycles", {})) {
    Cycle c = cycle_from_json(j, "/v1/cycles");
    if (cfg.cycle_ids.empty() ||
        std::find(cfg.cycle_ids.begin(), cfg.cycle_ids.end(), c.id) != cfg.cycle_ids.end()) {
      s.cycles.push_back(std::move(c));
    }
  }

  std::map<std::pair<std::string, std::string>, ReviewerConsent> consents;
  for (const Cycle& cycle : s.cycles) {
    httplib::Params params = {{"cycle", cycle.id}};
    for (const json& j : client.fetch_all("/v1/submissions", params)) {
      s.submissions.push_back(submission_from_json(j, "/v1/submissions"));
    }
    for (const json& j : client.fetch_all("/v1/reviews", params)) {
      s.reviews.push_back(review_from_json(j, "/v1/reviews"));
    }
    for (const json& j : client.fetch_all("/v1/reviewer_consents", params)) {
      ReviewerConsent c = reviewer_consent_from_json(j, "/v1/reviewer_consents");
      auto key = std::make_pair(c.reviewer_id, c.cycle_id);
      auto it = consents.find(key);
      if (it == consents.end()) {
        consents.emplace(key, std::move(c));
      } else if (c.decided_at.value_or(INT64_MIN) >= it->second.decided_at.value_or(INT64_MIN)) {
        it->second = std::move(c);
      }
    }
    for (const json& j : client.fetch_all("/v1/author_decisions", params)) {
      s.author_decisions.push_back(author_decision_from_json(j, "/v1/author_decisions"));
    }
  }
  for (auto& [_, c] : consents) s.reviewer_consents.push_back(std::move(c));

  json identity_extra;
  std::vector<json> identity_items = client.fetch_all("/v1/identity_map", {}, &identity_extra);
  if (identity_extra.value("present", false)) {
    std::map<std::string, std::string> map;
    for (const json& j : identity_items) {
      map[j.at("reviewer_id").get<std::string>()] = j.at("stable_id").get<std::string>();
    }
    s.identity_map = std::move(map);
  }

  std::vector<Violation> violations = validate_snapshot(s);
  if (!violations.empty()) {
    throw IntegrityError("fetched snapshot failed validation: " + to_string(violations.front()));
  }
  return s;
}

}  // namespace threeyes::io
