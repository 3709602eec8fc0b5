#include "threeyes/io/mock_server.hpp"

#include <httplib.h>

#include <algorithm>
#include <json.hpp>

#include "threeyes/io/record_json.hpp"

namespace threeyes::io {

using nlohmann::json;

struct MockServer::Impl {
  httplib::Server server;
};

MockServer::MockServer(VenueSnapshot snapshot, std::string token)
    : impl_(std::make_unique<Impl>()),
      snapshot_(std::move(snapshot)),
      token_(std::move(token)) {}

MockServer::~MockServer() { stop(); }

std::string MockServer::base_url() const {
  return "http://127.0.0.1:" + std::to_string(port_);
}

namespace {

long param_long(const httplib::Request& req, const char* name, long fallback) {
  if (!req.has_param(name)) return fallback;
  try {
    return std::stol(req.get_param_value(name));
  } catch (const std::exception&) {
    return fallback;
  }
}

}  // namespace

int MockServer::start() {
  auto authorized = [this](const httplib::Request& req, httplib::Response& res) {
    std::string expected = "Bearer " + token_;
    if (req.get_header_value("Authorization") != expected) {
      res.status = 401;
      res.set_content(R"({"error":"invalid token"})", "application/json");
      return false;
    }
    return true;
  };

  // Serves items[lo, lo+limit) plus pagination envelope, with optional
  // truncation injection.
  auto paged = [this, authorized](const httplib::Request& req, httplib::Response& res,
                                  const std::vector<json>& items, json extra = json::object()) {
    if (!authorized(req, res)) return;
    int count = ++request_count_;
    long cursor = param_long(req, "cursor", 0);
    long limit = std::max(1L, param_long(req, "limit", 100));
    cursor = std::clamp(cursor, 0L, long(items.size()));
    long end = std::min(long(items.size()), cursor + limit);

    json body = std::move(extra);
    body["items"] = json::array();
    for (long i = cursor; i < end; ++i) body["items"].push_back(items[std::size_t(i)]);
    body["has_more"] = end < long(items.size());
    if (end < long(items.size())) body["cursor"] = std::to_string(end);

    std::string payload = body.dump();
    int cut = truncate_after_.load();
    if (cut >= 0 && count > cut) {
      payload = payload.substr(0, payload.size() / 2);
    }
    res.set_content(payload, "application/json");
  };

  auto by_cycle = [](const httplib::Request& req, const std::string& cycle_id) {
    return !req.has_param("cycle") || req.get_param_value("cycle") == cycle_id;
  };

  impl_->server.Get("/v1/cycles", [this, paged](const httplib::Request& req,
                                                httplib::Response& res) {
    std::vector<json> items;
    for (const Cycle& c : snapshot_.cycles) items.push_back(to_json(c));
    paged(req, res, items);
  });

  impl_->server.Get("/v1/submissions", [this, paged, by_cycle](const httplib::Request& req,
                                                               httplib::Response& res) {
    std::vector<json> items;
    for (const Submission& s : snapshot_.submissions) {
      if (by_cycle(req, s.cycle_id)) items.push_back(to_json(s));
    }
    paged(req, res, items);
  });

  impl_->server.Get("/v1/reviews", [this, paged, by_cycle](const httplib::Request& req,
                                                           httplib::Response& res) {
    std::vector<json> items;
    for (const ReviewRecord& r : snapshot_.reviews) {
      if (by_cycle(req, r.cycle_id)) items.push_back(to_json(r));
    }
    paged(req, res, items);
  });

  impl_->server.Get("/v1/reviewer_consents", [this, paged, by_cycle](const httplib::Request& req,
                                                                     httplib::Response& res) {
    std::vector<json> items;
    for (const ReviewerConsent& c : snapshot_.reviewer_consents) {
      if (by_cycle(req, c.cycle_id)) items.push_back(to_json(c));
    }
    paged(req, res, items);
  });

  impl_->server.Get("/v1/author_decisions", [this, paged](const httplib::Request& req,
                                                          httplib::Response& res) {
    std::string cycle = req.has_param("cycle") ? req.get_param_value("cycle") : "";
    std::vector<json> items;
    for (const AuthorDecision& d : snapshot_.author_decisions) {
      if (!cycle.empty()) {
        auto sub = std::find_if(snapshot_.submissions.begin(), snapshot_.submissions.end(),
                                [&d](const Submission& s) { return s.id == d.submission_id; });
        if (sub == snapshot_.submissions.end() || sub->cycle_id != cycle) continue;
      }
      items.push_back(to_json(d));
    }
    paged(req, res, items);
  });

  impl_->server.Get("/v1/identity_map", [this, paged](const httplib::Request& req,
                                                      httplib::Response& res) {
    std::vector<json> items;
    if (snapshot_.identity_map.has_value()) {
      for (const auto& [reviewer, stable] : *snapshot_.identity_map) {
        items.push_back(json{{"reviewer_id", reviewer}, {"stable_id", stable}});
      }
    }
    paged(req, res, items,
          json{{"present", snapshot_.identity_map.has_value()}});
  });

  port_ = impl_->server.bind_to_any_port("127.0.0.1");
  thread_ = std::thread([this] { impl_->server.listen_after_bind(); });
  impl_->server.wait_until_ready();
  return port_;
}

void MockServer::stop() {
  if (thread_.joinable()) {
    impl_->server.stop();
    thread_.join();
  }
}

}  // namespace threeyes::io
