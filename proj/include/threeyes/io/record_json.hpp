#pragma once

#include <json.hpp>

#include "threeyes/core/types.hpp"

namespace threeyes::io {

// JSON record shapes shared by the fixture format and the adapter wire
// format. Object keys are emitted sorted, which keeps serialization
// deterministic.

nlohmann::json to_json(const Cycle& c);
nlohmann::json to_json(const Submission& s);
nlohmann::json to_json(const ReviewRecord& r);
nlohmann::json to_json(const ReviewerConsent& c);
nlohmann::json to_json(const AuthorDecision& d);

/// `context` is prepended to error messages, e.g. "reviews.jsonl:17".
Cycle cycle_from_json(const nlohmann::json& j, const std::string& context);
Submission submission_from_json(const nlohmann::json& j, const std::string& context);
ReviewRecord review_from_json(const nlohmann::json& j, const std::string& context);
ReviewerConsent reviewer_consent_from_json(const nlohmann::json& j, const std::string& context);
AuthorDecision author_decision_from_json(const nlohmann::json& j, const std::string& context);

}  // namespace threeyes::io
