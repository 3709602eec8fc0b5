#include "threeyes/io/record_json.hpp"

#include "threeyes/util/errors.hpp"

namespace threeyes::io {

using nlohmann::json;

namespace {

[[noreturn]] void fail(const std::string& context, const std::string& what) {
  throw ParseError(context + ": " + what);
}

const json& require(const json& j, const char* key, const std::string& context) {
  auto it = j.find(key);
  if (it == j.end()) fail(context, std::string("missing field '") + key + "'");
  return *it;
}

std::string require_string(const json& j, const char* key, const std::string& context) {
  const json& v = require(j, key, context);
  if (!v.is_string()) fail(context, std::string("field '") + key + "' must be a string");
  return v.get<std::string>();
}

std::int64_t require_int(const json& j, const char* key, const std::string& context) {
  const json& v = require(j, key, context);
  if (!v.is_number_integer()) fail(context, std::string("field '") + key + "' must be an integer");
  return v.get<std::int64_t>();
}

bool require_bool(const json& j, const char* key, const std::string& context) {
  const json& v = require(j, key, context);
  if (!v.is_boolean()) fail(context, std::string("field '") + key + "' must be a boolean");
  return v.get<bool>();
}

std::optional<std::string> optional_string(const json& j, const char* key,
                                           const std::string& context) {
  auto it = j.find(key);
  if (it == j.end() || it->is_null()) return std::nullopt;
  if (!it->is_string()) fail(context, std::string("field '") + key + "' must be a string");
  return it->get<std::string>();
}

std::optional<Timestamp> optional_timestamp(const json& j, const char* key,
                                            const std::string& context) {
  auto it = j.find(key);
  if (it == j.end() || it->is_null()) return std::nullopt;
  if (!it->is_number_integer())
    fail(context, std::string("field '") + key + "' must be an integer timestamp");
  return it->get<std::int64_t>();
}

int small_int(const json& j, const char* key, const std::string& context) {
  std::int64_t v = require_int(j, key, context);
  if (v < INT32_MIN || v > INT32_MAX) fail(context, std::string("field '") + key + "' out of range");
  return int(v);
}

}  // namespace

json to_json(const Cycle& c) {
  return json{{"id", c.id}, {"label", c.label}};
}

json to_json(const Submission& s) {
  json j{{"id", s.id},
         {"cycle_id", s.cycle_id},
         {"author_ids", s.author_ids},
         {"acceptance", to_string(s.acceptance)}};
  if (s.draft_ref) j["draft_ref"] = *s.draft_ref;
  if (s.venue) j["venue"] = *s.venue;
  return j;
}

json to_json(const ReviewRecord& r) {
  return json{{"id", r.id},
              {"submission_id", r.submission_id},
              {"reviewer_id", r.reviewer_id},
              {"cycle_id", r.cycle_id},
              {"text_fields",
               json{{"paper_summary", r.text_fields.paper_summary},
                    {"summary_of_strengths", r.text_fields.summary_of_strengths},
                    {"summary_of_weaknesses", r.text_fields.summary_of_weaknesses},
                    {"comments_suggestions_typos", r.text_fields.comments_suggestions_typos},
                    {"best_paper_justification", r.text_fields.best_paper_justification},
                    {"ethical_concerns", r.text_fields.ethical_concerns}}},
              {"overall", r.overall.value()},
              {"confidence", r.confidence},
              {"best_paper", to_string(r.best_paper)},
              {"replicability", r.replicability},
              {"datasets", r.datasets},
              {"software", r.software},
              {"author_identity_guess", r.author_identity_guess},
              {"submitted_at", r.submitted_at}};
}

json to_json(const ReviewerConsent& c) {
  json j{{"reviewer_id", c.reviewer_id},
         {"cycle_id", c.cycle_id},
         {"decision", to_string(c.decision)},
         {"attribution_requested", c.attribution_requested}};
  if (c.decided_at) j["decided_at"] = *c.decided_at;
  return j;
}

json to_json(const AuthorDecision& d) {
  json j{{"submission_id", d.submission_id}, {"decision", to_string(d.decision)}};
  if (d.decided_at) j["decided_at"] = *d.decided_at;
  return j;
}

Cycle cycle_from_json(const json& j, const std::string& context) {
  Cycle c;
  c.id = require_string(j, "id", context);
  c.label = require_string(j, "label", context);
  return c;
}

Submission submission_from_json(const json& j, const std::string& context) {
  Submission s;
  s.id = require_string(j, "id", context);
  s.cycle_id = require_string(j, "cycle_id", context);
  const json& authors = require(j, "author_ids", context);
  if (!authors.is_array()) fail(context, "field 'author_ids' must be an array");
  for (const json& a : authors) {
    if (!a.is_string()) fail(context, "author_ids entries must be strings");
    s.author_ids.insert(a.get<std::string>());
  }
  s.draft_ref = optional_string(j, "draft_ref", context);
  try {
    s.acceptance = acceptance_from_string(require_string(j, "acceptance", context));
  } catch (const std::invalid_argument& e) {
    fail(context, e.what());
  }
  s.venue = optional_string(j, "venue", context);
  return s;
}

ReviewRecord review_from_json(const json& j, const std::string& context) {
  ReviewRecord r;
  r.id = require_string(j, "id", context);
  r.submission_id = require_string(j, "submission_id", context);
  r.reviewer_id = require_string(j, "reviewer_id", context);
  r.cycle_id = require_string(j, "cycle_id", context);

  const json& text = require(j, "text_fields", context);
  if (!text.is_object()) fail(context, "field 'text_fields' must be an object");
  r.text_fields.paper_summary = require_string(text, "paper_summary", context);
  r.text_fields.summary_of_strengths = require_string(text, "summary_of_strengths", context);
  r.text_fields.summary_of_weaknesses = require_string(text, "summary_of_weaknesses", context);
  r.text_fields.comments_suggestions_typos =
      require_string(text, "comments_suggestions_typos", context);
  r.text_fields.best_paper_justification =
      require_string(text, "best_paper_justification", context);
  r.text_fields.ethical_concerns = require_string(text, "ethical_concerns", context);

  const json& overall = require(j, "overall", context);
  if (!overall.is_number()) fail(context, "field 'overall' must be a number");
  try {
    r.overall = encode_overall(overall.get<double>());
  } catch (const std::invalid_argument& e) {
    fail(context, e.what());
  }
  r.confidence = small_int(j, "confidence", context);
  try {
    r.best_paper = best_paper_from_string(require_string(j, "best_paper", context));
  } catch (const std::invalid_argument& e) {
    fail(context, e.what());
  }
  r.replicability = small_int(j, "replicability", context);
  r.datasets = small_int(j, "datasets", context);
  r.software = small_int(j, "software", context);
  r.author_identity_guess = small_int(j, "author_identity_guess", context);
  r.submitted_at = require_int(j, "submitted_at", context);
  return r;
}

ReviewerConsent reviewer_consent_from_json(const json& j, const std::string& context) {
  ReviewerConsent c;
  c.reviewer_id = require_string(j, "reviewer_id", context);
  c.cycle_id = require_string(j, "cycle_id", context);
  try {
    c.decision = reviewer_decision_from_string(require_string(j, "decision", context));
  } catch (const std::invalid_argument& e) {
    fail(context, e.what());
  }
  c.attribution_requested = require_bool(j, "attribution_requested", context);
  c.decided_at = optional_timestamp(j, "decided_at", context);
  return c;
}

AuthorDecision author_decision_from_json(const json& j, const std::string& context) {
  AuthorDecision d;
  d.submission_id = require_string(j, "submission_id", context);
  try {
    d.decision = author_choice_from_string(require_string(j, "decision", context));
  } catch (const std::invalid_argument& e) {
    fail(context, e.what());
  }
  d.decided_at = optional_timestamp(j, "decided_at", context);
  return d;
}

}  // namespace threeyes::io
