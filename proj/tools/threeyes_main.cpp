// Command-line pipeline: ingest -> run -> stats/export, plus the simulator.
#include <CLI11.hpp>

#include <chrono>
#include <ctime>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <optional>

#include "threeyes/analytics/analytics.hpp"
#include "threeyes/core/validate.hpp"
#include "threeyes/exporter/exporter.hpp"
#include "threeyes/io/adapter.hpp"
#include "threeyes/io/fixture.hpp"
#include "threeyes/licensing/licensing.hpp"
#include "threeyes/store/store.hpp"
#include "threeyes/synth/generator.hpp"
#include "threeyes/util/errors.hpp"
#include "threeyes/workflow/workflow.hpp"

namespace {

namespace fs = std::filesystem;
using namespace threeyes;
using nlohmann::json;

threeyes::Timestamp now_ms() {
  return std::chrono::duration_cast<std::chrono::milliseconds>(
             std::chrono::system_clock::now().time_since_epoch())
      .count();
}

int utc_year(threeyes::Timestamp ms) {
  std::time_t seconds = ms / 1000;
  std::tm tm_utc{};
  gmtime_r(&seconds, &tm_utc);
  return tm_utc.tm_year + 1900;
}

void write_text(const fs::path& path, const std::string& text) {
  if (!path.parent_path().empty()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out.write(text.data(), std::streamsize(text.size()));
}

std::vector<std::string> split_commas(const std::string& list) {
  std::vector<std::string> out;
  std::size_t pos = 0;
  while (pos <= list.size()) {
    std::size_t comma = list.find(',', pos);
    std::string part =
        comma == std::string::npos ? list.substr(pos) : list.substr(pos, comma - pos);
    part = util::trim(part);
    if (!part.empty()) out.push_back(part);
    if (comma == std::string::npos) break;
    pos = comma + 1;
  }
  return out;
}

std::map<std::string, long> tier_counts(const std::vector<workflow::Assignment>& assignments,
                                        workflow::ArtifactKind kind) {
  std::map<std::string, long> counts = {{"excluded", 0},
                                        {"protected1y", 0},
                                        {"protected2y", 0},
                                        {"public3y", 0}};
  for (const workflow::Assignment& a : assignments) {
    if (a.kind == kind) counts[to_string(a.tier)] += 1;
  }
  return counts;
}

void print_tier_counts(const std::vector<workflow::Assignment>& assignments) {
  auto reviews = tier_counts(assignments, workflow::ArtifactKind::review);
  auto drafts = tier_counts(assignments, workflow::ArtifactKind::draft);
  std::cout << "reviews:";
  for (const auto& [tier, n] : reviews) std::cout << " " << tier << "=" << n;
  std::cout << "\ndrafts:";
  for (const auto& [tier, n] : drafts) std::cout << " " << tier << "=" << n;
  std::cout << "\n";
}

licensing::GrantStore record_all_grants(const std::vector<workflow::Assignment>& assignments,
                                        threeyes::Timestamp clock) {
  licensing::GrantStore grants;
  for (const workflow::Assignment& a : assignments) {
    bool donated = a.kind == workflow::ArtifactKind::review ? a.tier >= Tier::Protected1Y
                                                            : a.tier >= Tier::Public3Y;
    if (donated) grants.record_grant(a, clock);
  }
  return grants;
}

void persist_derived(store::SnapshotStore& snapshot_store, const std::string& hash,
                     const std::vector<workflow::Assignment>& assignments,
                     const licensing::GrantStore& grants) {
  store::StoreLock lock(snapshot_store.root(), true);
  fs::path dir = snapshot_store.derived_dir(hash);
  fs::create_directories(dir);

  std::string assignments_text;
  for (const workflow::Assignment& a : assignments) {
    json j{{"artifact_id", a.artifact_id},
           {"kind", to_string(a.kind)},
           {"tier", to_string(a.tier)},
           {"derivation", a.derivation}};
    assignments_text += j.dump() + "\n";
  }
  write_text(dir / "assignments.jsonl", assignments_text);

  std::string grants_text;
  for (const auto& [_, g] : grants.grants()) {
    json j{{"artifact_id", g.artifact_id},
           {"license_id", g.license_id},
           {"licensor", g.licensor},
           {"granted_at", g.granted_at},
           {"agreement_kind", to_string(g.agreement_kind)},
           {"agreement_text_hash", g.agreement_text_hash},
           {"irrevocable", g.irrevocable}};
    grants_text += j.dump() + "\n";
  }
  write_text(dir / "grants.jsonl", grants_text);
}

struct CommonOpts {
  std::optional<std::string> store_dir;
};

int cmd_ingest(const CommonOpts& common, const std::string& fixture_path,
               const std::string& adapter_config) {
  VenueSnapshot snapshot;
  std::vector<std::string> warnings;
  if (!fixture_path.empty()) {
    snapshot = io::load_fixture(fixture_path, &warnings);
  } else {
    io::AdapterConfig cfg = io::load_adapter_config(adapter_config);
    snapshot = io::fetch_snapshot(cfg);
  }
  for (const std::string& w : warnings) std::cerr << "warning: " << w << "\n";

  store::SnapshotStore snapshot_store(store::SnapshotStore::resolve_root(common.store_dir));
  std::string hash = snapshot_store.put(snapshot);
  std::cout << "cycles=" << snapshot.cycles.size() << " submissions=" << snapshot.submissions.size()
            << " reviews=" << snapshot.reviews.size()
            << " reviewer_consents=" << snapshot.reviewer_consents.size()
            << " author_decisions=" << snapshot.author_decisions.size() << "\n";
  std::cout << "snapshot " << hash << "\n";
  return 0;
}

int cmd_run(const CommonOpts& common, const std::string& hash_or_prefix,
            std::optional<threeyes::Timestamp> clock) {
  store::SnapshotStore snapshot_store(store::SnapshotStore::resolve_root(common.store_dir));
  std::string hash = snapshot_store.resolve(hash_or_prefix);
  VenueSnapshot snapshot = snapshot_store.get(hash);

  std::vector<workflow::Assignment> assignments = workflow::run_workflow(snapshot);
  licensing::GrantStore grants = record_all_grants(assignments, clock.value_or(now_ms()));
  persist_derived(snapshot_store, hash, assignments, grants);

  print_tier_counts(assignments);
  std::cout << "grants=" << grants.size() << "\n";
  std::cout << "snapshot " << hash << "\n";
  return 0;
}

int cmd_stats(const CommonOpts& common, const std::string& hash_or_prefix,
              const std::string& tiers, const std::string& out_path) {
  std::vector<std::string> tokens = split_commas(tiers);
  if (tokens.empty()) throw std::invalid_argument("--tiers must name at least one subset");
  for (const std::string& token : tokens) analytics::tier_filter_from_token(token);

  store::SnapshotStore snapshot_store(store::SnapshotStore::resolve_root(common.store_dir));
  VenueSnapshot snapshot = snapshot_store.get(hash_or_prefix);
  std::vector<workflow::Assignment> assignments = workflow::run_workflow(snapshot);
  analytics::CampaignStats stats = analytics::compute_campaign_stats(snapshot, assignments, tokens);

  fs::path json_path = out_path;
  write_text(json_path, analytics::stats_to_json(stats));
  fs::path csv_path = json_path;
  csv_path.replace_extension(".csv");
  write_text(csv_path, analytics::plot_csv(stats));

  for (const analytics::CountTableRow& row : stats.rows) {
    std::cout << row.subset_label << ": submissions=" << row.n_submissions
              << " reviews=" << row.n_reviews << " reviewers=" << row.n_reviewers
              << (row.reviewers_exact ? "" : " (upper bound)") << "\n";
  }
  std::cout << "stats " << json_path.string() << "\n";
  std::cout << "plot " << csv_path.string() << "\n";
  return 0;
}

int cmd_export(const CommonOpts& common, const std::string& hash_or_prefix,
               const std::string& out_dir, std::string release_id,
               std::optional<threeyes::Timestamp> clock, std::optional<int> year,
               const std::string& attribution_path, const std::string& withdrawn_path,
               const std::string& prior_dir, bool protected_report) {
  store::SnapshotStore snapshot_store(store::SnapshotStore::resolve_root(common.store_dir));
  std::string hash = snapshot_store.resolve(hash_or_prefix);
  VenueSnapshot snapshot = snapshot_store.get(hash);
  std::vector<workflow::Assignment> assignments = workflow::run_workflow(snapshot);

  threeyes::Timestamp clock_ms = clock.value_or(now_ms());
  licensing::GrantStore grants = record_all_grants(assignments, clock_ms);

  licensing::AttributionRegistry registry;
  if (!attribution_path.empty()) {
    std::ifstream in(attribution_path);
    if (!in) throw ParseError(attribution_path + ": cannot open");
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
      ++lineno;
      if (util::trim(line).empty()) continue;
      json j;
      try {
        j = json::parse(line);
      } catch (const json::parse_error& e) {
        throw ParseError(attribution_path + ":" + std::to_string(lineno) + ": " + e.what());
      }
      registry.add(snapshot, j.at("principal_id").get<std::string>(),
                   j.at("display_name").get<std::string>());
    }
  }

  exporter::ExportOptions options;
  options.release_id = release_id.empty() ? "rel-" + hash.substr(0, 12) : release_id;
  options.clock_ms = clock_ms;
  options.notice_year = year.value_or(utc_year(clock_ms));
  if (!withdrawn_path.empty()) {
    std::ifstream in(withdrawn_path);
    if (!in) throw ParseError(withdrawn_path + ": cannot open");
    std::string line;
    while (std::getline(in, line)) {
      std::string id = util::trim(line);
      if (!id.empty()) options.withdrawn.push_back(id);
    }
  }
  if (!prior_dir.empty()) options.prior_release_dir = fs::path(prior_dir);

  exporter::ExportManifest manifest =
      exporter::export_public(snapshot, assignments, grants, registry, options, out_dir);
  if (protected_report) {
    exporter::export_protected_report(snapshot, assignments, {},
                                      fs::path(out_dir) / "protected_report.json");
  }

  std::cout << "release " << manifest.release_id << ": reviews=" << manifest.reviews_exported
            << " drafts=" << manifest.drafts_exported
            << " tombstones=" << manifest.tombstones.size() << "\n";
  std::cout << "bundle " << out_dir << "\n";
  return 0;
}

int cmd_simulate(const std::string& config_path, const std::string& out_dir,
                 const std::string& sweep_spec, std::optional<std::uint64_t> seed) {
  synth::GeneratorConfig cfg;
  if (!config_path.empty()) cfg = synth::GeneratorConfig::load(config_path);
  if (seed.has_value()) cfg.seed = *seed;
  cfg.validate();

  fs::create_directories(out_dir);

  if (!sweep_spec.empty()) {
    std::size_t eq = sweep_spec.find('=');
    if (eq == std::string::npos || eq == 0) {
      throw std::invalid_argument("--sweep expects FIELD=v1,v2,...");
    }
    std::string field = sweep_spec.substr(0, eq);
    std::vector<std::string> values = split_commas(sweep_spec.substr(eq + 1));
    if (values.empty()) throw std::invalid_argument("--sweep needs at least one value");
    std::vector<synth::SweepPoint> points = synth::sweep(cfg, field, values);
    fs::path csv_path = fs::path(out_dir) / "sweep.csv";
    write_text(csv_path, synth::sweep_csv(points, field));
    std::cout << "sweep " << csv_path.string() << " (" << points.size() << " points)\n";
    return 0;
  }

  VenueSnapshot snapshot = synth::generate_venue(cfg);
  io::save_fixture(snapshot, fs::path(out_dir) / "fixture");
  std::vector<workflow::Assignment> assignments = workflow::run_workflow(snapshot);
  analytics::CampaignStats stats = analytics::compute_campaign_stats(snapshot, assignments);
  write_text(fs::path(out_dir) / "stats.json", analytics::stats_to_json(stats));
  write_text(fs::path(out_dir) / "plot.csv", analytics::plot_csv(stats));

  print_tier_counts(assignments);
  std::cout << "fixture " << (fs::path(out_dir) / "fixture").string() << "\n";
  std::cout << "snapshot " << io::snapshot_hash(snapshot) << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Consent-gated peer-review data collection pipeline"};
  app.require_subcommand(1);

  CommonOpts common;
  std::string fixture_path, adapter_config;
  std::string snapshot_hash;
  std::optional<threeyes::Timestamp> clock;
  std::string tiers = "all,1y,2y,3y";
  std::string out_path;
  std::string release_id, attribution_path, withdrawn_path, prior_dir;
  std::optional<int> year;
  bool protected_report = false;
  std::string config_path, sweep_spec;
  std::optional<std::uint64_t> seed;

  auto add_store = [&common](CLI::App* cmd) {
    cmd->add_option("--store", common.store_dir,
                    "Store directory (default $THREEYES_STORE or ./.threeyes-store)");
  };

  CLI::App* ingest = app.add_subcommand("ingest", "Load, validate and persist a snapshot");
  CLI::Option* fixture_opt = ingest->add_option("--fixture", fixture_path, "Fixture bundle dir");
  CLI::Option* adapter_opt =
      ingest->add_option("--adapter", adapter_config, "Adapter config (key=value)");
  fixture_opt->excludes(adapter_opt);
  add_store(ingest);

  CLI::App* run = app.add_subcommand("run", "Run the consent workflow and record grants");
  run->add_option("--snapshot", snapshot_hash, "Snapshot hash (or unique prefix)")->required();
  run->add_option("--clock", clock, "Pin timestamps to this epoch-ms value");
  add_store(run);

  CLI::App* stats = app.add_subcommand("stats", "Compute per-tier statistics");
  stats->add_option("--snapshot", snapshot_hash, "Snapshot hash (or unique prefix)")->required();
  stats->add_option("--tiers", tiers, "Comma-separated subsets (all,1y,2y,3y or tier names)");
  stats->add_option("--out", out_path, "Output JSON path (CSV written beside it)")->required();
  add_store(stats);

  CLI::App* exp = app.add_subcommand("export", "Assemble a public release bundle");
  exp->add_option("--snapshot", snapshot_hash, "Snapshot hash (or unique prefix)")->required();
  exp->add_option("--out", out_path, "Release bundle directory")->required();
  exp->add_option("--release-id", release_id, "Release identifier (default rel-<hash12>)");
  exp->add_option("--clock", clock, "Pin created_at to this epoch-ms value");
  exp->add_option("--year", year, "Copyright notice year (default from clock)");
  exp->add_option("--attribution", attribution_path,
                  "JSONL of {principal_id, display_name} for attribution opt-ins");
  exp->add_option("--withdrawn", withdrawn_path, "File of withdrawn artifact ids, one per line");
  exp->add_option("--prior", prior_dir, "Previous release bundle dir (tombstone source)");
  exp->add_flag("--protected-report", protected_report,
                "Also write aggregate-only protected_report.json");
  add_store(exp);

  CLI::App* simulate = app.add_subcommand("simulate", "Generate a synthetic venue");
  simulate->add_option("--config", config_path, "Generator config (key = value)");
  simulate->add_option("--out", out_path, "Output directory")->required();
  simulate->add_option("--sweep", sweep_spec, "FIELD=v1,v2,... parameter sweep");
  simulate->add_option("--seed", seed, "Override the config seed");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (ingest->parsed()) {
      if (fixture_path.empty() == adapter_config.empty()) {
        std::cerr << "ingest: exactly one of --fixture / --adapter is required\n";
        return 2;
      }
      return cmd_ingest(common, fixture_path, adapter_config);
    }
    if (run->parsed()) return cmd_run(common, snapshot_hash, clock);
    if (stats->parsed()) return cmd_stats(common, snapshot_hash, tiers, out_path);
    if (exp->parsed()) {
      return cmd_export(common, snapshot_hash, out_path, release_id, clock, year,
                        attribution_path, withdrawn_path, prior_dir, protected_report);
    }
    if (simulate->parsed()) return cmd_simulate(config_path, out_path, sweep_spec, seed);
  } catch (const ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const IntegrityError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const StoreError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
