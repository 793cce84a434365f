#pragma once

// Verification campaigns. Each target enumerates or samples instances, runs the
// relevant checks and collects certificates for failures, findings and exemplars.
// Work is split into items that run on a thread pool; results are merged in item
// order and every random instance draws from its own generator seeded by
// (seed, target, index), so the report does not depend on the number of jobs.

#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "matchlab/abelian.hpp"
#include "matchlab/codec.hpp"

namespace matchlab {

struct CampaignConfig {
  std::string theorem;
  std::string mode = "random";  // "exhaustive" or "random"
  std::uint64_t trials = 1000;  // total for group targets, per field configuration for linear targets
  std::uint64_t seed = 0;
  unsigned jobs = 1;
  std::string out_dir;  // empty: nothing is written

  std::uint64_t max_order = 0;  // 0 selects the target's default
  std::vector<GroupSpec> groups;
  std::vector<std::pair<std::uint32_t, unsigned>> fields;
  std::size_t max_dim = 0;
  std::uint64_t budget = 10'000'000;  // exhaustive instance count limit
  std::uint64_t basis_trials = 200;
  std::uint64_t max_exemplars = 2;  // per label
};

struct CampaignRecord {
  std::string role;  // failure, finding, exemplar
  std::string label;
  std::string detail;
  Json certificate;  // null when there is nothing to certify
  std::string path;  // relative to out_dir once stored
};

struct CampaignReport {
  CampaignConfig config;
  std::uint64_t instances = 0;
  std::map<std::string, std::uint64_t> stats;
  std::vector<CampaignRecord> failures;
  std::vector<CampaignRecord> findings;
  std::vector<CampaignRecord> exemplars;
  double wall_seconds = 0;

  bool passed() const { return failures.empty(); }
  /// Deterministic content: no wall time, no job count.
  Json to_json() const;
};

const std::vector<std::string>& campaign_targets();

/// Throws InvalidInput for a bad config and BudgetExceeded when an exhaustive count is too large.
CampaignReport run_campaign(const CampaignConfig& config);

CampaignConfig campaign_config_from_json(const Json& j);

/// splitmix64 finalizer, used to derive per-instance seeds.
std::uint64_t mix64(std::uint64_t x);
std::uint64_t instance_seed(std::uint64_t seed, const std::string& stream, std::uint64_t index);

struct HuntConfig {
  std::string domain;  // "group" or "linear"
  std::vector<GroupSpec> groups;
  std::uint64_t max_order = 6;  // used when groups is empty
  std::size_t max_size = 0;     // 0: up to #G - 1
  std::uint32_t p = 2;
  unsigned n = 4;
  std::size_t max_dim = 2;
  std::uint64_t budget = 10'000'000;
  std::uint64_t max_reports = 16;
};

struct HuntResult {
  Json findings;
  bool found = false;
  bool violation = false;  // an unmatched pair that is locally matched
};

HuntResult hunt_counterexample(const HuntConfig& config);
HuntConfig hunt_config_from_json(const Json& j);

}  // namespace matchlab
