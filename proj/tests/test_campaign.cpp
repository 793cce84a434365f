#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "matchlab/campaign.hpp"
#include "matchlab/certificate.hpp"
#include "matchlab/error.hpp"

using namespace matchlab;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::uint64_t choose(std::uint64_t n, std::uint64_t k) {
  std::uint64_t r = 1;
  for (std::uint64_t i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

CampaignConfig config(const std::string& theorem, const std::string& mode, std::uint64_t trials, unsigned jobs) {
  CampaignConfig c;
  c.theorem = theorem;
  c.mode = mode;
  c.trials = trials;
  c.seed = 42;
  c.jobs = jobs;
  return c;
}

}  // namespace

TEST_CASE("reports do not depend on the number of jobs") {
  for (const auto& [theorem, mode, trials] : std::vector<std::tuple<std::string, std::string, std::uint64_t>>{
           {"kneser", "random", 1500},
           {"thm31", "random", 600},
           {"thm24", "random", 40},
           {"thm51", "random", 60},
           {"remark56", "random", 40},
           {"thm35", "exhaustive", 0}}) {
    CAPTURE(theorem);
    auto base = fs::temp_directory_path() / ("matchlab_det_" + theorem);
    fs::remove_all(base);
    std::string dumps[2];
    for (unsigned j : {1u, 3u}) {
      auto c = config(theorem, mode, trials, j);
      c.out_dir = (base / std::to_string(j)).string();
      auto r = run_campaign(c);
      CHECK(r.passed());
      dumps[j == 3] = r.to_json().dump();
    }
    CHECK(dumps[0] == dumps[1]);
    CHECK(slurp(base / "1" / "report.json") == slurp(base / "3" / "report.json"));
    // Identical certificate stores.
    std::vector<std::string> names[2];
    for (int k = 0; k < 2; ++k) {
      auto dir = base / (k ? "3" : "1") / "certs";
      if (fs::exists(dir))
        for (const auto& e : fs::directory_iterator(dir)) names[k].push_back(e.path().filename().string());
      std::sort(names[k].begin(), names[k].end());
    }
    CHECK(names[0] == names[1]);
    for (const auto& n : names[0]) CHECK(verify_certificate_file((base / "1" / "certs" / n).string()).ok);
    fs::remove_all(base);
  }
}

TEST_CASE("different seeds draw different instances") {
  auto a = config("kneser", "random", 500, 1);
  auto b = a;
  b.seed = 43;
  CHECK(run_campaign(a).to_json()["stats"] != run_campaign(b).to_json()["stats"]);
  CHECK(instance_seed(1, "x", 0) != instance_seed(1, "x", 1));
  CHECK(instance_seed(1, "x", 0) != instance_seed(1, "y", 0));
  CHECK(instance_seed(1, "x", 0) == instance_seed(1, "x", 0));
}

TEST_CASE("exhaustive instance counts") {
  // Every (A, B) with #A = #B = k and 0 ∉ B: sum_k C(n,k) C(n-1,k) = C(2n-1, n-1) - 1.
  auto c = config("thm31", "exhaustive", 0, 1);
  c.max_order = 8;
  auto r = run_campaign(c);
  std::uint64_t expected = 0;
  for (std::uint64_t n = 2; n <= 8; ++n) expected += abelian_groups_of_order(n).size() * (choose(2 * n - 1, n - 1) - 1);
  CHECK(r.instances == expected);
  CHECK(r.passed());
  CHECK(r.stats["matched"] >= r.stats["locally_matched"]);
}

TEST_CASE("counterexample campaign archives one certificate per group without the property") {
  auto c = config("thm35", "exhaustive", 0, 1);
  auto r = run_campaign(c);
  CHECK(r.passed());
  std::size_t expected = 0;
  for (std::uint64_t n = 2; n <= 12; ++n)
    for (const auto& g : abelian_groups_of_order(n)) expected += !decide_matching_property(g);
  CHECK(r.stats["counterexamples"] == expected);
  std::size_t ce = 0;
  for (const auto& e : r.exemplars)
    if (e.label.rfind("counterexample", 0) == 0) {
      ++ce;
      CHECK(e.certificate["kind"] == "hall_violator");
      CHECK(verify_certificate(e.certificate).ok);
    }
  CHECK(ce == expected);
}

TEST_CASE("configuration errors") {
  CHECK_THROWS_AS(run_campaign(config("thm99", "random", 10, 1)), InvalidInput);
  CHECK_THROWS_AS(run_campaign(config("kneser", "sideways", 10, 1)), InvalidInput);
  CHECK_THROWS_AS(run_campaign(config("kneser", "random", 10, 0)), InvalidInput);
  auto c = config("thm31", "exhaustive", 0, 1);
  c.max_order = 16;
  c.budget = 1000;
  CHECK_THROWS_AS(run_campaign(c), BudgetExceeded);
  CHECK_THROWS_AS(campaign_config_from_json(parse_json(R"({"theorem":"kneser","colour":1})")), InvalidInput);
  CHECK_THROWS_AS(campaign_config_from_json(parse_json(R"({"theorem":"kneser","trials":-3})")), InvalidInput);
  auto ok = campaign_config_from_json(parse_json(R"({"theorem":"thm42","fields":[[2,4]],"trials":5})"));
  CHECK(ok.fields.size() == 1);
  CHECK(ok.trials == 5);
}

TEST_CASE("Kneser campaign finds tight instances with nontrivial stabilizer") {
  auto r = run_campaign(config("kneser", "random", 2000, 1));
  CHECK(r.passed());
  CHECK(r.stats["slack_zero_nontrivial_h"] > 0);
  bool archived = false;
  for (const auto& e : r.exemplars)
    if (e.label == "kneser slack 0 with nontrivial H") {
      archived = true;
      CHECK(e.certificate["slack"] == 0);
      CHECK(e.certificate["H"]["elements"].size() > 1);
      CHECK(verify_certificate(e.certificate).ok);
    }
  CHECK(archived);
}

TEST_CASE("hunting unmatched pairs") {
  HuntConfig z4;
  z4.domain = "group";
  z4.groups = {GroupSpec::cyclic(4)};
  auto r = hunt_counterexample(z4);
  CHECK(r.found);
  CHECK(!r.violation);
  const auto& first = r.findings["groups"][0]["scan"]["first"];
  CHECK(canonical_dump(first["A"]) == canonical_dump(parse_json(R"([{"free":[],"torsion":[0]},{"free":[],"torsion":[2]}])")));
  CHECK(canonical_dump(first["B"]) == canonical_dump(parse_json(R"([{"free":[],"torsion":[1]},{"free":[],"torsion":[2]}])")));
  CHECK(verify_certificate(first["certificate"]).ok);

  HuntConfig z5 = z4;
  z5.groups = {GroupSpec::cyclic(5)};
  auto r5 = hunt_counterexample(z5);
  CHECK(!r5.found);
  CHECK(r5.findings["groups"][0]["scan"]["unmatched"] == 0);
  CHECK(r5.findings["groups"][0]["construction"].is_null());

  HuntConfig lin;
  lin.domain = "linear";
  auto rl = hunt_counterexample(lin);
  CHECK(rl.found);
  CHECK(!rl.violation);
  CHECK(rl.findings["scan"]["unmatched_meeting_proper_subfield"].get<std::uint64_t>() > 0);
  CHECK(rl.findings["scan"]["unmatched_but_locally_matched"] == 0);
  for (const auto& rep : rl.findings["scan"]["reports"]) CHECK(verify_certificate(rep["certificate"]).ok);

  HuntConfig bad;
  bad.domain = "rings";
  CHECK_THROWS_AS(hunt_counterexample(bad), InvalidInput);
}
