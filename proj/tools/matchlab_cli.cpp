// matchlab command line. Every subcommand reads a JSON payload (file argument, --json, or
// stdin), calls the C API and prints the JSON answer.
//
// Exit codes: 0 ok, 1 negative answer or rejected certificate, 2 theorem violation or
// internal contradiction, 3 usage or configuration error.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <iterator>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "matchlab/matchlab.h"

namespace {

bool quiet = false;

struct Session {
  ml_session* s = ml_session_create();
  ~Session() { ml_session_destroy(s); }
};

std::string read_payload(const std::string& path, const std::string& inline_json) {
  if (!inline_json.empty()) return inline_json;
  if (path.empty() || path == "-") {
    return {std::istreambuf_iterator<char>(std::cin), std::istreambuf_iterator<char>()};
  }
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

int finish(const Session& session, ml_status st) {
  if (!quiet) {
    std::string result = ml_session_result(session.s);
    if (result != "null") std::cout << result << '\n';
    std::string err = ml_session_last_error(session.s);
    if (!err.empty()) std::cerr << "matchlab: " << ml_status_name(st) << ": " << err << '\n';
  }
  return ml_exit_code(st);
}

struct Input {
  std::string path;
  std::string json;
  void attach(CLI::App* cmd) {
    cmd->add_option("input", path, "JSON file ('-' or omitted: stdin)");
    cmd->add_option("--json", json, "JSON payload given inline");
  }
  std::string read() const { return read_payload(path, json); }
};

std::string basis_options(const std::string& mode, std::uint64_t trials, std::uint64_t seed, std::uint64_t budget) {
  std::ostringstream os;
  os << "{\"mode\":\"" << mode << "\",\"trials\":" << trials << ",\"seed\":" << seed << ",\"budget\":" << budget << '}';
  return os.str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Matchings in abelian groups and finite-field extensions"};
  app.require_subcommand(1);
  app.add_flag("-q,--quiet", quiet, "print nothing; only the exit code reports the outcome");
  app.set_version_flag("--version", std::string(ml_version()));

  int code = 0;
  Session session;

  // group
  auto* group = app.add_subcommand("group", "queries on subsets of abelian groups");
  group->require_subcommand(1);
  Input g_match, g_local, g_prop, g_ce;
  auto* gfm = group->add_subcommand("find-matching", "matching A -> B or a Hall violator");
  g_match.attach(gfm);
  gfm->callback([&] { code = finish(session, ml_group_find_matching(session.s, g_match.read().c_str())); });
  auto* gcl = group->add_subcommand("check-local", "local matchings for every qualifying subgroup");
  g_local.attach(gcl);
  gcl->callback([&] { code = finish(session, ml_group_check_local(session.s, g_local.read().c_str())); });
  auto* gdp = group->add_subcommand("decide-property", "does the group have the matching property");
  g_prop.attach(gdp);
  gdp->callback([&] { code = finish(session, ml_group_decide_property(session.s, g_prop.read().c_str())); });
  auto* gce = group->add_subcommand("counterexample", "certified unmatched pair for a group without the property");
  g_ce.attach(gce);
  gce->callback([&] { code = finish(session, ml_group_counterexample(session.s, g_ce.read().c_str())); });

  // field
  auto* field = app.add_subcommand("field", "queries on subspaces of F_{p^n}");
  field->require_subcommand(1);
  Input f_basis, f_matched, f_prim, f_local;
  std::string mode = "automatic";
  std::uint64_t trials = 200, seed = 0, budget = 1000000;
  auto* ffm = field->add_subcommand("find-matched-basis", "basis of B matched to a basis of A, or a violating J");
  f_basis.attach(ffm);
  ffm->callback([&] { code = finish(session, ml_field_find_matched_basis(session.s, f_basis.read().c_str())); });
  auto* fcm = field->add_subcommand("check-matched", "is every basis of A matchable to B");
  f_matched.attach(fcm);
  auto* fcl = field->add_subcommand("check-local", "local matching over intermediate subfields");
  f_local.attach(fcl);
  for (auto* cmd : {fcm, fcl}) {
    cmd->add_option("--mode", mode, "exhaustive, sample or automatic")
        ->check(CLI::IsMember({"exhaustive", "sample", "automatic"}));
    cmd->add_option("--trials", trials, "sampled bases");
    cmd->add_option("--seed", seed, "sampling seed");
    cmd->add_option("--budget", budget, "ordered-basis budget for exhaustive mode");
  }
  fcm->callback([&] {
    code = finish(session, ml_field_check_matched(session.s, f_matched.read().c_str(),
                                                  basis_options(mode, trials, seed, budget).c_str()));
  });
  fcl->callback([&] {
    code = finish(session, ml_field_check_local(session.s, f_local.read().c_str(),
                                                basis_options(mode, trials, seed, budget).c_str()));
  });
  auto* fcp = field->add_subcommand("check-primitive", "does B avoid every proper subfield");
  f_prim.attach(fcp);
  fcp->callback([&] { code = finish(session, ml_field_check_primitive(session.s, f_prim.read().c_str())); });

  // verify
  auto* verify = app.add_subcommand("verify", "Kneser inequalities on one instance");
  verify->require_subcommand(1);
  Input v_k, v_lk;
  auto* vk = verify->add_subcommand("kneser", "#(A+B) >= #A + #B - #H");
  v_k.attach(vk);
  vk->callback([&] { code = finish(session, ml_verify_kneser(session.s, v_k.read().c_str())); });
  auto* vlk = verify->add_subcommand("linear-kneser", "dim<AB> >= dim A + dim B - dim H");
  v_lk.attach(vlk);
  vlk->callback([&] { code = finish(session, ml_verify_linear_kneser(session.s, v_lk.read().c_str())); });

  // campaign
  auto* campaign = app.add_subcommand("campaign", "verification campaigns");
  campaign->require_subcommand(1);
  auto* run = campaign->add_subcommand("run", "run one campaign and write report.json and certs/");
  std::string theorem, cmode = "random", out;
  std::uint64_t ctrials = 1000, cseed = 0, max_order = 0, max_dim = 0, cbudget = 10000000, basis_trials = 200;
  unsigned jobs = 1;
  std::vector<std::string> group_specs, field_specs;
  run->add_option("--theorem", theorem, "thm24 thm31 thm35 thm41 thm42 thm51 cor36 kneser linear_kneser remark56")
      ->required();
  run->add_option("--mode", cmode, "exhaustive or random");
  run->add_option("--trials", ctrials, "random instances (per field for linear targets)");
  run->add_option("--seed", cseed, "64-bit seed");
  run->add_option("--jobs", jobs, "worker threads");
  run->add_option("--out", out, "output directory");
  run->add_option("--max-order", max_order, "largest group order");
  run->add_option("--max-dim", max_dim, "largest subspace dimension");
  run->add_option("--budget", cbudget, "exhaustive instance budget");
  run->add_option("--basis-trials", basis_trials, "sampled bases per matchedness check");
  run->add_option("--group", group_specs, "group JSON, repeatable");
  run->add_option("--field", field_specs, "p,n, repeatable");
  run->callback([&] {
    std::ostringstream os;
    os << "{\"theorem\":\"" << theorem << "\",\"mode\":\"" << cmode << "\",\"trials\":" << ctrials
       << ",\"seed\":" << cseed << ",\"jobs\":" << jobs << ",\"max_order\":" << max_order
       << ",\"max_dim\":" << max_dim << ",\"budget\":" << cbudget << ",\"basis_trials\":" << basis_trials;
    if (!out.empty()) {
      os << ",\"out\":\"";
      for (char c : out) {
        if (c == '"' || c == '\\') os << '\\';
        os << c;
      }
      os << '"';
    }
    if (!group_specs.empty()) {
      os << ",\"groups\":[";
      for (std::size_t i = 0; i < group_specs.size(); ++i) os << (i ? "," : "") << group_specs[i];
      os << ']';
    }
    if (!field_specs.empty()) {
      os << ",\"fields\":[";
      for (std::size_t i = 0; i < field_specs.size(); ++i) os << (i ? "," : "") << '[' << field_specs[i] << ']';
      os << ']';
    }
    os << '}';
    code = finish(session, ml_campaign_run(session.s, os.str().c_str()));
  });

  // hunt
  auto* hunt = app.add_subcommand("hunt", "search for unmatched pairs");
  Input h_in;
  h_in.attach(hunt);
  hunt->callback([&] { code = finish(session, ml_hunt(session.s, h_in.read().c_str())); });

  // cert
  auto* cert = app.add_subcommand("cert", "certificate tools");
  cert->require_subcommand(1);
  auto* cv = cert->add_subcommand("verify", "re-check certificates (files or directories)");
  std::vector<std::string> paths;
  cv->add_option("paths", paths, "certificate files or directories")->required();
  cv->callback([&] {
    std::vector<std::string> files;
    for (const auto& p : paths) {
      if (std::filesystem::is_directory(p)) {
        std::vector<std::string> found;
        for (const auto& e : std::filesystem::directory_iterator(p))
          if (e.path().extension() == ".json") found.push_back(e.path().string());
        std::sort(found.begin(), found.end());
        files.insert(files.end(), found.begin(), found.end());
      } else {
        files.push_back(p);
      }
    }
    int worst = 0;
    for (const auto& f : files) {
      int c = finish(session, ml_cert_verify_file(session.s, f.c_str()));
      worst = std::max(worst, c);
    }
    code = worst;
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    if (!quiet) app.exit(e);
    return 3;
  } catch (const std::exception& e) {
    if (!quiet) std::cerr << "matchlab: " << e.what() << '\n';
    return 3;
  }
  return code;
}
