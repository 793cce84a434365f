#include "matchlab/campaign.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <exception>
#include <filesystem>
#include <fstream>
#include <functional>
#include <memory>
#include <numeric>
#include <set>
#include <thread>

#include "matchlab/abelian_matching.hpp"
#include "matchlab/certificate.hpp"
#include "matchlab/error.hpp"
#include "matchlab/linear_matching.hpp"

namespace matchlab {

namespace fs = std::filesystem;

std::uint64_t mix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

std::uint64_t instance_seed(std::uint64_t seed, const std::string& stream, std::uint64_t index) {
  return mix64(seed ^ mix64(fnv1a64(stream) + index));
}

const std::vector<std::string>& campaign_targets() {
  static const std::vector<std::string> t = {"thm24", "thm31", "thm35", "thm41", "thm42", "thm51",
                                             "cor36", "kneser", "linear_kneser", "remark56"};
  return t;
}

namespace {

constexpr std::uint64_t kChunk = 250;

struct Partial {
  std::uint64_t instances = 0;
  std::map<std::string, std::uint64_t> stats;
  std::vector<CampaignRecord> records;
};

using Task = std::function<Partial()>;

struct Plan {
  std::vector<Task> tasks;
  Json echo;  // resolved instance universe
};

std::vector<Partial> run_tasks(const std::vector<Task>& tasks, unsigned jobs) {
  std::vector<Partial> out(tasks.size());
  std::vector<std::exception_ptr> errors(tasks.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (;;) {
      std::size_t i = next.fetch_add(1);
      if (i >= tasks.size()) return;
      try {
        out[i] = tasks[i]();
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  std::size_t n = std::clamp<std::size_t>(jobs, 1, std::max<std::size_t>(1, tasks.size()));
  std::vector<std::thread> pool;
  for (std::size_t j = 1; j < n; ++j) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
  return out;
}

void record(Partial& p, const char* role, std::string label, std::string detail, Json cert = nullptr) {
  p.records.push_back(CampaignRecord{role, std::move(label), std::move(detail), std::move(cert), ""});
}

std::size_t count_label(const Partial& p, const std::string& label) {
  return static_cast<std::size_t>(std::count_if(p.records.begin(), p.records.end(), [&](const CampaignRecord& r) {
    return r.role == "exemplar" && r.label == label;
  }));
}

std::uint64_t binom(std::uint64_t n, std::uint64_t k) {
  if (k > n) return 0;
  unsigned __int128 r = 1;
  for (std::uint64_t i = 1; i <= k; ++i) {
    r = r * (n - k + i) / i;
    if (r > UINT64_MAX) return UINT64_MAX;
  }
  return static_cast<std::uint64_t>(r);
}

std::uint64_t sat_add(std::uint64_t a, std::uint64_t b) { return a > UINT64_MAX - b ? UINT64_MAX : a + b; }
std::uint64_t sat_mul(std::uint64_t a, std::uint64_t b) {
  if (a != 0 && b > UINT64_MAX / a) return UINT64_MAX;
  return a * b;
}

bool for_each_combination(std::size_t n, std::size_t k, const std::function<bool(const std::vector<std::size_t>&)>& fn) {
  std::vector<std::size_t> idx(k);
  std::iota(idx.begin(), idx.end(), 0);
  if (k > n) return true;
  for (;;) {
    if (!fn(idx)) return false;
    std::size_t i = k;
    while (i > 0 && idx[i - 1] == n - k + i - 1) --i;
    if (i == 0) return true;
    ++idx[i - 1];
    for (std::size_t j = i; j < k; ++j) idx[j] = idx[j - 1] + 1;
  }
}

std::vector<std::size_t> sample_indices(std::size_t n, std::size_t k, Rng& rng) {
  std::vector<std::size_t> all(n);
  std::iota(all.begin(), all.end(), 0);
  for (std::size_t i = 0; i < k; ++i) {
    std::uniform_int_distribution<std::size_t> d(i, n - 1);
    std::swap(all[i], all[d(rng)]);
  }
  all.resize(k);
  std::sort(all.begin(), all.end());
  return all;
}

std::size_t uniform(Rng& rng, std::size_t lo, std::size_t hi) {
  return std::uniform_int_distribution<std::size_t>(lo, hi)(rng);
}

GroupSubset pick(const GroupSpec& g, const std::vector<GroupElement>& pool, const std::vector<std::size_t>& idx) {
  std::vector<GroupElement> xs;
  for (auto i : idx) xs.push_back(pool[i]);
  return GroupSubset(g, std::move(xs));
}

// Finite groups list every element; infinite ones use the box [-w, w]^r on the free part.
std::vector<GroupElement> universe(const GroupSpec& g, std::int64_t window) {
  if (g.is_finite()) return g.elements();
  std::vector<GroupElement> out;
  const auto tors = g.torsion_elements();
  std::vector<std::int64_t> f(static_cast<std::size_t>(g.free_rank()), -window);
  for (;;) {
    for (const auto& t : tors) out.push_back(g.element(f, t.torsion));
    std::size_t i = f.size();
    while (i > 0 && f[i - 1] == window) f[--i] = -window;
    if (i == 0) break;
    ++f[i - 1];
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<GroupElement> without_zero(const GroupSpec& g, const std::vector<GroupElement>& xs) {
  std::vector<GroupElement> out;
  for (const auto& x : xs)
    if (x != g.zero()) out.push_back(x);
  return out;
}

std::vector<GroupSpec> groups_upto(std::uint64_t max_order) {
  std::vector<GroupSpec> out;
  for (std::uint64_t o = 2; o <= max_order; ++o)
    for (auto& g : abelian_groups_of_order(o)) out.push_back(g);
  return out;
}

Json groups_echo(const std::vector<GroupSpec>& gs) {
  Json out = Json::array();
  for (const auto& g : gs) out.push_back(to_json(g));
  return out;
}

Json fields_echo(const std::vector<std::pair<std::uint32_t, unsigned>>& fs) {
  Json out = Json::array();
  for (const auto& [p, n] : fs) out.push_back(Json::array({p, n}));
  return out;
}

void require_budget(std::uint64_t count, const CampaignConfig& cfg) {
  if (count > cfg.budget)
    throw BudgetExceeded("exhaustive instance count " + std::to_string(count) + " exceeds budget " +
                         std::to_string(cfg.budget));
}

std::string pair_text(const GroupSubset& A, const GroupSubset& B) {
  return "G=" + A.group().to_string() + " A=" + to_string(A) + " B=" + to_string(B);
}

std::string pair_text(const Subspace& A, const Subspace& B) {
  return A.ctx().to_string() + " A=" + to_string(A) + " B=" + to_string(B);
}

// Random-mode scaffolding: chunks of kChunk consecutive indices per stream.
template <class Fn>
void add_random_tasks(Plan& plan, std::uint64_t trials, std::uint64_t seed, const std::string& stream, Fn fn) {
  for (std::uint64_t start = 0; start < trials; start += kChunk) {
    std::uint64_t end = std::min(trials, start + kChunk);
    plan.tasks.push_back([=]() {
      Partial p;
      for (std::uint64_t i = start; i < end; ++i) {
        Rng rng(instance_seed(seed, stream, i));
        fn(p, rng, i);
      }
      return p;
    });
  }
}

// ---------------------------------------------------------------- groups

using SubgroupCache = std::shared_ptr<const std::vector<Subgroup>>;

void check31(Partial& p, const GroupSubset& A, const GroupSubset& B, const std::vector<Subgroup>& subs,
             const CampaignConfig& cfg) {
  ++p.instances;
  LocalReport local = check_local(A, B, subs);
  auto res = find_matching(A, B);
  const bool matched = std::holds_alternative<Matching>(res);
  p.stats["locally_matched"] += local.locally_matched;
  p.stats["matched"] += matched;
  if (!local.qualifying.empty()) ++p.stats["qualifying_nonvacuous"];
  if (matched && !local.locally_matched) ++p.stats["matched_not_locally_matched"];
  if (local.locally_matched && !matched) {
    record(p, "failure", "thm31", "locally matched but unmatched: " + pair_text(A, B),
           make_certificate(std::get<HallViolator>(res)));
    return;
  }
  std::string label = "thm31 " + A.group().to_string();
  if (matched && local.locally_matched && !local.qualifying.empty() && count_label(p, label) < cfg.max_exemplars) {
    const auto& q = local.qualifying.front();
    record(p, "exemplar", label, "local matching for H=" + to_string(q.H.elements()) + ": " + pair_text(A, B),
           make_certificate(A, B, *q.matching));
    record(p, "exemplar", label, "matching: " + pair_text(A, B), make_certificate(std::get<Matching>(res)));
  }
}

Plan plan_thm31(const CampaignConfig& cfg) {
  Plan plan;
  const bool exhaustive = cfg.mode == "exhaustive";
  auto groups = cfg.groups.empty() ? groups_upto(cfg.max_order ? cfg.max_order : (exhaustive ? 10 : 16)) : cfg.groups;
  plan.echo["groups"] = groups_echo(groups);
  if (exhaustive) {
    std::uint64_t count = 0;
    for (const auto& g : groups) {
      if (!g.is_finite()) throw InvalidInput("exhaustive thm31 needs finite groups");
      std::uint64_t n = *g.order();
      for (std::uint64_t k = 1; k < n; ++k) count = sat_add(count, sat_mul(binom(n, k), binom(n - 1, k)));
    }
    require_budget(count, cfg);
    for (const auto& g : groups) {
      auto elems = std::make_shared<const std::vector<GroupElement>>(g.elements());
      auto nonzero = std::make_shared<const std::vector<GroupElement>>(without_zero(g, *elems));
      SubgroupCache subs = std::make_shared<const std::vector<Subgroup>>(subgroups(g));
      for (std::size_t k = 1; k < elems->size(); ++k) {
        plan.tasks.push_back([=, &cfg]() {
          Partial p;
          for_each_combination(elems->size(), k, [&](const std::vector<std::size_t>& ia) {
            GroupSubset A = pick(g, *elems, ia);
            for_each_combination(nonzero->size(), k, [&](const std::vector<std::size_t>& ib) {
              check31(p, A, pick(g, *nonzero, ib), *subs, cfg);
              return true;
            });
            return true;
          });
          return p;
        });
      }
    }
  } else {
    struct Entry {
      GroupSpec g;
      std::vector<GroupElement> elems, nonzero;
      std::vector<Subgroup> subs;
    };
    auto entries = std::make_shared<std::vector<Entry>>();
    for (const auto& g : groups) {
      Entry e{g, universe(g, 5), {}, {}};
      e.nonzero = without_zero(g, e.elems);
      e.subs = g.is_finite() ? subgroups(g) : subgroups(g, 8);
      entries->push_back(std::move(e));
    }
    add_random_tasks(plan, cfg.trials, cfg.seed, "thm31", [entries, &cfg](Partial& p, Rng& rng, std::uint64_t) {
      const auto& e = (*entries)[uniform(rng, 0, entries->size() - 1)];
      std::size_t k = uniform(rng, 1, std::min<std::size_t>(e.nonzero.size(), e.g.is_finite() ? e.nonzero.size() : 8));
      GroupSubset A = pick(e.g, e.elems, sample_indices(e.elems.size(), k, rng));
      GroupSubset B = pick(e.g, e.nonzero, sample_indices(e.nonzero.size(), k, rng));
      check31(p, A, B, e.subs, cfg);
    });
  }
  return plan;
}

void check_matched(Partial& p, const GroupSubset& A, const GroupSubset& B, const std::string& tag,
                   const CampaignConfig& cfg) {
  ++p.instances;
  auto res = find_matching(A, B);
  if (auto* v = std::get_if<HallViolator>(&res)) {
    record(p, "failure", tag, "unmatched pair: " + pair_text(A, B), make_certificate(*v));
    return;
  }
  ++p.stats["matched"];
  std::string label = tag + " " + A.group().to_string();
  if (A.size() > 1 && count_label(p, label) < cfg.max_exemplars)
    record(p, "exemplar", label, "matching: " + pair_text(A, B), make_certificate(std::get<Matching>(res)));
}

void counterexample_task(Partial& p, const GroupSpec& g) {
  ++p.instances;
  try {
    auto ce = construct_counterexample(g);
    if (!ce) {
      record(p, "failure", "thm35", "no counterexample constructed for " + g.to_string());
      return;
    }
    if (brute_force_matching(ce->A, ce->B)) {
      record(p, "failure", "thm35", "constructed pair is matched: " + pair_text(ce->A, ce->B));
      return;
    }
    if (is_locally_matched(ce->A, ce->B)) {
      record(p, "failure", "thm35", "constructed pair is locally matched: " + pair_text(ce->A, ce->B));
      return;
    }
    ++p.stats["counterexamples"];
    record(p, "exemplar", "counterexample " + g.to_string(),
           "H=" + to_string(ce->H.elements()) + " g=" + to_string(ce->outside) + ": " + pair_text(ce->A, ce->B),
           make_certificate(ce->violator));
  } catch (const TheoremViolation& e) {
    record(p, "failure", "thm35", e.what());
  }
}

Plan plan_thm35(const CampaignConfig& cfg) {
  Plan plan;
  const bool exhaustive = cfg.mode == "exhaustive";
  std::vector<GroupSpec> groups = cfg.groups;
  if (groups.empty()) {
    if (exhaustive) {
      groups = groups_upto(cfg.max_order ? cfg.max_order : 12);
      groups.push_back(GroupSpec::make(1, {}));
      groups.push_back(GroupSpec::make(2, {}));
    } else {
      for (std::int64_t q : {2, 3, 5, 7, 11, 13}) groups.push_back(GroupSpec::cyclic(q));
      groups.push_back(GroupSpec::make(1, {}));
      groups.push_back(GroupSpec::make(2, {}));
      for (std::int64_t n : {4, 6, 8, 9, 10, 12}) groups.push_back(GroupSpec::cyclic(n));
      groups.push_back(GroupSpec::make(0, std::vector<std::int64_t>{2, 2}));
      groups.push_back(GroupSpec::make(0, std::vector<std::int64_t>{2, 4}));
      groups.push_back(GroupSpec::make(1, std::vector<std::int64_t>{2}));
    }
  }
  plan.echo["groups"] = groups_echo(groups);
  std::vector<GroupSpec> good, bad;
  for (const auto& g : groups) (decide_matching_property(g) ? good : bad).push_back(g);
  for (const auto& g : bad) plan.tasks.push_back([g]() {
    Partial p;
    counterexample_task(p, g);
    return p;
  });
  // Free ranks get a small box so that the scan stays finite.
  auto window = [](const GroupSpec& g) -> std::int64_t { return g.free_rank() <= 1 ? 3 : 1; };
  if (exhaustive) {
    std::uint64_t count = bad.size();
    for (const auto& g : good) {
      std::uint64_t n = universe(g, window(g)).size();
      for (std::uint64_t k = 1; k < n; ++k) count = sat_add(count, sat_mul(binom(n, k), binom(n - 1, k)));
    }
    require_budget(count, cfg);
    for (const auto& g : good) {
      auto elems = std::make_shared<const std::vector<GroupElement>>(universe(g, window(g)));
      auto nonzero = std::make_shared<const std::vector<GroupElement>>(without_zero(g, *elems));
      for (std::size_t k = 1; k < elems->size(); ++k) {
        plan.tasks.push_back([=, &cfg]() {
          Partial p;
          for_each_combination(elems->size(), k, [&](const std::vector<std::size_t>& ia) {
            GroupSubset A = pick(g, *elems, ia);
            for_each_combination(nonzero->size(), k, [&](const std::vector<std::size_t>& ib) {
              check_matched(p, A, pick(g, *nonzero, ib), "thm35", cfg);
              return true;
            });
            return true;
          });
          return p;
        });
      }
    }
  } else if (!good.empty()) {
    auto pools = std::make_shared<std::vector<std::pair<std::vector<GroupElement>, std::vector<GroupElement>>>>();
    for (const auto& g : good) {
      auto e = universe(g, 5);
      pools->emplace_back(e, without_zero(g, e));
    }
    add_random_tasks(plan, cfg.trials, cfg.seed, "thm35", [good, pools, &cfg](Partial& p, Rng& rng, std::uint64_t) {
      std::size_t gi = uniform(rng, 0, good.size() - 1);
      const auto& [elems, nonzero] = (*pools)[gi];
      std::size_t k = uniform(rng, 1, std::min<std::size_t>(nonzero.size(), 10));
      GroupSubset A = pick(good[gi], elems, sample_indices(elems.size(), k, rng));
      GroupSubset B = pick(good[gi], nonzero, sample_indices(nonzero.size(), k, rng));
      check_matched(p, A, B, "thm35", cfg);
    });
  }
  return plan;
}

std::vector<GroupElement> generators_of(const GroupSpec& g) {
  std::vector<GroupElement> out;
  for (const auto& x : g.elements())
    if (g.element_order(x) == g.order()) out.push_back(x);
  return out;
}

Plan plan_thm41(const CampaignConfig& cfg) {
  Plan plan;
  const bool exhaustive = cfg.mode == "exhaustive";
  std::vector<GroupSpec> groups = cfg.groups;
  if (groups.empty())
    for (std::int64_t n = 2; n <= static_cast<std::int64_t>(cfg.max_order ? cfg.max_order : (exhaustive ? 12 : 40)); ++n)
      groups.push_back(GroupSpec::cyclic(n));
  for (const auto& g : groups)
    if (!g.is_finite() || g.torsion().size() != 1) throw InvalidInput("thm41 needs finite cyclic groups");
  plan.echo["groups"] = groups_echo(groups);
  if (exhaustive) {
    std::uint64_t count = 0;
    for (const auto& g : groups) {
      std::uint64_t n = *g.order(), phi = generators_of(g).size();
      for (std::uint64_t k = 1; k <= phi; ++k) count = sat_add(count, sat_mul(binom(n, k), binom(phi, k)));
    }
    require_budget(count, cfg);
    for (const auto& g : groups) {
      auto elems = std::make_shared<const std::vector<GroupElement>>(g.elements());
      auto gens = std::make_shared<const std::vector<GroupElement>>(generators_of(g));
      for (std::size_t k = 1; k <= gens->size(); ++k) {
        plan.tasks.push_back([=, &cfg]() {
          Partial p;
          for_each_combination(elems->size(), k, [&](const std::vector<std::size_t>& ia) {
            GroupSubset A = pick(g, *elems, ia);
            for_each_combination(gens->size(), k, [&](const std::vector<std::size_t>& ib) {
              check_matched(p, A, pick(g, *gens, ib), "thm41", cfg);
              return true;
            });
            return true;
          });
          return p;
        });
      }
    }
  } else {
    auto pools = std::make_shared<std::vector<std::pair<std::vector<GroupElement>, std::vector<GroupElement>>>>();
    for (const auto& g : groups) pools->emplace_back(g.elements(), generators_of(g));
    add_random_tasks(plan, cfg.trials, cfg.seed, "thm41", [groups, pools, &cfg](Partial& p, Rng& rng, std::uint64_t) {
      std::size_t gi = uniform(rng, 0, groups.size() - 1);
      const auto& [elems, gens] = (*pools)[gi];
      std::size_t k = uniform(rng, 1, gens.size());
      GroupSubset A = pick(groups[gi], elems, sample_indices(elems.size(), k, rng));
      GroupSubset B = pick(groups[gi], gens, sample_indices(gens.size(), k, rng));
      check_matched(p, A, B, "thm41", cfg);
    });
  }
  return plan;
}

void check36(Partial& p, const GroupSubset& A, const GroupSubset& B, const CampaignConfig& cfg) {
  LocalReport local = check_local(A, B);
  if (!local.locally_matched || !local.qualifying.empty())
    record(p, "failure", "cor36", "a subgroup qualifies below n(G): " + pair_text(A, B));
  check_matched(p, A, B, "cor36", cfg);
}

Plan plan_cor36(const CampaignConfig& cfg) {
  Plan plan;
  const bool exhaustive = cfg.mode == "exhaustive";
  std::vector<GroupSpec> groups = cfg.groups;
  if (groups.empty()) {
    groups.push_back(GroupSpec::cyclic(9));
    groups.push_back(GroupSpec::cyclic(25));
    groups.push_back(GroupSpec::make(0, std::vector<std::int64_t>{3, 9}));
  }
  plan.echo["groups"] = groups_echo(groups);
  struct Entry {
    GroupSpec g;
    std::vector<GroupElement> elems, nonzero;
    std::size_t kmax;
  };
  auto entries = std::make_shared<std::vector<Entry>>();
  for (const auto& g : groups) {
    auto ng = smallest_subgroup_order(g);
    Entry e{g, universe(g, 5), {}, 0};
    e.nonzero = without_zero(g, e.elems);
    e.kmax = std::min<std::size_t>(ng ? *ng - 1 : 8, e.nonzero.size());
    if (e.kmax >= 2) entries->push_back(std::move(e));
  }
  if (entries->empty()) throw InvalidInput("cor36 needs a group with n(G) > 2");
  if (exhaustive) {
    std::uint64_t count = 0;
    for (const auto& e : *entries)
      for (std::size_t k = 2; k <= e.kmax; ++k)
        count = sat_add(count, sat_mul(binom(e.elems.size(), k), binom(e.nonzero.size(), k)));
    require_budget(count, cfg);
    for (std::size_t gi = 0; gi < entries->size(); ++gi)
      for (std::size_t k = 2; k <= (*entries)[gi].kmax; ++k)
        plan.tasks.push_back([=, &cfg]() {
          Partial p;
          const auto& e = (*entries)[gi];
          for_each_combination(e.elems.size(), k, [&](const std::vector<std::size_t>& ia) {
            GroupSubset A = pick(e.g, e.elems, ia);
            for_each_combination(e.nonzero.size(), k, [&](const std::vector<std::size_t>& ib) {
              check36(p, A, pick(e.g, e.nonzero, ib), cfg);
              return true;
            });
            return true;
          });
          return p;
        });
  } else {
    add_random_tasks(plan, cfg.trials, cfg.seed, "cor36", [entries, &cfg](Partial& p, Rng& rng, std::uint64_t) {
      const auto& e = (*entries)[uniform(rng, 0, entries->size() - 1)];
      std::size_t k = uniform(rng, 2, e.kmax);
      GroupSubset A = pick(e.g, e.elems, sample_indices(e.elems.size(), k, rng));
      GroupSubset B = pick(e.g, e.nonzero, sample_indices(e.nonzero.size(), k, rng));
      check36(p, A, B, cfg);
    });
  }
  return plan;
}

void check_kneser(Partial& p, const GroupSubset& A, const GroupSubset& B, const CampaignConfig& cfg) {
  ++p.instances;
  try {
    auto k = kneser_verify(A, B);
    if (k.slack == 0) ++p.stats["slack_zero"];
    if (k.slack == 0 && !k.H.is_trivial()) {
      ++p.stats["slack_zero_nontrivial_h"];
      const std::string label = "kneser slack 0 with nontrivial H";
      if (count_label(p, label) < cfg.max_exemplars)
        record(p, "exemplar", label, "H=" + to_string(k.H.elements()) + ": " + pair_text(A, B), make_certificate(k));
    }
  } catch (const TheoremViolation& e) {
    GroupSubset C = sumset(A, B);
    Subgroup H = stabilizer(C);
    auto slack = static_cast<std::int64_t>(C.size() + H.order()) - static_cast<std::int64_t>(A.size() + B.size());
    record(p, "failure", "kneser", e.what(), make_certificate(KneserCertificate{A, B, C, H, slack}));
  }
}

Plan plan_kneser(const CampaignConfig& cfg) {
  Plan plan;
  const bool exhaustive = cfg.mode == "exhaustive";
  std::vector<GroupSpec> groups = cfg.groups;
  if (groups.empty()) {
    if (exhaustive) {
      groups = groups_upto(cfg.max_order ? cfg.max_order : 8);
    } else {
      std::set<std::pair<int, std::vector<std::int64_t>>> seen;
      auto add = [&](GroupSpec g) {
        if (seen.insert({g.free_rank(), g.torsion()}).second) groups.push_back(std::move(g));
      };
      for (std::int64_t n = 2; n <= 30; ++n) add(GroupSpec::cyclic(n));
      for (std::int64_t a = 2; a <= 12; ++a)
        for (std::int64_t b = a; b <= 12; ++b) add(GroupSpec::make(0, std::vector<std::int64_t>{a, b}));
    }
  }
  for (const auto& g : groups)
    if (!g.is_finite()) throw InvalidInput("kneser campaigns need finite groups");
  plan.echo["groups"] = groups_echo(groups);
  if (exhaustive) {
    std::uint64_t count = 0;
    for (const auto& g : groups) {
      std::uint64_t n = *g.order();
      if (n > 20) throw BudgetExceeded("exhaustive kneser limited to groups of order 20");
      std::uint64_t s = (std::uint64_t{1} << n) - 1;
      count = sat_add(count, sat_mul(s, s));
    }
    require_budget(count, cfg);
    for (const auto& g : groups) {
      auto elems = std::make_shared<const std::vector<GroupElement>>(g.elements());
      const std::uint64_t full = (std::uint64_t{1} << elems->size()) - 1;
      for (std::uint64_t ma = 1; ma <= full; ++ma)
        plan.tasks.push_back([=, &cfg]() {
          Partial p;
          auto subset = [&](std::uint64_t m) {
            std::vector<std::size_t> idx;
            for (std::size_t i = 0; i < elems->size(); ++i)
              if (m >> i & 1) idx.push_back(i);
            return pick(g, *elems, idx);
          };
          GroupSubset A = subset(ma);
          for (std::uint64_t mb = 1; mb <= full; ++mb) check_kneser(p, A, subset(mb), cfg);
          return p;
        });
    }
  } else {
    struct Entry {
      GroupSpec g;
      std::vector<GroupElement> elems;
      std::vector<Subgroup> proper;  // nontrivial proper subgroups
    };
    auto entries = std::make_shared<std::vector<Entry>>();
    auto structured = std::make_shared<std::vector<std::size_t>>();
    for (const auto& g : groups) {
      Entry e{g, g.elements(), {}};
      for (auto& h : subgroups(g))
        if (!h.is_trivial() && h.is_proper()) e.proper.push_back(std::move(h));
      if (!e.proper.empty()) structured->push_back(entries->size());
      entries->push_back(std::move(e));
    }
    add_random_tasks(plan, cfg.trials, cfg.seed, "kneser",
                     [entries, structured, &cfg](Partial& p, Rng& rng, std::uint64_t i) {
                       if (i % 8 == 0 && !structured->empty()) {
                         // Coset pairs a+H, b+H reach equality with stabilizer H.
                         const auto& e = (*entries)[(*structured)[uniform(rng, 0, structured->size() - 1)]];
                         const auto& h = e.proper[uniform(rng, 0, e.proper.size() - 1)];
                         const auto& a = e.elems[uniform(rng, 0, e.elems.size() - 1)];
                         const auto& b = e.elems[uniform(rng, 0, e.elems.size() - 1)];
                         check_kneser(p, h.elements().translate(a), h.elements().translate(b), cfg);
                         return;
                       }
                       const auto& e = (*entries)[uniform(rng, 0, entries->size() - 1)];
                       std::size_t ka = uniform(rng, 1, e.elems.size()), kb = uniform(rng, 1, e.elems.size());
                       check_kneser(p, pick(e.g, e.elems, sample_indices(e.elems.size(), ka, rng)),
                                    pick(e.g, e.elems, sample_indices(e.elems.size(), kb, rng)), cfg);
                     });
  }
  return plan;
}

// ---------------------------------------------------------------- fields

using FieldList = std::vector<std::pair<std::uint32_t, unsigned>>;

FieldList fields_or(const CampaignConfig& cfg, FieldList fallback) {
  return cfg.fields.empty() ? std::move(fallback) : cfg.fields;
}

std::vector<Subspace> all_subspaces(const Field& f, std::size_t m) {
  std::vector<Subspace> out;
  for_each_subspace(Subspace::full(f), m, [&](const Subspace& s) {
    out.push_back(s);
    return true;
  });
  return out;
}

std::string field_label(const Field& f) { return "F_" + std::to_string(f->p()) + "^" + std::to_string(f->n()); }

void check24(Partial& p, const BasisSeq& a, const Subspace& A, const Subspace& B, const CampaignConfig& cfg) {
  ++p.instances;
  const std::string tag = field_label(A.field()) + " m=" + std::to_string(A.dim());
  try {
    auto viol = basis_matchable(a, B, A);
    auto oracle = exhaustive_matched_basis(a.vectors, B, A);
    if (oracle && !check_matched_bases(a.vectors, *oracle, A)) {
      record(p, "failure", "thm24", "brute-force basis fails the literal check: " + pair_text(A, B));
      return;
    }
    if (viol && oracle) {
      record(p, "failure", "thm24", "criterion fails but a matched basis exists: " + pair_text(A, B),
             make_certificate(a, A, B, *viol));
      return;
    }
    if (!viol && !oracle) {
      Json cert = nullptr;
      auto built = find_matched_basis(a, B, A);
      if (auto* m = std::get_if<BasisMatching>(&built)) cert = make_certificate(*m);
      record(p, "failure", "thm24", "criterion holds but no matched basis exists: " + pair_text(A, B), cert);
      return;
    }
    if (viol) {
      ++p.stats["criterion_violated"];
      std::string label = "thm24 violator " + tag;
      if (count_label(p, label) < cfg.max_exemplars)
        record(p, "exemplar", label, pair_text(A, B), make_certificate(a, A, B, *viol));
      return;
    }
    ++p.stats["criterion_ok"];
    auto built = find_matched_basis(a, B, A);
    auto* m = std::get_if<BasisMatching>(&built);
    if (!m || !check_matched_bases(a.vectors, m->b_basis.vectors, A)) {
      record(p, "failure", "thm24", "constructed basis fails the literal check: " + pair_text(A, B));
      return;
    }
    std::string label = "thm24 matched " + tag;
    if (count_label(p, label) < cfg.max_exemplars) record(p, "exemplar", label, pair_text(A, B), make_certificate(*m));
  } catch (const TheoremViolation& e) {
    record(p, "failure", "thm24", std::string(e.what()) + ": " + pair_text(A, B));
  }
}

Plan plan_thm24(const CampaignConfig& cfg) {
  Plan plan;
  const bool exhaustive = cfg.mode == "exhaustive";
  FieldList fl = fields_or(cfg, exhaustive ? FieldList{{2, 2}, {2, 3}, {3, 2}}
                                           : FieldList{{2, 2}, {2, 3}, {2, 4}, {3, 2}, {3, 3}, {3, 4}});
  const std::size_t max_dim = cfg.max_dim ? cfg.max_dim : (exhaustive ? 2 : 3);
  plan.echo["fields"] = fields_echo(fl);
  plan.echo["max_dim"] = max_dim;
  for (const auto& [pp, nn] : fl) {
    Field f = FieldCtx::make(pp, nn);
    for (std::size_t m = 1; m <= std::min<std::size_t>(max_dim, nn); ++m) {
      if (exhaustive) {
        auto spaces = std::make_shared<const std::vector<Subspace>>(all_subspaces(f, m));
        std::uint64_t per_basis = ordered_basis_count(m, pp);
        for (std::size_t i = 0; i < m; ++i) per_basis /= (pp - 1) * (i + 1);
        require_budget(sat_mul(sat_mul(spaces->size(), spaces->size()), per_basis), cfg);
        for (std::size_t ai = 0; ai < spaces->size(); ++ai)
          plan.tasks.push_back([=, &cfg]() {
            Partial p;
            const Subspace& A = (*spaces)[ai];
            for_each_basis(A, [&](const std::vector<FqElement>& basis) {
              for (const auto& B : *spaces) check24(p, BasisSeq{f, basis}, A, B, cfg);
              return true;
            });
            return p;
          });
      } else {
        std::string stream = "thm24/" + std::to_string(pp) + "/" + std::to_string(nn) + "/" + std::to_string(m);
        add_random_tasks(plan, cfg.trials, cfg.seed, stream, [f, m, &cfg](Partial& p, Rng& rng, std::uint64_t) {
          Subspace A = random_subspace(f, m, rng);
          Subspace B = random_subspace(f, m, rng);
          check24(p, random_basis(A, rng), A, B, cfg);
        });
      }
    }
  }
  return plan;
}

std::size_t max_primitive_dim(const Field& f) {
  unsigned big = 0;
  for (unsigned d = 1; d < f->n(); ++d)
    if (f->n() % d == 0) big = d;
  return f->n() - big;
}

void check42(Partial& p, const BasisSeq& a, const Subspace& A, const Subspace& B, const CampaignConfig& cfg) {
  ++p.instances;
  const std::string tag = field_label(A.field());
  try {
    auto prim = primitive_check(B);
    if (!prim.primitive) throw InvalidInput("thm42 instance with non-primitive B");
    auto built = find_matched_basis(a, B, A);
    if (auto* v = std::get_if<CriterionViolator>(&built)) {
      record(p, "failure", "thm42", "primitive B but basis unmatched: " + pair_text(A, B),
             make_certificate(a, A, B, *v));
      return;
    }
    const auto& m = std::get<BasisMatching>(built);
    if (B.cardinality() <= 4096 && !check_matched_bases(a.vectors, m.b_basis.vectors, A)) {
      record(p, "failure", "thm42", "constructed basis fails the literal check: " + pair_text(A, B));
      return;
    }
    ++p.stats["matched"];
    std::string label = "thm42 " + tag + " m=" + std::to_string(A.dim());
    if (count_label(p, label) < cfg.max_exemplars) record(p, "exemplar", label, pair_text(A, B), make_certificate(m));
  } catch (const TheoremViolation& e) {
    record(p, "failure", "thm42", std::string(e.what()) + ": " + pair_text(A, B));
  }
}

Plan plan_thm42(const CampaignConfig& cfg) {
  Plan plan;
  const bool exhaustive = cfg.mode == "exhaustive";
  FieldList fl = fields_or(cfg, exhaustive ? FieldList{{2, 4}} : FieldList{{2, 4}, {2, 6}});
  plan.echo["fields"] = fields_echo(fl);
  for (const auto& [pp, nn] : fl) {
    Field f = FieldCtx::make(pp, nn);
    const std::size_t mmax = std::min(max_primitive_dim(f), cfg.max_dim ? cfg.max_dim : max_primitive_dim(f));
    if (exhaustive) {
      for (std::size_t m = 1; m <= mmax; ++m) {
        auto spaces = std::make_shared<const std::vector<Subspace>>(all_subspaces(f, m));
        std::uint64_t per_basis = ordered_basis_count(m, pp);
        for (std::size_t i = 0; i < m; ++i) per_basis /= (pp - 1) * (i + 1);
        require_budget(sat_mul(sat_mul(spaces->size(), spaces->size()), per_basis), cfg);
        for (std::size_t bi = 0; bi < spaces->size(); ++bi) {
          if (!primitive_check((*spaces)[bi]).primitive) continue;
          plan.tasks.push_back([=, &cfg]() {
            Partial p;
            const Subspace& B = (*spaces)[bi];
            for (const auto& A : *spaces)
              for_each_basis(A, [&](const std::vector<FqElement>& basis) {
                check42(p, BasisSeq{f, basis}, A, B, cfg);
                return true;
              });
            return p;
          });
        }
      }
    } else {
      if (mmax == 0) throw InvalidInput("no primitive subspaces in " + field_label(f));
      std::string stream = "thm42/" + std::to_string(pp) + "/" + std::to_string(nn);
      add_random_tasks(plan, cfg.trials, cfg.seed, stream, [f, mmax, &cfg](Partial& p, Rng& rng, std::uint64_t) {
        std::size_t m = uniform(rng, 1, mmax);
        for (int attempt = 0; attempt < 10000; ++attempt) {
          Subspace B = random_subspace(f, m, rng);
          if (!primitive_check(B).primitive) continue;
          Subspace A = random_subspace(f, m, rng);
          check42(p, random_basis(A, rng), A, B, cfg);
          return;
        }
        ++p.stats["no_primitive_sample"];
      });
    }
  }
  return plan;
}

void check51(Partial& p, const Subspace& A, const Subspace& B, const LocalSearchConfig& lc, const BasisMode& mode,
             const CampaignConfig& cfg) {
  ++p.instances;
  const std::string tag = field_label(A.field());
  try {
    auto r = evaluate_theorem51(A, B, lc, mode);
    const bool local = r.local.locally_matched, matched = r.matched.matched;
    p.stats["locally_matched"] += local;
    p.stats["matched"] += matched;
    if (!r.local.qualifying.empty()) ++p.stats["qualifying_nonvacuous"];
    if (matched && !local) ++p.stats["matched_not_locally_matched"];
    if (!r.implication_holds) {
      record(p, "failure", "thm51", "locally matched but unmatched: " + pair_text(A, B),
             make_certificate(*r.matched.failing_basis, A, B, *r.matched.violator));
      record(p, "failure", "thm51", "local matching report for the same pair", make_certificate(A, B, r.local, lc));
      return;
    }
    if (local && !r.local.qualifying.empty()) {
      std::string label = "thm51 nonvacuous " + tag;
      if (count_label(p, label) < cfg.max_exemplars)
        record(p, "exemplar", label, pair_text(A, B), make_certificate(A, B, r.local, lc));
    }
    if (!matched) {
      std::string label = "thm51 unmatched " + tag;
      if (count_label(p, label) < cfg.max_exemplars)
        record(p, "exemplar", label, pair_text(A, B),
               make_certificate(*r.matched.failing_basis, A, B, *r.matched.violator));
    }
  } catch (const TheoremViolation& e) {
    record(p, "failure", "thm51", std::string(e.what()) + ": " + pair_text(A, B));
  }
}

Plan plan_thm51(const CampaignConfig& cfg) {
  Plan plan;
  const bool exhaustive = cfg.mode == "exhaustive";
  FieldList fl = fields_or(cfg, exhaustive ? FieldList{{2, 4}} : FieldList{{2, 4}, {3, 2}});
  plan.echo["fields"] = fields_echo(fl);
  for (const auto& [pp, nn] : fl) {
    Field f = FieldCtx::make(pp, nn);
    if (nn < 2) throw InvalidInput("thm51 needs n >= 2");
    const std::size_t mmax = std::min<std::size_t>(nn - 1, cfg.max_dim ? cfg.max_dim : nn - 1);
    if (exhaustive) {
      for (std::size_t m = 1; m <= mmax; ++m) {
        auto spaces = std::make_shared<const std::vector<Subspace>>(all_subspaces(f, m));
        require_budget(sat_mul(spaces->size(), spaces->size()), cfg);
        if (ordered_basis_count(m, pp) > 1'000'000) throw BudgetExceeded("basis enumeration too large for exhaustive thm51");
        for (std::size_t ai = 0; ai < spaces->size(); ++ai)
          plan.tasks.push_back([=, &cfg]() {
            Partial p;
            const Subspace& A = (*spaces)[ai];
            for (const auto& B : *spaces)
              if (!B.contains(f->one())) check51(p, A, B, LocalSearchConfig{}, BasisMode::exhaustive(), cfg);
            return p;
          });
      }
    } else {
      std::string stream = "thm51/" + std::to_string(pp) + "/" + std::to_string(nn);
      add_random_tasks(plan, cfg.trials, cfg.seed, stream, [f, mmax, &cfg](Partial& p, Rng& rng, std::uint64_t) {
        std::size_t m = uniform(rng, 1, mmax);
        Subspace B;
        do B = random_subspace(f, m, rng);
        while (B.contains(f->one()));
        Subspace A = random_subspace(f, m, rng);
        LocalSearchConfig lc;
        lc.seed = rng();
        lc.basis_mode = BasisMode::sample(cfg.basis_trials, rng());
        lc.basis_mode.kind = BasisMode::Kind::automatic;
        check51(p, A, B, lc, BasisMode::sample(cfg.basis_trials, rng()), cfg);
      });
    }
  }
  return plan;
}

void check56(Partial& p, const Subspace& A, const Subspace& B, const BasisMode& mode, const CampaignConfig& cfg) {
  ++p.instances;
  const std::string tag = field_label(A.field());
  try {
    if (!strong_matching_exists(A, B)) throw InvalidInput("remark56 instance without strong matching");
    auto r = is_matched(A, B, mode);
    if (!r.matched) {
      record(p, "failure", "remark56", "strong matching but unmatched basis: " + pair_text(A, B),
             make_certificate(*r.failing_basis, A, B, *r.violator));
      return;
    }
    ++p.stats["matched"];
    LocalSearchConfig lc;
    lc.basis_mode = mode;
    auto local = linear_locally_matched(A, B, lc);
    if (!local.qualifying.empty()) ++p.stats["qualifying_nonvacuous"];
    if (local.locally_matched) {
      ++p.stats["locally_matched"];
      std::string label = "remark56 " + tag;
      if (!local.qualifying.empty() && count_label(p, label) < cfg.max_exemplars)
        record(p, "exemplar", label, pair_text(A, B), make_certificate(A, B, local, lc));
    } else {
      ++p.stats["not_locally_matched"];
      record(p, "finding", "remark56", "strong matching without local matching: " + pair_text(A, B),
             make_certificate(A, B, local, lc));
    }
  } catch (const TheoremViolation& e) {
    record(p, "failure", "remark56", std::string(e.what()) + ": " + pair_text(A, B));
  }
}

Plan plan_remark56(const CampaignConfig& cfg) {
  Plan plan;
  const bool exhaustive = cfg.mode == "exhaustive";
  FieldList fl = fields_or(cfg, exhaustive ? FieldList{{2, 4}} : FieldList{{2, 4}, {2, 6}, {3, 2}, {3, 3}});
  plan.echo["fields"] = fields_echo(fl);
  for (const auto& [pp, nn] : fl) {
    Field f = FieldCtx::make(pp, nn);
    const std::size_t mmax = std::max<std::size_t>(1, std::min<std::size_t>(nn / 2, cfg.max_dim ? cfg.max_dim : nn));
    if (exhaustive) {
      for (std::size_t m = 1; m <= mmax; ++m) {
        auto spaces = std::make_shared<const std::vector<Subspace>>(all_subspaces(f, m));
        require_budget(sat_mul(spaces->size(), spaces->size()), cfg);
        for (std::size_t ai = 0; ai < spaces->size(); ++ai)
          plan.tasks.push_back([=, &cfg]() {
            Partial p;
            const Subspace& A = (*spaces)[ai];
            for (const auto& B : *spaces)
              if (strong_matching_exists(A, B)) check56(p, A, B, BasisMode::exhaustive(), cfg);
            return p;
          });
      }
    } else {
      std::string stream = "remark56/" + std::to_string(pp) + "/" + std::to_string(nn);
      add_random_tasks(plan, cfg.trials, cfg.seed, stream, [f, mmax, &cfg](Partial& p, Rng& rng, std::uint64_t) {
        std::size_t m = uniform(rng, 1, mmax);
        for (int attempt = 0;; ++attempt) {
          if (attempt == 64) m = 1;  // lines almost always multiply strongly
          Subspace A = random_subspace(f, m, rng);
          Subspace B = random_subspace(f, m, rng);
          if (!strong_matching_exists(A, B)) continue;
          check56(p, A, B, BasisMode::sample(cfg.basis_trials, rng()), cfg);
          return;
        }
      });
    }
  }
  return plan;
}

void check_linear_kneser(Partial& p, const Subspace& A, const Subspace& B, const CampaignConfig& cfg) {
  ++p.instances;
  try {
    auto k = linear_kneser_verify(A, B);
    if (k.slack == 0) ++p.stats["slack_zero"];
    if (k.slack == 0 && k.H.d > 1) {
      ++p.stats["slack_zero_nontrivial_h"];
      const std::string label = "linear_kneser slack 0 with nontrivial H";
      if (count_label(p, label) < cfg.max_exemplars)
        record(p, "exemplar", label, "d=" + std::to_string(k.H.d) + ": " + pair_text(A, B), make_certificate(k));
    }
  } catch (const TheoremViolation& e) {
    Subspace ab = product_span(A, B);
    SubfieldDesc h = stabilizer_subfield(ab);
    auto slack = static_cast<std::int64_t>(ab.dim() + h.d) - static_cast<std::int64_t>(A.dim() + B.dim());
    record(p, "failure", "linear_kneser", e.what(), make_certificate(LinearKneserCertificate{A, B, ab, h, slack}));
  }
}

Plan plan_linear_kneser(const CampaignConfig& cfg) {
  Plan plan;
  const bool exhaustive = cfg.mode == "exhaustive";
  FieldList fl =
      fields_or(cfg, exhaustive ? FieldList{{2, 4}} : FieldList{{2, 4}, {2, 5}, {2, 6}, {3, 2}, {3, 3}, {5, 2}});
  plan.echo["fields"] = fields_echo(fl);
  for (const auto& [pp, nn] : fl) {
    Field f = FieldCtx::make(pp, nn);
    if (exhaustive) {
      auto spaces = std::make_shared<std::vector<Subspace>>();
      for (std::size_t m = 1; m <= nn; ++m)
        for (auto& s : all_subspaces(f, m)) spaces->push_back(std::move(s));
      require_budget(sat_mul(spaces->size(), spaces->size()), cfg);
      for (std::size_t ai = 0; ai < spaces->size(); ++ai)
        plan.tasks.push_back([=, &cfg]() {
          Partial p;
          for (const auto& B : *spaces) check_linear_kneser(p, (*spaces)[ai], B, cfg);
          return p;
        });
    } else {
      std::vector<Subspace> subfields;
      for (auto& sf : subfield_lattice(f))
        if (sf.d > 1 && sf.d < nn) subfields.push_back(sf.space);
      auto sfs = std::make_shared<const std::vector<Subspace>>(std::move(subfields));
      std::string stream = "linear_kneser/" + std::to_string(pp) + "/" + std::to_string(nn);
      add_random_tasks(plan, cfg.trials, cfg.seed, stream, [f, sfs, &cfg](Partial& p, Rng& rng, std::uint64_t i) {
        if (i % 8 == 0 && !sfs->empty()) {
          // xH and yH multiply to xyH, whose stabilizer is H.
          const auto& h = (*sfs)[uniform(rng, 0, sfs->size() - 1)];
          FqElement x, y;
          do x = random_element(*f, rng);
          while (f->is_zero(x));
          do y = random_element(*f, rng);
          while (f->is_zero(y));
          check_linear_kneser(p, scale_space(x, h), scale_space(y, h), cfg);
          return;
        }
        Subspace A = random_subspace(f, uniform(rng, 1, f->n()), rng);
        Subspace B = random_subspace(f, uniform(rng, 1, f->n()), rng);
        check_linear_kneser(p, A, B, cfg);
      });
    }
  }
  return plan;
}

Json record_json(const CampaignRecord& r) {
  return {{"label", r.label},
          {"detail", r.detail},
          {"certificate", r.path.empty() ? Json(nullptr) : Json(r.path)}};
}

}  // namespace

Json CampaignReport::to_json() const {
  Json cfg = {{"theorem", config.theorem},
              {"mode", config.mode},
              {"seed", config.seed},
              {"budget", config.budget},
              {"basis_trials", config.basis_trials},
              {"max_exemplars", config.max_exemplars}};
  if (config.mode == "random") cfg["trials"] = config.trials;
  if (config.max_order) cfg["max_order"] = config.max_order;
  if (config.max_dim) cfg["max_dim"] = config.max_dim;
  Json out = {{"config", cfg}, {"instances", instances}, {"stats", stats}, {"passed", passed()}};
  Json f = Json::array(), g = Json::array(), e = Json::array();
  std::set<std::string> certs;
  for (const auto& r : failures) f.push_back(record_json(r));
  for (const auto& r : findings) g.push_back(record_json(r));
  for (const auto& r : exemplars) e.push_back(record_json(r));
  for (const auto* list : {&failures, &findings, &exemplars})
    for (const auto& r : *list)
      if (!r.path.empty()) certs.insert(r.path);
  out["failures"] = f;
  out["findings"] = g;
  out["exemplars"] = e;
  out["certificates"] = certs;
  return out;
}

CampaignReport run_campaign(const CampaignConfig& config) {
  const auto t0 = std::chrono::steady_clock::now();
  const auto& targets = campaign_targets();
  if (std::find(targets.begin(), targets.end(), config.theorem) == targets.end())
    throw InvalidInput("unknown theorem id \"" + config.theorem + "\"");
  if (config.mode != "exhaustive" && config.mode != "random")
    throw InvalidInput("mode must be exhaustive or random");
  if (config.jobs == 0) throw InvalidInput("jobs must be at least 1");

  Plan plan;
  const auto& t = config.theorem;
  if (t == "thm24") plan = plan_thm24(config);
  else if (t == "thm31") plan = plan_thm31(config);
  else if (t == "thm35") plan = plan_thm35(config);
  else if (t == "thm41") plan = plan_thm41(config);
  else if (t == "thm42") plan = plan_thm42(config);
  else if (t == "thm51") plan = plan_thm51(config);
  else if (t == "cor36") plan = plan_cor36(config);
  else if (t == "kneser") plan = plan_kneser(config);
  else if (t == "linear_kneser") plan = plan_linear_kneser(config);
  else plan = plan_remark56(config);

  auto partials = run_tasks(plan.tasks, config.jobs);

  CampaignReport report;
  report.config = config;
  std::map<std::string, std::uint64_t> per_label;
  for (auto& part : partials) {
    report.instances += part.instances;
    for (const auto& [k, v] : part.stats) report.stats[k] += v;
    for (auto& r : part.records) {
      if (r.role == "failure") {
        report.failures.push_back(std::move(r));
      } else if (r.role == "finding") {
        report.findings.push_back(std::move(r));
      } else if (per_label[r.label]++ < config.max_exemplars) {
        report.exemplars.push_back(std::move(r));
      }
    }
  }

  // Every archived certificate must pass the standalone verifier.
  const std::string cert_dir = config.out_dir.empty() ? "" : (fs::path(config.out_dir) / "certs").string();
  std::vector<CampaignRecord> broken;
  for (auto* list : {&report.failures, &report.findings, &report.exemplars}) {
    for (auto& r : *list) {
      if (r.certificate.is_null()) continue;
      auto check = verify_certificate(r.certificate);
      if (!check) broken.push_back({"failure", "certificate", "emitted certificate does not verify (" + r.label + "): " + check.failure, nullptr, ""});
      const std::string name = hex64(fnv1a64(canonical_dump(r.certificate))) + ".json";
      r.path = "certs/" + (cert_dir.empty() ? name : store_certificate(cert_dir, r.certificate));
    }
  }
  for (auto& b : broken) report.failures.push_back(std::move(b));
  report.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

  if (!config.out_dir.empty()) {
    fs::create_directories(config.out_dir);
    Json rep = report.to_json();
    rep["universe"] = plan.echo;
    std::ofstream(fs::path(config.out_dir) / "report.json") << rep.dump(2) << '\n';
    Json timing = {{"wall_seconds", report.wall_seconds}, {"jobs", config.jobs}};
    std::ofstream(fs::path(config.out_dir) / "timing.json") << timing.dump(2) << '\n';
  }
  return report;
}

CampaignConfig campaign_config_from_json(const Json& j) {
  if (!j.is_object()) throw InvalidInput("campaign config must be an object");
  static const std::set<std::string> known = {"theorem", "mode",    "trials",  "seed",         "jobs",
                                              "out",     "max_order", "groups", "fields",       "max_dim",
                                              "budget",  "basis_trials", "max_exemplars"};
  for (auto it = j.begin(); it != j.end(); ++it)
    if (!known.count(it.key())) throw InvalidInput("unknown campaign option \"" + it.key() + "\"");
  auto u64 = [&](const char* key, std::uint64_t fallback) {
    if (!j.contains(key)) return fallback;
    const Json& v = j.at(key);
    if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<std::int64_t>() >= 0))
      throw InvalidInput(std::string(key) + " must be a non-negative integer");
    return v.get<std::uint64_t>();
  };
  CampaignConfig c;
  if (!j.contains("theorem") || !j.at("theorem").is_string()) throw InvalidInput("campaign needs a theorem id");
  c.theorem = j.at("theorem").get<std::string>();
  if (j.contains("mode")) c.mode = j.at("mode").get<std::string>();
  c.trials = u64("trials", c.trials);
  c.seed = u64("seed", c.seed);
  c.jobs = static_cast<unsigned>(u64("jobs", c.jobs));
  if (j.contains("out")) c.out_dir = j.at("out").get<std::string>();
  c.max_order = u64("max_order", 0);
  c.max_dim = static_cast<std::size_t>(u64("max_dim", 0));
  c.budget = u64("budget", c.budget);
  c.basis_trials = u64("basis_trials", c.basis_trials);
  c.max_exemplars = u64("max_exemplars", c.max_exemplars);
  if (j.contains("groups"))
    for (const auto& g : j.at("groups")) c.groups.push_back(group_from_json(g));
  if (j.contains("fields"))
    for (const auto& f : j.at("fields")) {
      if (!f.is_array() || f.size() != 2) throw InvalidInput("fields entries are [p, n]");
      c.fields.emplace_back(f[0].get<std::uint32_t>(), f[1].get<unsigned>());
    }
  return c;
}

}  // namespace matchlab
