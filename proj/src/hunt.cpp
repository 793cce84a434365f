#include <algorithm>
#include <functional>
#include <numeric>

#include "matchlab/abelian_matching.hpp"
#include "matchlab/campaign.hpp"
#include "matchlab/certificate.hpp"
#include "matchlab/error.hpp"
#include "matchlab/linear_matching.hpp"

namespace matchlab {

namespace {

std::uint64_t choose(std::uint64_t n, std::uint64_t k) {
  if (k > n) return 0;
  unsigned __int128 r = 1;
  for (std::uint64_t i = 1; i <= k; ++i) {
    r = r * (n - k + i) / i;
    if (r > UINT64_MAX) return UINT64_MAX;
  }
  return static_cast<std::uint64_t>(r);
}

void combinations(std::size_t n, std::size_t k, const std::function<bool(const std::vector<std::size_t>&)>& fn) {
  if (k > n) return;
  std::vector<std::size_t> idx(k);
  std::iota(idx.begin(), idx.end(), 0);
  for (;;) {
    if (!fn(idx)) return;
    std::size_t i = k;
    while (i > 0 && idx[i - 1] == n - k + i - 1) --i;
    if (i == 0) return;
    ++idx[i - 1];
    for (std::size_t j = i; j < k; ++j) idx[j] = idx[j - 1] + 1;
  }
}

Json hunt_group(const HuntConfig& cfg, HuntResult& result) {
  std::vector<GroupSpec> groups = cfg.groups;
  if (groups.empty())
    for (std::uint64_t o = 2; o <= cfg.max_order; ++o)
      for (auto& g : abelian_groups_of_order(o)) groups.push_back(g);

  std::uint64_t count = 0;
  for (const auto& g : groups) {
    if (!g.is_finite()) continue;
    std::uint64_t n = *g.order();
    std::uint64_t kmax = cfg.max_size ? std::min<std::uint64_t>(cfg.max_size, n - 1) : n - 1;
    for (std::uint64_t k = 1; k <= kmax; ++k) count += choose(n, k) * choose(n - 1, k);
  }
  if (count > cfg.budget) throw BudgetExceeded("hunt scan of " + std::to_string(count) + " pairs exceeds budget");

  Json out = Json::array();
  for (const auto& g : groups) {
    Json entry = {{"group", to_json(g)}, {"matching_property", decide_matching_property(g)}};
    if (auto ce = construct_counterexample(g)) {
      entry["construction"] = {{"A", to_json(ce->A)}, {"B", to_json(ce->B)}, {"certificate", make_certificate(ce->violator)}};
      result.found = true;
    } else {
      entry["construction"] = nullptr;
    }
    Json scan = {{"first", nullptr}};
    if (g.is_finite()) {
      const auto elems = g.elements();
      std::vector<GroupElement> nonzero;
      for (const auto& x : elems)
        if (x != g.zero()) nonzero.push_back(x);
      std::uint64_t scanned = 0, unmatched = 0;
      const std::size_t kmax = cfg.max_size ? std::min(cfg.max_size, nonzero.size()) : nonzero.size();
      for (std::size_t k = 1; k <= kmax; ++k) {
        combinations(elems.size(), k, [&](const std::vector<std::size_t>& ia) {
          std::vector<GroupElement> a;
          for (auto i : ia) a.push_back(elems[i]);
          GroupSubset A(g, a);
          combinations(nonzero.size(), k, [&](const std::vector<std::size_t>& ib) {
            std::vector<GroupElement> b;
            for (auto i : ib) b.push_back(nonzero[i]);
            GroupSubset B(g, b);
            ++scanned;
            auto res = find_matching(A, B);
            if (auto* v = std::get_if<HallViolator>(&res)) {
              ++unmatched;
              if (scan["first"].is_null())
                scan["first"] = {{"A", to_json(A)}, {"B", to_json(B)}, {"certificate", make_certificate(*v)}};
            }
            return true;
          });
          return true;
        });
      }
      scan["pairs_scanned"] = scanned;
      scan["unmatched"] = unmatched;
      if (unmatched) result.found = true;
    }
    entry["scan"] = scan;
    out.push_back(entry);
  }
  return out;
}

Json hunt_linear(const HuntConfig& cfg, HuntResult& result) {
  Field f = FieldCtx::make(cfg.p, cfg.n);
  std::vector<SubfieldDesc> proper;
  for (auto& sf : subfield_lattice(f))
    if (sf.d < cfg.n) proper.push_back(sf);

  Json reports = Json::array();
  std::uint64_t scanned = 0, unmatched = 0, unmatched_local = 0, unmatched_meeting = 0;
  const std::size_t dmax = std::min<std::size_t>(cfg.max_dim, cfg.n);
  std::uint64_t count = 0;
  for (std::size_t m = 1; m <= dmax; ++m) {
    auto g = gaussian_binomial(cfg.n, m, cfg.p);
    count += g * g;
  }
  if (count > cfg.budget) throw BudgetExceeded("hunt scan of " + std::to_string(count) + " pairs exceeds budget");

  for (std::size_t m = 1; m <= dmax; ++m) {
    std::vector<Subspace> spaces;
    for_each_subspace(Subspace::full(f), m, [&](const Subspace& s) {
      spaces.push_back(s);
      return true;
    });
    for (const auto& A : spaces) {
      for (const auto& B : spaces) {
        if (B.contains(f->one())) continue;
        ++scanned;
        auto r = is_matched(A, B, BasisMode{});
        if (r.matched) continue;
        ++unmatched;
        bool meets = std::any_of(proper.begin(), proper.end(),
                                 [&](const SubfieldDesc& sf) { return !intersect(sf.space, B).is_zero(); });
        if (meets) ++unmatched_meeting;
        auto local = linear_locally_matched(A, B);
        if (local.locally_matched) {
          ++unmatched_local;
          result.violation = true;
        }
        if (reports.size() < cfg.max_reports || local.locally_matched) {
          reports.push_back({{"A", to_json(A)},
                             {"B", to_json(B)},
                             {"locally_matched", local.locally_matched},
                             {"b_meets_proper_subfield", meets},
                             {"certificate", make_certificate(*r.failing_basis, A, B, *r.violator)}});
        }
      }
    }
  }
  if (unmatched) result.found = true;
  return {{"field", to_json(*f)},
          {"pairs_scanned", scanned},
          {"unmatched", unmatched},
          {"unmatched_meeting_proper_subfield", unmatched_meeting},
          {"unmatched_but_locally_matched", unmatched_local},
          {"reports", reports}};
}

}  // namespace

HuntResult hunt_counterexample(const HuntConfig& config) {
  HuntResult result;
  if (config.domain == "group")
    result.findings = {{"domain", "group"}, {"groups", hunt_group(config, result)}};
  else if (config.domain == "linear")
    result.findings = {{"domain", "linear"}, {"scan", hunt_linear(config, result)}};
  else
    throw InvalidInput("hunt domain must be group or linear");
  result.findings["found"] = result.found;
  return result;
}

HuntConfig hunt_config_from_json(const Json& j) {
  if (!j.is_object()) throw InvalidInput("hunt config must be an object");
  HuntConfig c;
  if (!j.contains("domain") || !j.at("domain").is_string()) throw InvalidInput("hunt needs a domain");
  c.domain = j.at("domain").get<std::string>();
  if (j.contains("groups"))
    for (const auto& g : j.at("groups")) c.groups.push_back(group_from_json(g));
  if (j.contains("max_order")) c.max_order = j.at("max_order").get<std::uint64_t>();
  if (j.contains("max_size")) c.max_size = j.at("max_size").get<std::size_t>();
  if (j.contains("p")) c.p = j.at("p").get<std::uint32_t>();
  if (j.contains("n")) c.n = j.at("n").get<unsigned>();
  if (j.contains("max_dim")) c.max_dim = j.at("max_dim").get<std::size_t>();
  if (j.contains("budget")) c.budget = j.at("budget").get<std::uint64_t>();
  if (j.contains("max_reports")) c.max_reports = j.at("max_reports").get<std::uint64_t>();
  return c;
}

}  // namespace matchlab
