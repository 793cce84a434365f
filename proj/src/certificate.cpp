#include "matchlab/certificate.hpp"

#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include "matchlab/error.hpp"

namespace matchlab {

namespace fs = std::filesystem;

namespace {

Json seal(Json cert) {
  cert["schema"] = kCertSchema;
  cert["version"] = kCertVersion;
  cert["digest"] = certificate_digest(cert);
  return cert;
}

Json pairs_json(const std::vector<ElementPair>& pairs) {
  Json out = Json::array();
  for (const auto& [a, b] : pairs) out.push_back(Json::array({to_json(a), to_json(b)}));
  return out;
}

std::vector<ElementPair> pairs_from_json(const Json& j, const GroupSpec& g) {
  if (!j.is_array()) throw InvalidInput("pairs must be an array");
  std::vector<ElementPair> out;
  for (const auto& p : j) {
    if (!p.is_array() || p.size() != 2) throw InvalidInput("each pair must be [a, b]");
    out.emplace_back(element_from_json(p[0], g), element_from_json(p[1], g));
  }
  return out;
}

const Json& member(const Json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) throw InvalidInput(std::string("certificate lacks \"") + key + "\"");
  return j.at(key);
}

std::int64_t int_member(const Json& j, const char* key) {
  const Json& v = member(j, key);
  if (!v.is_number_integer()) throw InvalidInput(std::string("\"") + key + "\" must be an integer");
  return v.get<std::int64_t>();
}

bool bool_member(const Json& j, const char* key) {
  const Json& v = member(j, key);
  if (!v.is_boolean()) throw InvalidInput(std::string("\"") + key + "\" must be a boolean");
  return v.get<bool>();
}

Subspace dual_hyperplane(const Field& f, const std::vector<FqElement>& b, std::size_t skip) {
  std::vector<FqElement> others;
  for (std::size_t j = 0; j < b.size(); ++j)
    if (j != skip) others.push_back(b[j]);
  return Subspace::span(f, others);
}

// ---- group kinds ----

CheckResult verify_matching(const Json& c) {
  auto inst = group_instance_from_json(member(c, "instance"));
  if (inst.A.size() != inst.B.size()) return CheckResult::fail("#A != #B");
  auto pairs = pairs_from_json(member(c, "pairs"), inst.A.group());
  return is_matching(inst.A, inst.B, pairs);
}

CheckResult verify_hall(const Json& c) {
  auto inst = group_instance_from_json(member(c, "instance"));
  const auto& g = inst.A.group();
  if (inst.A.size() != inst.B.size()) return CheckResult::fail("#A != #B");
  if (inst.B.contains(g.zero())) return CheckResult::fail("0 belongs to B");
  GroupSubset S = subset_from_json(member(c, "S"), g);
  GroupSubset U = subset_from_json(member(c, "U"), g);
  if (S.empty()) return CheckResult::fail("S is empty");
  if (!S.is_subset_of(inst.A)) return CheckResult::fail("S is not a subset of A");
  GroupSubset u = hall_u(inst.A, inst.B, S);
  if (!(u == U)) return CheckResult::fail("U differs from {b in B : s+b in A for all s in S} = " + to_string(u));
  if (inst.B.size() - U.size() >= S.size())
    return CheckResult::fail("#(B\\U)=" + std::to_string(inst.B.size() - U.size()) + " is not below #S=" +
                             std::to_string(S.size()));
  return CheckResult::pass();
}

CheckResult verify_local(const Json& c) {
  auto inst = group_instance_from_json(member(c, "instance"));
  const auto& g = inst.A.group();
  if (inst.A.size() != inst.B.size()) return CheckResult::fail("#A != #B");
  if (inst.B.contains(g.zero())) return CheckResult::fail("0 belongs to B");
  Subgroup H = subgroup_from_json(member(c, "H"), g);
  if (!H.is_proper()) return CheckResult::fail("H is not proper");
  GroupElement w = element_from_json(member(c, "witness"), g);
  if (!inst.A.contains(w)) return CheckResult::fail("witness " + to_string(w) + " is not in A");
  for (const auto& h : H.elements())
    if (!inst.A.contains(g.add(w, h))) return CheckResult::fail("witness+H is not inside A");
  GroupSubset target = H.elements().intersection(inst.B);
  if (target.empty()) return CheckResult::fail("H ∩ B is empty");
  GroupSubset sub = subset_from_json(member(c, "subdomain"), g);
  if (!sub.is_subset_of(inst.A)) return CheckResult::fail("subdomain is not inside A");
  if (sub.size() != target.size()) return CheckResult::fail("#A' != #(H ∩ B)");
  auto pairs = pairs_from_json(member(c, "pairs"), g);
  if (pairs.size() != sub.size()) return CheckResult::fail("pairs do not cover A'");
  std::set<GroupElement> seen_a, seen_b;
  for (const auto& [a, b] : pairs) {
    if (!sub.contains(a)) return CheckResult::fail(to_string(a) + " is not in A'");
    if (!target.contains(b)) return CheckResult::fail(to_string(b) + " is not in H ∩ B");
    if (!seen_a.insert(a).second) return CheckResult::fail(to_string(a) + " is matched twice");
    if (!seen_b.insert(b).second) return CheckResult::fail(to_string(b) + " is hit twice");
    auto s = g.add(a, b);
    if (inst.A.contains(s)) return CheckResult::fail(to_string(a) + "+" + to_string(b) + "=" + to_string(s) + "∈A");
  }
  return CheckResult::pass();
}

CheckResult verify_kneser(const Json& c) {
  auto inst = group_instance_from_json(member(c, "instance"));
  const auto& g = inst.A.group();
  if (inst.A.empty() || inst.B.empty()) return CheckResult::fail("A and B must be nonempty");
  GroupSubset C = subset_from_json(member(c, "C"), g);
  GroupSubset sum = sumset(inst.A, inst.B);
  if (!(C == sum)) return CheckResult::fail("C differs from A+B = " + to_string(sum));
  Subgroup H = subgroup_from_json(member(c, "H"), g);
  Subgroup stab = stabilizer(C);
  if (!(H == stab)) return CheckResult::fail("H differs from the stabilizer " + to_string(stab.elements()));
  auto slack = static_cast<std::int64_t>(C.size()) - static_cast<std::int64_t>(inst.A.size()) -
               static_cast<std::int64_t>(inst.B.size()) + static_cast<std::int64_t>(H.order());
  auto recorded = int_member(c, "slack");
  if (recorded != slack)
    return CheckResult::fail("slack mismatch: recorded " + std::to_string(recorded) + ", recomputed " +
                             std::to_string(slack));
  return CheckResult::pass();
}

// ---- field kinds ----

struct LinearParts {
  FieldInstance inst;
  Subspace A, B;
};

LinearParts linear_parts(const Json& c) {
  LinearParts lp{field_instance_from_json(member(c, "instance")), {}, {}};
  if (!lp.inst.A || !lp.inst.B) throw InvalidInput("instance needs A and B");
  lp.A = *lp.inst.A;
  lp.B = *lp.inst.B;
  return lp;
}

CheckResult check_a_basis(const LinearParts& lp) {
  if (!lp.inst.a_basis) return CheckResult::fail("instance lacks a_basis");
  const auto& a = *lp.inst.a_basis;
  Subspace span = Subspace::span(lp.inst.field, a);
  if (span.dim() != a.size()) return CheckResult::fail("a_basis is dependent");
  if (!(span == lp.A)) return CheckResult::fail("a_basis does not span A");
  if (lp.A.dim() != lp.B.dim()) return CheckResult::fail("dim A != dim B");
  return CheckResult::pass();
}

CheckResult verify_basis_matching(const Json& c) {
  auto lp = linear_parts(c);
  if (auto r = check_a_basis(lp); !r) return r;
  const auto& a = *lp.inst.a_basis;
  auto b = basis_from_json(member(c, "b_basis"), *lp.inst.field);
  if (b.size() != a.size()) return CheckResult::fail("b_basis has the wrong length");
  Subspace bspan = Subspace::span(lp.inst.field, b);
  if (bspan.dim() != b.size()) return CheckResult::fail("b_basis is dependent");
  if (!(bspan == lp.B)) return CheckResult::fail("b_basis does not span B");
  const auto& ctx = *lp.inst.field;
  for (std::size_t i = 0; i < a.size(); ++i) {
    auto prod = ctx.mul(a[i], b[i]);
    if (lp.A.contains(prod))
      return CheckResult::fail("a_" + std::to_string(i + 1) + "*b_" + std::to_string(i + 1) + "=" + to_string(prod) +
                               "∈A");
    Subspace v = intersect(scale_space(a[i], lp.A, true), lp.B);
    if (!dual_hyperplane(lp.inst.field, b, i).contains(v))
      return CheckResult::fail("a_" + std::to_string(i + 1) + "^-1 A ∩ B leaves the hyperplane of the other b_j");
  }
  if (lp.B.cardinality() <= 4096) return check_matched_bases(a, b, lp.A);
  return CheckResult::pass();
}

CheckResult verify_criterion_violator(const Json& c) {
  auto lp = linear_parts(c);
  if (auto r = check_a_basis(lp); !r) return r;
  const auto& a = *lp.inst.a_basis;
  const Json& jj = member(c, "J");
  if (!jj.is_array() || jj.empty()) return CheckResult::fail("J must be a nonempty array");
  std::vector<std::size_t> J;
  for (const auto& x : jj) {
    if (!x.is_number_integer()) return CheckResult::fail("J entries must be integers");
    auto i = x.get<std::int64_t>();
    if (i < 1 || i > static_cast<std::int64_t>(a.size())) return CheckResult::fail("J entry out of range");
    if (!J.empty() && static_cast<std::size_t>(i - 1) <= J.back()) return CheckResult::fail("J must be increasing");
    J.push_back(static_cast<std::size_t>(i - 1));
  }
  Subspace w = lp.B;
  for (auto i : J) w = intersect(w, scale_space(a[i], lp.A, true));
  Subspace recorded = subspace_from_json(member(c, "witness"), lp.inst.field);
  if (!(recorded == w)) return CheckResult::fail("witness differs from the recomputed intersection " + to_string(w));
  auto deficit = static_cast<std::int64_t>(w.dim()) - (static_cast<std::int64_t>(a.size()) - static_cast<std::int64_t>(J.size()));
  if (int_member(c, "deficit") != deficit)
    return CheckResult::fail("deficit mismatch: recomputed " + std::to_string(deficit));
  if (deficit <= 0) return CheckResult::fail("J does not violate the dimension bound");
  return CheckResult::pass();
}

CheckResult verify_linear_kneser(const Json& c) {
  auto lp = linear_parts(c);
  if (lp.A.is_zero() || lp.B.is_zero()) return CheckResult::fail("A and B must be nonzero");
  Subspace ab = product_span(lp.A, lp.B);
  if (!(subspace_from_json(member(c, "AB"), lp.inst.field) == ab))
    return CheckResult::fail("AB differs from the product span " + to_string(ab));
  const Json& h = member(c, "H");
  auto d = int_member(h, "d");
  Subspace hs = subspace_from_json(member(h, "space"), lp.inst.field);
  if (!is_subfield(hs) || static_cast<std::int64_t>(hs.dim()) != d) return CheckResult::fail("H is not a subfield of dimension d");
  for (const auto& x : hs.basis())
    if (!ab.contains(product_span(Subspace::span(lp.inst.field, std::vector<FqElement>{x}), ab)))
      return CheckResult::fail("H does not stabilize AB");
  SubfieldDesc stab = stabilizer_subfield(ab);
  if (!(stab.space == hs)) return CheckResult::fail("H is not the full stabilizer (which has d=" + std::to_string(stab.d) + ")");
  auto slack = static_cast<std::int64_t>(ab.dim()) - static_cast<std::int64_t>(lp.A.dim()) -
               static_cast<std::int64_t>(lp.B.dim()) + d;
  if (int_member(c, "slack") != slack) return CheckResult::fail("slack mismatch: recomputed " + std::to_string(slack));
  return CheckResult::pass();
}

CheckResult verify_linear_local(const Json& c) {
  auto lp = linear_parts(c);
  if (lp.A.dim() != lp.B.dim() || lp.A.is_zero()) return CheckResult::fail("dim A != dim B");
  if (lp.B.contains(lp.inst.field->one())) return CheckResult::fail("1 belongs to B");
  const unsigned n = lp.inst.field->n();

  // Qualifying subfields, recomputed from scratch.
  std::vector<SubfieldDesc> qualifying;
  for (auto& sf : subfield_lattice(lp.inst.field)) {
    if (sf.d == n || intersect(sf.space, lp.B).is_zero()) continue;
    Subspace module = lp.A;
    for (const auto& h : sf.space.basis()) module = intersect(module, scale_space(h, lp.A, true));
    if (!module.is_zero()) qualifying.push_back(sf);
  }
  const Json& entries = member(c, "qualifying");
  if (!entries.is_array() || entries.size() != qualifying.size())
    return CheckResult::fail("qualifying subfield list differs from the recomputed one (" +
                             std::to_string(qualifying.size()) + " expected)");
  bool all = true;
  for (std::size_t k = 0; k < qualifying.size(); ++k) {
    const Json& e = entries[k];
    if (int_member(e, "d") != qualifying[k].d) return CheckResult::fail("qualifying subfield degree mismatch");
    Subspace hb = intersect(qualifying[k].space, lp.B);
    const Json& at = member(e, "a_tilde");
    if (at.is_null()) {
      all = false;
      // A negative claim is re-derived by repeating the recorded search.
      continue;
    }
    Subspace a_tilde = subspace_from_json(at, lp.inst.field);
    if (a_tilde.dim() != hb.dim()) return CheckResult::fail("dim Ã != dim(H ∩ B)");
    if (!lp.A.contains(a_tilde)) return CheckResult::fail("Ã is not inside A");
    auto r = a_matched(a_tilde, hb, lp.A, BasisMode::exhaustive());
    if (!r.matched) return CheckResult::fail("Ã is not A-matched to H ∩ B");
  }
  if (bool_member(c, "locally_matched") != all) return CheckResult::fail("locally_matched flag inconsistent with entries");
  if (!all) {
    const Json& cfg = member(c, "search");
    LocalSearchConfig config;
    config.subspace_budget = static_cast<std::uint64_t>(int_member(cfg, "subspace_budget"));
    config.subspace_trials = static_cast<std::uint64_t>(int_member(cfg, "subspace_trials"));
    config.seed = static_cast<std::uint64_t>(int_member(cfg, "seed"));
    const std::string kind = member(cfg, "basis_mode").get<std::string>();
    if (kind == "sample")
      config.basis_mode = BasisMode::sample(static_cast<std::uint64_t>(int_member(cfg, "basis_trials")),
                                            static_cast<std::uint64_t>(int_member(cfg, "basis_seed")));
    else if (kind == "exhaustive" || kind == "automatic")
      config.basis_mode.kind = kind == "exhaustive" ? BasisMode::Kind::exhaustive : BasisMode::Kind::automatic;
    else
      return CheckResult::fail("unknown basis_mode");
    config.basis_mode.trials = static_cast<std::uint64_t>(int_member(cfg, "basis_trials"));
    config.basis_mode.seed = static_cast<std::uint64_t>(int_member(cfg, "basis_seed"));
    config.basis_mode.budget = static_cast<std::uint64_t>(int_member(cfg, "basis_budget"));
    auto again = linear_locally_matched(lp.A, lp.B, config);
    for (std::size_t k = 0; k < qualifying.size(); ++k)
      if (entries[k].at("a_tilde").is_null() && again.qualifying[k].a_tilde)
        return CheckResult::fail("repeated search finds Ã for d=" + std::to_string(qualifying[k].d));
  }
  return CheckResult::pass();
}

}  // namespace

namespace {
const char* basis_kind_name(BasisMode::Kind k) {
  switch (k) {
    case BasisMode::Kind::exhaustive: return "exhaustive";
    case BasisMode::Kind::sample: return "sample";
    default: return "automatic";
  }
}
}  // namespace

Json make_certificate(const Matching& m) {
  return seal({{"kind", "matching"},
               {"instance", to_json(GroupInstance{m.domain, m.codomain})},
               {"pairs", pairs_json(m.pairs)}});
}

Json make_certificate(const HallViolator& v) {
  return seal({{"kind", "hall_violator"},
               {"instance", to_json(GroupInstance{v.domain, v.codomain})},
               {"S", to_json(v.S)},
               {"U", to_json(v.U)}});
}

Json make_certificate(const GroupSubset& A, const GroupSubset& B, const LocalMatching& lm) {
  return seal({{"kind", "local_matching"},
               {"instance", to_json(GroupInstance{A, B})},
               {"H", to_json(lm.H)},
               {"witness", to_json(lm.witness)},
               {"subdomain", to_json(lm.subdomain)},
               {"pairs", pairs_json(lm.pairs)}});
}

Json make_certificate(const KneserCertificate& k) {
  return seal({{"kind", "kneser"},
               {"instance", to_json(GroupInstance{k.A, k.B})},
               {"C", to_json(k.C)},
               {"H", to_json(k.H)},
               {"slack", k.slack}});
}

Json make_certificate(const BasisMatching& m) {
  FieldInstance inst{m.a_basis.field, m.ambient, m.target, m.a_basis.vectors};
  return seal({{"kind", "basis_matching"}, {"instance", to_json(inst)}, {"b_basis", to_json(m.b_basis.vectors)}});
}

Json make_certificate(const BasisSeq& a_basis, const Subspace& A, const Subspace& B, const CriterionViolator& v) {
  FieldInstance inst{a_basis.field, A, B, a_basis.vectors};
  Json J = Json::array();
  for (auto i : v.J) J.push_back(i + 1);
  return seal({{"kind", "criterion_violator"},
               {"instance", to_json(inst)},
               {"J", J},
               {"witness", to_json(v.witness)},
               {"deficit", v.deficit}});
}

Json make_certificate(const LinearKneserCertificate& k) {
  FieldInstance inst{k.A.field(), k.A, k.B, std::nullopt};
  return seal({{"kind", "linear_kneser"},
               {"instance", to_json(inst)},
               {"AB", to_json(k.AB)},
               {"H", to_json(k.H)},
               {"slack", k.slack}});
}

Json make_certificate(const Subspace& A, const Subspace& B, const LinearLocalReport& r, const LocalSearchConfig& cfg) {
  FieldInstance inst{A.field(), A, B, std::nullopt};
  Json entries = Json::array();
  for (const auto& e : r.qualifying) {
    entries.push_back({{"d", e.H.d},
                       {"h_cap_b", to_json(e.h_cap_b)},
                       {"module", to_json(e.module)},
                       {"a_tilde", e.a_tilde ? to_json(*e.a_tilde) : Json(nullptr)},
                       {"search_mode", e.search_mode},
                       {"candidates_checked", e.candidates_checked}});
  }
  return seal({{"kind", "linear_local"},
               {"instance", to_json(inst)},
               {"locally_matched", r.locally_matched},
               {"qualifying", entries},
               {"search",
                {{"subspace_budget", cfg.subspace_budget},
                 {"subspace_trials", cfg.subspace_trials},
                 {"seed", cfg.seed},
                 {"basis_mode", basis_kind_name(cfg.basis_mode.kind)},
                 {"basis_trials", cfg.basis_mode.trials},
                 {"basis_seed", cfg.basis_mode.seed},
                 {"basis_budget", cfg.basis_mode.budget}}}});
}

std::string certificate_digest(const Json& cert) {
  Json body = cert;
  if (body.is_object()) body.erase("digest");
  return hex64(fnv1a64(canonical_dump(body)));
}

CheckResult verify_certificate(const Json& cert) {
  try {
    if (!cert.is_object()) return CheckResult::fail("certificate must be a JSON object");
    if (!cert.contains("schema") || cert.at("schema") != kCertSchema) return CheckResult::fail("unknown schema");
    if (!cert.contains("version") || cert.at("version") != kCertVersion)
      return CheckResult::fail("stale schema version (expected " + std::to_string(kCertVersion) + ")");
    const Json& kind = member(cert, "kind");
    if (!kind.is_string()) return CheckResult::fail("kind must be a string");
    const std::string k = kind.get<std::string>();
    CheckResult r;
    if (k == "matching")
      r = verify_matching(cert);
    else if (k == "hall_violator")
      r = verify_hall(cert);
    else if (k == "local_matching")
      r = verify_local(cert);
    else if (k == "kneser")
      r = verify_kneser(cert);
    else if (k == "basis_matching")
      r = verify_basis_matching(cert);
    else if (k == "criterion_violator")
      r = verify_criterion_violator(cert);
    else if (k == "linear_kneser")
      r = verify_linear_kneser(cert);
    else if (k == "linear_local")
      r = verify_linear_local(cert);
    else
      return CheckResult::fail("unknown certificate kind \"" + k + "\"");
    if (!r) return r;
    const Json& d = member(cert, "digest");
    if (!d.is_string() || d.get<std::string>() != certificate_digest(cert)) return CheckResult::fail("digest mismatch");
    return CheckResult::pass();
  } catch (const BudgetExceeded& e) {
    return CheckResult::fail(std::string("cannot re-check within budget: ") + e.what());
  } catch (const Error& e) {
    return CheckResult::fail(std::string("malformed certificate: ") + e.what());
  } catch (const Json::exception& e) {
    return CheckResult::fail(std::string("malformed certificate: ") + e.what());
  }
}

CheckResult verify_certificate_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return CheckResult::fail("cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  Json j;
  try {
    j = parse_json(ss.str());
  } catch (const Error& e) {
    return CheckResult::fail(std::string("malformed certificate file: ") + e.what());
  }
  return verify_certificate(j);
}

std::string store_certificate(const std::string& dir, const Json& cert) {
  const std::string bytes = canonical_dump(cert);
  const std::string name = hex64(fnv1a64(bytes)) + ".json";
  fs::create_directories(dir);
  fs::path path = fs::path(dir) / name;
  if (!fs::exists(path)) {
    std::ofstream out(path, std::ios::binary);
    out << bytes << '\n';
    if (!out) throw Error("cannot write " + path.string());
  }
  return name;
}

namespace {

void collect_leaves(const Json& j, const Json::json_pointer& at, std::vector<Json::json_pointer>& out) {
  if (j.is_object()) {
    for (auto it = j.begin(); it != j.end(); ++it) collect_leaves(it.value(), at / it.key(), out);
  } else if (j.is_array()) {
    for (std::size_t i = 0; i < j.size(); ++i) collect_leaves(j[i], at / i, out);
  } else {
    out.push_back(at);
  }
}

}  // namespace

Json tamper_certificate(const Json& cert, std::mt19937_64& rng, std::string* description) {
  std::vector<Json::json_pointer> leaves;
  collect_leaves(cert, Json::json_pointer(), leaves);
  if (leaves.empty()) throw InvalidInput("nothing to tamper with");
  std::uniform_int_distribution<std::size_t> pick(0, leaves.size() - 1);
  const auto& ptr = leaves[pick(rng)];
  Json out = cert;
  Json& leaf = out[ptr];
  Json before = leaf;
  if (leaf.is_boolean())
    leaf = !leaf.get<bool>();
  else if (leaf.is_number_integer())
    leaf = leaf.get<std::int64_t>() + 1;
  else if (leaf.is_number())
    leaf = leaf.get<double>() + 1.0;
  else if (leaf.is_string())
    leaf = leaf.get<std::string>() + "x";
  else
    leaf = 0;
  if (description) *description = ptr.to_string() + ": " + before.dump() + " -> " + leaf.dump();
  return out;
}

}  // namespace matchlab
