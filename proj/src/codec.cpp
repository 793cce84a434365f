#include "matchlab/codec.hpp"

#include <algorithm>
#include <cstdio>

#include "matchlab/error.hpp"

namespace matchlab {

namespace {

const Json& field_of(const Json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) throw InvalidInput(std::string("missing field \"") + key + "\"");
  return j.at(key);
}

std::vector<std::int64_t> int_array(const Json& j, const char* what) {
  if (!j.is_array()) throw InvalidInput(std::string(what) + " must be an array of integers");
  std::vector<std::int64_t> out;
  for (const auto& x : j) {
    if (!x.is_number_integer()) throw InvalidInput(std::string(what) + " must be an array of integers");
    out.push_back(x.get<std::int64_t>());
  }
  return out;
}

linalg::Vec residue_array(const Json& j, std::uint32_t p, std::size_t len, const char* what) {
  auto raw = int_array(j, what);
  if (raw.size() != len)
    throw InvalidInput(std::string(what) + " must have length " + std::to_string(len) + ", got " +
                       std::to_string(raw.size()));
  linalg::Vec out;
  for (auto x : raw) {
    if (x < 0 || x >= static_cast<std::int64_t>(p))
      throw InvalidInput(std::string(what) + " entries must lie in [0," + std::to_string(p) + ")");
    out.push_back(static_cast<std::uint32_t>(x));
  }
  return out;
}

}  // namespace

Json parse_json(const std::string& text) {
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw InvalidInput(std::string("JSON parse error: ") + e.what());
  }
}

std::string canonical_dump(const Json& j) { return j.dump(-1, ' ', false, Json::error_handler_t::strict); }

Json to_json(const GroupSpec& g) { return {{"free_rank", g.free_rank()}, {"torsion", g.torsion()}}; }

GroupSpec group_from_json(const Json& j) {
  const Json& r = field_of(j, "free_rank");
  if (!r.is_number_integer()) throw InvalidInput("free_rank must be an integer");
  auto torsion = j.contains("torsion") ? int_array(j.at("torsion"), "torsion") : std::vector<std::int64_t>{};
  return GroupSpec::make(r.get<int>(), torsion);
}

Json to_json(const GroupElement& x) { return {{"free", x.free}, {"torsion", x.torsion}}; }

GroupElement element_from_json(const Json& j, const GroupSpec& g) {
  GroupElement x;
  if (j.is_number_integer()) {
    auto v = j.get<std::int64_t>();
    if (g.free_rank() == 1 && g.torsion().empty())
      x.free = {v};
    else if (g.free_rank() == 0 && g.torsion().size() == 1)
      x.torsion = {v};
    else
      throw InvalidInput("integer shorthand needs a group with a single component");
  } else {
    x.free = int_array(field_of(j, "free"), "free");
    x.torsion = int_array(field_of(j, "torsion"), "torsion");
  }
  if (!g.contains(x)) throw InvalidInput("element " + to_string(x) + " is not a canonical element of " + g.to_string());
  return x;
}

Json to_json(const GroupSubset& s) {
  Json out = Json::array();
  for (const auto& x : s) out.push_back(to_json(x));
  return out;
}

GroupSubset subset_from_json(const Json& j, const GroupSpec& g) {
  if (!j.is_array()) throw InvalidInput("subset must be an array of elements");
  std::vector<GroupElement> xs;
  for (const auto& e : j) xs.push_back(element_from_json(e, g));
  GroupSubset s(g, xs);
  if (s.size() != xs.size()) throw InvalidInput("subset contains duplicate elements");
  return s;
}

Json to_json(const Subgroup& h) {
  Json gens = Json::array();
  for (const auto& x : h.generators()) gens.push_back(to_json(x));
  return {{"generators", gens}, {"elements", to_json(h.elements())}};
}

Subgroup subgroup_from_json(const Json& j, const GroupSpec& g) {
  GroupSubset elems = subset_from_json(field_of(j, "elements"), g);
  if (!is_subgroup(elems)) throw InvalidInput("element set is not a subgroup");
  std::vector<GroupElement> gens;
  for (const auto& e : field_of(j, "generators")) gens.push_back(element_from_json(e, g));
  Subgroup closure = Subgroup::generated_by(g, gens);
  if (!(closure.elements() == elems)) throw InvalidInput("subgroup elements differ from the closure of its generators");
  return closure;
}

Json to_json(const FieldCtx& f) { return {{"p", f.p()}, {"n", f.n()}, {"modulus", f.modulus()}}; }

Field field_from_json(const Json& j) {
  const Json& p = field_of(j, "p");
  const Json& n = field_of(j, "n");
  if (!p.is_number_integer() || !n.is_number_integer() || p.get<std::int64_t>() < 2 || n.get<std::int64_t>() < 1 ||
      p.get<std::int64_t>() > 65535 || n.get<std::int64_t>() > 64)
    throw InvalidInput("field needs integers p >= 2 and n >= 1");
  std::optional<poly::Poly> modulus;
  if (j.contains("modulus") && !j.at("modulus").is_null()) {
    auto raw = int_array(j.at("modulus"), "modulus");
    poly::Poly m;
    for (auto c : raw) {
      if (c < 0 || c >= p.get<std::int64_t>()) throw InvalidInput("modulus coefficients must be residues mod p");
      m.push_back(static_cast<std::uint32_t>(c));
    }
    modulus = std::move(m);
  }
  return FieldCtx::make(p.get<std::uint32_t>(), n.get<unsigned>(), modulus);
}

Json to_json(const FqElement& x) { return x.coeffs; }

FqElement fq_from_json(const Json& j, const FieldCtx& f) { return FqElement{residue_array(j, f.p(), f.n(), "field element")}; }

Json to_json(const Subspace& s) {
  Json out = Json::array();
  for (const auto& r : s.rows()) out.push_back(r);
  return out;
}

Subspace subspace_from_json(const Json& j, const Field& f) {
  if (!j.is_array()) throw InvalidInput("subspace must be an array of rows");
  linalg::Rows rows;
  for (const auto& r : j) rows.push_back(residue_array(r, f->p(), f->n(), "subspace row"));
  if (auto s = Subspace::from_canonical_rows(f, rows)) return *s;
  std::vector<FqElement> vs;
  for (const auto& r : rows) vs.push_back(FqElement{r});
  Subspace hint = Subspace::span(f, vs);
  throw InvalidInput("subspace rows are not in canonical reduced echelon form; use " + canonical_dump(to_json(hint)));
}

Json to_json(const SubfieldDesc& h) { return {{"d", h.d}, {"space", to_json(h.space)}}; }

Json to_json(const std::vector<FqElement>& basis) {
  Json out = Json::array();
  for (const auto& x : basis) out.push_back(to_json(x));
  return out;
}

std::vector<FqElement> basis_from_json(const Json& j, const FieldCtx& f) {
  if (!j.is_array()) throw InvalidInput("basis must be an array of field elements");
  std::vector<FqElement> out;
  for (const auto& x : j) out.push_back(fq_from_json(x, f));
  return out;
}

GroupInstance group_instance_from_json(const Json& j) {
  GroupSpec g = group_from_json(field_of(j, "group"));
  return GroupInstance{subset_from_json(field_of(j, "A"), g), subset_from_json(field_of(j, "B"), g)};
}

Json to_json(const GroupInstance& inst) {
  return {{"group", to_json(inst.A.group())}, {"A", to_json(inst.A)}, {"B", to_json(inst.B)}};
}

FieldInstance field_instance_from_json(const Json& j) {
  FieldInstance inst;
  inst.field = field_from_json(field_of(j, "field"));
  if (j.contains("A")) inst.A = subspace_from_json(j.at("A"), inst.field);
  if (j.contains("B")) inst.B = subspace_from_json(j.at("B"), inst.field);
  if (j.contains("a_basis")) inst.a_basis = basis_from_json(j.at("a_basis"), *inst.field);
  return inst;
}

Json to_json(const FieldInstance& inst) {
  Json out = {{"field", to_json(*inst.field)}};
  if (inst.A) out["A"] = to_json(*inst.A);
  if (inst.B) out["B"] = to_json(*inst.B);
  if (inst.a_basis) out["a_basis"] = to_json(*inst.a_basis);
  return out;
}

std::uint64_t fnv1a64(const std::string& bytes) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  return h;
}

std::string hex64(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

}  // namespace matchlab
