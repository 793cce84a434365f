#include <filesystem>
#include <fstream>
#include <random>
#include <set>

#include "doctest.h"
#include "matchlab/certificate.hpp"
#include "matchlab/error.hpp"

using namespace matchlab;
namespace fs = std::filesystem;

namespace {

GroupInstance z8_instance() {
  return group_instance_from_json(parse_json(R"({"group":{"free_rank":0,"torsion":[8]},"A":[0,2,6],"B":[1,3,4]})"));
}

Json pair_json(std::int64_t a, std::int64_t b) {
  return Json::array({Json{{"free", Json::array()}, {"torsion", {a}}}, Json{{"free", Json::array()}, {"torsion", {b}}}});
}

std::vector<Json> sample_certificates() {
  std::vector<Json> out;
  auto inst = z8_instance();
  out.push_back(make_certificate(std::get<Matching>(find_matching(inst.A, inst.B))));
  auto z4 = group_instance_from_json(parse_json(R"({"group":{"free_rank":0,"torsion":[4]},"A":[0,2],"B":[1,2]})"));
  out.push_back(make_certificate(std::get<HallViolator>(find_matching(z4.A, z4.B))));
  auto H = Subgroup::generated_by(inst.A.group(), {inst.A.group().torsion_element({4})});
  out.push_back(make_certificate(inst.A, inst.B, *find_local_matching(inst.A, inst.B, H)));
  out.push_back(make_certificate(kneser_verify(inst.A, inst.B)));

  auto f16 = FieldCtx::make(2, 4);
  std::mt19937_64 rng(3);
  int bm = 0, cv = 0, lk = 0, ll = 0;
  while (bm < 3 || cv < 3 || lk < 3 || ll < 3) {
    auto A = random_subspace(f16, 2, rng), B = random_subspace(f16, 2, rng);
    auto a = random_basis(A, rng);
    auto r = find_matched_basis(a, B, A);
    if (auto* m = std::get_if<BasisMatching>(&r); m && bm < 3) {
      out.push_back(make_certificate(*m));
      ++bm;
    }
    if (auto* v = std::get_if<CriterionViolator>(&r); v && cv < 3) {
      out.push_back(make_certificate(a, A, B, *v));
      ++cv;
    }
    if (lk < 3) {
      out.push_back(make_certificate(linear_kneser_verify(A, B)));
      ++lk;
    }
    if (ll < 3 && !B.contains(f16->one())) {
      LocalSearchConfig cfg;
      auto rep = linear_locally_matched(A, B, cfg);
      if (!rep.qualifying.empty() || ll == 0) {
        out.push_back(make_certificate(A, B, rep, cfg));
        ++ll;
      }
    }
  }
  return out;
}

}  // namespace

TEST_CASE("group codec") {
  auto g = group_from_json(parse_json(R"({"free_rank":0,"torsion":[2,3]})"));
  CHECK(g == GroupSpec::cyclic(6));
  CHECK(canonical_dump(to_json(g)) == R"({"free_rank":0,"torsion":[6]})");
  auto inst = z8_instance();
  CHECK(inst.A.size() == 3);
  CHECK(group_instance_from_json(to_json(inst)).B == inst.B);
  CHECK_THROWS_AS(subset_from_json(parse_json("[1,1]"), inst.A.group()), InvalidInput);
  CHECK_THROWS_AS(subset_from_json(parse_json("[9]"), inst.A.group()), InvalidInput);
  CHECK_THROWS_AS(parse_json("{"), InvalidInput);
  auto h = parse_json(R"({"generators":[2],"elements":[0,2,4,6]})");
  CHECK(subgroup_from_json(h, inst.A.group()).order() == 4);
  CHECK_THROWS_AS(subgroup_from_json(parse_json(R"({"generators":[2],"elements":[0,4]})"), inst.A.group()),
                  InvalidInput);
}

TEST_CASE("field codec") {
  auto fi = field_instance_from_json(
      parse_json(R"({"field":{"p":2,"n":4},"A":[[1,0,0,0],[0,0,1,0]],"B":[[0,1,0,0],[0,0,0,1]]})"));
  CHECK(fi.field->modulus() == poly::Poly{1, 1, 0, 0, 1});
  CHECK(fi.A->dim() == 2);
  CHECK(canonical_dump(to_json(*fi.field)) == R"({"modulus":[1,1,0,0,1],"n":4,"p":2})");
  try {
    field_instance_from_json(parse_json(R"({"field":{"p":2,"n":4},"B":[[0,0,0,1],[0,1,0,0]]})"));
    FAIL("non-canonical rows accepted");
  } catch (const InvalidInput& e) {
    CHECK(std::string(e.what()).find("[[0,1,0,0],[0,0,0,1]]") != std::string::npos);
  }
  CHECK_THROWS_AS(field_instance_from_json(parse_json(R"({"field":{"p":2,"n":4},"B":[[0,2,0,0]]})")), InvalidInput);
  CHECK_THROWS_AS(field_instance_from_json(parse_json(R"({"field":{"p":2,"n":2,"modulus":[1,0,1]}})")), InvalidInput);
  auto round = field_instance_from_json(to_json(fi));
  CHECK(*round.A == *fi.A);
  CHECK(*round.B == *fi.B);
}

TEST_CASE("matching certificate for the Z/8 instance") {
  auto inst = z8_instance();
  auto cert = make_certificate(std::get<Matching>(find_matching(inst.A, inst.B)));
  CHECK(cert["kind"] == "matching");
  CHECK(cert["schema"] == kCertSchema);
  CHECK(cert["version"] == kCertVersion);
  CHECK(verify_certificate(cert).ok);
  CHECK(parse_json(cert.dump()) == cert);

  Json bad = cert;
  bad["pairs"] = Json::array({pair_json(0, 1), pair_json(2, 3), pair_json(6, 4)});
  auto r = verify_certificate(bad);
  CHECK(!r.ok);
  CHECK(r.failure == "6+4=2∈A");

  Json stale = cert;
  stale["version"] = 0;
  CHECK(verify_certificate(stale).failure.find("stale") != std::string::npos);
  Json moved = cert;
  moved["digest"] = "0000000000000000";
  CHECK(verify_certificate(moved).failure.find("digest") != std::string::npos);
  Json unknown = cert;
  unknown["kind"] = "mystery";
  CHECK(!verify_certificate(unknown).ok);
}

TEST_CASE("Kneser certificate slack is rechecked") {
  auto inst = z8_instance();
  auto cert = make_certificate(kneser_verify(inst.A, inst.B));
  CHECK(verify_certificate(cert).ok);
  cert["slack"] = cert["slack"].get<std::int64_t>() + 1;
  CHECK(verify_certificate(cert).failure.find("slack") != std::string::npos);
}

TEST_CASE("every kind verifies and survives a round trip") {
  auto certs = sample_certificates();
  std::set<std::string> kinds;
  for (const auto& c : certs) {
    CAPTURE(c.dump());
    kinds.insert(c["kind"].get<std::string>());
    CHECK(verify_certificate(c).ok);
    CHECK(parse_json(canonical_dump(c)) == c);
    CHECK(certificate_digest(c) == c["digest"].get<std::string>());
  }
  CHECK(kinds.size() == 8);
}

TEST_CASE("single-field tampering is always caught") {
  auto certs = sample_certificates();
  std::mt19937_64 rng(2024);
  for (int i = 0; i < 300; ++i) {
    const auto& c = certs[rng() % certs.size()];
    std::string what;
    auto t = tamper_certificate(c, rng, &what);
    CAPTURE(what);
    CHECK(t != c);
    CHECK(!verify_certificate(t).ok);
  }
}

TEST_CASE("content-addressed store") {
  auto dir = fs::temp_directory_path() / "matchlab_store_test";
  fs::remove_all(dir);
  auto inst = z8_instance();
  auto cert = make_certificate(std::get<Matching>(find_matching(inst.A, inst.B)));
  auto name = store_certificate(dir.string(), cert);
  CHECK(name == hex64(fnv1a64(canonical_dump(cert))) + ".json");
  CHECK(store_certificate(dir.string(), cert) == name);
  CHECK(verify_certificate_file((dir / name).string()).ok);
  std::size_t files = 0;
  for ([[maybe_unused]] const auto& e : fs::directory_iterator(dir)) ++files;
  CHECK(files == 1);

  std::ofstream(dir / "broken.json") << "{not json";
  CHECK(verify_certificate_file((dir / "broken.json").string()).failure.find("malformed") != std::string::npos);
  CHECK(!verify_certificate_file((dir / "absent.json").string()).ok);
  fs::remove_all(dir);
}

TEST_CASE("hash primitives") {
  // Published FNV-1a test vectors.
  CHECK(fnv1a64("") == 0xcbf29ce484222325ULL);
  CHECK(fnv1a64("a") == 0xaf63dc4c8601ec8cULL);
  CHECK(hex64(0xabcULL) == "0000000000000abc");
}
