#include <string>

#include "doctest.h"
#include "matchlab/matchlab.h"

namespace {

struct Session {
  ml_session* s = ml_session_create();
  ~Session() { ml_session_destroy(s); }
  std::string result() const { return ml_session_result(s); }
  std::string error() const { return ml_session_last_error(s); }
};

const char* kZ8 = R"({"group":{"free_rank":0,"torsion":[8]},"A":[0,2,6],"B":[1,3,4]})";
const char* kZ4 = R"({"group":{"free_rank":0,"torsion":[4]},"A":[0,2],"B":[1,2]})";
const char* kF16 = R"({"field":{"p":2,"n":4},"A":[[1,0,0,0],[0,0,1,0]],"B":[[0,1,0,0],[0,0,0,1]]})";

}  // namespace

TEST_CASE("status names and exit codes") {
  CHECK(std::string(ml_version()) == "1.0.0");
  CHECK(std::string(ml_status_name(ML_OK)) == "ok");
  CHECK(ml_exit_code(ML_OK) == 0);
  CHECK(ml_exit_code(ML_NEGATIVE) == 1);
  CHECK(ml_exit_code(ML_VERIFY_FAILED) == 1);
  CHECK(ml_exit_code(ML_THEOREM_VIOLATION) == 2);
  CHECK(ml_exit_code(ML_INTERNAL) == 2);
  CHECK(ml_exit_code(ML_USAGE) == 3);
  CHECK(ml_exit_code(ML_INVALID_INPUT) == 3);
  CHECK(ml_exit_code(ML_BUDGET) == 3);
}

TEST_CASE("group queries") {
  Session s;
  CHECK(ml_group_find_matching(s.s, kZ8) == ML_OK);
  CHECK(s.result().find("\"matched\": true") != std::string::npos);
  CHECK(ml_group_check_local(s.s, kZ8) == ML_OK);
  CHECK(s.result().find("\"locally_matched\": true") != std::string::npos);
  CHECK(ml_group_find_matching(s.s, kZ4) == ML_NEGATIVE);
  CHECK(s.result().find("hall_violator") != std::string::npos);
  CHECK(ml_group_check_local(s.s, kZ4) == ML_NEGATIVE);
  CHECK(ml_group_decide_property(s.s, R"({"free_rank":0,"torsion":[7]})") == ML_OK);
  CHECK(ml_group_decide_property(s.s, R"({"free_rank":0,"torsion":[2,2]})") == ML_NEGATIVE);
  CHECK(ml_group_counterexample(s.s, R"({"free_rank":0,"torsion":[9]})") == ML_OK);
  CHECK(ml_group_counterexample(s.s, R"({"free_rank":1,"torsion":[]})") == ML_NEGATIVE);
  CHECK(ml_verify_kneser(s.s, kZ8) == ML_OK);
  CHECK(s.result().find("\"slack\"") != std::string::npos);
}

TEST_CASE("bad input is reported, never thrown") {
  Session s;
  CHECK(ml_group_find_matching(s.s, "{") == ML_INVALID_INPUT);
  CHECK(!s.error().empty());
  CHECK(ml_group_find_matching(s.s, R"({"group":{"free_rank":0,"torsion":[8]},"A":[0],"B":[0]})") ==
        ML_INVALID_INPUT);
  CHECK(ml_field_check_primitive(s.s, R"({"field":{"p":2,"n":4},"B":[[0,0,0,1],[0,1,0,0]]})") == ML_INVALID_INPUT);
  CHECK(s.error().find("[[0,1,0,0],[0,0,0,1]]") != std::string::npos);
  CHECK(ml_campaign_run(s.s, R"({"theorem":"thm99"})") == ML_USAGE);
  CHECK(ml_group_find_matching(s.s, nullptr) == ML_INVALID_INPUT);
  CHECK(ml_group_find_matching(nullptr, kZ8) == ML_USAGE);
}

TEST_CASE("field queries") {
  Session s;
  CHECK(ml_field_find_matched_basis(s.s, kF16) == ML_OK);
  CHECK(ml_field_check_primitive(s.s, kF16) == ML_OK);
  CHECK(ml_field_check_matched(s.s, kF16, R"({"mode":"exhaustive"})") == ML_OK);
  CHECK(ml_field_check_local(s.s, kF16, nullptr) == ML_OK);
  CHECK(ml_verify_linear_kneser(s.s, kF16) == ML_OK);
  const char* same = R"({"field":{"p":2,"n":2},"A":[[1,0]],"B":[[1,0]],"a_basis":[[1,0]]})";
  CHECK(ml_field_find_matched_basis(s.s, same) == ML_NEGATIVE);
  CHECK(s.result().find("criterion_violator") != std::string::npos);
}

TEST_CASE("certificates round-trip through the API") {
  Session s;
  REQUIRE(ml_group_find_matching(s.s, kZ8) == ML_OK);
  std::string res = s.result();
  auto start = res.find("\"certificate\"");
  REQUIRE(start != std::string::npos);
  // The certificate object is the value of the "certificate" member.
  auto open = res.find('{', start);
  int depth = 0;
  std::size_t end = open;
  for (; end < res.size(); ++end) {
    if (res[end] == '{') ++depth;
    if (res[end] == '}' && --depth == 0) break;
  }
  std::string cert = res.substr(open, end - open + 1);
  CHECK(ml_cert_verify(s.s, cert.c_str()) == ML_OK);
  auto pos = cert.find("\"version\": 1");
  REQUIRE(pos != std::string::npos);
  cert.replace(pos, 12, "\"version\": 7");
  CHECK(ml_cert_verify(s.s, cert.c_str()) == ML_VERIFY_FAILED);
  CHECK(ml_cert_verify_file(s.s, "/nonexistent/cert.json") == ML_VERIFY_FAILED);
}

TEST_CASE("campaign and hunt") {
  Session s;
  CHECK(ml_campaign_run(s.s, R"({"theorem":"cor36","trials":50,"seed":1})") == ML_OK);
  CHECK(s.result().find("\"passed\": true") != std::string::npos);
  CHECK(ml_hunt(s.s, R"({"domain":"group","groups":[{"free_rank":0,"torsion":[4]}]})") == ML_OK);
  CHECK(ml_hunt(s.s, R"({"domain":"group","groups":[{"free_rank":0,"torsion":[5]}]})") == ML_NEGATIVE);
}
