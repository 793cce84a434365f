#include "matchlab/matchlab.h"

#include <algorithm>
#include <functional>
#include <string>

#include "matchlab/abelian_matching.hpp"
#include "matchlab/campaign.hpp"
#include "matchlab/certificate.hpp"
#include "matchlab/codec.hpp"
#include "matchlab/error.hpp"
#include "matchlab/linear_matching.hpp"

struct ml_session {
  std::string result = "null";
  std::string error;
};

namespace {

using namespace matchlab;

ml_status guarded(ml_session* s, const std::function<ml_status(Json&)>& body) {
  if (!s) return ML_USAGE;
  s->error.clear();
  s->result = "null";
  Json out;
  try {
    ml_status st = body(out);
    s->result = out.dump(2);
    return st;
  } catch (const TheoremViolation& e) {
    s->error = e.what();
    if (!out.is_null()) s->result = out.dump(2);
    return ML_THEOREM_VIOLATION;
  } catch (const BudgetExceeded& e) {
    s->error = e.what();
    return ML_BUDGET;
  } catch (const InvalidInput& e) {
    s->error = e.what();
    return ML_INVALID_INPUT;
  } catch (const Json::exception& e) {
    s->error = std::string("invalid JSON payload: ") + e.what();
    return ML_INVALID_INPUT;
  } catch (const std::exception& e) {
    s->error = e.what();
    return ML_INTERNAL;
  }
}

Json parse(const char* text) {
  if (!text) throw InvalidInput("missing JSON payload");
  return parse_json(text);
}

Json parse_options(const char* text) {
  if (!text || !*text) return Json::object();
  Json j = parse_json(text);
  if (!j.is_object()) throw InvalidInput("options must be a JSON object");
  return j;
}

BasisMode basis_mode_from(const Json& o) {
  BasisMode m;
  std::string kind = o.value("mode", std::string("automatic"));
  if (kind == "exhaustive")
    m.kind = BasisMode::Kind::exhaustive;
  else if (kind == "sample")
    m.kind = BasisMode::Kind::sample;
  else if (kind != "automatic")
    throw InvalidInput("mode must be exhaustive, sample or automatic");
  m.trials = o.value("trials", m.trials);
  m.seed = o.value("seed", m.seed);
  m.budget = o.value("budget", m.budget);
  return m;
}

Json matched_json(const MatchedReport& r, const Subspace& A, const Subspace& B) {
  Json out = {{"matched", r.matched},
              {"mode", r.mode},
              {"bases_checked", r.bases_checked},
              {"trials", r.trials},
              {"seed", r.seed}};
  out["certificate"] = r.matched ? Json(nullptr) : make_certificate(*r.failing_basis, A, B, *r.violator);
  return out;
}

struct FieldPair {
  FieldInstance inst;
  Subspace A, B;
};

FieldPair field_pair(const char* text) {
  FieldPair fp{field_instance_from_json(parse(text)), {}, {}};
  if (!fp.inst.A || !fp.inst.B) throw InvalidInput("instance needs A and B");
  fp.A = *fp.inst.A;
  fp.B = *fp.inst.B;
  return fp;
}

}  // namespace

extern "C" {

const char* ml_version(void) { return "1.0.0"; }

const char* ml_status_name(ml_status s) {
  switch (s) {
    case ML_OK: return "ok";
    case ML_NEGATIVE: return "negative";
    case ML_THEOREM_VIOLATION: return "theorem_violation";
    case ML_USAGE: return "usage";
    case ML_INVALID_INPUT: return "invalid_input";
    case ML_BUDGET: return "budget_exceeded";
    case ML_VERIFY_FAILED: return "verify_failed";
    case ML_INTERNAL: return "internal";
  }
  return "unknown";
}

int ml_exit_code(ml_status s) {
  switch (s) {
    case ML_OK: return 0;
    case ML_NEGATIVE:
    case ML_VERIFY_FAILED: return 1;
    case ML_THEOREM_VIOLATION:
    case ML_INTERNAL: return 2;
    default: return 3;
  }
}

ml_session* ml_session_create(void) { return new (std::nothrow) ml_session(); }
void ml_session_destroy(ml_session* s) { delete s; }
const char* ml_session_result(const ml_session* s) { return s ? s->result.c_str() : ""; }
const char* ml_session_last_error(const ml_session* s) { return s ? s->error.c_str() : ""; }

ml_status ml_group_find_matching(ml_session* s, const char* instance_json) {
  return guarded(s, [&](Json& out) {
    auto inst = group_instance_from_json(parse(instance_json));
    auto res = find_matching(inst.A, inst.B);
    if (auto* m = std::get_if<Matching>(&res)) {
      out = {{"matched", true}, {"certificate", make_certificate(*m)}};
      return ML_OK;
    }
    out = {{"matched", false}, {"certificate", make_certificate(std::get<HallViolator>(res))}};
    return ML_NEGATIVE;
  });
}

ml_status ml_group_check_local(ml_session* s, const char* instance_json) {
  return guarded(s, [&](Json& out) {
    auto inst = group_instance_from_json(parse(instance_json));
    auto report = check_local(inst.A, inst.B);
    Json q = Json::array();
    for (const auto& e : report.qualifying) {
      Json entry = {{"H", to_json(e.H)}, {"witness", to_json(e.witness)}};
      if (e.matching) {
        Json cert = make_certificate(inst.A, inst.B, *e.matching);
        entry["local_matching"] = {{"subdomain", to_json(e.matching->subdomain)},
                                   {"pairs", cert["pairs"]},
                                   {"certificate", cert}};
      } else {
        entry["local_matching"] = nullptr;
      }
      q.push_back(entry);
    }
    auto res = find_matching(inst.A, inst.B);
    const bool matched = std::holds_alternative<Matching>(res);
    out = {{"locally_matched", report.locally_matched},
           {"qualifying", q},
           {"matched", matched},
           {"matching", matched ? make_certificate(std::get<Matching>(res))
                                : make_certificate(std::get<HallViolator>(res))}};
    if (report.locally_matched && !matched)
      throw TheoremViolation("locally matched pair without a matching: " + to_string(inst.A) + " -> " +
                             to_string(inst.B));
    return report.locally_matched ? ML_OK : ML_NEGATIVE;
  });
}

ml_status ml_verify_kneser(ml_session* s, const char* instance_json) {
  return guarded(s, [&](Json& out) {
    auto inst = group_instance_from_json(parse(instance_json));
    auto k = kneser_verify(inst.A, inst.B);
    out = {{"slack", k.slack}, {"certificate", make_certificate(k)}};
    return ML_OK;
  });
}

ml_status ml_group_decide_property(ml_session* s, const char* group_json) {
  return guarded(s, [&](Json& out) {
    GroupSpec g = group_from_json(parse(group_json));
    bool prop = decide_matching_property(g);
    auto ng = smallest_subgroup_order(g);
    out = {{"group", to_json(g)}, {"matching_property", prop}, {"n_G", ng ? Json(*ng) : Json("infinite")}};
    return prop ? ML_OK : ML_NEGATIVE;
  });
}

ml_status ml_group_counterexample(ml_session* s, const char* group_json) {
  return guarded(s, [&](Json& out) {
    GroupSpec g = group_from_json(parse(group_json));
    auto ce = construct_counterexample(g);
    out = {{"group", to_json(g)}};
    if (!ce) {
      out["counterexample"] = nullptr;
      return ML_NEGATIVE;
    }
    out["counterexample"] = {{"H", to_json(ce->H)},
                             {"g", to_json(ce->outside)},
                             {"A", to_json(ce->A)},
                             {"B", to_json(ce->B)},
                             {"certificate", make_certificate(ce->violator)}};
    return ML_OK;
  });
}

ml_status ml_field_find_matched_basis(ml_session* s, const char* instance_json) {
  return guarded(s, [&](Json& out) {
    auto fp = field_pair(instance_json);
    BasisSeq a = BasisSeq::make(fp.inst.field, fp.inst.a_basis ? *fp.inst.a_basis : fp.A.basis());
    auto res = find_matched_basis(a, fp.B, fp.A);
    if (auto* m = std::get_if<BasisMatching>(&res)) {
      out = {{"matched", true}, {"b_basis", to_json(m->b_basis.vectors)}, {"certificate", make_certificate(*m)}};
      return ML_OK;
    }
    const auto& v = std::get<CriterionViolator>(res);
    out = {{"matched", false}, {"certificate", make_certificate(a, fp.A, fp.B, v)}};
    return ML_NEGATIVE;
  });
}

ml_status ml_field_check_matched(ml_session* s, const char* instance_json, const char* options_json) {
  return guarded(s, [&](Json& out) {
    auto fp = field_pair(instance_json);
    auto r = is_matched(fp.A, fp.B, basis_mode_from(parse_options(options_json)));
    out = matched_json(r, fp.A, fp.B);
    return r.matched ? ML_OK : ML_NEGATIVE;
  });
}

ml_status ml_field_check_primitive(ml_session* s, const char* instance_json) {
  return guarded(s, [&](Json& out) {
    auto inst = field_instance_from_json(parse(instance_json));
    if (!inst.B) throw InvalidInput("instance needs B");
    auto r = primitive_check(*inst.B);
    out = {{"primitive", r.primitive}, {"offender", r.offender ? to_json(*r.offender) : Json(nullptr)}};
    return r.primitive ? ML_OK : ML_NEGATIVE;
  });
}

ml_status ml_field_check_local(ml_session* s, const char* instance_json, const char* options_json) {
  return guarded(s, [&](Json& out) {
    auto fp = field_pair(instance_json);
    Json o = parse_options(options_json);
    LocalSearchConfig lc;
    lc.subspace_budget = o.value("subspace_budget", lc.subspace_budget);
    lc.subspace_trials = o.value("subspace_trials", lc.subspace_trials);
    lc.seed = o.value("seed", lc.seed);
    lc.basis_mode = basis_mode_from(o);
    auto r = evaluate_theorem51(fp.A, fp.B, lc, lc.basis_mode);
    Json q = Json::array();
    for (const auto& e : r.local.qualifying)
      q.push_back({{"H", to_json(e.H)},
                   {"h_cap_b", to_json(e.h_cap_b)},
                   {"module", to_json(e.module)},
                   {"a_tilde", e.a_tilde ? to_json(*e.a_tilde) : Json(nullptr)},
                   {"search_mode", e.search_mode},
                   {"candidates_checked", e.candidates_checked}});
    out = {{"locally_matched", r.local.locally_matched},
           {"qualifying", q},
           {"matched", matched_json(r.matched, fp.A, fp.B)},
           {"implication_holds", r.implication_holds},
           {"certificate", make_certificate(fp.A, fp.B, r.local, lc)}};
    if (!r.implication_holds) {
      s->error = "locally matched but not matched";
      return ML_THEOREM_VIOLATION;
    }
    return r.local.locally_matched ? ML_OK : ML_NEGATIVE;
  });
}

ml_status ml_verify_linear_kneser(ml_session* s, const char* instance_json) {
  return guarded(s, [&](Json& out) {
    auto fp = field_pair(instance_json);
    auto k = linear_kneser_verify(fp.A, fp.B);
    out = {{"slack", k.slack}, {"stabilizer_degree", k.H.d}, {"certificate", make_certificate(k)}};
    return ML_OK;
  });
}

ml_status ml_campaign_run(ml_session* s, const char* config_json) {
  if (!s) return ML_USAGE;
  ml_status st = guarded(s, [&](Json& out) {
    CampaignConfig cfg;
    try {
      cfg = campaign_config_from_json(parse(config_json));
      const auto& t = campaign_targets();
      if (std::find(t.begin(), t.end(), cfg.theorem) == t.end())
        throw InvalidInput("unknown theorem id \"" + cfg.theorem + "\"");
    } catch (const InvalidInput& e) {
      s->error = e.what();
      return ML_USAGE;
    }
    auto report = run_campaign(cfg);
    out = report.to_json();
    out["wall_seconds"] = report.wall_seconds;
    return report.passed() ? ML_OK : ML_THEOREM_VIOLATION;
  });
  if (st == ML_INVALID_INPUT || st == ML_BUDGET) return ML_USAGE;
  return st;
}

ml_status ml_hunt(ml_session* s, const char* config_json) {
  return guarded(s, [&](Json& out) {
    auto r = hunt_counterexample(hunt_config_from_json(parse(config_json)));
    out = r.findings;
    if (r.violation) return ML_THEOREM_VIOLATION;
    return r.found ? ML_OK : ML_NEGATIVE;
  });
}

ml_status ml_cert_verify(ml_session* s, const char* certificate_json) {
  return guarded(s, [&](Json& out) {
    Json cert;
    try {
      cert = parse(certificate_json);
    } catch (const InvalidInput& e) {
      out = {{"ok", false}, {"failure", e.what()}};
      return ML_VERIFY_FAILED;
    }
    auto r = verify_certificate(cert);
    out = {{"ok", r.ok}, {"failure", r.failure}, {"kind", cert.is_object() ? cert.value("kind", Json(nullptr)) : Json(nullptr)}};
    return r.ok ? ML_OK : ML_VERIFY_FAILED;
  });
}

ml_status ml_cert_verify_file(ml_session* s, const char* path) {
  return guarded(s, [&](Json& out) {
    if (!path) throw InvalidInput("missing path");
    auto r = verify_certificate_file(path);
    out = {{"ok", r.ok}, {"failure", r.failure}, {"path", path}};
    return r.ok ? ML_OK : ML_VERIFY_FAILED;
  });
}

}  // extern "C"
