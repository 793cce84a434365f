#pragma once

// Self-contained certificates. Each one embeds its instance, carries a schema tag and
// version, and ends with a digest of its own canonical bytes. Verification re-derives
// every claim from the instance with module primitives before comparing the digest.
//
// Kinds: matching, hall_violator, local_matching, kneser (groups);
//        basis_matching, criterion_violator, linear_kneser, linear_local (fields).

#include <random>
#include <string>

#include "matchlab/abelian_matching.hpp"
#include "matchlab/codec.hpp"
#include "matchlab/linear_matching.hpp"

namespace matchlab {

inline constexpr const char* kCertSchema = "matchlab.certificate";
inline constexpr int kCertVersion = 1;

Json make_certificate(const Matching& m);
Json make_certificate(const HallViolator& v);
Json make_certificate(const GroupSubset& A, const GroupSubset& B, const LocalMatching& lm);
Json make_certificate(const KneserCertificate& k);
Json make_certificate(const BasisMatching& m);
/// J is written 1-based.
Json make_certificate(const BasisSeq& a_basis, const Subspace& A, const Subspace& B, const CriterionViolator& v);
Json make_certificate(const LinearKneserCertificate& k);
Json make_certificate(const Subspace& A, const Subspace& B, const LinearLocalReport& r, const LocalSearchConfig& cfg);

/// FNV-1a-64 (hex) of the canonical dump without the "digest" member.
std::string certificate_digest(const Json& cert);

CheckResult verify_certificate(const Json& cert);
/// Reads, parses and verifies; unreadable or malformed files fail with a message.
CheckResult verify_certificate_file(const std::string& path);

/// Writes dir/<hash>.json unless it already exists; returns the file name.
std::string store_certificate(const std::string& dir, const Json& cert);

/// Changes exactly one leaf value, chosen uniformly. The description names the path.
Json tamper_certificate(const Json& cert, std::mt19937_64& rng, std::string* description = nullptr);

}  // namespace matchlab
