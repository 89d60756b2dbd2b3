#pragma once

#include <string>

#include "json.hpp"

#include "regulo/lemma_audit.hpp"
#include "regulo/unimodality.hpp"

namespace regulo {

inline constexpr const char* kToolVersion = "regulo 1.0.0";

// Big coefficients are written as decimal strings.
nlohmann::json to_json(const UnimodalityVerdict& v);
nlohmann::json to_json(const WindowCheck& w);
nlohmann::json to_json(const LevelRecord& level);
nlohmann::json to_json(const Witness& w);
nlohmann::json to_json(const VerificationCertificate& cert);
nlohmann::json to_json(const K4ProfileReport& report);
nlohmann::json to_json(const RecurrenceCheck& check);
nlohmann::json to_json(const audit::QuadratureResult& q);
nlohmann::json to_json(const audit::SplitIntegral& s);
nlohmann::json to_json(const audit::AuditReport& report);

/// Inverse of to_json(VerificationCertificate); used to resume a run.
VerificationCertificate certificate_from_json(const nlohmann::json& j);

}  // namespace regulo
