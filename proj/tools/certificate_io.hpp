#pragma once

#include <json.hpp>

#include "scma/sdp.hpp"

namespace scma::cli {

struct StoredCertificate {
  int users = 0;
  double power = 1.0;
  DualCertificate certificate;
};

// {"users", "power", "bound_sq", "med_bound", "status", "pairs", "lambda", "mu", ...};
// pairs are one-based pair indices.
nlohmann::json certificate_to_json(const StoredCertificate& stored);
// Throws SchemaError with a JSON pointer.
StoredCertificate certificate_from_json(const nlohmann::json& doc);

}  // namespace scma::cli
