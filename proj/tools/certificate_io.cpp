#include "certificate_io.hpp"

#include <cmath>
#include <string>

#include "scma/errors.hpp"

namespace scma::cli {
namespace {

const nlohmann::json& field(const nlohmann::json& doc, const char* key) {
  if (!doc.contains(key)) throw SchemaError(std::string("/") + key, "missing required field");
  return doc.at(key);
}

template <typename T>
std::vector<T> number_list(const nlohmann::json& doc, const char* key) {
  const auto& arr = field(doc, key);
  if (!arr.is_array()) throw SchemaError(std::string("/") + key, "expected an array");
  std::vector<T> out;
  out.reserve(arr.size());
  for (std::size_t i = 0; i < arr.size(); ++i) {
    const auto& v = arr[i];
    const std::string where = std::string("/") + key + "/" + std::to_string(i);
    if constexpr (std::is_integral_v<T>) {
      if (!v.is_number_unsigned() || v.get<T>() == 0) {
        throw SchemaError(where, "expected a positive integer");
      }
    } else {
      if (!v.is_number() || !std::isfinite(v.get<double>())) {
        throw SchemaError(where, "expected a finite number");
      }
    }
    out.push_back(v.get<T>());
  }
  return out;
}

}  // namespace

nlohmann::json certificate_to_json(const StoredCertificate& stored) {
  const auto& c = stored.certificate;
  nlohmann::json j;
  j["users"] = stored.users;
  j["power"] = stored.power;
  j["bound_sq"] = c.bound;
  j["med_bound"] = std::sqrt(std::max(c.bound, 0.0));
  j["status"] = to_string(c.status);
  j["min_slack_eigenvalue"] = c.min_slack_eigenvalue;
  j["lambda_sum"] = c.lambda_sum;
  j["pairs"] = c.pairs;
  j["lambda"] = c.lambda;
  j["mu"] = std::vector<double>(c.mu.data(), c.mu.data() + c.mu.size());
  return j;
}

StoredCertificate certificate_from_json(const nlohmann::json& doc) {
  if (!doc.is_object()) throw SchemaError("", "certificate must be a JSON object");
  StoredCertificate s;
  const auto& users = field(doc, "users");
  if (!users.is_number_integer() || users.get<int>() < 1) {
    throw SchemaError("/users", "expected a positive integer");
  }
  s.users = users.get<int>();
  const auto& power = field(doc, "power");
  if (!power.is_number() || !(power.get<double>() > 0.0)) {
    throw SchemaError("/power", "expected a positive number");
  }
  s.power = power.get<double>();
  auto& c = s.certificate;
  c.pairs = number_list<std::uint64_t>(doc, "pairs");
  c.lambda = number_list<double>(doc, "lambda");
  if (c.lambda.size() != c.pairs.size()) {
    throw SchemaError("/lambda", "length differs from /pairs");
  }
  const auto mu = number_list<double>(doc, "mu");
  if (static_cast<int>(mu.size()) != s.users) throw SchemaError("/mu", "expected one entry per user");
  c.mu = Eigen::Map<const Eigen::VectorXd>(mu.data(), static_cast<Eigen::Index>(mu.size()));
  const auto& bound = field(doc, "bound_sq");
  if (!bound.is_number()) throw SchemaError("/bound_sq", "expected a number");
  c.bound = bound.get<double>();
  return s;
}

}  // namespace scma::cli
