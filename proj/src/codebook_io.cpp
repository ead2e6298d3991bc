#include "scma/codebook_io.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <optional>

#include "scma/errors.hpp"

namespace scma {
namespace {

using nlohmann::json;

int read_int(const json& doc, const std::string& key) {
  const std::string path = "/" + key;
  if (!doc.contains(key)) throw SchemaError(path, "missing required field");
  const auto& v = doc.at(key);
  if (!v.is_number_integer()) throw SchemaError(path, "must be an integer");
  return v.get<int>();
}

double read_number(const json& v, const std::string& path) {
  if (!v.is_number()) throw SchemaError(path, "must be a number");
  return v.get<double>();
}

}  // namespace

CodebookCollection codebook_from_json(const json& doc) {
  if (!doc.is_object()) throw SchemaError("", "document must be an object");
  const int K = read_int(doc, "K");
  const int N = read_int(doc, "N");
  const int M = read_int(doc, "M");
  const int J = read_int(doc, "J");
  if (K < 1) throw SchemaError("/K", "must be at least 1");
  if (N < 1 || N > K) throw SchemaError("/N", "must satisfy 1 <= N <= K");
  if (M < 2 || (M & (M - 1)) != 0) {
    throw SchemaError("/M", "M must be a power of two >= 2, got " + std::to_string(M));
  }
  if (J < 1) throw SchemaError("/J", "must be at least 1");

  if (!doc.contains("mapping")) throw SchemaError("/mapping", "missing required field");
  const auto& mapping_doc = doc.at("mapping");
  if (!mapping_doc.is_array() || static_cast<int>(mapping_doc.size()) != J) {
    throw SchemaError("/mapping", "must be an array of J row-index lists");
  }
  std::vector<std::vector<int>> mapping;
  for (int j = 0; j < J; ++j) {
    const std::string path = "/mapping/" + std::to_string(j);
    const auto& rows = mapping_doc.at(j);
    if (!rows.is_array()) throw SchemaError(path, "must be an array");
    std::vector<int> r;
    for (std::size_t n = 0; n < rows.size(); ++n) {
      if (!rows[n].is_number_integer()) {
        throw SchemaError(path + "/" + std::to_string(n), "must be an integer");
      }
      r.push_back(rows[n].get<int>());
    }
    mapping.push_back(std::move(r));
  }

  std::optional<SystemDims> dims;
  try {
    dims.emplace(K, N, M, J, std::move(mapping));
  } catch (const std::invalid_argument& e) {
    throw SchemaError("/mapping", e.what());
  }

  if (!doc.contains("constellations")) {
    throw SchemaError("/constellations", "missing required field");
  }
  const auto& cons_doc = doc.at("constellations");
  if (!cons_doc.is_array() || static_cast<int>(cons_doc.size()) != J) {
    throw SchemaError("/constellations", "must be an array of J matrices");
  }
  std::vector<CMatrix> constellations;
  for (int j = 0; j < J; ++j) {
    const std::string path = "/constellations/" + std::to_string(j);
    const auto& entries = cons_doc.at(j);
    if (!entries.is_array() || static_cast<int>(entries.size()) != N * M) {
      throw SchemaError(path, "must list N*M complex entries in column-major order");
    }
    CMatrix c(N, M);
    for (int e = 0; e < N * M; ++e) {
      const std::string epath = path + "/" + std::to_string(e);
      const auto& z = entries.at(e);
      if (!z.is_array() || z.size() != 2) throw SchemaError(epath, "must be [re, im]");
      const double re = read_number(z[0], epath + "/0");
      const double im = read_number(z[1], epath + "/1");
      if (!std::isfinite(re) || !std::isfinite(im)) throw SchemaError(epath, "must be finite");
      c(e % N, e / N) = cplx(re, im);
    }
    constellations.push_back(std::move(c));
  }
  return CodebookCollection(*dims, std::move(constellations));
}

json codebook_to_json(const CodebookCollection& collection) {
  const auto& dims = collection.dims();
  json doc;
  doc["K"] = dims.resources();
  doc["N"] = dims.nonzeros();
  doc["M"] = dims.codebook_size();
  doc["J"] = dims.users();
  doc["mapping"] = dims.mapping();
  json cons = json::array();
  for (const auto& c : collection.constellations()) {
    json entries = json::array();
    for (Eigen::Index m = 0; m < c.cols(); ++m) {
      for (Eigen::Index n = 0; n < c.rows(); ++n) {
        entries.push_back({c(n, m).real(), c(n, m).imag()});
      }
    }
    cons.push_back(std::move(entries));
  }
  doc["constellations"] = std::move(cons);
  return doc;
}

CodebookCollection read_codebook(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open codebook file " + path.string());
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw SchemaError("", std::string("invalid JSON: ") + e.what());
  }
  return codebook_from_json(doc);
}

void write_codebook(const std::filesystem::path& path, const CodebookCollection& collection) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << std::setprecision(17) << codebook_to_json(collection).dump(2) << '\n';
}

std::filesystem::path bundled_codebook_path(const std::string& name) {
  if (name != "appendix-b" && name != "appendix-c") {
    throw ParameterError("unknown bundled codebook '" + name + "'");
  }
  return std::filesystem::path(SCMA_DATA_DIR) / (name + ".json");
}

}  // namespace scma
