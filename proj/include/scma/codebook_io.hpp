#pragma once

#include <filesystem>
#include <string>

#include <json.hpp>

#include "scma/core.hpp"

namespace scma {

// Codebook JSON:
//   {"K":4,"N":2,"M":4,"J":6,"mapping":[[1,2],...],
//    "constellations":[[[re,im], ... column-major N*M entries], ...]}
// Mapping rows are one-based. Violations throw SchemaError carrying a JSON pointer.
CodebookCollection codebook_from_json(const nlohmann::json& doc);
nlohmann::json codebook_to_json(const CodebookCollection& collection);

CodebookCollection read_codebook(const std::filesystem::path& path);
void write_codebook(const std::filesystem::path& path, const CodebookCollection& collection);

// Path of a bundled reference collection ("appendix-b" or "appendix-c").
std::filesystem::path bundled_codebook_path(const std::string& name);

}  // namespace scma
