#pragma once

#include <filesystem>
#include <string>

#include "json.hpp"

namespace polyfair {

using Json = nlohmann::json;

// Serializes `doc` with every floating-point value printed at 17 significant
// digits, so parse(write(x)) reproduces each double bit-for-bit and
// write(parse(write(x))) == write(x). Object keys come out sorted.
std::string write_json(const Json& doc, int indent = 1);

void write_json_file(const std::filesystem::path& path, const Json& doc, int indent = 1);
Json read_json_file(const std::filesystem::path& path);
std::string read_text_file(const std::filesystem::path& path);

}  // namespace polyfair
