#pragma once

#include <filesystem>
#include <string>

#include "polyfair/common/json_writer.hpp"
#include "polyfair/model_io/network.hpp"
#include "polyfair/model_io/schema.hpp"

namespace polyfair::io {

// In-memory form of the model document. Top-level keys other than `schema`
// and `layers` (the `training` block, provenance, ...) are carried verbatim
// in `extras` so that save(load(doc)) reproduces the document byte for byte.
struct ModelDocument {
  FeedForwardNetwork net;
  FeatureSchema schema;
  Json extras = Json::object();
};

Json model_to_json(const ModelDocument& doc);
// Validates layer chaining and that the first layer consumes schema.input_dim()
// inputs (StructuralError at layer 1 otherwise).
ModelDocument model_from_json(const Json& j);

std::string save_model_string(const ModelDocument& doc);
ModelDocument load_model_string(const std::string& text);
void save_model(const std::filesystem::path& path, const ModelDocument& doc);
ModelDocument load_model(const std::filesystem::path& path);

}  // namespace polyfair::io
