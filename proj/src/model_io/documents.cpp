#include "polyfair/model_io/documents.hpp"

#include "polyfair/common/errors.hpp"

namespace polyfair::io {

Json model_to_json(const ModelDocument& doc) {
  Json j = doc.extras.is_object() ? doc.extras : Json::object();
  j["schema"] = doc.schema.to_json();
  j["layers"] = network_to_json(doc.net);
  return j;
}

ModelDocument model_from_json(const Json& j) {
  if (!j.is_object() || !j.contains("schema") || !j.contains("layers"))
    throw SchemaError("model document needs top-level `schema` and `layers`");
  ModelDocument doc;
  doc.schema = FeatureSchema::from_json(j.at("schema"));
  doc.net = network_from_json(j.at("layers"));
  if (doc.net.input_dim() != doc.schema.input_dim())
    throw StructuralError("layer 1 expects " + std::to_string(doc.net.input_dim()) +
                              " inputs but the schema encodes " + std::to_string(doc.schema.input_dim()),
                          1);
  for (auto it = j.begin(); it != j.end(); ++it)
    if (it.key() != "schema" && it.key() != "layers") doc.extras[it.key()] = it.value();
  return doc;
}

std::string save_model_string(const ModelDocument& doc) { return write_json(model_to_json(doc)); }

ModelDocument load_model_string(const std::string& text) {
  try {
    return model_from_json(Json::parse(text));
  } catch (const Json::parse_error& e) {
    throw SchemaError(std::string("model document: ") + e.what());
  }
}

void save_model(const std::filesystem::path& path, const ModelDocument& doc) {
  write_json_file(path, model_to_json(doc));
}

ModelDocument load_model(const std::filesystem::path& path) { return load_model_string(read_text_file(path)); }

}  // namespace polyfair::io
