#include "polyfair/common/json_writer.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "polyfair/common/errors.hpp"

namespace polyfair {
namespace {

void put_double(std::string& out, double v) {
  if (!std::isfinite(v)) {
    // JSON has no representation for these.
    out += "null";
    return;
  }
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::general, 17);
  out.append(buf, res.ptr);
}

void put_string(std::string& out, const std::string& s) {
  // nlohmann's own escaping keeps us consistent with what the parser accepts.
  out += Json(s).dump();
}

void emit(std::string& out, const Json& v, int indent, int depth) {
  auto newline = [&](int d) {
    if (indent <= 0) return;
    out += '\n';
    out.append(static_cast<std::size_t>(indent * d), ' ');
  };
  switch (v.type()) {
    case Json::value_t::object: {
      if (v.empty()) {
        out += "{}";
        return;
      }
      out += '{';
      bool first = true;
      for (auto it = v.begin(); it != v.end(); ++it) {
        if (!first) out += ',';
        first = false;
        newline(depth + 1);
        put_string(out, it.key());
        out += indent > 0 ? ": " : ":";
        emit(out, it.value(), indent, depth + 1);
      }
      newline(depth);
      out += '}';
      return;
    }
    case Json::value_t::array: {
      if (v.empty()) {
        out += "[]";
        return;
      }
      // Arrays of scalars stay on one line; weight matrices would otherwise
      // explode into thousands of lines.
      bool scalar = true;
      for (const auto& e : v) scalar = scalar && !e.is_structured();
      out += '[';
      bool first = true;
      for (const auto& e : v) {
        if (!first) out += scalar ? ", " : ",";
        first = false;
        if (!scalar) newline(depth + 1);
        emit(out, e, indent, depth + 1);
      }
      if (!scalar) newline(depth);
      out += ']';
      return;
    }
    case Json::value_t::number_float:
      put_double(out, v.get<double>());
      return;
    case Json::value_t::string:
      put_string(out, v.get_ref<const std::string&>());
      return;
    default:
      out += v.dump();
      return;
  }
}

}  // namespace

std::string write_json(const Json& doc, int indent) {
  std::string out;
  emit(out, doc, indent, 0);
  out += '\n';
  return out;
}

void write_json_file(const std::filesystem::path& path, const Json& doc, int indent) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream os(path, std::ios::binary);
  if (!os) throw ConfigError("cannot open for writing: " + path.string());
  os << write_json(doc, indent);
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw ConfigError("cannot open: " + path.string());
  std::ostringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

Json read_json_file(const std::filesystem::path& path) {
  try {
    return Json::parse(read_text_file(path));
  } catch (const Json::parse_error& e) {
    throw SchemaError(path.string() + ": " + e.what());
  }
}

}  // namespace polyfair
