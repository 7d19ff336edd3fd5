#include "ecsim/json_io.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

namespace ecsim {

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError(path.string() + ": cannot open file");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

void write_text_file(const std::filesystem::path& path, std::string_view text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw InputError(path.string() + ": cannot write file");
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  if (!out) throw InputError(path.string() + ": write failed");
}

nlohmann::json parse_json_text(std::string_view text, std::string_view origin) {
  try {
    return nlohmann::json::parse(text.begin(), text.end());
  } catch (const nlohmann::json::parse_error& e) {
    // e.byte is 1-based and points just past the offending character.
    const std::size_t offset =
        std::min<std::size_t>(e.byte == 0 ? 0 : e.byte - 1, text.size());
    std::size_t line = 1;
    std::size_t column = 1;
    for (std::size_t i = 0; i < offset; ++i) {
      if (text[i] == '\n') {
        ++line;
        column = 1;
      } else {
        ++column;
      }
    }
    std::string detail = e.what();
    if (auto pos = detail.find("syntax error"); pos != std::string::npos) {
      detail = detail.substr(pos);
    }
    throw InputError(std::string(origin) + ":" + std::to_string(line) + ":" +
                     std::to_string(column) + ": " + detail);
  }
}

nlohmann::json read_json_file(const std::filesystem::path& path) {
  return parse_json_text(read_text_file(path), path.string());
}

namespace json_detail {

namespace {

std::string type_error(std::string_view where, std::string_view expected) {
  return std::string(where) + ": expected " + std::string(expected);
}

}  // namespace

void expect_object(const nlohmann::json& value, std::string_view where) {
  if (!value.is_object()) throw InputError(type_error(where, "object"));
}

void expect_array(const nlohmann::json& value, std::string_view where) {
  if (!value.is_array()) throw InputError(type_error(where, "array"));
}

const nlohmann::json& require(const nlohmann::json& object, std::string_view key,
                              std::string_view where) {
  expect_object(object, where);
  auto it = object.find(key);
  if (it == object.end()) {
    throw InputError(std::string(where) + ": missing key '" + std::string(key) +
                     "'");
  }
  return *it;
}

std::string as_string(const nlohmann::json& value, std::string_view where) {
  if (!value.is_string()) throw InputError(type_error(where, "string"));
  return value.get<std::string>();
}

double as_number(const nlohmann::json& value, std::string_view where) {
  if (!value.is_number()) throw InputError(type_error(where, "number"));
  return value.get<double>();
}

std::vector<std::string> as_string_list(const nlohmann::json& value,
                                        std::string_view where) {
  expect_array(value, where);
  std::vector<std::string> out;
  out.reserve(value.size());
  for (std::size_t i = 0; i < value.size(); ++i) {
    out.push_back(
        as_string(value[i], std::string(where) + "[" + std::to_string(i) + "]"));
  }
  return out;
}

std::vector<std::string> unknown_keys(
    const nlohmann::json& object, std::initializer_list<std::string_view> allowed) {
  std::vector<std::string> out;
  for (auto it = object.begin(); it != object.end(); ++it) {
    if (std::find(allowed.begin(), allowed.end(), it.key()) == allowed.end()) {
      out.push_back(it.key());
    }
  }
  return out;
}

}  // namespace json_detail

}  // namespace ecsim
