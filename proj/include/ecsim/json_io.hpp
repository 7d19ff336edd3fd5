#ifndef ECSIM_JSON_IO_HPP
#define ECSIM_JSON_IO_HPP

#include <filesystem>
#include <initializer_list>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

namespace ecsim {

// Unreadable file, malformed JSON, or a value of the wrong type/shape.
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Parses a JSON document. Syntax errors carry "path:line:column: ..." in the
// message.
nlohmann::json read_json_file(const std::filesystem::path& path);
nlohmann::json parse_json_text(std::string_view text, std::string_view origin);

std::string read_text_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, std::string_view text);

namespace json_detail {

// Typed accessors that raise InputError with the JSON path of the offending
// value, e.g. "steps[2].depends_on: expected array".
const nlohmann::json& require(const nlohmann::json& object, std::string_view key,
                              std::string_view where);
std::string as_string(const nlohmann::json& value, std::string_view where);
double as_number(const nlohmann::json& value, std::string_view where);
std::vector<std::string> as_string_list(const nlohmann::json& value,
                                        std::string_view where);
void expect_object(const nlohmann::json& value, std::string_view where);
void expect_array(const nlohmann::json& value, std::string_view where);

// Keys of `object` outside `allowed`, sorted.
std::vector<std::string> unknown_keys(const nlohmann::json& object,
                                      std::initializer_list<std::string_view> allowed);

}  // namespace json_detail

}  // namespace ecsim

#endif  // ECSIM_JSON_IO_HPP
