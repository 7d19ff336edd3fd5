#ifndef ECSIM_TESTS_FIXTURES_HPP
#define ECSIM_TESTS_FIXTURES_HPP

#include <filesystem>
#include <ostream>
#include <string>

#include "ecsim/model.hpp"

namespace ecsim {
inline void PrintTo(const Finding& f, std::ostream* os) { *os << format_finding(f); }
}  // namespace ecsim

namespace fixtures {

inline std::filesystem::path data(const std::string& name) {
  return std::filesystem::path(ECSIM_DATA_DIR) / name;
}

// Fresh, empty scratch directory under the build tree.
inline std::filesystem::path scratch(const std::string& name) {
  const auto dir = std::filesystem::path(ECSIM_TEST_TMP) / name;
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

}  // namespace fixtures

#endif  // ECSIM_TESTS_FIXTURES_HPP
