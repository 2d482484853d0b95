#pragma once

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

namespace udsim::testing {

inline std::filesystem::path fixture(const std::string& name) {
  return std::filesystem::path(UDSIM_FIXTURE_DIR) / name;
}

inline std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Fresh scratch directory under the build tree.
inline std::filesystem::path scratch_dir(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() / ("udsim_test_" + name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

}  // namespace udsim::testing
