#pragma once

#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>

namespace dioc::testsupport {

inline std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

inline std::string fixture(const std::string& rel) {
  return std::string(FIXTURES_DIR) + "/" + rel;
}

}  // namespace dioc::testsupport
