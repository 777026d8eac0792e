#pragma once

#include <fstream>
#include <sstream>
#include <string>
#include <vector>

inline std::string corpus_path(const std::string& rel) { return std::string(EQCHECK_CORPUS_DIR) + "/" + rel; }

inline std::string read_file(const std::string& path) {
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline const std::vector<std::string>& positive_corpus() {
  static const std::vector<std::string> files{"section2.eq", "section2_ple.eq", "section4.eq", "section5.eq"};
  return files;
}
