#pragma once

#include <filesystem>
#include <fstream>
#include <string>

// Writes content to a file under the system temp directory and returns its
// path. Each caller should pick a name unique to its test case.
inline std::string write_temp(const std::string& name, const std::string& content) {
  const auto p = std::filesystem::temp_directory_path() / name;
  std::ofstream out(p, std::ios::binary);
  out << content;
  return p.string();
}

inline std::string temp_path(const std::string& name) {
  return (std::filesystem::temp_directory_path() / name).string();
}
