#pragma once

#include <filesystem>
#include <string>
#include <vector>

namespace lab {

/// Hex SHA-256 of a byte string.
std::string sha256_hex(const std::string& bytes);

/// CSV field: shortest round-trip form for numbers, empty for NaN.
std::string csv_number(double x);
/// CSV field with RFC 4180 quoting when needed.
std::string csv_text(const std::string& s);

/// Collects the files of one run and writes manifest.json last.
class OutputDir {
 public:
  explicit OutputDir(std::filesystem::path dir);

  void write(const std::string& name, const std::string& content);
  /// {"files": [{"bytes", "name", "sha256"}...]} sorted by name.
  void write_manifest(const std::string& command);

  const std::filesystem::path& path() const noexcept { return dir_; }
  const std::vector<std::string>& files() const noexcept { return files_; }

 private:
  std::filesystem::path dir_;
  std::vector<std::string> files_;
  std::vector<std::string> digests_;
  std::vector<std::size_t> sizes_;
};

}  // namespace lab
