#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace mechlab {

inline constexpr const char* kVersion = "0.1.0";

enum class Verdict { Pass, Fail, NotApplicable };

std::string to_string(Verdict v);

// Lowercase hex SHA-256 of the given bytes.
std::string sha256_hex(const std::string& bytes);

// Quotes a CSV field when it contains a comma, quote or newline.
std::string csv_field(const std::string& s);

struct CsvBlock {
  std::string name;
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;
  std::string raw;  // preformatted CSV, used instead of columns and rows when set

  void add(std::vector<std::string> row) { rows.push_back(std::move(row)); }
};

struct Report {
  std::string digest;  // empty when no instance file was read
  std::optional<std::uint64_t> seed;
  std::string command;
  std::vector<CsvBlock> blocks;
  Verdict verdict = Verdict::Pass;

  CsvBlock& block(std::string name, std::vector<std::string> columns);
  // Byte-deterministic rendering: header, blocks in insertion order, verdict.
  std::string render() const;
};

}  // namespace mechlab
