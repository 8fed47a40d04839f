#include "mechlab/report.hpp"

#include <openssl/evp.h>

#include <cstdio>
#include <stdexcept>

namespace mechlab {

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::Pass:
      return "PASS";
    case Verdict::Fail:
      return "FAIL";
    case Verdict::NotApplicable:
      return "NOT-APPLICABLE";
  }
  return "?";
}

std::string sha256_hex(const std::string& bytes) {
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), md, &len, EVP_sha256(), nullptr) != 1) {
    throw std::runtime_error("sha256 failed");
  }
  std::string out;
  char buf[3];
  for (unsigned int k = 0; k < len; ++k) {
    std::snprintf(buf, sizeof buf, "%02x", md[k]);
    out += buf;
  }
  return out;
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

CsvBlock& Report::block(std::string name, std::vector<std::string> columns) {
  blocks.push_back({std::move(name), std::move(columns), {}, {}});
  return blocks.back();
}

namespace {

std::string csv_line(const std::vector<std::string>& cells) {
  std::string out;
  for (std::size_t k = 0; k < cells.size(); ++k) {
    if (k) out += ',';
    out += csv_field(cells[k]);
  }
  return out + "\n";
}

}  // namespace

std::string Report::render() const {
  std::string out;
  out += std::string("# mechlab ") + kVersion + "\n";
  out += "# instance-sha256: " + (digest.empty() ? std::string("none") : digest) + "\n";
  out += "# seed: " + (seed ? std::to_string(*seed) : std::string("none")) + "\n";
  out += "# command: " + command + "\n";
  for (const auto& b : blocks) {
    out += "\n[" + b.name + "]\n";
    if (!b.raw.empty()) {
      out += b.raw;
      if (b.raw.back() != '\n') out += '\n';
      continue;
    }
    out += csv_line(b.columns);
    for (const auto& r : b.rows) out += csv_line(r);
  }
  out += "\nVERDICT: " + to_string(verdict) + "\n";
  return out;
}

}  // namespace mechlab
