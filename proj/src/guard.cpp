#include "mechlab/guard.hpp"

#include <cstdlib>
#include <string>

#include "mechlab/errors.hpp"

namespace mechlab {

std::string Diagnostic::format() const {
  std::string out = code;
  if (!path.empty()) out += " at " + path;
  if (line > 0) out += " (line " + std::to_string(line) + ", column " + std::to_string(column) + ")";
  if (!message.empty()) out += ": " + message;
  return out;
}

namespace {

std::string join_diagnostics(const std::vector<Diagnostic>& ds) {
  std::string out;
  for (const auto& d : ds) {
    if (!out.empty()) out += "; ";
    out += d.format();
  }
  return out;
}

}  // namespace

InputError::InputError(std::vector<Diagnostic> diagnostics)
    : std::runtime_error(join_diagnostics(diagnostics)), diagnostics_(std::move(diagnostics)) {}

InputError::InputError(std::string code, std::string message, std::string path)
    : InputError(std::vector<Diagnostic>{{std::move(code), std::move(message), std::move(path)}}) {}

std::uint64_t max_profiles() {
  const char* env = std::getenv("MECHLAB_MAX_PROFILES");
  if (env == nullptr || *env == '\0') return kDefaultMaxProfiles;
  char* end = nullptr;
  unsigned long long v = std::strtoull(env, &end, 10);
  if (end == env || *end != '\0') return kDefaultMaxProfiles;
  return v;
}

void require_within_budget(const mpz_class& count, const std::string& what) {
  mpz_class limit(std::to_string(max_profiles()));
  if (count > limit) {
    throw ResourceError(what + ": " + count.get_str() + " candidate profiles exceed the budget of " +
                        limit.get_str() + " (set MECHLAB_MAX_PROFILES to raise it)");
  }
}

}  // namespace mechlab
