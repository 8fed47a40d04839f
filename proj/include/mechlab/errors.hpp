#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace mechlab {

struct Diagnostic {
  std::string code;     // machine-readable, e.g. "belief-not-normalized"
  std::string message;
  std::string path;     // location inside the instance, e.g. "beliefs.R.t1"
  int line = 0;         // 1-based; 0 when not applicable
  int column = 0;

  std::string format() const;
};

class InputError : public std::runtime_error {
 public:
  explicit InputError(std::vector<Diagnostic> diagnostics);
  InputError(std::string code, std::string message, std::string path = {});
  const std::vector<Diagnostic>& diagnostics() const { return diagnostics_; }

 private:
  std::vector<Diagnostic> diagnostics_;
};

// Raised when an enumeration would exceed the configured profile budget.
class ResourceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Raised when a property cannot be evaluated, e.g. missing provenance.
class NotCheckable : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace mechlab
