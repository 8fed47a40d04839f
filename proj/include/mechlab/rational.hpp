#pragma once

#include <gmpxx.h>

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace mechlab {

using Rational = mpq_class;

// Accepts "p/q" or "p" (optionally signed). Returns nullopt on malformed
// input or q == 0.
std::optional<Rational> try_parse_rational(std::string_view text);
Rational parse_rational(std::string_view text);

// Canonical reduced form, q > 0; integers print without a denominator.
std::string to_string(const Rational& q);

Rational sum(const std::vector<Rational>& xs);

// Sparse probability vector over a finite index set: entries sorted by index,
// no explicit zeros. Equality is exact.
class Dist {
 public:
  using Entry = std::pair<std::size_t, Rational>;

  Dist() = default;
  static Dist point(std::size_t index);
  static Dist from_dense(const std::vector<Rational>& probs);
  // Merges duplicate indices and drops zeros.
  static Dist from_entries(std::vector<Entry> entries);

  const std::vector<Entry>& entries() const { return entries_; }
  std::size_t support_size() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }
  bool is_point() const { return entries_.size() == 1; }
  Rational mass(std::size_t index) const;
  Rational total() const;
  std::vector<Rational> dense(std::size_t size) const;

  bool operator==(const Dist& other) const { return entries_ == other.entries_; }
  bool operator!=(const Dist& other) const { return !(*this == other); }

 private:
  std::vector<Entry> entries_;
};

// Convex combination a*x + (1-a)*y.
Dist mix(const Rational& a, const Dist& x, const Dist& y);

std::string describe(const Dist& d, const std::vector<std::string>& labels);

}  // namespace mechlab
