#include "mechlab/rational.hpp"

#include <algorithm>
#include <cctype>
#include <stdexcept>

namespace mechlab {

namespace {

bool valid_integer(std::string_view s) {
  if (s.empty()) return false;
  std::size_t i = (s[0] == '-' || s[0] == '+') ? 1 : 0;
  if (i == s.size()) return false;
  for (; i < s.size(); ++i) {
    if (!std::isdigit(static_cast<unsigned char>(s[i]))) return false;
  }
  return true;
}

}  // namespace

std::optional<Rational> try_parse_rational(std::string_view text) {
  auto slash = text.find('/');
  std::string_view num = text.substr(0, slash);
  std::string_view den = slash == std::string_view::npos ? std::string_view("1")
                                                         : text.substr(slash + 1);
  if (!valid_integer(num) || !valid_integer(den)) return std::nullopt;
  if (den[0] == '-') return std::nullopt;
  std::string n(num), d(den);
  if (n[0] == '+') n.erase(0, 1);
  if (d[0] == '+') d.erase(0, 1);
  mpz_class zn, zd;
  if (zn.set_str(n, 10) != 0 || zd.set_str(d, 10) != 0) return std::nullopt;
  if (zd == 0) return std::nullopt;
  Rational q(zn, zd);
  q.canonicalize();
  return q;
}

Rational parse_rational(std::string_view text) {
  auto q = try_parse_rational(text);
  if (!q) throw std::invalid_argument("malformed rational '" + std::string(text) + "'");
  return *q;
}

std::string to_string(const Rational& q) { return q.get_str(); }

Rational sum(const std::vector<Rational>& xs) {
  Rational s = 0;
  for (const auto& x : xs) s += x;
  return s;
}

Dist Dist::point(std::size_t index) {
  Dist d;
  d.entries_.emplace_back(index, Rational(1));
  return d;
}

Dist Dist::from_dense(const std::vector<Rational>& probs) {
  Dist d;
  for (std::size_t k = 0; k < probs.size(); ++k) {
    if (probs[k] != 0) d.entries_.emplace_back(k, probs[k]);
  }
  return d;
}

Dist Dist::from_entries(std::vector<Entry> entries) {
  std::sort(entries.begin(), entries.end(),
            [](const Entry& a, const Entry& b) { return a.first < b.first; });
  Dist d;
  for (auto& e : entries) {
    if (!d.entries_.empty() && d.entries_.back().first == e.first) {
      d.entries_.back().second += e.second;
    } else {
      d.entries_.push_back(std::move(e));
    }
  }
  std::erase_if(d.entries_, [](const Entry& e) { return e.second == 0; });
  return d;
}

Rational Dist::mass(std::size_t index) const {
  auto it = std::lower_bound(entries_.begin(), entries_.end(), index,
                             [](const Entry& e, std::size_t k) { return e.first < k; });
  if (it == entries_.end() || it->first != index) return 0;
  return it->second;
}

Rational Dist::total() const {
  Rational s = 0;
  for (const auto& e : entries_) s += e.second;
  return s;
}

std::vector<Rational> Dist::dense(std::size_t size) const {
  std::vector<Rational> out(size, Rational(0));
  for (const auto& [k, p] : entries_) {
    if (k >= size) throw std::out_of_range("distribution index out of range");
    out[k] = p;
  }
  return out;
}

Dist mix(const Rational& a, const Dist& x, const Dist& y) {
  std::vector<Dist::Entry> all;
  all.reserve(x.entries().size() + y.entries().size());
  Rational b = Rational(1) - a;
  for (const auto& [k, p] : x.entries()) all.emplace_back(k, a * p);
  for (const auto& [k, p] : y.entries()) all.emplace_back(k, b * p);
  return Dist::from_entries(std::move(all));
}

std::string describe(const Dist& d, const std::vector<std::string>& labels) {
  if (d.is_point() && d.entries()[0].second == 1) return labels.at(d.entries()[0].first);
  std::string out;
  for (const auto& [k, p] : d.entries()) {
    if (!out.empty()) out += ' ';
    out += labels.at(k) + ':' + to_string(p);
  }
  return out;
}

}  // namespace mechlab
