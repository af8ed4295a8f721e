#include "paulikern/words.hpp"

#include <algorithm>
#include <sstream>

#include "paulikern/error.hpp"

namespace paulikern {

namespace {

Coefficient checked_add(Coefficient a, Coefficient b) {
  Coefficient r{};
  if (__builtin_add_overflow(a, b, &r)) throw Error(Errc::overflow, "formal sum coefficient overflow");
  return r;
}

Coefficient checked_mul(Coefficient a, Coefficient b) {
  Coefficient r{};
  if (__builtin_mul_overflow(a, b, &r)) throw Error(Errc::overflow, "formal sum coefficient overflow");
  return r;
}

void require_generators(int generators) {
  if (generators < 1) throw Error(Errc::invalid_argument, "generator count must be >= 1");
}

Coefficient sign_for_length(int k) { return (k % 2 == 1) ? 1 : -1; }

}  // namespace

Word make_canonical_word(std::vector<Letter> letters) { return Word(std::move(letters)); }

std::strong_ordering operator<=>(const Word& a, const Word& b) {
  if (auto c = a.letters_.size() <=> b.letters_.size(); c != 0) return c;
  return std::lexicographical_compare_three_way(a.letters_.begin(), a.letters_.end(), b.letters_.begin(),
                                                b.letters_.end());
}

Word operator*(const Word& a, const Word& b) {
  std::vector<Letter> out;
  out.reserve(a.size() + b.size());
  out.insert(out.end(), a.letters_.begin(), a.letters_.end());
  auto first = b.letters_.begin();
  if (!out.empty() && first != b.letters_.end() && out.back() == *first) ++first;
  out.insert(out.end(), first, b.letters_.end());
  return Word(std::move(out));
}

Word reduce_word(std::span<const Letter> letters, int generators) {
  std::vector<Letter> out;
  out.reserve(letters.size());
  for (Letter l : letters) {
    if (l < 1 || l > generators) {
      std::ostringstream os;
      os << "letter " << l << " outside 1.." << generators;
      throw Error(Errc::index_out_of_range, os.str());
    }
    if (out.empty() || out.back() != l) out.push_back(l);
  }
  return Word(std::move(out));
}

FormalSum FormalSum::identity() { return word(Word{}); }

FormalSum FormalSum::word(Word w, Coefficient c) {
  FormalSum s;
  s.add_term(w, c);
  return s;
}

FormalSum FormalSum::generator_sum(int generators) {
  require_generators(generators);
  FormalSum s;
  for (Letter i = 1; i <= generators; ++i) s.add_term(make_canonical_word({i}), 1);
  return s;
}

Coefficient FormalSum::coefficient(const Word& w) const {
  auto it = terms_.find(w);
  return it == terms_.end() ? 0 : it->second;
}

Letter FormalSum::max_letter() const {
  Letter m = 0;
  for (const auto& [w, c] : terms_) {
    for (Letter l : w.letters()) m = std::max(m, l);
  }
  return m;
}

void FormalSum::add_term(const Word& w, Coefficient c) {
  if (c == 0) return;
  auto [it, inserted] = terms_.try_emplace(w, c);
  if (inserted) return;
  it->second = checked_add(it->second, c);
  if (it->second == 0) terms_.erase(it);
}

FormalSum& FormalSum::operator+=(const FormalSum& other) {
  for (const auto& [w, c] : other.terms_) add_term(w, c);
  return *this;
}

FormalSum& FormalSum::operator-=(const FormalSum& other) {
  for (const auto& [w, c] : other.terms_) add_term(w, checked_mul(c, -1));
  return *this;
}

FormalSum& FormalSum::operator*=(Coefficient c) {
  if (c == 0) {
    terms_.clear();
    return *this;
  }
  for (auto& [w, coeff] : terms_) coeff = checked_mul(coeff, c);
  return *this;
}

FormalSum operator*(const FormalSum& a, const FormalSum& b) {
  FormalSum out;
  for (const auto& [wa, ca] : a.terms_) {
    for (const auto& [wb, cb] : b.terms_) out.add_term(wa * wb, checked_mul(ca, cb));
  }
  return out;
}

FormalSum layer(int generators, int k, IndexReading reading) {
  require_generators(generators);
  if (k < 1) throw Error(Errc::invalid_argument, "word length must be >= 1");
  FormalSum out;
  std::vector<Letter> current(static_cast<std::size_t>(k), 0);

  // Depth-first enumeration; position `pos` receives every admissible letter.
  auto admissible = [&](std::size_t pos, Letter l) {
    if (reading == IndexReading::adjacent_distinct) return pos == 0 || current[pos - 1] != l;
    return std::find(current.begin(), current.begin() + static_cast<std::ptrdiff_t>(pos), l) ==
           current.begin() + static_cast<std::ptrdiff_t>(pos);
  };
  auto recurse = [&](auto&& self, std::size_t pos) -> void {
    if (pos == current.size()) {
      out.add_term(make_canonical_word(current), 1);
      return;
    }
    for (Letter l = 1; l <= generators; ++l) {
      if (!admissible(pos, l)) continue;
      current[pos] = l;
      self(self, pos + 1);
    }
  };
  recurse(recurse, 0);
  return out;
}

FormalSum gamma_terms(int generators, int n, IndexReading reading) {
  require_generators(generators);
  if (n < 1) throw Error(Errc::invalid_argument, "expansion order must be >= 1");
  FormalSum out;
  for (int k = 1; k <= n; ++k) out += sign_for_length(k) * layer(generators, k, reading);
  return out;
}

FormalSum binomial_expansion(int generators, int m) {
  require_generators(generators);
  if (m < 1) throw Error(Errc::invalid_argument, "power must be >= 1");
  const FormalSum one = FormalSum::identity();
  const FormalSum complement = one - FormalSum::generator_sum(generators);
  FormalSum power = complement;
  for (int i = 1; i < m; ++i) power = power * complement;
  return one - power;
}

FormalComparison formal_equal(const FormalSum& a, const FormalSum& b) {
  FormalSum diff = a - b;
  const bool eq = diff.empty();
  return {eq, std::move(diff)};
}

FormalSum recursion_step(int generators, int n) {
  if (n < 1) throw Error(Errc::invalid_argument, "expansion order must be >= 1");
  return gamma_terms(generators, n) + sign_for_length(n + 1) * layer(generators, n + 1);
}

Coefficient count_layer(int generators, int k) {
  require_generators(generators);
  if (k < 1) throw Error(Errc::invalid_argument, "word length must be >= 1");
  Coefficient count = generators;
  for (int i = 1; i < k; ++i) count = checked_mul(count, generators - 1);
  return count;
}

FormalSum telescoping_defect(int generators, int n) {
  const FormalSum p = FormalSum::generator_sum(generators);
  const Coefficient sign = (n % 2 == 1) ? 1 : -1;  // (-1)^(n+1)
  return p * gamma_terms(generators, n) - p - sign * layer(generators, n + 1);
}

std::string to_string(const FormalSum& s) {
  if (s.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& [w, c] : s.terms()) {
    if (!first) os << ' ';
    first = false;
    os << (c < 0 ? '-' : '+');
    const Coefficient mag = c < 0 ? -c : c;
    if (mag != 1) os << mag;
    os << '[';
    for (std::size_t i = 0; i < w.size(); ++i) {
      if (i) os << ',';
      os << w.letters()[i];
    }
    os << ']';
  }
  return os.str();
}

}  // namespace paulikern
