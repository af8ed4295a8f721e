#pragma once

// Free algebra on N idempotent generators p_1..p_N (p_i p_i = p_i, no other
// relations). Words are products of generators; FormalSums are integer
// combinations of canonical words.

#include <compare>
#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

namespace paulikern {

using Letter = int;  // generator index, 1-based
using Coefficient = std::int64_t;

class Word {
 public:
  Word() = default;  // empty word == identity

  const std::vector<Letter>& letters() const noexcept { return letters_; }
  std::size_t size() const noexcept { return letters_.size(); }
  bool empty() const noexcept { return letters_.empty(); }

  /// Shortlex: shorter words first, then lexicographic.
  friend std::strong_ordering operator<=>(const Word& a, const Word& b);
  friend bool operator==(const Word& a, const Word& b) = default;

  /// Product with idempotent collapse at the junction.
  friend Word operator*(const Word& a, const Word& b);

 private:
  explicit Word(std::vector<Letter> letters) : letters_(std::move(letters)) {}
  friend Word reduce_word(std::span<const Letter> letters, int generators);
  friend Word make_canonical_word(std::vector<Letter> letters);

  std::vector<Letter> letters_;
};

/// Collapses runs of equal adjacent letters. Throws IndexOutOfRange if a
/// letter is outside 1..generators.
Word reduce_word(std::span<const Letter> letters, int generators);

class FormalSum {
 public:
  using Terms = std::map<Word, Coefficient>;

  FormalSum() = default;

  static FormalSum identity();
  static FormalSum word(Word w, Coefficient c = 1);
  /// p_1 + ... + p_N
  static FormalSum generator_sum(int generators);

  const Terms& terms() const noexcept { return terms_; }
  std::size_t size() const noexcept { return terms_.size(); }
  bool empty() const noexcept { return terms_.empty(); }
  Coefficient coefficient(const Word& w) const;
  /// Largest letter appearing in any term, 0 for a scalar.
  Letter max_letter() const;

  void add_term(const Word& w, Coefficient c);

  FormalSum& operator+=(const FormalSum& other);
  FormalSum& operator-=(const FormalSum& other);
  FormalSum& operator*=(Coefficient c);

  friend FormalSum operator+(FormalSum a, const FormalSum& b) { return a += b; }
  friend FormalSum operator-(FormalSum a, const FormalSum& b) { return a -= b; }
  friend FormalSum operator*(Coefficient c, FormalSum a) { return a *= c; }
  friend FormalSum operator*(const FormalSum& a, const FormalSum& b);
  friend bool operator==(const FormalSum& a, const FormalSum& b) = default;

 private:
  Terms terms_;
};

/// How the index constraint under each product sum is read.
enum class IndexReading {
  adjacent_distinct,  // i1 != i2, i2 != i3, ... (i1 == i3 allowed)
  all_distinct,       // all indices pairwise different
};

/// Sum of all words of length k obeying the index reading (unsigned).
FormalSum layer(int generators, int k, IndexReading reading = IndexReading::adjacent_distinct);

/// Gamma_n = sum_{k=1..n} (-1)^{k-1} layer(k).
FormalSum gamma_terms(int generators, int n, IndexReading reading = IndexReading::adjacent_distinct);

/// 1 - (1 - P)^m with P = p_1 + ... + p_N, reduced to canonical words.
FormalSum binomial_expansion(int generators, int m);

struct FormalComparison {
  bool equal;
  FormalSum difference;  // a - b
  explicit operator bool() const noexcept { return equal; }
};

FormalComparison formal_equal(const FormalSum& a, const FormalSum& b);

/// Gamma_n + (-1)^n layer(n+1); must coincide with gamma_terms(N, n+1).
FormalSum recursion_step(int generators, int n);

/// N (N-1)^(k-1), the number of adjacent-distinct words of length k.
Coefficient count_layer(int generators, int k);

/// P * Gamma_n - P - (-1)^(n+1) layer(n+1). Zero iff the telescoping
/// cancellation holds at order n.
FormalSum telescoping_defect(int generators, int n);

/// "+[1] +[2] -[1,2] -[2,1]"; coefficients other than +-1 are printed as
/// "+3[1,2]". The identity word renders as "[]"; the empty sum as "0".
std::string to_string(const FormalSum& s);

}  // namespace paulikern
