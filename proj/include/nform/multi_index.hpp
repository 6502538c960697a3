#pragma once

#include <cstdint>
#include <memory>
#include <span>
#include <vector>

namespace nform {

/// Exponent vector of a monomial z^p = z_1^{p_1} ... z_n^{p_n}.
using MultiIndex = std::vector<int>;

int degree(std::span<const int> p);

/// Graded-lexicographic order: ascending total degree, then lexicographically
/// descending exponent tuples, so within one degree z_1^d comes first and
/// z_n^d last. This is the storage, iteration and serialization order
/// throughout the library.
bool graded_lex_less(std::span<const int> a, std::span<const int> b);

/// Enumeration of all monomials in `dim` variables of total degree 0..order,
/// in graded-lex order. Index 0 is the constant monomial; jets never store a
/// coefficient there. Shared and immutable, so maps of equal shape can reuse
/// one table.
class MonomialTable {
 public:
  MonomialTable(int dim, int order);

  int dim() const { return dim_; }
  int order() const { return order_; }
  int count() const { return static_cast<int>(offsets_[order_ + 1]); }

  std::span<const int> exponents(int index) const {
    return {exps_.data() + static_cast<std::size_t>(index) * dim_,
            static_cast<std::size_t>(dim_)};
  }
  int degree_of(int index) const { return degrees_[index]; }

  /// First index of the given total degree.
  int first_of_degree(int d) const { return static_cast<int>(offsets_[d]); }
  /// Number of monomials of exactly this degree.
  int count_of_degree(int d) const {
    return static_cast<int>(offsets_[d + 1] - offsets_[d]);
  }

  /// Rank of an exponent vector, or -1 when its degree exceeds the order.
  int index_of(std::span<const int> p) const;

  long long binomial(int n, int k) const;

  /// Memoized lookup; tables are immutable so sharing is safe across threads.
  static std::shared_ptr<const MonomialTable> get(int dim, int order);

 private:
  int dim_;
  int order_;
  std::vector<int> exps_;             // count * dim, row per monomial
  std::vector<int> degrees_;          // count
  std::vector<long long> offsets_;    // order + 2 entries
  std::vector<long long> binom_;      // Pascal triangle, flattened
  int binom_rows_;
};

}  // namespace nform
