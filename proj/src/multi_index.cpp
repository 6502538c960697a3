#include "nform/multi_index.hpp"

#include <map>
#include <mutex>
#include <utility>

#include "nform/errors.hpp"

namespace nform {

int degree(std::span<const int> p) {
  int d = 0;
  for (int e : p) d += e;
  return d;
}

bool graded_lex_less(std::span<const int> a, std::span<const int> b) {
  const int da = degree(a);
  const int db = degree(b);
  if (da != db) return da < db;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] != b[i]) return a[i] > b[i];  // descending tuples within a degree
  }
  return false;
}

MonomialTable::MonomialTable(int dim, int order) : dim_(dim), order_(order) {
  if (dim < 1) throw ValidationError("MonomialTable: dimension must be >= 1");
  if (order < 0) throw ValidationError("MonomialTable: order must be >= 0");

  binom_rows_ = dim + order + 1;
  binom_.assign(static_cast<std::size_t>(binom_rows_) * binom_rows_, 0);
  for (int n = 0; n < binom_rows_; ++n) {
    binom_[static_cast<std::size_t>(n) * binom_rows_] = 1;
    for (int k = 1; k <= n; ++k) {
      binom_[static_cast<std::size_t>(n) * binom_rows_ + k] =
          binomial(n - 1, k - 1) + binomial(n - 1, k);
    }
  }

  offsets_.assign(order + 2, 0);
  for (int d = 0; d <= order + 1; ++d) {
    offsets_[d] = binomial(d - 1 + dim, dim);  // # monomials of degree < d
  }

  const auto total = static_cast<std::size_t>(offsets_[order + 1]);
  exps_.reserve(total * dim);
  degrees_.reserve(total);

  // Per degree, emit tuples in lexicographically descending order: the first
  // variable takes its exponent from d down to 0, recursively.
  std::vector<int> cur(dim, 0);
  auto emit = [&](auto&& self, int var, int remaining) -> void {
    if (var == dim - 1) {
      cur[var] = remaining;
      exps_.insert(exps_.end(), cur.begin(), cur.end());
      return;
    }
    for (int e = remaining; e >= 0; --e) {
      cur[var] = e;
      self(self, var + 1, remaining - e);
    }
  };
  for (int d = 0; d <= order; ++d) {
    emit(emit, 0, d);
    for (long long i = offsets_[d]; i < offsets_[d + 1]; ++i) degrees_.push_back(d);
  }
}

long long MonomialTable::binomial(int n, int k) const {
  if (k < 0 || k > n || n < 0) return 0;
  return binom_[static_cast<std::size_t>(n) * binom_rows_ + k];
}

int MonomialTable::index_of(std::span<const int> p) const {
  const int d = degree(p);
  if (d > order_) return -1;
  long long idx = offsets_[d];
  int remaining = d;
  for (int var = 0; var + 1 < dim_; ++var) {
    const int vars_left = dim_ - var - 1;
    // tuples whose exponent here exceeds p[var] come first
    for (int e = remaining; e > p[var]; --e) {
      idx += binomial(remaining - e + vars_left - 1, vars_left - 1);
    }
    remaining -= p[var];
  }
  return static_cast<int>(idx);
}

std::shared_ptr<const MonomialTable> MonomialTable::get(int dim, int order) {
  static std::mutex mutex;
  static std::map<std::pair<int, int>, std::shared_ptr<const MonomialTable>> cache;
  std::lock_guard<std::mutex> lock(mutex);
  auto& slot = cache[{dim, order}];
  if (!slot) slot = std::make_shared<MonomialTable>(dim, order);
  return slot;
}

}  // namespace nform
