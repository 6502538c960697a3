#include "nform/jet.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "nform/errors.hpp"
#include "nform/linalg.hpp"

namespace nform {

namespace {

void check_same_shape(const JetMap& f, const JetMap& g, const char* op) {
  if (f.dim() != g.dim()) {
    std::ostringstream msg;
    msg << op << ": dimension mismatch (" << f.dim() << " vs " << g.dim() << ")";
    throw ValidationError(msg.str());
  }
  if (f.order() != g.order()) {
    std::ostringstream msg;
    msg << op << ": order mismatch (" << f.order() << " vs " << g.order() << ")";
    throw ValidationError(msg.str());
  }
}

void check_dim_vector(const JetMap& f, std::span<const Complex> z, const char* op) {
  if (static_cast<std::size_t>(f.dim()) != z.size()) {
    std::ostringstream msg;
    msg << op << ": point dimension " << z.size() << " does not match map dimension "
        << f.dim();
    throw ValidationError(msg.str());
  }
}

// L o f for a linear map L given as a matrix: applies L to every monomial's
// coefficient vector.
JetMap apply_matrix_left(const ComplexMatrix& m, const JetMap& f) {
  JetMap out(f.dim(), f.order());
  const int count = f.table().count();
  for (int idx = 1; idx < count; ++idx) {
    for (int j = 0; j < f.dim(); ++j) {
      Complex acc = 0.0;
      for (int i = 0; i < f.dim(); ++i) acc += m[j][i] * f.coeff_at(i, idx);
      if (acc != 0.0) out.set_coeff_at(j, idx, acc);
    }
  }
  return out;
}

}  // namespace

JetMap::JetMap(int dim, int order) : dim_(dim), order_(order) {
  if (dim < 1) throw ValidationError("JetMap: dimension must be >= 1");
  if (order < 1) throw ValidationError("JetMap: order must be >= 1");
  table_ = MonomialTable::get(dim, order);
  coeffs_.assign(static_cast<std::size_t>(dim) * table_->count(), 0.0);
}

Complex JetMap::coeff(int comp, std::span<const int> exponents) const {
  if (comp < 0 || comp >= dim_) throw ValidationError("JetMap: component out of range");
  if (static_cast<int>(exponents.size()) != dim_)
    throw ValidationError("JetMap: exponent vector length does not match dimension");
  for (int e : exponents)
    if (e < 0) throw ValidationError("JetMap: negative exponent");
  const int idx = table_->index_of(exponents);
  if (idx < 0) return 0.0;  // beyond the truncation order
  return coeff_at(comp, idx);
}

void JetMap::set_coeff(int comp, std::span<const int> exponents, Complex value) {
  if (comp < 0 || comp >= dim_) throw ValidationError("JetMap: component out of range");
  if (static_cast<int>(exponents.size()) != dim_)
    throw ValidationError("JetMap: exponent vector length does not match dimension");
  for (int e : exponents)
    if (e < 0) throw ValidationError("JetMap: negative exponent");
  const int d = degree(exponents);
  if (d == 0) throw ValidationError("JetMap: constant terms are not representable");
  if (d > order_) throw ValidationError("JetMap: degree exceeds truncation order");
  set_coeff_at(comp, table_->index_of(exponents), value);
}

void JetMap::set_coeff_at(int comp, int index, Complex value) {
  if (index <= 0) throw ValidationError("JetMap: constant terms are not representable");
  coeffs_[static_cast<std::size_t>(comp) * table_->count() + index] = value;
}

double JetMap::max_coeff() const {
  double worst = 0.0;
  for (const auto& c : coeffs_) worst = std::max(worst, std::abs(c));
  return worst;
}

int JetMap::term_count() const {
  int n = 0;
  for (const auto& c : coeffs_)
    if (c != 0.0) ++n;
  return n;
}

JetMap identity_jet(int dim, int order) {
  JetMap f(dim, order);
  MultiIndex p(dim, 0);
  for (int j = 0; j < dim; ++j) {
    p[j] = 1;
    f.set_coeff(j, p, 1.0);
    p[j] = 0;
  }
  return f;
}

// ---------------------------------------------------------------------------
// Row utilities
// ---------------------------------------------------------------------------

namespace detail {

Row row_zero(const MonomialTable& t) { return Row(t.count(), 0.0); }

void row_mul_truncated(const MonomialTable& t, std::span<const Complex> a,
                       std::span<const Complex> b, Row& out) {
  const int n = t.dim();
  const int order = t.order();
  out.assign(t.count(), 0.0);
  std::vector<int> sum(n);
  for (int ia = 0; ia < t.count(); ++ia) {
    const Complex ca = a[ia];
    if (ca == 0.0) continue;
    const int da = t.degree_of(ia);
    const auto pa = t.exponents(ia);
    const int blimit = t.first_of_degree(order - da) + t.count_of_degree(order - da);
    for (int ib = 0; ib < blimit; ++ib) {
      const Complex cb = b[ib];
      if (cb == 0.0) continue;
      const auto pb = t.exponents(ib);
      for (int k = 0; k < n; ++k) sum[k] = pa[k] + pb[k];
      out[t.index_of(sum)] += ca * cb;
    }
  }
}

// prod of g_k^{p_k}, truncated at g's order. Returns an all-zero row when the
// minimum possible degree already exceeds the order.
Row monomial_substitution(const MonomialTable& t, std::span<const int> p,
                          const JetMap& g) {
  Row acc = row_zero(t);
  acc[0] = 1.0;
  int min_degree = 0;
  Row scratch;
  for (int k = 0; k < t.dim(); ++k) {
    for (int e = 0; e < p[k]; ++e) {
      ++min_degree;
      if (min_degree > t.order()) return row_zero(t);
      row_mul_truncated(t, acc, g.component(k), scratch);
      acc.swap(scratch);
    }
  }
  return acc;
}

Row substitute_row(std::span<const Complex> row, const JetMap& g) {
  const MonomialTable& t = g.table();
  Row out = row_zero(t);
  out[0] = row[0];  // constant passes through
  for (int idx = 1; idx < t.count(); ++idx) {
    if (row[idx] == 0.0) continue;
    Row term = monomial_substitution(t, t.exponents(idx), g);
    const Complex c = row[idx];
    for (int i = 0; i < t.count(); ++i) out[i] += c * term[i];
  }
  return out;
}

Row derivative_row(const MonomialTable& t, std::span<const Complex> row, int var) {
  Row out = row_zero(t);
  MultiIndex q(t.dim());
  for (int idx = 0; idx < t.count(); ++idx) {
    if (row[idx] == 0.0) continue;
    const auto p = t.exponents(idx);
    if (p[var] == 0) continue;
    q.assign(p.begin(), p.end());
    q[var] -= 1;
    out[t.index_of(q)] += row[idx] * static_cast<double>(p[var]);
  }
  return out;
}

Complex evaluate_row(const MonomialTable& t, std::span<const Complex> row,
                     std::span<const Complex> z) {
  Complex acc = 0.0;
  for (int idx = 0; idx < t.count(); ++idx) {
    if (row[idx] == 0.0) continue;
    Complex mono = 1.0;
    const auto p = t.exponents(idx);
    for (int k = 0; k < t.dim(); ++k)
      for (int e = 0; e < p[k]; ++e) mono *= z[k];
    acc += row[idx] * mono;
  }
  return acc;
}

Row recenter_row(const MonomialTable& t, std::span<const Complex> row,
                 std::span<const Complex> z) {
  const int n = t.dim();
  const int order = t.order();
  // z_k^e for e <= order
  std::vector<ComplexVector> zpow(n, ComplexVector(order + 1, 1.0));
  for (int k = 0; k < n; ++k)
    for (int e = 1; e <= order; ++e) zpow[k][e] = zpow[k][e - 1] * z[k];

  Row out = row_zero(t);
  MultiIndex q(n, 0);
  for (int idx = 1; idx < t.count(); ++idx) {
    const Complex c = row[idx];
    if (c == 0.0) continue;
    const auto p = t.exponents(idx);
    // all 0 <= q <= p, q != 0
    std::fill(q.begin(), q.end(), 0);
    while (true) {
      // advance q in odometer order
      int k = 0;
      while (k < n && q[k] == p[k]) {
        q[k] = 0;
        ++k;
      }
      if (k == n) break;
      ++q[k];
      Complex factor = c;
      for (int v = 0; v < n; ++v)
        factor *= static_cast<double>(t.binomial(p[v], q[v])) * zpow[v][p[v] - q[v]];
      out[t.index_of(q)] += factor;
    }
  }
  return out;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Composition
// ---------------------------------------------------------------------------

namespace {

struct Term {
  int index;
  Complex coeff;
};

// Fixed-size chunks make the accumulation order independent of the OpenMP
// thread count: every chunk sums its terms in graded-lex order and chunks are
// merged in ascending order.
constexpr int kComposeChunk = 32;
constexpr int kComposeBatch = 64;

}  // namespace

JetMap compose(const JetMap& f, const JetMap& g) {
  check_same_shape(f, g, "compose");
  const MonomialTable& t = f.table();
  const int n = f.dim();
  const int count = t.count();

  // Per-variable truncated powers of g's components, shared across terms.
  std::vector<int> max_exp(n, 0);
  for (int j = 0; j < n; ++j) {
    for (int idx = 1; idx < count; ++idx) {
      if (f.coeff_at(j, idx) == 0.0) continue;
      const auto p = t.exponents(idx);
      for (int k = 0; k < n; ++k) max_exp[k] = std::max(max_exp[k], p[k]);
    }
  }
  std::vector<std::vector<detail::Row>> powers(n);
  for (int k = 0; k < n; ++k) {
    powers[k].resize(max_exp[k] + 1);
    powers[k][0] = detail::row_zero(t);
    powers[k][0][0] = 1.0;
    for (int e = 1; e <= max_exp[k]; ++e) {
      if (e > t.order()) {
        powers[k][e] = detail::row_zero(t);
        continue;
      }
      detail::row_mul_truncated(t, powers[k][e - 1], g.component(k), powers[k][e]);
    }
  }

  JetMap out(n, f.order());
  detail::Row scratch;
  for (int j = 0; j < n; ++j) {
    std::vector<Term> terms;
    for (int idx = 1; idx < count; ++idx) {
      const Complex c = f.coeff_at(j, idx);
      if (c != 0.0) terms.push_back({idx, c});
    }
    if (terms.empty()) continue;
    const int num_chunks =
        static_cast<int>((terms.size() + kComposeChunk - 1) / kComposeChunk);

    auto accumulate_chunk = [&](int chunk, detail::Row& acc) {
      acc.assign(count, 0.0);
      detail::Row local_scratch;
      const int begin = chunk * kComposeChunk;
      const int end = std::min<int>(begin + kComposeChunk,
                                    static_cast<int>(terms.size()));
      for (int ti = begin; ti < end; ++ti) {
        const auto p = t.exponents(terms[ti].index);
        // product of precomputed powers, cheapest factor count first
        detail::Row prod = detail::row_zero(t);
        prod[0] = 1.0;
        int min_degree = 0;
        bool dead = false;
        for (int k = 0; k < n && !dead; ++k) {
          if (p[k] == 0) continue;
          min_degree += p[k];
          if (min_degree > t.order()) {
            dead = true;
            break;
          }
          detail::row_mul_truncated(t, prod, powers[k][p[k]], local_scratch);
          prod.swap(local_scratch);
        }
        if (dead) continue;
        const Complex c = terms[ti].coeff;
        for (int i = 0; i < count; ++i) acc[i] += c * prod[i];
      }
    };

    detail::Row result(count, 0.0);
    for (int base = 0; base < num_chunks; base += kComposeBatch) {
      const int batch = std::min(kComposeBatch, num_chunks - base);
      std::vector<detail::Row> chunk_rows(batch);
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic)
#endif
      for (int c = 0; c < batch; ++c) accumulate_chunk(base + c, chunk_rows[c]);
      for (int c = 0; c < batch; ++c)
        for (int i = 0; i < count; ++i) result[i] += chunk_rows[c][i];
    }
    for (int i = 1; i < count; ++i)
      if (result[i] != 0.0) out.set_coeff_at(j, i, result[i]);
  }
  return out;
}

JetMap compose_serial(const JetMap& f, const JetMap& g) {
  check_same_shape(f, g, "compose_serial");
  const MonomialTable& t = f.table();
  JetMap out(f.dim(), f.order());
  for (int j = 0; j < f.dim(); ++j) {
    detail::Row result = detail::row_zero(t);
    for (int idx = 1; idx < t.count(); ++idx) {
      const Complex c = f.coeff_at(j, idx);
      if (c == 0.0) continue;
      detail::Row term = detail::monomial_substitution(t, t.exponents(idx), g);
      for (int i = 0; i < t.count(); ++i) result[i] += c * term[i];
    }
    for (int i = 1; i < t.count(); ++i)
      if (result[i] != 0.0) out.set_coeff_at(j, i, result[i]);
  }
  return out;
}

JetMap invert(const JetMap& f, InvertReport* report, double cond_warn_threshold) {
  const ComplexMatrix lin = linear_part(f);
  const double cond = condition_number(lin);
  if (std::isinf(cond)) throw NumericalError("invert: singular linear part");
  if (report) {
    report->condition = cond;
    report->ill_conditioned = cond > cond_warn_threshold;
  }
  const ComplexMatrix lin_inv = mat_inverse(lin);

  JetMap g = linear_jet(lin_inv, f.order());
  const JetMap id = identity_jet(f.dim(), f.order());
  for (int k = 2; k <= f.order(); ++k) {
    const JetMap defect = degree_slice(subtract(compose(f, g), id), k);
    if (defect.max_coeff() == 0.0) continue;
    g = subtract(g, apply_matrix_left(lin_inv, defect));
  }
  return g;
}

JetMap project(const JetMap& f, int s) {
  if (s < 1 || s > f.order())
    throw ValidationError("project: target order out of range");
  JetMap out(f.dim(), s);
  const MonomialTable& t = f.table();
  const int limit = t.first_of_degree(s) + t.count_of_degree(s);
  for (int j = 0; j < f.dim(); ++j) {
    for (int idx = 1; idx < limit; ++idx) {
      const Complex c = f.coeff_at(j, idx);
      if (c != 0.0) out.set_coeff(j, t.exponents(idx), c);
    }
  }
  return out;
}

JetMap recenter(const JetMap& f, std::span<const Complex> z) {
  check_dim_vector(f, z, "recenter");
  JetMap out(f.dim(), f.order());
  for (int j = 0; j < f.dim(); ++j) {
    detail::Row row = detail::recenter_row(f.table(), f.component(j), z);
    for (int i = 1; i < f.table().count(); ++i)
      if (row[i] != 0.0) out.set_coeff_at(j, i, row[i]);
  }
  return out;
}

ComplexVector evaluate(const JetMap& f, std::span<const Complex> z) {
  check_dim_vector(f, z, "evaluate");
  ComplexVector out(f.dim());
  for (int j = 0; j < f.dim(); ++j)
    out[j] = detail::evaluate_row(f.table(), f.component(j), z);
  return out;
}

JetMap embed(const JetMap& f, int order) {
  if (order < f.order()) throw ValidationError("embed: order must not decrease");
  if (order == f.order()) return f;
  JetMap out(f.dim(), order);
  const MonomialTable& t = f.table();
  for (int j = 0; j < f.dim(); ++j)
    for (int idx = 1; idx < t.count(); ++idx) {
      const Complex c = f.coeff_at(j, idx);
      if (c != 0.0) out.set_coeff(j, t.exponents(idx), c);
    }
  return out;
}

ComplexMatrix linear_part(const JetMap& f) {
  const int n = f.dim();
  ComplexMatrix m(n, std::vector<Complex>(n, 0.0));
  MultiIndex p(n, 0);
  for (int j = 0; j < n; ++j)
    for (int k = 0; k < n; ++k) {
      p[k] = 1;
      m[j][k] = f.coeff(j, p);
      p[k] = 0;
    }
  return m;
}

void set_linear_part(JetMap& f, const ComplexMatrix& m) {
  const int n = f.dim();
  if (static_cast<int>(m.size()) != n)
    throw ValidationError("set_linear_part: matrix dimension mismatch");
  MultiIndex p(n, 0);
  for (int j = 0; j < n; ++j)
    for (int k = 0; k < n; ++k) {
      p[k] = 1;
      f.set_coeff(j, p, m[j][k]);
      p[k] = 0;
    }
}

JetMap linear_jet(const ComplexMatrix& m, int order) {
  JetMap f(static_cast<int>(m.size()), order);
  set_linear_part(f, m);
  return f;
}

JetMap add(const JetMap& a, const JetMap& b) {
  check_same_shape(a, b, "add");
  JetMap out(a.dim(), a.order());
  for (int j = 0; j < a.dim(); ++j)
    for (int i = 1; i < a.table().count(); ++i) {
      const Complex c = a.coeff_at(j, i) + b.coeff_at(j, i);
      if (c != 0.0) out.set_coeff_at(j, i, c);
    }
  return out;
}

JetMap subtract(const JetMap& a, const JetMap& b) {
  check_same_shape(a, b, "subtract");
  JetMap out(a.dim(), a.order());
  for (int j = 0; j < a.dim(); ++j)
    for (int i = 1; i < a.table().count(); ++i) {
      const Complex c = a.coeff_at(j, i) - b.coeff_at(j, i);
      if (c != 0.0) out.set_coeff_at(j, i, c);
    }
  return out;
}

JetMap scale(const JetMap& a, Complex factor) {
  JetMap out(a.dim(), a.order());
  for (int j = 0; j < a.dim(); ++j)
    for (int i = 1; i < a.table().count(); ++i) {
      const Complex c = a.coeff_at(j, i) * factor;
      if (c != 0.0) out.set_coeff_at(j, i, c);
    }
  return out;
}

JetMap degree_slice(const JetMap& f, int k) {
  JetMap out(f.dim(), f.order());
  if (k < 1 || k > f.order()) return out;
  const MonomialTable& t = f.table();
  const int begin = t.first_of_degree(k);
  const int end = begin + t.count_of_degree(k);
  for (int j = 0; j < f.dim(); ++j)
    for (int i = begin; i < end; ++i) {
      const Complex c = f.coeff_at(j, i);
      if (c != 0.0) out.set_coeff_at(j, i, c);
    }
  return out;
}

double max_coeff_diff(const JetMap& a, const JetMap& b) {
  check_same_shape(a, b, "max_coeff_diff");
  double worst = 0.0;
  for (int j = 0; j < a.dim(); ++j)
    for (int i = 0; i < a.table().count(); ++i)
      worst = std::max(worst, std::abs(a.coeff_at(j, i) - b.coeff_at(j, i)));
  return worst;
}

bool approx_equal(const JetMap& a, const JetMap& b, double tol) {
  if (a.dim() != b.dim() || a.order() != b.order()) return false;
  const double scale = std::max(1.0, std::max(a.max_coeff(), b.max_coeff()));
  return max_coeff_diff(a, b) <= tol * scale;
}

}  // namespace nform
