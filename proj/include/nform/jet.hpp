#pragma once

#include <complex>
#include <memory>
#include <span>
#include <vector>

#include "nform/multi_index.hpp"

namespace nform {

using Complex = std::complex<double>;
using ComplexVector = std::vector<Complex>;
/// Row-major dense complex matrix with explicit rows.
using ComplexMatrix = std::vector<std::vector<Complex>>;

/// A truncated polynomial map C^n -> C^n fixing the origin: the working
/// representation of germs and their jets. Coefficients are stored densely in
/// graded-lex monomial order; the constant slot exists physically but is
/// always zero. Immutable in spirit: operations return new maps.
class JetMap {
 public:
  JetMap(int dim, int order);

  int dim() const { return dim_; }
  int order() const { return order_; }
  const MonomialTable& table() const { return *table_; }
  std::shared_ptr<const MonomialTable> table_ptr() const { return table_; }

  /// Coefficient of z^p in component `comp` (0-based). Absent keys are zero.
  Complex coeff(int comp, std::span<const int> exponents) const;
  void set_coeff(int comp, std::span<const int> exponents, Complex value);

  Complex coeff_at(int comp, int index) const {
    return coeffs_[static_cast<std::size_t>(comp) * table_->count() + index];
  }
  void set_coeff_at(int comp, int index, Complex value);

  std::span<const Complex> component(int comp) const {
    return {coeffs_.data() + static_cast<std::size_t>(comp) * table_->count(),
            static_cast<std::size_t>(table_->count())};
  }
  std::span<Complex> component_mut(int comp) {
    return {coeffs_.data() + static_cast<std::size_t>(comp) * table_->count(),
            static_cast<std::size_t>(table_->count())};
  }

  /// Largest coefficient magnitude.
  double max_coeff() const;
  /// Number of nonzero stored coefficients.
  int term_count() const;

 private:
  int dim_;
  int order_;
  std::shared_ptr<const MonomialTable> table_;
  ComplexVector coeffs_;  // dim * table.count()
};

// ---------------------------------------------------------------------------
// Jet algebra
// ---------------------------------------------------------------------------

JetMap identity_jet(int dim, int order);

/// Degree-<=N truncation of f o g. Deterministic for any OpenMP thread count:
/// term contributions are accumulated in fixed 32-term chunks merged in order.
JetMap compose(const JetMap& f, const JetMap& g);

/// Straightforward term-by-term reference composition, kept for testing the
/// parallel kernel against.
JetMap compose_serial(const JetMap& f, const JetMap& g);

struct InvertReport {
  double condition = 0.0;        // condition number of the linear part
  bool ill_conditioned = false;  // condition above threshold (warning)
};

/// Order-by-order inverse: dense solve for the linear part, then fixed-point
/// refinement g <- g - L^{-1} o (degree-k defect). Throws NumericalError on a
/// singular linear part; an above-threshold condition number is reported as a
/// warning through `report`.
JetMap invert(const JetMap& f, InvertReport* report = nullptr,
              double cond_warn_threshold = 1e12);

/// Drops all coefficients of degree > s; the result has order s.
JetMap project(const JetMap& f, int s);

/// Jet at 0 of w -> f(z+w) - f(z), by exact binomial expansion. Treats f as a
/// true polynomial of degree f.order.
JetMap recenter(const JetMap& f, std::span<const Complex> z);

ComplexVector evaluate(const JetMap& f, std::span<const Complex> z);

/// Zero-pads (or errors) to a new truncation order >= f.order.
JetMap embed(const JetMap& f, int order);

// Linear slice access. Extraction then re-embedding is the identity on the
// degree-1 coefficients.
ComplexMatrix linear_part(const JetMap& f);
void set_linear_part(JetMap& f, const ComplexMatrix& m);
JetMap linear_jet(const ComplexMatrix& m, int order);

JetMap add(const JetMap& a, const JetMap& b);
JetMap subtract(const JetMap& a, const JetMap& b);
JetMap scale(const JetMap& a, Complex factor);
/// Keeps only the degree-k coefficients.
JetMap degree_slice(const JetMap& f, int k);

double max_coeff_diff(const JetMap& a, const JetMap& b);

/// Equality within tol, scaled by the larger map's max coefficient magnitude
/// when that exceeds 1.
bool approx_equal(const JetMap& a, const JetMap& b, double tol);

namespace detail {

/// Scalar polynomial row over a monomial table (constant slot in use), the
/// scratch representation behind composition, substitution and derivatives.
using Row = ComplexVector;

Row row_zero(const MonomialTable& t);
void row_mul_truncated(const MonomialTable& t, std::span<const Complex> a,
                       std::span<const Complex> b, Row& out);
/// Substitutes g's components into a scalar polynomial row defined over g's
/// table (constant term passes through).
Row substitute_row(std::span<const Complex> row, const JetMap& g);
/// d(row)/dz_var as a row over the same table.
Row derivative_row(const MonomialTable& t, std::span<const Complex> row, int var);
Complex evaluate_row(const MonomialTable& t, std::span<const Complex> row,
                     std::span<const Complex> z);
/// Row of w -> row(z+w) - row(z) (constant dropped), exact binomial expansion.
Row recenter_row(const MonomialTable& t, std::span<const Complex> row,
                 std::span<const Complex> z);

}  // namespace detail

}  // namespace nform
