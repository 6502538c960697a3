#include "nform/linalg.hpp"

#include <Eigen/Dense>
#include <limits>

#include "nform/errors.hpp"

namespace nform {

namespace {

Eigen::MatrixXcd to_eigen(const ComplexMatrix& a) {
  const auto rows = static_cast<Eigen::Index>(a.size());
  const auto cols = rows == 0 ? 0 : static_cast<Eigen::Index>(a[0].size());
  Eigen::MatrixXcd m(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i) {
    if (static_cast<Eigen::Index>(a[i].size()) != cols)
      throw ValidationError("matrix rows have inconsistent lengths");
    for (Eigen::Index j = 0; j < cols; ++j) m(i, j) = a[i][j];
  }
  return m;
}

ComplexMatrix from_eigen(const Eigen::MatrixXcd& m) {
  ComplexMatrix a(m.rows(), std::vector<Complex>(m.cols()));
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j) a[i][j] = m(i, j);
  return a;
}

}  // namespace

ComplexMatrix mat_identity(int n) {
  ComplexMatrix a(n, std::vector<Complex>(n, 0.0));
  for (int i = 0; i < n; ++i) a[i][i] = 1.0;
  return a;
}

ComplexMatrix mat_mul(const ComplexMatrix& a, const ComplexMatrix& b) {
  return from_eigen(to_eigen(a) * to_eigen(b));
}

ComplexMatrix mat_inverse(const ComplexMatrix& a) {
  Eigen::MatrixXcd m = to_eigen(a);
  Eigen::FullPivLU<Eigen::MatrixXcd> lu(m);
  if (!lu.isInvertible()) throw NumericalError("matrix is numerically singular");
  return from_eigen(lu.inverse());
}

ComplexVector mat_apply(const ComplexMatrix& m, std::span<const Complex> v) {
  ComplexVector out(m.size(), 0.0);
  for (std::size_t i = 0; i < m.size(); ++i) {
    if (m[i].size() != v.size())
      throw ValidationError("matrix/vector dimension mismatch");
    Complex acc = 0.0;
    for (std::size_t j = 0; j < v.size(); ++j) acc += m[i][j] * v[j];
    out[i] = acc;
  }
  return out;
}

double mat_max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.size() != b.size()) throw ValidationError("matrix size mismatch");
  double worst = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i].size() != b[i].size()) throw ValidationError("matrix size mismatch");
    for (std::size_t j = 0; j < a[i].size(); ++j)
      worst = std::max(worst, std::abs(a[i][j] - b[i][j]));
  }
  return worst;
}

double mat_max_abs(const ComplexMatrix& a) {
  double worst = 0.0;
  for (const auto& row : a)
    for (const auto& v : row) worst = std::max(worst, std::abs(v));
  return worst;
}

double condition_number(const ComplexMatrix& a) {
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(to_eigen(a));
  const auto& sv = svd.singularValues();
  if (sv.size() == 0) return 1.0;
  const double smin = sv(sv.size() - 1);
  const double smax = sv(0);
  if (!(smin > 0.0)) return std::numeric_limits<double>::infinity();
  return smax / smin;
}

ComplexVector solve_dense(const ComplexMatrix& a, std::span<const Complex> b,
                          double* condition) {
  Eigen::MatrixXcd m = to_eigen(a);
  Eigen::VectorXcd rhs(b.size());
  for (std::size_t i = 0; i < b.size(); ++i) rhs(static_cast<Eigen::Index>(i)) = b[i];
  if (condition) *condition = condition_number(a);
  Eigen::VectorXcd x = m.colPivHouseholderQr().solve(rhs);
  ComplexVector out(b.size());
  for (std::size_t i = 0; i < b.size(); ++i) out[i] = x(static_cast<Eigen::Index>(i));
  return out;
}

}  // namespace nform
