#pragma once

#include <span>

#include "nform/jet.hpp"

namespace nform {

ComplexMatrix mat_identity(int n);
ComplexMatrix mat_mul(const ComplexMatrix& a, const ComplexMatrix& b);
/// Throws NumericalError when the matrix is numerically singular.
ComplexMatrix mat_inverse(const ComplexMatrix& a);
ComplexVector mat_apply(const ComplexMatrix& m, std::span<const Complex> v);
double mat_max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b);
double mat_max_abs(const ComplexMatrix& a);
/// 2-norm condition number (singular value ratio); infinity when singular.
double condition_number(const ComplexMatrix& a);
/// Dense solve a x = b; also reports the system's condition number.
ComplexVector solve_dense(const ComplexMatrix& a, std::span<const Complex> b,
                          double* condition = nullptr);

}  // namespace nform
