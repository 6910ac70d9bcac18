#ifndef MFSPIN_LINALG_HPP
#define MFSPIN_LINALG_HPP

// Small dense matrix helpers. Everything here operates on k x k systems with
// k typically <= 4, so plain vector-of-vector storage is fine.

#include <cstddef>
#include <vector>

namespace mfspin {

using Vec = std::vector<double>;
using Mat = std::vector<std::vector<double>>;

Mat identity(std::size_t k);
Mat zeros(std::size_t rows, std::size_t cols);
Mat diag(const Vec& d);
Mat transpose(const Mat& a);
Mat matmul(const Mat& a, const Mat& b);
Vec matvec(const Mat& a, const Vec& x);

double max_abs(const Mat& a);
double max_abs_diff(const Mat& a, const Mat& b);
double max_abs_diff(const Vec& a, const Vec& b);
double frobenius_distance(const Mat& a, const Mat& b);
double euclidean_distance(const Vec& a, const Vec& b);
double infinity_norm(const Mat& a);

// Gauss-Jordan inversion with partial pivoting. Throws NumericalError when a
// pivot falls below rel_pivot_tol times the largest initial row norm.
Mat gauss_jordan_inverse(Mat a, double rel_pivot_tol = 1e-12);
Vec solve_linear(Mat a, Vec b, double rel_pivot_tol = 1e-12);

// Eigenvalues of a symmetric matrix by cyclic Jacobi rotations.
Vec symmetric_eigenvalues(Mat a);

// Spectral radius of P*J*D with P, D diagonal (entries >= 0) and J symmetric.
// P*J*D is similar to the symmetric matrix B*J*B with B = sqrt(P*D), so the
// eigenvalues are real and the Jacobi solver applies.
double spectral_radius_pjd(const Vec& p, const Mat& j, const Vec& d);

} // namespace mfspin

#endif
