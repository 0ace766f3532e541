#pragma once

#include <complex>
#include <vector>

#include <Eigen/Dense>

namespace distobs {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// Default relative tolerance for numerical rank decisions.
inline constexpr double kRankTol = 1e-10;

/// Numerical rank: number of singular values above tol * sigma_max * max(rows, cols).
int numerical_rank(const Matrix& M, double tol = kRankTol);

/// Orthonormal basis of ker(M) (cols x k, k may be 0), rank decided as in numerical_rank.
Matrix null_space(const Matrix& M, double tol = kRankTol);

/// Orthonormal basis of the orthogonal complement of span(V), where V has
/// orthonormal columns. Returned as n x (n - k).
Matrix orthogonal_complement(const Matrix& V);

/// [C; CA; ...; CA^{n-1}]
Matrix observability_matrix(const Matrix& A, const Matrix& C);

Matrix block_diagonal(const std::vector<Matrix>& blocks);

Matrix kron(const Matrix& A, const Matrix& B);

/// Operator 2-norm (largest singular value); 0 for empty matrices.
double norm2(const Matrix& M);

std::vector<std::complex<double>> eigenvalues(const Matrix& M);

/// Largest real part over the spectrum; -inf for an empty matrix.
double spectral_abscissa(const Matrix& M);

/// Largest eigenvalue of the symmetric part (M + M') / 2.
double max_symmetric_eigenvalue(const Matrix& M);

Matrix expm(const Matrix& M);

/// True when the two spectra agree as multisets within tol (greedy matching
/// after sorting, adequate for the small spectra handled here).
bool same_spectrum(std::vector<std::complex<double>> a, std::vector<std::complex<double>> b,
                   double tol);

}  // namespace distobs
