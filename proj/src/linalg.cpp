#include "distobs/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <unsupported/Eigen/KroneckerProduct>
#include <unsupported/Eigen/MatrixFunctions>

namespace distobs {

namespace {

int rank_from_singular_values(const Vector& sv, Eigen::Index rows, Eigen::Index cols,
                              double tol) {
    if (sv.size() == 0 || sv(0) == 0.0) return 0;
    const double threshold = tol * sv(0) * static_cast<double>(std::max(rows, cols));
    int r = 0;
    for (Eigen::Index i = 0; i < sv.size(); ++i) {
        if (sv(i) > threshold) ++r;
    }
    return r;
}

}  // namespace

int numerical_rank(const Matrix& M, double tol) {
    if (M.size() == 0) return 0;
    Eigen::JacobiSVD<Matrix> svd(M);
    return rank_from_singular_values(svd.singularValues(), M.rows(), M.cols(), tol);
}

Matrix null_space(const Matrix& M, double tol) {
    const Eigen::Index n = M.cols();
    if (M.rows() == 0) return Matrix::Identity(n, n);
    // Thin SVD cannot return the null directions when rows < cols, so ask for
    // the full right singular basis.
    Eigen::JacobiSVD<Matrix> svd(M, Eigen::ComputeFullV);
    const int r = rank_from_singular_values(svd.singularValues(), M.rows(), M.cols(), tol);
    return svd.matrixV().rightCols(n - r);
}

Matrix orthogonal_complement(const Matrix& V) {
    const Eigen::Index n = V.rows();
    const Eigen::Index k = V.cols();
    if (k == 0) return Matrix::Identity(n, n);
    if (k == n) return Matrix(n, 0);
    Eigen::HouseholderQR<Matrix> qr(V);
    Matrix full = qr.householderQ() * Matrix::Identity(n, n);
    return full.rightCols(n - k);
}

Matrix observability_matrix(const Matrix& A, const Matrix& C) {
    const Eigen::Index n = A.rows();
    const Eigen::Index s = C.rows();
    Matrix O(s * n, n);
    if (s == 0) return O;
    Matrix block = C;
    for (Eigen::Index i = 0; i < n; ++i) {
        O.middleRows(i * s, s) = block;
        block = block * A;
    }
    return O;
}

Matrix block_diagonal(const std::vector<Matrix>& blocks) {
    Eigen::Index rows = 0;
    Eigen::Index cols = 0;
    for (const auto& b : blocks) {
        rows += b.rows();
        cols += b.cols();
    }
    Matrix out = Matrix::Zero(rows, cols);
    Eigen::Index r = 0;
    Eigen::Index c = 0;
    for (const auto& b : blocks) {
        out.block(r, c, b.rows(), b.cols()) = b;
        r += b.rows();
        c += b.cols();
    }
    return out;
}

Matrix kron(const Matrix& A, const Matrix& B) {
    return Eigen::kroneckerProduct(A, B).eval();
}

double norm2(const Matrix& M) {
    if (M.size() == 0) return 0.0;
    if (M.rows() == 1 || M.cols() == 1) return M.norm();
    Eigen::JacobiSVD<Matrix> svd(M);
    return svd.singularValues()(0);
}

std::vector<std::complex<double>> eigenvalues(const Matrix& M) {
    std::vector<std::complex<double>> out;
    if (M.size() == 0) return out;
    Eigen::EigenSolver<Matrix> es(M, false);
    const auto& ev = es.eigenvalues();
    out.reserve(static_cast<std::size_t>(ev.size()));
    for (Eigen::Index i = 0; i < ev.size(); ++i) out.push_back(ev(i));
    return out;
}

double spectral_abscissa(const Matrix& M) {
    double best = -std::numeric_limits<double>::infinity();
    for (const auto& z : eigenvalues(M)) best = std::max(best, z.real());
    return best;
}

double max_symmetric_eigenvalue(const Matrix& M) {
    if (M.size() == 0) return -std::numeric_limits<double>::infinity();
    const Matrix sym = 0.5 * (M + M.transpose());
    Eigen::SelfAdjointEigenSolver<Matrix> es(sym, Eigen::EigenvaluesOnly);
    return es.eigenvalues().maxCoeff();
}

Matrix expm(const Matrix& M) {
    if (M.size() == 0) return M;
    return M.exp();
}

bool same_spectrum(std::vector<std::complex<double>> a, std::vector<std::complex<double>> b,
                   double tol) {
    if (a.size() != b.size()) return false;
    std::vector<bool> used(b.size(), false);
    for (const auto& za : a) {
        double best = std::numeric_limits<double>::infinity();
        std::size_t best_j = b.size();
        for (std::size_t j = 0; j < b.size(); ++j) {
            if (used[j]) continue;
            const double d = std::abs(za - b[j]);
            if (d < best) {
                best = d;
                best_j = j;
            }
        }
        if (best_j == b.size() || best > tol) return false;
        used[best_j] = true;
    }
    return true;
}

}  // namespace distobs
