#include "distobs/subspaces.hpp"

#include <sstream>

#include "distobs/errors.hpp"

namespace distobs {

Matrix unobservable_subspace(const Matrix& A, const Matrix& C, double tol) {
    return null_space(observability_matrix(A, C), tol);
}

Matrix annihilator(const Matrix& V) {
    return orthogonal_complement(V).transpose();
}

QuotientPair quotient_map(const Matrix& A, const Matrix& C, const Matrix& /*V*/, const Matrix& Q,
                          double tol) {
    // Q has orthonormal rows, so Q' is the minimum-norm right inverse and the
    // least-squares solutions are QAQ' and CQ'.
    QuotientPair out{Q * A * Q.transpose(), C * Q.transpose()};
    const double scale = tol * (1.0 + norm2(A));
    const double r_a = norm2(Q * A - out.Abar * Q);
    const double r_c = norm2(out.Cbar * Q - C);
    if (r_a > scale || r_c > scale) {
        std::ostringstream msg;
        msg << "quotient_map: residuals ||QA - Abar Q|| = " << r_a << ", ||Cbar Q - C|| = " << r_c
            << " exceed " << scale;
        throw ResidualTooLarge(msg.str());
    }
    return out;
}

Matrix restriction(const Matrix& M, const Matrix& V, double tol) {
    const Eigen::Index n = M.rows();
    if (V.cols() == 0) return Matrix(0, 0);
    const Matrix MV = M * V;
    const Matrix off = MV - V * (V.transpose() * MV);
    const double residual = norm2(off);
    const double scale = tol * (1.0 + norm2(M));
    if (residual > scale) {
        std::ostringstream msg;
        msg << "restriction: ||(I - VV')MV|| = " << residual << " exceeds " << scale << " (n=" << n
            << ", k=" << V.cols() << ")";
        throw NotInvariant(msg.str());
    }
    return V.transpose() * MV;
}

InvariantDecomposition block_decompose(const Matrix& M, const Matrix& V, const Matrix& Q,
                                       double tol) {
    InvariantDecomposition d;
    d.Asub = restriction(M, V, tol);
    d.V = V;
    d.Q = Q;
    d.H.resize(M.rows(), M.cols());
    d.H << Q, V.transpose();
    d.Abar = Q * M * Q.transpose();
    d.Ahat = V.transpose() * M * Q.transpose();
    return d;
}

double upper_right_block_norm(const Matrix& M, const Matrix& H, Eigen::Index quotient_dim) {
    const Matrix T = H * M * H.transpose();
    const Eigen::Index k = T.rows() - quotient_dim;
    if (quotient_dim == 0 || k == 0) return 0.0;
    return norm2(T.topRightCorner(quotient_dim, k));
}

}  // namespace distobs
