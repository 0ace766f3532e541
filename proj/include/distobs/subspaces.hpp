#pragma once

#include "distobs/linalg.hpp"

namespace distobs {

/// Residual tolerance for the algebraic identities checked inside the
/// decomposition routines, relative to (1 + ||A||).
inline constexpr double kResidualTol = 1e-8;

/// Block-triangular split of a square matrix M along an M-invariant subspace
/// span(V):
///
///     H M H^{-1} = [ Abar   0    ]      H = [ Q  ]
///                  [ Ahat   Asub ]          [ V' ]
///
/// V has orthonormal columns and Q orthonormal rows with QV = 0, so H is
/// orthogonal and H^{-1} = H'.
struct InvariantDecomposition {
    Matrix V;     // n x k
    Matrix Q;     // (n-k) x n
    Matrix H;     // n x n
    Matrix Abar;  // (n-k) x (n-k), QM = Abar Q
    Matrix Asub;  // k x k, MV = V Asub
    Matrix Ahat;  // k x (n-k), V' M Q'
};

/// Orthonormal basis of the unobservable subspace of (C, A): the kernel of
/// the observability matrix. May have zero columns (observable pair) or n
/// columns (C = 0).
Matrix unobservable_subspace(const Matrix& A, const Matrix& C, double tol = kRankTol);

/// Orthonormal-row matrix whose kernel is span(V). Identity when V is empty,
/// 0 x n when V spans the whole space.
Matrix annihilator(const Matrix& V);

struct QuotientPair {
    Matrix Abar;
    Matrix Cbar;
};

/// Least-squares solutions of QA = Abar Q and Cbar Q = C. Throws
/// ResidualTooLarge when either residual exceeds tol * (1 + ||A||), which
/// means span(V) was not A-invariant or not inside ker C.
QuotientPair quotient_map(const Matrix& A, const Matrix& C, const Matrix& V, const Matrix& Q,
                          double tol = kResidualTol);

/// V' M V after checking ||(I - VV') M V|| <= tol (1 + ||M||); NotInvariant otherwise.
Matrix restriction(const Matrix& M, const Matrix& V, double tol = kResidualTol);

InvariantDecomposition block_decompose(const Matrix& M, const Matrix& V, const Matrix& Q,
                                       double tol = kResidualTol);

/// Norm of the upper-right (n-k) x k block of H M H'.
double upper_right_block_norm(const Matrix& M, const Matrix& H, Eigen::Index quotient_dim);

}  // namespace distobs
