#pragma once

#include <cstdint>
#include <vector>

#include "distobs/linalg.hpp"
#include "distobs/plant.hpp"

namespace distobs {

/// Spacing between consecutive assigned quotient eigenvalues.
inline constexpr double kTargetSpacing = 0.5;

/// Per-agent observer data. The agent's unobservable subspace is span(V);
/// its gain K only acts on the quotient coordinates Q x.
struct AgentDesign {
    Matrix V;            // n x k, orthonormal basis of the unobservable subspace
    Matrix Q;            // (n-k) x n, orthonormal-row annihilator of V
    Matrix Abar;         // quotient dynamics, QA = Abar Q
    Matrix Cbar;         // quotient output, Cbar Q = C
    Matrix Kbar;         // quotient injection gain
    Matrix K;            // lifted gain Q' Kbar
    Matrix P;            // orthogonal projection V V'
    Matrix closed_loop;  // A + K C
    Matrix Asub;         // restriction of A + K C to span(V)
};

/// Aggregate observer over all m agents (block-diagonal stacks, mn x mn and
/// friends).
struct ObserverDesign {
    int state_dim = 0;
    int agent_count = 0;
    double lambda_hat = 0.0;
    std::vector<AgentDesign> agents;

    Matrix closed_loop;           // blockdiag(A + K_i C_i)
    Matrix projection;            // blockdiag(P_i)
    Matrix basis;                 // blockdiag(V_i), mn x sum k_i
    Matrix annihilator;           // blockdiag(Q_i)
    Matrix restricted;            // solves closed_loop * basis = basis * restricted
    Matrix quotient_closed_loop;  // blockdiag(Abar_i + Kbar_i Cbar_i)

    /// [annihilator; basis'], orthogonal.
    Matrix change_of_basis() const;
    int unobservable_dim() const { return static_cast<int>(basis.cols()); }
};

/// Output-injection gain Kbar with spec(Abar + Kbar Cbar) =
/// {-lambda_hat, -lambda_hat - d, -lambda_hat - 2d, ...}, d = kTargetSpacing.
/// Throws NotObservable if (Cbar, Abar) is unobservable and AssignmentFailed
/// if no well-conditioned Sylvester solution is found.
Matrix assign_spectrum(const Matrix& Abar, const Matrix& Cbar, double lambda_hat,
                       std::uint64_t seed, double tol = kRankTol);

/// Q' Kbar (Q has orthonormal rows, so Q' is a right inverse).
Matrix lift_gain(const Matrix& Q, const Matrix& Kbar);

AgentDesign build_agent(const Plant& plant, int agent, double lambda_hat, double tol = kRankTol,
                        std::uint64_t seed = 0);

/// Throws NotJointlyObservable before doing any per-agent work.
ObserverDesign build_observer(const Plant& plant, double lambda_hat, double tol = kRankTol,
                              std::uint64_t seed = 0);

}  // namespace distobs
