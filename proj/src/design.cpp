#include "distobs/design.hpp"

#include <array>
#include <cmath>
#include <limits>
#include <random>
#include <sstream>

#include "distobs/errors.hpp"
#include "distobs/subspaces.hpp"

namespace distobs {

namespace {

constexpr int kMaxAssignmentAttempts = 10;
constexpr double kMaxSylvesterCondition = 1e8;

// Solves A X - X F = R through the vectorized (Kronecker) form. Returns
// false when the operator is numerically singular.
bool solve_sylvester(const Matrix& A, const Matrix& F, const Matrix& R, Matrix& X) {
    const Eigen::Index q = A.rows();
    const Matrix I = Matrix::Identity(q, q);
    const Matrix op = kron(I, A) - kron(F.transpose(), I);
    Eigen::FullPivLU<Matrix> lu(op);
    if (!lu.isInvertible()) return false;
    const Vector x = lu.solve(Eigen::Map<const Vector>(R.data(), R.size()));
    X = Eigen::Map<const Matrix>(x.data(), q, q);
    return X.allFinite();
}

double condition_number(const Matrix& X) {
    Eigen::JacobiSVD<Matrix> svd(X);
    const auto& sv = svd.singularValues();
    const double smin = sv(sv.size() - 1);
    if (smin == 0.0) return std::numeric_limits<double>::infinity();
    return sv(0) / smin;
}

}  // namespace

Matrix assign_spectrum(const Matrix& Abar, const Matrix& Cbar, double lambda_hat,
                       std::uint64_t seed, double tol) {
    const Eigen::Index q = Abar.rows();
    const Eigen::Index s = Cbar.rows();
    if (lambda_hat <= 0.0) throw InvalidArgument("assign_spectrum: lambda_hat must be positive");
    if (q == 0) return Matrix(0, s);
    if (numerical_rank(observability_matrix(Abar, Cbar), tol) != q) {
        throw NotObservable("assign_spectrum: quotient pair (Cbar, Abar) is not observable");
    }

    // Dual problem: (Abar', Cbar') is controllable. For F with the target
    // spectrum and any G, a solution X of Abar' X - X F = -Cbar' G gives
    // (Abar' + Cbar' G X^{-1}) X = X F, so Kbar = (G X^{-1})'.
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    const Matrix At = Abar.transpose();
    const Matrix Bt = Cbar.transpose();

    for (int attempt = 0; attempt < kMaxAssignmentAttempts; ++attempt) {
        // The offset only kicks in on retries; it moves targets off an open-loop
        // eigenvalue that would make the Sylvester operator singular.
        const double offset = attempt * kTargetSpacing / (2.0 * kMaxAssignmentAttempts);
        Matrix F = Matrix::Zero(q, q);
        for (Eigen::Index j = 0; j < q; ++j) {
            F(j, j) = -lambda_hat - static_cast<double>(j) * kTargetSpacing - offset;
        }
        Matrix G(s, q);
        for (Eigen::Index i = 0; i < G.size(); ++i) G.data()[i] = normal(rng);

        Matrix X;
        if (!solve_sylvester(At, F, -Bt * G, X)) continue;
        // Kbar is invariant under X -> X D, G -> G D for diagonal D, so judge
        // the conditioning of X with unit columns.
        const Vector scale = X.colwise().norm().transpose();
        if (scale.minCoeff() <= 0.0) continue;
        X = X * scale.cwiseInverse().asDiagonal();
        G = G * scale.cwiseInverse().asDiagonal();
        if (condition_number(X) > kMaxSylvesterCondition) continue;

        Matrix Kbar = (G * X.inverse()).transpose();
        const double abscissa = spectral_abscissa(Abar + Kbar * Cbar);
        if (abscissa <= -lambda_hat + 1e-7 * (1.0 + lambda_hat)) return Kbar;
    }
    std::ostringstream msg;
    msg << "assign_spectrum: no well-conditioned assignment after " << kMaxAssignmentAttempts
        << " attempts (q=" << q << ", s=" << s << ")";
    throw AssignmentFailed(msg.str());
}

Matrix lift_gain(const Matrix& Q, const Matrix& Kbar) {
    return Q.transpose() * Kbar;
}

AgentDesign build_agent(const Plant& plant, int agent, double lambda_hat, double tol,
                        std::uint64_t seed) {
    const Matrix& A = plant.A();
    const Matrix& C = plant.channel(agent);
    AgentDesign d;
    d.V = unobservable_subspace(A, C, tol);
    d.Q = annihilator(d.V);
    auto [Abar, Cbar] = quotient_map(A, C, d.V, d.Q);
    d.Abar = std::move(Abar);
    d.Cbar = std::move(Cbar);

    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(agent)};
    std::uint64_t agent_seed = 0;
    {
        std::array<std::uint32_t, 2> words{};
        seq.generate(words.begin(), words.end());
        agent_seed = (static_cast<std::uint64_t>(words[0]) << 32) | words[1];
    }
    d.Kbar = assign_spectrum(d.Abar, d.Cbar, lambda_hat, agent_seed, tol);
    d.K = lift_gain(d.Q, d.Kbar);
    d.P = d.V * d.V.transpose();
    d.closed_loop = A + d.K * C;
    d.Asub = restriction(d.closed_loop, d.V);
    return d;
}

Matrix ObserverDesign::change_of_basis() const {
    Matrix H(closed_loop.rows(), closed_loop.cols());
    H << annihilator, basis.transpose();
    return H;
}

ObserverDesign build_observer(const Plant& plant, double lambda_hat, double tol,
                              std::uint64_t seed) {
    if (!is_jointly_observable(plant, tol)) {
        throw NotJointlyObservable("build_observer: (C, A) with all channels stacked is not observable");
    }
    ObserverDesign out;
    out.state_dim = plant.state_dim();
    out.agent_count = plant.agent_count();
    out.lambda_hat = lambda_hat;

    std::vector<Matrix> closed, proj, basis, ann, quotient, asub;
    for (int i = 0; i < plant.agent_count(); ++i) {
        AgentDesign a = build_agent(plant, i, lambda_hat, tol, seed);
        closed.push_back(a.closed_loop);
        proj.push_back(a.P);
        basis.push_back(a.V);
        ann.push_back(a.Q);
        quotient.push_back(a.Abar + a.Kbar * a.Cbar);
        asub.push_back(a.Asub);
        out.agents.push_back(std::move(a));
    }
    out.closed_loop = block_diagonal(closed);
    out.projection = block_diagonal(proj);
    out.basis = block_diagonal(basis);
    out.annihilator = block_diagonal(ann);
    out.quotient_closed_loop = block_diagonal(quotient);
    out.restricted = restriction(out.closed_loop, out.basis);

    const Matrix expected = block_diagonal(asub);
    const double mismatch = out.restricted.size() == 0 ? 0.0 : norm2(out.restricted - expected);
    if (mismatch > 1e-9 * (1.0 + norm2(out.closed_loop))) {
        std::ostringstream msg;
        msg << "build_observer: restricted block differs from blockdiag(Asub_i) by " << mismatch;
        throw ResidualTooLarge(msg.str());
    }
    return out;
}

}  // namespace distobs
