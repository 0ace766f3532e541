#include "distobs/errormodel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "distobs/errors.hpp"
#include "distobs/subspaces.hpp"

namespace distobs {

namespace {

Matrix disagreement(const ObserverDesign& design, const GraphFamily& family, int p) {
    if (p < 0 || p >= static_cast<int>(family.size())) {
        throw InvalidArgument("mode index " + std::to_string(p) + " outside the graph family");
    }
    const auto& graph = family[static_cast<std::size_t>(p)];
    if (graph.vertex_count() != design.agent_count) {
        throw InvalidArgument("graph " + std::to_string(p) + " has " +
                              std::to_string(graph.vertex_count()) + " vertices but the design has " +
                              std::to_string(design.agent_count) + " agents");
    }
    const int m = design.agent_count;
    const int n = design.state_dim;
    return kron(Matrix::Identity(m, m) - stochastic_matrix(graph), Matrix::Identity(n, n));
}

}  // namespace

Matrix mode_matrix(const ObserverDesign& design, const GraphFamily& family, double g, int p) {
    return design.closed_loop - g * design.projection * disagreement(design, family, p);
}

ReducedMatrices reduced_matrices(const ObserverDesign& design, const GraphFamily& family, double g,
                                 int p) {
    const Matrix D = disagreement(design, family, p);
    const Matrix& V = design.basis;
    const Matrix Qt = design.annihilator.transpose();
    ReducedMatrices r;
    r.quotient = design.quotient_closed_loop;
    r.sub = design.restricted - g * (V.transpose() * D * V);
    r.coupling = V.transpose() * design.closed_loop * Qt - g * (V.transpose() * D * Qt);
    return r;
}

Matrix coupling_block(const ObserverDesign& design, const GraphFamily& family, int p) {
    const Matrix& V = design.basis;
    return V.transpose() * disagreement(design, family, p) * V;
}

ErrorModel::ErrorModel(ObserverDesign design, GraphFamily family, double g)
    : design_(std::move(design)), family_(std::move(family)), g_(g) {
    if (!(g_ >= 0.0) || !std::isfinite(g_)) throw InvalidArgument("error model: g must be finite and >= 0");
    if (family_.empty()) throw InvalidArgument("error model: empty graph family");
    modes_.reserve(family_.size());
    reduced_.reserve(family_.size());
    for (int p = 0; p < static_cast<int>(family_.size()); ++p) {
        modes_.push_back(mode_matrix(design_, family_, g_, p));
        reduced_.push_back(reduced_matrices(design_, family_, g_, p));
    }
}

std::vector<Matrix> ErrorModel::sub_matrices() const {
    std::vector<Matrix> out;
    out.reserve(reduced_.size());
    for (const auto& r : reduced_) out.push_back(r.sub);
    return out;
}

double ErrorModel::max_block_residual() const {
    const Matrix H = design_.change_of_basis();
    const Eigen::Index q = design_.annihilator.rows();
    double worst = 0.0;
    for (const auto& M : modes_) worst = std::max(worst, upper_right_block_norm(M, H, q));
    return worst;
}

double ErrorModel::max_mode_norm() const {
    double worst = 0.0;
    for (const auto& M : modes_) worst = std::max(worst, norm2(M));
    return worst;
}

bool DoublyStochasticCertificate::certified() const {
    return std::all_of(per_mode.begin(), per_mode.end(), [](bool b) { return b; });
}

DoublyStochasticCertificate doubly_stochastic_certificate(const ObserverDesign& design,
                                                          const GraphFamily& family, double g,
                                                          double lambda) {
    DoublyStochasticCertificate cert;
    const Eigen::Index k = design.basis.cols();
    for (int p = 0; p < static_cast<int>(family.size()); ++p) {
        const Matrix S = stochastic_matrix(family[static_cast<std::size_t>(p)]);
        if (!is_doubly_stochastic(S)) {
            throw NotDoublyStochastic("graph " + std::to_string(p) +
                                      " does not have a doubly stochastic matrix");
        }
        const Matrix shifted = lambda * Matrix::Identity(k, k) + reduced_matrices(design, family, g, p).sub;
        // Empty z2 block: the condition holds vacuously.
        const double top = k == 0 ? -std::numeric_limits<double>::infinity()
                                  : 2.0 * max_symmetric_eigenvalue(shifted);
        cert.max_eigenvalue.push_back(top);
        cert.per_mode.push_back(top < 0.0);
    }
    return cert;
}

double doubly_stochastic_gain_threshold(const ObserverDesign& design, const GraphFamily& family,
                                        double lambda) {
    const Eigen::Index k = design.basis.cols();
    if (k == 0) return 0.0;
    const int n = design.state_dim;
    const Matrix& V = design.basis;
    const Matrix R = 2.0 * lambda * Matrix::Identity(k, k) + design.restricted +
                     design.restricted.transpose();
    double threshold = 0.0;
    for (int p = 0; p < static_cast<int>(family.size()); ++p) {
        const Matrix L = generalized_laplacian(stochastic_matrix(family[static_cast<std::size_t>(p)]));
        Matrix W = V.transpose() * kron(L, Matrix::Identity(n, n)) * V;
        W = 0.5 * (W + W.transpose());
        Eigen::SelfAdjointEigenSolver<Matrix> w_eig(W, Eigen::EigenvaluesOnly);
        if (w_eig.eigenvalues().minCoeff() <= 1e-12 * (1.0 + w_eig.eigenvalues().maxCoeff())) {
            return std::numeric_limits<double>::infinity();
        }
        Eigen::GeneralizedSelfAdjointEigenSolver<Matrix> ges(R, W, Eigen::EigenvaluesOnly);
        threshold = std::max(threshold, ges.eigenvalues().maxCoeff());
    }
    return threshold;
}

}  // namespace distobs
