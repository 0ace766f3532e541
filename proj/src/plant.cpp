#include "distobs/plant.hpp"

#include <string>

#include "distobs/errors.hpp"
#include "distobs/subspaces.hpp"

namespace distobs {

Plant::Plant(Matrix A, std::vector<Matrix> channels) : A_(std::move(A)), channels_(std::move(channels)) {
    if (A_.rows() < 1 || A_.rows() != A_.cols()) {
        throw InvalidArgument("plant: A must be square with n >= 1");
    }
    if (channels_.empty()) throw InvalidArgument("plant: at least one output channel is required");
    if (!A_.allFinite()) throw InvalidArgument("plant: A has non-finite entries");
    for (std::size_t i = 0; i < channels_.size(); ++i) {
        const auto& C = channels_[i];
        if (C.cols() != A_.rows()) {
            throw InvalidArgument("plant: channel " + std::to_string(i) + " has " +
                                  std::to_string(C.cols()) + " columns, expected " +
                                  std::to_string(A_.rows()));
        }
        if (!C.allFinite()) {
            throw InvalidArgument("plant: channel " + std::to_string(i) + " has non-finite entries");
        }
    }
}

Matrix stacked_output(const Plant& plant) {
    Eigen::Index rows = 0;
    for (const auto& C : plant.channels()) rows += C.rows();
    Matrix out(rows, plant.state_dim());
    Eigen::Index r = 0;
    for (const auto& C : plant.channels()) {
        out.middleRows(r, C.rows()) = C;
        r += C.rows();
    }
    return out;
}

bool is_jointly_observable(const Plant& plant, double tol) {
    return numerical_rank(observability_matrix(plant.A(), stacked_output(plant)), tol) ==
           plant.state_dim();
}

bool unobservable_intersection_is_trivial(const Plant& plant, double tol) {
    // x lies in every V_i iff (I - V_i V_i') x = 0 for all i, so the
    // intersection is the kernel of the stacked complementary projectors.
    const int n = plant.state_dim();
    Matrix stacked(static_cast<Eigen::Index>(n) * plant.agent_count(), n);
    for (int i = 0; i < plant.agent_count(); ++i) {
        const Matrix V = unobservable_subspace(plant.A(), plant.channel(i), tol);
        stacked.middleRows(static_cast<Eigen::Index>(i) * n, n) =
            Matrix::Identity(n, n) - V * V.transpose();
    }
    return numerical_rank(stacked, tol) == n;
}

}  // namespace distobs
