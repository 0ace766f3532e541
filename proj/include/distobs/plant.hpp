#pragma once

#include <vector>

#include "distobs/linalg.hpp"

namespace distobs {

/// Input-free LTI plant  x' = A x  observed through m output channels
/// y_i = C_i x, one channel per agent.
class Plant {
public:
    /// Throws InvalidArgument when A is not square, a channel has the wrong
    /// column count, there are no channels, or any entry is non-finite.
    Plant(Matrix A, std::vector<Matrix> channels);

    const Matrix& A() const { return A_; }
    const std::vector<Matrix>& channels() const { return channels_; }
    const Matrix& channel(int i) const { return channels_.at(static_cast<std::size_t>(i)); }

    int state_dim() const { return static_cast<int>(A_.rows()); }
    int agent_count() const { return static_cast<int>(channels_.size()); }

private:
    Matrix A_;
    std::vector<Matrix> channels_;
};

/// Vertical stack of all channel matrices in agent order.
Matrix stacked_output(const Plant& plant);

/// Rank test on the observability matrix of (stacked C, A).
bool is_jointly_observable(const Plant& plant, double tol = kRankTol);

/// Cross-check route: the per-channel unobservable subspaces intersect
/// only in the origin.
bool unobservable_intersection_is_trivial(const Plant& plant, double tol = kRankTol);

}  // namespace distobs
