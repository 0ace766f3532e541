#pragma once

#include <set>
#include <utility>
#include <vector>

#include "distobs/linalg.hpp"

namespace distobs {

/// Unweighted directed neighbor graph on m agents (0-based). An arc (j, i)
/// means agent j is a neighbor of agent i, i.e. i receives j's estimate.
/// Self-loops are always present.
class NeighborGraph {
public:
    /// Adds the self-loop of every vertex; throws InvalidArgument for m < 1
    /// or out-of-range endpoints.
    NeighborGraph(int vertex_count, const std::vector<std::pair<int, int>>& arcs);

    int vertex_count() const { return m_; }
    const std::set<std::pair<int, int>>& arcs() const { return arcs_; }
    bool has_arc(int from, int to) const { return arcs_.count({from, to}) > 0; }
    int in_degree(int vertex) const;

    /// Labels of agent i's neighbors (itself included).
    std::vector<int> neighbors(int vertex) const;

private:
    int m_;
    std::set<std::pair<int, int>> arcs_;
};

using GraphFamily = std::vector<NeighborGraph>;

/// S = D^{-1} A', S[i][j] = 1/m_i when j is a neighbor of i.
Matrix stochastic_matrix(const NeighborGraph& graph);

bool is_strongly_connected(const NeighborGraph& graph);

bool is_doubly_stochastic(const Matrix& S, double tol = 1e-12);

/// 2I - S - S'. Throws NotDoublyStochastic when the column sums of S are not 1.
Matrix generalized_laplacian(const Matrix& S, double tol = 1e-12);

/// Throws ValidationError naming the first member that is not strongly
/// connected or has a different vertex count.
void validate_family(const GraphFamily& family);

}  // namespace distobs
