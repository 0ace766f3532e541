#include "distobs/network.hpp"

#include <string>

#include "distobs/errors.hpp"

namespace distobs {

NeighborGraph::NeighborGraph(int vertex_count, const std::vector<std::pair<int, int>>& arcs)
    : m_(vertex_count) {
    if (m_ < 1) throw InvalidArgument("graph: vertex count must be at least 1");
    for (const auto& [from, to] : arcs) {
        if (from < 0 || from >= m_ || to < 0 || to >= m_) {
            throw InvalidArgument("graph: arc (" + std::to_string(from) + ", " + std::to_string(to) +
                                  ") out of range for " + std::to_string(m_) + " vertices");
        }
        arcs_.insert({from, to});
    }
    for (int i = 0; i < m_; ++i) arcs_.insert({i, i});
}

int NeighborGraph::in_degree(int vertex) const {
    int d = 0;
    for (const auto& arc : arcs_) {
        if (arc.second == vertex) ++d;
    }
    return d;
}

std::vector<int> NeighborGraph::neighbors(int vertex) const {
    std::vector<int> out;
    for (const auto& [from, to] : arcs_) {
        if (to == vertex) out.push_back(from);
    }
    return out;
}

Matrix stochastic_matrix(const NeighborGraph& graph) {
    const int m = graph.vertex_count();
    Matrix S = Matrix::Zero(m, m);
    for (int i = 0; i < m; ++i) {
        const auto nbrs = graph.neighbors(i);
        const double w = 1.0 / static_cast<double>(nbrs.size());
        for (int j : nbrs) S(i, j) = w;
    }
    return S;
}

bool is_strongly_connected(const NeighborGraph& graph) {
    const int m = graph.vertex_count();
    // Transitive closure (Warshall); m is an agent count, so O(m^3) is fine.
    std::vector<std::vector<bool>> reach(m, std::vector<bool>(m, false));
    for (const auto& [from, to] : graph.arcs()) reach[from][to] = true;
    for (int k = 0; k < m; ++k) {
        for (int i = 0; i < m; ++i) {
            if (!reach[i][k]) continue;
            for (int j = 0; j < m; ++j) {
                if (reach[k][j]) reach[i][j] = true;
            }
        }
    }
    for (int i = 0; i < m; ++i) {
        for (int j = 0; j < m; ++j) {
            if (!reach[i][j]) return false;
        }
    }
    return true;
}

bool is_doubly_stochastic(const Matrix& S, double tol) {
    const Vector col_sums = S.colwise().sum().transpose();
    return ((col_sums.array() - 1.0).abs() <= tol).all();
}

Matrix generalized_laplacian(const Matrix& S, double tol) {
    if (!is_doubly_stochastic(S, tol)) {
        throw NotDoublyStochastic("generalized_laplacian: column sums of S differ from 1");
    }
    const Eigen::Index m = S.rows();
    return 2.0 * Matrix::Identity(m, m) - S - S.transpose();
}

void validate_family(const GraphFamily& family) {
    if (family.empty()) throw ValidationError("graph family is empty");
    const int m = family.front().vertex_count();
    for (std::size_t p = 0; p < family.size(); ++p) {
        if (family[p].vertex_count() != m) {
            throw ValidationError("graph " + std::to_string(p) + " has " +
                                  std::to_string(family[p].vertex_count()) + " vertices, expected " +
                                  std::to_string(m));
        }
        if (!is_strongly_connected(family[p])) {
            throw ValidationError("graph " + std::to_string(p) + " is not strongly connected");
        }
    }
}

}  // namespace distobs
