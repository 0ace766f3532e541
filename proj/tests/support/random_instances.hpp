#pragma once

// Random problem instances for property and acceptance tests.

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <set>
#include <vector>

#include "distobs/linalg.hpp"
#include "distobs/network.hpp"
#include "distobs/plant.hpp"

namespace distobs::testing {

using Rng = std::mt19937_64;

inline double uniform(Rng& rng, double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(rng);
}

inline int uniform_int(Rng& rng, int lo, int hi) {
    return std::uniform_int_distribution<int>(lo, hi)(rng);
}

inline Matrix random_matrix(Rng& rng, Eigen::Index rows, Eigen::Index cols, double scale = 1.0) {
    std::normal_distribution<double> normal(0.0, scale);
    Matrix M(rows, cols);
    for (Eigen::Index i = 0; i < M.size(); ++i) M.data()[i] = normal(rng);
    return M;
}

inline Vector random_vector(Rng& rng, Eigen::Index n) {
    return random_matrix(rng, n, 1);
}

/// Invertible matrix with condition number below `max_cond`.
inline Matrix random_well_conditioned(Rng& rng, Eigen::Index n, double max_cond = 20.0) {
    while (true) {
        Matrix T = Matrix::Identity(n, n) + 0.4 * random_matrix(rng, n, n);
        Eigen::JacobiSVD<Matrix> svd(T);
        const auto& sv = svd.singularValues();
        if (sv(n - 1) > 0 && sv(0) / sv(n - 1) < max_cond) return T;
    }
}

/// Plant assembled in modal coordinates: A = T J T^{-1} with J block
/// diagonal (1x1 real or 2x2 rotation blocks). Each agent sees a random
/// subset of the blocks, so its unobservable subspace is the span of the
/// others. With jointly_observable = false, one block is hidden from all.
inline Plant random_structured_plant(Rng& rng, int n, int m, bool jointly_observable = true,
                                     int max_outputs = 1) {
    std::vector<int> block_sizes;
    for (int left = n; left > 0;) {
        const int size = (left >= 2 && uniform(rng, 0, 1) < 0.35) ? 2 : 1;
        block_sizes.push_back(size);
        left -= size;
    }
    const int blocks = static_cast<int>(block_sizes.size());
    // Real parts kept apart so that no single output is nearly blind to a
    // block (close eigenvalues make the observability matrix ill-conditioned).
    std::vector<double> real_parts;
    while (static_cast<int>(real_parts.size()) < static_cast<int>(block_sizes.size())) {
        const double re = uniform(rng, -1.5, 1.5);
        bool apart = true;
        for (double other : real_parts) apart = apart && std::abs(re - other) >= 0.25;
        if (apart) real_parts.push_back(re);
    }
    std::vector<Matrix> jordan;
    for (std::size_t b = 0; b < block_sizes.size(); ++b) {
        const int size = block_sizes[b];
        const double re = real_parts[b];
        if (size == 1) {
            jordan.push_back(Matrix::Constant(1, 1, re));
        } else {
            const double im = uniform(rng, 0.3, 1.5);
            Matrix b(2, 2);
            b << re, im, -im, re;
            jordan.push_back(b);
        }
    }
    const Matrix J = block_diagonal(jordan);
    const Matrix T = random_well_conditioned(rng, n);
    const Matrix Tinv = T.inverse();
    const Matrix A = T * J * Tinv;

    // seen[i][b]: agent i observes block b.
    std::vector<std::vector<bool>> seen(m, std::vector<bool>(blocks, false));
    const int hidden = jointly_observable ? -1 : uniform_int(rng, 0, blocks - 1);
    for (int b = 0; b < blocks; ++b) {
        if (b == hidden) continue;
        seen[uniform_int(rng, 0, m - 1)][b] = true;  // somebody sees every visible block
        for (int i = 0; i < m; ++i) {
            if (uniform(rng, 0, 1) < 0.3) seen[i][b] = true;
        }
    }
    std::vector<Matrix> channels;
    for (int i = 0; i < m; ++i) {
        const int outputs = uniform_int(rng, 1, max_outputs);
        Matrix W = Matrix::Zero(outputs, n);
        int col = 0;
        for (int b = 0; b < blocks; ++b) {
            if (seen[i][b]) {
                for (int r = 0; r < outputs; ++r) {
                    for (int c = 0; c < block_sizes[b]; ++c) {
                        const double sign = uniform(rng, 0, 1) < 0.5 ? -1.0 : 1.0;
                        W(r, col + c) = sign * uniform(rng, 0.5, 1.5);
                    }
                }
            }
            col += block_sizes[b];
        }
        channels.push_back(W * Tinv);
    }
    return Plant(A, channels);
}

/// Random Hamiltonian cycle plus extra arcs; always strongly connected.
inline NeighborGraph random_strongly_connected_graph(Rng& rng, int m, double extra = 0.3) {
    std::vector<int> order(m);
    std::iota(order.begin(), order.end(), 0);
    std::shuffle(order.begin(), order.end(), rng);
    std::vector<std::pair<int, int>> arcs;
    for (int k = 0; k < m; ++k) arcs.emplace_back(order[k], order[(k + 1) % m]);
    for (int j = 0; j < m; ++j) {
        for (int i = 0; i < m; ++i) {
            if (i != j && uniform(rng, 0, 1) < extra) arcs.emplace_back(j, i);
        }
    }
    return NeighborGraph(m, arcs);
}

/// `size` strongly connected graphs, pairwise distinct when m allows it.
inline GraphFamily random_family(Rng& rng, int m, int size) {
    GraphFamily family;
    std::set<std::set<std::pair<int, int>>> seen;
    for (int attempt = 0; static_cast<int>(family.size()) < size; ++attempt) {
        NeighborGraph g = random_strongly_connected_graph(rng, m);
        if (seen.insert(g.arcs()).second || attempt > 50) family.push_back(std::move(g));
    }
    return family;
}

/// Circulant digraphs (arcs j -> j + s mod m for s in a shift set containing
/// a generator) with relabelled vertices. In- and out-degrees are equal, so
/// S is doubly stochastic; the generator shift makes them strongly connected.
inline GraphFamily random_doubly_stochastic_family(Rng& rng, int m, int size) {
    GraphFamily family;
    for (int k = 0; k < size; ++k) {
        std::set<int> shifts{1};
        for (int s = 2; s < m; ++s) {
            if (uniform(rng, 0, 1) < 0.4) shifts.insert(s);
        }
        std::vector<int> label(m);
        std::iota(label.begin(), label.end(), 0);
        std::shuffle(label.begin(), label.end(), rng);
        std::vector<std::pair<int, int>> arcs;
        for (int j = 0; j < m; ++j) {
            for (int s : shifts) arcs.emplace_back(label[j], label[(j + s) % m]);
        }
        family.emplace_back(m, arcs);
    }
    return family;
}

/// The two-agent example used throughout the tests:
/// A = diag(1, -1), C1 = [1 0], C2 = [0 1].
inline Plant running_example_plant() {
    Matrix A(2, 2);
    A << 1, 0, 0, -1;
    Matrix C1(1, 2), C2(1, 2);
    C1 << 1, 0;
    C2 << 0, 1;
    return Plant(A, {C1, C2});
}

inline GraphFamily complete_graph_family(int m) {
    std::vector<std::pair<int, int>> arcs;
    for (int j = 0; j < m; ++j) {
        for (int i = 0; i < m; ++i) arcs.emplace_back(j, i);
    }
    return {NeighborGraph(m, arcs)};
}

}  // namespace distobs::testing
