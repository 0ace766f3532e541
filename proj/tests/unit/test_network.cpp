#include "distobs/network.hpp"

#include "distobs/design.hpp"
#include "distobs/errormodel.hpp"
#include "distobs/errors.hpp"
#include "doctest.h"
#include "random_instances.hpp"

using namespace distobs;
using namespace distobs::testing;

namespace {

NeighborGraph ring(int m) {
    std::vector<std::pair<int, int>> arcs;
    for (int i = 0; i < m; ++i) arcs.emplace_back(i, (i + 1) % m);
    return NeighborGraph(m, arcs);
}

}  // namespace

TEST_CASE("graph construction") {
    const NeighborGraph g(3, {{0, 1}});
    CHECK(g.has_arc(0, 0));
    CHECK(g.has_arc(2, 2));
    CHECK(g.has_arc(0, 1));
    CHECK_FALSE(g.has_arc(1, 0));
    CHECK(g.in_degree(1) == 2);
    CHECK(g.in_degree(0) == 1);
    CHECK(g.neighbors(1) == std::vector<int>{0, 1});
    CHECK_THROWS_AS(NeighborGraph(0, {}), InvalidArgument);
    CHECK_THROWS_AS(NeighborGraph(2, {{0, 2}}), InvalidArgument);
}

TEST_CASE("stochastic_matrix examples") {
    const Matrix S = stochastic_matrix(complete_graph_family(2)[0]);
    CHECK((S - Matrix::Constant(2, 2, 0.5)).norm() == 0.0);
    CHECK(stochastic_matrix(NeighborGraph(3, {})).isIdentity());

    // Agent 1 listens to agent 0 only.
    Matrix expected(2, 2);
    expected << 1, 0, 0.5, 0.5;
    CHECK((stochastic_matrix(NeighborGraph(2, {{0, 1}})) - expected).norm() == 0.0);
}

TEST_CASE("is_strongly_connected examples") {
    CHECK(is_strongly_connected(complete_graph_family(2)[0]));
    CHECK_FALSE(is_strongly_connected(NeighborGraph(3, {})));
    CHECK(is_strongly_connected(ring(3)));
    CHECK_FALSE(is_strongly_connected(NeighborGraph(2, {{0, 1}})));
    CHECK(is_strongly_connected(NeighborGraph(1, {})));
}

TEST_CASE("is_doubly_stochastic examples") {
    CHECK(is_doubly_stochastic(Matrix::Constant(2, 2, 0.5)));
    Matrix S(2, 2);
    S << 1, 0, 0.5, 0.5;
    CHECK_FALSE(is_doubly_stochastic(S));
    CHECK(is_doubly_stochastic(Matrix::Identity(3, 3)));
}

TEST_CASE("generalized_laplacian examples") {
    Matrix L2(2, 2);
    L2 << 1, -1, -1, 1;
    CHECK((generalized_laplacian(Matrix::Constant(2, 2, 0.5)) - L2).norm() < 1e-15);
    CHECK(generalized_laplacian(Matrix::Identity(3, 3)).norm() == 0.0);

    const Matrix L3 = generalized_laplacian(Matrix::Constant(3, 3, 1.0 / 3.0));
    for (int i = 0; i < 3; ++i) {
        for (int j = 0; j < 3; ++j) {
            CHECK(L3(i, j) == doctest::Approx(i == j ? 4.0 / 3.0 : -2.0 / 3.0));
        }
    }
    Matrix S(2, 2);
    S << 1, 0, 0.5, 0.5;
    CHECK_THROWS_AS(generalized_laplacian(S), NotDoublyStochastic);
}

TEST_CASE("validate_family names the offending member") {
    GraphFamily family{complete_graph_family(3)[0], NeighborGraph(3, {{0, 1}})};
    try {
        validate_family(family);
        FAIL("expected ValidationError");
    } catch (const ValidationError& e) {
        CHECK(std::string(e.what()).find('1') != std::string::npos);
    }
    CHECK_NOTHROW(validate_family({ring(4), ring(4)}));
    CHECK_THROWS_AS(validate_family({ring(3), ring(4)}), ValidationError);
    CHECK_THROWS_AS(validate_family({}), ValidationError);
}

TEST_CASE("stochastic matrices of random graphs") {
    Rng rng(12);
    for (int trial = 0; trial < 300; ++trial) {
        const int m = uniform_int(rng, 1, 6);
        const NeighborGraph g = random_strongly_connected_graph(rng, m);
        CHECK(is_strongly_connected(g));
        const Matrix S = stochastic_matrix(g);
        CHECK((S.rowwise().sum() - Vector::Ones(m)).cwiseAbs().maxCoeff() <= 1e-12);
        CHECK(S.minCoeff() >= 0.0);
        CHECK(S.diagonal().minCoeff() > 0.0);
    }
    for (int trial = 0; trial < 100; ++trial) {
        const int m = uniform_int(rng, 2, 6);
        for (const NeighborGraph& g : random_doubly_stochastic_family(rng, m, 3)) {
            const Matrix S = stochastic_matrix(g);
            REQUIRE(is_doubly_stochastic(S));
            const Matrix L = generalized_laplacian(S);
            CHECK(L.rowwise().sum().cwiseAbs().maxCoeff() <= 1e-12);
            for (int i = 0; i < m; ++i) {
                for (int j = 0; j < m; ++j) {
                    if (i != j) CHECK(L(i, j) <= 1e-12);
                }
            }
        }
    }
}

TEST_CASE("consensus coupling is stable on strongly connected graphs") {
    Rng rng(31);
    for (int trial = 0; trial < 100; ++trial) {
        const int n = uniform_int(rng, 2, 5);
        const int m = uniform_int(rng, 2, 4);
        const Plant plant = random_structured_plant(rng, n, m);
        const ObserverDesign d = build_observer(plant, 2.0);
        if (d.unobservable_dim() == 0) continue;
        const GraphFamily family{random_strongly_connected_graph(rng, m)};
        CHECK(spectral_abscissa(-coupling_block(d, family, 0)) < 0.0);
    }
    // The 3-ring on a plant where every agent sees one coordinate.
    const Plant plant(Matrix::Identity(3, 3),
                      {Matrix::Identity(3, 3).row(0), Matrix::Identity(3, 3).row(1),
                       Matrix::Identity(3, 3).row(2)});
    const ObserverDesign d = build_observer(plant, 2.0);
    CHECK(spectral_abscissa(-coupling_block(d, {ring(3)}, 0)) < 0.0);
}
