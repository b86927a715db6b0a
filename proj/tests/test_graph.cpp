#include <doctest.h>

#include <cmath>
#include <random>
#include <sstream>

#include "acn/graph.hpp"
#include "fixtures.hpp"

using acn::InfluenceGraph;
using acn::WeightEntry;

namespace {

InfluenceGraph two_path() {
    return InfluenceGraph::build(2, {{0, 1}}, {}, {{0, 1, 1.0}, {1, 0, 1.0}});
}

InfluenceGraph triangle() {
    std::vector<WeightEntry> ws;
    std::vector<std::pair<int, int>> edges = {{0, 1}, {0, 2}, {1, 2}};
    for (const auto& [i, j] : edges) {
        ws.push_back({i, j, 1.0});
        ws.push_back({j, i, 1.0});
    }
    return InfluenceGraph::build(3, edges, {}, ws);
}

}  // namespace

TEST_CASE("build accepts the smallest connected graph") {
    auto g = two_path();
    CHECK(g.n() == 2);
    CHECK(g.weights()(0, 1) == 1.0);
    CHECK(g.neighbors(0) == std::vector<int>{1});
    CHECK(g.degree(0) == 1);
}

TEST_CASE("build rejects disconnected graphs") {
    CHECK_THROWS_AS(InfluenceGraph::build(3, {{0, 1}}, {}, {}), acn::DisconnectedGraph);
}

TEST_CASE("build rejects weights off the edge set and negative weights") {
    CHECK_THROWS_AS(InfluenceGraph::build(2, {{0, 1}}, {}, {{0, 0, 1.0}}),
                    acn::WeightOutsideEdgeSet);
    CHECK_THROWS_AS(InfluenceGraph::build(3, {{0, 1}, {1, 2}}, {}, {{0, 2, 1.0}}),
                    acn::WeightOutsideEdgeSet);
    CHECK_THROWS_AS(InfluenceGraph::build(2, {{0, 1}}, {}, {{0, 1, -0.5}}), acn::NegativeWeight);
}

TEST_CASE("community fixture: node 5 has the maximum degree 7") {
    auto g = fixtures::community_graph();
    CHECK(g.n() == 15);
    CHECK(g.degree(4) == 7);
    CHECK(g.max_degree() == 7);
    CHECK(g.diameter() == 4);
}

TEST_CASE("neighborhood views") {
    auto g = InfluenceGraph::build(3, {{0, 1}, {1, 2}}, {1}, {{1, 1, 2.0}});
    CHECK(g.neighbors(1) == std::vector<int>{0, 2});
    CHECK(g.extended_neighbors(1) == std::vector<int>{0, 1, 2});
    CHECK(g.extended_neighbors(0) == std::vector<int>{1});
    CHECK(g.closed_neighbors(0) == std::vector<int>{0, 1});
    CHECK(g.has_self_loop(1));
    CHECK_FALSE(g.has_self_loop(0));
}

TEST_CASE("spectral radius: zero matrix and triangle") {
    CHECK(acn::spectral_radius(Eigen::MatrixXd::Zero(3, 3)) == 0.0);
    CHECK(acn::spectral_radius(triangle().weights()) == doctest::Approx(2.0).epsilon(1e-10));
}

TEST_CASE("alpha bound on small graphs") {
    CHECK(acn::alpha_bound(two_path()) == doctest::Approx(1.0));
    auto k3 = triangle();
    CHECK(acn::alpha_bound(k3) == doctest::Approx(0.5));
    // For the regular triangle the bound is exactly 1/spectral_radius.
    CHECK(acn::alpha_bound(k3) * acn::spectral_radius(k3.weights()) == doctest::Approx(1.0));
}

TEST_CASE("alpha bound equals the independent norm evaluation on the community graph") {
    auto g = fixtures::community_graph();
    const auto& w = g.weights();
    double n1 = w.cwiseAbs().colwise().sum().maxCoeff();
    double ninf = w.cwiseAbs().rowwise().sum().maxCoeff();
    CHECK(acn::alpha_bound(g) == doctest::Approx(1.0 / std::sqrt(n1 * ninf)).epsilon(1e-15));
}

TEST_CASE("alpha bound rejects the zero matrix") {
    auto g = InfluenceGraph::build(2, {{0, 1}}, {}, {});
    CHECK_THROWS_AS(acn::alpha_bound(g), acn::ZeroMatrix);
}

TEST_CASE("randomized: 0.999 * alpha_bound satisfies the attenuation assumption") {
    std::mt19937 rng(1234);
    for (int trial = 0; trial < 50; ++trial) {
        std::uniform_int_distribution<int> size(2, 20);
        auto g = fixtures::random_connected_graph(rng, size(rng), 0.1, 3.0);
        double a = 0.999 * acn::alpha_bound(g);
        CHECK(a * acn::spectral_radius(g.weights()) < 1.0);
    }
}

TEST_CASE("perron matrix on the 2-agent path") {
    auto g = two_path();
    auto p = acn::perron_matrix(g, 0.5);
    CHECK(p.q(0, 0) == 0.5);
    CHECK(p.q(0, 1) == 0.5);
    CHECK(p.lambda2 == doctest::Approx(0.0).epsilon(1e-12));
    auto p2 = acn::perron_matrix(g, 0.25);
    CHECK(p2.q(0, 0) == 0.75);
    CHECK(p2.lambda2 == doctest::Approx(0.5));
}

TEST_CASE("perron matrix: auto epsilon, exact double stochasticity, loops ignored") {
    auto g = fixtures::community_graph();
    auto p = acn::perron_matrix(g);
    CHECK(p.epsilon == doctest::Approx(1.0 / 8.0));
    CHECK((p.q.rowwise().sum() - Eigen::VectorXd::Ones(15)).cwiseAbs().maxCoeff() <= 1e-14);
    CHECK((p.q.colwise().sum().transpose() - Eigen::VectorXd::Ones(15)).cwiseAbs().maxCoeff() <=
          1e-14);
    CHECK(p.q == p.q.transpose());
    CHECK(p.q.minCoeff() >= 0.0);
    CHECK(p.lambda2 < 1.0);

    auto with_loop = InfluenceGraph::build(2, {{0, 1}}, {0}, {{0, 0, 3.0}});
    auto p3 = acn::perron_matrix(with_loop, 0.25);
    CHECK(p3.q(0, 0) == 0.75);  // the self-influence weight does not enter
}

TEST_CASE("perron matrix rejects epsilon at or above 1/d_max") {
    auto g = triangle();
    CHECK_THROWS_AS(acn::perron_matrix(g, 0.5), acn::EpsilonTooLarge);
    CHECK_NOTHROW(acn::perron_matrix(g, 0.49));
}

TEST_CASE("graph file round trip with comments and default weights") {
    std::istringstream in(
        "# comment line\n"
        "n 3\n"
        "e 1 2 0.5 1.5   # trailing comment\n"
        "e 2 3\n"
        "s 2 2.5\n");
    auto g = acn::load_graph(in);
    CHECK(g.n() == 3);
    CHECK(g.weights()(0, 1) == 0.5);
    CHECK(g.weights()(1, 0) == 1.5);
    CHECK(g.weights()(1, 2) == 1.0);  // default
    CHECK(g.weights()(1, 1) == 2.5);
    CHECK(g.has_self_loop(1));

    std::ostringstream out;
    acn::save_graph(g, out);
    std::istringstream again(out.str());
    auto g2 = acn::load_graph(again);
    CHECK(g2.weights() == g.weights());
    CHECK(g2.edges() == g.edges());
}

TEST_CASE("graph file errors carry line numbers") {
    std::istringstream no_header("e 1 2\n");
    CHECK_THROWS_AS(acn::load_graph(no_header), acn::InputError);
    std::istringstream bad_id("n 2\ne 1 5\n");
    CHECK_THROWS_WITH_AS(acn::load_graph(bad_id), doctest::Contains("line 2"), acn::InputError);
    std::istringstream bad_tag("n 2\nq 1 2\n");
    CHECK_THROWS_AS(acn::load_graph(bad_tag), acn::InputError);
    CHECK_THROWS_AS(acn::load_graph_file("/nonexistent/path.graph"), acn::InputError);
}

TEST_CASE("centrality config validation") {
    auto g = two_path();
    acn::CentralityConfig ok{0.5, Eigen::VectorXd::Ones(2)};
    CHECK_NOTHROW(ok.validate(g));
    acn::CentralityConfig bad_alpha{1.5, Eigen::VectorXd::Ones(2)};
    CHECK_THROWS_AS(bad_alpha.validate(g), acn::InputError);  // alpha * rho(W) >= 1
    acn::CentralityConfig neg_z{0.5, -Eigen::VectorXd::Ones(2)};
    CHECK_THROWS_AS(neg_z.validate(g), acn::InputError);
    acn::CentralityConfig zero_z{0.5, Eigen::VectorXd::Zero(2)};
    CHECK_THROWS_AS(zero_z.validate(g), acn::InputError);
}
