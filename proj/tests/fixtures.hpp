#pragma once

// Shared graph and instance builders for the unit and acceptance tests.

#include <Eigen/Dense>
#include <algorithm>
#include <limits>
#include <optional>
#include <random>
#include <utility>
#include <vector>

#include "acn/control.hpp"
#include "acn/estimation.hpp"
#include "acn/graph.hpp"

namespace fixtures {

/// 15-agent community graph with unit adjacency weights.
inline acn::InfluenceGraph community_graph() {
    std::vector<std::pair<int, int>> edges = {
        {0, 1}, {0, 2}, {1, 2}, {1, 3}, {1, 4},  {2, 3},  {2, 4},   {3, 4},   {3, 5},  {4, 5},
        {4, 6}, {4, 8}, {4, 10}, {5, 6}, {5, 7}, {6, 7},  {6, 8},   {7, 8},   {7, 9},  {8, 9},
        {10, 11}, {10, 12}, {10, 13}, {10, 14}, {11, 12}, {12, 13}, {12, 14}, {13, 14}};
    std::vector<acn::WeightEntry> ws;
    for (const auto& [i, j] : edges) {
        ws.push_back({i, j, 1.0});
        ws.push_back({j, i, 1.0});
    }
    return acn::InfluenceGraph::build(15, edges, {}, ws);
}

inline Eigen::VectorXd community_x0() {
    Eigen::VectorXd x0(15);
    x0 << 12.5107, 21.6097, 0.0034, 9.0700, 4.4027, 2.7702, 5.5878, 10.3668, 11.9030, 16.1645,
        12.5758, 20.5566, 6.1336, 26.3435, 0.8216;
    return x0;
}

/// 6-agent chain-with-chord network, initial weights; entry (i,j) is the
/// weight w_ij.
inline acn::InfluenceGraph sixnode_graph() {
    std::vector<std::pair<int, int>> edges = {{0, 1}, {1, 2}, {2, 3}, {3, 4}, {4, 5}, {2, 5}};
    std::vector<int> loops = {0, 1, 2, 3, 4, 5};
    std::vector<acn::WeightEntry> ws = {
        {0, 0, 5.0000}, {1, 1, 1.5000}, {2, 2, 1.7369}, {3, 3, 3.2371}, {4, 4, 3.2540},
        {5, 5, 1.5000}, {0, 1, 3.5196}, {1, 0, 4.2857}, {1, 2, 2.4847}, {2, 1, 3.5572},
        {2, 3, 2.3786}, {3, 2, 3.1991}, {3, 4, 1.7450}, {4, 3, 2.3857}, {4, 5, 1.5000},
        {5, 4, 2.7530}, {2, 5, 1.5833}, {5, 2, 2.0634}};
    return acn::InfluenceGraph::build(6, edges, loops, ws);
}

/// Reference adjusted weights on the same support.
inline Eigen::MatrixXd sixnode_adjusted_weights() {
    Eigen::MatrixXd v = Eigen::MatrixXd::Zero(6, 6);
    v(0, 0) = 4.1450;
    v(1, 1) = 1.5000;
    v(2, 2) = 1.5000;
    v(3, 3) = 3.3983;
    v(4, 4) = 3.5993;
    v(5, 5) = 3.0025;
    v(0, 1) = 3.1706;
    v(1, 0) = 3.4307;
    v(1, 2) = 2.1296;
    v(2, 1) = 3.2082;
    v(2, 3) = 2.5397;
    v(3, 2) = 2.8439;
    v(3, 4) = 2.0903;
    v(4, 3) = 2.5469;
    v(4, 5) = 3.0025;
    v(5, 4) = 3.0983;
    v(2, 5) = 3.0859;
    v(5, 2) = 1.7083;
    return v;
}

/// The reference target centrality of the initial 6-agent network and the
/// derived seed vector z = rho / sum(rho).
inline Eigen::VectorXd sixnode_rho() {
    Eigen::VectorXd rho(6);
    rho << 8, 7, 6, 5, 4, 3;
    return rho;
}

/// Weight-adjustment instance for the 6-agent network: every weighted entry
/// free inside [1.5, 5], uniform target 1, alpha as given.
inline acn::ControlInstance sixnode_instance(double alpha = 0.1) {
    acn::InfluenceGraph g = sixnode_graph();
    Eigen::MatrixXd upper = Eigen::MatrixXd::Zero(6, 6), lower = Eigen::MatrixXd::Zero(6, 6);
    for (int i = 0; i < 6; ++i)
        for (int j : g.extended_neighbors(i)) {
            upper(j, i) = 5.0;
            lower(j, i) = 1.5;
        }
    Eigen::VectorXd z = sixnode_rho() / sixnode_rho().sum();
    return acn::ControlInstance::make(std::move(g), std::move(upper), std::move(lower),
                                      Eigen::VectorXd::Ones(6), std::move(z), alpha);
}

/// Random connected graph: spanning tree plus a few extra edges, optional
/// self-loops, weights uniform in [w_lo, w_hi] (asymmetric).
inline acn::InfluenceGraph random_connected_graph(std::mt19937& rng, int n, double w_lo,
                                                  double w_hi, double extra_edge_prob = 0.15,
                                                  double loop_prob = 0.3) {
    std::uniform_real_distribution<double> weight(w_lo, w_hi);
    std::uniform_real_distribution<double> coin(0.0, 1.0);
    std::vector<std::pair<int, int>> edges;
    for (int v = 1; v < n; ++v) {
        std::uniform_int_distribution<int> pick(0, v - 1);
        edges.emplace_back(pick(rng), v);
    }
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            if (coin(rng) < extra_edge_prob) edges.emplace_back(i, j);
    std::vector<int> loops;
    for (int i = 0; i < n; ++i)
        if (coin(rng) < loop_prob) loops.push_back(i);

    acn::InfluenceGraph shape = acn::InfluenceGraph::build(n, edges, loops, {});
    std::vector<acn::WeightEntry> ws;
    for (const auto& [i, j] : shape.edges()) {
        ws.push_back({i, j, weight(rng)});
        ws.push_back({j, i, weight(rng)});
    }
    for (int i : shape.self_loops()) ws.push_back({i, i, weight(rng)});
    return acn::InfluenceGraph::build(n, shape.edges(), shape.self_loops(), ws);
}

/// Random feasible weight-adjustment instance. A realizable weight matrix V
/// is drawn inside the bounds first, alpha is chosen so that
/// z = (I - alpha V^T) rho* stays strictly positive, which makes the target
/// reachable by construction. `rho_star` defaults to a random positive
/// vector; pass ones for uniform-target scenarios.
inline acn::ControlInstance random_feasible_instance(
    std::mt19937& rng, int n, std::optional<Eigen::VectorXd> rho_star = std::nullopt) {
    acn::InfluenceGraph g = random_connected_graph(rng, n, 0.5, 2.0, 0.1, 0.5);
    std::uniform_real_distribution<double> slack(0.0, 1.0);

    Eigen::MatrixXd upper = Eigen::MatrixXd::Zero(n, n), lower = Eigen::MatrixXd::Zero(n, n);
    Eigen::MatrixXd v = Eigen::MatrixXd::Zero(n, n);
    for (int i = 0; i < n; ++i)
        for (int j : g.extended_neighbors(i)) {
            const double w = g.weights()(j, i);
            lower(j, i) = std::max(0.0, w - slack(rng));
            upper(j, i) = w + slack(rng);
            std::uniform_real_distribution<double> inside(lower(j, i), upper(j, i));
            v(j, i) = inside(rng);
        }

    Eigen::VectorXd rho;
    if (rho_star) {
        rho = *rho_star;
    } else {
        rho.resize(n);
        std::uniform_real_distribution<double> level(0.5, 2.0);
        for (int i = 0; i < n; ++i) rho(i) = level(rng);
    }
    Eigen::VectorXd vt_rho = v.transpose() * rho;
    double alpha = std::numeric_limits<double>::infinity();
    for (int i = 0; i < n; ++i)
        if (vt_rho(i) > 0.0) alpha = std::min(alpha, 0.9 * rho(i) / vt_rho(i));
    if (!std::isfinite(alpha)) alpha = 0.1;
    Eigen::VectorXd z = rho - alpha * vt_rho;
    return acn::ControlInstance::make(std::move(g), std::move(upper), std::move(lower),
                                      std::move(rho), std::move(z), alpha);
}

}  // namespace fixtures
