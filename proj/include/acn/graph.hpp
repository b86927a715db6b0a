#pragma once

#include <Eigen/Dense>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "acn/errors.hpp"

namespace acn {

/// One sparse weight assignment, 0-based endpoints. For an edge {i,j} the
/// entry (i,j) carries w_ij, the influence of j's information on agent i;
/// (i,i) is a self-influence weight.
struct WeightEntry {
    int i;
    int j;
    double w;
};

/// Undirected communication topology plus an asymmetric nonnegative influence
/// matrix compatible with it. Immutable after construction; agent indices are
/// 0-based everywhere in the API, 1-based only in file formats.
class InfluenceGraph {
  public:
    /// Empty placeholder; every populated instance comes from build().
    InfluenceGraph() = default;

    /// Validates and builds a graph. Throws DisconnectedGraph,
    /// WeightOutsideEdgeSet or NegativeWeight.
    static InfluenceGraph build(int n, std::vector<std::pair<int, int>> edges,
                                std::vector<int> self_loops,
                                const std::vector<WeightEntry>& weights);

    int n() const { return n_; }
    const Eigen::MatrixXd& weights() const { return w_; }
    const std::vector<std::pair<int, int>>& edges() const { return edges_; }
    const std::vector<int>& self_loops() const { return self_loops_; }
    bool has_self_loop(int i) const { return loop_flags_[static_cast<size_t>(i)]; }

    /// Communication neighbors of i (self excluded), ascending.
    const std::vector<int>& neighbors(int i) const { return adj_[static_cast<size_t>(i)]; }
    /// Neighbors plus self when a self-loop is present, ascending.
    const std::vector<int>& extended_neighbors(int i) const {
        return ext_adj_[static_cast<size_t>(i)];
    }
    /// Neighbors plus self unconditionally, ascending; the support of the
    /// Perron matrix row.
    const std::vector<int>& closed_neighbors(int i) const {
        return closed_adj_[static_cast<size_t>(i)];
    }

    int degree(int i) const { return static_cast<int>(adj_[static_cast<size_t>(i)].size()); }
    int max_degree() const;
    /// Hop diameter of the communication graph, by BFS from every node.
    int diameter() const;

  private:
    int n_ = 0;
    std::vector<std::pair<int, int>> edges_;
    std::vector<int> self_loops_;
    std::vector<char> loop_flags_;
    Eigen::MatrixXd w_;
    std::vector<std::vector<int>> adj_;
    std::vector<std::vector<int>> ext_adj_;
    std::vector<std::vector<int>> closed_adj_;
};

/// Attenuation parameter and seed vector for alpha-centrality.
struct CentralityConfig {
    double alpha = 0.0;
    Eigen::VectorXd z;

    /// Checks alpha > 0, alpha * rho(W) < 1 and z >= 0, z != 0.
    void validate(const InfluenceGraph& g) const;
};

/// Q = I - eps * L for the unweighted communication graph. Symmetric, doubly
/// stochastic, nonnegative; lambda2 is the second-largest eigenvalue modulus.
struct PerronMatrix {
    Eigen::MatrixXd q;
    double epsilon = 0.0;
    double lambda2 = 0.0;
};

/// Spectral radius of a square matrix via full eigendecomposition.
/// Throws NonConvergence if the eigensolver fails.
double spectral_radius(const Eigen::MatrixXd& w);

/// Spectral norm ||W||_2 (largest singular value).
double spectral_norm(const Eigen::MatrixXd& w);

/// 1 / sqrt(||W||_1 ||W||_inf); any alpha strictly below it satisfies
/// alpha * rho(W) < 1. Throws ZeroMatrix on W = 0.
double alpha_bound(const InfluenceGraph& g);

/// Builds Q = I - eps*L. Requires eps < 1/d_max; when eps is absent the
/// default 1/(d_max+1) is used. Self-loops do not enter L.
PerronMatrix perron_matrix(const InfluenceGraph& g, std::optional<double> epsilon = std::nullopt);

/// Text graph format: `n <N>`, `e <i> <j> [w_ij [w_ji]]`, `s <i> [w_ii]`,
/// `#` comments; 1-based ids, missing weights default to 1.
InfluenceGraph load_graph(std::istream& in);
InfluenceGraph load_graph_file(const std::string& path);
void save_graph(const InfluenceGraph& g, std::ostream& out);

}  // namespace acn
