#include "acn/graph.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <fstream>
#include <iomanip>
#include <sstream>

namespace acn {

InfluenceGraph InfluenceGraph::build(int n, std::vector<std::pair<int, int>> edges,
                                     std::vector<int> self_loops,
                                     const std::vector<WeightEntry>& weights) {
    if (n <= 0) throw InputError("number of agents must be positive");
    InfluenceGraph g;
    g.n_ = n;
    g.loop_flags_.assign(static_cast<size_t>(n), 0);
    g.adj_.assign(static_cast<size_t>(n), {});

    auto check_index = [n](int i) {
        if (i < 0 || i >= n) throw InputError("agent index " + std::to_string(i + 1) + " out of range");
    };

    for (auto& [i, j] : edges) {
        check_index(i);
        check_index(j);
        if (i == j) throw InputError("edge endpoints must differ; use a self-loop entry instead");
        if (i > j) std::swap(i, j);
    }
    std::sort(edges.begin(), edges.end());
    edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
    g.edges_ = std::move(edges);

    for (int i : self_loops) {
        check_index(i);
        g.loop_flags_[static_cast<size_t>(i)] = 1;
    }
    std::sort(self_loops.begin(), self_loops.end());
    self_loops.erase(std::unique(self_loops.begin(), self_loops.end()), self_loops.end());
    g.self_loops_ = std::move(self_loops);

    std::vector<std::vector<char>> on_edge(static_cast<size_t>(n),
                                           std::vector<char>(static_cast<size_t>(n), 0));
    for (const auto& [i, j] : g.edges_) {
        on_edge[static_cast<size_t>(i)][static_cast<size_t>(j)] = 1;
        on_edge[static_cast<size_t>(j)][static_cast<size_t>(i)] = 1;
        g.adj_[static_cast<size_t>(i)].push_back(j);
        g.adj_[static_cast<size_t>(j)].push_back(i);
    }
    for (auto& lst : g.adj_) std::sort(lst.begin(), lst.end());

    g.w_ = Eigen::MatrixXd::Zero(n, n);
    for (const auto& e : weights) {
        check_index(e.i);
        check_index(e.j);
        if (e.w < 0.0) throw NegativeWeight(e.i, e.j);
        bool allowed = (e.i == e.j) ? g.loop_flags_[static_cast<size_t>(e.i)] != 0
                                    : on_edge[static_cast<size_t>(e.i)][static_cast<size_t>(e.j)] != 0;
        if (!allowed) throw WeightOutsideEdgeSet(e.i, e.j);
        g.w_(e.i, e.j) = e.w;
    }

    // Connectivity of the communication graph (self-loops ignored).
    std::vector<char> seen(static_cast<size_t>(n), 0);
    std::deque<int> queue{0};
    seen[0] = 1;
    int reached = 1;
    while (!queue.empty()) {
        int u = queue.front();
        queue.pop_front();
        for (int v : g.adj_[static_cast<size_t>(u)]) {
            if (!seen[static_cast<size_t>(v)]) {
                seen[static_cast<size_t>(v)] = 1;
                ++reached;
                queue.push_back(v);
            }
        }
    }
    if (reached != n) throw DisconnectedGraph();

    g.ext_adj_.resize(static_cast<size_t>(n));
    g.closed_adj_.resize(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i) {
        auto& ext = g.ext_adj_[static_cast<size_t>(i)];
        auto& closed = g.closed_adj_[static_cast<size_t>(i)];
        ext = g.adj_[static_cast<size_t>(i)];
        closed = ext;
        closed.insert(std::lower_bound(closed.begin(), closed.end(), i), i);
        if (g.loop_flags_[static_cast<size_t>(i)])
            ext.insert(std::lower_bound(ext.begin(), ext.end(), i), i);
    }
    return g;
}

int InfluenceGraph::max_degree() const {
    int d = 0;
    for (const auto& lst : adj_) d = std::max(d, static_cast<int>(lst.size()));
    return d;
}

int InfluenceGraph::diameter() const {
    int diam = 0;
    std::vector<int> dist(static_cast<size_t>(n_));
    for (int s = 0; s < n_; ++s) {
        std::fill(dist.begin(), dist.end(), -1);
        std::deque<int> queue{s};
        dist[static_cast<size_t>(s)] = 0;
        while (!queue.empty()) {
            int u = queue.front();
            queue.pop_front();
            for (int v : adj_[static_cast<size_t>(u)]) {
                if (dist[static_cast<size_t>(v)] < 0) {
                    dist[static_cast<size_t>(v)] = dist[static_cast<size_t>(u)] + 1;
                    diam = std::max(diam, dist[static_cast<size_t>(v)]);
                    queue.push_back(v);
                }
            }
        }
    }
    return diam;
}

void CentralityConfig::validate(const InfluenceGraph& g) const {
    if (alpha <= 0.0) throw InputError("alpha must be positive");
    if (z.size() != g.n()) throw DimensionMismatch(z.size(), g.n());
    if ((z.array() < 0.0).any()) throw InputError("seed vector z must be nonnegative");
    if (z.maxCoeff() <= 0.0) throw InputError("seed vector z must have a positive entry");
    if (alpha * spectral_radius(g.weights()) >= 1.0)
        throw InputError("alpha * spectral_radius(W) must be below 1");
}

double spectral_radius(const Eigen::MatrixXd& w) {
    if (w.rows() != w.cols()) throw InputError("spectral radius needs a square matrix");
    if (w.size() == 0) return 0.0;
    if (w.isZero(0.0)) return 0.0;
    Eigen::EigenSolver<Eigen::MatrixXd> es(w, /*computeEigenvectors=*/false);
    if (es.info() != Eigen::Success) throw NonConvergence("eigensolver failed on input matrix");
    return es.eigenvalues().cwiseAbs().maxCoeff();
}

double spectral_norm(const Eigen::MatrixXd& w) {
    if (w.size() == 0) return 0.0;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(w.transpose() * w,
                                                      Eigen::EigenvaluesOnly);
    if (es.info() != Eigen::Success) throw NonConvergence("eigensolver failed on W^T W");
    return std::sqrt(std::max(0.0, es.eigenvalues().maxCoeff()));
}

double alpha_bound(const InfluenceGraph& g) {
    const auto& w = g.weights();
    if (w.isZero(0.0)) throw ZeroMatrix();
    // Sequential ascending-index sums: the distributed max-consensus
    // agreement on this quantity must reproduce it bit-for-bit.
    double norm1 = 0.0, norm_inf = 0.0;
    for (int i = 0; i < g.n(); ++i) {
        double col = 0.0, row = 0.0;
        for (int j = 0; j < g.n(); ++j) {
            col += std::abs(w(j, i));
            row += std::abs(w(i, j));
        }
        norm1 = std::max(norm1, col);
        norm_inf = std::max(norm_inf, row);
    }
    return 1.0 / std::sqrt(norm1 * norm_inf);
}

PerronMatrix perron_matrix(const InfluenceGraph& g, std::optional<double> epsilon) {
    const int n = g.n();
    const int dmax = g.max_degree();
    double eps = epsilon.value_or(1.0 / (dmax + 1));
    if (dmax > 0 && eps >= 1.0 / dmax) throw EpsilonTooLarge(eps, 1.0 / dmax);
    if (eps <= 0.0) throw InputError("epsilon must be positive");

    PerronMatrix p;
    p.epsilon = eps;
    p.q = Eigen::MatrixXd::Zero(n, n);
    for (int i = 0; i < n; ++i) {
        p.q(i, i) = 1.0 - eps * g.degree(i);
        for (int j : g.neighbors(i)) p.q(i, j) = eps;
    }

    if (n == 1) {
        p.lambda2 = 0.0;
        return p;
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(p.q, Eigen::EigenvaluesOnly);
    if (es.info() != Eigen::Success) throw NonConvergence("eigensolver failed on Perron matrix");
    const auto& ev = es.eigenvalues();  // ascending; ev(n-1) == 1
    p.lambda2 = std::max(std::abs(ev(0)), std::abs(ev(n - 2)));
    return p;
}

namespace {

struct ParsedGraph {
    int n = -1;
    std::vector<std::pair<int, int>> edges;
    std::vector<int> loops;
    std::vector<WeightEntry> weights;
};

int to_internal(int one_based, int n) {
    if (one_based < 1 || one_based > n)
        throw InputError("agent id " + std::to_string(one_based) + " out of range 1.." +
                         std::to_string(n));
    return one_based - 1;
}

}  // namespace

InfluenceGraph load_graph(std::istream& in) {
    ParsedGraph pg;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        std::istringstream ls(line);
        std::string tag;
        if (!(ls >> tag)) continue;
        try {
            if (tag == "n") {
                if (!(ls >> pg.n) || pg.n <= 0) throw InputError("bad agent count");
            } else if (tag == "e") {
                if (pg.n < 0) throw InputError("edge line before `n` header");
                int i, j;
                if (!(ls >> i >> j)) throw InputError("edge line needs two agent ids");
                int a = to_internal(i, pg.n), b = to_internal(j, pg.n);
                double wij = 1.0, wji = 1.0;
                ls >> wij >> wji;
                pg.edges.emplace_back(a, b);
                pg.weights.push_back({a, b, wij});
                pg.weights.push_back({b, a, wji});
            } else if (tag == "s") {
                if (pg.n < 0) throw InputError("self-loop line before `n` header");
                int i;
                if (!(ls >> i)) throw InputError("self-loop line needs an agent id");
                int a = to_internal(i, pg.n);
                double wii = 1.0;
                ls >> wii;
                pg.loops.push_back(a);
                pg.weights.push_back({a, a, wii});
            } else {
                throw InputError("unknown record tag `" + tag + "`");
            }
        } catch (const InputError& e) {
            throw InputError("graph file line " + std::to_string(lineno) + ": " + e.what());
        }
    }
    if (pg.n < 0) throw InputError("graph file has no `n` header");
    return InfluenceGraph::build(pg.n, std::move(pg.edges), std::move(pg.loops), pg.weights);
}

InfluenceGraph load_graph_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open graph file: " + path);
    return load_graph(in);
}

void save_graph(const InfluenceGraph& g, std::ostream& out) {
    out << std::setprecision(15);
    out << "n " << g.n() << "\n";
    for (const auto& [i, j] : g.edges())
        out << "e " << i + 1 << " " << j + 1 << " " << g.weights()(i, j) << " " << g.weights()(j, i)
            << "\n";
    for (int i : g.self_loops()) out << "s " << i + 1 << " " << g.weights()(i, i) << "\n";
}

}  // namespace acn
