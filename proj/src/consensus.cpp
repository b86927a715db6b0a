#include "acn/consensus.hpp"

namespace acn {

ConsensusState ConsensusState::init(const Eigen::VectorXd& z, const Eigen::VectorXd& x0) {
    if (z.size() != x0.size()) throw DimensionMismatch(x0.size(), z.size());
    ConsensusState s;
    s.c = z;
    s.cbar = z;
    s.dc = Eigen::VectorXd::Zero(z.size());
    s.y = Eigen::VectorXd::Zero(z.size());
    s.dy = Eigen::VectorXd::Zero(z.size());
    s.x = x0;
    s.x0 = x0;
    s.t = 0;
    return s;
}

ConsensusState consensus_step(const InfluenceGraph& g, const CentralityConfig& cfg,
                              const PerronMatrix& q, const ConsensusState& s) {
    const int n = g.n();
    if (s.c.size() != n) throw DimensionMismatch(s.c.size(), n);
    const auto& w = g.weights();

    ConsensusState next = s;
    next.t = s.t + 1;
    next.c.resize(n);
    next.dc.resize(n);
    next.cbar.resize(n);
    next.y.resize(n);
    next.dy.resize(n);
    next.x.resize(n);

    for (int i = 0; i < n; ++i) {
        double acc = 0.0;
        for (int j : g.extended_neighbors(i)) acc += w(j, i) * s.c(j);
        next.c(i) = cfg.alpha * acc + cfg.z(i);
        next.dc(i) = next.c(i) - s.c(i);
    }
    for (int i = 0; i < n; ++i) {
        double acc = 0.0;
        for (int j : g.closed_neighbors(i)) acc += q.q(i, j) * s.cbar(j);
        next.cbar(i) = acc + next.dc(i);
    }
    for (int i = 0; i < n; ++i) {
        if (next.cbar(i) == 0.0) {
            next.y(i) = s.y(i);
            ++next.safeguard_hits;
        } else {
            next.y(i) = (next.c(i) / next.cbar(i) - 1.0) * s.x0(i);
        }
        next.dy(i) = next.y(i) - s.y(i);
    }
    for (int i = 0; i < n; ++i) {
        double acc = 0.0;
        for (int j : g.closed_neighbors(i)) acc += q.q(i, j) * s.x(j);
        next.x(i) = acc + next.dy(i);
    }
    return next;
}

ConsensusResult run_consensus(const InfluenceGraph& g, const CentralityConfig& cfg,
                              const PerronMatrix& q, const Eigen::VectorXd& x0,
                              const StopRule& stop, RoundTrace* trace) {
    cfg.validate(g);
    ConsensusResult res;
    res.state = ConsensusState::init(cfg.z, x0);
    if (trace) trace->record({res.state.c, res.state.cbar, res.state.y, res.state.x});
    for (int t = 0; t < stop.max_rounds; ++t) {
        ConsensusState next = consensus_step(g, cfg, q, res.state);
        res.x_residual = (next.x - res.state.x).cwiseAbs().maxCoeff();
        res.dc_residual = next.dc.cwiseAbs().maxCoeff();
        res.state = std::move(next);
        ++res.rounds;
        if (trace) trace->record({res.state.c, res.state.cbar, res.state.y, res.state.x});
        if (res.x_residual + res.dc_residual < stop.tol) {
            res.converged = true;
            break;
        }
    }
    return res;
}

double weighted_average_oracle(const Eigen::VectorXd& rho, const Eigen::VectorXd& x0) {
    if (rho.size() != x0.size()) throw DimensionMismatch(x0.size(), rho.size());
    if ((rho.array() < 0.0).any()) throw InputError("centrality vector must be nonnegative");
    const double total = rho.sum();
    if (total <= 0.0) throw ZeroCentralityVector();
    return rho.dot(x0) / total;
}

Eigen::VectorXd correction_input_oracle(const Eigen::VectorXd& rho, const Eigen::VectorXd& x0) {
    if (rho.size() != x0.size()) throw DimensionMismatch(x0.size(), rho.size());
    const double total = rho.sum();
    if (total <= 0.0) throw ZeroCentralityVector();
    const double mean = total / static_cast<double>(rho.size());
    return ((rho.array() / mean) - 1.0).matrix().cwiseProduct(x0);
}

}  // namespace acn
