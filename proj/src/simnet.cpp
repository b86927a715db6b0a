#include "acn/simnet.hpp"

#include <algorithm>
#include <cmath>

namespace acn {

namespace {

/// Read mediator: every access an agent makes to another agent's published
/// state of the previous round goes through here, so runs can be audited for
/// locality after the fact.
class Mediator {
  public:
    explicit Mediator(bool audit) : audit_(audit) {}

    double read(const Eigen::VectorXd& channel, int round, int reader, int source) {
        if (audit_) log_.push_back({round, reader, source});
        return channel(source);
    }

    void note(int round, int reader, int source) {
        if (audit_) log_.push_back({round, reader, source});
    }

    std::vector<AccessRecord> take() { return std::move(log_); }

  private:
    bool audit_;
    std::vector<AccessRecord> log_;
};

void apply_injected_reads(Mediator& med, const SimOptions& opts, const Eigen::VectorXd& channel,
                          int round) {
    for (const auto& [reader, source] : opts.injected_reads)
        (void)med.read(channel, round, reader, source);
}

}  // namespace

SimResult sim_estimation(const InfluenceGraph& g, const CentralityConfig& cfg,
                         const Eigen::VectorXd& c0, const StopRule& stop,
                         const SimOptions& opts) {
    cfg.validate(g);
    const int n = g.n();
    if (c0.size() != n) throw DimensionMismatch(c0.size(), n);
    Mediator med(opts.audit);

    SimResult res;
    res.trace = RoundTrace({"c"});
    res.c = c0;
    res.trace.record({res.c});
    Eigen::VectorXd next(n);
    for (int t = 0; t < stop.max_rounds; ++t) {
        // Emission phase: res.c is the round-t snapshot every agent published.
        if (t == 0) apply_injected_reads(med, opts, res.c, 1);
        for (int i = 0; i < n; ++i) {
            double acc = 0.0;
            for (int j : g.extended_neighbors(i))
                acc += g.weights()(j, i) * med.read(res.c, t + 1, i, j);
            next(i) = cfg.alpha * acc + cfg.z(i);
        }
        // Commit phase: simultaneous swap to round t+1.
        res.residual = (next - res.c).cwiseAbs().maxCoeff();
        res.c = next;
        ++res.rounds;
        res.trace.record({res.c});
        if (res.residual < stop.tol) {
            res.converged = true;
            break;
        }
    }
    res.accesses = med.take();
    return res;
}

SimResult sim_consensus(const InfluenceGraph& g, const CentralityConfig& cfg,
                        const PerronMatrix& q, const Eigen::VectorXd& x0, const StopRule& stop,
                        const SimOptions& opts) {
    cfg.validate(g);
    const int n = g.n();
    if (x0.size() != n) throw DimensionMismatch(x0.size(), n);
    Mediator med(opts.audit);

    SimResult res;
    res.trace = RoundTrace({"c", "cbar", "y", "x"});
    res.state = ConsensusState::init(cfg.z, x0);
    res.trace.record({res.state.c, res.state.cbar, res.state.y, res.state.x});

    for (int t = 0; t < stop.max_rounds; ++t) {
        const ConsensusState& s = res.state;
        if (t == 0) apply_injected_reads(med, opts, s.c, 1);
        ConsensusState next = s;
        next.t = s.t + 1;
        // The cascade runs inside one communication round: every cross-agent
        // read below targets the round-t snapshot; the fresh dc/dy couplings
        // are agent-local.
        for (int i = 0; i < n; ++i) {
            double acc = 0.0;
            for (int j : g.extended_neighbors(i))
                acc += g.weights()(j, i) * med.read(s.c, t + 1, i, j);
            next.c(i) = cfg.alpha * acc + cfg.z(i);
            next.dc(i) = next.c(i) - s.c(i);
        }
        for (int i = 0; i < n; ++i) {
            double acc = 0.0;
            for (int j : g.closed_neighbors(i)) acc += q.q(i, j) * med.read(s.cbar, t + 1, i, j);
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
            for (int j : g.closed_neighbors(i)) acc += q.q(i, j) * med.read(s.x, t + 1, i, j);
            next.x(i) = acc + next.dy(i);
        }

        res.residual = (next.x - s.x).cwiseAbs().maxCoeff() + next.dc.cwiseAbs().maxCoeff();
        res.state = std::move(next);
        ++res.rounds;
        res.trace.record({res.state.c, res.state.cbar, res.state.y, res.state.x});
        if (res.residual < stop.tol) {
            res.converged = true;
            break;
        }
    }
    res.c = res.state.c;
    res.accesses = med.take();
    return res;
}

AlphaAgreement distributed_alpha_agreement(const InfluenceGraph& g, double margin,
                                           const SimOptions& opts) {
    if (margin <= 0.0 || margin > 1.0) throw InputError("margin must lie in (0,1]");
    const int n = g.n();
    const auto& w = g.weights();
    Mediator med(opts.audit);

    // Each agent knows its own incident weights: its row (incoming) and its
    // column (outgoing), so both local sums are computable without messages.
    Eigen::VectorXd col_sum(n), row_sum(n);
    for (int i = 0; i < n; ++i) {
        double cs = 0.0, rs = 0.0;
        for (int j : g.extended_neighbors(i)) {
            cs += w(j, i);
            rs += w(i, j);
        }
        col_sum(i) = cs;
        row_sum(i) = rs;
    }

    AlphaAgreement out;
    out.rounds = g.diameter();
    for (int t = 0; t < out.rounds; ++t) {
        if (t == 0) apply_injected_reads(med, opts, col_sum, 1);
        Eigen::VectorXd next_col = col_sum, next_row = row_sum;
        for (int i = 0; i < n; ++i) {
            for (int j : g.neighbors(i)) {
                next_col(i) = std::max(next_col(i), med.read(col_sum, t + 1, i, j));
                next_row(i) = std::max(next_row(i), med.read(row_sum, t + 1, i, j));
            }
        }
        col_sum = std::move(next_col);
        row_sum = std::move(next_row);
    }

    out.per_agent.resize(n);
    for (int i = 0; i < n; ++i) {
        const double prod = col_sum(i) * row_sum(i);
        if (prod <= 0.0) throw ZeroMatrix();
        // Same operation order as the centralized bound (reciprocal first,
        // then the margin) so both agree bitwise.
        out.per_agent(i) = margin * (1.0 / std::sqrt(prod));
    }
    out.alpha = out.per_agent(0);
    out.accesses = med.take();
    return out;
}

std::vector<NodeData> control_exchange(const ControlInstance& inst,
                                       std::vector<AccessRecord>* accesses) {
    const auto& g = inst.graph();
    const int n = g.n();
    Mediator med(accesses != nullptr);

    std::vector<NodeData> out(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i) {
        NodeData& d = out[static_cast<size_t>(i)];
        d.node = i;
        d.members = g.extended_neighbors(i);
        const int m = static_cast<int>(d.members.size());
        d.w.resize(m);
        d.lo.resize(m);
        d.hi.resize(m);
        d.rho.resize(m);
        for (int k = 0; k < m; ++k) {
            const int j = d.members[static_cast<size_t>(k)];
            // One message from j to i carrying {w_ji, bounds, rho*_j}; the
            // j == i entries are agent-local state.
            med.note(1, i, j);
            d.w(k) = inst.w()(j, i);
            d.lo(k) = inst.w_lower()(j, i);
            d.hi(k) = inst.w_upper()(j, i);
            d.rho(k) = inst.rho_star()(j);
        }
        d.rho_i = inst.rho_star()(i);
        d.z_i = inst.z()(i);
        d.alpha = inst.alpha();
    }
    if (accesses) *accesses = med.take();
    return out;
}

std::vector<std::string> locality_audit(const std::vector<AccessRecord>& accesses,
                                        const InfluenceGraph& g) {
    std::vector<std::string> report;
    for (const auto& a : accesses) {
        if (a.reader == a.source) continue;
        const auto& nb = g.neighbors(a.reader);
        if (!std::binary_search(nb.begin(), nb.end(), a.source))
            report.push_back("violation " + std::to_string(a.round) + " " +
                             std::to_string(a.reader + 1) + " " + std::to_string(a.source + 1));
    }
    return report;
}

}  // namespace acn
