#include "acn/estimation.hpp"

#include <cmath>

namespace acn {

Eigen::VectorXd estimation_step(const InfluenceGraph& g, const CentralityConfig& cfg,
                                const Eigen::VectorXd& c) {
    const int n = g.n();
    if (c.size() != n) throw DimensionMismatch(c.size(), n);
    const auto& w = g.weights();
    Eigen::VectorXd next(n);
    for (int i = 0; i < n; ++i) {
        double acc = 0.0;
        for (int j : g.extended_neighbors(i)) acc += w(j, i) * c(j);
        next(i) = cfg.alpha * acc + cfg.z(i);
    }
    return next;
}

EstimationResult run_estimation(const InfluenceGraph& g, const CentralityConfig& cfg,
                                const Eigen::VectorXd& c0, const StopRule& stop,
                                RoundTrace* trace) {
    cfg.validate(g);
    if (c0.size() != g.n()) throw DimensionMismatch(c0.size(), g.n());

    EstimationResult res;
    res.c = c0;
    if (trace) trace->record({res.c});
    for (int t = 0; t < stop.max_rounds; ++t) {
        Eigen::VectorXd next = estimation_step(g, cfg, res.c);
        res.residual = (next - res.c).cwiseAbs().maxCoeff();
        res.c = std::move(next);
        ++res.rounds;
        if (trace) trace->record({res.c});
        if (res.residual < stop.tol) {
            res.converged = true;
            break;
        }
    }
    return res;
}

Eigen::VectorXd oracle_alpha_centrality(const InfluenceGraph& g, const CentralityConfig& cfg) {
    const int n = g.n();
    if (cfg.z.size() != n) throw DimensionMismatch(cfg.z.size(), n);
    Eigen::MatrixXd a = Eigen::MatrixXd::Identity(n, n) - cfg.alpha * g.weights().transpose();
    Eigen::FullPivLU<Eigen::MatrixXd> lu(a);
    if (!lu.isInvertible()) throw SingularSystem();
    return lu.solve(cfg.z);
}

Eigen::VectorXd oracle_katz_centrality(const InfluenceGraph& g, double alpha) {
    CentralityConfig cfg{alpha, Eigen::VectorXd::Ones(g.n())};
    return oracle_alpha_centrality(g, cfg) - Eigen::VectorXd::Ones(g.n());
}

ErrorBoundParams ErrorBoundParams::from(const InfluenceGraph& g, const CentralityConfig& cfg,
                                        const Eigen::VectorXd& c0) {
    const auto& w = g.weights();
    ErrorBoundParams p;
    p.gamma = 1.0;
    if (w.isApprox(w.transpose(), 0.0)) {
        p.kappa = cfg.alpha * spectral_norm(w);
    } else {
        double norm1 = w.cwiseAbs().colwise().sum().maxCoeff();
        double norm_inf = w.cwiseAbs().rowwise().sum().maxCoeff();
        p.kappa = cfg.alpha * std::min({norm1, spectral_norm(w), norm_inf});
    }
    p.m0 = std::max(c0.norm(), cfg.z.norm());
    p.available = p.kappa < 1.0;
    return p;
}

double error_bound(const ErrorBoundParams& params, int t) {
    if (params.kappa >= 1.0) throw KappaNotLessThanOne(params.kappa);
    const double kt = (t == 0) ? 1.0 : std::pow(params.kappa, t);
    return params.gamma * (2.0 - params.kappa) * kt / (1.0 - params.kappa) * params.m0;
}

int default_max_rounds(double tol, std::optional<double> kappa) {
    if (kappa && *kappa > 0.0 && *kappa < 1.0)
        return 10 * static_cast<int>(std::ceil(std::log(tol) / std::log(*kappa)));
    return 10000;
}

}  // namespace acn
