#pragma once

#include <Eigen/Dense>

#include "acn/estimation.hpp"
#include "acn/graph.hpp"
#include "acn/trace.hpp"

namespace acn {

/// Full state of the influence-weighted consensus cascade after round t.
struct ConsensusState {
    Eigen::VectorXd c;     ///< centrality estimate
    Eigen::VectorXd dc;    ///< increment of c
    Eigen::VectorXd cbar;  ///< running average of the centrality estimate
    Eigen::VectorXd y;     ///< cumulative exogenous input
    Eigen::VectorXd dy;    ///< increment of y
    Eigen::VectorXd x;     ///< consensus values
    Eigen::VectorXd x0;    ///< frozen initial conditions
    int t = 0;
    /// Number of (round, agent) pairs where the division safeguard held the
    /// previous y because the running average was exactly zero.
    long safeguard_hits = 0;

    static ConsensusState init(const Eigen::VectorXd& z, const Eigen::VectorXd& x0);
};

/// One synchronous round of the cascade: c update, its increment, running
/// average with increment injection, safeguarded y update, its increment,
/// consensus mixing. All neighbor sums run in ascending id order; the y
/// safeguard holds y_i when the freshly computed running average is exactly
/// zero.
ConsensusState consensus_step(const InfluenceGraph& g, const CentralityConfig& cfg,
                              const PerronMatrix& q, const ConsensusState& s);

struct ConsensusResult {
    ConsensusState state;
    int rounds = 0;
    bool converged = false;
    double x_residual = 0.0;
    double dc_residual = 0.0;
};

/// Iterates until ||x(t+1)-x(t)||_inf + ||dc(t+1)||_inf < stop.tol or the
/// round cap. Trace columns: c, cbar, y, x. Reaching the cap is reported via
/// converged = false together with the final residuals.
ConsensusResult run_consensus(const InfluenceGraph& g, const CentralityConfig& cfg,
                              const PerronMatrix& q, const Eigen::VectorXd& x0,
                              const StopRule& stop, RoundTrace* trace = nullptr);

/// Target of the weighted consensus: rho^T x0 / rho^T 1.
double weighted_average_oracle(const Eigen::VectorXd& rho, const Eigen::VectorXd& x0);

/// Per-agent exogenous input gamma_i = (rho_i / mean(rho) - 1) * x0_i.
Eigen::VectorXd correction_input_oracle(const Eigen::VectorXd& rho, const Eigen::VectorXd& x0);

}  // namespace acn
