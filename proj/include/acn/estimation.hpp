#pragma once

#include <Eigen/Dense>
#include <optional>

#include "acn/graph.hpp"
#include "acn/trace.hpp"

namespace acn {

/// Stop rule for iterative protocols: terminate when the round-to-round
/// residual drops below `tol` (infinity norm) or after `max_rounds`.
struct StopRule {
    int max_rounds = 10000;
    double tol = 1e-10;
};

struct EstimationResult {
    Eigen::VectorXd c;
    int rounds = 0;
    bool converged = false;
    double residual = 0.0;
};

/// One synchronous round: c_i <- alpha * sum_j w_ji c_j + z_i, the sum taken
/// over j in ascending id order (self-influence included when present).
Eigen::VectorXd estimation_step(const InfluenceGraph& g, const CentralityConfig& cfg,
                                const Eigen::VectorXd& c);

/// Iterates estimation_step from c0 until ||c(t+1)-c(t)||_inf < stop.tol or
/// stop.max_rounds. Reaching the round cap is reported, not an error. When a
/// trace is given, every round (including round 0) is recorded under column
/// "c".
EstimationResult run_estimation(const InfluenceGraph& g, const CentralityConfig& cfg,
                                const Eigen::VectorXd& c0, const StopRule& stop,
                                RoundTrace* trace = nullptr);

/// Direct solve of (I - alpha W^T) rho = z. Throws SingularSystem.
Eigen::VectorXd oracle_alpha_centrality(const InfluenceGraph& g, const CentralityConfig& cfg);

/// Katz centrality ((I - alpha W^T)^{-1} - I) 1.
Eigen::VectorXd oracle_katz_centrality(const InfluenceGraph& g, double alpha);

/// Constants of the geometric estimation-error bound
/// gamma * (2-kappa) * kappa^t / (1-kappa) * m0.
struct ErrorBoundParams {
    double kappa = 0.0;
    double gamma = 1.0;
    double m0 = 0.0;
    /// False when no tractable matrix norm certifies kappa < 1 (asymmetric W
    /// with all of ||W||_1, ||W||_2, ||W||_inf too large); the bound is then
    /// unavailable.
    bool available = true;

    /// For symmetric W uses the spectral norm (gamma = 1); for asymmetric W,
    /// kappa = alpha * min(||W||_1, ||W||_2, ||W||_inf).
    static ErrorBoundParams from(const InfluenceGraph& g, const CentralityConfig& cfg,
                                 const Eigen::VectorXd& c0);
};

/// Evaluates the bound at round t. Throws KappaNotLessThanOne.
double error_bound(const ErrorBoundParams& params, int t);

/// Default round cap 10*ceil(log(tol)/log(kappa)) when kappa is known.
int default_max_rounds(double tol, std::optional<double> kappa);

}  // namespace acn
