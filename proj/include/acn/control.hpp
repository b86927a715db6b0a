#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

#include "acn/graph.hpp"

namespace acn {

/// Minimum-effort weight-adjustment problem: drive the alpha-centrality of
/// (W + X) to rho_star while keeping W + X inside [w_lower, w_upper] on the
/// support of the graph.
class ControlInstance {
  public:
    /// Validates: bounds zero off support, w_lower <= W <= w_upper on the
    /// support, w_lower >= 0, rho_star > 0 elementwise, z >= 0,
    /// rho_star >= z, alpha > 0.
    static ControlInstance make(InfluenceGraph g, Eigen::MatrixXd w_upper,
                                Eigen::MatrixXd w_lower, Eigen::VectorXd rho_star,
                                Eigen::VectorXd z, double alpha);

    const InfluenceGraph& graph() const { return g_; }
    const Eigen::MatrixXd& w() const { return g_.weights(); }
    const Eigen::MatrixXd& w_upper() const { return w_upper_; }
    const Eigen::MatrixXd& w_lower() const { return w_lower_; }
    const Eigen::VectorXd& rho_star() const { return rho_star_; }
    const Eigen::VectorXd& z() const { return z_; }
    double alpha() const { return alpha_; }

  private:
    ControlInstance() = default;
    InfluenceGraph g_;
    Eigen::MatrixXd w_upper_, w_lower_;
    Eigen::VectorXd rho_star_, z_;
    double alpha_ = 0.0;
};

struct Feasibility {
    bool feasible = true;
    /// Rows where (I - alpha W_upper^T) rho* <= z fails, with the gap.
    std::vector<int> upper_violations;
    Eigen::VectorXd upper_slack;
    /// Rows where (I - alpha W_lower^T) rho* >= z fails, with the gap.
    std::vector<int> lower_violations;
    Eigen::VectorXd lower_slack;
};

/// Feasibility test of the adjustment problem. Infeasibility is a verdict,
/// not an error.
Feasibility feasibility_check(const ControlInstance& inst);

/// Everything node i needs to solve its sub-problem: the incident column of
/// W and the bounds, plus the neighbors' target components. Obtainable with
/// one communication round.
struct NodeData {
    int node = 0;
    std::vector<int> members;  ///< extended neighborhood, ascending ids
    Eigen::VectorXd w;         ///< w_ji for each member j
    Eigen::VectorXd lo;        ///< lower bounds on the same entries
    Eigen::VectorXd hi;        ///< upper bounds
    Eigen::VectorXd rho;       ///< rho*_j for each member
    double rho_i = 0.0;
    double z_i = 0.0;
    double alpha = 0.0;

    static NodeData from_instance(const ControlInstance& inst, int i);
};

/// Residual of node i's dual root-finding problem:
/// sum_j sat(w_ji - lambda rho*_j, lo, hi) rho*_j - (rho*_i - z_i)/alpha.
/// Piecewise linear and nonincreasing in lambda.
double residual_f(const NodeData& d, double lambda);
double residual_f(const ControlInstance& inst, int i, double lambda);

/// Classification of node i's incident weights at lambda*: interior,
/// lower-saturated, or upper-saturated (global ids).
struct NodePartition {
    std::vector<int> interior;
    std::vector<int> lower;
    std::vector<int> upper;
};

struct NodeSolution {
    double lambda = 0.0;
    NodePartition partition;
    /// Optimal adjustment column X*_{.i}, length n, zero off the
    /// extended neighborhood.
    Eigen::VectorXd column;
};

/// Reference solver: enumerates the 3^|N| ordered saturation partitions in
/// ternary-counter order over ascending neighbor ids and returns the first
/// verified one. `visited` (optional) receives the number of partitions
/// inspected; with `exhaustive` the full count is always walked.
/// Throws NeighborhoodTooLarge past `max_neighborhood` and NoValidPartition
/// when no partition verifies.
NodeSolution solve_node_enumeration(const NodeData& d, int max_neighborhood = 18,
                                    std::uint64_t* visited = nullptr, bool exhaustive = false);
NodeSolution solve_node_enumeration(const ControlInstance& inst, int i,
                                    int max_neighborhood = 18);

/// Production solver: sorts the 2|N| saturation breakpoints of the
/// nonincreasing residual and solves the linear piece containing the sign
/// change. O(d log d) in the incident degree. Identical contract to the
/// enumeration solver (lambda may differ on flat zero segments; the column
/// may not).
NodeSolution solve_node_breakpoints(const NodeData& d);
NodeSolution solve_node_breakpoints(const ControlInstance& inst, int i);

struct ControlSolution {
    Eigen::MatrixXd x_star;
    Eigen::VectorXd lambda_star;
    double objective = 0.0;
    std::vector<NodePartition> partitions;
    double constraint_residual = 0.0;
};

/// Combines per-node columns, recomputes and verifies the invariants (box
/// bounds exact, constraint residual below 1e-6, adjusted centrality equal
/// to the target). Throws ConstraintResidualTooLarge on inconsistent input.
ControlSolution assemble_solution(const ControlInstance& inst,
                                  const std::vector<NodeSolution>& nodes);

enum class NodeSolver { Breakpoints, Enumeration };

/// Feasibility check plus per-node solve plus assembly. Refuses infeasible
/// instances (InfeasibleTarget). Per-node sub-problems run concurrently when
/// `parallel` is set; results are identical to the serial order.
ControlSolution solve_control(const ControlInstance& inst,
                              NodeSolver solver = NodeSolver::Breakpoints,
                              bool parallel = false);

/// Independent reference solver for tests: augmented-Lagrangian projected
/// gradient on each node's box-constrained sub-problem, iterated to a 1e-10
/// KKT residual. Throws NonConvergence.
ControlSolution qp_oracle(const ControlInstance& inst);

enum class TargetMode { Ones, UniformLevel };

struct AttackReport {
    ControlSolution solution;
    double spread_before = 0.0;
    double spread_after = 0.0;
};

/// Equalizes all centralities by retargeting rho* = level * 1 and solving.
/// Throws InfeasibleTarget (with the violated rows in the message) when the
/// uniform target is unreachable within the bounds.
AttackReport attack_protection(const ControlInstance& inst, TargetMode mode,
                               double level = 1.0);

}  // namespace acn
