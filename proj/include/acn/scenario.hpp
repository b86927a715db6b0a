#pragma once

#include <Eigen/Dense>
#include <iosfwd>
#include <optional>
#include <string>

#include "acn/control.hpp"
#include "acn/graph.hpp"

namespace acn {

/// Parsed protocol scenario (text key-value file). One key per line, `#`
/// comments. Keys:
///   graph <path>            (relative paths resolve against the file's dir)
///   protocol estimate|consensus|control
///   alpha <v> | alpha-margin <m> | alpha-spectral <f>
///   z ones | z <v_1> ... <v_n>
///   x0 <v_1> ... <v_n>
///   c0 zeros | c0 z | c0 <v_1> ... <v_n>
///   epsilon auto | epsilon <v>
///   tol <v>      max-rounds <k>      seed <k>
struct ScenarioSpec {
    std::string graph_path;
    std::string protocol;
    std::optional<double> alpha;
    std::optional<double> alpha_margin;    ///< fraction of the norm bound
    std::optional<double> alpha_spectral;  ///< fraction of 1/||W||_2
    std::optional<double> epsilon;         ///< absent means auto
    std::optional<double> tol;
    std::optional<int> max_rounds;
    std::optional<unsigned long> seed;
    std::optional<Eigen::VectorXd> z;
    std::optional<Eigen::VectorXd> x0;
    std::optional<Eigen::VectorXd> c0;
    bool c0_is_z = false;

    static ScenarioSpec load(std::istream& in, const std::string& base_dir);
    static ScenarioSpec load_file(const std::string& path);

    /// Resolves the alpha mode against the graph. Exactly one mode must be
    /// set unless `fallback_margin` provides a default.
    double resolve_alpha(const InfluenceGraph& g,
                         std::optional<double> fallback_margin = std::nullopt) const;
    /// z defaulting to ones; validates the length.
    Eigen::VectorXd resolve_z(int n) const;
    Eigen::VectorXd resolve_x0(int n) const;
    /// c(0): explicit vector, copy of z, or zeros (the default).
    Eigen::VectorXd resolve_c0(int n, const Eigen::VectorXd& z) const;
};

/// Control instance file: the graph format extended with
///   u <i> <j> <upper>   l <i> <j> <lower>     (edge-weight bounds, both
///                                              orientations given as two
///                                              lines with i,j swapped)
///   us <i> <upper>      ls <i> <lower>        (self-loop bounds)
///   rho* <v_1> ... <v_n>
///   z <v_1> ... <v_n>
///   alpha <v>
/// Bounds default to the current weight (no adjustment allowed) when absent.
ControlInstance load_control_instance(std::istream& in);
ControlInstance load_control_instance_file(const std::string& path);

}  // namespace acn
