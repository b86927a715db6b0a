// Command-line front end: runs the estimation, consensus and weight-control
// protocols from scenario files and writes traces, solutions and summaries.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "acn/consensus.hpp"
#include "acn/control.hpp"
#include "acn/errors.hpp"
#include "acn/estimation.hpp"
#include "acn/scenario.hpp"
#include "acn/simnet.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInput = 2;
constexpr int kExitNotConverged = 3;
constexpr int kExitInfeasible = 4;

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.15g", v);
    return buf;
}

struct CommonOpts {
    std::string scenario;
    std::string graph;
    std::string out = ".";
    std::optional<double> alpha;
    std::optional<double> alpha_margin;
    std::optional<double> tol;
    std::optional<int> max_rounds;
    bool audit = false;
};

void add_common(CLI::App* cmd, CommonOpts& o, bool with_audit) {
    cmd->add_option("--scenario", o.scenario, "Scenario file");
    cmd->add_option("--graph", o.graph, "Graph file (overrides the scenario's graph)");
    cmd->add_option("--out", o.out, "Output directory")->capture_default_str();
    auto* a = cmd->add_option("--alpha", o.alpha, "Attenuation parameter");
    cmd->add_option("--alpha-margin", o.alpha_margin, "Alpha as a fraction of the norm bound")
        ->excludes(a);
    cmd->add_option("--tol", o.tol, "Stop tolerance");
    cmd->add_option("--max-rounds", o.max_rounds, "Round cap");
    if (with_audit)
        cmd->add_flag("--audit-locality", o.audit,
                      "Run on the message-passing engine and emit a locality audit");
}

acn::ScenarioSpec make_spec(const CommonOpts& o, const std::string& protocol) {
    acn::ScenarioSpec spec;
    if (!o.scenario.empty()) spec = acn::ScenarioSpec::load_file(o.scenario);
    if (spec.protocol.empty()) spec.protocol = protocol;
    if (spec.protocol != protocol)
        throw acn::InputError("scenario protocol `" + spec.protocol + "` does not match command `" +
                              protocol + "`");
    if (!o.graph.empty()) spec.graph_path = o.graph;
    if (spec.graph_path.empty()) throw acn::InputError("no graph given (--graph or --scenario)");
    if (o.alpha) {
        spec.alpha = o.alpha;
        spec.alpha_margin.reset();
        spec.alpha_spectral.reset();
    }
    if (o.alpha_margin) {
        spec.alpha_margin = o.alpha_margin;
        spec.alpha.reset();
        spec.alpha_spectral.reset();
    }
    if (o.tol) spec.tol = o.tol;
    if (o.max_rounds) spec.max_rounds = o.max_rounds;
    return spec;
}

std::ofstream open_out(const std::string& dir, const std::string& name) {
    std::filesystem::create_directories(dir);
    std::ofstream f(dir + "/" + name);
    if (!f) throw acn::InputError("cannot write " + dir + "/" + name);
    return f;
}

void write_kv(std::ofstream& f, const std::string& key, const std::string& value) {
    f << key << " " << value << "\n";
}

void write_audit(const CommonOpts& o, const std::vector<std::string>& report,
                 std::ofstream& kv) {
    auto f = open_out(o.out, "audit.txt");
    for (const auto& line : report) f << line << "\n";
    write_kv(kv, "audit_violations", std::to_string(report.size()));
}

int cmd_estimate(const CommonOpts& o) {
    auto spec = make_spec(o, "estimate");
    auto g = acn::load_graph_file(spec.graph_path);
    acn::CentralityConfig cfg{spec.resolve_alpha(g, 0.9), spec.resolve_z(g.n())};
    Eigen::VectorXd c0 = spec.resolve_c0(g.n(), cfg.z);
    acn::StopRule stop;
    if (spec.tol) stop.tol = *spec.tol;
    if (spec.max_rounds) stop.max_rounds = *spec.max_rounds;

    acn::RoundTrace trace({"c"});
    acn::EstimationResult res;
    std::vector<std::string> audit_report;
    if (o.audit) {
        acn::SimOptions sopts;
        sopts.audit = true;
        auto sim = acn::sim_estimation(g, cfg, c0, stop, sopts);
        trace = std::move(sim.trace);
        res.c = sim.c;
        res.rounds = sim.rounds;
        res.converged = sim.converged;
        res.residual = sim.residual;
        audit_report = acn::locality_audit(sim.accesses, g);
    } else {
        res = acn::run_estimation(g, cfg, c0, stop, &trace);
    }

    Eigen::VectorXd oracle = acn::oracle_alpha_centrality(g, cfg);
    const double final_error = (res.c - oracle).cwiseAbs().maxCoeff();

    auto params = acn::ErrorBoundParams::from(g, cfg, c0);
    int first_below = -1;
    for (int t = 0; t < trace.rounds(); ++t) {
        if ((trace.vector_at(t, 0) - oracle).norm() < 0.1) {
            first_below = t;
            break;
        }
    }

    trace.metadata()["protocol"] = "estimate";
    trace.metadata()["alpha"] = fmt(cfg.alpha);
    {
        auto f = open_out(o.out, "trace.csv");
        trace.write_csv(f);
    }
    if (params.available) {
        auto f = open_out(o.out, "bound.csv");
        f << "t,bound\n";
        for (int t = 0; t < trace.rounds(); ++t) f << t << "," << fmt(acn::error_bound(params, t)) << "\n";
    }

    auto kv = open_out(o.out, "summary.kv");
    write_kv(kv, "protocol", "estimate");
    write_kv(kv, "alpha", fmt(cfg.alpha));
    write_kv(kv, "rounds", std::to_string(res.rounds));
    write_kv(kv, "converged", res.converged ? "1" : "0");
    write_kv(kv, "residual", fmt(res.residual));
    write_kv(kv, "final_error", fmt(final_error));
    write_kv(kv, "first_round_error_below_0.1", std::to_string(first_below));
    write_kv(kv, "kappa", fmt(params.kappa));
    write_kv(kv, "bound_available", params.available ? "1" : "0");
    for (int i = 0; i < g.n(); ++i) write_kv(kv, "c_" + std::to_string(i + 1), fmt(res.c(i)));
    if (o.audit) write_audit(o, audit_report, kv);

    auto txt = open_out(o.out, "summary.txt");
    txt << "centrality estimation on " << spec.graph_path << "\n"
        << "agents: " << g.n() << "  alpha: " << fmt(cfg.alpha) << "\n"
        << "rounds: " << res.rounds << (res.converged ? " (converged)" : " (round cap reached)")
        << "\n"
        << "final max error vs direct solve: " << fmt(final_error) << "\n"
        << "first round with l2 error below 0.1: " << first_below << "\n"
        << "final estimates:";
    for (int i = 0; i < g.n(); ++i) txt << " " << fmt(res.c(i));
    txt << "\n";
    if (o.audit)
        txt << "locality audit: " << audit_report.size() << " violation(s)\n";

    return res.converged ? kExitOk : kExitNotConverged;
}

int cmd_consensus(const CommonOpts& o) {
    auto spec = make_spec(o, "consensus");
    auto g = acn::load_graph_file(spec.graph_path);
    acn::CentralityConfig cfg{spec.resolve_alpha(g, 0.9), spec.resolve_z(g.n())};
    Eigen::VectorXd x0 = spec.resolve_x0(g.n());
    auto q = acn::perron_matrix(g, spec.epsilon);
    acn::StopRule stop;
    if (spec.tol) stop.tol = *spec.tol;
    if (spec.max_rounds) stop.max_rounds = *spec.max_rounds;

    acn::RoundTrace trace({"c", "cbar", "y", "x"});
    acn::ConsensusResult res;
    std::vector<std::string> audit_report;
    if (o.audit) {
        acn::SimOptions sopts;
        sopts.audit = true;
        auto sim = acn::sim_consensus(g, cfg, q, x0, stop, sopts);
        trace = std::move(sim.trace);
        res.state = sim.state;
        res.rounds = sim.rounds;
        res.converged = sim.converged;
        audit_report = acn::locality_audit(sim.accesses, g);
    } else {
        res = acn::run_consensus(g, cfg, q, x0, stop, &trace);
    }

    Eigen::VectorXd rho = acn::oracle_alpha_centrality(g, cfg);
    const double x_star = acn::weighted_average_oracle(rho, x0);
    const double mean_x0 = x0.mean();
    const double consensus_residual = (res.state.x.array() - x_star).abs().maxCoeff();

    trace.metadata()["protocol"] = "consensus";
    {
        auto f = open_out(o.out, "trace.csv");
        trace.write_csv(f);
    }

    auto kv = open_out(o.out, "summary.kv");
    write_kv(kv, "protocol", "consensus");
    write_kv(kv, "alpha", fmt(cfg.alpha));
    write_kv(kv, "epsilon", fmt(q.epsilon));
    write_kv(kv, "rounds", std::to_string(res.rounds));
    write_kv(kv, "converged", res.converged ? "1" : "0");
    write_kv(kv, "x_star", fmt(x_star));
    write_kv(kv, "mean_x0", fmt(mean_x0));
    write_kv(kv, "consensus_residual", fmt(consensus_residual));
    write_kv(kv, "safeguard_hits", std::to_string(res.state.safeguard_hits));
    for (int i = 0; i < g.n(); ++i)
        write_kv(kv, "x_" + std::to_string(i + 1), fmt(res.state.x(i)));
    for (int i = 0; i < g.n(); ++i)
        write_kv(kv, "y_" + std::to_string(i + 1), fmt(res.state.y(i)));
    if (o.audit) write_audit(o, audit_report, kv);

    auto txt = open_out(o.out, "summary.txt");
    txt << "influence-weighted consensus on " << spec.graph_path << "\n"
        << "agents: " << g.n() << "  alpha: " << fmt(cfg.alpha) << "  epsilon: " << fmt(q.epsilon)
        << "\n"
        << "rounds: " << res.rounds << (res.converged ? " (converged)" : " (round cap reached)")
        << "\n"
        << "weighted-average target x*: " << fmt(x_star) << "\n"
        << "plain mean of x0:           " << fmt(mean_x0) << "\n"
        << "max |x_i - x*|: " << fmt(consensus_residual) << "\n"
        << "division-safeguard activations: " << res.state.safeguard_hits << "\n";
    if (o.audit)
        txt << "locality audit: " << audit_report.size() << " violation(s)\n";

    return res.converged ? kExitOk : kExitNotConverged;
}

int cmd_control(const CommonOpts& o, bool parallel) {
    if (o.scenario.empty()) throw acn::InputError("control needs --scenario (instance file)");
    auto inst = acn::load_control_instance_file(o.scenario);
    auto feas = acn::feasibility_check(inst);

    if (!feas.feasible) {
        auto kv = open_out(o.out, "summary.kv");
        write_kv(kv, "protocol", "control");
        write_kv(kv, "feasible", "0");
        auto txt = open_out(o.out, "summary.txt");
        txt << "weight adjustment on " << o.scenario << "\nverdict: infeasible\n";
        for (int i : feas.upper_violations)
            txt << "  upper-bound inequality fails at node " << i + 1 << " by "
                << fmt(-feas.upper_slack(i)) << "\n";
        for (int i : feas.lower_violations)
            txt << "  lower-bound inequality fails at node " << i + 1 << " by "
                << fmt(-feas.lower_slack(i)) << "\n";
        std::cerr << "instance infeasible\n";
        return kExitInfeasible;
    }

    auto sol = acn::solve_control(inst, acn::NodeSolver::Breakpoints, parallel);
    const int n = inst.graph().n();

    {
        auto f = open_out(o.out, "solution.csv");
        f << "i,j,w_old,x_star,w_new\n";
        for (int i = 0; i < n; ++i)
            for (int j : inst.graph().extended_neighbors(i))
                f << j + 1 << "," << i + 1 << "," << fmt(inst.w()(j, i)) << ","
                  << fmt(sol.x_star(j, i)) << "," << fmt(inst.w()(j, i) + sol.x_star(j, i))
                  << "\n";
    }

    // Centrality spread before/after the adjustment (via the direct solve).
    std::optional<double> spread_before;
    try {
        acn::CentralityConfig cfg{inst.alpha(), inst.z()};
        Eigen::VectorXd before = acn::oracle_alpha_centrality(inst.graph(), cfg);
        spread_before = before.maxCoeff() - before.minCoeff();
    } catch (const acn::Error&) {
    }
    const double spread_after = inst.rho_star().maxCoeff() - inst.rho_star().minCoeff();

    auto kv = open_out(o.out, "summary.kv");
    write_kv(kv, "protocol", "control");
    write_kv(kv, "feasible", "1");
    write_kv(kv, "objective", fmt(sol.objective));
    write_kv(kv, "constraint_residual", fmt(sol.constraint_residual));
    if (spread_before) write_kv(kv, "spread_before", fmt(*spread_before));
    write_kv(kv, "spread_after", fmt(spread_after));
    for (int i = 0; i < n; ++i)
        write_kv(kv, "lambda_" + std::to_string(i + 1), fmt(sol.lambda_star(i)));

    auto txt = open_out(o.out, "summary.txt");
    txt << "weight adjustment on " << o.scenario << "\n"
        << "verdict: feasible\n"
        << "objective (half squared Frobenius norm): " << fmt(sol.objective) << "\n"
        << "max constraint residual: " << fmt(sol.constraint_residual) << "\n";
    if (spread_before)
        txt << "centrality spread before: " << fmt(*spread_before) << "\n";
    txt << "centrality spread after:  " << fmt(spread_after) << "\n"
        << "per-node multipliers:";
    for (int i = 0; i < n; ++i) txt << " " << fmt(sol.lambda_star(i));
    txt << "\n";

    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"distributed centrality estimation, consensus and weight control"};
    app.require_subcommand(1);

    CommonOpts est_o, con_o, ctl_o;
    bool parallel = false;

    auto* est = app.add_subcommand("estimate", "Distributed centrality estimation");
    add_common(est, est_o, true);
    auto* con = app.add_subcommand("consensus", "Centrality-weighted consensus");
    add_common(con, con_o, true);
    auto* ctl = app.add_subcommand("control", "Minimum-effort weight adjustment");
    add_common(ctl, ctl_o, false);
    ctl->add_flag("--parallel", parallel, "Solve per-node sub-problems concurrently");

    try {
        app.parse(argc, argv);
        if (est->parsed()) return cmd_estimate(est_o);
        if (con->parsed()) return cmd_consensus(con_o);
        return cmd_control(ctl_o, parallel);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : kExitInput;
    } catch (const acn::InfeasibleTarget& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInfeasible;
    } catch (const acn::NonConvergence& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitNotConverged;
    } catch (const acn::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInput;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInput;
    }
}
