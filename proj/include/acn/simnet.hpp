#pragma once

#include <Eigen/Dense>
#include <string>
#include <utility>
#include <vector>

#include "acn/consensus.hpp"
#include "acn/control.hpp"
#include "acn/estimation.hpp"
#include "acn/graph.hpp"
#include "acn/trace.hpp"

namespace acn {

/// One mediated read performed by an agent during a synchronous round.
struct AccessRecord {
    int round;
    int reader;
    int source;
};

/// Instrumentation switches for the message-passing engine.
struct SimOptions {
    /// Record every mediated read for a later locality audit.
    bool audit = false;
    /// Test fixture: extra (reader, source) reads injected at round 1 through
    /// the mediated view, to exercise the audit's detection path.
    std::vector<std::pair<int, int>> injected_reads;
};

/// Outcome of a protocol hosted on the message-passing engine. The trace and
/// final vectors are bitwise-identical to the centralized vector iteration of
/// the corresponding module.
struct SimResult {
    RoundTrace trace;
    Eigen::VectorXd c;
    ConsensusState state;  ///< populated by the consensus protocol only
    int rounds = 0;
    bool converged = false;
    double residual = 0.0;
    std::vector<AccessRecord> accesses;  ///< nonempty only with audit on
};

/// Centrality estimation as a message-passing protocol: each agent holds its
/// own c_i and reads only neighbor values of the previous round.
SimResult sim_estimation(const InfluenceGraph& g, const CentralityConfig& cfg,
                         const Eigen::VectorXd& c0, const StopRule& stop,
                         const SimOptions& opts = {});

/// The consensus cascade as a message-passing protocol; same stop rule and
/// trace columns as run_consensus.
SimResult sim_consensus(const InfluenceGraph& g, const CentralityConfig& cfg,
                        const PerronMatrix& q, const Eigen::VectorXd& x0, const StopRule& stop,
                        const SimOptions& opts = {});

struct AlphaAgreement {
    double alpha = 0.0;            ///< common value margin / sqrt(||W||_1 ||W||_inf)
    int rounds = 0;                ///< rounds executed (= hop diameter)
    Eigen::VectorXd per_agent;     ///< each agent's final alpha (all equal)
    std::vector<AccessRecord> accesses;
};

/// Max-consensus agreement on the attenuation parameter: each agent starts
/// from its locally known row and column sums (incident weights only) and
/// takes neighborhood maxima for diameter(g) rounds. Every agent ends holding
/// margin / sqrt(||W||_1 ||W||_inf) exactly.
AlphaAgreement distributed_alpha_agreement(const InfluenceGraph& g, double margin,
                                           const SimOptions& opts = {});

/// Single-round data exchange for the weight-adjustment problem: each agent
/// receives exactly {w_ji, upper_ji, lower_ji, rho*_j} from every neighbor j
/// (and contributes its own self-influence entries). The result equals
/// NodeData::from_instance for every node.
std::vector<NodeData> control_exchange(const ControlInstance& inst,
                                       std::vector<AccessRecord>* accesses = nullptr);

/// Checks that every recorded read stayed inside the reader's closed
/// neighborhood. Returns one line `violation <round> <agent> <source>` per
/// offending read (1-based ids); empty on compliant runs.
std::vector<std::string> locality_audit(const std::vector<AccessRecord>& accesses,
                                        const InfluenceGraph& g);

}  // namespace acn
