#pragma once

#include <stdexcept>
#include <string>

namespace acn {

/// Base class for all library errors.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Input validation errors (bad graph, bad parameters, bad files).
struct InputError : Error {
    using Error::Error;
};

struct DisconnectedGraph : InputError {
    DisconnectedGraph() : InputError("graph is not connected") {}
};

struct WeightOutsideEdgeSet : InputError {
    WeightOutsideEdgeSet(int i, int j)
        : InputError("weight assigned outside the edge set: (" + std::to_string(i + 1) + "," +
                     std::to_string(j + 1) + ")") {}
};

struct NegativeWeight : InputError {
    NegativeWeight(int i, int j)
        : InputError("negative weight at (" + std::to_string(i + 1) + "," + std::to_string(j + 1) +
                     ")") {}
};

struct ZeroMatrix : InputError {
    ZeroMatrix() : InputError("influence matrix is identically zero") {}
};

struct EpsilonTooLarge : InputError {
    EpsilonTooLarge(double eps, double limit)
        : InputError("epsilon " + std::to_string(eps) + " must be below 1/d_max = " +
                     std::to_string(limit)) {}
};

struct DimensionMismatch : InputError {
    DimensionMismatch(long got, long want)
        : InputError("vector length " + std::to_string(got) + ", expected " +
                     std::to_string(want)) {}
};

struct KappaNotLessThanOne : InputError {
    explicit KappaNotLessThanOne(double kappa)
        : InputError("contraction factor kappa = " + std::to_string(kappa) + " is not below 1") {}
};

struct ZeroCentralityVector : InputError {
    ZeroCentralityVector() : InputError("centrality vector is identically zero") {}
};

/// Numerical failures.
struct NumericalError : Error {
    using Error::Error;
};

struct SingularSystem : NumericalError {
    SingularSystem() : NumericalError("linear system (I - alpha W^T) is numerically singular") {}
};

struct NonConvergence : NumericalError {
    explicit NonConvergence(const std::string& what) : NumericalError(what) {}
};

/// Control-solver errors.
struct NoValidPartition : NumericalError {
    explicit NoValidPartition(int node)
        : NumericalError("no saturation partition solves node " + std::to_string(node + 1) +
                         " (instance infeasible or degenerate)") {}
};

struct NeighborhoodTooLarge : InputError {
    NeighborhoodTooLarge(int node, int size, int limit)
        : InputError("node " + std::to_string(node + 1) + " has extended neighborhood of size " +
                     std::to_string(size) + ", enumeration capped at " + std::to_string(limit)) {}
};

struct ConstraintResidualTooLarge : NumericalError {
    explicit ConstraintResidualTooLarge(double resid)
        : NumericalError("assembled solution violates the centrality constraint, residual = " +
                         std::to_string(resid)) {}
};

struct InfeasibleTarget : Error {
    explicit InfeasibleTarget(const std::string& what) : Error(what) {}
};

}  // namespace acn
