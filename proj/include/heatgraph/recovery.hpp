#pragma once

#include "heatgraph/graph.hpp"
#include "heatgraph/sampling.hpp"

#include <Eigen/Dense>

#include <optional>
#include <string>

namespace heatgraph {

/// Stacks the columns of a K x T observation matrix into vec(Y).
Eigen::VectorXd vectorize(const Eigen::MatrixXd& observations);

struct RankStatus {
    bool full = true;
    Eigen::Index rank = 0;
    Eigen::Index columns = 0;
};

struct RecoveryResult {
    std::optional<Eigen::VectorXd> initial_field;  // x^(0) = U x^_f(0)
    std::optional<Eigen::VectorXd> input;          // q^ = U q^_f or U_P q^_f,P
    Eigen::VectorXd spectral_estimate;              // raw least-squares solution
    double residual_norm = 0.0;
    double operator_condition = 0.0;
    RankStatus rank_status;
};

/// Least-squares solver bound to one operator.
///
/// Factorises the operator once with column-pivoted QR, so repeated solves
/// (e.g. Monte-Carlo noise draws) reuse the factorisation. Construction
/// throws RankDeficientError unless the operator has full numerical column
/// rank; minimum-norm answers are never returned.
class LeastSquaresEstimator {
public:
    explicit LeastSquaresEstimator(const ObservationOperator& op);

    const ObservationOperator& op() const noexcept { return op_; }
    const ConditioningReport& conditioning() const noexcept { return conditioning_; }

    /// Spectral solution for an observation matrix Y (K x T).
    Eigen::VectorXd solve(const Eigen::MatrixXd& observations) const;

    /// Full result: solution, vertex-domain estimates, residual, diagnostics.
    RecoveryResult recover(const Eigen::MatrixXd& observations, const Spectrum& spectrum) const;

private:
    ObservationOperator op_;
    ConditioningReport conditioning_;
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr_;
};

RecoveryResult recover_initial_field(const Eigen::MatrixXd& observations,
                                     const ObservationOperator& op, const Spectrum& spectrum);

RecoveryResult recover_external_input(const Eigen::MatrixXd& observations,
                                      const ObservationOperator& op, const Spectrum& spectrum);

RecoveryResult recover_joint(const Eigen::MatrixXd& observations, const ObservationOperator& op,
                             const Spectrum& spectrum, int bandwidth);

struct Identifiability {
    bool identifiable = false;
    Eigen::Index rank = 0;
    Eigen::Index unknowns = 0;
    double sigma_min = 0.0;
    bool too_few_equations = false;  // K*T < M
    std::string reason;              // empty when identifiable
};

/// Full numerical column rank (at the conditioning report's tolerance).
Identifiability identifiability_check(const ObservationOperator& op);

}  // namespace heatgraph
