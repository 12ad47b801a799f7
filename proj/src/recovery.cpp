#include "heatgraph/recovery.hpp"

#include "heatgraph/error.hpp"

#include <sstream>

namespace heatgraph {

namespace {

std::string describe_deficiency(const ConditioningReport& report) {
    std::ostringstream msg;
    msg << "numerical rank " << report.rank << " < " << report.cols << " unknowns (sigma_min "
        << report.sigma_min << ", tolerance " << report.rank_tolerance << ")";
    if (report.underdetermined()) {
        msg << "; only " << report.rows << " equations";
    }
    return msg.str();
}

void require_kind(const ObservationOperator& op, OperatorKind expected) {
    if (op.kind() != expected) {
        throw ValidationError("expected a " + std::string(to_string(expected)) +
                              " operator, got " + std::string(to_string(op.kind())));
    }
}

}  // namespace

Eigen::VectorXd vectorize(const Eigen::MatrixXd& observations) {
    return observations.reshaped();
}

LeastSquaresEstimator::LeastSquaresEstimator(const ObservationOperator& op)
    : op_(op), conditioning_(conditioning_report(op)) {
    if (!conditioning_.full_column_rank()) {
        throw RankDeficientError(std::string(to_string(op.kind())) +
                                     " operator is not identifiable: " +
                                     describe_deficiency(conditioning_),
                                 conditioning_.rank, conditioning_.cols);
    }
    qr_.compute(op_.matrix());
}

Eigen::VectorXd LeastSquaresEstimator::solve(const Eigen::MatrixXd& observations) const {
    const int sensors = op_.selection().size();
    const int samples = op_.grid().count();
    if (observations.rows() != sensors || observations.cols() != samples) {
        std::ostringstream msg;
        msg << "observations must be " << sensors << " x " << samples << ", got "
            << observations.rows() << " x " << observations.cols();
        throw ValidationError(msg.str());
    }
    return qr_.solve(vectorize(observations));
}

RecoveryResult LeastSquaresEstimator::recover(const Eigen::MatrixXd& observations,
                                              const Spectrum& spectrum) const {
    const Eigen::Index n = spectrum.size();
    if (op_.selection().total() != n) {
        throw ValidationError("spectrum size does not match the operator");
    }
    RecoveryResult result;
    result.spectral_estimate = solve(observations);
    result.residual_norm =
        (op_.matrix() * result.spectral_estimate - vectorize(observations)).norm();
    result.operator_condition = conditioning_.condition_number;
    result.rank_status = {true, conditioning_.rank, conditioning_.cols};

    const Eigen::MatrixXd& u = spectrum.eigenvectors();
    switch (op_.kind()) {
        case OperatorKind::initial_only:
            result.initial_field = u * result.spectral_estimate;
            break;
        case OperatorKind::input_only:
            result.input = u * result.spectral_estimate;
            break;
        case OperatorKind::joint_bandlimited: {
            const int p = *op_.bandwidth();
            result.initial_field = u * result.spectral_estimate.head(n);
            result.input = u.leftCols(p) * result.spectral_estimate.tail(p);
            break;
        }
    }
    return result;
}

RecoveryResult recover_initial_field(const Eigen::MatrixXd& observations,
                                     const ObservationOperator& op, const Spectrum& spectrum) {
    require_kind(op, OperatorKind::initial_only);
    return LeastSquaresEstimator(op).recover(observations, spectrum);
}

RecoveryResult recover_external_input(const Eigen::MatrixXd& observations,
                                      const ObservationOperator& op, const Spectrum& spectrum) {
    require_kind(op, OperatorKind::input_only);
    return LeastSquaresEstimator(op).recover(observations, spectrum);
}

RecoveryResult recover_joint(const Eigen::MatrixXd& observations, const ObservationOperator& op,
                             const Spectrum& spectrum, int bandwidth) {
    require_kind(op, OperatorKind::joint_bandlimited);
    if (op.bandwidth() != bandwidth) {
        throw ValidationError("bandwidth does not match the joint operator");
    }
    return LeastSquaresEstimator(op).recover(observations, spectrum);
}

Identifiability identifiability_check(const ObservationOperator& op) {
    const ConditioningReport report = conditioning_report(op);
    Identifiability out;
    out.rank = report.rank;
    out.unknowns = report.cols;
    out.sigma_min = report.underdetermined() ? 0.0 : report.sigma_min;
    out.too_few_equations = report.underdetermined();
    out.identifiable = report.full_column_rank();
    if (!out.identifiable) {
        out.reason = out.too_few_equations
                         ? "K*T < M: " + describe_deficiency(report)
                         : describe_deficiency(report);
    }
    return out;
}

}  // namespace heatgraph
