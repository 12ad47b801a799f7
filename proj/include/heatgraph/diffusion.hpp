#pragma once

#include "heatgraph/graph.hpp"

#include <Eigen/Dense>

#include <vector>

namespace heatgraph {

// Heat diffusion dx/dt = -L x + q, i.e. unit diffusivity with alpha = -1 in
// dx/dt = alpha * laplace(x) + q. All propagators are evaluated through the
// spectrum; the matrix exponential is never formed from L directly.

/// Initial field x(0) and constant external input q, both in the vertex domain.
struct SourceConfig {
    Eigen::VectorXd initial_field;
    Eigen::VectorXd input;

    static SourceConfig zero(Eigen::Index n) {
        return {Eigen::VectorXd::Zero(n), Eigen::VectorXd::Zero(n)};
    }
};

/// Uniform sample times t_k = delta * (start_index + k - 1), k = 1..count.
///
/// start_index = 1 gives t_k = delta * k; start_index = 0 starts at t = 0.
class TimeGrid {
public:
    TimeGrid(double delta, int count, int start_index = 1);

    double delta() const noexcept { return delta_; }
    int count() const noexcept { return count_; }
    int start_index() const noexcept { return start_index_; }

    /// k is 0-based here.
    double time(int k) const { return delta_ * (start_index_ + k); }
    std::vector<double> times() const;

    friend bool operator==(const TimeGrid&, const TimeGrid&) = default;

private:
    double delta_;
    int count_;
    int start_index_;
};

/// (1 - e^{-lambda t}) / lambda with the limits f_t(0) = t and f_0(lambda) = 0.
double input_kernel(double lambda, double t);

/// a(t): entries e^{-lambda_n t}.
Eigen::VectorXd heat_kernel_weights(const Spectrum& spectrum, double t);

/// b(t): entries f_t(lambda_n).
Eigen::VectorXd input_kernel_weights(const Spectrum& spectrum, double t);

/// x(t) = U diag(x_f(0)) a(t) + U diag(q_f) b(t).
Eigen::VectorXd field_at(const Spectrum& spectrum, const SourceConfig& sources, double t);

/// N x T data matrix whose column k is field_at(t_k).
Eigen::MatrixXd simulate_field(const Spectrum& spectrum, const SourceConfig& sources,
                               const TimeGrid& grid);

}  // namespace heatgraph
