#include "heatgraph/diffusion.hpp"

#include "heatgraph/error.hpp"

#include <cmath>
#include <sstream>

namespace heatgraph {

namespace {

void require_time(double t) {
    if (!(t >= 0.0) || !std::isfinite(t)) {
        std::ostringstream msg;
        msg << "time must be finite and nonnegative, got " << t;
        throw ValidationError(msg.str());
    }
}

// (1 - e^{-z}) / z, accurate for small |z|.
double relative_input_kernel(double z) {
    if (std::abs(z) < 1e-4) {
        return 1.0 - z / 2.0 + z * z / 6.0 - z * z * z / 24.0;
    }
    return -std::expm1(-z) / z;
}

}  // namespace

TimeGrid::TimeGrid(double delta, int count, int start_index)
    : delta_(delta), count_(count), start_index_(start_index) {
    if (!(delta_ > 0.0) || !std::isfinite(delta_)) {
        throw ValidationError("time step must be positive");
    }
    if (count_ < 1) {
        throw ValidationError("time grid needs at least one sample");
    }
    if (start_index_ != 0 && start_index_ != 1) {
        throw ValidationError("time grid start index must be 0 or 1");
    }
}

std::vector<double> TimeGrid::times() const {
    std::vector<double> out(static_cast<std::size_t>(count_));
    for (int k = 0; k < count_; ++k) out[static_cast<std::size_t>(k)] = time(k);
    return out;
}

double input_kernel(double lambda, double t) {
    require_time(t);
    if (lambda == 0.0 || t == 0.0) return t;
    return t * relative_input_kernel(lambda * t);
}

Eigen::VectorXd heat_kernel_weights(const Spectrum& spectrum, double t) {
    require_time(t);
    return (-t * spectrum.eigenvalues().array()).exp().matrix();
}

Eigen::VectorXd input_kernel_weights(const Spectrum& spectrum, double t) {
    require_time(t);
    const Eigen::VectorXd& lambda = spectrum.eigenvalues();
    Eigen::VectorXd out(lambda.size());
    for (Eigen::Index n = 0; n < lambda.size(); ++n) out(n) = input_kernel(lambda(n), t);
    return out;
}

Eigen::VectorXd field_at(const Spectrum& spectrum, const SourceConfig& sources, double t) {
    const Eigen::Index n = spectrum.size();
    if (sources.initial_field.size() != n || sources.input.size() != n) {
        std::ostringstream msg;
        msg << "source vectors must have length " << n;
        throw ValidationError(msg.str());
    }
    require_time(t);
    if (t == 0.0) return sources.initial_field;
    const Eigen::MatrixXd& u = spectrum.eigenvectors();
    const Eigen::VectorXd initial_spectral = u.transpose() * sources.initial_field;
    const Eigen::VectorXd input_spectral = u.transpose() * sources.input;
    const Eigen::VectorXd mixed =
        initial_spectral.cwiseProduct(heat_kernel_weights(spectrum, t)) +
        input_spectral.cwiseProduct(input_kernel_weights(spectrum, t));
    return u * mixed;
}

Eigen::MatrixXd simulate_field(const Spectrum& spectrum, const SourceConfig& sources,
                               const TimeGrid& grid) {
    Eigen::MatrixXd data(spectrum.size(), grid.count());
    for (int k = 0; k < grid.count(); ++k) data.col(k) = field_at(spectrum, sources, grid.time(k));
    return data;
}

}  // namespace heatgraph
