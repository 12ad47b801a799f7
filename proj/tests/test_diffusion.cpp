#include "heatgraph/diffusion.hpp"
#include "heatgraph/error.hpp"
#include "support.hpp"

#include <doctest.h>

using namespace heatgraph;
using namespace heatgraph::testing;

namespace {

Spectrum two_vertex_spectrum() { return eigendecompose(build_laplacian(Graph(2, {{0, 1, 1.0}}))); }

}  // namespace

TEST_SUITE("diffusion") {

TEST_CASE("time grid conventions") {
    const TimeGrid from_zero(0.5, 3, 0);
    CHECK(from_zero.times() == std::vector<double>{0.0, 0.5, 1.0});
    const TimeGrid from_delta(0.5, 3, 1);
    CHECK(from_delta.times() == std::vector<double>{0.5, 1.0, 1.5});
    CHECK(TimeGrid(0.5, 3).start_index() == 1);
    CHECK_THROWS_AS(TimeGrid(0.0, 3), ValidationError);
    CHECK_THROWS_AS(TimeGrid(-1.0, 3), ValidationError);
    CHECK_THROWS_AS(TimeGrid(0.1, 0), ValidationError);
    CHECK_THROWS_AS(TimeGrid(0.1, 3, 2), ValidationError);
}

TEST_CASE("heat kernel weights") {
    const Spectrum s = two_vertex_spectrum();
    CHECK(heat_kernel_weights(s, 0.0) == Eigen::Vector2d(1.0, 1.0));
    const Eigen::VectorXd a = heat_kernel_weights(s, 0.5);
    CHECK(a(0) == 1.0);
    CHECK(a(1) == doctest::Approx(std::exp(-1.0)).epsilon(1e-15));
    CHECK_THROWS_AS(heat_kernel_weights(s, -0.1), ValidationError);
}

TEST_CASE("input kernel special values") {
    for (double t : {0.0, 1e-9, 0.1, 1.0, 7.5, 1e3}) CHECK(input_kernel(0.0, t) == t);
    for (double lambda : {0.0, 1e-12, 1.0, 50.0}) CHECK(input_kernel(lambda, 0.0) == 0.0);
    CHECK(input_kernel(3.0, 0.7) ==
          doctest::Approx(adaptive_simpson([](double s) { return std::exp(-3.0 * s); }, 0.0, 0.7,
                                           1e-14))
              .epsilon(1e-12));
    CHECK_THROWS_AS(input_kernel(1.0, -1.0), ValidationError);
}

TEST_CASE("input kernel is stable for tiny eigenvalues") {
    for (double lambda : {1e-14, 1e-10, 1e-7}) {
        const double t = 1.0;
        const double f = input_kernel(lambda, t);
        CHECK(std::abs(f - t) <= t * t * lambda);
        CHECK(f <= t);
        CHECK(f > 0.0);
    }
}

TEST_CASE("input kernel weights follow the spectrum") {
    const Spectrum s = two_vertex_spectrum();
    const Eigen::VectorXd b = input_kernel_weights(s, 0.5);
    CHECK(b(0) == 0.5);
    CHECK(b(1) == doctest::Approx((1.0 - std::exp(-1.0)) / 2.0).epsilon(1e-15));
}

TEST_CASE("kernel invariants") {
    std::mt19937_64 rng(7);
    const Spectrum s = eigendecompose(build_laplacian(random_connected_graph(15, rng)));
    for (double t : {0.0, 0.01, 0.3, 2.0, 40.0}) {
        const Eigen::VectorXd a = heat_kernel_weights(s, t);
        const Eigen::VectorXd b = input_kernel_weights(s, t);
        CHECK(a.maxCoeff() <= 1.0);
        CHECK(a.minCoeff() >= 0.0);
        CHECK(b.minCoeff() >= 0.0);
        CHECK(b.maxCoeff() <= t);
    }
}

TEST_CASE("field at t = 0 is the initial field") {
    std::mt19937_64 rng(8);
    const Spectrum s = eigendecompose(build_laplacian(random_connected_graph(9, rng)));
    const SourceConfig sources{random_vector(9, rng), random_vector(9, rng)};
    CHECK(field_at(s, sources, 0.0) == sources.initial_field);
}

TEST_CASE("field without input relaxes to the mean") {
    std::mt19937_64 rng(9);
    const Spectrum s = eigendecompose(build_laplacian(random_connected_graph(10, rng)));
    const Eigen::VectorXd x0 = random_vector(10, rng);
    const Eigen::VectorXd late = field_at(s, {x0, Eigen::VectorXd::Zero(10)}, 500.0);
    CHECK((late.array() - x0.mean()).abs().maxCoeff() < 1e-10);
}

TEST_CASE("field matches explicit Euler integration") {
    std::mt19937_64 rng(10);
    for (int trial = 0; trial < 3; ++trial) {
        const int n = 6;
        const Laplacian l = build_laplacian(random_connected_graph(n, rng));
        const Spectrum s = eigendecompose(l);
        const SourceConfig sources{random_vector(n, rng), random_vector(n, rng)};
        const double t = 0.3;
        const Eigen::VectorXd reference = euler_heat(l.matrix(), sources.initial_field,
                                                     sources.input, t, 1e-5);
        CHECK(relative_error(field_at(s, sources, t), reference) <= 1e-4);
    }
}

TEST_CASE("simulate_field columns are field snapshots") {
    std::mt19937_64 rng(12);
    const Spectrum s = eigendecompose(build_laplacian(random_connected_graph(7, rng)));
    const SourceConfig sources{random_vector(7, rng), random_vector(7, rng)};
    const TimeGrid grid(0.2, 5, 0);
    const Eigen::MatrixXd x = simulate_field(s, sources, grid);
    REQUIRE(x.rows() == 7);
    REQUIRE(x.cols() == 5);
    for (int k = 0; k < grid.count(); ++k) CHECK(x.col(k) == field_at(s, sources, grid.time(k)));
    CHECK(simulate_field(s, sources, TimeGrid(0.2, 1, 0)).col(0) == sources.initial_field);
}

TEST_CASE("semigroup property of the homogeneous flow") {
    std::mt19937_64 rng(13);
    const Spectrum s = eigendecompose(build_laplacian(random_connected_graph(11, rng)));
    const Eigen::VectorXd x0 = random_vector(11, rng);
    const Eigen::VectorXd zero = Eigen::VectorXd::Zero(11);
    const double t1 = 0.37;
    const double t2 = 1.21;
    const Eigen::VectorXd direct = field_at(s, {x0, zero}, t1 + t2);
    const Eigen::VectorXd staged = field_at(s, {field_at(s, {x0, zero}, t1), zero}, t2);
    CHECK(relative_error(staged, direct) <= 1e-10);
}

TEST_CASE("energy never increases without input") {
    std::mt19937_64 rng(14);
    for (int trial = 0; trial < 10; ++trial) {
        const int n = 4 + trial;
        const Spectrum s = eigendecompose(build_laplacian(random_connected_graph(n, rng)));
        const Eigen::MatrixXd x =
            simulate_field(s, {random_vector(n, rng), Eigen::VectorXd::Zero(n)}, TimeGrid(0.1, 30, 0));
        for (Eigen::Index k = 1; k < x.cols(); ++k) {
            CHECK(x.col(k).norm() <= x.col(k - 1).norm() * (1.0 + 1e-12));
        }
    }
}

TEST_CASE("dimension checks") {
    const Spectrum s = two_vertex_spectrum();
    CHECK_THROWS_AS(field_at(s, SourceConfig::zero(3), 1.0), ValidationError);
    CHECK_THROWS_AS(field_at(s, SourceConfig::zero(2), -1.0), ValidationError);
}

}
