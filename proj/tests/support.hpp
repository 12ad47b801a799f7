#pragma once

// Test-only generators and independent oracles. Nothing here calls into the
// code paths it is used to check.

#include "heatgraph/graph.hpp"
#include "heatgraph/mesh.hpp"

#include <Eigen/Dense>
#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>
#include <random>
#include <set>
#include <vector>

namespace heatgraph::testing {

inline double relative_error(const Eigen::MatrixXd& estimate, const Eigen::MatrixXd& truth) {
    const double norm = truth.norm();
    return norm > 0.0 ? (estimate - truth).norm() / norm : (estimate - truth).norm();
}

/// Random connected graph: random spanning tree plus extra edges.
inline Graph random_connected_graph(int n, std::mt19937_64& rng, double extra_probability = 0.3) {
    std::uniform_real_distribution<double> weight(0.5, 2.0);
    std::uniform_real_distribution<double> coin(0.0, 1.0);
    std::vector<Edge> edges;
    std::set<std::pair<int, int>> used;
    for (int v = 1; v < n; ++v) {
        const int parent = std::uniform_int_distribution<int>(0, v - 1)(rng);
        edges.push_back({parent, v, weight(rng)});
        used.emplace(parent, v);
    }
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            if (!used.count({i, j}) && coin(rng) < extra_probability) {
                edges.push_back({i, j, weight(rng)});
            }
        }
    }
    return Graph(n, std::move(edges));
}

inline Graph path_graph(int n) {
    std::vector<Edge> edges;
    for (int v = 0; v + 1 < n; ++v) edges.push_back({v, v + 1, 1.0});
    return Graph(n, std::move(edges));
}

inline Graph cycle_graph(int n) {
    std::vector<Edge> edges;
    for (int v = 0; v < n; ++v) edges.push_back({v, (v + 1) % n, 1.0});
    return Graph(n, std::move(edges));
}

inline Eigen::VectorXd random_vector(Eigen::Index n, std::mt19937_64& rng) {
    std::normal_distribution<double> normal(0.0, 1.0);
    Eigen::VectorXd out(n);
    for (Eigen::Index i = 0; i < n; ++i) out(i) = normal(rng);
    return out;
}

inline Eigen::MatrixXd random_matrix(Eigen::Index rows, Eigen::Index cols, std::mt19937_64& rng) {
    std::normal_distribution<double> normal(0.0, 1.0);
    Eigen::MatrixXd out(rows, cols);
    for (Eigen::Index i = 0; i < out.size(); ++i) out.data()[i] = normal(rng);
    return out;
}

/// Jittered grid on the unit square with random cell diagonals.
inline TriangleMesh random_mesh(std::mt19937_64& rng) {
    const int nx = std::uniform_int_distribution<int>(2, 6)(rng);
    const int ny = std::uniform_int_distribution<int>(2, 6)(rng);
    std::uniform_real_distribution<double> jitter(-0.2, 0.2);
    std::bernoulli_distribution flip(0.5);
    std::vector<Point2> vertices;
    for (int r = 0; r <= ny; ++r) {
        for (int c = 0; c <= nx; ++c) {
            Point2 p(static_cast<double>(c) / nx, static_cast<double>(r) / ny);
            if (c > 0 && c < nx) p.x() += jitter(rng) / nx;
            if (r > 0 && r < ny) p.y() += jitter(rng) / ny;
            vertices.push_back(p);
        }
    }
    std::vector<Triangle> triangles;
    for (int r = 0; r < ny; ++r) {
        for (int c = 0; c < nx; ++c) {
            const int p00 = r * (nx + 1) + c;
            const int p10 = p00 + 1;
            const int p01 = p00 + nx + 1;
            const int p11 = p01 + 1;
            if (flip(rng)) {
                triangles.push_back({p00, p10, p11});
                triangles.push_back({p00, p11, p01});
            } else {
                triangles.push_back({p00, p10, p01});
                triangles.push_back({p10, p11, p01});
            }
        }
    }
    return TriangleMesh(std::move(vertices), std::move(triangles));
}

/// Determinant by permutation expansion (Leibniz formula).
inline double leibniz_determinant(const Eigen::MatrixXd& m) {
    const int n = static_cast<int>(m.rows());
    std::vector<int> perm(static_cast<std::size_t>(n));
    std::iota(perm.begin(), perm.end(), 0);
    double total = 0.0;
    do {
        int inversions = 0;
        for (int i = 0; i < n; ++i) {
            for (int j = i + 1; j < n; ++j) {
                if (perm[static_cast<std::size_t>(i)] > perm[static_cast<std::size_t>(j)]) {
                    ++inversions;
                }
            }
        }
        double term = inversions % 2 == 0 ? 1.0 : -1.0;
        for (int i = 0; i < n; ++i) term *= m(i, perm[static_cast<std::size_t>(i)]);
        total += term;
    } while (std::next_permutation(perm.begin(), perm.end()));
    return total;
}

/// Adaptive Simpson quadrature.
inline double adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                               double tolerance, int depth = 50) {
    auto simpson = [&](double lo, double hi) {
        return (hi - lo) / 6.0 * (f(lo) + 4.0 * f(0.5 * (lo + hi)) + f(hi));
    };
    std::function<double(double, double, double, double, int)> recurse =
        [&](double lo, double hi, double whole, double tol, int level) {
            const double mid = 0.5 * (lo + hi);
            const double left = simpson(lo, mid);
            const double right = simpson(mid, hi);
            if (level <= 0 || std::abs(left + right - whole) <= 15.0 * tol) {
                return left + right + (left + right - whole) / 15.0;
            }
            return recurse(lo, mid, left, tol / 2.0, level - 1) +
                   recurse(mid, hi, right, tol / 2.0, level - 1);
        };
    return recurse(a, b, simpson(a, b), tolerance, depth);
}

/// Explicit Euler integration of dx/dt = -L x + q from 0 to t.
inline Eigen::VectorXd euler_heat(const Eigen::MatrixXd& laplacian, const Eigen::VectorXd& x0,
                                  const Eigen::VectorXd& q, double t, double step) {
    const long steps = std::lround(t / step);
    const double h = t / static_cast<double>(steps);
    Eigen::VectorXd x = x0;
    for (long s = 0; s < steps; ++s) x += h * (-laplacian * x + q);
    return x;
}

/// Observation operator assembled entry by entry from the kernel formulas:
/// row (k, r), column n = kernel(lambda_n, t_k) * U(selected[r], n).
inline Eigen::MatrixXd brute_force_operator(const Eigen::VectorXd& lambda,
                                            const Eigen::MatrixXd& u,
                                            const std::vector<int>& selected,
                                            const std::vector<double>& times,
                                            const std::function<double(double, double)>& kernel) {
    const auto sensors = static_cast<Eigen::Index>(selected.size());
    Eigen::MatrixXd out(sensors * static_cast<Eigen::Index>(times.size()), lambda.size());
    for (std::size_t k = 0; k < times.size(); ++k) {
        for (Eigen::Index r = 0; r < sensors; ++r) {
            for (Eigen::Index n = 0; n < lambda.size(); ++n) {
                out(static_cast<Eigen::Index>(k) * sensors + r, n) =
                    kernel(lambda(n), times[k]) * u(selected[static_cast<std::size_t>(r)], n);
            }
        }
    }
    return out;
}

inline double heat_kernel_formula(double lambda, double t) { return std::exp(-lambda * t); }

inline double input_kernel_formula(double lambda, double t) {
    return lambda == 0.0 ? t : (1.0 - std::exp(-lambda * t)) / lambda;
}

/// Numerical rank from a full SVD with tolerance max(m, n) * eps * sigma_max.
inline Eigen::Index svd_rank(const Eigen::MatrixXd& m) {
    const Eigen::VectorXd sigma = Eigen::JacobiSVD<Eigen::MatrixXd>(m).singularValues();
    if (sigma.size() == 0) return 0;
    const double tol = static_cast<double>(std::max(m.rows(), m.cols())) *
                       std::numeric_limits<double>::epsilon() * sigma(0);
    return (sigma.array() > tol).count();
}

}  // namespace heatgraph::testing
