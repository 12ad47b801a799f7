#pragma once

#include <Eigen/Dense>

#include <vector>

namespace heatgraph {

/// Undirected weighted edge. Indices are 0-based in memory; files use 1-based.
struct Edge {
    int i = 0;
    int j = 0;
    double weight = 1.0;

    friend bool operator==(const Edge&, const Edge&) = default;
};

/// Undirected graph on vertices 0..N-1 with nonnegative edge weights.
///
/// The constructor rejects self-loops, out-of-range endpoints, negative or
/// non-finite weights and repeated unordered pairs.
class Graph {
public:
    Graph(int vertex_count, std::vector<Edge> edges);

    int vertex_count() const noexcept { return vertex_count_; }
    const std::vector<Edge>& edges() const noexcept { return edges_; }

    bool is_connected() const;

    friend bool operator==(const Graph&, const Graph&) = default;

private:
    int vertex_count_;
    std::vector<Edge> edges_;
};

/// Dense symmetric graph operator with zero row sums.
class Laplacian {
public:
    /// Validates exact symmetry and zero row sums (to 1e-12 of the largest entry).
    static Laplacian from_matrix(Eigen::MatrixXd matrix);

    const Eigen::MatrixXd& matrix() const noexcept { return matrix_; }
    Eigen::Index order() const noexcept { return matrix_.rows(); }

    /// Number of connected components of the off-diagonal nonzero pattern.
    int component_count() const;

private:
    explicit Laplacian(Eigen::MatrixXd matrix) : matrix_(std::move(matrix)) {}

    Eigen::MatrixXd matrix_;
};

/// Combinatorial Laplacian D - W.
Laplacian build_laplacian(const Graph& graph);

/// Eigenpairs of a Laplacian, eigenvalues ascending.
///
/// Column n of eigenvectors() pairs with eigenvalues()(n). Each eigenvector is
/// signed so that its entry of largest magnitude is positive (first such
/// index on ties). Eigenvalues of the null space are clamped to exactly 0.
class Spectrum {
public:
    const Eigen::VectorXd& eigenvalues() const noexcept { return eigenvalues_; }
    const Eigen::MatrixXd& eigenvectors() const noexcept { return eigenvectors_; }
    Eigen::Index size() const noexcept { return eigenvalues_.size(); }

    /// First `count` eigenvectors (the lowest graph frequencies).
    Eigen::MatrixXd leading_eigenvectors(Eigen::Index count) const;

    /// True when consecutive eigenvalues differ by more than
    /// relative_tolerance * max|lambda|.
    bool has_distinct_eigenvalues(double relative_tolerance = 1e-9) const;

private:
    friend Spectrum eigendecompose(const Laplacian& laplacian);
    Spectrum(Eigen::VectorXd values, Eigen::MatrixXd vectors)
        : eigenvalues_(std::move(values)), eigenvectors_(std::move(vectors)) {}

    Eigen::VectorXd eigenvalues_;
    Eigen::MatrixXd eigenvectors_;
};

/// Eigenvalues more negative than this (scaled by max(1, max|L|)) mean the
/// operator is not positive semidefinite.
inline constexpr double kEigenvalueTolerance = 1e-10;

Spectrum eigendecompose(const Laplacian& laplacian);

enum class SignalDomain { vertex, frequency };

/// Real graph signal tagged with the domain its coefficients live in.
class GraphSignal {
public:
    GraphSignal(Eigen::VectorXd values, SignalDomain domain)
        : values_(std::move(values)), domain_(domain) {}

    static GraphSignal vertex(Eigen::VectorXd values) {
        return {std::move(values), SignalDomain::vertex};
    }
    static GraphSignal frequency(Eigen::VectorXd values) {
        return {std::move(values), SignalDomain::frequency};
    }

    const Eigen::VectorXd& values() const noexcept { return values_; }
    SignalDomain domain() const noexcept { return domain_; }
    Eigen::Index size() const noexcept { return values_.size(); }

private:
    Eigen::VectorXd values_;
    SignalDomain domain_;
};

/// Graph Fourier transform U^T x.
GraphSignal gft(const Spectrum& spectrum, const GraphSignal& signal);

/// Inverse transform U x_f.
GraphSignal igft(const Spectrum& spectrum, const GraphSignal& coefficients);

/// Shift-invariant filter U diag(h_f) U^T x.
GraphSignal apply_graph_filter(const Spectrum& spectrum,
                               const Eigen::VectorXd& frequency_response,
                               const GraphSignal& signal);

}  // namespace heatgraph
