#include "heatgraph/graph.hpp"

#include "heatgraph/error.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <sstream>
#include <utility>

namespace heatgraph {

namespace {

// Union-find over vertex indices, used for connectivity checks.
class DisjointSets {
public:
    explicit DisjointSets(int n) : parent_(static_cast<std::size_t>(n)) {
        std::iota(parent_.begin(), parent_.end(), 0);
    }

    int find(int v) {
        while (parent_[v] != v) {
            parent_[v] = parent_[parent_[v]];
            v = parent_[v];
        }
        return v;
    }

    void unite(int a, int b) { parent_[find(a)] = find(b); }

    int count() {
        int roots = 0;
        for (int v = 0; v < static_cast<int>(parent_.size()); ++v) {
            if (find(v) == v) ++roots;
        }
        return roots;
    }

private:
    std::vector<int> parent_;
};

}  // namespace

Graph::Graph(int vertex_count, std::vector<Edge> edges)
    : vertex_count_(vertex_count), edges_(std::move(edges)) {
    if (vertex_count_ < 1) {
        throw ValidationError("graph must have at least one vertex");
    }
    std::set<std::pair<int, int>> seen;
    for (std::size_t e = 0; e < edges_.size(); ++e) {
        const Edge& edge = edges_[e];
        std::ostringstream where;
        where << "edge " << e + 1 << " (" << edge.i + 1 << ", " << edge.j + 1 << ")";
        if (edge.i < 0 || edge.i >= vertex_count_ || edge.j < 0 || edge.j >= vertex_count_) {
            throw ValidationError(where.str() + ": vertex index out of range");
        }
        if (edge.i == edge.j) {
            throw ValidationError(where.str() + ": self-loop");
        }
        if (!std::isfinite(edge.weight) || edge.weight < 0.0) {
            throw ValidationError(where.str() + ": weight must be finite and nonnegative");
        }
        if (!seen.emplace(std::minmax(edge.i, edge.j)).second) {
            throw ValidationError(where.str() + ": duplicate edge");
        }
    }
}

bool Graph::is_connected() const {
    DisjointSets sets(vertex_count_);
    for (const Edge& edge : edges_) {
        if (edge.weight > 0.0) sets.unite(edge.i, edge.j);
    }
    return sets.count() == 1;
}

Laplacian Laplacian::from_matrix(Eigen::MatrixXd matrix) {
    if (matrix.rows() != matrix.cols() || matrix.rows() == 0) {
        throw ValidationError("Laplacian must be a nonempty square matrix");
    }
    if (!matrix.allFinite()) {
        throw ValidationError("Laplacian has non-finite entries");
    }
    if (matrix != matrix.transpose()) {
        throw ValidationError("Laplacian is not exactly symmetric");
    }
    const double scale = matrix.cwiseAbs().maxCoeff();
    const double worst_row = matrix.rowwise().sum().cwiseAbs().maxCoeff();
    if (worst_row > 1e-12 * scale) {
        std::ostringstream msg;
        msg << "Laplacian row sums are not zero (max |row sum| = " << worst_row << ")";
        throw ValidationError(msg.str());
    }
    return Laplacian(std::move(matrix));
}

int Laplacian::component_count() const {
    const auto n = static_cast<int>(order());
    DisjointSets sets(n);
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            if (matrix_(i, j) != 0.0) sets.unite(i, j);
        }
    }
    return sets.count();
}

Laplacian build_laplacian(const Graph& graph) {
    const int n = graph.vertex_count();
    Eigen::MatrixXd matrix = Eigen::MatrixXd::Zero(n, n);
    for (const Edge& edge : graph.edges()) {
        matrix(edge.i, edge.j) = -edge.weight;
        matrix(edge.j, edge.i) = -edge.weight;
    }
    for (int i = 0; i < n; ++i) {
        matrix(i, i) = -matrix.row(i).sum();
    }
    return Laplacian::from_matrix(std::move(matrix));
}

Eigen::MatrixXd Spectrum::leading_eigenvectors(Eigen::Index count) const {
    if (count < 0 || count > size()) {
        throw ValidationError("requested eigenvector count out of range");
    }
    return eigenvectors_.leftCols(count);
}

bool Spectrum::has_distinct_eigenvalues(double relative_tolerance) const {
    if (size() < 2) return true;
    const double scale = eigenvalues_.cwiseAbs().maxCoeff();
    for (Eigen::Index n = 1; n < size(); ++n) {
        if (eigenvalues_(n) - eigenvalues_(n - 1) <= relative_tolerance * scale) return false;
    }
    return true;
}

Spectrum eigendecompose(const Laplacian& laplacian) {
    const Eigen::MatrixXd& matrix = laplacian.matrix();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(matrix);
    if (solver.info() != Eigen::Success) {
        const Eigen::MatrixXd& u = solver.eigenvectors();
        Eigen::MatrixXd projected = u.transpose() * matrix * u;
        projected.diagonal().setZero();
        std::ostringstream msg;
        msg << "symmetric eigensolver did not converge (order " << matrix.rows()
            << ", off-diagonal residual " << projected.cwiseAbs().maxCoeff() << ")";
        throw ConvergenceError(msg.str());
    }

    Eigen::VectorXd values = solver.eigenvalues();
    Eigen::MatrixXd vectors = solver.eigenvectors();

    const double tolerance = kEigenvalueTolerance * std::max(1.0, matrix.cwiseAbs().maxCoeff());
    if (values(0) < -tolerance) {
        std::ostringstream msg;
        msg << "Laplacian is not positive semidefinite (smallest eigenvalue " << values(0) << ")";
        throw ValidationError(msg.str());
    }
    // The null space has one dimension per connected component.
    const int null_dimension = laplacian.component_count();
    for (Eigen::Index n = 0; n < values.size(); ++n) {
        if (values(n) < 0.0 || (n < null_dimension && std::abs(values(n)) <= tolerance)) {
            values(n) = 0.0;
        }
    }

    // Magnitudes within a relative 1e-10 of the largest count as ties, so
    // rounding noise cannot move the pivot off the lowest index.
    for (Eigen::Index col = 0; col < vectors.cols(); ++col) {
        const double largest = vectors.col(col).cwiseAbs().maxCoeff();
        Eigen::Index pivot = 0;
        while (std::abs(vectors(pivot, col)) < largest * (1.0 - 1e-10)) ++pivot;
        if (vectors(pivot, col) < 0.0) vectors.col(col) = -vectors.col(col);
    }
    return Spectrum(std::move(values), std::move(vectors));
}

namespace {

void require_length(const Spectrum& spectrum, Eigen::Index length, const char* what) {
    if (length != spectrum.size()) {
        std::ostringstream msg;
        msg << what << " has length " << length << ", expected " << spectrum.size();
        throw ValidationError(msg.str());
    }
}

}  // namespace

GraphSignal gft(const Spectrum& spectrum, const GraphSignal& signal) {
    if (signal.domain() != SignalDomain::vertex) {
        throw ValidationError("gft expects a vertex-domain signal");
    }
    require_length(spectrum, signal.size(), "signal");
    return GraphSignal::frequency(spectrum.eigenvectors().transpose() * signal.values());
}

GraphSignal igft(const Spectrum& spectrum, const GraphSignal& coefficients) {
    if (coefficients.domain() != SignalDomain::frequency) {
        throw ValidationError("igft expects frequency-domain coefficients");
    }
    require_length(spectrum, coefficients.size(), "coefficient vector");
    return GraphSignal::vertex(spectrum.eigenvectors() * coefficients.values());
}

GraphSignal apply_graph_filter(const Spectrum& spectrum,
                               const Eigen::VectorXd& frequency_response,
                               const GraphSignal& signal) {
    require_length(spectrum, frequency_response.size(), "frequency response");
    const GraphSignal spectral = gft(spectrum, signal);
    return igft(spectrum,
                GraphSignal::frequency(frequency_response.cwiseProduct(spectral.values())));
}

}  // namespace heatgraph
