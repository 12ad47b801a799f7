#pragma once

#include "heatgraph/diffusion.hpp"
#include "heatgraph/graph.hpp"

#include <Eigen/Dense>

#include <optional>
#include <string_view>
#include <vector>

namespace heatgraph {

/// Sorted set of K observed vertices out of N; acts as the K x N selection
/// matrix whose row r picks vertex indices()[r].
class VertexSelection {
public:
    /// Indices are 0-based and may come in any order; duplicates are rejected.
    VertexSelection(std::vector<int> indices, int total);

    static VertexSelection all(int total);

    const std::vector<int>& indices() const noexcept { return indices_; }
    int size() const noexcept { return static_cast<int>(indices_.size()); }
    int total() const noexcept { return total_; }

    /// Rows of `matrix` at the selected vertices.
    Eigen::MatrixXd select_rows(const Eigen::MatrixXd& matrix) const;

    friend bool operator==(const VertexSelection&, const VertexSelection&) = default;

private:
    std::vector<int> indices_;
    int total_;
};

/// T x N matrix with row k equal to a(t_k)^T.
Eigen::MatrixXd build_A(const Spectrum& spectrum, const TimeGrid& grid);

/// T x N matrix with row k equal to b(t_k)^T.
Eigen::MatrixXd build_B(const Spectrum& spectrum, const TimeGrid& grid);

/// Column-wise Kronecker product of a (T x M) and c (K x M).
///
/// Row k * K + r holds a(k, :) .* c(r, :), so the K rows of time sample k
/// form one contiguous block. With this ordering
/// vec(c * diag(b) * a^T) = khatri_rao(a, c) * b, where vec stacks columns.
Eigen::MatrixXd khatri_rao(const Eigen::MatrixXd& a, const Eigen::MatrixXd& c);

enum class OperatorKind { initial_only, input_only, joint_bandlimited };

std::string_view to_string(OperatorKind kind);

/// Linear map from unknown spectral coefficients to vec(Y), Y = Phi X (K x T).
///
/// Columns: initial_only -> x_f(0) (N); input_only -> q_f (N);
/// joint_bandlimited -> [x_f(0); q_f,P] (N + P).
class ObservationOperator {
public:
    /// Validates rows == K * T and the column count implied by `kind`.
    ObservationOperator(Eigen::MatrixXd matrix, OperatorKind kind, TimeGrid grid,
                        VertexSelection selection, std::optional<int> bandwidth = std::nullopt);

    const Eigen::MatrixXd& matrix() const noexcept { return matrix_; }
    OperatorKind kind() const noexcept { return kind_; }
    const TimeGrid& grid() const noexcept { return grid_; }
    const VertexSelection& selection() const noexcept { return selection_; }
    /// P for joint operators.
    std::optional<int> bandwidth() const noexcept { return bandwidth_; }

    Eigen::Index rows() const noexcept { return matrix_.rows(); }
    Eigen::Index cols() const noexcept { return matrix_.cols(); }

private:
    Eigen::MatrixXd matrix_;
    OperatorKind kind_;
    TimeGrid grid_;
    VertexSelection selection_;
    std::optional<int> bandwidth_;
};

/// A o (Phi U). Throws ValidationError if Phi U has an all-zero column.
ObservationOperator build_case1_operator(const Spectrum& spectrum, const TimeGrid& grid,
                                         const VertexSelection& selection);

/// B o (Phi U).
ObservationOperator build_case2_operator(const Spectrum& spectrum, const TimeGrid& grid,
                                         const VertexSelection& selection);

struct JointOptions {
    /// Build the operator even when K*T < N + P instead of throwing.
    bool allow_underdetermined = false;
};

/// [A o (Phi U) | (B o (Phi U)) U^T U_P]. Since U^T U_P = [I_P; 0] the right
/// block is the first P columns of B o (Phi U). P = N gives the unreduced
/// system. Throws InfeasibleError when K*T < N + P unless allowed.
ObservationOperator build_joint_operator(const Spectrum& spectrum, const TimeGrid& grid,
                                         const VertexSelection& selection, int bandwidth,
                                         JointOptions options = {});

/// Singular-value diagnostics of a (possibly rectangular) matrix.
struct ConditioningReport {
    Eigen::VectorXd singular_values;  // descending, min(rows, cols) entries
    double sigma_max = 0.0;
    double sigma_min = 0.0;           // smallest of singular_values
    double condition_number = 0.0;    // sigma_max / sigma_min, inf if sigma_min == 0
    double rank_tolerance = 0.0;      // max(rows, cols) * eps * sigma_max
    Eigen::Index rank = 0;
    Eigen::Index rows = 0;
    Eigen::Index cols = 0;

    bool full_column_rank() const noexcept { return rank == cols; }
    bool underdetermined() const noexcept { return rows < cols; }
};

ConditioningReport conditioning_report(const Eigen::MatrixXd& matrix);
ConditioningReport conditioning_report(const ObservationOperator& op);

enum class SelectionObjective { min_condition, max_min_singular };

std::string_view to_string(SelectionObjective objective);
SelectionObjective parse_selection_objective(std::string_view name);

struct GreedyTrace {
    std::vector<int> order;      // vertices in the order they were added
    std::vector<double> scores;  // objective value after each addition
    VertexSelection selection;
};

/// Greedy forward sensor selection on the initial-field operator.
///
/// Each step adds the vertex that maximises the smallest singular value
/// (max_min_singular) or minimises the condition number (min_condition) of
/// A o (Phi U). Until a candidate reaches full column rank, both objectives
/// rank candidates by their smallest singular value, and full-rank candidates
/// always beat rank-deficient ones. Ties go to the lowest vertex index.
GreedyTrace greedy_sensor_trace(const Spectrum& spectrum, const TimeGrid& grid, int count,
                                SelectionObjective objective =
                                    SelectionObjective::max_min_singular);

VertexSelection greedy_sensor_selection(const Spectrum& spectrum, const TimeGrid& grid,
                                        int count,
                                        SelectionObjective objective =
                                            SelectionObjective::max_min_singular);

}  // namespace heatgraph
