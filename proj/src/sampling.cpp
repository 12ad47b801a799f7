#include "heatgraph/sampling.hpp"

#include "heatgraph/error.hpp"
#include "parallel.hpp"

#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

namespace heatgraph {

namespace {

// Entries of a unit-norm eigenvector column below this count as zero.
constexpr double kZeroColumnTolerance = 1e-14;

Eigen::MatrixXd kernel_matrix(const Spectrum& spectrum, const TimeGrid& grid,
                              Eigen::VectorXd (*weights)(const Spectrum&, double)) {
    Eigen::MatrixXd out(grid.count(), spectrum.size());
    for (int k = 0; k < grid.count(); ++k) out.row(k) = weights(spectrum, grid.time(k)).transpose();
    return out;
}

void require_compatible(const Spectrum& spectrum, const VertexSelection& selection) {
    if (selection.total() != spectrum.size()) {
        std::ostringstream msg;
        msg << "selection is over " << selection.total() << " vertices but the spectrum has "
            << spectrum.size();
        throw ValidationError(msg.str());
    }
}

Eigen::MatrixXd observed_eigenvectors(const Spectrum& spectrum, const VertexSelection& selection) {
    require_compatible(spectrum, selection);
    Eigen::MatrixXd rows = selection.select_rows(spectrum.eigenvectors());
    for (Eigen::Index col = 0; col < rows.cols(); ++col) {
        if (rows.col(col).cwiseAbs().maxCoeff() <= kZeroColumnTolerance) {
            std::ostringstream msg;
            msg << "eigenvector " << col + 1
                << " vanishes on every selected vertex; the operator cannot have full column rank";
            throw ValidationError(msg.str());
        }
    }
    return rows;
}

double rank_tolerance(Eigen::Index rows, Eigen::Index cols, double sigma_max) {
    return static_cast<double>(std::max(rows, cols)) * std::numeric_limits<double>::epsilon() *
           sigma_max;
}

}  // namespace

VertexSelection::VertexSelection(std::vector<int> indices, int total)
    : indices_(std::move(indices)), total_(total) {
    if (total_ < 1) throw ValidationError("selection needs a positive vertex count");
    if (indices_.empty()) throw ValidationError("selection must contain at least one vertex");
    std::sort(indices_.begin(), indices_.end());
    for (std::size_t r = 0; r < indices_.size(); ++r) {
        if (indices_[r] < 0 || indices_[r] >= total_) {
            throw ValidationError("selected vertex " + std::to_string(indices_[r] + 1) +
                                  " out of range [1, " + std::to_string(total_) + "]");
        }
        if (r > 0 && indices_[r] == indices_[r - 1]) {
            throw ValidationError("vertex " + std::to_string(indices_[r] + 1) +
                                  " selected more than once");
        }
    }
}

VertexSelection VertexSelection::all(int total) {
    std::vector<int> indices(static_cast<std::size_t>(std::max(total, 0)));
    std::iota(indices.begin(), indices.end(), 0);
    return VertexSelection(std::move(indices), total);
}

Eigen::MatrixXd VertexSelection::select_rows(const Eigen::MatrixXd& matrix) const {
    if (matrix.rows() != total_) {
        throw ValidationError("matrix row count does not match the selection's vertex count");
    }
    return matrix(indices_, Eigen::all);
}

Eigen::MatrixXd build_A(const Spectrum& spectrum, const TimeGrid& grid) {
    return kernel_matrix(spectrum, grid, &heat_kernel_weights);
}

Eigen::MatrixXd build_B(const Spectrum& spectrum, const TimeGrid& grid) {
    return kernel_matrix(spectrum, grid, &input_kernel_weights);
}

Eigen::MatrixXd khatri_rao(const Eigen::MatrixXd& a, const Eigen::MatrixXd& c) {
    if (a.cols() != c.cols()) {
        std::ostringstream msg;
        msg << "Khatri-Rao factors need equal column counts (" << a.cols() << " vs " << c.cols()
            << ")";
        throw ValidationError(msg.str());
    }
    const Eigen::Index block = c.rows();
    Eigen::MatrixXd out(a.rows() * block, a.cols());
    for (Eigen::Index k = 0; k < a.rows(); ++k) {
        out.middleRows(k * block, block) = c.array().rowwise() * a.row(k).array();
    }
    return out;
}

std::string_view to_string(OperatorKind kind) {
    switch (kind) {
        case OperatorKind::initial_only: return "initial_only";
        case OperatorKind::input_only: return "input_only";
        case OperatorKind::joint_bandlimited: return "joint_bandlimited";
    }
    return "unknown";
}

ObservationOperator::ObservationOperator(Eigen::MatrixXd matrix, OperatorKind kind, TimeGrid grid,
                                         VertexSelection selection,
                                         std::optional<int> bandwidth)
    : matrix_(std::move(matrix)),
      kind_(kind),
      grid_(std::move(grid)),
      selection_(std::move(selection)),
      bandwidth_(bandwidth) {
    const Eigen::Index n = selection_.total();
    if (matrix_.rows() != static_cast<Eigen::Index>(selection_.size()) * grid_.count()) {
        throw ValidationError("operator row count must equal K * T");
    }
    Eigen::Index expected_cols = n;
    if (kind_ == OperatorKind::joint_bandlimited) {
        if (!bandwidth_ || *bandwidth_ < 1 || *bandwidth_ > n) {
            throw ValidationError("joint operator needs a bandwidth P in [1, N]");
        }
        expected_cols = n + *bandwidth_;
    } else if (bandwidth_) {
        throw ValidationError("only joint operators carry a bandwidth");
    }
    if (matrix_.cols() != expected_cols) {
        std::ostringstream msg;
        msg << to_string(kind_) << " operator must have " << expected_cols << " columns, got "
            << matrix_.cols();
        throw ValidationError(msg.str());
    }
}

ObservationOperator build_case1_operator(const Spectrum& spectrum, const TimeGrid& grid,
                                         const VertexSelection& selection) {
    return ObservationOperator(
        khatri_rao(build_A(spectrum, grid), observed_eigenvectors(spectrum, selection)),
        OperatorKind::initial_only, grid, selection);
}

ObservationOperator build_case2_operator(const Spectrum& spectrum, const TimeGrid& grid,
                                         const VertexSelection& selection) {
    return ObservationOperator(
        khatri_rao(build_B(spectrum, grid), observed_eigenvectors(spectrum, selection)),
        OperatorKind::input_only, grid, selection);
}

ObservationOperator build_joint_operator(const Spectrum& spectrum, const TimeGrid& grid,
                                         const VertexSelection& selection, int bandwidth,
                                         JointOptions options) {
    const Eigen::Index n = spectrum.size();
    if (bandwidth < 1 || bandwidth > n) {
        std::ostringstream msg;
        msg << "bandwidth P = " << bandwidth << " outside [1, " << n << "]";
        throw ValidationError(msg.str());
    }
    const Eigen::Index equations = static_cast<Eigen::Index>(selection.size()) * grid.count();
    if (equations < n + bandwidth && !options.allow_underdetermined) {
        std::ostringstream msg;
        msg << "joint system has K*T = " << equations << " equations for N + P = "
            << n + bandwidth << " unknowns";
        throw InfeasibleError(msg.str());
    }
    const Eigen::MatrixXd observed = observed_eigenvectors(spectrum, selection);
    Eigen::MatrixXd matrix(equations, n + bandwidth);
    matrix.leftCols(n) = khatri_rao(build_A(spectrum, grid), observed);
    matrix.rightCols(bandwidth) =
        khatri_rao(build_B(spectrum, grid).leftCols(bandwidth), observed.leftCols(bandwidth));
    return ObservationOperator(std::move(matrix), OperatorKind::joint_bandlimited, grid, selection,
                               bandwidth);
}

ConditioningReport conditioning_report(const Eigen::MatrixXd& matrix) {
    ConditioningReport report;
    report.rows = matrix.rows();
    report.cols = matrix.cols();
    if (matrix.size() == 0) return report;
    Eigen::BDCSVD<Eigen::MatrixXd> svd(matrix);
    report.singular_values = svd.singularValues();
    report.sigma_max = report.singular_values(0);
    report.sigma_min = report.singular_values(report.singular_values.size() - 1);
    report.condition_number = report.sigma_min > 0.0
                                  ? report.sigma_max / report.sigma_min
                                  : std::numeric_limits<double>::infinity();
    report.rank_tolerance = rank_tolerance(report.rows, report.cols, report.sigma_max);
    report.rank = (report.singular_values.array() > report.rank_tolerance).count();
    return report;
}

ConditioningReport conditioning_report(const ObservationOperator& op) {
    return conditioning_report(op.matrix());
}

std::string_view to_string(SelectionObjective objective) {
    switch (objective) {
        case SelectionObjective::min_condition: return "min_condition";
        case SelectionObjective::max_min_singular: return "max_min_singular";
    }
    return "unknown";
}

SelectionObjective parse_selection_objective(std::string_view name) {
    if (name == "min_condition") return SelectionObjective::min_condition;
    if (name == "max_min_singular") return SelectionObjective::max_min_singular;
    throw ValidationError("unknown selection objective '" + std::string(name) + "'");
}

namespace {

// Candidates re-scored with an exact SVD after Gram-matrix screening.
constexpr std::size_t kRefinedCandidates = 8;

struct CandidateScore {
    bool full_rank = false;
    double value = -std::numeric_limits<double>::infinity();  // larger is better
    double sigma_min = 0.0;
    double condition_number = std::numeric_limits<double>::infinity();

    bool beats(const CandidateScore& other) const {
        if (full_rank != other.full_rank) return full_rank;
        return value > other.value;
    }
};

// `sigma` holds the min(rows, cols) leading singular values, any order.
CandidateScore score_from(const Eigen::VectorXd& sigma, Eigen::Index operator_rows,
                          Eigen::Index cols, SelectionObjective objective) {
    CandidateScore score;
    const double sigma_max = sigma.maxCoeff();
    score.sigma_min = sigma.minCoeff();
    score.full_rank = operator_rows >= cols &&
                      score.sigma_min > rank_tolerance(operator_rows, cols, sigma_max);
    if (score.full_rank) score.condition_number = sigma_max / score.sigma_min;
    score.value = (score.full_rank && objective == SelectionObjective::min_condition)
                      ? -score.condition_number
                      : score.sigma_min;
    return score;
}

}  // namespace

GreedyTrace greedy_sensor_trace(const Spectrum& spectrum, const TimeGrid& grid, int count,
                                SelectionObjective objective) {
    const auto n = static_cast<int>(spectrum.size());
    if (count < 1 || count > n) {
        std::ostringstream msg;
        msg << "sensor count " << count << " outside [1, " << n << "]";
        throw ValidationError(msg.str());
    }
    const Eigen::MatrixXd a = build_A(spectrum, grid);
    const Eigen::MatrixXd a_gram = a.transpose() * a;
    const Eigen::MatrixXd& u = spectrum.eigenvectors();
    const Eigen::Index t = grid.count();

    // Vertex v contributes the block A diag(u_v) to the operator, whose Gram
    // matrix is (A^T A) .* (u_v u_v^T). Candidates are screened on the Gram
    // eigenvalues and the best few re-scored exactly. The exact score stacks
    // the vertex block under the R factor of the selected operator, which
    // has the same singular values as stacking it under the operator.
    Eigen::MatrixXd selected_gram = Eigen::MatrixXd::Zero(n, n);
    Eigen::MatrixXd r_factor(0, n);
    std::vector<bool> chosen(static_cast<std::size_t>(n), false);
    GreedyTrace trace{{}, {}, VertexSelection::all(n)};

    auto vertex_block = [&](int v) -> Eigen::MatrixXd {
        return a.array().rowwise() * u.row(v).array();
    };
    auto stacked_with = [&](int v) {
        Eigen::MatrixXd stacked(r_factor.rows() + t, n);
        stacked.topRows(r_factor.rows()) = r_factor;
        stacked.bottomRows(t) = vertex_block(v);
        return stacked;
    };

    for (int step = 0; step < count; ++step) {
        const Eigen::Index operator_rows = static_cast<Eigen::Index>(step + 1) * t;
        const Eigen::Index nonzero = std::min<Eigen::Index>(operator_rows, n);

        std::vector<CandidateScore> screened(static_cast<std::size_t>(n));
        detail::parallel_for(static_cast<std::size_t>(n), [&](std::size_t v) {
            if (chosen[v]) return;
            const Eigen::VectorXd uv = u.row(static_cast<Eigen::Index>(v)).transpose();
            const Eigen::MatrixXd gram =
                selected_gram + a_gram.cwiseProduct(uv * uv.transpose());
            Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(gram, Eigen::EigenvaluesOnly);
            const Eigen::VectorXd sigma =
                eig.eigenvalues().tail(nonzero).cwiseMax(0.0).cwiseSqrt();
            screened[v] = score_from(sigma, operator_rows, n, objective);
        });

        std::vector<int> candidates;
        for (int v = 0; v < n; ++v) {
            if (!chosen[static_cast<std::size_t>(v)]) candidates.push_back(v);
        }
        std::stable_sort(candidates.begin(), candidates.end(), [&](int lhs, int rhs) {
            return screened[static_cast<std::size_t>(lhs)].beats(
                screened[static_cast<std::size_t>(rhs)]);
        });
        candidates.resize(std::min(candidates.size(), kRefinedCandidates));
        std::sort(candidates.begin(), candidates.end());

        std::vector<CandidateScore> exact(candidates.size());
        detail::parallel_for(candidates.size(), [&](std::size_t c) {
            const Eigen::VectorXd sigma =
                Eigen::BDCSVD<Eigen::MatrixXd>(stacked_with(candidates[c])).singularValues();
            exact[c] = score_from(sigma, operator_rows, n, objective);
        });
        std::size_t best = 0;
        for (std::size_t c = 1; c < candidates.size(); ++c) {
            if (exact[c].beats(exact[best])) best = c;
        }

        const int vertex = candidates[best];
        chosen[static_cast<std::size_t>(vertex)] = true;
        trace.order.push_back(vertex);
        trace.scores.push_back(objective == SelectionObjective::min_condition
                                   ? exact[best].condition_number
                                   : exact[best].sigma_min);

        if (step + 1 < count) {
            const Eigen::VectorXd uv = u.row(vertex).transpose();
            selected_gram += a_gram.cwiseProduct(uv * uv.transpose());
            const Eigen::MatrixXd stacked = stacked_with(vertex);
            const Eigen::Index keep = std::min<Eigen::Index>(stacked.rows(), n);
            Eigen::HouseholderQR<Eigen::MatrixXd> qr(stacked);
            r_factor = qr.matrixQR().topRows(keep).triangularView<Eigen::Upper>();
        }
    }
    trace.selection = VertexSelection(trace.order, n);
    return trace;
}

VertexSelection greedy_sensor_selection(const Spectrum& spectrum, const TimeGrid& grid, int count,
                                        SelectionObjective objective) {
    return greedy_sensor_trace(spectrum, grid, count, objective).selection;
}

}  // namespace heatgraph
