#ifndef IRFKIT_DESIGN_HPP
#define IRFKIT_DESIGN_HPP

#include <Eigen/Dense>
#include <optional>
#include <string>
#include <vector>

#include "irfkit/series.hpp"

namespace irfkit {

/// One regressor request: `series` shifted by `shift` periods
/// (negative = lag, positive = lead). Column label is "name[shift]"
/// unless overridden.
struct Regressor {
    Series series;
    int shift = 0;
    std::optional<std::string> label;
};

/// Row-aligned regressor matrix plus dependent vector.
///
/// Rows correspond to consecutive original time indices
/// t = start .. start + rows - 1. The dependent column is the target
/// shifted forward by `horizon`; regressor columns are shifted by their
/// specs. Head rows lost = max lag; tail rows lost = horizon + max lead,
/// so designs with and without leads at the same horizon line up after
/// trim_common_sample.
class DesignMatrix {
public:
    DesignMatrix(std::vector<std::string> labels, Eigen::MatrixXd X, Eigen::VectorXd y,
                 std::string target_label, long start, long source_length, int head_dropped,
                 int tail_dropped);

    const std::vector<std::string>& labels() const { return labels_; }
    const Eigen::MatrixXd& X() const { return X_; }
    const Eigen::VectorXd& y() const { return y_; }
    const std::string& target_label() const { return target_label_; }

    long rows() const { return X_.rows(); }
    long cols() const { return X_.cols(); }
    long start() const { return start_; }
    long source_length() const { return source_length_; }
    int rows_dropped_head() const { return head_dropped_; }
    int rows_dropped_tail() const { return tail_dropped_; }

    long column(const std::string& label) const;  // -1 when absent

    /// Restriction to original-time rows [first, first + count).
    DesignMatrix restricted(long first, long count) const;

private:
    std::vector<std::string> labels_;
    Eigen::MatrixXd X_;
    Eigen::VectorXd y_;
    std::string target_label_;
    long start_;
    long source_length_;
    int head_dropped_;
    int tail_dropped_;
};

/// Shift label in the fixed "name[shift]" grammar: x[0], x[-2], x[+3].
std::string shift_label(const std::string& name, int shift);

/// Assembles the regression for one projection horizon. `extra_tail_drop`
/// removes additional trailing rows (used to keep lead-free designs on the
/// same sample as lead-augmented ones).
DesignMatrix build_design(const Series& target, int horizon, const std::vector<Regressor>& regressors,
                          bool include_intercept, int extra_tail_drop = 0);

/// Restricts every design to the common intersection of original-time rows.
std::vector<DesignMatrix> trim_common_sample(const std::vector<DesignMatrix>& designs);

}  // namespace irfkit

#endif
