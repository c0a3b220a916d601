#include "irfkit/design.hpp"

#include <algorithm>
#include <set>

#include "irfkit/errors.hpp"

namespace irfkit {

DesignMatrix::DesignMatrix(std::vector<std::string> labels, Eigen::MatrixXd X, Eigen::VectorXd y,
                           std::string target_label, long start, long source_length,
                           int head_dropped, int tail_dropped)
    : labels_(std::move(labels)),
      X_(std::move(X)),
      y_(std::move(y)),
      target_label_(std::move(target_label)),
      start_(start),
      source_length_(source_length),
      head_dropped_(head_dropped),
      tail_dropped_(tail_dropped) {}

long DesignMatrix::column(const std::string& label) const {
    auto it = std::find(labels_.begin(), labels_.end(), label);
    return it == labels_.end() ? -1 : static_cast<long>(it - labels_.begin());
}

DesignMatrix DesignMatrix::restricted(long first, long count) const {
    if (first < start_ || first + count > start_ + rows() || count <= 0)
        throw InsufficientSampleError("design restriction [" + std::to_string(first) + ", +" +
                                      std::to_string(count) + ") outside available rows");
    const long offset = first - start_;
    return DesignMatrix(labels_, X_.middleRows(offset, count), y_.segment(offset, count),
                        target_label_, first, source_length_,
                        static_cast<int>(first),
                        static_cast<int>(source_length_ - first - count));
}

std::string shift_label(const std::string& name, int shift) {
    if (shift == 0) return name + "[0]";
    if (shift > 0) return name + "[+" + std::to_string(shift) + "]";
    return name + "[" + std::to_string(shift) + "]";
}

DesignMatrix build_design(const Series& target, int horizon, const std::vector<Regressor>& regressors,
                          bool include_intercept, int extra_tail_drop) {
    if (horizon < 0) throw ParameterError("build_design: horizon must be >= 0");
    if (extra_tail_drop < 0) throw ParameterError("build_design: extra_tail_drop must be >= 0");
    const long T = static_cast<long>(target.size());

    int max_lag = 0, max_lead = 0;
    for (const auto& r : regressors) {
        if (static_cast<long>(r.series.size()) != T)
            throw StructuralError("build_design: regressor '" + r.series.name() +
                                  "' length differs from target");
        max_lag = std::max(max_lag, -std::min(0, r.shift));
        max_lead = std::max(max_lead, std::max(0, r.shift));
    }
    if (max_lag + max_lead + horizon >= T)
        throw InsufficientSampleError("build_design: shifts plus horizon exhaust the sample");

    const int head = max_lag;
    const int tail = horizon + max_lead + extra_tail_drop;
    const long n = T - head - tail;
    const long k = static_cast<long>(regressors.size()) + (include_intercept ? 1 : 0);
    if (n < 1)
        throw InsufficientSampleError("build_design: no usable rows after dropping " +
                                      std::to_string(head) + " head and " + std::to_string(tail) +
                                      " tail rows");

    std::vector<std::string> labels;
    labels.reserve(k);
    Eigen::MatrixXd X(n, k);
    long c = 0;
    if (include_intercept) {
        labels.emplace_back("const");
        X.col(c++).setOnes();
    }
    for (const auto& r : regressors) {
        labels.push_back(r.label ? *r.label : shift_label(r.series.name(), r.shift));
        const auto& v = r.series.values();
        for (long i = 0; i < n; ++i) X(i, c) = v[static_cast<std::size_t>(head + i + r.shift)];
        ++c;
    }
    std::set<std::string> unique(labels.begin(), labels.end());
    if (unique.size() != labels.size())
        throw StructuralError("build_design: duplicate column labels");

    Eigen::VectorXd y(n);
    for (long i = 0; i < n; ++i) y(i) = target[static_cast<std::size_t>(head + i + horizon)];

    const std::string target_label =
        horizon == 0 ? target.name() + "[t]" : target.name() + "[t+" + std::to_string(horizon) + "]";
    return DesignMatrix(std::move(labels), std::move(X), std::move(y), target_label, head, T, head,
                        tail);
}

std::vector<DesignMatrix> trim_common_sample(const std::vector<DesignMatrix>& designs) {
    if (designs.empty()) return {};
    long lo = designs.front().start();
    long hi = designs.front().start() + designs.front().rows();
    for (const auto& d : designs) {
        lo = std::max(lo, d.start());
        hi = std::min(hi, d.start() + d.rows());
    }
    if (hi <= lo) throw InsufficientSampleError("trim_common_sample: empty row intersection");
    std::vector<DesignMatrix> out;
    out.reserve(designs.size());
    for (const auto& d : designs) out.push_back(d.restricted(lo, hi - lo));
    return out;
}

}  // namespace irfkit
