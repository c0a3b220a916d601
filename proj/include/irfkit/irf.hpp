#ifndef IRFKIT_IRF_HPP
#define IRFKIT_IRF_HPP

#include <optional>
#include <string>
#include <vector>

#include "irfkit/regress.hpp"
#include "irfkit/series.hpp"

namespace irfkit {

enum class Estimator {
    lp,
    lp_leads,
    dlm,
    dlm_innovation,
    lp_residual_adjusted,
    lp_iv,
    lp_iv_leads,
    nonlinear_lp,
};

std::string estimator_name(Estimator e);
Estimator estimator_from_name(const std::string& name);

/// How many leads of the impulse variable enter the horizon-h regression.
struct LeadsRule {
    enum class Kind { conservative_h, fixed, capped };
    Kind kind = Kind::conservative_h;
    int count = 0;  // fixed
    int cap = 12;   // capped

    int at(int h) const;

    static LeadsRule conservative() { return {Kind::conservative_h, 0, 0}; }
    static LeadsRule fixed_count(int n) { return {Kind::fixed, n, 0}; }
    static LeadsRule capped_at(int cap) { return {Kind::capped, 0, cap}; }
};

/// Control variable: `lags` lags (1..lags) and optionally the
/// contemporaneous value.
struct ControlSpec {
    Series series;
    int lags = 1;
    bool contemporaneous = false;
};

struct IrfSpec {
    Estimator estimator = Estimator::lp;
    int horizon = 0;
    std::vector<ControlSpec> controls;
    std::optional<LeadsRule> leads;

    int shock_ar_order = 1;     // innovation construction
    int dlm_extra_lags = 2;     // guard lags beyond the reported horizon
    std::optional<int> nw_bandwidth;  // default: bandwidth = h per horizon
    double ci_level = 0.95;
    bool compute_se = true;
    bool include_trend = false;  // linear deterministic trend column

    /// Trim lead-free designs as if the leads rule applied, so with- and
    /// without-leads runs share identical samples.
    bool comparability_trim = false;

    /// Zero-fill lead values past the end of the sample instead of dropping
    /// rows. Changes the estimand; off unless explicitly requested.
    bool pad_tail_leads = false;

    std::optional<Series> state;  // nonlinear
    bool state_timing_lagged = true;
    bool state_leads = false;

    std::optional<Series> instrument;      // iv
    std::optional<Series> iv_lead_series;  // defaults to the instrument
    double weak_instrument_f_floor = 10.0;

    int threads = 1;
};

struct IrfPath {
    std::string label;
    std::vector<double> point;
    std::vector<double> se;
    std::vector<double> ci_lo;
    std::vector<double> ci_hi;
};

struct IrfResult {
    Estimator estimator = Estimator::lp;
    int horizon = 0;  // achieved horizon (may be truncated, with a warning)
    double ci_level = 0.95;
    std::vector<IrfPath> paths;
    std::vector<long> nobs;  // per horizon
    std::vector<std::string> warnings;

    std::vector<double> shock_ar_coef;  // innovation-based estimators
    /// For dlm_innovation: response path with the propagation through the
    /// shock removed via the estimated AR polynomial.
    std::optional<std::vector<double>> implied_counterfactual;

    const IrfPath& primary() const;
    const IrfPath& path(const std::string& label) const;
};

/// Per-horizon projection of y_{t+h} on shock_t and controls.
IrfResult lp(const Series& y, const Series& shock, const IrfSpec& spec);

/// Per-horizon projection with leads of the shock as additional controls.
IrfResult lp_leads(const Series& y, const Series& shock, const IrfSpec& spec);

/// Single regression of y_t on the current and lagged shock.
IrfResult dlm(const Series& y, const Series& shock, const IrfSpec& spec);

/// AR(p) fit of the shock; innovations are the residuals (first p
/// observations dropped).
struct InnovationFit {
    Series innovations;
    std::vector<double> ar_coefficients;
    double intercept = 0.0;
};
InnovationFit estimate_innovations(const Series& shock, int ar_order);

/// Distributed lag regression on the estimated shock innovations.
IrfResult dlm_innovation(const Series& y, const Series& shock, const IrfSpec& spec);

/// Per-horizon projection on the estimated innovations. Identifies the
/// response including the shock's propagation, not the one-off response:
/// whitening the regressor does not hold the shock path fixed over the
/// horizon. The result carries a warning stating this.
IrfResult lp_residual_adjusted(const Series& y, const Series& shock, const IrfSpec& spec);

/// Per-horizon 2SLS of y_{t+h} on the endogenous regressor, instrumented.
/// With estimator lp_iv_leads, leads of `iv_lead_series` (default: the
/// instrument) enter both stages as exogenous controls.
IrfResult lp_iv(const Series& y, const Series& endogenous, const Series& instrument,
                const IrfSpec& spec);

/// State-dependent projection: every regressor is interacted with the
/// lagged binary state and its complement; returns one path per regime.
IrfResult nonlinear_lp(const Series& y, const Series& shock, const Series& state,
                       const IrfSpec& spec);

/// Dispatch on spec.estimator (IV and nonlinear kinds need their extra
/// series set in the spec or passed to the dedicated overloads).
IrfResult estimate_irf(const Series& y, const Series& shock, const IrfSpec& spec);

/// Ratio of partial sums through each horizon. Horizons where the
/// denominator partial sum vanishes (relative tolerance 1e-8) are marked
/// NaN and computation continues.
std::vector<double> cumulative_multiplier(const IrfResult& num, const IrfResult& den);

}  // namespace irfkit

#endif
