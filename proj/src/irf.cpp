#include "irfkit/irf.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "irfkit/design.hpp"
#include "irfkit/errors.hpp"
#include "irfkit/parallel.hpp"

namespace irfkit {

namespace {

// Two-sided normal quantile for the requested confidence level, via
// Acklam's rational approximation of the inverse normal CDF.
double normal_quantile(double p) {
    static const double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                               -2.759285104469687e+02, 1.383577518672690e+02,
                               -3.066479806614716e+01, 2.506628277459239e+00};
    static const double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                               -1.556989798598866e+02, 6.680131188771972e+01,
                               -1.328068155288572e+01};
    static const double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                               -2.400758277161838e+00, -2.549732539343734e+00,
                               4.374664141464968e+00,  2.938163982698783e+00};
    static const double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                               2.445134137142996e+00, 3.754408661907416e+00};
    const double plow = 0.02425, phigh = 1 - plow;
    double q, r;
    if (p < plow) {
        q = std::sqrt(-2 * std::log(p));
        return (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
               ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1);
    }
    if (p <= phigh) {
        q = p - 0.5;
        r = q * q;
        return (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
               (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1);
    }
    q = std::sqrt(-2 * std::log(1 - p));
    return -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
           ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1);
}

double ci_z(double level) { return normal_quantile(0.5 + level / 2.0); }

struct HorizonFit {
    double point = 0.0;
    double se = 0.0;
    long nobs = 0;
    std::vector<std::string> warnings;
};

int nw_bandwidth_for(const IrfSpec& spec, int h) {
    return spec.nw_bandwidth ? *spec.nw_bandwidth : h;
}

void append_control_regressors(const IrfSpec& spec, std::vector<Regressor>& regs) {
    for (const auto& c : spec.controls) {
        if (c.contemporaneous) regs.push_back({c.series, 0, std::nullopt});
        for (int l = 1; l <= c.lags; ++l) regs.push_back({c.series, -l, std::nullopt});
    }
}

// Linear trend scaled to [0, 1]; aligned by original time index.
Series trend_series(long T) {
    std::vector<double> tr(T);
    for (long t = 0; t < T; ++t) tr[t] = static_cast<double>(t + 1) / static_cast<double>(T);
    return Series("trend", std::move(tr));
}

void append_trend(const IrfSpec& spec, long T, std::vector<Regressor>& regs) {
    if (spec.include_trend) regs.push_back({trend_series(T), 0, "trend"});
}

/// Lead regressors for `series` at shifts +1..+L. With pad_tail_leads the
/// columns come from a zero-extended copy at shift 0 so no rows drop.
void append_lead_regressors(const Series& series, int leads, bool pad_tail,
                            std::vector<Regressor>& regs) {
    if (leads <= 0) return;
    if (!pad_tail) {
        for (int f = 1; f <= leads; ++f) regs.push_back({series, f, std::nullopt});
        return;
    }
    const auto& v = series.values();
    for (int f = 1; f <= leads; ++f) {
        std::vector<double> shifted(v.size(), 0.0);
        for (std::size_t t = 0; t + f < v.size(); ++t) shifted[t] = v[t + f];
        regs.push_back(
            {Series(series.name() + "_pad", std::move(shifted)), 0, shift_label(series.name(), f)});
    }
}

/// Usable rows for the horizon-h design of the LP family; mirrors
/// build_design's head/tail arithmetic so truncation can be decided before
/// fitting.
long usable_rows(long T, int h, int max_lag, int leads, int extra_tail) {
    return T - max_lag - (h + leads + extra_tail);
}

int max_control_lag(const IrfSpec& spec) {
    int m = 0;
    for (const auto& c : spec.controls) m = std::max(m, c.lags);
    return m;
}

long control_column_count(const IrfSpec& spec) {
    long k = 0;
    for (const auto& c : spec.controls) k += c.lags + (c.contemporaneous ? 1 : 0);
    return k;
}

IrfResult assemble(const IrfSpec& spec, Estimator est, const std::string& label,
                   const std::vector<HorizonFit>& fits) {
    IrfResult r;
    r.estimator = est;
    r.horizon = static_cast<int>(fits.size()) - 1;
    r.ci_level = spec.ci_level;
    IrfPath p;
    p.label = label;
    const double z = ci_z(spec.ci_level);
    for (const auto& f : fits) {
        p.point.push_back(f.point);
        p.se.push_back(f.se);
        p.ci_lo.push_back(f.point - z * f.se);
        p.ci_hi.push_back(f.point + z * f.se);
        r.nobs.push_back(f.nobs);
        for (const auto& w : f.warnings) r.warnings.push_back(w);
    }
    r.paths.push_back(std::move(p));
    return r;
}

/// Shared per-horizon engine for lp / lp_leads / lp_residual_adjusted.
IrfResult lp_family(const Series& y, const Series& shock, const IrfSpec& spec, Estimator est,
                    bool with_leads) {
    const long T = static_cast<long>(y.size());
    if (static_cast<long>(shock.size()) != T)
        throw StructuralError("lp: shock and outcome lengths differ");
    const LeadsRule rule = spec.leads.value_or(LeadsRule::conservative());
    const int max_lag = max_control_lag(spec);

    // Decide the achievable horizon up front so workers never throw.
    int h_max = -1;
    std::vector<std::string> trunc_warnings;
    for (int h = 0; h <= spec.horizon; ++h) {
        const int leads = with_leads && !spec.pad_tail_leads ? rule.at(h) : 0;
        const int extra = spec.comparability_trim && !spec.pad_tail_leads ? rule.at(h) - leads : 0;
        const long k = 2 + control_column_count(spec) + (with_leads ? rule.at(h) : 0) +
                       (spec.include_trend ? 1 : 0);
        if (usable_rows(T, h, max_lag, leads, extra) < k + 2) break;
        h_max = h;
    }
    if (h_max < 0) throw InsufficientSampleError("lp: no usable rows at horizon 0");
    if (h_max < spec.horizon)
        trunc_warnings.push_back("insufficient sample beyond horizon " + std::to_string(h_max) +
                                 "; result truncated (requested " + std::to_string(spec.horizon) +
                                 ")");

    std::vector<HorizonFit> fits(static_cast<std::size_t>(h_max) + 1);
    parallel_for(h_max + 1, spec.threads, [&](long h) {
        const int leads = with_leads ? rule.at(static_cast<int>(h)) : 0;
        const int extra =
            spec.comparability_trim && !spec.pad_tail_leads ? rule.at(static_cast<int>(h)) - leads : 0;
        std::vector<Regressor> regs;
        regs.push_back({shock, 0, std::nullopt});
        append_lead_regressors(shock, leads, spec.pad_tail_leads, regs);
        append_control_regressors(spec, regs);
        append_trend(spec, T, regs);
        DesignMatrix d = build_design(y, static_cast<int>(h), regs, true, extra);
        RegressionFit fit = ols(d);
        HorizonFit& out = fits[h];
        out.point = fit.coef_of(shift_label(shock.name(), 0));
        out.nobs = fit.nobs;
        if (spec.compute_se) {
            apply_newey_west(fit, std::min<int>(nw_bandwidth_for(spec, static_cast<int>(h)),
                                                static_cast<int>(fit.nobs) - 1));
            out.se = fit.se_of(shift_label(shock.name(), 0));
        }
    });

    IrfResult r = assemble(spec, est, "linear", fits);
    for (auto& w : trunc_warnings) r.warnings.push_back(w);
    return r;
}

/// Distributed-lag engine shared by dlm and dlm_innovation. Reports lags
/// 0..H of `impulse`; guard lags keep truncation bias away from the
/// reported range when the impulse is persistent.
IrfResult dlm_engine(const Series& y, const Series& impulse, const IrfSpec& spec, Estimator est) {
    const long T = static_cast<long>(y.size());
    if (static_cast<long>(impulse.size()) != T)
        throw StructuralError("dlm: impulse and outcome lengths differ");
    const int H = spec.horizon;
    const int guard = std::max(0, spec.dlm_extra_lags);

    const int total_lags = H + guard;
    const int max_lag_needed = std::max(total_lags, max_control_lag(spec));
    const long k = 2 + total_lags + control_column_count(spec) + (spec.include_trend ? 1 : 0);
    if (T - max_lag_needed < k + 2)
        throw InsufficientSampleError("dlm: sample too short for " + std::to_string(total_lags) +
                                      " lags");

    std::vector<Regressor> regs;
    for (int l = 0; l <= total_lags; ++l) regs.push_back({impulse, -l, std::nullopt});
    append_control_regressors(spec, regs);
    append_trend(spec, T, regs);
    DesignMatrix d = build_design(y, 0, regs, true);
    RegressionFit fit = ols(d);
    if (spec.compute_se)
        apply_newey_west(fit, std::min<int>(nw_bandwidth_for(spec, H),
                                            static_cast<int>(fit.nobs) - 1));

    std::vector<HorizonFit> fits(static_cast<std::size_t>(H) + 1);
    for (int h = 0; h <= H; ++h) {
        fits[h].point = fit.coef_of(shift_label(impulse.name(), -h));
        fits[h].se = spec.compute_se ? fit.se_of(shift_label(impulse.name(), -h)) : 0.0;
        fits[h].nobs = fit.nobs;
    }
    return assemble(spec, est, "linear", fits);
}

}  // namespace

std::string estimator_name(Estimator e) {
    switch (e) {
        case Estimator::lp: return "lp";
        case Estimator::lp_leads: return "lp-leads";
        case Estimator::dlm: return "dlm";
        case Estimator::dlm_innovation: return "dlm-innovation";
        case Estimator::lp_residual_adjusted: return "lp-residual-adjusted";
        case Estimator::lp_iv: return "lp-iv";
        case Estimator::lp_iv_leads: return "lp-iv-leads";
        case Estimator::nonlinear_lp: return "nonlinear-lp";
    }
    return "?";
}

Estimator estimator_from_name(const std::string& name) {
    for (Estimator e : {Estimator::lp, Estimator::lp_leads, Estimator::dlm,
                        Estimator::dlm_innovation, Estimator::lp_residual_adjusted,
                        Estimator::lp_iv, Estimator::lp_iv_leads, Estimator::nonlinear_lp})
        if (estimator_name(e) == name) return e;
    throw ParameterError("unknown estimator '" + name + "'");
}

int LeadsRule::at(int h) const {
    switch (kind) {
        case Kind::conservative_h: return h;
        case Kind::fixed: return count;
        case Kind::capped: return std::min(h, cap);
    }
    return 0;
}

const IrfPath& IrfResult::primary() const {
    if (paths.empty()) throw Error("empty impulse response result");
    return paths.front();
}

const IrfPath& IrfResult::path(const std::string& label) const {
    for (const auto& p : paths)
        if (p.label == label) return p;
    throw ParameterError("no response path labeled '" + label + "'");
}

IrfResult lp(const Series& y, const Series& shock, const IrfSpec& spec) {
    return lp_family(y, shock, spec, Estimator::lp, false);
}

IrfResult lp_leads(const Series& y, const Series& shock, const IrfSpec& spec) {
    return lp_family(y, shock, spec, Estimator::lp_leads, true);
}

IrfResult dlm(const Series& y, const Series& shock, const IrfSpec& spec) {
    return dlm_engine(y, shock, spec, Estimator::dlm);
}

InnovationFit estimate_innovations(const Series& shock, int ar_order) {
    const long T = static_cast<long>(shock.size());
    if (ar_order < 1) throw ParameterError("estimate_innovations: ar_order must be >= 1");
    if (ar_order >= T / 10)
        throw ParameterError("estimate_innovations: ar_order too large for sample");

    std::vector<Regressor> regs;
    for (int l = 1; l <= ar_order; ++l) regs.push_back({shock, -l, std::nullopt});
    DesignMatrix d = build_design(shock, 0, regs, true);
    RegressionFit fit;
    try {
        fit = ols(d);
    } catch (const SingularityError& e) {
        throw DegenerateSeriesError(std::string("estimate_innovations: ") + e.what());
    }

    InnovationFit out{Series(shock.name() + ".innov",
                             std::vector<double>(fit.residuals.data(),
                                                 fit.residuals.data() + fit.residuals.size())),
                      {}, fit.coef_of("const")};
    for (int l = 1; l <= ar_order; ++l)
        out.ar_coefficients.push_back(fit.coef_of(shift_label(shock.name(), -l)));
    return out;
}

IrfResult dlm_innovation(const Series& y, const Series& shock, const IrfSpec& spec) {
    const int p = spec.shock_ar_order;
    InnovationFit innov = estimate_innovations(shock, p);
    // Innovations start at original time p; align everything else to match.
    Series y_sub = y.slice(p, y.size() - p);
    IrfSpec aligned = spec;
    aligned.controls.clear();
    for (const auto& c : spec.controls) {
        ControlSpec cc = c;
        cc.series = c.series.slice(p, c.series.size() - p);
        aligned.controls.push_back(std::move(cc));
    }
    IrfResult r = dlm_engine(y_sub, innov.innovations, aligned, Estimator::dlm_innovation);
    r.shock_ar_coef = innov.ar_coefficients;

    // Counterfactual path implied by the estimated AR polynomial:
    // theta_h = theta~_h - sum_j gamma_j theta~_{h-j}.
    std::vector<double> counter(r.primary().point.size());
    for (std::size_t h = 0; h < counter.size(); ++h) {
        double v = r.primary().point[h];
        for (std::size_t j = 1; j <= innov.ar_coefficients.size() && j <= h; ++j)
            v -= innov.ar_coefficients[j - 1] * r.primary().point[h - j];
        counter[h] = v;
    }
    r.implied_counterfactual = std::move(counter);
    return r;
}

IrfResult lp_residual_adjusted(const Series& y, const Series& shock, const IrfSpec& spec) {
    const int p = spec.shock_ar_order;
    InnovationFit innov = estimate_innovations(shock, p);
    Series y_sub = y.slice(p, y.size() - p);

    // Controls referencing the shock by name switch to the innovations.
    IrfSpec adjusted = spec;
    adjusted.controls.clear();
    for (const auto& c : spec.controls) {
        ControlSpec cc = c;
        if (c.series.name() == shock.name())
            cc.series = innov.innovations;
        else
            cc.series = c.series.slice(p, c.series.size() - p);
        adjusted.controls.push_back(std::move(cc));
    }

    IrfResult r =
        lp_family(y_sub, innov.innovations, adjusted, Estimator::lp_residual_adjusted, false);
    r.shock_ar_coef = innov.ar_coefficients;
    r.warnings.push_back(
        "regressing on whitened innovations does not hold the shock path fixed over the horizon; "
        "this identifies the response including shock propagation, not the one-off response");
    return r;
}

IrfResult lp_iv(const Series& y, const Series& endogenous, const Series& instrument,
                const IrfSpec& spec) {
    const long T = static_cast<long>(y.size());
    if (static_cast<long>(endogenous.size()) != T || static_cast<long>(instrument.size()) != T)
        throw StructuralError("lp_iv: series lengths differ");
    const bool with_leads = spec.estimator == Estimator::lp_iv_leads;
    const LeadsRule rule = spec.leads.value_or(LeadsRule::conservative());
    const Series lead_series = spec.iv_lead_series.value_or(instrument);
    const int max_lag = max_control_lag(spec);

    int h_max = -1;
    for (int h = 0; h <= spec.horizon; ++h) {
        const int leads = with_leads && !spec.pad_tail_leads ? rule.at(h) : 0;
        const int extra = spec.comparability_trim && !spec.pad_tail_leads ? rule.at(h) - leads : 0;
        const long k = 3 + control_column_count(spec) + (with_leads ? rule.at(h) : 0) +
                       (spec.include_trend ? 1 : 0);
        if (usable_rows(T, h, max_lag, leads, extra) < k + 2) break;
        h_max = h;
    }
    if (h_max < 0) throw InsufficientSampleError("lp_iv: no usable rows at horizon 0");

    std::vector<HorizonFit> fits(static_cast<std::size_t>(h_max) + 1);
    parallel_for(h_max + 1, spec.threads, [&](long h) {
        const int leads = with_leads ? rule.at(static_cast<int>(h)) : 0;
        const int extra =
            spec.comparability_trim && !spec.pad_tail_leads ? rule.at(static_cast<int>(h)) - leads : 0;
        std::vector<Regressor> regs;
        regs.push_back({endogenous, 0, std::nullopt});
        regs.push_back({instrument, 0, std::nullopt});
        append_lead_regressors(lead_series, leads, spec.pad_tail_leads, regs);
        append_control_regressors(spec, regs);
        append_trend(spec, T, regs);
        DesignMatrix d = build_design(y, static_cast<int>(h), regs, true, extra);
        RegressionFit fit = tsls(d, {shift_label(endogenous.name(), 0)},
                                 {shift_label(instrument.name(), 0)});
        HorizonFit& out = fits[h];
        out.point = fit.coef_of(shift_label(endogenous.name(), 0));
        out.nobs = fit.nobs;
        for (const auto& s : fit.first_stages)
            if (s.f_excluded < spec.weak_instrument_f_floor)
                out.warnings.push_back("weak instrument at horizon " + std::to_string(h) +
                                       ": first-stage F " + std::to_string(s.f_excluded) +
                                       " below " + std::to_string(spec.weak_instrument_f_floor));
        if (spec.compute_se) {
            apply_newey_west(fit, std::min<int>(nw_bandwidth_for(spec, static_cast<int>(h)),
                                                static_cast<int>(fit.nobs) - 1));
            out.se = fit.se_of(shift_label(endogenous.name(), 0));
        }
    });

    IrfResult r = assemble(spec, with_leads ? Estimator::lp_iv_leads : Estimator::lp_iv, "linear",
                           fits);
    if (h_max < spec.horizon)
        r.warnings.push_back("insufficient sample beyond horizon " + std::to_string(h_max) +
                             "; result truncated (requested " + std::to_string(spec.horizon) + ")");
    return r;
}

IrfResult nonlinear_lp(const Series& y, const Series& shock, const Series& state,
                       const IrfSpec& spec) {
    const long T = static_cast<long>(y.size());
    if (static_cast<long>(shock.size()) != T || static_cast<long>(state.size()) != T)
        throw StructuralError("nonlinear_lp: series lengths differ");
    for (double v : state.values())
        if (v != 0.0 && v != 1.0)
            throw ParameterError("nonlinear_lp: state series must be binary 0/1");

    const LeadsRule rule = spec.leads.value_or(LeadsRule::conservative());
    const bool with_leads = spec.leads.has_value();
    const int state_shift = spec.state_timing_lagged ? -1 : 0;
    const double z = ci_z(spec.ci_level);

    IrfResult r;
    r.estimator = Estimator::nonlinear_lp;
    r.ci_level = spec.ci_level;
    const std::string tag = spec.state_leads ? ",fixed-state" : "";
    IrfPath path_a{"state=1" + tag, {}, {}, {}, {}};
    IrfPath path_b{"state=0" + tag, {}, {}, {}, {}};
    bool have_a = true, have_b = true;

    for (int h = 0; h <= spec.horizon; ++h) {
        const int leads = with_leads ? rule.at(h) : 0;
        std::vector<Regressor> regs;
        regs.push_back({shock, 0, std::nullopt});
        append_lead_regressors(shock, leads, spec.pad_tail_leads, regs);
        if (spec.state_leads)
            append_lead_regressors(state, leads, spec.pad_tail_leads, regs);
        append_control_regressors(spec, regs);
        append_trend(spec, T, regs);
        regs.push_back({state, state_shift, "__state"});

        DesignMatrix base = build_design(y, h, regs, true);
        const long s_col = base.column("__state");
        const Eigen::VectorXd s = base.X().col(s_col);
        const long n = base.rows();
        const long kb = base.cols() - 1;  // interacted columns per regime

        long n1 = static_cast<long>(s.sum());
        long n0 = n - n1;
        const bool use_a = n1 > 0, use_b = n0 > 0;
        if (use_a && n1 < kb + 1)
            throw InsufficientSampleError("nonlinear_lp: regime state=1 has " +
                                          std::to_string(n1) + " rows for " + std::to_string(kb) +
                                          " columns at horizon " + std::to_string(h));
        if (use_b && n0 < kb + 1)
            throw InsufficientSampleError("nonlinear_lp: regime state=0 has " +
                                          std::to_string(n0) + " rows for " + std::to_string(kb) +
                                          " columns at horizon " + std::to_string(h));

        const long k2 = kb * ((use_a ? 1 : 0) + (use_b ? 1 : 0));
        Eigen::MatrixXd X(n, k2);
        std::vector<std::string> labels;
        long c = 0;
        for (long j = 0; j < base.cols(); ++j) {
            if (j == s_col) continue;
            if (use_a) {
                X.col(c++) = base.X().col(j).cwiseProduct(s);
                labels.push_back(base.labels()[j] + "*S1");
            }
        }
        for (long j = 0; j < base.cols(); ++j) {
            if (j == s_col) continue;
            if (use_b) {
                X.col(c++) = base.X().col(j).cwiseProduct(Eigen::VectorXd::Ones(n) - s);
                labels.push_back(base.labels()[j] + "*S0");
            }
        }
        DesignMatrix interacted(labels, std::move(X), base.y(), base.target_label(), base.start(),
                                base.source_length(), base.rows_dropped_head(),
                                base.rows_dropped_tail());
        RegressionFit fit = ols(interacted);
        if (spec.compute_se)
            apply_newey_west(fit, std::min<int>(nw_bandwidth_for(spec, h),
                                                static_cast<int>(fit.nobs) - 1));

        const std::string shock_lbl = shift_label(shock.name(), 0);
        if (use_a) {
            const double pt = fit.coef_of(shock_lbl + "*S1");
            const double se = spec.compute_se ? fit.se_of(shock_lbl + "*S1") : 0.0;
            path_a.point.push_back(pt);
            path_a.se.push_back(se);
            path_a.ci_lo.push_back(pt - z * se);
            path_a.ci_hi.push_back(pt + z * se);
        } else {
            have_a = false;
        }
        if (use_b) {
            const double pt = fit.coef_of(shock_lbl + "*S0");
            const double se = spec.compute_se ? fit.se_of(shock_lbl + "*S0") : 0.0;
            path_b.point.push_back(pt);
            path_b.se.push_back(se);
            path_b.ci_lo.push_back(pt - z * se);
            path_b.ci_hi.push_back(pt + z * se);
        } else {
            have_b = false;
        }
        r.nobs.push_back(fit.nobs);
    }

    r.horizon = spec.horizon;
    if (have_a) r.paths.push_back(std::move(path_a));
    if (have_b) r.paths.push_back(std::move(path_b));
    if (!have_a) r.warnings.push_back("regime state=1 never observed; path undefined");
    if (!have_b) r.warnings.push_back("regime state=0 never observed; path undefined");
    if (r.paths.empty()) throw InsufficientSampleError("nonlinear_lp: no estimable regime");
    return r;
}

IrfResult estimate_irf(const Series& y, const Series& shock, const IrfSpec& spec) {
    switch (spec.estimator) {
        case Estimator::lp: return lp(y, shock, spec);
        case Estimator::lp_leads: return lp_leads(y, shock, spec);
        case Estimator::dlm: return dlm(y, shock, spec);
        case Estimator::dlm_innovation: return dlm_innovation(y, shock, spec);
        case Estimator::lp_residual_adjusted: return lp_residual_adjusted(y, shock, spec);
        case Estimator::lp_iv:
        case Estimator::lp_iv_leads: {
            if (!spec.instrument) throw ParameterError("lp_iv: spec has no instrument series");
            return lp_iv(y, shock, *spec.instrument, spec);
        }
        case Estimator::nonlinear_lp: {
            if (!spec.state) throw ParameterError("nonlinear_lp: spec has no state series");
            return nonlinear_lp(y, shock, *spec.state, spec);
        }
    }
    throw ParameterError("estimate_irf: unknown estimator");
}

std::vector<double> cumulative_multiplier(const IrfResult& num, const IrfResult& den) {
    const auto& a = num.primary().point;
    const auto& b = den.primary().point;
    if (a.size() != b.size())
        throw ParameterError("cumulative_multiplier: horizon mismatch (" +
                             std::to_string(a.size()) + " vs " + std::to_string(b.size()) + ")");
    double scale = 1.0, cb = 0.0;
    for (double v : b) {
        cb += v;
        scale = std::max(scale, std::abs(cb));
    }
    const double tol = 1e-8 * scale;
    std::vector<double> m(a.size());
    double ca = 0.0;
    cb = 0.0;
    for (std::size_t h = 0; h < a.size(); ++h) {
        ca += a[h];
        cb += b[h];
        m[h] = std::abs(cb) < tol ? std::numeric_limits<double>::quiet_NaN() : ca / cb;
    }
    return m;
}

}  // namespace irfkit
