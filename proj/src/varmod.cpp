#include "irfkit/varmod.hpp"

#include <algorithm>
#include <cmath>

#include "irfkit/design.hpp"
#include "irfkit/errors.hpp"
#include "irfkit/regress.hpp"

namespace irfkit {

namespace {

Eigen::MatrixXd stack_columns(const std::vector<Series>& data) {
    const long T = static_cast<long>(data.front().size());
    Eigen::MatrixXd Y(T, static_cast<long>(data.size()));
    for (std::size_t j = 0; j < data.size(); ++j) {
        if (static_cast<long>(data[j].size()) != T)
            throw StructuralError("var: series lengths differ");
        for (long t = 0; t < T; ++t) Y(t, static_cast<long>(j)) = data[j][t];
    }
    return Y;
}

IrfPath make_path(const std::string& label, const std::vector<double>& v) {
    IrfPath p;
    p.label = label;
    p.point = v;
    p.se.assign(v.size(), 0.0);
    p.ci_lo = v;
    p.ci_hi = v;
    return p;
}

}  // namespace

Eigen::MatrixXd VarFit::companion() const {
    const long k = static_cast<long>(names.size());
    Eigen::MatrixXd C = Eigen::MatrixXd::Zero(k * p, k * p);
    for (int l = 0; l < p; ++l) C.block(0, l * k, k, k) = lag_coef[l];
    if (p > 1) C.block(k, 0, k * (p - 1), k * (p - 1)).setIdentity();
    return C;
}

VarFit fit_var(const std::vector<Series>& data, int p) {
    if (data.empty()) throw ParameterError("fit_var: no series");
    if (p < 1) throw ParameterError("fit_var: lag order must be >= 1");
    const long k = static_cast<long>(data.size());
    const long T = static_cast<long>(data.front().size());
    if (T <= k * p + 10)
        throw InsufficientSampleError("fit_var: sample length " + std::to_string(T) +
                                      " too short for " + std::to_string(k) + " variables, " +
                                      std::to_string(p) + " lags");

    VarFit fit;
    fit.p = p;
    for (const auto& s : data) fit.names.push_back(s.name());
    fit.intercept.resize(k);
    fit.lag_coef.assign(p, Eigen::MatrixXd::Zero(k, k));

    const long n = T - p;
    Eigen::MatrixXd resid(n, k);
    for (long eq = 0; eq < k; ++eq) {
        std::vector<Regressor> regs;
        for (int l = 1; l <= p; ++l)
            for (long j = 0; j < k; ++j) regs.push_back({data[j], -l, std::nullopt});
        DesignMatrix d = build_design(data[eq], 0, regs, true);
        RegressionFit f = ols(d);
        fit.intercept(eq) = f.coef_of("const");
        for (int l = 1; l <= p; ++l)
            for (long j = 0; j < k; ++j)
                fit.lag_coef[l - 1](eq, j) = f.coef_of(shift_label(data[j].name(), -l));
        resid.col(eq) = f.residuals;
    }
    fit.nobs = n;
    const long params_per_eq = k * p + 1;
    fit.sigma = resid.transpose() * resid / static_cast<double>(n - params_per_eq);
    fit.spectral_radius = fit.companion().eigenvalues().cwiseAbs().maxCoeff();
    return fit;
}

IrfResult cholesky_irf(const VarFit& fit, int max_horizon, const std::string& impulse,
                       const std::vector<std::string>& ordering) {
    const long k = static_cast<long>(fit.names.size());
    if (static_cast<long>(ordering.size()) != k)
        throw ParameterError("cholesky_irf: ordering must list every variable");

    // Permutation original -> ordering position.
    std::vector<long> pos(k);
    for (long i = 0; i < k; ++i) {
        auto it = std::find(fit.names.begin(), fit.names.end(), ordering[i]);
        if (it == fit.names.end())
            throw ParameterError("cholesky_irf: unknown variable '" + ordering[i] + "'");
        pos[i] = it - fit.names.begin();
    }
    Eigen::MatrixXd sigma_perm(k, k);
    for (long i = 0; i < k; ++i)
        for (long j = 0; j < k; ++j) sigma_perm(i, j) = fit.sigma(pos[i], pos[j]);

    Eigen::LLT<Eigen::MatrixXd> llt(sigma_perm);
    Eigen::MatrixXd L = llt.matrixL();
    const double scale = sigma_perm.cwiseAbs().maxCoeff();
    if (llt.info() != Eigen::Success || !L.allFinite() ||
        (L * L.transpose() - sigma_perm).cwiseAbs().maxCoeff() > 1e-8 * scale)
        throw SingularityError("cholesky_irf: residual covariance not positive definite");

    auto imp_it = std::find(ordering.begin(), ordering.end(), impulse);
    if (imp_it == ordering.end())
        throw ParameterError("cholesky_irf: impulse variable '" + impulse + "' not in ordering");
    const long imp_perm = imp_it - ordering.begin();

    // One-standard-deviation structural shock, rescaled to unit impact.
    Eigen::VectorXd d_perm = L.col(imp_perm) / L(imp_perm, imp_perm);
    Eigen::VectorXd d(k);
    for (long i = 0; i < k; ++i) d(pos[i]) = d_perm(i);

    IrfResult r;
    r.estimator = Estimator::lp;  // reported via path labels; CLI overrides name
    r.horizon = max_horizon;
    if (fit.spectral_radius >= 1.0)
        r.warnings.push_back("companion spectral radius " + std::to_string(fit.spectral_radius) +
                             " >= 1; responses beyond the requested horizon are unreliable");

    std::vector<Eigen::VectorXd> resp(max_horizon + 1);
    for (int h = 0; h <= max_horizon; ++h) {
        Eigen::VectorXd v = h == 0 ? d : Eigen::VectorXd(Eigen::VectorXd::Zero(k));
        for (int l = 1; l <= std::min(h, fit.p); ++l) v += fit.lag_coef[l - 1] * resp[h - l];
        resp[h] = v;
    }
    for (long j = 0; j < k; ++j) {
        std::vector<double> path(max_horizon + 1);
        for (int h = 0; h <= max_horizon; ++h) path[h] = resp[h](j);
        r.paths.push_back(make_path(fit.names[j], path));
    }
    r.nobs.assign(max_horizon + 1, fit.nobs);
    return r;
}

IrfResult varx_irf(const std::vector<Series>& endogenous, const Series& x, int p, int q,
                   int max_horizon) {
    if (endogenous.empty()) throw ParameterError("varx_irf: no endogenous series");
    if (p < 1) throw ParameterError("varx_irf: lag order must be >= 1");
    if (q < 0) throw ParameterError("varx_irf: distributed-lag order must be >= 0");
    const long k = static_cast<long>(endogenous.size());

    IrfResult r;
    r.estimator = Estimator::dlm;
    r.horizon = max_horizon;
    if (q < max_horizon)
        r.warnings.push_back("distributed-lag order " + std::to_string(q) +
                             " below the response horizon " + std::to_string(max_horizon) +
                             "; truncated dynamics are inconsistent for the longer horizons");

    std::vector<Eigen::MatrixXd> A(p, Eigen::MatrixXd::Zero(k, k));
    std::vector<Eigen::VectorXd> b(q + 1, Eigen::VectorXd::Zero(k));
    long nobs = 0;
    for (long eq = 0; eq < k; ++eq) {
        std::vector<Regressor> regs;
        for (int l = 1; l <= p; ++l)
            for (long j = 0; j < k; ++j) regs.push_back({endogenous[j], -l, std::nullopt});
        for (int l = 0; l <= q; ++l) regs.push_back({x, -l, std::nullopt});
        DesignMatrix d = build_design(endogenous[eq], 0, regs, true);
        RegressionFit f = ols(d);
        nobs = f.nobs;
        for (int l = 1; l <= p; ++l)
            for (long j = 0; j < k; ++j)
                A[l - 1](eq, j) = f.coef_of(shift_label(endogenous[j].name(), -l));
        for (int l = 0; l <= q; ++l) b[l](eq) = f.coef_of(shift_label(x.name(), -l));
    }

    // Dynamic multipliers to a unit x impulse with future x held at zero.
    std::vector<Eigen::VectorXd> resp(max_horizon + 1);
    for (int h = 0; h <= max_horizon; ++h) {
        Eigen::VectorXd v = h <= q ? b[h] : Eigen::VectorXd(Eigen::VectorXd::Zero(k));
        for (int l = 1; l <= std::min(h, p); ++l) v += A[l - 1] * resp[h - l];
        resp[h] = v;
    }
    for (long j = 0; j < k; ++j) {
        std::vector<double> path(max_horizon + 1);
        for (int h = 0; h <= max_horizon; ++h) path[h] = resp[h](j);
        r.paths.push_back(make_path(endogenous[j].name(), path));
    }
    r.nobs.assign(max_horizon + 1, nobs);
    return r;
}

}  // namespace irfkit
