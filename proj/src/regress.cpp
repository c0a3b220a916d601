#include "irfkit/regress.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "irfkit/errors.hpp"

namespace irfkit {

namespace {

constexpr double kRankTol = 1e-10;

struct QrSolve {
    Eigen::VectorXd coef;
    Eigen::MatrixXd xtx_inverse;
};

/// Solves min ||y - X b|| by pivoted QR and returns (X'X)^{-1} from the
/// triangular factor. Never forms normal equations.
QrSolve solve_qr(const Eigen::MatrixXd& X, const Eigen::VectorXd& y,
                 const std::vector<std::string>& labels) {
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(X);
    qr.setThreshold(kRankTol);
    const long k = X.cols();
    if (qr.rank() < k) {
        // Pivot order puts the dependent columns last.
        std::string bad;
        const auto& perm = qr.colsPermutation().indices();
        for (long j = qr.rank(); j < k; ++j) {
            if (!bad.empty()) bad += ", ";
            bad += labels[static_cast<std::size_t>(perm(j))];
        }
        throw SingularityError("rank-deficient design (rank " + std::to_string(qr.rank()) + " of " +
                               std::to_string(k) + "); dependent columns: " + bad);
    }
    QrSolve out;
    out.coef = qr.solve(y);
    // X P = Q R  =>  (X'X)^{-1} = P R^{-1} R^{-T} P'
    Eigen::MatrixXd R = qr.matrixR().topLeftCorner(k, k).triangularView<Eigen::Upper>();
    Eigen::MatrixXd Rinv =
        R.triangularView<Eigen::Upper>().solve(Eigen::MatrixXd::Identity(k, k));
    Eigen::MatrixXd unpermuted = Rinv * Rinv.transpose();
    const auto& perm = qr.colsPermutation();
    out.xtx_inverse = perm * unpermuted * perm.transpose();
    return out;
}

Eigen::MatrixXd symmetrize(const Eigen::MatrixXd& m) { return 0.5 * (m + m.transpose()); }

}  // namespace

double RegressionFit::coef_of(const std::string& label) const {
    auto it = std::find(labels.begin(), labels.end(), label);
    if (it == labels.end()) throw ParameterError("no coefficient for column '" + label + "'");
    return coef(it - labels.begin());
}

double RegressionFit::se_of(const std::string& label) const {
    auto it = std::find(labels.begin(), labels.end(), label);
    if (it == labels.end()) throw ParameterError("no standard error for column '" + label + "'");
    const long j = it - labels.begin();
    return std::sqrt(std::max(0.0, cov(j, j)));
}

RegressionFit ols(const DesignMatrix& design) {
    const long n = design.rows(), k = design.cols();
    if (n < k + 1)
        throw InsufficientSampleError("ols: " + std::to_string(n) + " rows for " +
                                      std::to_string(k) + " columns");
    QrSolve s = solve_qr(design.X(), design.y(), design.labels());

    RegressionFit fit;
    fit.labels = design.labels();
    fit.coef = std::move(s.coef);
    fit.X = design.X();
    fit.residuals = design.y() - fit.X * fit.coef;
    fit.xtx_inverse = std::move(s.xtx_inverse);
    fit.nobs = n;
    fit.df_resid = n - k;
    fit.sigma2 = fit.residuals.squaredNorm() / static_cast<double>(fit.df_resid);
    fit.cov_kind = CovKind::spherical;
    fit.cov = fit.sigma2 * fit.xtx_inverse;
    return fit;
}

Eigen::MatrixXd newey_west(const RegressionFit& fit, int bandwidth) {
    if (bandwidth < 0) throw ParameterError("newey_west: bandwidth must be >= 0");
    if (bandwidth >= fit.nobs)
        throw ParameterError("newey_west: bandwidth " + std::to_string(bandwidth) +
                             " >= nobs " + std::to_string(fit.nobs));
    const long n = fit.nobs, k = fit.X.cols();
    // Scores u_t = e_t x_t; S = Gamma_0 + sum_k w_k (Gamma_k + Gamma_k').
    Eigen::MatrixXd U = fit.X.array().colwise() * fit.residuals.array();
    Eigen::MatrixXd S = Eigen::MatrixXd::Zero(k, k);
    S.selfadjointView<Eigen::Lower>().rankUpdate(U.adjoint());
    Eigen::MatrixXd Sfull = S.selfadjointView<Eigen::Lower>();
    for (int lag = 1; lag <= bandwidth; ++lag) {
        const double w = 1.0 - static_cast<double>(lag) / (bandwidth + 1.0);
        Eigen::MatrixXd G = U.bottomRows(n - lag).transpose() * U.topRows(n - lag);
        Sfull.noalias() += w * (G + G.transpose());
    }
    return symmetrize(fit.xtx_inverse * Sfull * fit.xtx_inverse);
}

void apply_newey_west(RegressionFit& fit, int bandwidth) {
    fit.cov = newey_west(fit, bandwidth);
    fit.cov_kind = bandwidth == 0 ? CovKind::hc : CovKind::newey_west;
    fit.nw_bandwidth = bandwidth;
}

RegressionFit tsls(const DesignMatrix& design, const std::vector<std::string>& endogenous,
                   const std::vector<std::string>& instruments) {
    if (endogenous.empty()) throw ParameterError("tsls: no endogenous columns");
    if (instruments.size() < endogenous.size())
        throw ParameterError("tsls: " + std::to_string(instruments.size()) + " instruments for " +
                             std::to_string(endogenous.size()) + " endogenous columns");

    std::vector<long> endo_ix, inst_ix, exog_ix;
    for (const auto& lbl : endogenous) {
        long j = design.column(lbl);
        if (j < 0) throw ParameterError("tsls: unknown endogenous column '" + lbl + "'");
        endo_ix.push_back(j);
    }
    for (const auto& lbl : instruments) {
        long j = design.column(lbl);
        if (j < 0) throw ParameterError("tsls: unknown instrument column '" + lbl + "'");
        inst_ix.push_back(j);
    }
    for (long j = 0; j < design.cols(); ++j)
        if (std::find(endo_ix.begin(), endo_ix.end(), j) == endo_ix.end() &&
            std::find(inst_ix.begin(), inst_ix.end(), j) == inst_ix.end())
            exog_ix.push_back(j);

    const long n = design.rows();
    const long ke = static_cast<long>(endo_ix.size());
    const long kx = static_cast<long>(exog_ix.size());
    const long kz = static_cast<long>(inst_ix.size());

    // First stage: each endogenous column on [exog, instruments].
    Eigen::MatrixXd Z(n, kx + kz);
    std::vector<std::string> z_labels;
    for (long j = 0; j < kx; ++j) {
        Z.col(j) = design.X().col(exog_ix[j]);
        z_labels.push_back(design.labels()[exog_ix[j]]);
    }
    for (long j = 0; j < kz; ++j) {
        Z.col(kx + j) = design.X().col(inst_ix[j]);
        z_labels.push_back(design.labels()[inst_ix[j]]);
    }
    if (n < Z.cols() + 1) throw InsufficientSampleError("tsls: first stage has too few rows");

    Eigen::MatrixXd fitted(n, ke);
    std::vector<FirstStage> stages;
    for (long e = 0; e < ke; ++e) {
        const Eigen::VectorXd g = design.X().col(endo_ix[e]);
        QrSolve s;
        try {
            s = solve_qr(Z, g, z_labels);
        } catch (const SingularityError& err) {
            throw WeakInstrumentError(std::string("tsls first stage: ") + err.what());
        }
        fitted.col(e) = Z * s.coef;
        Eigen::VectorXd resid = g - fitted.col(e);
        const double rss_full = resid.squaredNorm();
        // Restricted first stage: exogenous columns only.
        double rss_restr;
        if (kx > 0) {
            QrSolve r = solve_qr(Z.leftCols(kx), g,
                                 std::vector<std::string>(z_labels.begin(), z_labels.begin() + kx));
            rss_restr = (g - Z.leftCols(kx) * r.coef).squaredNorm();
        } else {
            rss_restr = g.squaredNorm();
        }
        const long df = n - Z.cols();
        double f = 0.0;
        if (rss_full > 0 && df > 0)
            f = ((rss_restr - rss_full) / static_cast<double>(kz)) /
                (rss_full / static_cast<double>(df));
        if (!(rss_full > 0))  // instruments reproduce g exactly: g itself is an instrument
            f = std::numeric_limits<double>::infinity();
        stages.push_back({design.labels()[endo_ix[e]], std::move(s.coef), f});
    }

    // Second stage: y on [exog, fitted endogenous].
    Eigen::MatrixXd X2(n, kx + ke);
    std::vector<std::string> labels2;
    for (long j = 0; j < kx; ++j) {
        X2.col(j) = design.X().col(exog_ix[j]);
        labels2.push_back(design.labels()[exog_ix[j]]);
    }
    for (long e = 0; e < ke; ++e) {
        X2.col(kx + e) = fitted.col(e);
        labels2.push_back(design.labels()[endo_ix[e]]);
    }
    QrSolve s2;
    try {
        s2 = solve_qr(X2, design.y(), labels2);
    } catch (const SingularityError& err) {
        throw WeakInstrumentError(std::string("tsls second stage: ") + err.what());
    }

    // Residuals use the original endogenous columns.
    Eigen::MatrixXd Xorig(n, kx + ke);
    for (long j = 0; j < kx; ++j) Xorig.col(j) = design.X().col(exog_ix[j]);
    for (long e = 0; e < ke; ++e) Xorig.col(kx + e) = design.X().col(endo_ix[e]);

    RegressionFit fit;
    fit.labels = std::move(labels2);
    fit.coef = std::move(s2.coef);
    fit.X = std::move(X2);
    fit.residuals = design.y() - Xorig * fit.coef;
    fit.xtx_inverse = std::move(s2.xtx_inverse);
    fit.nobs = n;
    fit.df_resid = n - (kx + ke);
    fit.sigma2 = fit.residuals.squaredNorm() / static_cast<double>(fit.df_resid);
    fit.cov_kind = CovKind::spherical;
    fit.cov = fit.sigma2 * fit.xtx_inverse;
    fit.first_stages = std::move(stages);
    return fit;
}

}  // namespace irfkit
