#ifndef IRFKIT_REGRESS_HPP
#define IRFKIT_REGRESS_HPP

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "irfkit/design.hpp"

namespace irfkit {

enum class CovKind { spherical, hc, newey_west };

/// One first-stage fit summary kept for instrument diagnostics.
struct FirstStage {
    std::string endogenous;
    Eigen::VectorXd coef;
    double f_excluded = 0.0;  // joint F of the excluded instruments
};

/// Least-squares output. Residuals are always computed against the
/// original regressors; for 2SLS, `X` holds the projected second-stage
/// regressors so the sandwich covariances use the correct moments.
struct RegressionFit {
    std::vector<std::string> labels;
    Eigen::VectorXd coef;
    Eigen::VectorXd residuals;
    Eigen::MatrixXd X;
    Eigen::MatrixXd xtx_inverse;
    long nobs = 0;
    long df_resid = 0;
    double sigma2 = 0.0;  // e'e / df_resid
    CovKind cov_kind = CovKind::spherical;
    int nw_bandwidth = 0;
    Eigen::MatrixXd cov;

    double coef_of(const std::string& label) const;
    double se_of(const std::string& label) const;
    std::vector<FirstStage> first_stages;
};

/// OLS via column-pivoted Householder QR. Rank tolerance is
/// 1e-10 relative to the largest pivot; a deficient design raises
/// SingularityError naming the dependent columns.
RegressionFit ols(const DesignMatrix& design);

/// Bartlett-kernel HAC covariance, weights 1 - k/(bandwidth+1).
/// bandwidth 0 reduces exactly to the HC0 covariance.
Eigen::MatrixXd newey_west(const RegressionFit& fit, int bandwidth);

/// Replaces the stored covariance with the HAC one.
void apply_newey_west(RegressionFit& fit, int bandwidth);

/// Two-stage least squares. `endogenous` and `instruments` name design
/// columns; every other column is exogenous and appears in both stages.
RegressionFit tsls(const DesignMatrix& design, const std::vector<std::string>& endogenous,
                   const std::vector<std::string>& instruments);

}  // namespace irfkit

#endif
