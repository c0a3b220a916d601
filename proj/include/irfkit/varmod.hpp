#ifndef IRFKIT_VARMOD_HPP
#define IRFKIT_VARMOD_HPP

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "irfkit/irf.hpp"
#include "irfkit/series.hpp"

namespace irfkit {

/// Reduced-form VAR(p) fit: equation-by-equation OLS with intercepts,
/// residual covariance with degrees-of-freedom correction.
struct VarFit {
    int p = 1;
    std::vector<std::string> names;
    Eigen::VectorXd intercept;
    std::vector<Eigen::MatrixXd> lag_coef;  // B_1 .. B_p, each k x k
    Eigen::MatrixXd sigma;                  // residual covariance
    long nobs = 0;
    double spectral_radius = 0.0;

    Eigen::MatrixXd companion() const;
};

VarFit fit_var(const std::vector<Series>& data, int p);

/// Orthogonalized responses to a structural impulse in `impulse` under the
/// given ordering, rescaled to unit impact on the shocked variable. One
/// path per variable, in fit order.
IrfResult cholesky_irf(const VarFit& fit, int max_horizon, const std::string& impulse,
                       const std::vector<std::string>& ordering);

/// VAR with x entering as an exogenous distributed lag (0..q). The
/// response holds future x at zero, so it matches the distributed-lag
/// estimand regardless of the persistence of x. q < max_horizon warns
/// about inconsistent truncation but proceeds.
IrfResult varx_irf(const std::vector<Series>& endogenous, const Series& x, int p, int q,
                   int max_horizon);

}  // namespace irfkit

#endif
