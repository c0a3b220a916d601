#ifndef IRFKIT_DIAGNOSTICS_HPP
#define IRFKIT_DIAGNOSTICS_HPP

#include <optional>
#include <string>
#include <vector>

#include "irfkit/series.hpp"

namespace irfkit {

enum class TestKind { ljung_box, box_pierce, panel_joint };

struct LagDetail {
    int lag;
    double statistic;
    double p_value;
};

struct TestResult {
    double statistic = 0.0;
    int dof = 0;
    double p_value = 1.0;
    int lags_tested = 0;
    TestKind kind = TestKind::ljung_box;
    std::optional<std::vector<LagDetail>> per_lag;
};

struct Correlogram {
    std::vector<double> acf;          // rho_hat at lags 1..m (lag 0 is 1 and omitted)
    std::vector<double> bartlett_se;  // sqrt((1 + 2 sum_{j<k} rho_j^2) / T)
    long sample_size = 0;
};

/// Sample autocorrelations with Bartlett standard errors. The series is
/// demeaned with the full-sample mean.
Correlogram acf(const Series& x, int max_lag);

/// Portmanteau test for autocorrelation within m lags, with the
/// small-sample correction: Q = T(T+2) sum rho_k^2/(T-k), p from chi2(m).
/// Per-lag detail carries the cumulative statistic at each lag.
TestResult ljung_box(const Series& x, int m);

/// Uncorrected variant, Q' = T sum rho_k^2.
TestResult box_pierce(const Series& x, int m);

/// Cross-entity autocorrelation test on within-transformed panel data:
/// per-lag standardized covariances z_k (asymptotically N(0,1) under the
/// null of no autocorrelation at that lag) and a joint sum z_k^2 against
/// chi2(m). The statistics are centered for the demeaning-induced
/// finite-sample bias; size is validated by Monte Carlo, not exact.
TestResult panel_serial_test(const Panel& panel, const std::string& variable, int m);

/// Chi-squared survival function via the regularized incomplete gamma.
double chi_squared_sf(double x, int dof);

/// Standard normal survival function.
double normal_sf(double z);

}  // namespace irfkit

#endif
