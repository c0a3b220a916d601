#include "irfkit/diagnostics.hpp"

#include <cmath>
#include <numeric>

#include "irfkit/errors.hpp"

namespace irfkit {

namespace {

// Regularized incomplete gamma P(a,x) by series, Q(a,x) by continued
// fraction (modified Lentz). Relative accuracy ~1e-14.
double gamma_p_series(double a, double x) {
    double ap = a;
    double sum = 1.0 / a;
    double del = sum;
    for (int i = 0; i < 10000; ++i) {
        ap += 1.0;
        del *= x / ap;
        sum += del;
        if (std::abs(del) < std::abs(sum) * 1e-16) break;
    }
    return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

double gamma_q_contfrac(double a, double x) {
    const double tiny = 1e-300;
    double b = x + 1.0 - a;
    double c = 1.0 / tiny;
    double d = 1.0 / b;
    double h = d;
    for (int i = 1; i < 10000; ++i) {
        const double an = -static_cast<double>(i) * (static_cast<double>(i) - a);
        b += 2.0;
        d = an * d + b;
        if (std::abs(d) < tiny) d = tiny;
        c = b + an / c;
        if (std::abs(c) < tiny) c = tiny;
        d = 1.0 / d;
        const double del = d * c;
        h *= del;
        if (std::abs(del - 1.0) < 1e-16) break;
    }
    return h * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

std::vector<double> demeaned(const Series& x) {
    const auto& v = x.values();
    const double mean = std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
    std::vector<double> d(v.size());
    for (std::size_t t = 0; t < v.size(); ++t) d[t] = v[t] - mean;
    return d;
}

TestResult portmanteau(const Series& x, int m, bool small_sample_correction) {
    const long T = static_cast<long>(x.size());
    if (m < 1) throw ParameterError("portmanteau: need m >= 1");
    if (m >= T) throw ParameterError("portmanteau: m must be < series length");
    Correlogram c = acf(x, m);
    TestResult r;
    r.kind = small_sample_correction ? TestKind::ljung_box : TestKind::box_pierce;
    r.lags_tested = m;
    r.dof = m;
    r.per_lag.emplace();
    double q = 0.0;
    for (int k = 1; k <= m; ++k) {
        const double rho = c.acf[k - 1];
        if (small_sample_correction)
            q += static_cast<double>(T) * (T + 2.0) * rho * rho / static_cast<double>(T - k);
        else
            q += static_cast<double>(T) * rho * rho;
        r.per_lag->push_back({k, q, chi_squared_sf(q, k)});
    }
    r.statistic = q;
    r.p_value = chi_squared_sf(q, m);
    return r;
}

}  // namespace

double chi_squared_sf(double x, int dof) {
    if (x < 0) throw DomainError("chi_squared_sf: x must be >= 0");
    if (dof < 1) throw DomainError("chi_squared_sf: dof must be >= 1");
    if (x == 0.0) return 1.0;
    const double a = 0.5 * dof;
    const double xs = 0.5 * x;
    if (xs < a + 1.0) return 1.0 - gamma_p_series(a, xs);
    return gamma_q_contfrac(a, xs);
}

double normal_sf(double z) { return 0.5 * std::erfc(z / 1.4142135623730950488); }

Correlogram acf(const Series& x, int max_lag) {
    const long T = static_cast<long>(x.size());
    if (max_lag < 1) throw ParameterError("acf: need max_lag >= 1");
    if (max_lag >= T) throw ParameterError("acf: max_lag must be < series length");
    const std::vector<double> d = demeaned(x);
    double denom = 0.0;
    for (double v : d) denom += v * v;
    if (denom <= 0.0) throw DegenerateSeriesError("acf: series '" + x.name() + "' has zero variance");

    Correlogram c;
    c.sample_size = T;
    c.acf.resize(max_lag);
    c.bartlett_se.resize(max_lag);
    double cum = 0.0;  // sum of rho_j^2 for j < k
    for (int k = 1; k <= max_lag; ++k) {
        double num = 0.0;
        for (long t = k; t < T; ++t) num += d[t] * d[t - k];
        c.acf[k - 1] = num / denom;
        c.bartlett_se[k - 1] = std::sqrt((1.0 + 2.0 * cum) / static_cast<double>(T));
        cum += c.acf[k - 1] * c.acf[k - 1];
    }
    return c;
}

TestResult ljung_box(const Series& x, int m) { return portmanteau(x, m, true); }

TestResult box_pierce(const Series& x, int m) { return portmanteau(x, m, false); }

TestResult panel_serial_test(const Panel& panel, const std::string& variable, int m) {
    if (m < 1) throw ParameterError("panel_serial_test: need m >= 1");
    const auto& entities = panel.entities();
    if (entities.size() < 2)
        throw InsufficientSampleError("panel_serial_test: needs at least 2 entities");

    std::vector<std::vector<double>> y;
    for (const auto& e : entities) {
        const Series& s = panel.at(e, variable);
        if (static_cast<long>(s.size()) < m + 2)
            throw InsufficientSampleError("panel_serial_test: entity '" + e +
                                          "' shorter than m+2 periods");
        y.push_back(s.values());
    }

    // Two-way within transform: alternate entity and period demeaning.
    // One pass each is exact for balanced panels; iteration handles the
    // unbalanced case.
    const std::size_t N = y.size();
    for (int pass = 0; pass < 100; ++pass) {
        double max_change = 0.0;
        for (auto& yi : y) {
            const double mu =
                std::accumulate(yi.begin(), yi.end(), 0.0) / static_cast<double>(yi.size());
            for (auto& v : yi) v -= mu;
            max_change = std::max(max_change, std::abs(mu));
        }
        std::size_t max_t = 0;
        for (const auto& yi : y) max_t = std::max(max_t, yi.size());
        for (std::size_t t = 0; t < max_t; ++t) {
            double sum = 0.0;
            long n = 0;
            for (const auto& yi : y)
                if (t < yi.size()) {
                    sum += yi[t];
                    ++n;
                }
            const double mu = sum / static_cast<double>(n);
            for (auto& yi : y)
                if (t < yi.size()) yi[t] -= mu;
            max_change = std::max(max_change, std::abs(mu));
        }
        if (max_change < 1e-12) break;
    }

    TestResult r;
    r.kind = TestKind::panel_joint;
    r.lags_tested = m;
    r.dof = m;
    r.per_lag.emplace();
    double joint = 0.0;
    for (int k = 1; k <= m; ++k) {
        double num = 0.0, den = 0.0;
        for (std::size_t i = 0; i < N; ++i) {
            const auto& yi = y[i];
            const long Ti = static_cast<long>(yi.size());
            double s = 0.0, ss = 0.0;
            for (long t = k; t < Ti; ++t) s += yi[t] * yi[t - k];
            for (long t = 0; t < Ti; ++t) ss += yi[t] * yi[t];
            // Center for the demeaning-induced bias: E[s_i] ~ -(T-k)/T sigma^2
            // under the null, with sigma^2 estimated from the transformed data.
            const double sigma2 = ss / std::max<long>(Ti - 1, 1);
            const double adj = s + sigma2 * static_cast<double>(Ti - k) / static_cast<double>(Ti);
            num += adj;
            den += adj * adj;
        }
        if (den <= 0.0)
            throw DegenerateSeriesError("panel_serial_test: no variation at lag " +
                                        std::to_string(k));
        const double z = num / std::sqrt(den);
        joint += z * z;
        r.per_lag->push_back({k, z, 2.0 * normal_sf(std::abs(z))});
    }
    r.statistic = joint;
    r.p_value = chi_squared_sf(joint, m);
    return r;
}

}  // namespace irfkit
