#include "irfkit/dgpsim.hpp"

#include <cmath>

#include "irfkit/errors.hpp"
#include "irfkit/rng.hpp"

namespace irfkit {

namespace {
constexpr long kBurnIn = 1000;
}

void DgpSpec::validate() const {
    if (std::abs(gamma) >= 1.0) throw SpecError("dgp: |gamma| must be < 1 for stationarity");
    if (kind == DgpKind::extended || kind == DgpKind::external_shock)
        if (std::abs(rho) >= 1.0) throw SpecError("dgp: |rho| must be < 1 for stationarity");
    if (sigma_u < 0 || sigma_eps < 0) throw SpecError("dgp: sigmas must be >= 0");
    if (kind == DgpKind::external_shock) {
        if (!shock) throw SpecError("dgp: external_shock needs a shock series");
        if (shock->size() < 10) throw SpecError("dgp: external shock shorter than 10 periods");
    } else if (length < 10) {
        throw SpecError("dgp: length must be >= 10");
    }
}

const Series& SimulatedData::at(const std::string& name) const {
    auto it = series.find(name);
    if (it == series.end()) throw ParameterError("simulated data: no series '" + name + "'");
    return it->second;
}

SimulatedData simulate(const DgpSpec& spec) {
    spec.validate();
    Rng rng(spec.seed);
    SimulatedData out;
    out.spec = spec;

    if (spec.kind == DgpKind::external_shock) {
        // The shock path is data, so there is no burn-in; y starts at zero.
        const auto& x = spec.shock->values();
        const long T = static_cast<long>(x.size());
        std::vector<double> y(T);
        double y_prev = 0.0, x_prev = 0.0;
        for (long t = 0; t < T; ++t) {
            const double u = spec.sigma_u * rng.next_normal();
            y[t] = spec.rho * y_prev + spec.b0 * x[t] + spec.b1 * x_prev + u;
            y_prev = y[t];
            x_prev = x[t];
        }
        out.series.emplace("x", spec.shock->renamed("x"));
        out.series.emplace("y", Series("y", std::move(y)));
        return out;
    }

    const long T = spec.length;
    const long total = T + kBurnIn;

    if (spec.kind == DgpKind::simple || spec.kind == DgpKind::extended) {
        std::vector<double> x(T), y(T), eps(T);
        double x_prev = 0.0, y_prev = 0.0;
        for (long t = 0; t < total; ++t) {
            // Draw order per period: eps, then u.
            const double e = spec.sigma_eps * rng.next_normal();
            const double u = spec.sigma_u * rng.next_normal();
            const double x_t = spec.gamma * x_prev + e;
            const double y_t = spec.kind == DgpKind::simple
                                   ? spec.delta * x_t + u
                                   : spec.rho * y_prev + spec.b0 * x_t + spec.b1 * x_prev + u;
            if (t >= kBurnIn) {
                x[t - kBurnIn] = x_t;
                y[t - kBurnIn] = y_t;
                eps[t - kBurnIn] = e;
            }
            x_prev = x_t;
            y_prev = y_t;
        }
        out.series.emplace("x", Series("x", std::move(x)));
        out.series.emplace("y", Series("y", std::move(y)));
        out.series.emplace("eps", Series("eps", std::move(eps)));
        return out;
    }

    // iv
    std::vector<double> x(T), y(T), g(T), z(T), m(T), a(T), u(T), eps(T);
    double x_prev = 0.0;
    for (long t = 0; t < total; ++t) {
        // Draw order per period: eps, m, a, nu.
        const double e = rng.next_normal();
        const double m_t = rng.next_normal();
        const double a_t = rng.next_normal();
        const double nu_t = rng.next_normal();
        const double x_t = spec.gamma * x_prev + e;
        const double u_t = m_t + a_t;
        const double g_t = spec.lambda * x_t + (1.0 - spec.lambda) * m_t;
        const double y_t = spec.beta * g_t + u_t;
        const double z_t = x_t + nu_t;
        if (t >= kBurnIn) {
            const long i = t - kBurnIn;
            x[i] = x_t;
            y[i] = y_t;
            g[i] = g_t;
            z[i] = z_t;
            m[i] = m_t;
            a[i] = a_t;
            u[i] = u_t;
            eps[i] = e;
        }
        x_prev = x_t;
    }
    out.series.emplace("x", Series("x", std::move(x)));
    out.series.emplace("y", Series("y", std::move(y)));
    out.series.emplace("g", Series("g", std::move(g)));
    out.series.emplace("z", Series("z", std::move(z)));
    out.series.emplace("m", Series("m", std::move(m)));
    out.series.emplace("a", Series("a", std::move(a)));
    out.series.emplace("u", Series("u", std::move(u)));
    out.series.emplace("eps", Series("eps", std::move(eps)));
    return out;
}

std::vector<double> closed_form_irf(const DgpSpec& spec, int max_horizon, bool persistent) {
    if (max_horizon < 0) throw ParameterError("closed_form_irf: horizon must be >= 0");
    if (spec.kind != DgpKind::simple && spec.kind != DgpKind::extended)
        throw SpecError("closed_form_irf: only simple and extended processes have closed forms");

    std::vector<double> path(static_cast<std::size_t>(max_horizon) + 1);
    // Shock path after a unit impulse: gamma^j when propagating, one-off otherwise.
    auto xi = [&](int j) {
        if (j < 0) return 0.0;
        if (!persistent) return j == 0 ? 1.0 : 0.0;
        return std::pow(spec.gamma, j);
    };
    if (spec.kind == DgpKind::simple) {
        for (int h = 0; h <= max_horizon; ++h) path[h] = spec.delta * xi(h);
        return path;
    }
    double prev = 0.0;
    for (int h = 0; h <= max_horizon; ++h) {
        path[h] = spec.rho * prev + spec.b0 * xi(h) + spec.b1 * xi(h - 1);
        prev = path[h];
    }
    return path;
}

}  // namespace irfkit
