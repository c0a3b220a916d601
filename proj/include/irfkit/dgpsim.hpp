#ifndef IRFKIT_DGPSIM_HPP
#define IRFKIT_DGPSIM_HPP

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "irfkit/series.hpp"

namespace irfkit {

enum class DgpKind { simple, extended, iv, external_shock };

/// Parameterization of one simulated data-generating process.
///
///   simple:    y_t = delta x_t + u_t,                      x_t = gamma x_{t-1} + eps_t
///   extended:  y_t = rho y_{t-1} + b0 x_t + b1 x_{t-1} + u_t,  x_t AR(1)(gamma)
///   iv:        y_t = beta g_t + u_t, u_t = m_t + a_t,
///              g_t = lambda x_t + (1-lambda) m_t, z_t = x_t + nu_t, x_t AR(1)(gamma);
///              all innovations standard normal
///   external_shock: x_t supplied verbatim; y_t follows the extended equation
///
/// Stochastic kinds discard a 1000-period burn-in from zero initial states.
struct DgpSpec {
    DgpKind kind = DgpKind::simple;

    double delta = 1.5;  // simple
    double gamma = 0.2;  // shock AR(1)
    double sigma_u = 1.0;
    double sigma_eps = 1.0;

    double rho = 0.9;  // extended / external_shock
    double b0 = 1.5;
    double b1 = 1.0;

    double beta = 2.0;  // iv
    double lambda = 0.5;

    std::optional<Series> shock;  // external_shock

    long length = 1'000'000;
    std::uint64_t seed = 1;

    void validate() const;
};

struct SimulatedData {
    std::map<std::string, Series> series;
    DgpSpec spec;

    const Series& at(const std::string& name) const;
};

SimulatedData simulate(const DgpSpec& spec);

/// Closed-form response paths for the simple and extended processes.
/// persistent=true gives the path when the shock keeps propagating through
/// its own AR(1); persistent=false gives the path to a one-off impulse.
std::vector<double> closed_form_irf(const DgpSpec& spec, int max_horizon, bool persistent);

}  // namespace irfkit

#endif
