#include <doctest.h>

#include <cmath>

#include "irfkit/dgpsim.hpp"
#include "irfkit/diagnostics.hpp"
#include "irfkit/errors.hpp"

using namespace irfkit;

namespace {

double sample_mean(const std::vector<double>& v) {
    double s = 0.0;
    for (double z : v) s += z;
    return s / static_cast<double>(v.size());
}

double sample_var(const std::vector<double>& v) {
    const double m = sample_mean(v);
    double s = 0.0;
    for (double z : v) s += (z - m) * (z - m);
    return s / static_cast<double>(v.size() - 1);
}

}  // namespace

TEST_CASE("simulate: noise-free limit of the simple process") {
    DgpSpec spec;
    spec.kind = DgpKind::simple;
    spec.delta = 1.5;
    spec.gamma = 0.0;
    spec.sigma_u = 1e-12;
    spec.length = 500;
    spec.seed = 3;
    SimulatedData sim = simulate(spec);
    for (std::size_t t = 0; t < 500; ++t)
        CHECK(std::abs(sim.at("y")[t] - 1.5 * sim.at("x")[t]) < 1e-9);
}

TEST_CASE("simulate: extended calibration reproduces the shock autocorrelation") {
    DgpSpec spec;
    spec.kind = DgpKind::extended;
    spec.length = 1000000;
    spec.seed = 11;
    SimulatedData sim = simulate(spec);
    Correlogram c = acf(sim.at("x"), 1);
    CHECK(std::abs(c.acf[0] - 0.200) < 0.005);
    // y inherits high persistence from rho = 0.9
    CHECK(acf(sim.at("y"), 1).acf[0] > 0.6);
}

TEST_CASE("simulate: iv process moments") {
    DgpSpec spec;
    spec.kind = DgpKind::iv;
    spec.gamma = 0.2;
    spec.length = 1000000;
    spec.seed = 5;
    SimulatedData sim = simulate(spec);
    CHECK(std::abs(sample_var(sim.at("x").values()) - 1.0 / 0.96) < 0.01);
    CHECK(std::abs(sample_var(sim.at("z").values()) - (1.0 / 0.96 + 1.0)) < 0.02);
    CHECK(std::abs(sample_mean(sim.at("g").values())) < 0.01);
}

TEST_CASE("simulate: seed determinism and stream independence") {
    DgpSpec spec;
    spec.kind = DgpKind::extended;
    spec.length = 10000;
    spec.seed = 42;
    SimulatedData a = simulate(spec);
    SimulatedData b = simulate(spec);
    CHECK(a.at("y").values() == b.at("y").values());  // bit-for-bit

    spec.seed = 43;
    SimulatedData c = simulate(spec);
    const auto& ya = a.at("eps").values();
    const auto& yc = c.at("eps").values();
    double num = 0.0, da = 0.0, dc = 0.0;
    for (std::size_t t = 0; t < ya.size(); ++t) {
        num += ya[t] * yc[t];
        da += ya[t] * ya[t];
        dc += yc[t] * yc[t];
    }
    CHECK(std::abs(num / std::sqrt(da * dc)) < 0.03);
}

TEST_CASE("simulate: external shock is copied verbatim") {
    std::vector<double> path(64);
    for (std::size_t i = 0; i < path.size(); ++i) path[i] = (i % 7 == 0) ? 1.0 : 0.0;
    DgpSpec spec;
    spec.kind = DgpKind::external_shock;
    spec.shock = Series("news", path);
    spec.seed = 9;
    SimulatedData sim = simulate(spec);
    CHECK(sim.at("x").values() == path);
    CHECK(sim.at("y").size() == path.size());
}

TEST_CASE("simulate: invalid specs") {
    DgpSpec spec;
    spec.gamma = 1.0;
    CHECK_THROWS_AS(simulate(spec), SpecError);
    spec.gamma = 0.2;
    spec.kind = DgpKind::extended;
    spec.rho = -1.2;
    CHECK_THROWS_AS(simulate(spec), SpecError);
    spec.rho = 0.9;
    spec.length = 5;
    CHECK_THROWS_AS(simulate(spec), SpecError);
}

TEST_CASE("closed_form_irf: simple process") {
    DgpSpec spec;
    spec.kind = DgpKind::simple;
    spec.delta = 1.5;
    spec.gamma = 0.2;
    auto r = closed_form_irf(spec, 3, true);
    CHECK(r[0] == doctest::Approx(1.5).epsilon(1e-14));
    CHECK(r[1] == doctest::Approx(0.3).epsilon(1e-14));
    CHECK(r[2] == doctest::Approx(0.06).epsilon(1e-14));
    CHECK(r[3] == doctest::Approx(0.012).epsilon(1e-14));
    auto rs = closed_form_irf(spec, 3, false);
    CHECK(rs[0] == doctest::Approx(1.5).epsilon(1e-14));
    CHECK(rs[1] == 0.0);
    CHECK(rs[2] == 0.0);
}

TEST_CASE("closed_form_irf: extended calibration recursions") {
    DgpSpec spec;
    spec.kind = DgpKind::extended;  // rho=0.9, b0=1.5, b1=1, gamma=0.2 defaults
    auto r = closed_form_irf(spec, 4, true);
    CHECK(r[0] == doctest::Approx(1.5).epsilon(1e-14));
    CHECK(r[1] == doctest::Approx(2.65).epsilon(1e-14));
    CHECK(r[2] == doctest::Approx(2.645).epsilon(1e-14));
    CHECK(r[3] == doctest::Approx(2.4325).epsilon(1e-14));
    CHECK(r[4] == doctest::Approx(2.19965).epsilon(1e-14));

    auto rs = closed_form_irf(spec, 4, false);
    CHECK(rs[0] == doctest::Approx(1.5).epsilon(1e-14));
    CHECK(rs[1] == doctest::Approx(2.35).epsilon(1e-14));
    CHECK(rs[2] == doctest::Approx(2.115).epsilon(1e-14));
    CHECK(rs[3] == doctest::Approx(2.115 * 0.9).epsilon(1e-14));
    CHECK(rs[4] == doctest::Approx(2.115 * 0.81).epsilon(1e-14));
}

TEST_CASE("closed_form_irf: propagation collapses when gamma is zero") {
    DgpSpec spec;
    spec.kind = DgpKind::extended;
    spec.gamma = 0.0;
    auto r = closed_form_irf(spec, 8, true);
    auto rs = closed_form_irf(spec, 8, false);
    for (int h = 0; h <= 8; ++h) CHECK(r[h] == doctest::Approx(rs[h]).epsilon(1e-14));
}

TEST_CASE("closed_form_irf: impact equality for any gamma") {
    for (double g : {-0.5, 0.0, 0.2, 0.7}) {
        DgpSpec spec;
        spec.kind = DgpKind::extended;
        spec.gamma = g;
        CHECK(closed_form_irf(spec, 2, true)[0] ==
              doctest::Approx(closed_form_irf(spec, 2, false)[0]).epsilon(1e-14));
    }
}

TEST_CASE("closed_form_irf: unsupported for the iv process") {
    DgpSpec spec;
    spec.kind = DgpKind::iv;
    CHECK_THROWS_AS(closed_form_irf(spec, 2, true), SpecError);
}
