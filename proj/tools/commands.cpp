#include "commands.hpp"

#include <CLI11.hpp>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "irfkit/csv.hpp"
#include "irfkit/dgpsim.hpp"
#include "irfkit/diagnostics.hpp"
#include "irfkit/errors.hpp"
#include "irfkit/irf.hpp"
#include "irfkit/rng.hpp"
#include "irfkit/series.hpp"
#include "irfkit/varmod.hpp"
#include "irfkit/version.hpp"

namespace irfkit::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::string fmt17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string fmt3(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.3f", v);
    return buf;
}

int resolve_threads(int flag_value) {
    if (flag_value > 0) return flag_value;
    if (const char* env = std::getenv("IRFKIT_THREADS")) {
        const int n = std::atoi(env);
        if (n > 0) return n;
    }
    return 1;
}

void write_text_file(const fs::path& path, const std::string& content) {
    std::ofstream out(path);
    if (!out) throw IngestionError("cannot write '" + path.string() + "'");
    out << content;
}

// The manifest echoes config, seed, version, and RNG algorithm. The thread
// hint is deliberately absent: outputs are byte-identical for any value.
void write_manifest(const fs::path& outdir, const std::string& command, const json& config,
                    const std::vector<std::string>& outputs) {
    json m;
    m["command"] = command;
    m["version"] = kVersion;
    m["rng_algorithm"] = Rng::algorithm;
    m["config"] = config;
    m["outputs"] = outputs;
    write_text_file(outdir / "manifest.json", m.dump(2) + "\n");
}

fs::path prepare_outdir(const std::string& out) {
    fs::path dir(out);
    fs::create_directories(dir);
    return dir;
}

std::vector<std::string> split_csv_list(const std::string& s) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ','))
        if (!item.empty()) out.push_back(item);
    return out;
}

// ---------------------------------------------------------------- simulate

DgpSpec dgp_from_json(const json& j) {
    DgpSpec spec;
    const std::string kind = j.value("kind", "simple");
    if (kind == "simple")
        spec.kind = DgpKind::simple;
    else if (kind == "extended")
        spec.kind = DgpKind::extended;
    else if (kind == "iv")
        spec.kind = DgpKind::iv;
    else if (kind == "external_shock")
        spec.kind = DgpKind::external_shock;
    else
        throw SpecError("config: unknown kind '" + kind + "'");

    spec.delta = j.value("delta", spec.delta);
    spec.gamma = j.value("gamma", spec.gamma);
    spec.sigma_u = j.value("sigma_u", spec.sigma_u);
    spec.sigma_eps = j.value("sigma_eps", spec.sigma_eps);
    spec.rho = j.value("rho", spec.rho);
    spec.b0 = j.value("b0", spec.b0);
    spec.b1 = j.value("b1", spec.b1);
    spec.beta = j.value("beta", spec.beta);
    spec.lambda = j.value("lambda", spec.lambda);
    spec.length = j.value("t", spec.length);
    spec.seed = j.value("seed", spec.seed);

    if (spec.kind == DgpKind::external_shock) {
        if (!j.contains("shock_csv")) throw SpecError("config: external_shock needs shock_csv");
        CsvSchema schema;
        if (j.contains("shock_period")) schema.period = j["shock_period"].get<std::string>();
        schema.values = {j.value("shock_column", std::string("shock"))};
        auto loaded = load_csv(j["shock_csv"].get<std::string>(), schema);
        spec.shock = std::get<SeriesTable>(loaded).series.at(0);
    }
    return spec;
}

json dgp_to_json(const DgpSpec& spec) {
    json j;
    switch (spec.kind) {
        case DgpKind::simple: j["kind"] = "simple"; break;
        case DgpKind::extended: j["kind"] = "extended"; break;
        case DgpKind::iv: j["kind"] = "iv"; break;
        case DgpKind::external_shock: j["kind"] = "external_shock"; break;
    }
    j["t"] = spec.kind == DgpKind::external_shock ? static_cast<long>(spec.shock->size())
                                                  : spec.length;
    j["seed"] = spec.seed;
    j["gamma"] = spec.gamma;
    if (spec.kind == DgpKind::simple) {
        j["delta"] = spec.delta;
        j["sigma_u"] = spec.sigma_u;
        j["sigma_eps"] = spec.sigma_eps;
    }
    if (spec.kind == DgpKind::extended || spec.kind == DgpKind::external_shock) {
        j["rho"] = spec.rho;
        j["b0"] = spec.b0;
        j["b1"] = spec.b1;
        j["sigma_u"] = spec.sigma_u;
        if (spec.kind == DgpKind::extended) j["sigma_eps"] = spec.sigma_eps;
    }
    if (spec.kind == DgpKind::iv) {
        j["beta"] = spec.beta;
        j["lambda"] = spec.lambda;
    }
    return j;
}

int cmd_simulate(const std::string& config_path, std::optional<long> t_override,
                 std::optional<std::uint64_t> seed_override, const std::string& out, int threads) {
    std::ifstream in(config_path);
    if (!in) throw IngestionError("cannot open config '" + config_path + "'");
    json cfg = json::parse(in);
    if (t_override) cfg["t"] = *t_override;
    if (seed_override) cfg["seed"] = *seed_override;
    DgpSpec spec = dgp_from_json(cfg);

    SimulatedData sim = simulate(spec);
    const fs::path dir = prepare_outdir(out);

    std::vector<Series> columns;
    std::vector<std::string> periods;
    const long T = static_cast<long>(sim.series.begin()->second.size());
    for (long t = 1; t <= T; ++t) periods.push_back(std::to_string(t));
    for (const auto& [name, s] : sim.series) columns.push_back(Series(name, s.values(), periods));

    const json echo = dgp_to_json(spec);
    std::vector<std::string> comments{
        std::string("rng=") + Rng::algorithm + " seed=" + std::to_string(spec.seed),
        "config=" + echo.dump()};
    write_csv((dir / "data.csv").string(), columns, comments);
    write_manifest(dir, "simulate", echo, {"data.csv"});
    return 0;
}

// -------------------------------------------------------------------- test

int cmd_test(const std::string& input, const std::string& period, const std::string& entity,
             const std::string& columns, std::vector<int> lag_counts, int acf_lags,
             bool uncorrected, const std::string& out, int threads) {
    if (lag_counts.empty()) lag_counts = {5, 10, 20, 40, 60};
    CsvSchema schema;
    if (!period.empty()) schema.period = period;
    if (!entity.empty()) schema.entity = entity;
    schema.values = split_csv_list(columns);
    auto loaded = load_csv(input, schema, NaPolicy::drop_rows);

    const fs::path dir = prepare_outdir(out);
    json report;
    report["input"] = input;
    report["series"] = json::array();
    std::ostringstream table;
    std::vector<std::string> outputs;

    auto emit_tests = [&](const std::string& name, const std::function<TestResult(int)>& runner,
                          long max_m, const std::string& label_prefix) {
        json jt;
        jt["name"] = name;
        jt["tests"] = json::array();
        table << name;
        for (int m : lag_counts) {
            if (m > max_m) {
                table << "  [" << label_prefix << " (" << m << "): sample too short]";
                continue;
            }
            TestResult r = runner(m);
            json one;
            one["lags"] = r.lags_tested;
            one["statistic"] = r.statistic;
            one["p_value"] = r.p_value;
            one["dof"] = r.dof;
            one["kind"] = r.kind == TestKind::panel_joint
                              ? "panel_joint"
                              : (r.kind == TestKind::box_pierce ? "box_pierce" : "ljung_box");
            if (r.per_lag) {
                json pl = json::array();
                for (const auto& d : *r.per_lag)
                    pl.push_back(
                        {{"lag", d.lag}, {"statistic", d.statistic}, {"p_value", d.p_value}});
                one["per_lag"] = pl;
            }
            jt["tests"].push_back(one);
            table << "  " << label_prefix << " (" << m << "): " << fmt3(r.statistic)
                  << "  p=" << fmt3(r.p_value);
        }
        table << "\n";
        report["series"].push_back(jt);
    };

    if (std::holds_alternative<PanelTable>(loaded)) {
        const Panel& panel = std::get<PanelTable>(loaded).panel;
        long min_len = std::numeric_limits<long>::max();
        for (const auto& e : panel.entities())
            min_len = std::min(min_len,
                               static_cast<long>(panel.at(e, panel.variables().front()).size()));
        for (const auto& var : panel.variables())
            emit_tests(
                var, [&](int m) { return panel_serial_test(panel, var, m); }, min_len - 2,
                "Panel joint");
    } else {
        for (const Series& s : std::get<SeriesTable>(loaded).series) {
            const long T = static_cast<long>(s.size());
            // Ljung-Box corrected statistic under the customary table label
            emit_tests(
                s.name(), [&](int m) { return ljung_box(s, m); }, T - 1, "Box-Pierce");
            if (uncorrected)
                emit_tests(
                    s.name() + " (uncorrected)", [&](int m) { return box_pierce(s, m); }, T - 1,
                    "Box-Pierce uncorrected");
            const int m_acf = static_cast<int>(std::min<long>(acf_lags, T - 1));
            Correlogram c = acf(s, m_acf);
            std::ostringstream cg;
            cg << "lag,acf,bartlett_se,band_lo,band_hi\n";
            for (int k = 1; k <= m_acf; ++k) {
                const double se = c.bartlett_se[k - 1];
                cg << k << "," << fmt17(c.acf[k - 1]) << "," << fmt17(se) << ","
                   << fmt17(-1.959963984540054 * se) << "," << fmt17(1.959963984540054 * se)
                   << "\n";
            }
            const std::string fname = "correlogram_" + s.name() + ".csv";
            write_text_file(dir / fname, cg.str());
            outputs.push_back(fname);
        }
    }

    write_text_file(dir / "report.txt", table.str());
    write_text_file(dir / "report.json", report.dump(2) + "\n");
    outputs.insert(outputs.begin(), {"report.txt", "report.json"});
    json cfg{{"input", input},         {"period", period},   {"entity", entity},
             {"columns", columns},     {"lags", lag_counts}, {"acf_lags", acf_lags},
             {"uncorrected", uncorrected}};
    write_manifest(dir, "test", cfg, outputs);
    return 0;
}

// --------------------------------------------------------------------- irf

json irf_to_json(const IrfResult& r, const std::string& estimator_label) {
    json j;
    j["estimator"] = estimator_label;
    json horizons = json::array();
    for (int h = 0; h <= r.horizon; ++h) horizons.push_back(h);
    j["horizons"] = horizons;
    const IrfPath& p = r.primary();
    j["point"] = p.point;
    j["se"] = p.se;
    j["ci_lo"] = p.ci_lo;
    j["ci_hi"] = p.ci_hi;
    j["ci_level"] = r.ci_level;
    j["nobs"] = r.nobs;
    j["warnings"] = r.warnings;
    json paths = json::array();
    for (const auto& path : r.paths)
        paths.push_back({{"label", path.label},
                         {"point", path.point},
                         {"se", path.se},
                         {"ci_lo", path.ci_lo},
                         {"ci_hi", path.ci_hi}});
    j["paths"] = paths;
    if (!r.shock_ar_coef.empty()) j["shock_ar_coef"] = r.shock_ar_coef;
    if (r.implied_counterfactual) j["implied_counterfactual"] = *r.implied_counterfactual;
    return j;
}

std::string irf_to_csv(const IrfResult& r) {
    std::ostringstream out;
    out << "path,h,point,se,ci_lo,ci_hi,nobs\n";
    for (const auto& p : r.paths)
        for (std::size_t h = 0; h < p.point.size(); ++h)
            out << p.label << "," << h << "," << fmt17(p.point[h]) << "," << fmt17(p.se[h]) << ","
                << fmt17(p.ci_lo[h]) << "," << fmt17(p.ci_hi[h]) << ","
                << (h < r.nobs.size() ? r.nobs[h] : 0) << "\n";
    return out.str();
}

LeadsRule parse_leads_rule(const std::string& s) {
    if (s == "conservative") return LeadsRule::conservative();
    if (s.rfind("fixed:", 0) == 0) return LeadsRule::fixed_count(std::stoi(s.substr(6)));
    if (s.rfind("capped:", 0) == 0) return LeadsRule::capped_at(std::stoi(s.substr(7)));
    throw ParameterError("unknown leads rule '" + s + "' (conservative | fixed:N | capped:N)");
}

// Control grammar: comma-separated "name:LAGS", or "name:LAGS+0" to include
// the contemporaneous value as well. A bare "name" gets 4 lags, a quarterly
// default.
std::vector<std::pair<std::string, std::pair<int, bool>>> parse_controls(const std::string& s) {
    std::vector<std::pair<std::string, std::pair<int, bool>>> out;
    for (const auto& item : split_csv_list(s)) {
        const auto colon = item.find(':');
        if (colon == std::string::npos) {
            out.push_back({item, {4, false}});
            continue;
        }
        std::string name = item.substr(0, colon);
        std::string rest = item.substr(colon + 1);
        bool contemp = false;
        if (rest.size() >= 2 && rest.substr(rest.size() - 2) == "+0") {
            contemp = true;
            rest = rest.substr(0, rest.size() - 2);
        }
        out.push_back({name, {std::stoi(rest), contemp}});
    }
    return out;
}

struct IrfCliArgs {
    std::string input, response, shock, estimator = "lp";
    int horizon = 10;
    std::string leads;
    int lead_cap = -1;
    std::string controls;
    std::string nw_bandwidth = "h";
    std::string state, instrument, iv_lead_series;
    bool state_leads = false;
    std::string state_timing = "lagged";
    double ci_level = 0.95;
    bool trend = false;
    bool pad_tail_leads = false;
    bool comparability_trim = false;
    int dlm_extra_lags = 2;
    int shock_ar_order = 1;
    int var_lags = 1;
    int varx_dlags = -1;
    std::string period;
    std::string out = ".";
};

int cmd_irf(const IrfCliArgs& a, int threads) {
    CsvSchema schema;
    if (!a.period.empty()) schema.period = a.period;
    auto loaded = load_csv(a.input, schema, NaPolicy::drop_rows);
    const auto& table = std::get<SeriesTable>(loaded);
    auto find = [&](const std::string& name) -> const Series& {
        for (const auto& s : table.series)
            if (s.name() == name) return s;
        throw ParameterError("input has no column '" + name + "'");
    };

    const Series& y = find(a.response);
    const Series& shock = find(a.shock);
    const fs::path dir = prepare_outdir(a.out);

    IrfResult result;
    if (a.estimator == "var-endog") {
        VarFit fit = fit_var({shock, y}, a.var_lags);
        result = cholesky_irf(fit, a.horizon, shock.name(), {shock.name(), y.name()});
        std::swap(result.paths[0], result.paths[1]);  // response path first
    } else if (a.estimator == "var-x") {
        const int q = a.varx_dlags >= 0 ? a.varx_dlags : a.horizon;
        result = varx_irf({y}, shock, a.var_lags, q, a.horizon);
    } else {
        IrfSpec spec;
        spec.estimator = estimator_from_name(a.estimator);
        spec.horizon = a.horizon;
        spec.ci_level = a.ci_level;
        spec.threads = threads;
        spec.include_trend = a.trend;
        spec.pad_tail_leads = a.pad_tail_leads;
        spec.comparability_trim = a.comparability_trim;
        spec.dlm_extra_lags = a.dlm_extra_lags;
        spec.shock_ar_order = a.shock_ar_order;
        spec.state_timing_lagged = a.state_timing != "contemporaneous";
        spec.state_leads = a.state_leads;
        if (!a.leads.empty())
            spec.leads = parse_leads_rule(a.leads);
        else if (a.lead_cap >= 0)
            spec.leads = LeadsRule::capped_at(a.lead_cap);
        if (a.lead_cap >= 0 && spec.leads && spec.leads->kind == LeadsRule::Kind::conservative_h)
            spec.leads = LeadsRule::capped_at(a.lead_cap);
        if (a.nw_bandwidth != "h") spec.nw_bandwidth = std::stoi(a.nw_bandwidth);
        for (const auto& [name, lc] : parse_controls(a.controls))
            spec.controls.push_back({find(name), lc.first, lc.second});
        if (!a.instrument.empty()) spec.instrument = find(a.instrument);
        if (!a.iv_lead_series.empty()) spec.iv_lead_series = find(a.iv_lead_series);
        if (!a.state.empty()) spec.state = find(a.state);
        result = estimate_irf(y, shock, spec);
    }

    write_text_file(dir / "irf.json", irf_to_json(result, a.estimator).dump(2) + "\n");
    write_text_file(dir / "irf.csv", irf_to_csv(result));
    json cfg{{"input", a.input},       {"response", a.response},
             {"shock", a.shock},       {"estimator", a.estimator},
             {"horizon", a.horizon},   {"leads", a.leads},
             {"controls", a.controls}, {"nw_bandwidth", a.nw_bandwidth},
             {"state", a.state},       {"instrument", a.instrument},
             {"ci_level", a.ci_level}, {"trend", a.trend},
             {"pad_tail_leads", a.pad_tail_leads},
             {"comparability_trim", a.comparability_trim}};
    write_manifest(dir, "irf", cfg, {"irf.json", "irf.csv"});
    return 0;
}

// -------------------------------------------------------------- multiplier

IrfResult irf_from_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IngestionError("cannot open '" + path + "'");
    json j = json::parse(in);
    IrfResult r;
    IrfPath p;
    p.label = "linear";
    p.point = j.at("point").get<std::vector<double>>();
    p.se = j.value("se", std::vector<double>(p.point.size(), 0.0));
    p.ci_lo = j.value("ci_lo", p.point);
    p.ci_hi = j.value("ci_hi", p.point);
    r.horizon = static_cast<int>(p.point.size()) - 1;
    r.paths.push_back(std::move(p));
    r.nobs = j.value("nobs", std::vector<long>(static_cast<std::size_t>(r.horizon) + 1, 0));
    return r;
}

int cmd_multiplier(const std::string& num_path, const std::string& den_path,
                   const std::string& out, int threads) {
    IrfResult num = irf_from_json(num_path);
    IrfResult den = irf_from_json(den_path);
    auto m = cumulative_multiplier(num, den);

    const fs::path dir = prepare_outdir(out);
    json j;
    json horizons = json::array(), values = json::array();
    std::ostringstream csv;
    csv << "h,multiplier\n";
    for (std::size_t h = 0; h < m.size(); ++h) {
        horizons.push_back(h);
        if (std::isnan(m[h])) {
            values.push_back(nullptr);
            csv << h << ",undefined\n";
        } else {
            values.push_back(m[h]);
            csv << h << "," << fmt17(m[h]) << "\n";
        }
    }
    j["horizons"] = horizons;
    j["multiplier"] = values;
    write_text_file(dir / "multiplier.json", j.dump(2) + "\n");
    write_text_file(dir / "multiplier.csv", csv.str());
    json cfg{{"num", num_path}, {"den", den_path}};
    write_manifest(dir, "multiplier", cfg, {"multiplier.json", "multiplier.csv"});
    return 0;
}

// --------------------------------------------------------------- replicate

struct CurveSet {
    json legend = json::array();
    std::vector<std::string> outputs;

    void add(const fs::path& dir, const std::string& id, const std::string& legend_text,
             const std::vector<double>& values) {
        const std::string file = "curve_" + id + ".csv";
        std::ostringstream out;
        out << "h,value\n";
        for (std::size_t h = 0; h < values.size(); ++h)
            out << h << "," << fmt17(values[h]) << "\n";
        write_text_file(dir / file, out.str());
        outputs.push_back(file);
        legend.push_back({{"id", id}, {"file", file}, {"legend", legend_text}});
    }
};

IrfSpec replicate_lp_spec(const SimulatedData& sim, int H, int threads) {
    IrfSpec spec;
    spec.horizon = H;
    spec.controls.push_back({sim.at("y"), 1, false});
    spec.controls.push_back({sim.at("x"), 1, false});
    spec.compute_se = false;
    spec.comparability_trim = true;
    spec.threads = threads;
    return spec;
}

int cmd_replicate(const std::string& figure, long T, std::uint64_t seed, int horizon,
                  long replications, const std::string& shock_csv,
                  const std::string& shock_column, const std::string& out, int threads) {
    const fs::path dir = prepare_outdir(out);
    CurveSet curves;
    const int H = horizon;

    auto extended = [&](double gamma) {
        DgpSpec d;
        d.kind = DgpKind::extended;
        d.gamma = gamma;
        d.length = T;
        d.seed = seed;
        return simulate(d);
    };

    if (figure == "fig1") {
        SimulatedData sim0 = extended(0.0);
        SimulatedData sim2 = extended(0.2);
        curves.add(
            dir, "gamma0_noleads", "gamma=0, no leads",
            lp(sim0.at("y"), sim0.at("x"), replicate_lp_spec(sim0, H, threads)).primary().point);
        curves.add(
            dir, "gamma02_noleads", "gamma=0.2, no leads",
            lp(sim2.at("y"), sim2.at("x"), replicate_lp_spec(sim2, H, threads)).primary().point);
        IrfSpec leads = replicate_lp_spec(sim2, H, threads);
        leads.leads = LeadsRule::conservative();
        curves.add(dir, "gamma02_leads", "gamma=0.2, leads",
                   lp_leads(sim2.at("y"), sim2.at("x"), leads).primary().point);
    } else if (figure == "fig2") {
        SimulatedData sim0 = extended(0.0);
        SimulatedData sim2 = extended(0.2);
        IrfSpec spec;
        spec.horizon = H;
        spec.compute_se = false;
        spec.threads = threads;
        curves.add(dir, "gamma0_dlm", "gamma=0, distributed lag",
                   dlm(sim0.at("y"), sim0.at("x"), spec).primary().point);
        curves.add(dir, "gamma02_dlm", "gamma=0.2, distributed lag",
                   dlm(sim2.at("y"), sim2.at("x"), spec).primary().point);
        curves.add(dir, "gamma02_dlm_innov", "gamma=0.2, innovation distributed lag",
                   dlm_innovation(sim2.at("y"), sim2.at("x"), spec).primary().point);
    } else if (figure == "figB1") {
        for (double gamma : {0.0, 0.2}) {
            SimulatedData sim = extended(gamma);
            const std::string suffix = gamma == 0.0 ? "gamma0" : "gamma02";
            VarFit fit = fit_var({sim.at("x"), sim.at("y")}, 1);
            IrfResult var_irf = cholesky_irf(fit, H, "x", {"x", "y"});
            curves.add(dir, "var_y_" + suffix, "VAR response of y (" + suffix + ")",
                       var_irf.path("y").point);
            curves.add(dir, "var_x_" + suffix, "VAR response of x (" + suffix + ")",
                       var_irf.path("x").point);
            curves.add(dir, "lp_y_" + suffix, "LP response of y (" + suffix + ")",
                       lp(sim.at("y"), sim.at("x"), replicate_lp_spec(sim, H, threads))
                           .primary()
                           .point);
        }
    } else if (figure == "figB2") {
        for (double gamma : {0.0, 0.2}) {
            SimulatedData sim = extended(gamma);
            const std::string suffix = gamma == 0.0 ? "gamma0" : "gamma02";
            VarFit fit = fit_var({sim.at("x"), sim.at("y")}, 1);
            curves.add(dir, "endogenous_" + suffix, "shock endogenous (" + suffix + ")",
                       cholesky_irf(fit, H, "x", {"x", "y"}).path("y").point);
            curves.add(dir, "exogenous_" + suffix, "shock exogenous (" + suffix + ")",
                       varx_irf({sim.at("y")}, sim.at("x"), 1, H, H).path("y").point);
        }
    } else if (figure == "figB3") {
        if (shock_csv.empty())
            throw IngestionError(
                "figB3 simulates around a user-supplied shock series; pass --shock-csv (and "
                "--shock-column) pointing at it");
        CsvSchema schema;
        schema.values = {shock_column};
        auto loaded = load_csv(shock_csv, schema, NaPolicy::drop_rows);
        Series shock = std::get<SeriesTable>(loaded).series.at(0).renamed("x");

        std::vector<std::vector<double>> acc(3);
        for (long r = 0; r < replications; ++r) {
            DgpSpec dr;
            dr.kind = DgpKind::external_shock;
            dr.shock = shock;
            dr.seed = Rng::for_replicate(seed, static_cast<std::uint64_t>(r)).next_u64();
            SimulatedData sim = simulate(dr);
            IrfSpec base = replicate_lp_spec(sim, H, threads);
            base.comparability_trim = false;
            std::vector<IrfResult> runs;
            runs.push_back(lp(sim.at("y"), sim.at("x"), base));
            IrfSpec one = base;
            one.leads = LeadsRule::fixed_count(1);
            runs.push_back(lp_leads(sim.at("y"), sim.at("x"), one));
            IrfSpec all = base;
            all.leads = LeadsRule::conservative();
            runs.push_back(lp_leads(sim.at("y"), sim.at("x"), all));
            for (int i = 0; i < 3; ++i) {
                const auto& pts = runs[i].primary().point;
                if (acc[i].empty()) acc[i].assign(pts.size(), 0.0);
                for (std::size_t h = 0; h < pts.size() && h < acc[i].size(); ++h)
                    acc[i][h] += pts[h];
            }
        }
        for (auto& a : acc)
            for (auto& v : a) v /= static_cast<double>(replications);
        DgpSpec theory;
        theory.kind = DgpKind::extended;
        curves.add(dir, "theoretical", "one-off response (closed form)",
                   closed_form_irf(theory, H, false));
        curves.add(dir, "lp_noleads", "lp, no leads", acc[0]);
        curves.add(dir, "lp_1lead", "lp, 1 lead", acc[1]);
        curves.add(dir, "lp_allleads", "lp, h leads", acc[2]);
    } else if (figure == "figB4") {
        auto iv_sim = [&](double gamma, double lambda) {
            DgpSpec d;
            d.kind = DgpKind::iv;
            d.gamma = gamma;
            d.lambda = lambda;
            d.length = T;
            d.seed = seed;
            return simulate(d);
        };
        IrfSpec plain;
        plain.horizon = H;
        plain.compute_se = false;
        plain.threads = threads;

        SimulatedData bench = iv_sim(0.0, 1.0);
        curves.add(dir, "benchmark", "no endogeneity, no persistence",
                   lp(bench.at("y"), bench.at("g"), plain).primary().point);
        for (double gamma : {0.0, 0.2}) {
            SimulatedData sim = iv_sim(gamma, 0.5);
            const std::string suffix = gamma == 0.0 ? "gamma0" : "gamma02";
            curves.add(dir, "ols_" + suffix, "least squares (" + suffix + ")",
                       lp(sim.at("y"), sim.at("g"), plain).primary().point);
            IrfSpec iv = plain;
            iv.estimator = Estimator::lp_iv;
            curves.add(dir, "lpiv_" + suffix, "instrumented (" + suffix + ")",
                       lp_iv(sim.at("y"), sim.at("g"), sim.at("z"), iv).primary().point);
            if (gamma != 0.0) {
                IrfSpec ivleads = plain;
                ivleads.estimator = Estimator::lp_iv_leads;
                ivleads.leads = LeadsRule::conservative();
                ivleads.iv_lead_series = sim.at("x");
                curves.add(dir, "lpiv_leads_" + suffix, "instrumented, shock leads (" + suffix + ")",
                           lp_iv(sim.at("y"), sim.at("g"), sim.at("z"), ivleads).primary().point);
            }
        }
    } else if (figure == "figB5") {
        SimulatedData sim0 = extended(0.0);
        SimulatedData sim2 = extended(0.2);
        curves.add(dir, "gamma0_residadj", "gamma=0, residual-adjusted",
                   lp_residual_adjusted(sim0.at("y"), sim0.at("x"),
                                        replicate_lp_spec(sim0, H, threads))
                       .primary()
                       .point);
        curves.add(dir, "gamma02_residadj", "gamma=0.2, residual-adjusted",
                   lp_residual_adjusted(sim2.at("y"), sim2.at("x"),
                                        replicate_lp_spec(sim2, H, threads))
                       .primary()
                       .point);
        curves.add(
            dir, "gamma02_lp", "gamma=0.2, plain lp",
            lp(sim2.at("y"), sim2.at("x"), replicate_lp_spec(sim2, H, threads)).primary().point);
        IrfSpec leads = replicate_lp_spec(sim2, H, threads);
        leads.leads = LeadsRule::conservative();
        curves.add(dir, "gamma02_leads", "gamma=0.2, leads (one-off reference)",
                   lp_leads(sim2.at("y"), sim2.at("x"), leads).primary().point);
    } else {
        throw ParameterError("unknown figure id '" + figure +
                             "' (fig1, fig2, figB1, figB2, figB3, figB4, figB5)");
    }

    json cfg{{"figure", figure}, {"t", T},           {"seed", seed},
             {"horizon", H},     {"replications", replications}, {"shock_csv", shock_csv}};
    json manifest_cfg = cfg;
    manifest_cfg["curves"] = curves.legend;
    write_manifest(dir, "replicate", manifest_cfg, curves.outputs);
    return 0;
}

}  // namespace

int run(int argc, const char* const* argv) {
    CLI::App app{"irfkit: impulse responses to persistent, independently identified shocks"};
    app.require_subcommand(1);
    int threads_flag = 0;
    app.add_option("--threads,-j", threads_flag, "worker threads (default: IRFKIT_THREADS or 1)");

    auto* sim_cmd = app.add_subcommand("simulate", "simulate a configured process to CSV");
    std::string sim_config, sim_out = ".";
    long sim_t = -1;
    std::int64_t sim_seed = -1;
    sim_cmd->add_option("--config", sim_config, "JSON process config")->required();
    sim_cmd->add_option("--t", sim_t, "override sample length");
    sim_cmd->add_option("--seed", sim_seed, "override seed");
    sim_cmd->add_option("--out", sim_out, "output directory");

    auto* test_cmd = app.add_subcommand("test", "serial-correlation tests and correlograms");
    std::string t_input, t_period, t_entity, t_columns, t_out = ".";
    std::vector<int> t_lags;
    int t_acf_lags = 40;
    bool t_uncorrected = false;
    test_cmd->add_option("--input", t_input, "input CSV")->required();
    test_cmd->add_option("--period", t_period, "period column name");
    test_cmd->add_option("--entity", t_entity, "entity column name (panel input)");
    test_cmd->add_option("--columns", t_columns, "value columns (comma list; default: all)");
    test_cmd->add_option("--lags", t_lags, "lag counts (default 5 10 20 40 60)");
    test_cmd->add_option("--acf-lags", t_acf_lags, "correlogram length");
    test_cmd->add_flag("--uncorrected", t_uncorrected,
                       "also report the statistic without the small-sample correction");
    test_cmd->add_option("--out", t_out, "output directory");

    auto* irf_cmd = app.add_subcommand("irf", "estimate impulse responses");
    IrfCliArgs a;
    irf_cmd->add_option("--input", a.input, "input CSV")->required();
    irf_cmd->add_option("--response", a.response, "outcome column")->required();
    irf_cmd->add_option("--shock", a.shock, "shock / endogenous column")->required();
    irf_cmd->add_option("--estimator", a.estimator,
                        "lp | lp-leads | dlm | dlm-innovation | lp-residual-adjusted | lp-iv | "
                        "lp-iv-leads | nonlinear-lp | var-endog | var-x");
    irf_cmd->add_option("--horizon", a.horizon, "maximum horizon");
    irf_cmd->add_option("--leads", a.leads, "conservative | fixed:N | capped:N");
    irf_cmd->add_option("--lead-cap", a.lead_cap, "cap the per-horizon lead count at N");
    irf_cmd->add_option("--controls", a.controls, "controls, e.g. y:1,x:2+0");
    irf_cmd->add_option("--nw-bandwidth", a.nw_bandwidth, "h (per horizon) or a fixed integer");
    irf_cmd->add_option("--state", a.state, "binary state column (nonlinear-lp)");
    irf_cmd->add_flag("--state-leads", a.state_leads, "also control for leads of the state");
    irf_cmd->add_option("--state-timing", a.state_timing, "lagged (default) | contemporaneous");
    irf_cmd->add_option("--instrument", a.instrument, "instrument column (lp-iv)");
    irf_cmd->add_option("--iv-lead-series", a.iv_lead_series,
                        "series supplying exogenous lead controls (default: instrument)");
    irf_cmd->add_option("--ci-level", a.ci_level, "confidence level");
    irf_cmd->add_flag("--trend", a.trend, "include a linear deterministic trend");
    irf_cmd->add_flag("--pad-tail-leads", a.pad_tail_leads,
                      "zero-fill leads past the sample end instead of dropping rows");
    irf_cmd->add_flag("--comparability-trim", a.comparability_trim,
                      "trim lead-free designs to the lead-augmented sample");
    irf_cmd->add_option("--dlm-extra-lags", a.dlm_extra_lags, "guard lags beyond the horizon");
    irf_cmd->add_option("--shock-ar-order", a.shock_ar_order, "AR order for innovations");
    irf_cmd->add_option("--var-lags", a.var_lags, "VAR lag order (var-endog / var-x)");
    irf_cmd->add_option("--varx-dlags", a.varx_dlags, "distributed-lag order for var-x");
    irf_cmd->add_option("--period", a.period, "period column name");
    irf_cmd->add_option("--out", a.out, "output directory");

    auto* mult_cmd = app.add_subcommand("multiplier", "cumulative multiplier of two responses");
    std::string m_num, m_den, m_out = ".";
    mult_cmd->add_option("--num", m_num, "numerator irf.json")->required();
    mult_cmd->add_option("--den", m_den, "denominator irf.json")->required();
    mult_cmd->add_option("--out", m_out, "output directory");

    auto* rep_cmd = app.add_subcommand("replicate", "run a canned simulation battery");
    std::string r_figure, r_shock_csv, r_shock_column = "shock", r_out = ".";
    long r_t = 1000000, r_reps = 10000;
    std::int64_t r_seed = 1;
    int r_horizon = 20;
    rep_cmd->add_option("--figure", r_figure, "fig1 | fig2 | figB1 | figB2 | figB3 | figB4 | figB5")
        ->required();
    rep_cmd->add_option("--t", r_t, "simulated length");
    rep_cmd->add_option("--seed", r_seed, "seed");
    rep_cmd->add_option("--horizon", r_horizon, "maximum horizon");
    rep_cmd->add_option("--replications", r_reps, "replications (figB3)");
    rep_cmd->add_option("--shock-csv", r_shock_csv, "user-supplied shock CSV (figB3)");
    rep_cmd->add_option("--shock-column", r_shock_column, "shock column name (figB3)");
    rep_cmd->add_option("--out", r_out, "output directory");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    const int threads = resolve_threads(threads_flag);
    try {
        if (*sim_cmd)
            return cmd_simulate(
                sim_config, sim_t >= 0 ? std::optional<long>(sim_t) : std::nullopt,
                sim_seed >= 0 ? std::optional<std::uint64_t>(static_cast<std::uint64_t>(sim_seed))
                              : std::nullopt,
                sim_out, threads);
        if (*test_cmd)
            return cmd_test(t_input, t_period, t_entity, t_columns, t_lags, t_acf_lags,
                            t_uncorrected, t_out, threads);
        if (*irf_cmd) return cmd_irf(a, threads);
        if (*mult_cmd) return cmd_multiplier(m_num, m_den, m_out, threads);
        if (*rep_cmd)
            return cmd_replicate(r_figure, r_t, static_cast<std::uint64_t>(r_seed), r_horizon,
                                 r_reps, r_shock_csv, r_shock_column, r_out, threads);
    } catch (const ParameterError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    } catch (const ParseError& e) {
        std::fprintf(stderr, "data error: %s\n", e.what());
        return 2;
    } catch (const StructuralError& e) {
        std::fprintf(stderr, "data error: %s\n", e.what());
        return 2;
    } catch (const IngestionError& e) {
        std::fprintf(stderr, "data error: %s\n", e.what());
        return 2;
    } catch (const InsufficientSampleError& e) {
        std::fprintf(stderr, "data error: %s\n", e.what());
        return 2;
    } catch (const Error& e) {
        std::fprintf(stderr, "numerical error: %s\n", e.what());
        return 3;
    } catch (const json::exception& e) {
        std::fprintf(stderr, "data error: %s\n", e.what());
        return 2;
    }
    return 1;
}

}  // namespace irfkit::cli
