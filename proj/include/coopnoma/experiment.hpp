// Experiment configuration, parameter sweeps and CSV output for the command-line runner.
//
// Config is a flat JSON object. Powers and mean gains are given in dB, rates in
// nats per channel use. See README.md for the key list.

#ifndef COOPNOMA_EXPERIMENT_HPP
#define COOPNOMA_EXPERIMENT_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <limits>
#include <optional>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "analytic.hpp"
#include "asymptotic.hpp"
#include "montecarlo.hpp"
#include "system.hpp"

namespace coopnoma {

class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

inline double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }

enum class SweepVar { None, Rho, Omega2, Alpha1, AlphaJ, K, M };

inline std::string_view to_string(SweepVar v) {
    switch (v) {
        case SweepVar::None: return "none";
        case SweepVar::Rho: return "rho";
        case SweepVar::Omega2: return "omega2";
        case SweepVar::Alpha1: return "alpha1";
        case SweepVar::AlphaJ: return "alphaJ";
        case SweepVar::K: return "K";
        case SweepVar::M: return "m";
    }
    return "?";
}

inline std::optional<SweepVar> parse_sweep_var(std::string_view s) {
    for (auto v : {SweepVar::Rho, SweepVar::Omega2, SweepVar::Alpha1, SweepVar::AlphaJ,
                   SweepVar::K, SweepVar::M}) {
        if (to_string(v) == s) return v;
    }
    return std::nullopt;
}

inline std::optional<Engine> parse_engine(std::string_view s) {
    for (auto e : {Engine::Analytic, Engine::Asymptotic, Engine::MonteCarlo}) {
        if (to_string(e) == s) return e;
    }
    if (s == "mc" || s == "simulation") return Engine::MonteCarlo;
    return std::nullopt;
}

/// Scenario in the units of the config file.
struct Scenario {
    int relays = 2;
    int m_r = 2;
    int m_u = 2;
    int m_e = 2;
    double omega_r_db = 10.0;
    double omega1_db = 12.0;
    double omega2_db = 10.0;
    double omega_e_db = -5.0;
    double ps_db = 10.0;
    double pr_db = 10.0;
    double sigma2 = 1.0;
    double r1_th = 0.2;
    double r2_th = 0.1;
    double r1_s = 0.1;
    double r2_s = 0.2;
    PowerPolicy policy = PowerPolicy::fixed(0.2, 0.5);

    SystemParams params() const {
        SystemParams p;
        p.relays = relays;
        p.links = LinkSet{NakagamiParams(m_r, db_to_linear(omega_r_db)),
                          NakagamiParams(m_u, db_to_linear(omega1_db)),
                          NakagamiParams(m_u, db_to_linear(omega2_db)),
                          NakagamiParams(m_e, db_to_linear(omega_e_db))};
        p.p_source = db_to_linear(ps_db);
        p.p_relay = db_to_linear(pr_db);
        p.sigma2 = sigma2;
        p.r1_th = r1_th;
        p.r2_th = r2_th;
        p.r1_s = r1_s;
        p.r2_s = r2_s;
        return p;
    }

    /// Omega1 / Omega2 and Omega_R / Omega2 held fixed by the asymptotic engine.
    AsymptoticScaling scaling() const {
        return AsymptoticScaling{db_to_linear(omega1_db - omega2_db),
                                 db_to_linear(omega_r_db - omega2_db), db_to_linear(omega2_db)};
    }

    /// Applies one sweep value in config units.
    Scenario with(SweepVar var, double value) const {
        Scenario s = *this;
        switch (var) {
            case SweepVar::None: break;
            case SweepVar::Rho: s.ps_db = value; s.pr_db = value; break;
            case SweepVar::Omega2: {
                const double shift = value - omega2_db;
                s.omega2_db = value;
                s.omega1_db += shift;
                s.omega_r_db += shift;
                break;
            }
            case SweepVar::Alpha1: {
                if (s.policy.is_dynamic()) {
                    throw ConfigError("sweep.var: alpha1 cannot be swept under dynamic allocation");
                }
                s.policy.rule = FixedSplit{value};
                break;
            }
            case SweepVar::AlphaJ: s.policy.alpha_j = value; break;
            case SweepVar::K: s.relays = static_cast<int>(value); break;
            case SweepVar::M: s.m_r = s.m_u = s.m_e = static_cast<int>(value); break;
        }
        return s;
    }
};

struct ExperimentConfig {
    Scenario scenario;
    std::vector<SchemeKind> schemes{SchemeKind::TMRC, SchemeKind::OSRS, SchemeKind::ODRS};
    std::vector<Engine> engines{Engine::Analytic};
    SweepVar sweep_var = SweepVar::None;
    std::vector<double> sweep_values;
    TrialConfig mc;
    int quad_n = kDefaultQuadratureNodes;
    std::string output_path;
};

namespace detail {

using nlohmann::json;

inline const json& require_key(const json& j, const char* key) {
    auto it = j.find(key);
    if (it == j.end()) {
        throw ConfigError(std::string("missing key '") + key + "'");
    }
    return *it;
}

inline double get_number(const json& j, const char* key) {
    const json& v = require_key(j, key);
    if (!v.is_number()) {
        throw ConfigError(std::string("key '") + key + "': expected a number");
    }
    return v.get<double>();
}

inline double get_number_or(const json& j, const char* key, double fallback) {
    return j.contains(key) ? get_number(j, key) : fallback;
}

inline std::int64_t get_integer(const json& j, const char* key) {
    const json& v = require_key(j, key);
    if (!v.is_number_integer()) {
        if (v.is_number_float() && std::floor(v.get<double>()) == v.get<double>()) {
            return static_cast<std::int64_t>(v.get<double>());
        }
        throw ConfigError(std::string("key '") + key + "': expected an integer");
    }
    return v.get<std::int64_t>();
}

inline void check(bool ok, const std::string& key, const std::string& rule) {
    if (!ok) {
        throw ConfigError("key '" + key + "': " + rule);
    }
}

inline std::vector<std::string> get_string_list(const json& j, const char* key) {
    const json& v = require_key(j, key);
    std::vector<std::string> out;
    if (v.is_string()) {
        out.push_back(v.get<std::string>());
        return out;
    }
    if (!v.is_array()) {
        throw ConfigError(std::string("key '") + key + "': expected a string or list of strings");
    }
    for (const auto& e : v) {
        if (!e.is_string()) {
            throw ConfigError(std::string("key '") + key + "': list entries must be strings");
        }
        out.push_back(e.get<std::string>());
    }
    return out;
}

inline void check_sweep_value(SweepVar var, double v) {
    const std::string key = "sweep.values";
    switch (var) {
        case SweepVar::Alpha1: check(v > 0.0 && v < 1.0, key, "alpha1 must be in (0,1)"); break;
        case SweepVar::AlphaJ: check(v >= 0.0 && v < 1.0, key, "alphaJ must be in [0,1)"); break;
        case SweepVar::K:
        case SweepVar::M:
            check(v >= 1.0 && std::floor(v) == v, key, "K and m must be integers >= 1");
            break;
        default: check(std::isfinite(v), key, "values must be finite"); break;
    }
}

}  // namespace detail

inline ExperimentConfig parse_config(const nlohmann::json& j) {
    using detail::check;
    if (!j.is_object()) {
        throw ConfigError("config must be a JSON object");
    }
    ExperimentConfig c;
    Scenario& s = c.scenario;
    s.relays = static_cast<int>(detail::get_integer(j, "K"));
    check(s.relays >= 1 && s.relays <= 8, "K", "must be an integer in [1, 8]");
    s.m_r = static_cast<int>(detail::get_integer(j, "mR"));
    s.m_u = static_cast<int>(detail::get_integer(j, "mU"));
    s.m_e = static_cast<int>(detail::get_integer(j, "mE"));
    check(s.m_r >= 1, "mR", "must be an integer >= 1");
    check(s.m_u >= 1, "mU", "must be an integer >= 1");
    check(s.m_e >= 1, "mE", "must be an integer >= 1");
    s.omega_r_db = detail::get_number(j, "omegaR_dB");
    s.omega1_db = detail::get_number(j, "omega1_dB");
    s.omega2_db = detail::get_number(j, "omega2_dB");
    s.omega_e_db = detail::get_number(j, "omegaE_dB");
    if (j.contains("P_dB")) {
        s.ps_db = s.pr_db = detail::get_number(j, "P_dB");
    } else if (!j.contains("PS_dB") || !j.contains("PR_dB")) {
        detail::require_key(j, "P_dB");
    }
    s.ps_db = detail::get_number_or(j, "PS_dB", s.ps_db);
    s.pr_db = detail::get_number_or(j, "PR_dB", s.pr_db);
    // Optional: fix Omega1 and Omega_R relative to Omega2.
    if (j.contains("epsilon1")) {
        const double e1 = detail::get_number(j, "epsilon1");
        check(e1 > 0.0, "epsilon1", "must be positive");
        s.omega1_db = s.omega2_db + 10.0 * std::log10(e1);
    }
    if (j.contains("epsilon2")) {
        const double e2 = detail::get_number(j, "epsilon2");
        check(e2 > 0.0, "epsilon2", "must be positive");
        s.omega_r_db = s.omega2_db + 10.0 * std::log10(e2);
    }
    s.sigma2 = detail::get_number_or(j, "sigma2", 1.0);
    check(s.sigma2 > 0.0, "sigma2", "must be positive");
    s.r1_th = detail::get_number(j, "R1_th");
    s.r2_th = detail::get_number(j, "R2_th");
    s.r1_s = detail::get_number(j, "R1_s");
    s.r2_s = detail::get_number(j, "R2_s");
    check(s.r1_th >= 0.0, "R1_th", "must be >= 0");
    check(s.r2_th >= 0.0, "R2_th", "must be >= 0");
    check(s.r1_s > 0.0, "R1_s", "must be positive");
    check(s.r2_s > 0.0, "R2_s", "must be positive");

    const double alpha_j = detail::get_number_or(j, "alphaJ", 0.0);
    check(alpha_j >= 0.0 && alpha_j < 1.0, "alphaJ", "alphaJ must be in [0,1)");
    if (j.contains("dpa")) {
        const auto& d = j.at("dpa");
        check(d.is_object(), "dpa", "expected an object with mu and varpi");
        const double mu = detail::get_number(d, "mu");
        const double varpi = detail::get_number(d, "varpi");
        check(mu > 1.0, "dpa.mu", "must be > 1");
        check(varpi > 0.0 && varpi < 1.0, "dpa.varpi", "must be in (0,1)");
        s.policy = PowerPolicy::dynamic(mu, varpi, alpha_j);
    } else {
        const double alpha1 = detail::get_number(j, "alpha1");
        check(alpha1 > 0.0 && alpha1 < 1.0, "alpha1", "must be in (0,1)");
        s.policy = PowerPolicy::fixed(alpha1, alpha_j);
    }

    c.schemes.clear();
    for (const auto& name : detail::get_string_list(j, "scheme")) {
        const auto k = parse_scheme(name);
        check(k.has_value(), "scheme", "unknown scheme '" + name + "' (TMRC, OSRS, TSRS, ODRS)");
        c.schemes.push_back(*k);
    }
    check(!c.schemes.empty(), "scheme", "at least one scheme is required");

    if (j.contains("engine")) {
        c.engines.clear();
        for (const auto& name : detail::get_string_list(j, "engine")) {
            const auto e = parse_engine(name);
            check(e.has_value(), "engine",
                  "unknown engine '" + name + "' (analytic, asymptotic, montecarlo)");
            c.engines.push_back(*e);
        }
        check(!c.engines.empty(), "engine", "at least one engine is required");
    }

    if (j.contains("sweep")) {
        const auto& sw = j.at("sweep");
        check(sw.is_object(), "sweep", "expected an object with var and values");
        const auto& var = detail::require_key(sw, "var");
        check(var.is_string(), "sweep.var", "expected a string");
        const auto v = parse_sweep_var(var.get<std::string>());
        check(v.has_value(), "sweep.var",
              "unknown variable '" + var.get<std::string>() + "' (rho, omega2, alpha1, alphaJ, K, m)");
        c.sweep_var = *v;
        const auto& values = detail::require_key(sw, "values");
        check(values.is_array(), "sweep.values", "expected a list of numbers");
        for (const auto& x : values) {
            check(x.is_number(), "sweep.values", "expected a list of numbers");
            detail::check_sweep_value(c.sweep_var, x.get<double>());
            c.sweep_values.push_back(x.get<double>());
        }
        if (c.sweep_var == SweepVar::Alpha1) {
            check(!s.policy.is_dynamic(), "sweep.var", "alpha1 cannot be swept under dpa");
        }
    } else {
        c.sweep_values.push_back(0.0);
    }

    if (j.contains("trials")) {
        const auto t = detail::get_integer(j, "trials");
        check(t >= 1, "trials", "must be >= 1");
        c.mc.trials = static_cast<std::uint64_t>(t);
    }
    if (j.contains("seed")) {
        const auto& v = j.at("seed");
        check(v.is_number_unsigned() || (v.is_number_integer() && v.get<std::int64_t>() >= 0),
              "seed", "expected a nonnegative integer");
        c.mc.seed = v.get<std::uint64_t>();
    }
    if (j.contains("chunk")) {
        const auto ch = detail::get_integer(j, "chunk");
        check(ch >= 1, "chunk", "must be >= 1");
        c.mc.chunk = static_cast<std::uint64_t>(ch);
    }
    if (j.contains("workers")) {
        const auto w = detail::get_integer(j, "workers");
        check(w >= 1, "workers", "must be >= 1");
        c.mc.workers = static_cast<unsigned>(w);
    }
    if (j.contains("quad_n")) {
        const auto q = detail::get_integer(j, "quad_n");
        check(q >= 2 && q <= 4000, "quad_n", "must be in [2, 4000]");
        c.quad_n = static_cast<int>(q);
    }
    if (j.contains("out")) {
        const auto& o = j.at("out");
        check(o.is_string(), "out", "expected a string path");
        c.output_path = o.get<std::string>();
    }
    // Catch inconsistent combinations (e.g. mismatched user fading) up front.
    try {
        s.params().validate();
        s.policy.validate();
    } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
    }
    return c;
}

inline ExperimentConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw ConfigError("cannot open config file '" + path + "'");
    }
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::parse_error& e) {
        throw ConfigError("config '" + path + "' is not valid JSON: " + e.what());
    }
    return parse_config(j);
}

// ---------------------------------------------------------------------------
// Sweeps.

struct CsvRow {
    SweepVar sweep_var = SweepVar::None;
    double sweep_value = 0.0;
    SchemeKind scheme = SchemeKind::TMRC;
    Engine engine = Engine::Analytic;
    double sop = std::numeric_limits<double>::quiet_NaN();
    std::optional<double> std_error;
    std::optional<std::uint64_t> trials;
    std::optional<double> sdo;
    std::string error;
};

inline std::vector<CsvRow> run_sweep(const ExperimentConfig& config) {
    std::vector<double> values = config.sweep_values;
    std::stable_sort(values.begin(), values.end());
    const QuadratureSpec quad(config.quad_n);
    std::vector<CsvRow> rows;
    for (double value : values) {
        std::vector<CsvRow> point;
        for (SchemeKind scheme : config.schemes) {
            for (Engine engine : config.engines) {
                CsvRow r;
                r.sweep_var = config.sweep_var;
                r.sweep_value = value;
                r.scheme = scheme;
                r.engine = engine;
                point.push_back(r);
            }
        }
        Scenario s;
        std::string setup_error;
        try {
            s = config.scenario.with(config.sweep_var, value);
            s.params().validate();
            s.policy.validate();
        } catch (const std::exception& e) {
            setup_error = e.what();
        }

        // Monte Carlo runs all schemes on shared draws.
        std::vector<SopEstimate> mc;
        std::string mc_error = setup_error;
        const bool want_mc = std::find(config.engines.begin(), config.engines.end(),
                                       Engine::MonteCarlo) != config.engines.end();
        if (want_mc && mc_error.empty()) {
            try {
                mc = estimate_sop_paired(s.params(), s.policy, config.schemes, config.mc);
            } catch (const std::exception& e) {
                mc_error = e.what();
            }
        }

        for (auto& r : point) {
            if (!setup_error.empty()) {
                r.error = setup_error;
                continue;
            }
            try {
                switch (r.engine) {
                    case Engine::Analytic:
                        r.sop = sop_total(s.params(), s.policy, r.scheme, quad).value;
                        break;
                    case Engine::Asymptotic: {
                        r.sop = sop_asym_total(s.params(), s.policy, r.scheme, s.scaling(), quad);
                        if (s.policy.is_dynamic()) {
                            const auto& d = std::get<DynamicSplit>(s.policy.rule);
                            r.sdo = sdo(r.scheme, SdoInputs{s.relays, s.m_r, s.m_u, d.varpi}, true);
                        }
                        break;
                    }
                    case Engine::MonteCarlo: {
                        if (!mc_error.empty()) {
                            r.error = mc_error;
                            break;
                        }
                        const auto idx = static_cast<std::size_t>(&r - point.data()) /
                                         config.engines.size();
                        r.sop = mc[idx].p_hat;
                        r.std_error = mc[idx].std_error;
                        r.trials = mc[idx].trials;
                        break;
                    }
                }
            } catch (const std::exception& e) {
                r.error = e.what();
            }
        }
        rows.insert(rows.end(), point.begin(), point.end());
    }
    return rows;
}

inline std::string format_number(double x) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.10g", x);
    return buf;
}

inline std::string csv_escape(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char ch : s) {
        if (ch == '"') out += '"';
        out += ch;
    }
    return out + "\"";
}

inline void write_csv(std::ostream& out, const std::vector<CsvRow>& rows) {
    out << "sweep_var,sweep_value,scheme,engine,sop,stderr,trials,sdo,error\n";
    for (const auto& r : rows) {
        out << to_string(r.sweep_var) << ',' << format_number(r.sweep_value) << ','
            << to_string(r.scheme) << ',' << to_string(r.engine) << ',';
        if (r.error.empty()) out << format_number(r.sop);
        out << ',';
        if (r.std_error) out << format_number(*r.std_error);
        out << ',';
        if (r.trials) out << *r.trials;
        out << ',';
        if (r.sdo) out << format_number(*r.sdo);
        out << ',' << csv_escape(r.error) << '\n';
    }
}

// ---------------------------------------------------------------------------
// Cross-engine validation.

struct ValidationPoint {
    double sweep_value = 0.0;
    SchemeKind scheme = SchemeKind::TMRC;
    double analytic = 0.0;
    double p_hat = 0.0;
    double std_error = 0.0;
    double z = 0.0;
};

struct ValidationReport {
    SweepVar sweep_var = SweepVar::None;
    std::vector<ValidationPoint> points;
    std::vector<std::string> errors;
    double max_abs_z = 0.0;
    double fraction_within_3 = 1.0;
    bool pass = false;
};

/// z = (analytic - p_hat) / stderr with stderr floored at 1/trials, so a
/// point where MC saw no (or only) outages still gets a finite score.
inline double validation_z(double analytic, const SopEstimate& e) {
    const double floor = 1.0 / static_cast<double>(std::max<std::uint64_t>(e.trials, 1));
    return (analytic - e.p_hat) / std::max(e.std_error, floor);
}

inline ValidationReport validate(const ExperimentConfig& config) {
    ExperimentConfig c = config;
    c.engines = {Engine::Analytic, Engine::MonteCarlo};
    const auto rows = run_sweep(c);
    ValidationReport rep;
    rep.sweep_var = c.sweep_var;
    std::size_t within = 0;
    for (std::size_t i = 0; i + 1 < rows.size(); i += 2) {
        const CsvRow& a = rows[i];
        const CsvRow& m = rows[i + 1];
        if (!a.error.empty() || !m.error.empty()) {
            rep.errors.push_back(std::string(to_string(a.scheme)) + " @ " +
                                 format_number(a.sweep_value) + ": " +
                                 (a.error.empty() ? m.error : a.error));
            continue;
        }
        SopEstimate e;
        e.p_hat = m.sop;
        e.std_error = *m.std_error;
        e.trials = *m.trials;
        ValidationPoint p;
        p.sweep_value = a.sweep_value;
        p.scheme = a.scheme;
        p.analytic = a.sop;
        p.p_hat = m.sop;
        p.std_error = e.std_error;
        p.z = validation_z(a.sop, e);
        rep.max_abs_z = std::max(rep.max_abs_z, std::abs(p.z));
        within += std::abs(p.z) <= 3.0 ? 1 : 0;
        rep.points.push_back(p);
    }
    if (!rep.points.empty()) {
        rep.fraction_within_3 = static_cast<double>(within) / rep.points.size();
    }
    rep.pass = rep.errors.empty() && !rep.points.empty() && rep.fraction_within_3 >= 0.99 &&
               rep.max_abs_z <= 5.0;
    return rep;
}

inline void write_report(std::ostream& out, const ValidationReport& rep) {
    out << "sweep_var,sweep_value,scheme,analytic,mc,stderr,z\n";
    for (const auto& p : rep.points) {
        out << to_string(rep.sweep_var) << ',' << format_number(p.sweep_value) << ','
            << to_string(p.scheme) << ',' << format_number(p.analytic) << ','
            << format_number(p.p_hat) << ',' << format_number(p.std_error) << ','
            << format_number(p.z) << '\n';
    }
    for (const auto& e : rep.errors) {
        out << "# error: " << e << '\n';
    }
    out << "# points=" << rep.points.size() << " max|z|=" << format_number(rep.max_abs_z)
        << " within3=" << format_number(rep.fraction_within_3) << " verdict="
        << (rep.pass ? "PASS" : "FAIL") << '\n';
}

}  // namespace coopnoma

#endif  // COOPNOMA_EXPERIMENT_HPP
