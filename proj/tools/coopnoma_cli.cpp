// coopnoma: batch runner for secrecy outage experiments.
//
//   coopnoma analytic   -c cfg.json       closed-form SOP on the sweep grid
//   coopnoma simulate   -c cfg.json       Monte Carlo SOP
//   coopnoma asymptotic -c cfg.json       high-Omega2 SOP (+ SDO under dpa)
//   coopnoma sweep      -c cfg.json       engines listed in the config
//   coopnoma validate   -c cfg.json       analytic vs Monte Carlo z-scores
//   coopnoma sdo        -c cfg.json       secrecy diversity orders
//
// Exit codes: 0 ok, 1 config error, 2 validation failure, 3 numeric error.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include <coopnoma/experiment.hpp>

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 1;
constexpr int kExitValidation = 2;
constexpr int kExitNumeric = 3;

struct Overrides {
    std::string config;
    std::string out;
    long long trials = -1;
    long long seed = -1;
    int workers = 0;
    int quad_n = 0;
};

coopnoma::ExperimentConfig load(const Overrides& o) {
    auto cfg = coopnoma::load_config(o.config);
    if (!o.out.empty()) cfg.output_path = o.out;
    if (o.trials > 0) cfg.mc.trials = static_cast<std::uint64_t>(o.trials);
    if (o.seed >= 0) cfg.mc.seed = static_cast<std::uint64_t>(o.seed);
    if (o.workers > 0) cfg.mc.workers = static_cast<unsigned>(o.workers);
    if (o.quad_n > 0) cfg.quad_n = o.quad_n;
    return cfg;
}

// Writes to cfg.output_path, or stdout when it is empty or "-".
template <class Fn>
void emit(const coopnoma::ExperimentConfig& cfg, Fn&& fn) {
    if (cfg.output_path.empty() || cfg.output_path == "-") {
        fn(std::cout);
        return;
    }
    std::ofstream f(cfg.output_path);
    if (!f) {
        throw coopnoma::ConfigError("cannot write output file '" + cfg.output_path + "'");
    }
    fn(f);
}

int run_rows(const coopnoma::ExperimentConfig& cfg) {
    const auto rows = coopnoma::run_sweep(cfg);
    emit(cfg, [&](std::ostream& os) { coopnoma::write_csv(os, rows); });
    for (const auto& r : rows) {
        if (!r.error.empty()) {
            std::cerr << "error: " << coopnoma::to_string(r.scheme) << " / "
                      << coopnoma::to_string(r.engine) << " @ " << r.sweep_value << ": " << r.error
                      << '\n';
            return kExitNumeric;
        }
    }
    return kExitOk;
}

int run_sdo(const coopnoma::ExperimentConfig& cfg) {
    const auto& s = cfg.scenario;
    emit(cfg, [&](std::ostream& os) {
        os << "scheme,allocation,K,mR,mU,varpi,sdo\n";
        for (auto scheme : cfg.schemes) {
            if (s.policy.is_dynamic()) {
                const double varpi = std::get<coopnoma::DynamicSplit>(s.policy.rule).varpi;
                const coopnoma::SdoInputs in{s.relays, s.m_r, s.m_u, varpi};
                os << coopnoma::to_string(scheme) << ",dpa," << s.relays << ',' << s.m_r << ','
                   << s.m_u << ',' << coopnoma::format_number(varpi) << ','
                   << coopnoma::format_number(coopnoma::sdo(scheme, in, true)) << '\n';
            } else {
                os << coopnoma::to_string(scheme) << ",fixed," << s.relays << ',' << s.m_r << ','
                   << s.m_u << ",," << coopnoma::format_number(coopnoma::sdo(scheme, {}, false))
                   << '\n';
            }
        }
    });
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Secrecy outage probability of cooperative NOMA relay selection"};
    app.require_subcommand(1);
    Overrides o;

    auto add = [&](const char* name, const char* help) {
        auto* sub = app.add_subcommand(name, help);
        sub->add_option("-c,--config", o.config, "JSON experiment config")->required();
        sub->add_option("-o,--out", o.out, "output CSV path (default: config 'out' or stdout)");
        sub->add_option("--trials", o.trials, "Monte Carlo trials override");
        sub->add_option("--seed", o.seed, "Monte Carlo seed override");
        sub->add_option("--workers", o.workers, "Monte Carlo worker threads");
        sub->add_option("--quad-n", o.quad_n, "Gauss-Legendre node count override");
        return sub;
    };
    auto* analytic = add("analytic", "closed-form SOP over the sweep");
    auto* simulate = add("simulate", "Monte Carlo SOP over the sweep");
    auto* asymptotic = add("asymptotic", "high-Omega2 asymptotic SOP over the sweep");
    auto* sweep = add("sweep", "run every engine listed in the config");
    auto* validate = add("validate", "compare analytic and Monte Carlo SOP");
    auto* sdo = add("sdo", "secrecy diversity order per scheme");

    CLI11_PARSE(app, argc, argv);

    try {
        auto cfg = load(o);
        if (analytic->parsed()) {
            cfg.engines = {coopnoma::Engine::Analytic};
            return run_rows(cfg);
        }
        if (simulate->parsed()) {
            cfg.engines = {coopnoma::Engine::MonteCarlo};
            return run_rows(cfg);
        }
        if (asymptotic->parsed()) {
            cfg.engines = {coopnoma::Engine::Asymptotic};
            return run_rows(cfg);
        }
        if (sweep->parsed()) {
            return run_rows(cfg);
        }
        if (validate->parsed()) {
            const auto rep = coopnoma::validate(cfg);
            emit(cfg, [&](std::ostream& os) { coopnoma::write_report(os, rep); });
            std::cerr << "validate: " << rep.points.size() << " points, max|z| = "
                      << rep.max_abs_z << ", " << (rep.pass ? "PASS" : "FAIL") << '\n';
            if (!rep.errors.empty()) return kExitNumeric;
            return rep.pass ? kExitOk : kExitValidation;
        }
        if (sdo->parsed()) {
            return run_sdo(cfg);
        }
    } catch (const coopnoma::ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const std::invalid_argument& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const std::exception& e) {
        std::cerr << "numeric error: " << e.what() << '\n';
        return kExitNumeric;
    }
    return kExitOk;
}
