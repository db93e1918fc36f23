// Scenario description shared by the analytic, asymptotic and Monte Carlo engines.
//
// Units: powers and gains are linear, rates are in nats per channel use, and
// every capacity carries the 1/2 two-slot pre-log, so a rate threshold R maps
// to the SINR-ratio threshold theta = e^{2R}.

#ifndef COOPNOMA_SYSTEM_HPP
#define COOPNOMA_SYSTEM_HPP

#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <variant>

#include "channel.hpp"

namespace coopnoma {

struct SystemParams {
    int relays = 1;  // K
    LinkSet links{NakagamiParams(1, 1.0), NakagamiParams(1, 1.0), NakagamiParams(1, 1.0),
                  NakagamiParams(1, 1.0)};
    double p_source = 1.0;
    double p_relay = 1.0;
    double sigma2 = 1.0;
    double r1_th = 0.0;
    double r2_th = 0.0;
    double r1_s = 0.1;
    double r2_s = 0.1;

    void validate() const {
        detail::require(relays >= 1, "SystemParams: K must be >= 1");
        links.validate();
        detail::require(p_source > 0.0 && p_relay > 0.0, "SystemParams: powers must be positive");
        detail::require(sigma2 > 0.0, "SystemParams: sigma2 must be positive");
        detail::require(r1_th >= 0.0 && r2_th >= 0.0, "SystemParams: decoding thresholds must be >= 0");
        detail::require(r1_s > 0.0 && r2_s > 0.0, "SystemParams: secrecy rates must be positive");
    }

    double rho_source() const { return p_source / sigma2; }
    /// Full relay transmit SNR (single active relay).
    double rho_relay() const { return p_relay / sigma2; }
    double theta1() const { return std::exp(2.0 * r1_s); }
    double theta2() const { return std::exp(2.0 * r2_s); }
    /// Source-link gain a relay needs to decode both messages.
    double eta() const { return std::expm1(2.0 * (r1_th + r2_th)) / rho_source(); }

    int m_user() const { return links.relay_user1.m(); }
    double lambda1() const { return links.relay_user1.rate(); }
    double lambda2() const { return links.relay_user2.rate(); }
    double lambda_e() const { return links.relay_eaves.rate(); }
};

struct FixedSplit {
    double alpha1 = 0.2;
};

/// alpha1 = 1/(1 + mu lambda2^{-varpi}); more power moves to U2 as Omega2 grows.
struct DynamicSplit {
    double mu = 5.0;
    double varpi = 0.1;
};

struct PowerSplit {
    double alpha1 = 0.0;
    double alpha2 = 0.0;
};

inline PowerSplit dpa_coefficients(const DynamicSplit& rule, double lambda2) {
    detail::require(rule.mu > 1.0, "dynamic power allocation: mu must be > 1");
    detail::require(rule.varpi > 0.0 && rule.varpi < 1.0,
                    "dynamic power allocation: varpi must be in (0,1)");
    detail::require(lambda2 > 0.0, "dynamic power allocation: lambda2 must be positive");
    const double ratio = rule.mu * std::pow(lambda2, -rule.varpi);
    PowerSplit s;
    s.alpha1 = 1.0 / (1.0 + ratio);
    s.alpha2 = ratio / (1.0 + ratio);
    return s;
}

struct PowerPolicy {
    std::variant<FixedSplit, DynamicSplit> rule = FixedSplit{};
    double alpha_j = 0.0;  // jamming share of P_R, ODRS only

    static PowerPolicy fixed(double alpha1, double alpha_j = 0.0) {
        return PowerPolicy{FixedSplit{alpha1}, alpha_j};
    }
    static PowerPolicy dynamic(double mu, double varpi, double alpha_j = 0.0) {
        return PowerPolicy{DynamicSplit{mu, varpi}, alpha_j};
    }

    bool is_dynamic() const { return std::holds_alternative<DynamicSplit>(rule); }

    void validate() const {
        detail::require(alpha_j >= 0.0 && alpha_j < 1.0, "alphaJ must be in [0,1)");
        if (const auto* f = std::get_if<FixedSplit>(&rule)) {
            detail::require(f->alpha1 > 0.0 && f->alpha1 < 1.0, "alpha1 must be in (0,1)");
        } else {
            const auto& d = std::get<DynamicSplit>(rule);
            detail::require(d.mu > 1.0, "dpa.mu must be > 1");
            detail::require(d.varpi > 0.0 && d.varpi < 1.0, "dpa.varpi must be in (0,1)");
        }
    }

    PowerSplit resolve(const SystemParams& params) const {
        if (const auto* f = std::get_if<FixedSplit>(&rule)) {
            return PowerSplit{f->alpha1, 1.0 - f->alpha1};
        }
        return dpa_coefficients(std::get<DynamicSplit>(rule), params.lambda2());
    }
};

enum class SchemeKind { TMRC, OSRS, TSRS, ODRS };

inline std::string_view to_string(SchemeKind s) {
    switch (s) {
        case SchemeKind::TMRC: return "TMRC";
        case SchemeKind::OSRS: return "OSRS";
        case SchemeKind::TSRS: return "TSRS";
        case SchemeKind::ODRS: return "ODRS";
    }
    return "?";
}

inline std::optional<SchemeKind> parse_scheme(std::string_view s) {
    for (auto k : {SchemeKind::TMRC, SchemeKind::OSRS, SchemeKind::TSRS, SchemeKind::ODRS}) {
        if (to_string(k) == s) return k;
    }
    return std::nullopt;
}

enum class Engine { Analytic, Asymptotic, MonteCarlo };

inline std::string_view to_string(Engine e) {
    switch (e) {
        case Engine::Analytic: return "analytic";
        case Engine::Asymptotic: return "asymptotic";
        case Engine::MonteCarlo: return "montecarlo";
    }
    return "?";
}

struct SopResult {
    double value = 1.0;
    Engine engine = Engine::Analytic;
    double std_error = 0.0;  // Monte Carlo only
    std::uint64_t trials = 0;
};

// ---------------------------------------------------------------------------
// Per-scheme threshold constants.

/// Constants of the secure-connection event for one transmitter at SNR rho
/// with the worst-case eavesdropper:
///   U1 secure  <=>  G1 > b + theta1 * GE
///   U2 secure  <=>  GE < a  and  G2 > c + alpha2 / (d - e * GE)
struct LinkConstants {
    double a = 0.0;
    double b = 0.0;
    double c = 0.0;
    double d = 0.0;
    double e = 0.0;

    bool feasible() const { return a > 0.0; }
    /// Threshold G2 must exceed for U2 to be secure, valid for ge < a.
    double u2_threshold(double alpha2, double ge) const { return c + alpha2 / (d - e * ge); }
};

inline LinkConstants link_constants(const PowerSplit& split, double theta1, double theta2,
                                    double rho) {
    const double a1 = split.alpha1;
    const double a2 = split.alpha2;
    LinkConstants k;
    k.a = (1.0 - theta2 * a1) / (rho * a1 * a2 * theta2);
    k.b = (theta1 - 1.0) / (a1 * rho);
    k.c = -1.0 / (a1 * rho);
    k.d = a1 * rho * (1.0 - a1 * theta2);
    k.e = rho * rho * a1 * a1 * a2 * theta2;
    return k;
}

/// ODRS data-relay constants at signal SNR rho3 against the jammed ratio Y:
///   U1 secure  <=>  G1 > ell + theta1 * Y
///   U2 secure  <=>  Y < 1/v  and  G2 > w + w u / (1 - v Y)
struct JammingConstants {
    double ell = 0.0;
    double w = 0.0;
    double u = 0.0;
    double v = 0.0;

    bool feasible() const { return v > 0.0; }
};

inline JammingConstants jamming_constants(const PowerSplit& split, double theta1, double theta2,
                                          double rho3) {
    const double a1 = split.alpha1;
    const double a2 = split.alpha2;
    JammingConstants k;
    k.ell = (theta1 - 1.0) / (a1 * rho3);
    k.w = -1.0 / (a1 * rho3);
    k.u = a2 / (a1 * theta2 - 1.0);
    k.v = a1 * a2 * theta2 * rho3 / (1.0 - a1 * theta2);
    return k;
}

struct Feasibility {
    bool ok = true;
    std::string reason;
};

/// U2 can only be secure when alpha1 < e^{-2 R2s}; otherwise outage is certain.
inline Feasibility feasibility_check(const SystemParams& params, const PowerPolicy& policy) {
    const PowerSplit split = policy.resolve(params);
    const double limit = 1.0 / params.theta2();
    if (split.alpha1 >= limit) {
        return {false, "alpha1 = " + std::to_string(split.alpha1) + " >= e^{-2 R2s} = " +
                           std::to_string(limit) + ": U2 is in secrecy outage on every channel"};
    }
    return {};
}

}  // namespace coopnoma

#endif  // COOPNOMA_SYSTEM_HPP
