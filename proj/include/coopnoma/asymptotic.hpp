// High-Omega2 asymptotic SOP and secrecy diversity order.
//
// Omega1 = eps1 * Omega2 and Omega_R = eps2 * Omega2 grow with Omega2, the
// eavesdropper link stays fixed. The legitimate-link CDFs are replaced by their
// first-order expansion F(x) ~ phi x^tau.
//
// The first-order CDF grows without bound, so the conditional integrals are
// cut where phi * delta(x)^tau reaches one, i.e. where the expansion stops
// being a probability. Past that point the exact CDF is already ~1, so the
// cut only discards terms of higher order; without it the U2 terms diverge
// at the endpoint pole x = a (no e^{-h/(1-qx)} screening is left at first
// order).

#ifndef COOPNOMA_ASYMPTOTIC_HPP
#define COOPNOMA_ASYMPTOTIC_HPP

#include <algorithm>
#include <cmath>
#include <vector>

#include "analytic.hpp"
#include "channel.hpp"
#include "quadrature.hpp"
#include "special.hpp"
#include "system.hpp"

namespace coopnoma {

struct AsymptoticScaling {
    double epsilon1 = 1.5;
    double epsilon2 = 2.0;
    double omega2 = 10.0;

    void validate() const {
        detail::require(epsilon1 > 1.0, "AsymptoticScaling: epsilon1 must be > 1");
        detail::require(epsilon2 > 0.0, "AsymptoticScaling: epsilon2 must be > 0");
        detail::require(omega2 > 0.0 && std::isfinite(omega2),
                        "AsymptoticScaling: omega2 must be positive");
    }
};

/// Copy of `params` with Omega2, Omega1 = eps1 Omega2 and Omega_R = eps2 Omega2.
inline SystemParams apply_scaling(const SystemParams& params, const AsymptoticScaling& s) {
    s.validate();
    SystemParams out = params;
    const int mu = params.m_user();
    out.links.relay_user2 = NakagamiParams(mu, s.omega2);
    out.links.relay_user1 = NakagamiParams(mu, s.epsilon1 * s.omega2);
    out.links.source_relay = NakagamiParams(params.links.source_relay.m(), s.epsilon2 * s.omega2);
    return out;
}

/// phi such that F(x) ~ phi x^shape for a Gamma(shape, omega/m) law.
inline double asym_coefficient(int m, int shape, double omega) {
    return std::exp(shape * std::log(m / omega) - log_factorial(shape));
}

/// First-order CDF of the MRC sum of n relay->user gains.
inline double asym_gain_cdf(int m_u, const AsymptoticScaling& s, int user, int n, double x) {
    detail::require(user == 1 || user == 2, "asym_gain_cdf: user must be 1 or 2");
    detail::require(n >= 1, "asym_gain_cdf: n must be >= 1");
    detail::require(x >= 0.0, "asym_gain_cdf: x must be nonnegative");
    const double omega = user == 1 ? s.epsilon1 * s.omega2 : s.omega2;
    const int tau = n * m_u;
    return asym_coefficient(m_u, tau, omega) * std::pow(x, tau);
}

namespace detail {

// phi delta^tau = 1  <=>  delta = phi^{-1/tau}
inline double saturation_level(double phi, int tau) { return std::pow(phi, -1.0 / tau); }

// 1 - (asymptotic joint secure probability) for a direct (unjammed) link
// seen through `branches` combined relays at SNR rho.
inline double direct_asym_outage(const SystemParams& scaled, const PowerSplit& split, double rho,
                                 int branches, const QuadratureSpec& quad) {
    const LinkConstants kc = link_constants(split, scaled.theta1(), scaled.theta2(), rho);
    if (!kc.feasible()) {
        return 1.0;
    }
    const int mu = scaled.m_user();
    const int tau = branches * mu;
    const int tau_e = branches * scaled.links.relay_eaves.m();
    const double le = scaled.lambda_e();
    const double theta1 = scaled.theta1();
    const double phi1 = asym_coefficient(mu, tau, scaled.links.relay_user1.omega());
    const double phi2 = asym_coefficient(mu, tau, scaled.links.relay_user2.omega());

    // Cut points: delta1(x) = b + theta1 x, delta2(x) = c + alpha2 / (d - e x).
    const double x1 = (saturation_level(phi1, tau) - kc.b) / theta1;
    const double level2 = saturation_level(phi2, tau);
    const double q = kc.e / kc.d;
    double x2 = 0.0;
    if (level2 > kc.c + split.alpha2 / kc.d) {
        x2 = (1.0 - (split.alpha2 / kc.d) / (level2 - kc.c)) / q;
    }
    const double xc = std::min({kc.a, x1, x2});
    if (!(xc > 0.0)) {
        return 1.0;
    }

    const double log_beta = tau_e * std::log(le) - log_factorial(tau_e - 1);
    double out = gamma_q_int(tau_e, le * xc);

    // phi1 int_0^xc (b + theta1 x)^tau f_E(x) dx
    double u1 = 0.0;
    for (int k = 0; k <= tau; ++k) {
        const double log_term = std::log(binomial(tau, k)) + k * std::log(theta1) +
                                (tau - k) * std::log(kc.b) + log_beta +
                                std::log(lower_incomplete_gamma_int(k + tau_e, le * xc)) -
                                (k + tau_e) * std::log(le);
        u1 += std::exp(log_term);
    }
    out += phi1 * u1;

    GKernelArgs g;
    g.a = xc;
    g.b = tau_e;
    g.r = split.alpha2 / (kc.c * kc.d);
    g.q = q;
    g.f = le;
    g.j = tau;
    // c^tau carries the sign (-1)^tau; the kernel's (1 + r/(1-qx))^tau has the same sign.
    const double c_pow = std::pow(kc.c, tau);
    const double beta = std::exp(log_beta);
    out += phi2 * beta * c_pow * g_kernel(g, quad);

    g.c = theta1 / kc.b;
    g.k = tau;
    out -= phi1 * phi2 * beta * std::pow(kc.b, tau) * c_pow * g_kernel(g, quad);
    return out;
}

}  // namespace detail

inline double sop_tmrc_asym_cond(const SystemParams& params, const PowerPolicy& policy, int n,
                                 const AsymptoticScaling& scaling, const QuadratureSpec& quad) {
    detail::require(n >= 1, "sop_tmrc_asym_cond: n must be >= 1");
    const SystemParams scaled = apply_scaling(params, scaling);
    const PowerSplit split = policy.resolve(scaled);
    const double rho1 = scaled.p_relay / (n * scaled.sigma2);
    return clamp_probability(detail::direct_asym_outage(scaled, split, rho1, n, quad));
}

inline double delta1_asym(const SystemParams& params, const PowerPolicy& policy,
                          const AsymptoticScaling& scaling, const QuadratureSpec& quad) {
    const SystemParams scaled = apply_scaling(params, scaling);
    const PowerSplit split = policy.resolve(scaled);
    return clamp_probability(
        1.0 - detail::direct_asym_outage(scaled, split, scaled.rho_relay(), 1, quad));
}

inline double sop_osrs_asym_cond(const SystemParams& params, const PowerPolicy& policy, int n,
                                 const AsymptoticScaling& scaling, const QuadratureSpec& quad) {
    detail::require(n >= 0, "sop_osrs_asym_cond: n must be >= 0");
    if (n == 0) {
        return 1.0;
    }
    const SystemParams scaled = apply_scaling(params, scaling);
    const PowerSplit split = policy.resolve(scaled);
    const double miss = detail::direct_asym_outage(scaled, split, scaled.rho_relay(), 1, quad);
    return clamp_probability(std::pow(clamp_probability(miss), n));
}

namespace detail {

inline double jammed_asym_outage(const SystemParams& scaled, const PowerPolicy& policy,
                                 const PowerSplit& split, int n, const QuadratureSpec& quad) {
    const double rho3 = (1.0 - policy.alpha_j) * scaled.p_relay / scaled.sigma2;
    const double rho4 = policy.alpha_j * scaled.p_relay / scaled.sigma2;
    const JammingConstants jc = jamming_constants(split, scaled.theta1(), scaled.theta2(), rho3);
    if (!jc.feasible()) {
        return 1.0;
    }
    const int mu = scaled.m_user();
    const double le = scaled.lambda_e();
    const double theta1 = scaled.theta1();
    const double phi3 = asym_coefficient(mu, mu, scaled.links.relay_user1.omega());
    const double phi4 = asym_coefficient(mu, mu, scaled.links.relay_user2.omega());

    // delta1(y) = ell + theta1 y, delta2(y) = w + w u / (1 - v y).
    const double y1 = (saturation_level(phi3, mu) - jc.ell) / theta1;
    const double level2 = saturation_level(phi4, mu);
    double y2 = 0.0;
    if (level2 > jc.w * (1.0 + jc.u)) {
        y2 = (1.0 - jc.w * jc.u / (level2 - jc.w)) / jc.v;
    }
    const double yc = std::min({1.0 / jc.v, y1, y2});
    if (!(yc > 0.0)) {
        return 1.0;
    }

    const auto terms = jammed_ratio_terms(scaled.links.relay_eaves, scaled.relays - n, rho4);
    double out = jammed_ratio_ccdf(terms, le, rho4, yc);

    HKernelArgs h;
    h.a = yc;
    h.f = le;
    h.r = 0.0;
    h.u = jc.u;
    h.v = jc.v;
    h.ell = jc.ell;
    h.theta1 = theta1;
    h.rho4 = rho4;
    h.lambda_e = le;
    const double w_pow = std::pow(jc.w, mu);
    double s1 = 0.0;
    double s2 = 0.0;
    double s12 = 0.0;
    for (const auto& t : terms) {
        h.k = t.k;
        h.varsigma = t.varsigma;
        h.big_c = t.c;
        h.big_d = t.d;
        h.b = mu;
        h.c = 0;
        s1 += t.weight * h_kernel(h, quad);
        h.b = 0;
        h.c = mu;
        s2 += t.weight * h_kernel(h, quad);
        h.b = mu;
        s12 += t.weight * h_kernel(h, quad);
    }
    out += phi3 * s1 + phi4 * w_pow * s2 - phi3 * phi4 * w_pow * s12;
    return out;
}

}  // namespace detail

inline double delta4_asym(const SystemParams& params, const PowerPolicy& policy, int n,
                          const AsymptoticScaling& scaling, const QuadratureSpec& quad) {
    detail::require(n >= 0 && n < params.relays, "delta4_asym: needs a jamming relay (n < K)");
    const SystemParams scaled = apply_scaling(params, scaling);
    const PowerSplit split = policy.resolve(scaled);
    return clamp_probability(1.0 - detail::jammed_asym_outage(scaled, policy, split, n, quad));
}

inline double sop_odrs_asym_cond(const SystemParams& params, const PowerPolicy& policy, int n,
                                 const AsymptoticScaling& scaling, const QuadratureSpec& quad) {
    detail::require(n >= 0 && n <= params.relays, "sop_odrs_asym_cond: n must be in [0, K]");
    if (n == 0) {
        return 1.0;
    }
    if (n == params.relays) {
        return sop_osrs_asym_cond(params, policy, n, scaling, quad);
    }
    const SystemParams scaled = apply_scaling(params, scaling);
    const PowerSplit split = policy.resolve(scaled);
    const double miss = detail::jammed_asym_outage(scaled, policy, split, n, quad);
    return clamp_probability(std::pow(clamp_probability(miss), n));
}

inline double sop_asym_conditional(const SystemParams& params, const PowerPolicy& policy,
                                   SchemeKind scheme, int n, const AsymptoticScaling& scaling,
                                   const QuadratureSpec& quad) {
    if (n == 0) {
        return 1.0;
    }
    switch (scheme) {
        case SchemeKind::TMRC: return sop_tmrc_asym_cond(params, policy, n, scaling, quad);
        case SchemeKind::OSRS:
        case SchemeKind::TSRS: return sop_osrs_asym_cond(params, policy, n, scaling, quad);
        case SchemeKind::ODRS: return sop_odrs_asym_cond(params, policy, n, scaling, quad);
    }
    return 1.0;
}

inline double sop_asym_total(const SystemParams& params, const PowerPolicy& policy,
                             SchemeKind scheme, const AsymptoticScaling& scaling,
                             const QuadratureSpec& quad) {
    params.validate();
    policy.validate();
    const SystemParams scaled = apply_scaling(params, scaling);
    const int mr = scaled.links.source_relay.m();
    // F_R(eta) ~ phi_R eta^{m_R}
    const double miss =
        asym_coefficient(mr, mr, scaled.links.source_relay.omega()) * std::pow(scaled.eta(), mr);
    double total = 0.0;
    for (int n = 0; n <= params.relays; ++n) {
        const int idle = params.relays - n;
        const double weight = binomial(params.relays, n) * (idle == 0 ? 1.0 : std::pow(miss, idle));
        if (weight == 0.0) continue;
        total += weight * sop_asym_conditional(params, policy, scheme, n, scaling, quad);
    }
    return clamp_probability(total);
}

/// Omega2 -> infinity limit of the conditional SOP at the split resolved for `scaling`.
inline double sop_asym_cond_floor(const SystemParams& params, const PowerPolicy& policy,
                                  SchemeKind scheme, int n, const AsymptoticScaling& scaling) {
    detail::require(n >= 0 && n <= params.relays, "sop_asym_cond_floor: n must be in [0, K]");
    if (n == 0) {
        return 1.0;
    }
    const SystemParams scaled = apply_scaling(params, scaling);
    const PowerSplit split = policy.resolve(scaled);
    const double le = scaled.lambda_e();
    const int me = scaled.links.relay_eaves.m();
    const double th1 = scaled.theta1();
    const double th2 = scaled.theta2();
    if (scheme == SchemeKind::TMRC) {
        const double rho1 = scaled.p_relay / (n * scaled.sigma2);
        const LinkConstants kc = link_constants(split, th1, th2, rho1);
        return kc.feasible() ? gamma_q_int(n * me, le * kc.a) : 1.0;
    }
    if (scheme == SchemeKind::ODRS && n < params.relays) {
        const double rho3 = (1.0 - policy.alpha_j) * scaled.p_relay / scaled.sigma2;
        const double rho4 = policy.alpha_j * scaled.p_relay / scaled.sigma2;
        const JammingConstants jc = jamming_constants(split, th1, th2, rho3);
        if (!jc.feasible()) return 1.0;
        const auto terms = jammed_ratio_terms(scaled.links.relay_eaves, params.relays - n, rho4);
        return std::pow(clamp_probability(jammed_ratio_ccdf(terms, le, rho4, 1.0 / jc.v)), n);
    }
    const LinkConstants kc = link_constants(split, th1, th2, scaled.rho_relay());
    return kc.feasible() ? std::pow(gamma_q_int(me, le * kc.a), n) : 1.0;
}

/// Omega2 -> infinity limit of the total SOP: only the full decoding set survives.
inline double sop_asym_floor(const SystemParams& params, const PowerPolicy& policy,
                             SchemeKind scheme, const AsymptoticScaling& scaling) {
    return sop_asym_cond_floor(params, policy, scheme, params.relays, scaling);
}

// ---------------------------------------------------------------------------
// Secrecy diversity order.

struct SdoInputs {
    int relays = 1;  // K
    int m_r = 1;
    int m_u = 1;  // also the m_D of the dual-selection expressions
    double varpi = 0.1;

    void validate() const {
        detail::require(relays >= 1 && m_r >= 1 && m_u >= 1, "SdoInputs: integers must be >= 1");
        detail::require(varpi > 0.0 && varpi < 1.0, "SdoInputs: varpi must be in (0,1)");
    }
};

/// Fixed split: the SOP floors, so the order is zero for every scheme.
inline double sdo(SchemeKind scheme, const SdoInputs& in, bool dynamic) {
    if (!dynamic) {
        return 0.0;
    }
    in.validate();
    const double k = in.relays;
    const double user = in.m_u * (1.0 - in.varpi);
    switch (scheme) {
        case SchemeKind::TMRC:
        case SchemeKind::OSRS:
        case SchemeKind::TSRS: return k * std::min(user, static_cast<double>(in.m_r));
        case SchemeKind::ODRS:
            return std::min({k * in.m_r, (k - 1.0) * (user - in.varpi) + in.m_r, k * user});
    }
    return 0.0;
}

/// Three-branch form of the dual-selection order in terms of H1 and H2.
inline double sdo_odrs_piecewise(const SdoInputs& in) {
    in.validate();
    const double k = in.relays;
    const double user = in.m_u * (1.0 - in.varpi);
    const double h1 = user - in.varpi;
    const double h2 = user + in.varpi * (k - 1.0);
    if (in.m_r < h1) {
        return k * in.m_r;
    }
    if (in.m_r < h2) {
        return k * user + in.m_r - h2;
    }
    return k * user;
}

/// min over n < K of { m_R (K-n) + n H1 } and K m_D (1 - varpi).
inline double sdo_odrs_by_set_size(const SdoInputs& in) {
    in.validate();
    const double user = in.m_u * (1.0 - in.varpi);
    const double h1 = user - in.varpi;
    double best = in.relays * user;
    for (int n = 0; n < in.relays; ++n) {
        best = std::min(best, in.m_r * static_cast<double>(in.relays - n) + n * h1);
    }
    return best;
}

}  // namespace coopnoma

#endif  // COOPNOMA_ASYMPTOTIC_HPP
