// Exact secrecy outage probability of the four relay-selection schemes.
//
// The SOP is a mixture over the size n of the decoding set:
//   P_out = sum_n Pr{|Phi| = n} P_{Phi_n},   P_{Phi_0} = 1.
// The conditional terms reduce to the g/h kernels of quadrature.hpp.

#ifndef COOPNOMA_ANALYTIC_HPP
#define COOPNOMA_ANALYTIC_HPP

#include <algorithm>
#include <cmath>
#include <vector>

#include "channel.hpp"
#include "quadrature.hpp"
#include "special.hpp"
#include "system.hpp"

namespace coopnoma {

inline double clamp_probability(double p) {
    if (std::isnan(p)) {
        throw std::domain_error("probability evaluated to NaN");
    }
    return std::clamp(p, 0.0, 1.0);
}

/// Probability that one relay decodes both messages.
inline double decode_prob_chi(const SystemParams& params) {
    return gain_ccdf(params.links.source_relay, params.eta());
}

inline std::vector<double> decoding_set_pmf_from_chi(int relays, double chi) {
    detail::require(relays >= 1, "decoding_set_pmf: K must be >= 1");
    detail::require(chi >= 0.0 && chi <= 1.0, "decoding_set_pmf: chi must be in [0,1]");
    std::vector<double> pmf(static_cast<std::size_t>(relays) + 1);
    for (int n = 0; n <= relays; ++n) {
        const double hit = n == 0 ? 1.0 : std::pow(chi, n);
        const double miss = n == relays ? 1.0 : std::pow(1.0 - chi, relays - n);
        pmf[n] = binomial(relays, n) * hit * miss;
    }
    return pmf;
}

inline std::vector<double> decoding_set_pmf(const SystemParams& params) {
    return decoding_set_pmf_from_chi(params.relays, decode_prob_chi(params));
}

namespace detail {

// Joint secure-connection probability of one transmitter seen through MRC of
// `branches` links (shape branches*m per user and eavesdropper):
//   beta_E e^{-l1 b - l2 c} sum_{k,j} l1^k l2^j / (k! j!) b^k c^j g(...)
inline double secure_connection_prob(const SystemParams& params, const PowerSplit& split,
                                     double rho, int branches, const QuadratureSpec& quad) {
    const LinkConstants kc = link_constants(split, params.theta1(), params.theta2(), rho);
    if (!kc.feasible()) {
        return 0.0;
    }
    const int tau_u = branches * params.m_user();
    const int tau_e = branches * params.links.relay_eaves.m();
    const double l1 = params.lambda1();
    const double l2 = params.lambda2();
    const double le = params.lambda_e();
    const double log_beta = tau_e * std::log(le) - log_factorial(tau_e - 1);

    GKernelArgs g;
    g.a = kc.a;
    g.b = tau_e;
    g.c = params.theta1() / kc.b;
    g.r = split.alpha2 / (kc.d * kc.c);
    g.q = kc.e / kc.d;
    g.f = l1 * params.theta1() + le;
    g.h = l2 * split.alpha2 / kc.d;

    double sum = 0.0;
    for (int k = 0; k < tau_u; ++k) {
        for (int j = 0; j < tau_u; ++j) {
            g.k = k;
            g.j = j;
            const double kernel = g_kernel(g, quad);
            if (kernel == 0.0) continue;
            // c < 0, so c^j alternates; the magnitude goes through logs.
            const double log_coef = k * std::log(l1 * kc.b) + j * std::log(l2 * -kc.c) -
                                    log_factorial(k) - log_factorial(j);
            const double sign = j % 2 == 0 ? 1.0 : -1.0;
            sum += sign * std::exp(log_coef + log_beta - l1 * kc.b - l2 * kc.c) * kernel;
        }
    }
    return sum;
}

// Below this the series complement 1 - Pr{secure} has lost its significant digits.
inline constexpr double kDirectOutageSwitch = 1e-6;

// Gamma(shape) CDF argument past which the CDF is one to ~1e-17.
inline double saturation_argument(int shape) {
    return shape + 10.0 * std::sqrt(static_cast<double>(shape)) + 40.0;
}

// Composite 32-node Gauss-Legendre over the sorted breakpoints in [lo, hi].
template <class F>
double composite_integral(F&& f, std::vector<double> points, double lo, double hi) {
    static const QuadratureSpec rule(32);
    points.push_back(lo);
    points.push_back(hi);
    std::sort(points.begin(), points.end());
    double sum = 0.0;
    double prev = lo;
    for (double x : points) {
        if (!(x > prev) || x > hi) continue;
        const double half = (x - prev) / 2.0;
        for (int i = 0; i < rule.size(); ++i) {
            sum += half * rule.weights()[i] * f(prev + half * (rule.nodes()[i] + 1.0));
        }
        prev = x;
    }
    return sum;
}

// Points where a CDF argument, increasing in x, passes top * 2^{-i}; `inverse`
// maps an argument back to x (NaN when out of range).
template <class Inverse>
void add_transition_points(std::vector<double>& points, double top, Inverse&& inverse) {
    for (int i = 0; i < 80; ++i) {
        const double x = inverse(std::ldexp(top, -i));
        if (!(x > 0.0)) break;
        points.push_back(x);
    }
}

// Geometric grid around the eavesdropper scale so its density is resolved.
inline void add_scale_points(std::vector<double>& points, double scale) {
    for (int i = -40; i <= 40; ++i) points.push_back(std::ldexp(scale, i));
}

// Outage straight from the user CDFs:
//   Pr{GE >= x_s} + int_0^{x_s} f_E(x) [F1 + F2 - F1 F2] dx,
// where F2 = 1 beyond x_s. Lower-incomplete-gamma CDFs keep tiny outages exact.
inline double direct_outage_prob(const SystemParams& params, const PowerSplit& split, double rho,
                                 int branches) {
    const LinkConstants kc = link_constants(split, params.theta1(), params.theta2(), rho);
    if (!kc.feasible()) {
        return 1.0;
    }
    const int tau_u = branches * params.m_user();
    const int tau_e = branches * params.links.relay_eaves.m();
    const double l1 = params.lambda1();
    const double l2 = params.lambda2();
    const double le = params.lambda_e();
    const double th1 = params.theta1();
    const double top = saturation_argument(tau_u);
    // x at which G2's threshold reaches t: c + alpha2 / (d - e x) = t
    auto x_of_t2 = [&](double t) { return (kc.d - split.alpha2 / (t - kc.c)) / kc.e; };
    const double x_sat = x_of_t2(top / l2);
    const double x_end = x_sat > 0.0 && x_sat < kc.a ? x_sat : kc.a;

    std::vector<double> points;
    add_transition_points(points, top, [&](double v) { return x_of_t2(v / l2); });
    add_transition_points(points, top, [&](double v) { return (v / l1 - kc.b) / th1; });
    add_scale_points(points, saturation_argument(tau_e) / le);
    const double zero2 = x_of_t2(0.0);
    if (zero2 > 0.0) points.push_back(zero2);

    const double log_norm = tau_e * std::log(le) - log_factorial(tau_e - 1);
    auto integrand = [&](double x) {
        const double f_e = std::exp(log_norm + (tau_e - 1) * std::log(x) - le * x);
        if (f_e == 0.0) return 0.0;
        const double f1 = gamma_p_int(tau_u, l1 * (kc.b + th1 * x));
        const double t2 = kc.u2_threshold(split.alpha2, x);
        const double f2 = t2 <= 0.0 ? 0.0 : gamma_p_int(tau_u, l2 * t2);
        return f_e * (f1 + f2 - f1 * f2);
    };
    return gamma_q_int(tau_e, le * x_end) + composite_integral(integrand, points, 0.0, x_end);
}

/// 1 - Pr{secure}, switching to the direct form in the deep tail.
inline double connection_outage_prob(const SystemParams& params, const PowerSplit& split,
                                     double rho, int branches, const QuadratureSpec& quad) {
    const double out = 1.0 - secure_connection_prob(params, split, rho, branches, quad);
    if (out < kDirectOutageSwitch) {
        return direct_outage_prob(params, split, rho, branches);
    }
    return out;
}

}  // namespace detail

/// TMRC conditioned on |Phi| = n: all n relays share P_R and both users combine.
inline double sop_tmrc_cond(const SystemParams& params, const PowerPolicy& policy, int n,
                            const QuadratureSpec& quad) {
    detail::require(n >= 1, "sop_tmrc_cond: n must be >= 1");
    const PowerSplit split = policy.resolve(params);
    const double rho1 = params.p_relay / (n * params.sigma2);
    return clamp_probability(detail::connection_outage_prob(params, split, rho1, n, quad));
}

/// Per-relay probability that both users are securely served at full relay power.
inline double delta1(const SystemParams& params, const PowerPolicy& policy,
                     const QuadratureSpec& quad) {
    const PowerSplit split = policy.resolve(params);
    return clamp_probability(
        detail::secure_connection_prob(params, split, params.rho_relay(), 1, quad));
}

inline double sop_osrs_cond(const SystemParams& params, const PowerPolicy& policy, int n,
                            const QuadratureSpec& quad) {
    detail::require(n >= 0, "sop_osrs_cond: n must be >= 0");
    if (n == 0) {
        return 1.0;
    }
    const PowerSplit split = policy.resolve(params);
    const double miss =
        detail::connection_outage_prob(params, split, params.rho_relay(), 1, quad);
    return clamp_probability(std::pow(clamp_probability(miss), n));
}

/// Per-relay secure probability for an ODRS data relay when the strongest of
/// the K-n non-decoding relays jams the eavesdropper.
inline double delta4(const SystemParams& params, const PowerPolicy& policy, int n,
                     const QuadratureSpec& quad) {
    detail::require(n < params.relays, "delta4: needs a jamming relay (n < K)");
    detail::require(n >= 0, "delta4: n must be >= 0");
    const PowerSplit split = policy.resolve(params);
    const double rho3 = (1.0 - policy.alpha_j) * params.p_relay / params.sigma2;
    const double rho4 = policy.alpha_j * params.p_relay / params.sigma2;
    const JammingConstants jc = jamming_constants(split, params.theta1(), params.theta2(), rho3);
    if (!jc.feasible()) {
        return 0.0;
    }
    const int mu = params.m_user();
    const double l1 = params.lambda1();
    const double l2 = params.lambda2();
    const double le = params.lambda_e();
    const auto terms = jammed_ratio_terms(params.links.relay_eaves, params.relays - n, rho4);

    HKernelArgs h;
    h.a = 1.0 / jc.v;
    h.f = l1 * params.theta1() + le;
    h.r = l2 * jc.w * jc.u;
    h.u = jc.u;
    h.v = jc.v;
    h.ell = jc.ell;
    h.theta1 = params.theta1();
    h.rho4 = rho4;
    h.lambda_e = le;

    double sum = 0.0;
    for (int p = 0; p < mu; ++p) {
        for (int q = 0; q < mu; ++q) {
            // w < 0, so w^q alternates.
            const double log_coef = p * std::log(l1) + q * std::log(l2 * -jc.w) -
                                    log_factorial(p) - log_factorial(q);
            const double sign = q % 2 == 0 ? 1.0 : -1.0;
            const double coef = sign * std::exp(log_coef - l1 * jc.ell - l2 * jc.w);
            h.b = p;
            h.c = q;
            for (const auto& t : terms) {
                h.k = t.k;
                h.varsigma = t.varsigma;
                h.big_c = t.c;
                h.big_d = t.d;
                sum += coef * t.weight * h_kernel(h, quad);
            }
        }
    }
    return clamp_probability(sum);
}

namespace detail {

// Dual-selection counterpart of direct_outage_prob with the jammed ratio Y:
//   Pr{Y >= y_s} + int_0^{y_s} f_Y(y) [F1 + F2 - F1 F2] dy.
inline double direct_jammed_outage_prob(const SystemParams& params, const PowerPolicy& policy,
                                        int n) {
    const PowerSplit split = policy.resolve(params);
    const double rho3 = (1.0 - policy.alpha_j) * params.p_relay / params.sigma2;
    const double rho4 = policy.alpha_j * params.p_relay / params.sigma2;
    const JammingConstants jc = jamming_constants(split, params.theta1(), params.theta2(), rho3);
    if (!jc.feasible()) {
        return 1.0;
    }
    const int mu = params.m_user();
    const double l1 = params.lambda1();
    const double l2 = params.lambda2();
    const double le = params.lambda_e();
    const double th1 = params.theta1();
    const auto terms = jammed_ratio_terms(params.links.relay_eaves, params.relays - n, rho4);
    const double a = 1.0 / jc.v;
    const double top = saturation_argument(mu);
    // y at which G2's threshold reaches t: w + w u / (1 - v y) = t
    auto y_of_t2 = [&](double t) { return (1.0 - jc.w * jc.u / (t - jc.w)) / jc.v; };
    const double y_sat = y_of_t2(top / l2);
    const double y_end = y_sat > 0.0 && y_sat < a ? y_sat : a;

    std::vector<double> points;
    add_transition_points(points, top, [&](double v) { return y_of_t2(v / l2); });
    add_transition_points(points, top, [&](double v) { return (v / l1 - jc.ell) / th1; });
    add_scale_points(points, saturation_argument(params.links.relay_eaves.m()) / le);
    const double zero2 = y_of_t2(0.0);
    if (zero2 > 0.0) points.push_back(zero2);

    auto integrand = [&](double y) {
        const double f_y = jammed_ratio_pdf(terms, le, rho4, y);
        if (f_y == 0.0) return 0.0;
        const double f1 = gamma_p_int(mu, l1 * (jc.ell + th1 * y));
        const double t2 = jc.w + jc.w * jc.u / (1.0 - jc.v * y);
        const double f2 = t2 <= 0.0 ? 0.0 : gamma_p_int(mu, l2 * t2);
        return f_y * (f1 + f2 - f1 * f2);
    };
    return jammed_ratio_ccdf(terms, le, rho4, y_end) + composite_integral(integrand, points, 0.0, y_end);
}

inline double jammed_outage_prob(const SystemParams& params, const PowerPolicy& policy, int n,
                                 const QuadratureSpec& quad) {
    const double out = 1.0 - delta4(params, policy, n, quad);
    if (out < kDirectOutageSwitch) {
        return direct_jammed_outage_prob(params, policy, n);
    }
    return out;
}

}  // namespace detail

inline double sop_odrs_cond(const SystemParams& params, const PowerPolicy& policy, int n,
                            const QuadratureSpec& quad) {
    detail::require(n >= 0 && n <= params.relays, "sop_odrs_cond: n must be in [0, K]");
    if (n == 0) {
        return 1.0;
    }
    if (n == params.relays) {
        return sop_osrs_cond(params, policy, n, quad);
    }
    return clamp_probability(
        std::pow(clamp_probability(detail::jammed_outage_prob(params, policy, n, quad)), n));
}

inline double sop_conditional(const SystemParams& params, const PowerPolicy& policy,
                              SchemeKind scheme, int n, const QuadratureSpec& quad) {
    if (n == 0) {
        return 1.0;
    }
    switch (scheme) {
        case SchemeKind::TMRC: return sop_tmrc_cond(params, policy, n, quad);
        case SchemeKind::OSRS:
        case SchemeKind::TSRS: return sop_osrs_cond(params, policy, n, quad);
        case SchemeKind::ODRS: return sop_odrs_cond(params, policy, n, quad);
    }
    return 1.0;
}

inline SopResult sop_total(const SystemParams& params, const PowerPolicy& policy,
                           SchemeKind scheme, const QuadratureSpec& quad) {
    params.validate();
    policy.validate();
    const auto pmf = decoding_set_pmf(params);
    double total = pmf[0];
    for (int n = 1; n <= params.relays; ++n) {
        if (pmf[n] == 0.0) continue;
        total += pmf[n] * sop_conditional(params, policy, scheme, n, quad);
    }
    SopResult r;
    r.value = clamp_probability(total);
    r.engine = Engine::Analytic;
    return r;
}

}  // namespace coopnoma

#endif  // COOPNOMA_ANALYTIC_HPP
