// Independent reference computations shared by the unit tests and the acceptance runner.

#ifndef COOPNOMA_TESTS_ORACLES_HPP
#define COOPNOMA_TESTS_ORACLES_HPP

#include <cmath>
#include <random>
#include <vector>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>
#include <boost/math/special_functions/gamma.hpp>

#include <coopnoma/channel.hpp>
#include <coopnoma/quadrature.hpp>
#include <coopnoma/system.hpp>

namespace oracle {

/// Integrand of g, straight from its definition.
inline double g_integrand(const coopnoma::GKernelArgs& g, double x) {
    const double pole = 1.0 - g.q * x;
    if (pole <= 0.0) return 0.0;
    double v = std::pow(x, g.b - 1.0) * std::exp(-g.f * x - g.h / pole);
    if (v == 0.0) return 0.0;
    v *= std::pow(1.0 + g.c * x, g.k) * std::pow(1.0 + g.r / pole, g.j);
    return v;
}

inline double h_integrand(const coopnoma::HKernelArgs& h, double y) {
    const double pole = 1.0 - h.v * y;
    if (pole <= 0.0) return 0.0;
    const double screen = std::exp(-h.f * y - h.r / pole);
    if (screen == 0.0) return 0.0;
    const double poly = h.rho4 * h.lambda_e * std::pow(y, h.k + 1) + h.big_d * std::pow(y, h.k) -
                        (h.k > 0 ? h.big_c * h.k * std::pow(y, h.k - 1) : 0.0);
    return std::pow(h.ell + h.theta1 * y, h.b) * std::pow(1.0 + h.u / pole, h.c) * poly /
           std::pow(h.rho4 * y + h.big_c, h.varsigma + 1) * screen;
}

/// Adaptive double-exponential quadrature; copes with the endpoint structure.
template <class F>
double adaptive(F f, double a, double b) {
    boost::math::quadrature::tanh_sinh<double> ts(15);
    return ts.integrate(f, a, b, 1e-13);
}

template <class F>
double kronrod(F f, double a, double b) {
    return boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, a, b, 20, 1e-13);
}

inline double g_adaptive(const coopnoma::GKernelArgs& g) {
    return adaptive([&](double x) { return g_integrand(g, x); }, 0.0, g.a);
}

inline double h_adaptive(const coopnoma::HKernelArgs& h) {
    return adaptive([&](double y) { return h_integrand(h, y); }, 0.0, h.a);
}

inline double db(double x) { return std::pow(10.0, x / 10.0); }

/// Reference operating point: m = 2 everywhere, Omega1 = 12 dB, Omega_R = Omega2 = 10 dB,
/// Omega_E = -5 dB, R1s = 0.1, R2s = 0.2, R1th = 0.2, R2th = 0.1, P_S = P_R = p_db.
inline coopnoma::SystemParams reference_params(int relays, double p_db) {
    coopnoma::SystemParams s;
    s.relays = relays;
    s.links = coopnoma::LinkSet{coopnoma::NakagamiParams(2, db(10)), coopnoma::NakagamiParams(2, db(12)),
                                coopnoma::NakagamiParams(2, db(10)), coopnoma::NakagamiParams(2, db(-5))};
    s.p_source = s.p_relay = db(p_db);
    s.r1_th = 0.2;
    s.r2_th = 0.1;
    s.r1_s = 0.1;
    s.r2_s = 0.2;
    return s;
}

/// Gamma(shape, 1/rate) survival function; 1 for nonpositive thresholds.
inline double gamma_tail(double shape, double rate, double x) {
    return x <= 0.0 ? 1.0 : boost::math::gamma_q(shape, rate * x);
}

inline double gamma_density(double shape, double rate, double x) {
    return rate * boost::math::gamma_p_derivative(shape, rate * x);
}

/// Pr{both users secure} for `branches` combined relays at SNR rho, integrating
/// the eavesdropper law directly against the two user tails.
inline double secure_prob_direct(const coopnoma::SystemParams& p, const coopnoma::PowerSplit& split,
                                 double rho, int branches) {
    const auto kc = coopnoma::link_constants(split, p.theta1(), p.theta2(), rho);
    if (!kc.feasible()) return 0.0;
    const double tu = branches * p.links.relay_user1.m();
    const double te = branches * p.links.relay_eaves.m();
    auto f = [&](double x) {
        if (x >= kc.a) return 0.0;
        return gamma_density(te, p.lambda_e(), x) *
               gamma_tail(tu, p.lambda1(), kc.b + p.theta1() * x) *
               gamma_tail(tu, p.lambda2(), kc.u2_threshold(split.alpha2, x));
    };
    return adaptive(f, 0.0, kc.a);
}

/// Pr{at least one user in outage}, integrated from the CDFs so deep tails survive.
inline double outage_prob_direct(const coopnoma::SystemParams& p, const coopnoma::PowerSplit& split,
                                 double rho, int branches) {
    const auto kc = coopnoma::link_constants(split, p.theta1(), p.theta2(), rho);
    if (!kc.feasible()) return 1.0;
    const double tu = branches * p.links.relay_user1.m();
    const double te = branches * p.links.relay_eaves.m();
    auto f = [&](double x) {
        if (x >= kc.a) return 0.0;
        const double f1 = boost::math::gamma_p(tu, p.lambda1() * (kc.b + p.theta1() * x));
        const double t2 = kc.u2_threshold(split.alpha2, x);
        const double f2 = t2 <= 0.0 ? 0.0 : boost::math::gamma_p(tu, p.lambda2() * t2);
        return gamma_density(te, p.lambda_e(), x) * (f1 + f2 - f1 * f2);
    };
    return boost::math::gamma_q(te, p.lambda_e() * kc.a) + adaptive(f, 0.0, kc.a);
}

/// Per-relay secure probability of a dual-selection data relay, conditioning on the
/// strongest of `jammers` jamming gains and integrating the eavesdropper gain.
inline double jammed_secure_prob_direct(const coopnoma::SystemParams& p,
                                        const coopnoma::PowerPolicy& policy, int jammers) {
    const auto split = policy.resolve(p);
    const double rho3 = (1.0 - policy.alpha_j) * p.p_relay / p.sigma2;
    const double rho4 = policy.alpha_j * p.p_relay / p.sigma2;
    const auto jc = coopnoma::jamming_constants(split, p.theta1(), p.theta2(), rho3);
    if (!jc.feasible()) return 0.0;
    const double mu = p.links.relay_user1.m();
    const double me = p.links.relay_eaves.m();
    const double le = p.lambda_e();
    auto secure_given_y = [&](double y) {
        if (y >= 1.0 / jc.v) return 0.0;
        return gamma_tail(mu, p.lambda1(), jc.ell + p.theta1() * y) *
               gamma_tail(mu, p.lambda2(), jc.w + jc.w * jc.u / (1.0 - jc.v * y));
    };
    auto inner = [&](double z) {
        const double s = 1.0 + rho4 * z;
        auto g = [&](double x) { return gamma_density(me, le, x) * secure_given_y(x / s); };
        return adaptive(g, 0.0, s / jc.v);
    };
    auto outer = [&](double z) {
        const double fz = jammers * std::pow(boost::math::gamma_p(me, le * z), jammers - 1) *
                          gamma_density(me, le, z);
        return fz == 0.0 ? 0.0 : fz * inner(z);
    };
    double zmax = 1.0;
    while (boost::math::gamma_q(me, le * zmax) > 1e-14) zmax *= 2.0;
    return kronrod(outer, 0.0, zmax);
}

/// A feasible scenario drawn at random: constants of the secure-connection
/// events as the exact engine builds them.
struct KernelCase {
    coopnoma::GKernelArgs g;
    coopnoma::HKernelArgs h;
};

inline KernelCase random_kernel_case(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u01(0.0, 1.0);
    std::uniform_int_distribution<int> m_dist(1, 3);
    for (;;) {
        const double alpha1 = 0.05 + 0.5 * u01(rng);
        const double r1s = 0.05 + 0.4 * u01(rng);
        const double r2s = 0.05 + 0.4 * u01(rng);
        const double theta1 = std::exp(2 * r1s);
        const double theta2 = std::exp(2 * r2s);
        if (alpha1 * theta2 >= 0.95) continue;
        const double rho = std::pow(10.0, 3.0 * u01(rng));  // 0..30 dB
        const coopnoma::PowerSplit split{alpha1, 1.0 - alpha1};
        const auto kc = coopnoma::link_constants(split, theta1, theta2, rho);
        const double l1 = m_dist(rng) / std::pow(10.0, 1.5 * u01(rng));
        const double l2 = m_dist(rng) / std::pow(10.0, 1.0 * u01(rng));
        const int me = m_dist(rng);
        const double le = me / std::pow(10.0, -0.5 - 0.7 * u01(rng));
        KernelCase out;
        out.g.a = kc.a;
        out.g.b = me * m_dist(rng);
        out.g.c = theta1 / kc.b;
        out.g.r = split.alpha2 / (kc.d * kc.c);
        out.g.q = kc.e / kc.d;
        out.g.f = l1 * theta1 + le;
        out.g.h = l2 * split.alpha2 / kc.d;
        out.g.k = m_dist(rng) - 1;
        out.g.j = m_dist(rng) - 1;

        const double alpha_j = 0.1 + 0.7 * u01(rng);
        const double rho3 = (1 - alpha_j) * rho;
        const double rho4 = alpha_j * rho;
        const auto jc = coopnoma::jamming_constants(split, theta1, theta2, rho3);
        const int count = m_dist(rng);
        const auto terms = coopnoma::jammed_ratio_terms(coopnoma::NakagamiParams(me, me / le),
                                                        count, rho4);
        const auto& t = terms[std::uniform_int_distribution<std::size_t>(0, terms.size() - 1)(rng)];
        out.h.a = 1.0 / jc.v;
        out.h.b = m_dist(rng) - 1;
        out.h.c = m_dist(rng) - 1;
        out.h.f = l1 * theta1 + le;
        out.h.r = l2 * jc.w * jc.u;
        out.h.u = jc.u;
        out.h.v = jc.v;
        out.h.ell = jc.ell;
        out.h.theta1 = theta1;
        out.h.k = t.k;
        out.h.varsigma = t.varsigma;
        out.h.big_c = t.c;
        out.h.big_d = t.d;
        out.h.rho4 = rho4;
        out.h.lambda_e = le;
        return out;
    }
}

}  // namespace oracle

#endif  // COOPNOMA_TESTS_ORACLES_HPP
