// Nakagami-m channel power gain statistics.
//
// A Nakagami-m power gain with integer shape m and mean omega is Gamma(m, omega/m)
// distributed. This header covers the single-link law, the law of an MRC sum of
// i.i.d. links, the maximum of i.i.d. eavesdropper gains (the strongest
// jammer-to-eavesdropper link), and the jammed eavesdropper ratio
// Y = G / (1 + rho4 * H).

#ifndef COOPNOMA_CHANNEL_HPP
#define COOPNOMA_CHANNEL_HPP

#include <cmath>
#include <cstdint>
#include <map>
#include <mutex>
#include <random>
#include <utility>
#include <vector>

#include "special.hpp"

namespace coopnoma {

class NakagamiParams {
public:
    NakagamiParams(int m, double omega) : m_(m), omega_(omega) {
        detail::require(m >= 1, "NakagamiParams: m must be an integer >= 1");
        detail::require(omega > 0.0 && std::isfinite(omega),
                        "NakagamiParams: omega must be positive and finite");
    }

    int m() const { return m_; }
    double omega() const { return omega_; }
    /// lambda = m / omega.
    double rate() const { return m_ / omega_; }

    friend bool operator==(const NakagamiParams&, const NakagamiParams&) = default;

private:
    int m_;
    double omega_;
};

/// Link classes of one relay: S->R, R->U1, R->U2, R->E. All relays share them.
struct LinkSet {
    NakagamiParams source_relay;
    NakagamiParams relay_user1;
    NakagamiParams relay_user2;
    NakagamiParams relay_eaves;

    void validate() const {
        detail::require(relay_user1.m() == relay_user2.m(),
                        "LinkSet: relay->user links must share the same m");
    }
};

inline double gain_cdf(const NakagamiParams& p, double x) {
    detail::require(x >= 0.0, "gain_cdf: x must be nonnegative");
    return gamma_p_int(p.m(), p.rate() * x);
}

/// Survival function 1 - gain_cdf, evaluated without cancellation.
inline double gain_ccdf(const NakagamiParams& p, double x) {
    detail::require(x >= 0.0, "gain_ccdf: x must be nonnegative");
    return gamma_q_int(p.m(), p.rate() * x);
}

inline double gain_pdf(const NakagamiParams& p, double x) {
    detail::require(x >= 0.0, "gain_pdf: x must be nonnegative");
    const double lambda = p.rate();
    if (x == 0.0) {
        return p.m() == 1 ? lambda : 0.0;
    }
    return std::exp((p.m() - 1) * std::log(x) + p.m() * std::log(lambda) - lambda * x -
                    log_factorial(p.m() - 1));
}

/// Law of the sum of n i.i.d. gains: shape n*m, same rate.
inline NakagamiParams mrc_sum_law(const NakagamiParams& p, int n) {
    detail::require(n >= 1, "mrc_sum: n must be >= 1");
    return NakagamiParams(n * p.m(), n * p.omega());
}

inline double mrc_sum_cdf(const NakagamiParams& p, int n, double x) {
    return gain_cdf(mrc_sum_law(p, n), x);
}

inline double mrc_sum_pdf(const NakagamiParams& p, int n, double x) {
    return gain_pdf(mrc_sum_law(p, n), x);
}

/// One gain draw as a sum of m exponentials of mean omega/m (inverse-CDF each).
template <class Engine>
double sample_gain(const NakagamiParams& p, Engine& stream) {
    const double scale = p.omega() / p.m();
    double g = 0.0;
    for (int i = 0; i < p.m(); ++i) {
        // 53-bit uniform in [0,1), so 1-u is in (0,1].
        const double u = static_cast<double>(stream() >> 11) * 0x1.0p-53;
        g -= std::log1p(-u);
    }
    return g * scale;
}

// ---------------------------------------------------------------------------
// Maximum of (K-n) i.i.d. eavesdropper gains via multinomial expansion.

/// One composition (n_1, ..., n_{m+1}) of count-1 in the expansion of F^{count-1}.
/// The full coefficient is `a0 * lambda^b`; `a0` carries the sign.
struct MultinomialTerm {
    std::vector<int> exponents;
    double a0 = 0.0;
    int b = 0;
    int c = 1;

    double coefficient(double lambda) const { return a0 * std::pow(lambda, b); }
};

namespace detail {

inline void compose(int remaining, std::size_t slot, std::vector<int>& current,
                    std::vector<MultinomialTerm>& out) {
    if (slot + 1 == current.size()) {
        current[slot] = remaining;
        const int total = [&] {
            int s = 0;
            for (int v : current) s += v;
            return s;
        }();
        MultinomialTerm t;
        t.exponents = current;
        double log_mag = log_factorial(total);
        int sign_count = 0;
        for (std::size_t q = 0; q < current.size(); ++q) {
            log_mag -= log_factorial(current[q]);
        }
        // Slots p >= 2 (index q >= 1) carry -lambda^{p-2}/(p-2)!.
        for (std::size_t q = 1; q < current.size(); ++q) {
            const int np = current[q];
            const int power = static_cast<int>(q) - 1;
            log_mag -= np * log_factorial(power);
            sign_count += np;
            t.b += np * power;
            t.c += np;
        }
        t.a0 = (sign_count % 2 == 0 ? 1.0 : -1.0) * std::exp(log_mag);
        out.push_back(std::move(t));
        return;
    }
    for (int v = remaining; v >= 0; --v) {
        current[slot] = v;
        compose(remaining - v, slot + 1, current, out);
    }
}

}  // namespace detail

/// All compositions of count-1 into m_e+1 parts; cached per (m_e, count).
inline const std::vector<MultinomialTerm>& enumerate_multinomial_terms(int m_e, int count) {
    detail::require(m_e >= 1, "enumerate_multinomial_terms: m_E must be >= 1");
    detail::require(count >= 1, "enumerate_multinomial_terms: K-n must be >= 1");
    static std::mutex mutex;
    static std::map<std::pair<int, int>, std::vector<MultinomialTerm>> cache;
    std::lock_guard<std::mutex> lock(mutex);
    auto it = cache.find({m_e, count});
    if (it != cache.end()) {
        return it->second;
    }
    std::vector<MultinomialTerm> terms;
    std::vector<int> current(static_cast<std::size_t>(m_e) + 1, 0);
    detail::compose(count - 1, 0, current, terms);
    return cache.emplace(std::make_pair(m_e, count), std::move(terms)).first->second;
}

/// PDF of the maximum of `count` i.i.d. gains with law p.
inline double max_gain_pdf(const NakagamiParams& p, int count, double z) {
    detail::require(count >= 1, "max_gain_pdf: K-n must be >= 1");
    detail::require(z >= 0.0, "max_gain_pdf: z must be nonnegative");
    const double lambda = p.rate();
    const int m = p.m();
    const double prefactor = count * std::pow(lambda, m) / std::exp(log_factorial(m - 1));
    double sum = 0.0;
    for (const auto& t : enumerate_multinomial_terms(m, count)) {
        const int power = t.b + m - 1;
        const double zp = power == 0 ? 1.0 : std::pow(z, power);
        sum += t.coefficient(lambda) * zp * std::exp(-t.c * lambda * z);
    }
    return prefactor * sum;
}

// ---------------------------------------------------------------------------
// Jammed eavesdropper ratio Y = G / (1 + rho4 * H), H = max of `count` gains.

/// One (k, composition, j) term of the Y law. `weight` already includes the
/// (K-n) lambda^m / Gamma(m) prefactor, so
///   1 - F_Y(y) = sum weight * e^{-lambda y} y^k / (C + rho4 y)^varsigma.
struct JammedTerm {
    double weight = 0.0;
    int k = 0;
    int varsigma = 0;
    double c = 1.0;
    double d = 0.0;
};

inline std::vector<JammedTerm> jammed_ratio_terms(const NakagamiParams& p_e, int count,
                                                  double rho4) {
    detail::require(count >= 1, "jammed_ratio: K-n must be >= 1");
    detail::require(rho4 >= 0.0, "jammed_ratio: rho4 must be nonnegative");
    const double lambda = p_e.rate();
    const int m = p_e.m();
    const double phi0 = count * std::pow(lambda, m) / std::exp(log_factorial(m - 1));
    std::vector<JammedTerm> out;
    for (int k = 0; k < m; ++k) {
        for (const auto& t : enumerate_multinomial_terms(m, count)) {
            const double a = t.coefficient(lambda);
            for (int j = 0; j <= k; ++j) {
                JammedTerm term;
                term.k = k;
                term.varsigma = t.b + m + j;
                term.c = t.c;
                const double rho_pow = j == 0 ? 1.0 : std::pow(rho4, j);
                const double delta = binomial(k, j) * a * rho_pow *
                                     std::pow(lambda, k - term.varsigma) *
                                     std::exp(log_factorial(term.varsigma - 1) - log_factorial(k));
                term.weight = phi0 * delta;
                term.d = t.c * lambda - rho4 * k + rho4 * term.varsigma;
                if (term.weight != 0.0) {
                    out.push_back(term);
                }
            }
        }
    }
    return out;
}

/// 1 - F_Y(y) from an already expanded term list.
inline double jammed_ratio_ccdf(const std::vector<JammedTerm>& terms, double lambda_e,
                                double rho4, double y) {
    if (std::isinf(y)) {
        return 0.0;
    }
    double sum = 0.0;
    for (const auto& t : terms) {
        const double yk = t.k == 0 ? 1.0 : std::pow(y, t.k);
        sum += t.weight * std::exp(-lambda_e * y) * yk / std::pow(t.c + rho4 * y, t.varsigma);
    }
    return sum;
}

inline double jammed_ratio_cdf(const NakagamiParams& p_e, int count, double rho4, double y) {
    detail::require(y >= 0.0, "jammed_ratio_cdf: y must be nonnegative");
    const auto terms = jammed_ratio_terms(p_e, count, rho4);
    return 1.0 - jammed_ratio_ccdf(terms, p_e.rate(), rho4, y);
}

/// f_Y(y) from an already expanded term list.
inline double jammed_ratio_pdf(const std::vector<JammedTerm>& terms, double lambda_e, double rho4,
                               double y) {
    double sum = 0.0;
    for (const auto& t : terms) {
        double poly =
            rho4 * lambda_e * std::pow(y, t.k + 1) + t.d * (t.k == 0 ? 1.0 : std::pow(y, t.k));
        if (t.k > 0) {
            poly -= t.c * t.k * (t.k == 1 ? 1.0 : std::pow(y, t.k - 1));
        }
        sum += t.weight * std::exp(-lambda_e * y) * poly / std::pow(rho4 * y + t.c, t.varsigma + 1);
    }
    return sum;
}

inline double jammed_ratio_pdf(const NakagamiParams& p_e, int count, double rho4, double y) {
    detail::require(y >= 0.0, "jammed_ratio_pdf: y must be nonnegative");
    return jammed_ratio_pdf(jammed_ratio_terms(p_e, count, rho4), p_e.rate(), rho4, y);
}

}  // namespace coopnoma

#endif  // COOPNOMA_CHANNEL_HPP
