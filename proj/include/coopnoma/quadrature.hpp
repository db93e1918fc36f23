// Gauss-Legendre rule and the two integral kernels of the closed-form SOPs.
//
// g(a,b,c,r,q,f,h,k,j) = int_0^a x^{b-1} e^{-f x - h/(1-q x)} (1+c x)^k (1 + r/(1-q x))^j dx
// h(a,b,c,f,r,u,v,ell)  = int_0^a (ell + theta1 y)^b (1 + u/(1-v y))^c
//                           * (rho4 lambdaE y^{k+1} + D y^k - C k y^{k-1})
//                           / (rho4 y + C)^{varsigma+1} * e^{-f y - r/(1-v y)} dy
//
// Both are evaluated with an N-node Gauss-Legendre rule mapped onto [0, a].
// In every use q*a = 1 (resp. a = 1/v): the pole sits exactly on the upper
// endpoint, where it is screened by e^{-h/(1-qx)} for h > 0.

#ifndef COOPNOMA_QUADRATURE_HPP
#define COOPNOMA_QUADRATURE_HPP

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "special.hpp"

namespace coopnoma {

inline constexpr int kDefaultQuadratureNodes = 300;

/// Gauss-Legendre abscissae (strictly increasing in (-1,1)) and weights.
class QuadratureSpec {
public:
    explicit QuadratureSpec(int n = kDefaultQuadratureNodes) : nodes_(n), weights_(n) {
        detail::require(n >= 1, "QuadratureSpec: node count must be >= 1");
        const int half = (n + 1) / 2;
        for (int i = 0; i < half; ++i) {
            // Tricomi initial guess for the i-th root from the top, then Newton.
            double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
            double dp = 0.0;
            for (int iter = 0; iter < 100; ++iter) {
                double p0 = 1.0;
                double p1 = x;
                for (int k = 2; k <= n; ++k) {
                    const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                    p0 = p1;
                    p1 = p2;
                }
                if (n == 1) {
                    p0 = 1.0;
                    p1 = x;
                }
                dp = n * (x * p1 - p0) / (x * x - 1.0);
                const double dx = p1 / dp;
                x -= dx;
                if (std::abs(dx) < 1e-16) {
                    break;
                }
            }
            // Recompute the derivative at the converged root.
            double p0 = 1.0;
            double p1 = x;
            for (int k = 2; k <= n; ++k) {
                const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            dp = n == 1 ? 1.0 : n * (x * p1 - p0) / (x * x - 1.0);
            const double w = 2.0 / ((1.0 - x * x) * dp * dp);
            nodes_[n - 1 - i] = x;
            nodes_[i] = -x;
            weights_[i] = w;
            weights_[n - 1 - i] = w;
        }
        if (n % 2 == 1) {
            nodes_[n / 2] = 0.0;
        }
    }

    int size() const { return static_cast<int>(nodes_.size()); }
    const std::vector<double>& nodes() const { return nodes_; }
    const std::vector<double>& weights() const { return weights_; }

private:
    std::vector<double> nodes_;
    std::vector<double> weights_;
};

struct GKernelArgs {
    double a = 0.0;
    double b = 1.0;
    double c = 0.0;
    double r = 0.0;
    double q = 0.0;
    double f = 0.0;
    double h = 0.0;
    int k = 0;
    int j = 0;
};

// Relative slack for the pole landing on the upper endpoint through rounding.
inline constexpr double kPoleSlack = 1e-9;

// Upper limit actually integrated: past (s + 10 sqrt(s) + 40) / f the factor
// x^{s-1} e^{-f x} has shed all but ~1e-17 of its mass. Without it a sharply
// decaying integrand (f a in the millions) falls between the nodes.
inline double effective_upper(double a, double f, double shape) {
    if (!(f > 0.0)) return a;
    return std::min(a, (shape + 10.0 * std::sqrt(shape) + 40.0) / f);
}

inline double g_kernel(const GKernelArgs& g, const QuadratureSpec& quad) {
    if (!(g.a > 0.0)) {
        throw std::domain_error("g_kernel: upper limit a must be positive");
    }
    if (g.q * g.a > 1.0 + kPoleSlack) {
        throw std::domain_error("g_kernel: pole 1/q lies inside (0, a)");
    }
    const double upper = effective_upper(g.a, g.f, g.b + g.k);
    const auto& t = quad.nodes();
    const auto& w = quad.weights();
    double sum = 0.0;
    for (int i = 0; i < quad.size(); ++i) {
        const double s = t[i] + 1.0;
        const double pole = 2.0 - upper * g.q * s;  // 2 (1 - q x)
        double log_mag = (g.b - 1.0) * std::log(s) - upper * g.f * s / 2.0;
        if (g.h != 0.0) {
            log_mag -= 2.0 * g.h / pole;
        }
        double sign = 1.0;
        if (g.k != 0) {
            const double base = 1.0 + upper * g.c * s / 2.0;
            log_mag += g.k * std::log(std::abs(base));
            if (base < 0.0 && g.k % 2 != 0) sign = -sign;
        }
        if (g.j != 0) {
            const double base = 1.0 + 2.0 * g.r / pole;
            log_mag += g.j * std::log(std::abs(base));
            if (base < 0.0 && g.j % 2 != 0) sign = -sign;
        }
        sum += w[i] * sign * std::exp(log_mag);
    }
    return std::pow(upper / 2.0, g.b) * sum;
}

struct HKernelArgs {
    double a = 0.0;
    int b = 0;
    int c = 0;
    double f = 0.0;
    double r = 0.0;
    double u = 0.0;
    double v = 0.0;
    double ell = 0.0;
    double theta1 = 1.0;
    // One term of the jammed ratio density.
    int k = 0;
    int varsigma = 1;
    double big_c = 1.0;
    double big_d = 0.0;
    double rho4 = 0.0;
    double lambda_e = 1.0;
};

inline double h_kernel(const HKernelArgs& h, const QuadratureSpec& quad) {
    if (!(h.v > 0.0)) {
        throw std::domain_error("h_kernel: v must be positive");
    }
    if (!(h.a > 0.0)) {
        throw std::domain_error("h_kernel: upper limit a must be positive");
    }
    if (h.v * h.a > 1.0 + kPoleSlack) {
        throw std::domain_error("h_kernel: pole 1/v lies inside (0, a)");
    }
    const double upper = effective_upper(h.a, h.f, h.k + h.b + 2.0);
    const auto& t = quad.nodes();
    const auto& w = quad.weights();
    double sum = 0.0;
    for (int i = 0; i < quad.size(); ++i) {
        const double y = upper / 2.0 * (t[i] + 1.0);
        const double pole = 1.0 - h.v * y;
        double poly = h.rho4 * h.lambda_e * std::pow(y, h.k + 1) +
                      h.big_d * (h.k == 0 ? 1.0 : std::pow(y, h.k));
        if (h.k > 0) {
            poly -= h.big_c * h.k * (h.k == 1 ? 1.0 : std::pow(y, h.k - 1));
        }
        double log_mag = -h.f * y - (h.varsigma + 1) * std::log(h.rho4 * y + h.big_c);
        if (h.r != 0.0) {
            log_mag -= h.r / pole;
        }
        double sign = poly < 0.0 ? -1.0 : 1.0;
        log_mag += std::log(std::abs(poly));
        if (h.b != 0) {
            const double base = h.ell + h.theta1 * y;
            log_mag += h.b * std::log(std::abs(base));
            if (base < 0.0 && h.b % 2 != 0) sign = -sign;
        }
        if (h.c != 0) {
            const double base = 1.0 + h.u / pole;
            log_mag += h.c * std::log(std::abs(base));
            if (base < 0.0 && h.c % 2 != 0) sign = -sign;
        }
        sum += w[i] * sign * std::exp(log_mag);
    }
    return upper / 2.0 * sum;
}

}  // namespace coopnoma

#endif  // COOPNOMA_QUADRATURE_HPP
