// Integer-shape gamma-family special functions used by both engines.
//
// Every Nakagami-m quantity in this library has an integer fading shape, so
// the incomplete gamma functions reduce to finite Poisson sums. They are
// evaluated with all-positive series on whichever side (lower or upper) is
// small, which keeps relative precision in both tails.

#ifndef COOPNOMA_SPECIAL_HPP
#define COOPNOMA_SPECIAL_HPP

#include <cmath>
#include <stdexcept>
#include <string>

namespace coopnoma {

namespace detail {

inline void require(bool ok, const std::string& what) {
    if (!ok) {
        throw std::invalid_argument(what);
    }
}

// Switch to log-domain term evaluation past this point to avoid e^{-x} underflow
// cancelling against x^k overflow.
inline constexpr double kLogDomainThreshold = 700.0;

}  // namespace detail

inline double log_factorial(int n) {
    detail::require(n >= 0, "log_factorial: n must be nonnegative");
    return std::lgamma(static_cast<double>(n) + 1.0);
}

inline double factorial(int n) {
    detail::require(n >= 0, "factorial: n must be nonnegative");
    double r = 1.0;
    for (int i = 2; i <= n; ++i) {
        r *= i;
    }
    return r;
}

inline double binomial(int n, int k) {
    if (k < 0 || k > n) {
        return 0.0;
    }
    if (n <= 30) {
        double r = 1.0;
        for (int i = 1; i <= k; ++i) {
            r = r * (n - k + i) / i;
        }
        return std::round(r);
    }
    return std::exp(log_factorial(n) - log_factorial(n - k) - log_factorial(k));
}

/// Upper regularized gamma Q(shape, x) = e^{-x} sum_{k<shape} x^k/k! for integer shape.
inline double gamma_q_int(int shape, double x) {
    detail::require(shape >= 1, "gamma_q_int: shape must be >= 1");
    detail::require(x >= 0.0, "gamma_q_int: x must be nonnegative");
    if (x == 0.0) {
        return 1.0;
    }
    if (std::isinf(x)) {
        return 0.0;
    }
    if (x < shape) {
        // Q is close to one; compute P by its series and complement.
        double p_sum = 0.0;
        double term = std::exp(shape * std::log(x) - x - log_factorial(shape));
        for (int k = shape; k < shape + 500; ++k) {
            p_sum += term;
            term *= x / (k + 1);
            if (term < 1e-18 * p_sum) {
                break;
            }
        }
        return 1.0 - p_sum;
    }
    if (x > detail::kLogDomainThreshold) {
        double sum = 0.0;
        for (int k = 0; k < shape; ++k) {
            sum += std::exp(-x + k * std::log(x) - log_factorial(k));
        }
        return sum;
    }
    double term = 1.0;
    double sum = 1.0;
    for (int k = 1; k < shape; ++k) {
        term *= x / k;
        sum += term;
    }
    return std::exp(-x) * sum;
}

/// Lower regularized gamma P(shape, x) for integer shape.
inline double gamma_p_int(int shape, double x) {
    detail::require(shape >= 1, "gamma_p_int: shape must be >= 1");
    detail::require(x >= 0.0, "gamma_p_int: x must be nonnegative");
    if (x == 0.0) {
        return 0.0;
    }
    if (std::isinf(x)) {
        return 1.0;
    }
    if (x < shape) {
        // sum_{k>=shape} e^{-x} x^k/k!, all terms positive and decreasing.
        double sum = 0.0;
        double term = std::exp(shape * std::log(x) - x - log_factorial(shape));
        for (int k = shape; k < shape + 500; ++k) {
            sum += term;
            term *= x / (k + 1);
            if (term < 1e-18 * sum) {
                break;
            }
        }
        return sum;
    }
    return 1.0 - gamma_q_int(shape, x);
}

/// Non-regularized lower incomplete gamma for integer shape: (shape-1)! P(shape, x).
inline double lower_incomplete_gamma_int(int shape, double x) {
    return std::exp(log_factorial(shape - 1)) * gamma_p_int(shape, x);
}

}  // namespace coopnoma

#endif  // COOPNOMA_SPECIAL_HPP
