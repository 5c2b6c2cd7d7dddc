// Special functions and Gauss-Laguerre quadrature used by the outage analysis.
#pragma once

#include <cmath>
#include <cstddef>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

namespace risnoma {

namespace detail {

inline void require_finite(double x, const char* what) {
    if (!std::isfinite(x)) {
        throw std::domain_error(std::string(what) + ": non-finite argument");
    }
}

} // namespace detail

/// Natural log of the Gamma function for x > 0 (Lanczos, g=7, 9 terms).
inline double ln_gamma(double x) {
    detail::require_finite(x, "ln_gamma");
    if (x <= 0.0) {
        throw std::domain_error("ln_gamma: argument must be positive");
    }
    static constexpr double kCoef[9] = {
        0.99999999999980993,     676.5203681218851,    -1259.1392167224028,
        771.32342877765313,     -176.61502916214059,      12.507343278686905,
        -0.13857109526572012,      9.9843695780195716e-6,  1.5056327351493116e-7};
    if (x < 0.5) {
        // Reflection keeps the series argument away from the poles.
        return std::log(M_PI / std::sin(M_PI * x)) - ln_gamma(1.0 - x);
    }
    const double z = x - 1.0;
    double acc = kCoef[0];
    for (int i = 1; i < 9; ++i) {
        acc += kCoef[i] / (z + i);
    }
    const double t = z + 7.5;
    return 0.5 * std::log(2.0 * M_PI) + (z + 0.5) * std::log(t) - t + std::log(acc);
}

namespace detail {

inline constexpr int kIncGammaMaxIter = 500;
inline constexpr double kIncGammaTol = 1e-15;

// Series for P(s,x), valid for x < s + 1.
inline double inc_gamma_series(double s, double x) {
    double term = 1.0 / s;
    double sum = term;
    double denom = s;
    for (int n = 0; n < kIncGammaMaxIter; ++n) {
        denom += 1.0;
        term *= x / denom;
        sum += term;
        if (std::abs(term) < std::abs(sum) * kIncGammaTol) {
            return sum * std::exp(-x + s * std::log(x) - ln_gamma(s));
        }
    }
    throw std::runtime_error("reg_lower_inc_gamma: series did not converge; "
                             "parameter range must be extended");
}

// Modified Lentz continued fraction for Q(s,x), valid for x >= s + 1.
inline double inc_gamma_cont_frac(double s, double x) {
    const double tiny = std::numeric_limits<double>::min() / kIncGammaTol;
    double b = x + 1.0 - s;
    double c = 1.0 / tiny;
    double d = 1.0 / b;
    double h = d;
    for (int i = 1; i <= kIncGammaMaxIter; ++i) {
        const double an = -static_cast<double>(i) * (i - s);
        b += 2.0;
        d = an * d + b;
        if (std::abs(d) < tiny) d = tiny;
        c = b + an / c;
        if (std::abs(c) < tiny) c = tiny;
        d = 1.0 / d;
        const double delta = d * c;
        h *= delta;
        if (std::abs(delta - 1.0) < kIncGammaTol) {
            return h * std::exp(-x + s * std::log(x) - ln_gamma(s));
        }
    }
    throw std::runtime_error("reg_lower_inc_gamma: continued fraction did not "
                             "converge; parameter range must be extended");
}

} // namespace detail

/// Regularized lower incomplete gamma P(s,x) = gamma(s,x)/Gamma(s).
/// Series below the x = s+1 switch point, complement continued fraction above.
/// Supported range: s in (0, 2000], x >= 0.
inline double reg_lower_inc_gamma(double s, double x) {
    detail::require_finite(s, "reg_lower_inc_gamma");
    detail::require_finite(x, "reg_lower_inc_gamma");
    if (s <= 0.0) {
        throw std::domain_error("reg_lower_inc_gamma: s must be positive");
    }
    if (x < 0.0) {
        throw std::domain_error("reg_lower_inc_gamma: x must be non-negative");
    }
    if (x == 0.0) return 0.0;
    if (x < s + 1.0) {
        return detail::inc_gamma_series(s, x);
    }
    return 1.0 - detail::inc_gamma_cont_frac(s, x);
}

/// Laguerre polynomial L_P(x), normalized convention (L_P(0) = 1),
/// via the three-term recurrence (n+1)L_{n+1} = (2n+1-x)L_n - n L_{n-1}.
inline double laguerre(int order, double x) {
    if (order < 1) {
        throw std::domain_error("laguerre: order must be >= 1");
    }
    detail::require_finite(x, "laguerre");
    double lm1 = 1.0;       // L_0
    double l = 1.0 - x;     // L_1
    for (int n = 1; n < order; ++n) {
        const double lp1 = ((2.0 * n + 1.0 - x) * l - n * lm1) / (n + 1.0);
        lm1 = l;
        l = lp1;
    }
    return l;
}

/// Gauss-Laguerre rule: integrates f against e^{-x} on [0, inf) as sum w_p f(x_p).
/// Immutable after construction; shareable across threads.
struct QuadratureRule {
    int order = 0;
    std::vector<double> nodes;    // zeros of L_order, ascending
    std::vector<double> weights;  // x_p / ((order+1)^2 L_{order+1}(x_p)^2)
};

namespace detail {

// L_n and L_{n-1} at x, both scaled by e^{-x/2} so the recurrence stays in
// range for orders up to 256 (raw values overflow near x ~ 1000).
inline void laguerre_pair_scaled(int order, double x, double& ln, double& lnm1) {
    const double scale = std::exp(-0.5 * x);
    double lm1 = scale;
    double l = (1.0 - x) * scale;
    for (int n = 1; n < order; ++n) {
        const double lp1 = ((2.0 * n + 1.0 - x) * l - n * lm1) / (n + 1.0);
        lm1 = l;
        l = lp1;
    }
    ln = l;
    lnm1 = lm1;
}

} // namespace detail

inline QuadratureRule gauss_laguerre(int order) {
    if (order < 1 || order > 256) {
        throw std::domain_error("gauss_laguerre: order must be in [1, 256]");
    }
    QuadratureRule rule;
    rule.order = order;
    rule.nodes.resize(order);
    rule.weights.resize(order);
    double z = 0.0;
    for (int i = 0; i < order; ++i) {
        // Stroud/Secrest-style initial guesses, then Newton on the scaled
        // recurrence; x L' = order (L - L_{prev}) gives the step.
        if (i == 0) {
            z = 3.0 / (1.0 + 2.4 * order);
        } else if (i == 1) {
            z += 15.0 / (1.0 + 2.5 * order);
        } else {
            const double ai = i - 1;
            z += ((1.0 + 2.55 * ai) / (1.9 * ai)) * (z - rule.nodes[i - 2]);
        }
        bool converged = false;
        for (int it = 0; it < 100; ++it) {
            double l, lm1;
            detail::laguerre_pair_scaled(order, z, l, lm1);
            const double step = l * z / (order * (l - lm1));
            z -= step;
            if (std::abs(step) <= 1e-14 * (1.0 + z)) {
                converged = true;
                break;
            }
        }
        if (!converged || !(z > 0.0)) {
            throw std::runtime_error("gauss_laguerre: Newton iteration failed");
        }
        for (int polish = 0; polish < 2; ++polish) {
            double l, lm1;
            detail::laguerre_pair_scaled(order, z, l, lm1);
            z -= l * z / (order * (l - lm1));
        }
        double lp1, lp;
        detail::laguerre_pair_scaled(order + 1, z, lp1, lp);
        // w = z e^{-z} / ((order+1)^2 L~_{order+1}(z)^2), assembled in log
        // space; the tail weights are astronomically small for large orders.
        const double log_w = std::log(z) - z
            - 2.0 * (std::log(order + 1.0) + std::log(std::abs(lp1)));
        rule.nodes[i] = z;
        rule.weights[i] = std::exp(log_w);
    }
    double wsum = 0.0;
    for (int i = 0; i < order; ++i) {
        if (i > 0 && !(rule.nodes[i] > rule.nodes[i - 1])) {
            throw std::runtime_error("gauss_laguerre: nodes not strictly increasing");
        }
        if (rule.weights[i] < 0.0 || !std::isfinite(rule.weights[i])) {
            throw std::runtime_error("gauss_laguerre: invalid weight");
        }
        wsum += rule.weights[i];
    }
    // Recurrence conditioning grows with the order; 1e-12 holds through
    // order 64, the guard scales beyond that.
    if (std::abs(wsum - 1.0) > 1e-12 * std::max(1.0, order / 32.0)) {
        throw std::runtime_error("gauss_laguerre: weight sum check failed");
    }
    return rule;
}

} // namespace risnoma
