// Closed-form outage engine: moment-matched gamma CDF of the cascaded
// channel, analytical and asymptotic outage probability for the four
// {active,passive} x {perfect,imperfect SIC} regimes, diversity order and
// throughput.
#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <stdexcept>
#include <string>

#include "risnoma/channel.hpp"
#include "risnoma/config.hpp"
#include "risnoma/numerics.hpp"

namespace risnoma {

/// Parameters of the gamma-type CDF approximating the phase-aligned cascaded
/// channel sum xi_M (moment matched: mean M pi/4, variance M (16-pi^2)/16).
struct GammaApprox {
    double mu0 = 0.0;   // shape-like parameter, grows linearly in M
    double phi0 = 0.0;  // scale-like parameter, independent of M
};

inline GammaApprox gamma_approx(int m_elements) {
    if (m_elements < 1) {
        throw std::domain_error("gamma_approx: element count must be >= 1");
    }
    const double pi_sq = M_PI * M_PI;
    GammaApprox g;
    g.mu0 = ((m_elements + 1) * pi_sq - 16.0) / (16.0 - pi_sq);
    g.phi0 = (16.0 - pi_sq) / (4.0 * M_PI);
    return g;
}

/// CDF of xi_M under the gamma approximation.
inline double cdf_xi(double x, int m_elements) {
    if (x < 0.0) {
        throw std::domain_error("cdf_xi: argument must be non-negative");
    }
    const GammaApprox g = gamma_approx(m_elements);
    return reg_lower_inc_gamma(g.mu0 + 1.0, x / g.phi0);
}

struct Regime {
    RisMode mode = RisMode::kActive;
    bool perfect_sic = false;
    bool asymptotic = false;
};

inline std::string to_string(const Regime& r) {
    std::string s = r.mode == RisMode::kActive ? "aris" : "pris";
    s += r.perfect_sic ? "-psic" : "-ipsic";
    if (r.asymptotic) s += "-asym";
    return s;
}

struct OutageResult {
    double op = 1.0;
    bool feasible = false;
    Regime regime;
};

namespace detail {

struct OutageScalars {
    double phi_star = 0.0;
    double dsr_alpha = 0.0;
    double dk_alpha = 0.0;
    double lambda = 1.0;
    double thermal = 0.0;  // beta^2 M n_r lambda / n0, active mode only
};

inline OutageScalars make_outage_scalars(const SystemConfig& cfg, int k) {
    OutageScalars s;
    s.phi_star = phi_star(cfg, cfg.ris.mode, k);
    s.dsr_alpha = std::pow(cfg.d_sr(), cfg.topology.alpha);
    s.dk_alpha = std::pow(cfg.d_user(k), cfg.topology.alpha);
    s.lambda = lambda_q_of_bits(cfg.hardware.adc_bits);
    if (cfg.ris.mode == RisMode::kActive) {
        s.thermal = cfg.ris.beta * cfg.ris.beta * cfg.ris.m_elements *
                    (cfg.ris.n_r / cfg.link.n0) * s.lambda;
    }
    return s;
}

inline double clamp_probability(double p) {
    return std::clamp(p, 0.0, 1.0);
}

} // namespace detail

/// Analytical outage probability of user k. Imperfect SIC evaluates the
/// residual-interference average with the supplied Gauss-Laguerre rule;
/// perfect SIC reduces to a single regularized-gamma term. An infeasible
/// decode stage pins the outage probability to 1.
inline OutageResult op_analytic(const SystemConfig& cfg, int k,
                                const QuadratureRule& rule) {
    cfg.validate();
    if (k < 1 || k > cfg.users()) {
        throw std::domain_error("op_analytic: user index out of range");
    }
    OutageResult res;
    res.regime = Regime{cfg.ris.mode, cfg.sic.epsilon == 0.0, false};
    const auto s = detail::make_outage_scalars(cfg, k);
    if (!std::isfinite(s.phi_star)) {
        res.op = 1.0;
        res.feasible = false;
        return res;
    }
    res.feasible = true;
    const GammaApprox ga = gamma_approx(cfg.ris.m_elements);
    const double shape = ga.mu0 + 1.0;
    const double lam_sq = s.lambda * s.lambda;
    const double eps = cfg.sic.epsilon;
    if (eps > 0.0) {
        const double resid = cfg.link.rho_s * eps * cfg.sic.omega_i;
        double acc = 0.0;
        for (int p = 0; p < rule.order; ++p) {
            const double node = rule.nodes[static_cast<std::size_t>(p)];
            double radicand;
            if (cfg.ris.mode == RisMode::kActive) {
                radicand = s.phi_star * s.dsr_alpha *
                           (s.thermal + s.dk_alpha * (lam_sq + resid * node));
            } else {
                radicand = s.phi_star * s.dsr_alpha * s.dk_alpha *
                           (lam_sq + resid * node);
            }
            acc += rule.weights[static_cast<std::size_t>(p)] *
                   reg_lower_inc_gamma(shape, std::sqrt(radicand) / ga.phi0);
        }
        res.op = detail::clamp_probability(acc);
    } else {
        double radicand;
        if (cfg.ris.mode == RisMode::kActive) {
            radicand = s.phi_star * s.dsr_alpha * (s.thermal + s.dk_alpha * lam_sq);
        } else {
            radicand = s.phi_star * s.dsr_alpha * s.dk_alpha * lam_sq;
        }
        res.op = detail::clamp_probability(
            reg_lower_inc_gamma(shape, std::sqrt(radicand) / ga.phi0));
    }
    return res;
}

/// High-SNR outage probability of user k. Under imperfect SIC the expression
/// keeps the residual-interference average (phi_star * rho_s is
/// SNR-independent, so this is the error floor); under perfect SIC it is the
/// leading power-law term with log-log slope (mu0+1)/2.
inline OutageResult op_asymptotic(const SystemConfig& cfg, int k,
                                  const QuadratureRule& rule) {
    cfg.validate();
    if (k < 1 || k > cfg.users()) {
        throw std::domain_error("op_asymptotic: user index out of range");
    }
    OutageResult res;
    res.regime = Regime{cfg.ris.mode, cfg.sic.epsilon == 0.0, true};
    const auto s = detail::make_outage_scalars(cfg, k);
    if (!std::isfinite(s.phi_star)) {
        res.op = 1.0;
        res.feasible = false;
        return res;
    }
    res.feasible = true;
    const GammaApprox ga = gamma_approx(cfg.ris.m_elements);
    const double shape = ga.mu0 + 1.0;
    const double eps = cfg.sic.epsilon;
    if (eps > 0.0) {
        const double resid = cfg.link.rho_s * eps * cfg.sic.omega_i;
        double acc = 0.0;
        for (int p = 0; p < rule.order; ++p) {
            const double radicand = s.phi_star * s.dsr_alpha * s.dk_alpha * resid *
                                    rule.nodes[static_cast<std::size_t>(p)];
            acc += rule.weights[static_cast<std::size_t>(p)] *
                   reg_lower_inc_gamma(shape, std::sqrt(radicand) / ga.phi0);
        }
        res.op = detail::clamp_probability(acc);
    } else {
        const double lam_sq = s.lambda * s.lambda;
        const double base = cfg.ris.mode == RisMode::kActive
            ? s.phi_star * s.dsr_alpha * (s.thermal + s.dk_alpha * lam_sq)
            : s.phi_star * s.dsr_alpha * s.dk_alpha * lam_sq;
        // Assembled in log space: the power-law tail underflows linear
        // arithmetic long before the diversity slope stops being measurable.
        const double log_op = 0.5 * shape * std::log(base) - ln_gamma(shape + 1.0)
            - shape * std::log(ga.phi0);
        res.op = detail::clamp_probability(std::exp(log_op));
    }
    return res;
}

/// Log-log slope of an OP-vs-SNR evaluator between two SNR points (dB).
/// op_fn receives the linear transmit SNR.
inline double diversity_order(const std::function<double(double)>& op_fn,
                              double snr_lo_db, double snr_hi_db) {
    if (!(snr_hi_db > snr_lo_db)) {
        throw std::domain_error("diversity_order: snr_hi must exceed snr_lo");
    }
    const double rho_lo = std::pow(10.0, snr_lo_db / 10.0);
    const double rho_hi = std::pow(10.0, snr_hi_db / 10.0);
    const double op_lo = op_fn(rho_lo);
    const double op_hi = op_fn(rho_hi);
    if (!(op_lo > 0.0) || !(op_hi > 0.0)) {
        throw std::domain_error("diversity_order: OP must be positive on the interval");
    }
    return -(std::log(op_hi) - std::log(op_lo)) / (std::log(rho_hi) - std::log(rho_lo));
}

/// Delay-limited throughput (1 - OP) * rate.
inline double throughput(double op, double rate) {
    if (op < 0.0 || op > 1.0) {
        throw std::domain_error("throughput: OP must lie in [0, 1]");
    }
    if (rate < 0.0) {
        throw std::domain_error("throughput: rate must be non-negative");
    }
    return (1.0 - op) * rate;
}

} // namespace risnoma
