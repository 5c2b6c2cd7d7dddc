// Deterministic link physics: quantizer distortion factor, path loss, and the
// per-stage SINR of the quantized downlink with transceiver impairments.
#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <optional>
#include <stdexcept>
#include <vector>

#include "risnoma/config.hpp"

namespace risnoma {

namespace detail {

inline double std_normal_pdf(double x) {
    return std::exp(-0.5 * x * x) / std::sqrt(2.0 * M_PI);
}

inline double std_normal_cdf(double x) {
    return 0.5 * std::erfc(-x / std::sqrt(2.0));
}

// Mean-square distortion of the MMSE-optimal scalar quantizer for a
// unit-variance Gaussian input with the given number of levels (Lloyd's
// algorithm; fixed point of the centroid/midpoint conditions).
inline double lloyd_max_distortion(int levels) {
    std::vector<double> c(static_cast<std::size_t>(levels));
    for (int i = 0; i < levels; ++i) {
        // Spread the initial codebook over the bulk of the density.
        c[static_cast<std::size_t>(i)] = -4.0 + 8.0 * (i + 0.5) / levels;
    }
    std::vector<double> t(static_cast<std::size_t>(levels) + 1);
    for (int it = 0; it < 20000; ++it) {
        t.front() = -std::numeric_limits<double>::infinity();
        t.back() = std::numeric_limits<double>::infinity();
        for (int i = 1; i < levels; ++i) {
            t[static_cast<std::size_t>(i)] =
                0.5 * (c[static_cast<std::size_t>(i - 1)] + c[static_cast<std::size_t>(i)]);
        }
        double max_move = 0.0;
        for (int i = 0; i < levels; ++i) {
            const double lo = t[static_cast<std::size_t>(i)];
            const double hi = t[static_cast<std::size_t>(i + 1)];
            const double mass = std_normal_cdf(hi) - std_normal_cdf(lo);
            const double lo_pdf = std::isinf(lo) ? 0.0 : std_normal_pdf(lo);
            const double hi_pdf = std::isinf(hi) ? 0.0 : std_normal_pdf(hi);
            const double centroid = (lo_pdf - hi_pdf) / mass;
            max_move = std::max(max_move, std::abs(centroid - c[static_cast<std::size_t>(i)]));
            c[static_cast<std::size_t>(i)] = centroid;
        }
        if (max_move < 1e-13) break;
    }
    double second_moment = 0.0;
    for (int i = 0; i < levels; ++i) {
        const double lo = t[static_cast<std::size_t>(i)];
        const double hi = t[static_cast<std::size_t>(i + 1)];
        const double mass = std_normal_cdf(hi) - std_normal_cdf(lo);
        second_moment += c[static_cast<std::size_t>(i)] * c[static_cast<std::size_t>(i)] * mass;
    }
    return 1.0 - second_moment;  // E[X^2] - sum c_i^2 P_i with centroids optimal
}

} // namespace detail

/// AQNM distortion factor of a b-bit ADC; nullopt means full precision.
/// Lloyd-Max result for b <= 5 (cached), closed-form tail for b >= 6.
inline double lambda_q_of_bits(std::optional<int> bits) {
    if (!bits) return 1.0;
    const int b = *bits;
    if (b < 1) {
        throw std::domain_error("lambda_q_of_bits: bits must be >= 1");
    }
    if (b >= 6) {
        return 1.0 - (M_PI * std::sqrt(3.0) / 2.0) * std::exp2(-2.0 * b);
    }
    static const std::array<double, 5> table = [] {
        std::array<double, 5> t{};
        for (int bb = 1; bb <= 5; ++bb) {
            t[static_cast<std::size_t>(bb - 1)] =
                1.0 - detail::lloyd_max_distortion(1 << bb);
        }
        return t;
    }();
    return table[static_cast<std::size_t>(b - 1)];
}

/// Large-scale path gain d^{-alpha}.
inline double path_gain(double d, double alpha) {
    if (!(d > 0.0)) {
        throw std::domain_error("path_gain: distance must be positive");
    }
    return std::pow(d, -alpha);
}

namespace detail {

inline void check_stage_indices(const SystemConfig& cfg, int k, int j) {
    if (k < 1 || k > cfg.users() || j < 1 || j > k) {
        throw std::domain_error("sinr: stage indices must satisfy 1 <= j <= k <= K");
    }
}

// Per-call scalars of the SINR expression; montecarlo precomputes one of
// these per (config, user) instead of re-deriving powers every trial.
struct LinkScalars {
    double lambda = 1.0;
    double beta_sq = 1.0;
    double n_r_over_n0 = 0.0;
    double rho_s = 1.0;
    double epsilon = 0.0;
    double dsr_alpha = 1.0;
    double dk_alpha = 1.0;
};

inline LinkScalars make_link_scalars(const SystemConfig& cfg, int k) {
    LinkScalars s;
    s.lambda = lambda_q_of_bits(cfg.hardware.adc_bits);
    s.beta_sq = cfg.ris.beta * cfg.ris.beta;
    s.n_r_over_n0 = cfg.ris.n_r / cfg.link.n0;
    s.rho_s = cfg.link.rho_s;
    s.epsilon = cfg.sic.epsilon;
    s.dsr_alpha = std::pow(cfg.d_sr(), cfg.topology.alpha);
    s.dk_alpha = std::pow(cfg.d_user(k), cfg.topology.alpha);
    return s;
}

inline double sinr_core(const LinkScalars& s, double theta, double a_j,
                        double xi_sq, double g_norm_sq, double h_i_sq) {
    const double lam_sq = s.lambda * s.lambda;
    const double num = lam_sq * s.beta_sq * xi_sq * s.rho_s * a_j;
    const double den = s.beta_sq * xi_sq * s.rho_s * theta
        + s.dsr_alpha * s.beta_sq * s.n_r_over_n0 * g_norm_sq * s.lambda
        + s.dsr_alpha * s.dk_alpha * (lam_sq + s.epsilon * s.rho_s * h_i_sq);
    return num / den;
}

} // namespace detail

/// Interference-shaping term of user k's stage-j SINR; collects the
/// not-yet-cancelled superposition power and both RHI severities through the
/// quantizer gain. Empty tail sum for j = K.
inline double theta_j(const SystemConfig& cfg, int k, int j) {
    detail::check_stage_indices(cfg, k, j);
    const double lam = lambda_q_of_bits(cfg.hardware.adc_bits);
    double tail = 0.0;
    for (int i = j + 1; i <= cfg.users(); ++i) {
        tail += cfg.power_alloc.a[static_cast<std::size_t>(i - 1)];
    }
    const double kr = cfg.hardware.kappa_r[static_cast<std::size_t>(k - 1)];
    const double kt = cfg.hardware.kappa_t_bs;
    return lam * lam * (tail - 1.0) + lam * (1.0 + kt * kt + kr * kr);
}

/// Outage-threshold scale of user k's stage j under the given RIS mode.
/// Returns +infinity when the decode stage is infeasible, i.e. the SINR
/// ceiling lambda^2 a_j / theta_j lies at or below the threshold.
inline double phi_j(const SystemConfig& cfg, RisMode mode, int k, int j) {
    const double theta = theta_j(cfg, k, j);
    const double lam = lambda_q_of_bits(cfg.hardware.adc_bits);
    const double a_j = cfg.power_alloc.a[static_cast<std::size_t>(j - 1)];
    const double gth = cfg.link.gamma_th(j);
    const double margin = lam * lam * a_j - gth * theta;
    if (margin <= 0.0) {
        return std::numeric_limits<double>::infinity();
    }
    const double beta_sq =
        mode == RisMode::kActive ? cfg.ris.beta * cfg.ris.beta : 1.0;
    return gth / (beta_sq * cfg.link.rho_s * margin);
}

/// max over decode stages j = 1..k; +infinity if any stage is infeasible.
inline double phi_star(const SystemConfig& cfg, RisMode mode, int k) {
    double m = 0.0;
    for (int j = 1; j <= k; ++j) {
        m = std::max(m, phi_j(cfg, mode, k, j));
    }
    return m;
}

/// SINR of user k decoding user j's message given one channel realization.
/// xi_sq is the phase-aligned cascaded gain, g_norm_sq the squared norm of
/// user k's RIS-side channel, h_i_sq the residual-interference power draw.
inline double sinr(const SystemConfig& cfg, int k, int j, double xi_sq,
                   double g_norm_sq, double h_i_sq) {
    detail::check_stage_indices(cfg, k, j);
    if (xi_sq < 0.0 || g_norm_sq < 0.0 || h_i_sq < 0.0) {
        throw std::domain_error("sinr: channel magnitudes must be non-negative");
    }
    const auto scalars = detail::make_link_scalars(cfg, k);
    return detail::sinr_core(scalars, theta_j(cfg, k, j),
                             cfg.power_alloc.a[static_cast<std::size_t>(j - 1)],
                             xi_sq, g_norm_sq, h_i_sq);
}

} // namespace risnoma
