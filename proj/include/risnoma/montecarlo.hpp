// Monte Carlo estimator of the outage probability and of the cascaded-channel
// CDF. Simulates the full per-trial signal model: Rayleigh fades, per-user
// coherent phase alignment, quantizer gain, impairments, residual SIC
// interference and amplifier thermal noise.
#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <thread>
#include <vector>

#include "risnoma/channel.hpp"
#include "risnoma/config.hpp"
#include "risnoma/rng.hpp"

namespace risnoma {

/// One channel realization. h_mag is shared by all users (BS-RIS hop);
/// per-user xi uses that user's own phase alignment.
struct ChannelDraw {
    std::vector<double> h_mag;                // |h_sr,m|, size M
    std::vector<std::vector<double>> g_mag;   // |g_k,m| per user, K x M
    std::vector<double> g_norm_sq;            // sum_m |g_k,m|^2 per user
    std::vector<double> h_i_sq;               // residual-interference power per user

    double xi(int user) const {
        const auto& g = g_mag[static_cast<std::size_t>(user - 1)];
        double acc = 0.0;
        for (std::size_t m = 0; m < h_mag.size(); ++m) {
            acc += g[m] * h_mag[m];
        }
        return acc;
    }

    double xi_sq(int user) const {
        const double v = xi(user);
        return v * v;
    }
};

struct McEstimate {
    std::vector<double> op_hat;   // per user
    std::vector<double> std_err;  // binomial standard error per user
    long long trials = 0;
    std::uint64_t seed = 0;
};

namespace detail {

inline constexpr long long kChunkTrials = 1 << 16;

// Fill `draw` in the canonical order: M BS-RIS magnitudes, then per user
// M RIS-user magnitudes followed by one residual-interference power.
// draw() and estimate_op share this sampler, so they see identical streams.
inline void sample_trial(const SystemConfig& cfg, Xoshiro256pp& rng,
                         ChannelDraw& draw) {
    const int m_elements = cfg.ris.m_elements;
    const int k_users = cfg.users();
    draw.h_mag.resize(static_cast<std::size_t>(m_elements));
    draw.g_mag.resize(static_cast<std::size_t>(k_users));
    draw.g_norm_sq.assign(static_cast<std::size_t>(k_users), 0.0);
    draw.h_i_sq.resize(static_cast<std::size_t>(k_users));
    for (int m = 0; m < m_elements; ++m) {
        draw.h_mag[static_cast<std::size_t>(m)] = rng.next_rayleigh();
    }
    for (int k = 0; k < k_users; ++k) {
        auto& g = draw.g_mag[static_cast<std::size_t>(k)];
        g.resize(static_cast<std::size_t>(m_elements));
        double norm_sq = 0.0;
        for (int m = 0; m < m_elements; ++m) {
            const double v = rng.next_rayleigh();
            g[static_cast<std::size_t>(m)] = v;
            norm_sq += v * v;
        }
        draw.g_norm_sq[static_cast<std::size_t>(k)] = norm_sq;
        draw.h_i_sq[static_cast<std::size_t>(k)] = cfg.sic.omega_i * rng.next_exponential();
    }
}

// Runs fn(chunk_index, trials_in_chunk) over all chunks using `workers`
// threads. Chunk-to-worker assignment is arbitrary; correctness of callers
// relies only on per-chunk determinism plus associative reduction.
template <typename Fn>
inline void for_each_chunk(long long trials, int workers, Fn&& fn) {
    const long long n_chunks = (trials + kChunkTrials - 1) / kChunkTrials;
    if (workers <= 0) {
        workers = static_cast<int>(std::thread::hardware_concurrency());
        if (workers <= 0) workers = 1;
    }
    std::atomic<long long> next_chunk{0};
    auto worker = [&] {
        for (;;) {
            const long long c = next_chunk.fetch_add(1);
            if (c >= n_chunks) break;
            const long long begin = c * kChunkTrials;
            const long long count = std::min<long long>(kChunkTrials, trials - begin);
            fn(c, count);
        }
    };
    if (workers == 1 || n_chunks == 1) {
        worker();
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(workers));
    for (int w = 0; w < workers; ++w) {
        pool.emplace_back(worker);
    }
    for (auto& t : pool) {
        t.join();
    }
}

} // namespace detail

/// One Monte Carlo channel realization.
inline ChannelDraw draw(const SystemConfig& cfg, Xoshiro256pp& rng) {
    ChannelDraw d;
    detail::sample_trial(cfg, rng, d);
    return d;
}

/// Empirical outage probability per user over `trials` realizations.
/// A user is in outage when any decode stage j = 1..k falls at or below its
/// threshold. Bit-identical for fixed (config, trials, seed) regardless of
/// worker count.
inline McEstimate estimate_op(const SystemConfig& cfg, long long trials,
                              std::uint64_t seed, int workers = 0) {
    cfg.validate();
    if (trials < 1) {
        throw std::domain_error("estimate_op: trial count must be >= 1");
    }
    const int k_users = cfg.users();
    std::vector<detail::LinkScalars> scalars;
    std::vector<std::vector<double>> theta;   // [k][j]
    std::vector<std::vector<double>> gth_a;   // thresholds / coefficients
    scalars.reserve(static_cast<std::size_t>(k_users));
    theta.resize(static_cast<std::size_t>(k_users));
    for (int k = 1; k <= k_users; ++k) {
        scalars.push_back(detail::make_link_scalars(cfg, k));
        for (int j = 1; j <= k; ++j) {
            theta[static_cast<std::size_t>(k - 1)].push_back(theta_j(cfg, k, j));
        }
    }
    std::vector<std::atomic<long long>> outages(static_cast<std::size_t>(k_users));
    for (auto& o : outages) o.store(0);

    detail::for_each_chunk(trials, workers, [&](long long chunk, long long count) {
        Xoshiro256pp rng = make_chunk_rng(seed, static_cast<std::uint64_t>(chunk));
        ChannelDraw d;
        std::vector<long long> local(static_cast<std::size_t>(k_users), 0);
        for (long long t = 0; t < count; ++t) {
            detail::sample_trial(cfg, rng, d);
            for (int k = 1; k <= k_users; ++k) {
                const double xi_sq = d.xi_sq(k);
                const double gn = d.g_norm_sq[static_cast<std::size_t>(k - 1)];
                const double hi = d.h_i_sq[static_cast<std::size_t>(k - 1)];
                for (int j = 1; j <= k; ++j) {
                    const double g = detail::sinr_core(
                        scalars[static_cast<std::size_t>(k - 1)],
                        theta[static_cast<std::size_t>(k - 1)][static_cast<std::size_t>(j - 1)],
                        cfg.power_alloc.a[static_cast<std::size_t>(j - 1)],
                        xi_sq, gn, hi);
                    if (g <= cfg.link.gamma_th(j)) {
                        ++local[static_cast<std::size_t>(k - 1)];
                        break;
                    }
                }
            }
        }
        for (int k = 0; k < k_users; ++k) {
            outages[static_cast<std::size_t>(k)].fetch_add(local[static_cast<std::size_t>(k)]);
        }
    });

    McEstimate est;
    est.trials = trials;
    est.seed = seed;
    est.op_hat.resize(static_cast<std::size_t>(k_users));
    est.std_err.resize(static_cast<std::size_t>(k_users));
    for (int k = 0; k < k_users; ++k) {
        const double p = static_cast<double>(outages[static_cast<std::size_t>(k)].load()) /
                         static_cast<double>(trials);
        est.op_hat[static_cast<std::size_t>(k)] = p;
        est.std_err[static_cast<std::size_t>(k)] =
            std::sqrt(p * (1.0 - p) / static_cast<double>(trials));
    }
    return est;
}

/// Samples of xi_M = sum_m |g_m||h_m|, in deterministic chunk order.
inline std::vector<double> sample_xi(int m_elements, long long trials,
                                     std::uint64_t seed, int workers = 0) {
    if (m_elements < 1) {
        throw std::domain_error("sample_xi: element count must be >= 1");
    }
    if (trials < 1) {
        throw std::domain_error("sample_xi: trial count must be >= 1");
    }
    std::vector<double> out(static_cast<std::size_t>(trials));
    detail::for_each_chunk(trials, workers, [&](long long chunk, long long count) {
        Xoshiro256pp rng = make_chunk_rng(seed, static_cast<std::uint64_t>(chunk));
        std::vector<double> h(static_cast<std::size_t>(m_elements));
        const long long begin = chunk * detail::kChunkTrials;
        for (long long t = 0; t < count; ++t) {
            for (int m = 0; m < m_elements; ++m) {
                h[static_cast<std::size_t>(m)] = rng.next_rayleigh();
            }
            double xi = 0.0;
            for (int m = 0; m < m_elements; ++m) {
                xi += h[static_cast<std::size_t>(m)] * rng.next_rayleigh();
            }
            out[static_cast<std::size_t>(begin + t)] = xi;
        }
    });
    return out;
}

/// Empirical CDF of xi_M on an ascending grid: fraction of draws <= x.
inline std::vector<double> empirical_cdf_xi(int m_elements, long long trials,
                                            std::uint64_t seed,
                                            const std::vector<double>& grid,
                                            int workers = 0) {
    for (std::size_t i = 1; i < grid.size(); ++i) {
        if (!(grid[i] >= grid[i - 1])) {
            throw std::domain_error("empirical_cdf_xi: grid must be ascending");
        }
    }
    const std::vector<double> samples = sample_xi(m_elements, trials, seed, workers);
    std::vector<double> cdf(grid.size(), 0.0);
    std::vector<long long> counts(grid.size(), 0);
    for (double x : samples) {
        // Count into the first grid point that dominates x; suffix handled below.
        const auto it = std::lower_bound(grid.begin(), grid.end(), x);
        if (it != grid.end()) {
            ++counts[static_cast<std::size_t>(it - grid.begin())];
        }
    }
    long long below = 0;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        // counts[i] holds draws with grid[i-1] < x <= grid[i]
        below += counts[i];
        cdf[i] = static_cast<double>(below) / static_cast<double>(trials);
    }
    return cdf;
}

} // namespace risnoma
