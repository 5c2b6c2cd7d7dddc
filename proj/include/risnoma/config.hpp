// Scenario description: topology, power split, hardware, SIC, RIS and link
// budget for one downlink RIS-NOMA cell.
#pragma once

#include <array>
#include <cmath>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace risnoma {

/// Raised for invalid scenario descriptions (bad config file, violated
/// invariants, insufficient power budget). CLI maps it to exit code 2.
struct config_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Topology {
    std::array<double, 2> bs_pos{};
    std::array<double, 2> ris_pos{};
    std::vector<std::array<double, 2>> user_pos;  // index 0 is user 1
    double alpha = 2.0;                           // path-loss exponent
};

struct PowerAllocation {
    std::vector<double> a;  // non-increasing, sums to 1
};

struct HardwareProfile {
    double kappa_t_bs = 0.0;            // transmit-side RHI severity
    std::vector<double> kappa_r;        // receive-side RHI severity per user
    std::optional<int> adc_bits;        // nullopt = full-precision ADC
};

struct SicModel {
    double epsilon = 0.0;  // 0 = perfect SIC, (0,1] = residual interference level
    double omega_i = 1.0;  // variance of the residual-interference channel
};

enum class RisMode { kActive, kPassive };

struct RisConfig {
    RisMode mode = RisMode::kPassive;
    int m_elements = 1;
    double beta = 1.0;  // per-element amplification (1 for passive)
    double n_r = 0.0;   // amplifier thermal-noise power, same units as link.n0
};

struct LinkBudget {
    double rho_s = 1.0;          // transmit SNR, linear
    std::vector<double> rates;   // target rates in BPCU per user
    double n0 = 1.0;             // noise normalization constant

    double gamma_th(int user) const {
        return std::exp2(rates.at(static_cast<std::size_t>(user) - 1)) - 1.0;
    }
};

struct SystemConfig {
    Topology topology;
    PowerAllocation power_alloc;
    HardwareProfile hardware;
    SicModel sic;
    RisConfig ris;
    LinkBudget link;

    int users() const { return static_cast<int>(power_alloc.a.size()); }

    double d_sr() const {
        return std::hypot(topology.bs_pos[0] - topology.ris_pos[0],
                          topology.bs_pos[1] - topology.ris_pos[1]);
    }

    /// Distance from the RIS to user k (1-based).
    double d_user(int k) const {
        const auto& u = topology.user_pos.at(static_cast<std::size_t>(k) - 1);
        return std::hypot(topology.ris_pos[0] - u[0], topology.ris_pos[1] - u[1]);
    }

    void validate() const;
};

inline void SystemConfig::validate() const {
    const int k_users = users();
    if (k_users < 2) {
        throw config_error("power_alloc.a: at least 2 users required");
    }
    double a_sum = 0.0;
    for (int i = 0; i < k_users; ++i) {
        const double ai = power_alloc.a[static_cast<std::size_t>(i)];
        if (!(ai > 0.0)) {
            throw config_error("power_alloc.a: coefficients must be positive");
        }
        if (i > 0 && ai > power_alloc.a[static_cast<std::size_t>(i - 1)] + 1e-15) {
            throw config_error("power_alloc.a: coefficients must be non-increasing");
        }
        a_sum += ai;
    }
    if (std::abs(a_sum - 1.0) > 1e-12) {
        throw config_error("power_alloc.a: coefficients must sum to 1");
    }
    if (static_cast<int>(topology.user_pos.size()) != k_users) {
        throw config_error("topology.users_m: position count must match power_alloc.a");
    }
    if (!(topology.alpha > 0.0)) {
        throw config_error("topology.alpha: must be positive");
    }
    if (!(d_sr() > 0.0)) {
        throw config_error("topology: BS and RIS positions must differ");
    }
    for (int k = 1; k <= k_users; ++k) {
        if (!(d_user(k) > 0.0)) {
            throw config_error("topology: user " + std::to_string(k) +
                               " coincides with the RIS");
        }
    }
    if (hardware.kappa_t_bs < 0.0) {
        throw config_error("hardware.kappa_t_bs: must be non-negative");
    }
    if (static_cast<int>(hardware.kappa_r.size()) != k_users) {
        throw config_error("hardware.kappa_r: one value per user required");
    }
    for (double kr : hardware.kappa_r) {
        if (kr < 0.0) {
            throw config_error("hardware.kappa_r: must be non-negative");
        }
    }
    if (hardware.adc_bits && *hardware.adc_bits < 1) {
        throw config_error("hardware.adc_bits: must be >= 1 or 'full'");
    }
    if (sic.epsilon < 0.0 || sic.epsilon > 1.0) {
        throw config_error("sic.epsilon: must lie in [0, 1]");
    }
    if (sic.epsilon > 0.0 && !(sic.omega_i > 0.0)) {
        throw config_error("sic.omega_i: must be positive under imperfect SIC");
    }
    if (ris.m_elements < 1) {
        throw config_error("ris.m_elements: must be >= 1");
    }
    if (ris.mode == RisMode::kPassive) {
        if (ris.beta != 1.0) {
            throw config_error("ris.beta: passive mode requires beta = 1");
        }
        if (ris.n_r != 0.0) {
            throw config_error("ris.n_r: passive mode requires n_r = 0");
        }
    } else {
        // beta = 1 is the degenerate unity-gain boundary; it makes the
        // active expressions directly comparable with the passive ones.
        if (!(ris.beta >= 1.0)) {
            throw config_error("ris.beta: active mode requires beta >= 1");
        }
        if (ris.n_r < 0.0) {
            throw config_error("ris.n_r: must be non-negative");
        }
    }
    if (!(link.rho_s > 0.0)) {
        throw config_error("link.snr_db: transmit SNR must be positive");
    }
    if (static_cast<int>(link.rates.size()) != k_users) {
        throw config_error("link.rates_bpcu: one rate per user required");
    }
    for (double r : link.rates) {
        if (r < 0.0) {
            throw config_error("link.rates_bpcu: rates must be non-negative");
        }
    }
    if (!(link.n0 > 0.0)) {
        throw config_error("link.n0: must be positive");
    }
}

} // namespace risnoma
