// Total-power fairness accounting: split one power budget between the base
// station and the RIS overhead so active and passive deployments compare at
// equal total consumption.
#pragma once

#include <string>

#include "risnoma/channel.hpp"
#include "risnoma/config.hpp"

namespace risnoma {

struct PowerModel {
    double p_sw_mw = 0.1;      // per-element switching/control power
    double p_dc_mw = 0.316;    // per-element DC biasing power (active only)
    double p_total_mw = 1000.0;
    double n0_mw = 1.0;        // noise power used to map mW to transmit SNR
};

struct PowerSplit {
    double p_s_act_mw = 0.0;
    double p_s_pas_mw = 0.0;
};

namespace detail {

// Reflected-power model: the array adds (beta^2 - 1) times its per-element
// input power (signal arriving over the BS-RIS hop plus amplifier noise).
inline double solve_act_transmit_power(double p_total_mw, double overhead_mw,
                                       int m_elements, double beta,
                                       double n_r_mw, double gain_sr) {
    const double amp = (beta * beta - 1.0) * m_elements;
    return (p_total_mw - amp * n_r_mw - overhead_mw) / (1.0 + amp * gain_sr);
}

} // namespace detail

/// Splits `p_total_mw` into base-station transmit powers for the active and
/// passive systems. `gain_sr` is the BS-RIS path gain d_sr^{-alpha};
/// `n_r_mw` the per-element amplifier noise power in mW.
inline PowerSplit solve_power_fairness(const PowerModel& pm, int m_elements,
                                       double beta, double n_r_mw,
                                       double gain_sr) {
    if (m_elements < 0 || pm.p_sw_mw < 0.0 || pm.p_dc_mw < 0.0 ||
        pm.p_total_mw < 0.0 || n_r_mw < 0.0) {
        throw config_error("power_model: powers must be non-negative");
    }
    PowerSplit split;
    split.p_s_pas_mw = pm.p_total_mw - m_elements * pm.p_sw_mw;
    if (!(split.p_s_pas_mw > 0.0)) {
        throw config_error("power_model: budget does not cover the passive "
                           "switching overhead M * p_sw_mw");
    }
    const double overhead = m_elements * (pm.p_sw_mw + pm.p_dc_mw);
    split.p_s_act_mw = detail::solve_act_transmit_power(
        pm.p_total_mw, overhead, m_elements, beta, n_r_mw, gain_sr);
    if (!(split.p_s_act_mw > 0.0)) {
        throw config_error("power_model: budget does not cover the active "
                           "overhead M * (p_sw_mw + p_dc_mw) plus reflected power");
    }
    return split;
}

/// Convenience overload pulling the RIS geometry from a scenario.
inline PowerSplit solve_power_fairness(const PowerModel& pm,
                                       const SystemConfig& cfg) {
    return solve_power_fairness(pm, cfg.ris.m_elements, cfg.ris.beta,
                                cfg.ris.n_r * pm.n0_mw,
                                path_gain(cfg.d_sr(), cfg.topology.alpha));
}

} // namespace risnoma
