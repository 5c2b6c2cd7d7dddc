// Experiment front-end: parameter sweeps over SNR / element count / ADC bits
// / amplification, analytic-vs-Monte-Carlo validation runs, and CSV/JSON
// emission with deterministic row order and formatting.
#pragma once

#include <cstdio>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "risnoma/analysis.hpp"
#include "risnoma/config_io.hpp"
#include "risnoma/montecarlo.hpp"
#include "risnoma/numerics.hpp"
#include "risnoma/power.hpp"
#include "risnoma/rng.hpp"

namespace risnoma {

struct SweepRow {
    double axis_value = 0.0;
    int user = 0;
    std::string regime;
    double op_analytic = 0.0;
    double op_asymptotic = 0.0;
    std::optional<double> op_mc;
    std::optional<double> mc_std_err;
    double throughput = 0.0;
};

struct ValidationRow {
    int user = 0;
    std::string regime;
    double op_analytic = 0.0;
    double op_mc = 0.0;
    double mc_std_err = 0.0;
    double rel_err = 0.0;
    bool pass = false;
};

struct ValidationReport {
    std::vector<ValidationRow> rows;
    long long trials = 0;
    bool all_pass = true;
};

struct RunOptions {
    std::uint64_t seed = 1;
    int workers = 0;        // 0 = hardware concurrency
    int quad_order = 64;
};

namespace detail {

// Canonical regime order; output rows never depend on listing order.
inline const std::vector<RegimeSelector>& canonical_regimes() {
    static const std::vector<RegimeSelector> all = {
        {RisMode::kActive, false},
        {RisMode::kActive, true},
        {RisMode::kPassive, false},
        {RisMode::kPassive, true},
    };
    return all;
}

inline std::vector<RegimeSelector> order_regimes(std::vector<RegimeSelector> wanted) {
    std::vector<RegimeSelector> out;
    for (const auto& canon : canonical_regimes()) {
        bool requested = false;
        for (const auto& w : wanted) {
            if (w.mode == canon.mode && w.perfect_sic == canon.perfect_sic) {
                requested = true;
                break;
            }
        }
        if (requested) out.push_back(canon);
    }
    return out;
}

inline SystemConfig apply_regime(SystemConfig cfg, const RegimeSelector& sel) {
    if (sel.mode == RisMode::kPassive) {
        cfg.ris.mode = RisMode::kPassive;
        cfg.ris.beta = 1.0;
        cfg.ris.n_r = 0.0;
    } else {
        if (cfg.ris.mode != RisMode::kActive) {
            throw config_error("regime '" + to_string(Regime{sel.mode, sel.perfect_sic, false}) +
                               "' requires an active-mode base config (beta > 1)");
        }
    }
    if (sel.perfect_sic) {
        cfg.sic.epsilon = 0.0;
    } else if (!(cfg.sic.epsilon > 0.0)) {
        throw config_error("regime '" + to_string(Regime{sel.mode, sel.perfect_sic, false}) +
                           "' requires sic.epsilon > 0 in the base config");
    }
    return cfg;
}

inline void apply_axis(SystemConfig& cfg, SweepAxis axis, double value) {
    switch (axis) {
    case SweepAxis::kSnrDb:
        cfg.link.rho_s = db_to_linear(value);
        break;
    case SweepAxis::kMElements:
        if (value < 1.0 || value != static_cast<int>(value)) {
            throw config_error("[sweep] values: m_elements axis expects integers >= 1");
        }
        cfg.ris.m_elements = static_cast<int>(value);
        break;
    case SweepAxis::kAdcBits:
        if (value < 1.0 || value != static_cast<int>(value)) {
            throw config_error("[sweep] values: adc_bits axis expects integers >= 1");
        }
        cfg.hardware.adc_bits = static_cast<int>(value);
        break;
    case SweepAxis::kBeta:
        if (cfg.ris.mode == RisMode::kActive) {
            cfg.ris.beta = value;
        }
        break;
    }
}

// Equal-total-power mode: the SNR axis names the passive system's transmit
// SNR; the active system's SNR follows from the shared budget.
inline void apply_power_fairness(SystemConfig& cfg, const PowerModel& pm) {
    const double rho_pas = cfg.link.rho_s;
    const double p_s_pas = rho_pas * pm.n0_mw;
    PowerModel budget = pm;
    budget.p_total_mw = p_s_pas + cfg.ris.m_elements * pm.p_sw_mw;
    if (cfg.ris.mode == RisMode::kActive) {
        const PowerSplit split = solve_power_fairness(budget, cfg);
        cfg.link.rho_s = split.p_s_act_mw / pm.n0_mw;
    }
}

inline std::string format_sig10(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.10g", v);
    return buf;
}

inline std::string csv_quote(const std::string& field) {
    if (field.find_first_of(",\"\n") == std::string::npos) {
        return field;
    }
    std::string out = "\"";
    for (char c : field) {
        if (c == '"') out += '"';
        out += c;
    }
    out += '"';
    return out;
}

} // namespace detail

/// Evaluates one sweep: one row per (axis value, user, regime), ordered by
/// axis position, then user, then canonical regime order. Deterministic for
/// fixed (spec, options): Monte Carlo sub-seeds derive from the row group.
inline std::vector<SweepRow> run_sweep(const SystemConfig& base, const SweepSpec& spec,
                                       const std::optional<PowerModel>& power_model,
                                       const RunOptions& opt = {}) {
    if (spec.regimes.empty()) {
        throw config_error("[sweep] regimes: must list at least one regime");
    }
    if (spec.power_mode == PowerMode::kEqualTotalPower && !power_model) {
        throw config_error("[sweep] power_mode equal_total_power requires a "
                           "[power_model] section");
    }
    const auto regimes = detail::order_regimes(spec.regimes);
    const QuadratureRule rule = gauss_laguerre(opt.quad_order);
    const int k_users = base.users();

    struct GroupResult {
        std::vector<double> op_analytic, op_asymptotic, thr;
        std::optional<McEstimate> mc;
    };

    std::vector<SweepRow> rows;
    rows.reserve(spec.values.size() * static_cast<std::size_t>(k_users) * regimes.size());
    for (std::size_t vi = 0; vi < spec.values.size(); ++vi) {
        std::vector<GroupResult> groups(regimes.size());
        for (std::size_t ri = 0; ri < regimes.size(); ++ri) {
            const std::string row_tag =
                "sweep row (axis_value=" + detail::format_sig10(spec.values[vi]) +
                ", regime=" +
                to_string(Regime{regimes[ri].mode, regimes[ri].perfect_sic, false}) + ")";
            try {
                SystemConfig cfg = detail::apply_regime(base, regimes[ri]);
                detail::apply_axis(cfg, spec.axis, spec.values[vi]);
                if (spec.power_mode == PowerMode::kEqualTotalPower) {
                    detail::apply_power_fairness(cfg, *power_model);
                }
                cfg.validate();
                GroupResult& g = groups[ri];
                for (int k = 1; k <= k_users; ++k) {
                    const OutageResult a = op_analytic(cfg, k, rule);
                    const OutageResult asym = op_asymptotic(cfg, k, rule);
                    g.op_analytic.push_back(a.op);
                    g.op_asymptotic.push_back(asym.op);
                    g.thr.push_back(
                        throughput(a.op, cfg.link.rates[static_cast<std::size_t>(k - 1)]));
                }
                if (spec.mc_trials > 0) {
                    g.mc = estimate_op(cfg, spec.mc_trials,
                                       derive_seed(opt.seed, vi, ri), opt.workers);
                }
            } catch (const config_error& e) {
                throw config_error(row_tag + ": " + e.what());
            } catch (const std::exception& e) {
                throw std::runtime_error(row_tag + ": " + e.what());
            }
        }
        for (int k = 1; k <= k_users; ++k) {
            for (std::size_t ri = 0; ri < regimes.size(); ++ri) {
                const GroupResult& g = groups[ri];
                SweepRow row;
                row.axis_value = spec.values[vi];
                row.user = k;
                row.regime = to_string(Regime{regimes[ri].mode, regimes[ri].perfect_sic, false});
                row.op_analytic = g.op_analytic[static_cast<std::size_t>(k - 1)];
                row.op_asymptotic = g.op_asymptotic[static_cast<std::size_t>(k - 1)];
                if (g.mc) {
                    row.op_mc = g.mc->op_hat[static_cast<std::size_t>(k - 1)];
                    row.mc_std_err = g.mc->std_err[static_cast<std::size_t>(k - 1)];
                }
                row.throughput = g.thr[static_cast<std::size_t>(k - 1)];
                rows.push_back(std::move(row));
            }
        }
    }
    return rows;
}

/// Tolerance policy of the validation run: inside [1e-3, 0.5] the analytic
/// value must sit within 15% of the Monte Carlo estimate; outside, within
/// max(3 standard errors, 0.02) absolute — 0.02 being the documented
/// sup-norm allowance of the cascaded-channel CDF approximation.
inline bool validation_pass(double analytic, double mc, double std_err) {
    if (analytic >= 1e-3 && analytic <= 0.5) {
        return mc > 0.0 && std::abs(analytic - mc) <= 0.15 * mc;
    }
    const double tol = std::max(3.0 * std_err, 0.02);
    return std::abs(analytic - mc) <= tol;
}

/// Cross-checks the analytic engine against the Monte Carlo engine for every
/// user and every regime combination at the base config's operating point.
inline ValidationReport run_validate(const SystemConfig& base, long long trials,
                                     const RunOptions& opt = {}) {
    const QuadratureRule rule = gauss_laguerre(opt.quad_order);
    const auto& regimes = detail::canonical_regimes();
    const int k_users = base.users();
    ValidationReport report;
    report.trials = trials;

    std::vector<std::vector<double>> analytic(regimes.size());
    std::vector<McEstimate> mc(regimes.size());
    for (std::size_t ri = 0; ri < regimes.size(); ++ri) {
        SystemConfig cfg = detail::apply_regime(base, regimes[ri]);
        cfg.validate();
        for (int k = 1; k <= k_users; ++k) {
            analytic[ri].push_back(op_analytic(cfg, k, rule).op);
        }
        mc[ri] = estimate_op(cfg, trials, derive_seed(opt.seed, 0, ri), opt.workers);
    }
    for (int k = 1; k <= k_users; ++k) {
        for (std::size_t ri = 0; ri < regimes.size(); ++ri) {
            ValidationRow row;
            row.user = k;
            row.regime = to_string(Regime{regimes[ri].mode, regimes[ri].perfect_sic, false});
            row.op_analytic = analytic[ri][static_cast<std::size_t>(k - 1)];
            row.op_mc = mc[ri].op_hat[static_cast<std::size_t>(k - 1)];
            row.mc_std_err = mc[ri].std_err[static_cast<std::size_t>(k - 1)];
            row.rel_err = row.op_mc > 0.0
                ? std::abs(row.op_analytic - row.op_mc) / row.op_mc
                : (row.op_analytic == 0.0 ? 0.0
                                          : std::numeric_limits<double>::infinity());
            row.pass = validation_pass(row.op_analytic, row.op_mc, row.mc_std_err);
            report.all_pass = report.all_pass && row.pass;
            report.rows.push_back(std::move(row));
        }
    }
    return report;
}

// ---------------------------------------------------------------------------
// Emission

inline void write_sweep_csv(const std::vector<SweepRow>& rows, std::ostream& out) {
    out << "axis_value,user,regime,op_analytic,op_asymptotic,op_mc,mc_std_err,throughput\n";
    for (const auto& r : rows) {
        out << detail::format_sig10(r.axis_value) << ',' << r.user << ','
            << detail::csv_quote(r.regime) << ','
            << detail::format_sig10(r.op_analytic) << ','
            << detail::format_sig10(r.op_asymptotic) << ','
            << (r.op_mc ? detail::format_sig10(*r.op_mc) : std::string()) << ','
            << (r.mc_std_err ? detail::format_sig10(*r.mc_std_err) : std::string())
            << ',' << detail::format_sig10(r.throughput) << '\n';
    }
}

inline void write_sweep_json(const std::vector<SweepRow>& rows, std::ostream& out) {
    nlohmann::ordered_json arr = nlohmann::ordered_json::array();
    for (const auto& r : rows) {
        nlohmann::ordered_json obj;
        obj["axis_value"] = r.axis_value;
        obj["user"] = r.user;
        obj["regime"] = r.regime;
        obj["op_analytic"] = r.op_analytic;
        obj["op_asymptotic"] = r.op_asymptotic;
        if (r.op_mc) {
            obj["op_mc"] = *r.op_mc;
            obj["mc_std_err"] = *r.mc_std_err;
        }
        obj["throughput"] = r.throughput;
        arr.push_back(std::move(obj));
    }
    out << arr.dump(2) << '\n';
}

inline void write_validation_csv(const ValidationReport& report, std::ostream& out) {
    out << "user,regime,op_analytic,op_mc,mc_std_err,rel_err,status\n";
    for (const auto& r : report.rows) {
        out << r.user << ',' << detail::csv_quote(r.regime) << ','
            << detail::format_sig10(r.op_analytic) << ','
            << detail::format_sig10(r.op_mc) << ','
            << detail::format_sig10(r.mc_std_err) << ','
            << detail::format_sig10(r.rel_err) << ','
            << (r.pass ? "PASS" : "FAIL") << '\n';
    }
}

inline void write_validation_json(const ValidationReport& report, std::ostream& out) {
    nlohmann::ordered_json doc;
    doc["trials"] = report.trials;
    doc["all_pass"] = report.all_pass;
    nlohmann::ordered_json arr = nlohmann::ordered_json::array();
    for (const auto& r : report.rows) {
        nlohmann::ordered_json obj;
        obj["user"] = r.user;
        obj["regime"] = r.regime;
        obj["op_analytic"] = r.op_analytic;
        obj["op_mc"] = r.op_mc;
        obj["mc_std_err"] = r.mc_std_err;
        obj["rel_err"] = r.rel_err;
        obj["status"] = r.pass ? "PASS" : "FAIL";
        arr.push_back(std::move(obj));
    }
    doc["rows"] = std::move(arr);
    out << doc.dump(2) << '\n';
}

/// Parses a CSV produced by write_sweep_csv (used by the round-trip checks).
inline std::vector<SweepRow> parse_sweep_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line)) {
        throw config_error("sweep CSV: missing header");
    }
    std::vector<SweepRow> rows;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::vector<std::string> fields;
        std::string cur;
        bool quoted = false;
        for (std::size_t i = 0; i < line.size(); ++i) {
            const char c = line[i];
            if (quoted) {
                if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
                    cur += '"';
                    ++i;
                } else if (c == '"') {
                    quoted = false;
                } else {
                    cur += c;
                }
            } else if (c == '"') {
                quoted = true;
            } else if (c == ',') {
                fields.push_back(cur);
                cur.clear();
            } else {
                cur += c;
            }
        }
        fields.push_back(cur);
        if (fields.size() != 8) {
            throw config_error("sweep CSV: expected 8 fields per row");
        }
        SweepRow r;
        r.axis_value = std::stod(fields[0]);
        r.user = std::stoi(fields[1]);
        r.regime = fields[2];
        r.op_analytic = std::stod(fields[3]);
        r.op_asymptotic = std::stod(fields[4]);
        if (!fields[5].empty()) r.op_mc = std::stod(fields[5]);
        if (!fields[6].empty()) r.mc_std_err = std::stod(fields[6]);
        r.throughput = std::stod(fields[7]);
        rows.push_back(std::move(r));
    }
    return rows;
}

} // namespace risnoma
