// Config-file loader. Format: INI-style sections of whitespace-separated
// key/value lines; '#' starts a comment. Physical quantities carry unit
// suffixes in their key names (_m, _mw, _db, _bpcu).
#pragma once

#include <cctype>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "risnoma/config.hpp"
#include "risnoma/power.hpp"

namespace risnoma {

enum class SweepAxis { kSnrDb, kMElements, kAdcBits, kBeta };
enum class PowerMode { kEqualSnr, kEqualTotalPower };

/// Regime selector for sweeps and validation: RIS mode plus SIC assumption.
struct RegimeSelector {
    RisMode mode = RisMode::kActive;
    bool perfect_sic = false;
};

struct SweepSpec {
    SweepAxis axis = SweepAxis::kSnrDb;
    std::vector<double> values;
    std::vector<RegimeSelector> regimes;
    long long mc_trials = 0;  // 0 disables the Monte Carlo columns
    PowerMode power_mode = PowerMode::kEqualSnr;
};

struct ScenarioFile {
    SystemConfig config;
    std::optional<PowerModel> power_model;
    std::optional<SweepSpec> sweep;
};

namespace detail {

using Section = std::map<std::string, std::vector<std::string>>;
using RawConfig = std::map<std::string, Section>;

inline std::string trim(const std::string& s) {
    std::size_t b = 0;
    std::size_t e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return s.substr(b, e - b);
}

inline RawConfig parse_raw(std::istream& in, const std::string& origin) {
    RawConfig raw;
    std::string section;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']') {
                throw config_error(origin + ":" + std::to_string(lineno) +
                                   ": malformed section header");
            }
            section = trim(line.substr(1, line.size() - 2));
            raw[section];
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos || section.empty()) {
            throw config_error(origin + ":" + std::to_string(lineno) +
                               ": expected 'key = value' inside a section");
        }
        const std::string key = trim(line.substr(0, eq));
        std::istringstream values(line.substr(eq + 1));
        std::vector<std::string> tokens;
        std::string tok;
        while (values >> tok) tokens.push_back(tok);
        if (key.empty() || tokens.empty()) {
            throw config_error(origin + ":" + std::to_string(lineno) +
                               ": empty key or value");
        }
        if (!raw[section].emplace(key, std::move(tokens)).second) {
            throw config_error(origin + ":" + std::to_string(lineno) +
                               ": duplicate key '" + key + "'");
        }
    }
    return raw;
}

struct SectionReader {
    const std::string name;
    const Section* section;
    mutable std::vector<std::string> consumed;

    bool has(const std::string& key) const {
        return section != nullptr && section->count(key) > 0;
    }

    const std::vector<std::string>& tokens(const std::string& key) const {
        if (!has(key)) {
            throw config_error("[" + name + "] missing required key '" + key + "'");
        }
        consumed.push_back(key);
        return section->at(key);
    }

    double number(const std::string& key) const {
        const auto& t = tokens(key);
        if (t.size() != 1) {
            throw config_error("[" + name + "] key '" + key + "' expects one value");
        }
        return to_number(key, t[0]);
    }

    double number_or(const std::string& key, double fallback) const {
        return has(key) ? number(key) : fallback;
    }

    std::vector<double> numbers(const std::string& key) const {
        const auto& t = tokens(key);
        std::vector<double> out;
        out.reserve(t.size());
        for (const auto& s : t) out.push_back(to_number(key, s));
        return out;
    }

    std::string word(const std::string& key) const {
        const auto& t = tokens(key);
        if (t.size() != 1) {
            throw config_error("[" + name + "] key '" + key + "' expects one value");
        }
        return t[0];
    }

    void reject_unknown() const {
        if (section == nullptr) return;
        for (const auto& [key, value] : *section) {
            (void)value;
            bool known = false;
            for (const auto& c : consumed) {
                if (c == key) { known = true; break; }
            }
            if (!known) {
                throw config_error("[" + name + "] unknown key '" + key + "'");
            }
        }
    }

private:
    double to_number(const std::string& key, const std::string& s) const {
        std::size_t pos = 0;
        double v = 0.0;
        try {
            v = std::stod(s, &pos);
        } catch (const std::exception&) {
            pos = 0;
        }
        if (pos != s.size()) {
            throw config_error("[" + name + "] key '" + key +
                               "': not a number: '" + s + "'");
        }
        return v;
    }
};

inline SectionReader reader(const RawConfig& raw, const std::string& name) {
    const auto it = raw.find(name);
    return SectionReader{name, it == raw.end() ? nullptr : &it->second, {}};
}

inline std::vector<std::array<double, 2>> to_points(const std::string& section,
                                                    const std::string& key,
                                                    const std::vector<double>& flat) {
    if (flat.empty() || flat.size() % 2 != 0) {
        throw config_error("[" + section + "] key '" + key +
                           "' expects x y pairs");
    }
    std::vector<std::array<double, 2>> pts(flat.size() / 2);
    for (std::size_t i = 0; i < pts.size(); ++i) {
        pts[i] = {flat[2 * i], flat[2 * i + 1]};
    }
    return pts;
}

} // namespace detail

inline double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }

inline RegimeSelector parse_regime(const std::string& name) {
    if (name == "aris-ipsic") return {RisMode::kActive, false};
    if (name == "aris-psic") return {RisMode::kActive, true};
    if (name == "pris-ipsic") return {RisMode::kPassive, false};
    if (name == "pris-psic") return {RisMode::kPassive, true};
    throw config_error("unknown regime '" + name +
                       "' (expected aris-ipsic, aris-psic, pris-ipsic or pris-psic)");
}

inline ScenarioFile load_scenario(std::istream& in, const std::string& origin) {
    const auto raw = detail::parse_raw(in, origin);
    for (const auto& [section, keys] : raw) {
        (void)keys;
        if (section != "topology" && section != "power_alloc" &&
            section != "hardware" && section != "sic" && section != "ris" &&
            section != "link" && section != "power_model" && section != "sweep") {
            throw config_error(origin + ": unknown section [" + section + "]");
        }
    }
    ScenarioFile out;
    SystemConfig& cfg = out.config;

    {
        auto topo = detail::reader(raw, "topology");
        const auto bs = topo.numbers("bs_m");
        const auto ris = topo.numbers("ris_m");
        if (bs.size() != 2 || ris.size() != 2) {
            throw config_error("[topology] bs_m and ris_m expect x y pairs");
        }
        cfg.topology.bs_pos = {bs[0], bs[1]};
        cfg.topology.ris_pos = {ris[0], ris[1]};
        cfg.topology.user_pos =
            detail::to_points("topology", "users_m", topo.numbers("users_m"));
        cfg.topology.alpha = topo.number("alpha");
        topo.reject_unknown();
    }
    {
        auto pa = detail::reader(raw, "power_alloc");
        cfg.power_alloc.a = pa.numbers("a");
        pa.reject_unknown();
    }
    {
        auto hw = detail::reader(raw, "hardware");
        cfg.hardware.kappa_t_bs = hw.number("kappa_t_bs");
        cfg.hardware.kappa_r = hw.numbers("kappa_r");
        const std::string bits = hw.word("adc_bits");
        if (bits == "full") {
            cfg.hardware.adc_bits = std::nullopt;
        } else {
            const double v = [&] {
                try {
                    return std::stod(bits);
                } catch (const std::exception&) {
                    throw config_error("[hardware] adc_bits: expected integer or 'full'");
                }
            }();
            if (v != std::floor(v)) {
                throw config_error("[hardware] adc_bits: expected integer or 'full'");
            }
            cfg.hardware.adc_bits = static_cast<int>(v);
        }
        hw.reject_unknown();
    }
    {
        auto sic = detail::reader(raw, "sic");
        cfg.sic.epsilon = sic.number("epsilon");
        cfg.sic.omega_i = sic.number_or("omega_i", 1.0);
        sic.reject_unknown();
    }
    {
        auto ris = detail::reader(raw, "ris");
        const std::string mode = ris.word("mode");
        if (mode == "active") {
            cfg.ris.mode = RisMode::kActive;
        } else if (mode == "passive") {
            cfg.ris.mode = RisMode::kPassive;
        } else {
            throw config_error("[ris] mode: expected 'active' or 'passive'");
        }
        cfg.ris.m_elements = static_cast<int>(ris.number("m_elements"));
        cfg.ris.beta = ris.number("beta");
        cfg.ris.n_r = ris.number("n_r");
        ris.reject_unknown();
    }
    {
        auto link = detail::reader(raw, "link");
        cfg.link.rho_s = db_to_linear(link.number("snr_db"));
        cfg.link.rates = link.numbers("rates_bpcu");
        cfg.link.n0 = link.number_or("n0", 1.0);
        link.reject_unknown();
    }
    if (raw.count("power_model") > 0) {
        auto pm = detail::reader(raw, "power_model");
        PowerModel model;
        model.p_sw_mw = pm.number("p_sw_mw");
        model.p_dc_mw = pm.number("p_dc_mw");
        model.p_total_mw = pm.number("p_total_mw");
        model.n0_mw = pm.number_or("n0_mw", 1.0);
        pm.reject_unknown();
        out.power_model = model;
    }
    if (raw.count("sweep") > 0) {
        auto sw = detail::reader(raw, "sweep");
        SweepSpec spec;
        const std::string axis = sw.word("axis");
        if (axis == "snr_db") {
            spec.axis = SweepAxis::kSnrDb;
        } else if (axis == "m_elements") {
            spec.axis = SweepAxis::kMElements;
        } else if (axis == "adc_bits") {
            spec.axis = SweepAxis::kAdcBits;
        } else if (axis == "beta") {
            spec.axis = SweepAxis::kBeta;
        } else {
            throw config_error("[sweep] axis: expected snr_db, m_elements, "
                               "adc_bits or beta");
        }
        spec.values = sw.numbers("values");
        if (spec.values.empty()) {
            throw config_error("[sweep] values: must be non-empty");
        }
        for (const auto& name : sw.tokens("regimes")) {
            spec.regimes.push_back(parse_regime(name));
        }
        spec.mc_trials = static_cast<long long>(sw.number_or("mc_trials", 0.0));
        const std::string pmode = sw.has("power_mode") ? sw.word("power_mode")
                                                       : std::string("equal_snr");
        if (pmode == "equal_snr") {
            spec.power_mode = PowerMode::kEqualSnr;
        } else if (pmode == "equal_total_power") {
            spec.power_mode = PowerMode::kEqualTotalPower;
        } else {
            throw config_error("[sweep] power_mode: expected equal_snr or "
                               "equal_total_power");
        }
        sw.reject_unknown();
        out.sweep = spec;
    }
    cfg.validate();
    return out;
}

inline ScenarioFile load_scenario_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw config_error("cannot open config file: " + path);
    }
    return load_scenario(in, path);
}

} // namespace risnoma
