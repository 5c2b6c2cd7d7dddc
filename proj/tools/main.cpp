// Command-line front-end: parameter sweeps, analytic-vs-MC validation,
// quadrature-rule and distortion-factor dumps.
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "risnoma/analysis.hpp"
#include "risnoma/channel.hpp"
#include "risnoma/config_io.hpp"
#include "risnoma/montecarlo.hpp"
#include "risnoma/numerics.hpp"
#include "risnoma/sweep.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitValidationFailure = 1;
constexpr int kExitConfigError = 2;

struct OutputTarget {
    std::string path;  // empty = stdout

    template <typename Fn>
    void write(Fn&& fn) const {
        if (path.empty()) {
            fn(std::cout);
            return;
        }
        std::ofstream out(path, std::ios::binary);
        if (!out) {
            throw risnoma::config_error("cannot open output file: " + path);
        }
        fn(out);
    }
};

int run_sweep_cmd(const std::string& config_path, const OutputTarget& target,
                  const std::string& format, risnoma::RunOptions opt,
                  std::optional<long long> trials_override) {
    const auto scenario = risnoma::load_scenario_file(config_path);
    if (!scenario.sweep) {
        throw risnoma::config_error(config_path + ": sweep command requires a "
                                    "[sweep] section");
    }
    risnoma::SweepSpec spec = *scenario.sweep;
    if (trials_override) {
        spec.mc_trials = *trials_override;
    }
    const auto rows = risnoma::run_sweep(scenario.config, spec,
                                         scenario.power_model, opt);
    target.write([&](std::ostream& out) {
        if (format == "json") {
            risnoma::write_sweep_json(rows, out);
        } else {
            risnoma::write_sweep_csv(rows, out);
        }
    });
    return kExitOk;
}

int run_validate_cmd(const std::string& config_path, const OutputTarget& target,
                     const std::string& format, risnoma::RunOptions opt,
                     long long trials) {
    const auto scenario = risnoma::load_scenario_file(config_path);
    const auto report = risnoma::run_validate(scenario.config, trials, opt);
    target.write([&](std::ostream& out) {
        if (format == "json") {
            risnoma::write_validation_json(report, out);
        } else {
            risnoma::write_validation_csv(report, out);
        }
    });
    return report.all_pass ? kExitOk : kExitValidationFailure;
}

int run_glq_table_cmd(int order, const OutputTarget& target,
                      const std::string& format) {
    const auto rule = risnoma::gauss_laguerre(order);
    target.write([&](std::ostream& out) {
        if (format == "json") {
            nlohmann::ordered_json doc;
            doc["order"] = rule.order;
            doc["nodes"] = rule.nodes;
            doc["weights"] = rule.weights;
            out << doc.dump(2) << '\n';
        } else {
            out << "index,node,weight\n";
            for (int i = 0; i < rule.order; ++i) {
                out << (i + 1) << ','
                    << risnoma::detail::format_sig10(rule.nodes[static_cast<std::size_t>(i)])
                    << ','
                    << risnoma::detail::format_sig10(rule.weights[static_cast<std::size_t>(i)])
                    << '\n';
            }
        }
    });
    return kExitOk;
}

int run_lambda_q_cmd(int max_bits, const OutputTarget& target,
                     const std::string& format) {
    if (max_bits < 1) {
        throw risnoma::config_error("--max-bits must be >= 1");
    }
    target.write([&](std::ostream& out) {
        if (format == "json") {
            nlohmann::ordered_json arr = nlohmann::ordered_json::array();
            for (int b = 1; b <= max_bits; ++b) {
                arr.push_back({{"bits", b},
                               {"lambda_q", risnoma::lambda_q_of_bits(b)}});
            }
            arr.push_back({{"bits", "full"}, {"lambda_q", 1.0}});
            out << arr.dump(2) << '\n';
        } else {
            out << "bits,lambda_q\n";
            for (int b = 1; b <= max_bits; ++b) {
                out << b << ','
                    << risnoma::detail::format_sig10(risnoma::lambda_q_of_bits(b))
                    << '\n';
            }
            out << "full,1\n";
        }
    });
    return kExitOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Quantized active/passive RIS-NOMA downlink outage toolkit"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_path;
    std::string format = "csv";
    risnoma::RunOptions opt;
    long long trials = 1000000;
    bool trials_given = false;
    int glq_order = 64;
    int max_bits = 12;

    auto add_common = [&](CLI::App* cmd, bool with_config) {
        if (with_config) {
            cmd->add_option("--config", config_path, "scenario file")->required();
        }
        cmd->add_option("--out", out_path, "output path (default: stdout)");
        cmd->add_option("--format", format, "csv or json")
            ->check(CLI::IsMember({"csv", "json"}));
        cmd->add_option("--seed", opt.seed, "Monte Carlo master seed");
        cmd->add_option("--workers", opt.workers,
                        "worker threads (0 = hardware concurrency)");
        cmd->add_option("--quad-order", opt.quad_order,
                        "Gauss-Laguerre order for the analytics")
            ->check(CLI::Range(1, 256));
    };

    CLI::App* sweep = app.add_subcommand("sweep", "run the sweep defined in the config");
    add_common(sweep, true);
    sweep->add_option("--trials", trials, "override [sweep] mc_trials")
        ->each([&](const std::string&) { trials_given = true; });

    CLI::App* validate = app.add_subcommand(
        "validate", "cross-check analytic OP against Monte Carlo for all regimes");
    add_common(validate, true);
    validate->add_option("--trials", trials, "Monte Carlo trials per regime");

    CLI::App* glq = app.add_subcommand("glq-table", "dump the Gauss-Laguerre rule");
    add_common(glq, false);
    glq->add_option("--order", glq_order, "rule order")->check(CLI::Range(1, 256));

    CLI::App* lam = app.add_subcommand("lambda-q", "dump ADC distortion factors");
    add_common(lam, false);
    lam->add_option("--max-bits", max_bits, "largest bit depth to list");

    CLI11_PARSE(app, argc, argv);

    const OutputTarget target{out_path};
    try {
        if (sweep->parsed()) {
            return run_sweep_cmd(config_path, target, format, opt,
                                 trials_given ? std::optional<long long>(trials)
                                              : std::nullopt);
        }
        if (validate->parsed()) {
            return run_validate_cmd(config_path, target, format, opt, trials);
        }
        if (glq->parsed()) {
            return run_glq_table_cmd(glq_order, target, format);
        }
        return run_lambda_q_cmd(max_bits, target, format);
    } catch (const risnoma::config_error& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kExitConfigError;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitConfigError;
    }
}
