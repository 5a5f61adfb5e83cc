#include <cstdint>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "phasebound/errors.hpp"
#include "phasebound/figures.hpp"
#include "phasebound/scenario.hpp"
#include "phasebound/suite.hpp"

namespace {

enum Exit { kOk = 0, kConfig = 1, kCompute = 2, kMismatch = 3 };

struct Common {
    std::string config;
    std::string out;
    std::string format;
    std::optional<std::uint64_t> seed;
    std::optional<int> dim;
    bool quiet = false;
};

void add_common(CLI::App* sub, Common& c, bool needs_config) {
    auto* opt = sub->add_option("--config", c.config, "Scenario JSON file");
    if (needs_config) opt->required();
    sub->add_option("--out", c.out, "Output path (stdout when omitted)");
    sub->add_option("--format", c.format, "Output format")->check(CLI::IsMember({"json", "csv"}));
    sub->add_option("--seed", c.seed, "Sampling seed override");
    sub->add_option("--dim", c.dim, "Fock truncation override");
    sub->add_flag("--quiet", c.quiet, "Suppress the summary on stderr");
}

void emit(const std::string& text, const std::string& path) {
    if (path.empty()) {
        std::cout << text;
    } else {
        phasebound::cli::write_atomic(path, text);
    }
}

int run_scenario_command(phasebound::cli::Command command, const Common& c) {
    using namespace phasebound::cli;
    ScenarioConfig config = load_config(c.config);
    apply_overrides(config, c.seed, c.dim);
    const std::string format = c.format.empty() ? config.format : c.format;
    const std::string path = c.out.empty() ? config.path.value_or("") : c.out;
    ReportDocument doc = run_scenario(config, command);
    emit(format == "csv" ? doc.to_csv() : doc.to_json(), path);
    if (!c.quiet) {
        int violated = 0;
        for (const auto& r : doc.reports) violated += r.violated ? 1 : 0;
        std::cerr << command_name(command) << ": " << doc.reports.size() << " report(s), " << violated
                  << " violation(s)\n";
    }
    return kOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Classical-bound tests of measurement statistics"};
    app.require_subcommand(1);

    using phasebound::cli::Command;
    const std::pair<const char*, Command> scenario_commands[] = {
        {"bound", Command::bound},           {"scan", Command::scan},   {"efficiency", Command::efficiency},
        {"sample", Command::sample},         {"trace-estimate", Command::trace_estimate},
        {"spin", Command::spin},             {"two-mode", Command::two_mode},
    };
    Common common;
    std::optional<Command> chosen;
    for (const auto& [name, cmd] : scenario_commands) {
        auto* sub = app.add_subcommand(name, std::string("Run a '") + name + "' scenario");
        add_common(sub, common, true);
        sub->callback([&chosen, cmd = cmd] { chosen = cmd; });
    }

    std::string figure_name;
    auto* fig = app.add_subcommand("figure", "Write figure data as CSV");
    fig->add_option("name", figure_name, "fig1, fig2 or fig3")->required();
    fig->add_option("--out", common.out, "Output path (stdout when omitted)");
    fig->add_flag("--quiet", common.quiet, "Suppress the summary on stderr");

    std::string perturb;
    double perturb_factor = 1.01;
    auto* suite = app.add_subcommand("paper-suite", "Rerun the reference scenarios against stored expectations");
    suite->add_option("--out", common.out, "Write the diff table here as well");
    suite->add_flag("--quiet", common.quiet, "Print only the summary line");
    suite->add_option("--perturb", perturb, "Scale one bound constant (negative control)");
    suite->add_option("--perturb-factor", perturb_factor, "Scale factor for --perturb");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kOk : kConfig;
    }

    try {
        if (chosen) return run_scenario_command(*chosen, common);
        if (fig->parsed()) {
            auto table = phasebound::figure_table(figure_name);
            emit(table.to_csv(), common.out);
            if (!common.quiet) std::cerr << figure_name << ": " << table.rows.size() << " rows\n";
            return kOk;
        }
        if (suite->parsed()) {
            phasebound::SuiteOptions options;
            if (!perturb.empty()) options.perturb_constant = perturb;
            options.perturb_factor = perturb_factor;
            auto result = phasebound::paper_suite(options);
            const std::string table = phasebound::format_suite_table(result);
            if (!common.out.empty()) phasebound::cli::write_atomic(common.out, table);
            if (common.quiet) {
                std::cout << table.substr(table.rfind('\n', table.size() - 2) + 1);
            } else {
                std::cout << table;
            }
            for (const auto& name : result.failures()) std::cerr << "mismatch: " << name << '\n';
            return result.ok() ? kOk : kMismatch;
        }
    } catch (const phasebound::ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kConfig;
    } catch (const phasebound::Error& e) {
        std::cerr << "error in " << e.module() << ": " << e.what() << '\n';
        return kCompute;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kCompute;
    }
    return kOk;
}
