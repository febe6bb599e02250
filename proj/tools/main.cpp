#include <cctype>
#include <cstdio>
#include <string>
#include <utility>
#include <vector>

#include <CLI11.hpp>

#include "spinrs/io.hpp"

namespace {

std::vector<std::string> split_csv(const std::string& text) {
    std::vector<std::string> out;
    std::string cur;
    for (char ch : text) {
        if (ch == ',') {
            if (!cur.empty()) out.push_back(cur);
            cur.clear();
        } else if (!std::isspace(static_cast<unsigned char>(ch))) {
            cur += ch;
        }
    }
    if (!cur.empty()) out.push_back(cur);
    return out;
}

int report_error(const std::string& msg, int code) {
    std::fprintf(stderr, "error: %s\n", msg.c_str());
    return code;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"elliptic many-body simulator and verification driver"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_dir = ".";
    std::string suites_csv;
    std::vector<std::string> tolerance_args;
    std::uint64_t seed = spinrs::kDefaultSeed;

    auto* sim = app.add_subcommand("simulate", "integrate a configured system and write trajectory artifacts");
    sim->add_option("--config", config_path, "JSON configuration file, or - for standard input")->required();
    sim->add_option("--out", out_dir, "output directory (default: current directory)");

    auto* ver = app.add_subcommand("verify", "run verification suites and write reports.json");
    ver->add_option("--suites", suites_csv, "comma-separated suite names (default: all)");
    ver->add_option("--seed", seed, "master seed for suite sampling");
    ver->add_option("--out", out_dir, "output directory (default: current directory)");
    ver->add_option("--tolerance", tolerance_args, "NAME=VALUE pass-threshold override, repeatable");

    auto* z0 = app.add_subcommand("z0", "solve the spectral point from f3, or recover f3 from it");
    z0->add_option("--config", config_path, "JSON configuration file, or - for standard input")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    std::string error;
    if (sim->parsed() || z0->parsed()) {
        spinrs::RunConfig cfg;
        try {
            cfg = spinrs::parse_config(spinrs::read_text_file(config_path));
        } catch (const std::exception& e) {
            return report_error(e.what(), 1);
        }
        if (sim->parsed()) {
            const int code = spinrs::cmd_simulate(cfg, out_dir, &error);
            if (code != 0) return report_error(error, code);
            return 0;
        }
        std::string solved;
        const int code = spinrs::cmd_z0(cfg, solved, &error);
        if (code != 0) return report_error(error, code);
        std::fputs(solved.c_str(), stdout);
        return 0;
    }

    std::vector<std::pair<std::string, double>> overrides;
    for (const std::string& arg : tolerance_args) {
        const auto eq = arg.find('=');
        if (eq == std::string::npos || eq == 0)
            return report_error("tolerance override must look like NAME=VALUE: " + arg, 1);
        try {
            std::size_t used = 0;
            const double value = std::stod(arg.substr(eq + 1), &used);
            if (used != arg.size() - eq - 1) throw std::invalid_argument("trailing characters");
            overrides.emplace_back(arg.substr(0, eq), value);
        } catch (const std::exception&) {
            return report_error("cannot parse tolerance override value in: " + arg, 1);
        }
    }
    const int code = spinrs::cmd_verify(split_csv(suites_csv), seed, overrides, out_dir, &error);
    if (code != 0) return report_error(error, code);
    return 0;
}
