// solitonlab: identity and stability checks for Lagrangian translating
// solitons on windowed grids.
//
//   solitonlab verify   --soliton grim-reaper-cylinder --n 2 --res 64 \
//                       --backend analytic --check all --seed 42 --out report.json
//   solitonlab converge --check commutation --soliton grim-reaper-cylinder --n 2 \
//                       --resolutions 16,32,64,128 --backend fd --out conv.csv
//   solitonlab plot-data --in report.json --out plot.csv
//
// Exit status: 0 all checks passed, 1 any check failed, 2 usage error.

#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "slab/runner.hpp"

namespace {

std::vector<int> parse_int_list(const std::string& text) {
    std::vector<int> out;
    std::istringstream is(text);
    std::string item;
    while (std::getline(is, item, ',')) out.push_back(std::stoi(item));
    return out;
}

std::vector<double> parse_double_list(const std::string& text) {
    std::vector<double> out;
    std::istringstream is(text);
    std::string item;
    while (std::getline(is, item, ',')) out.push_back(std::stod(item));
    return out;
}

std::vector<std::array<double, 2>> parse_window(const std::string& text) {
    std::vector<std::array<double, 2>> out;
    std::istringstream is(text);
    std::string axis;
    while (std::getline(is, axis, ',')) {
        const auto colon = axis.find(':');
        if (colon == std::string::npos)
            throw slab::UsageError("window axis must be a:b, got '" + axis + "'");
        out.push_back({std::stod(axis.substr(0, colon)), std::stod(axis.substr(colon + 1))});
    }
    return out;
}

void apply_tol_overrides(slab::CheckParams& params, const std::vector<std::string>& items) {
    for (const auto& item : items) {
        const auto eq = item.find('=');
        if (eq == std::string::npos)
            throw slab::UsageError("--tol expects check=value, got '" + item + "'");
        params.tolerance_overrides[item.substr(0, eq)] = std::stod(item.substr(eq + 1));
    }
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"numerical checks for Lagrangian translating solitons"};
    app.require_subcommand(1);

    slab::RunConfig config;
    std::string window_text, speeds_text, resolutions_text, checks_text = "all";
    std::string translation_text;
    std::vector<std::string> tol_items;
    std::string backend_text = "analytic";
    std::string plot_in, plot_out;

    auto add_soliton_flags = [&](CLI::App* cmd) {
        cmd->add_option("--soliton", config.spec.name, "catalog soliton name")
            ->default_val("grim-reaper-cylinder");
        cmd->add_option("--n", config.spec.n, "parameter dimension")->default_val(2);
        cmd->add_option("--speeds", speeds_text, "product speeds c_1,...,c_n");
        cmd->add_option("--window", window_text, "per-axis windows a:b,c:d,...");
        cmd->add_option("--t", translation_text, "flat-plane translation vector t_1,...,t_2n");
        cmd->add_option("--backend", backend_text, "analytic | fd")->default_val("analytic");
        cmd->add_option("--seed", config.params.seed, "base seed")->default_val(42);
        cmd->add_option("--fd-step", config.params.fd_step, "variation step s")->default_val(1e-3);
        cmd->add_option("--samples", config.params.samples, "stability scan samples")
            ->default_val(20);
        cmd->add_option("--tol", tol_items, "tolerance override, check=value (repeatable)");
        cmd->add_option("--plot-data", config.plot_path, "write long-format plot CSV here");
    };

    std::string verify_out = "report.json", converge_csv = "conv.csv", converge_json;

    CLI::App* verify = app.add_subcommand("verify", "run identity checks at one resolution");
    add_soliton_flags(verify);
    verify->add_option("--res", config.spec.resolution, "nodes per axis")->default_val(64);
    verify->add_option("--check", checks_text, "all or comma list of checks")->default_val("all");
    verify->add_option("--out", verify_out, "JSON report path");

    CLI::App* converge = app.add_subcommand("converge", "Richardson ladder for one check");
    add_soliton_flags(converge);
    converge->add_option("--check", config.converge_check, "check to ladder")->required();
    converge->add_option("--resolutions", resolutions_text, "ratio-2 ladder, e.g. 16,32,64,128")
        ->required();
    converge->add_option("--out", converge_csv, "CSV table path");
    converge->add_option("--json", converge_json, "optional JSON report path");

    CLI::App* plot = app.add_subcommand("plot-data", "convert a JSON report to plot CSV");
    plot->add_option("--in", plot_in, "report JSON")->required();
    plot->add_option("--out", plot_out, "output CSV")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (plot->parsed()) return slab::emit_plot_data_from_file(plot_in, plot_out, std::cout);

        config.command = verify->parsed() ? "verify" : "converge";
        if (backend_text == "analytic")
            config.params.backend = slab::Backend::Analytic;
        else if (backend_text == "fd")
            config.params.backend = slab::Backend::FiniteDifference;
        else
            throw slab::UsageError("unknown backend '" + backend_text + "' (analytic | fd)");
        if (!speeds_text.empty()) config.spec.speeds = parse_double_list(speeds_text);
        if (!window_text.empty()) config.spec.window = parse_window(window_text);
        if (!translation_text.empty()) config.spec.translation = parse_double_list(translation_text);
        apply_tol_overrides(config.params, tol_items);
        if (config.command == "verify") {
            config.out_path = verify_out;
            if (checks_text == "all")
                config.checks = slab::check_names();
            else {
                std::istringstream is(checks_text);
                std::string item;
                while (std::getline(is, item, ',')) config.checks.push_back(item);
            }
        } else {
            config.csv_path = converge_csv;
            config.out_path = converge_json;
            config.resolutions = parse_int_list(resolutions_text);
            config.spec.resolution = config.resolutions.empty() ? 64 : config.resolutions.back();
        }
        return slab::run(config, std::cout);
    } catch (const slab::UsageError& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
