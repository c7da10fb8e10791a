#include "slab/runner.hpp"

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <future>
#include <ostream>
#include <sstream>
#include <thread>

#include "slab/report.hpp"

#include "json.hpp"

namespace slab {

namespace {

int thread_cap() {
    if (const char* env = std::getenv("SOLITONLAB_THREADS")) {
        const int v = std::atoi(env);
        if (v >= 1) return v;
    }
    const unsigned hc = std::thread::hardware_concurrency();
    return hc ? static_cast<int>(hc) : 1;
}

void validate(const RunConfig& config) {
    // resolve the soliton name early: unknown names are usage errors
    bool known = false;
    for (const auto& nm : catalog_names()) known = known || nm == config.spec.name;
    if (!known) {
        std::string msg = "unknown soliton '" + config.spec.name + "'; available:";
        for (const auto& nm : catalog_names()) msg += " " + nm;
        throw UsageError(msg);
    }
    if (config.command == "verify") {
        for (const auto& c : config.checks) {
            bool ok = false;
            for (const auto& nm : check_names()) ok = ok || nm == c;
            if (!ok) {
                std::string msg = "unknown check '" + c + "'; available:";
                for (const auto& nm : check_names()) msg += " " + nm;
                throw UsageError(msg);
            }
        }
        if (config.checks.empty()) throw UsageError("no checks selected");
    } else if (config.command == "converge") {
        bool ok = false;
        for (const auto& nm : convergence_check_names()) ok = ok || nm == config.converge_check;
        if (!ok) {
            std::string msg =
                "check '" + config.converge_check + "' has no convergence mode; available:";
            for (const auto& nm : convergence_check_names()) msg += " " + nm;
            throw UsageError(msg);
        }
        if (config.resolutions.size() < 3)
            throw UsageError("converge needs at least 3 resolutions (ratio-2 ladder)");
        for (std::size_t i = 1; i < config.resolutions.size(); ++i)
            if (config.resolutions[i] != 2 * config.resolutions[i - 1])
                throw UsageError("resolutions must form a ratio-2 ladder, e.g. 16,32,64,128");
    } else {
        throw UsageError("unknown command '" + config.command + "'");
    }
}

void print_summary(std::ostream& log, const std::vector<CheckReport>& reports) {
    std::vector<std::array<std::string, 7>> rows;
    rows.push_back({"check", "backend", "res", "sup_residual", "tolerance", "order", "status"});
    for (const CheckReport& r : reports) {
        std::string res;
        for (std::size_t i = 0; i < r.resolutions.size(); ++i)
            res += (i ? "/" : "") + std::to_string(r.resolutions[i]);
        rows.push_back({r.check, r.backend, res, format_g17(r.sup_residual),
                        format_g17(r.tolerance), r.order ? format_g17(*r.order) : "-",
                        r.passed ? "PASS" : "FAIL"});
    }
    std::array<std::size_t, 7> width{};
    for (const auto& row : rows)
        for (std::size_t c = 0; c < row.size(); ++c) width[c] = std::max(width[c], row[c].size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
        std::ostringstream line;
        for (std::size_t c = 0; c < rows[i].size(); ++c) {
            line << rows[i][c];
            for (std::size_t k = rows[i][c].size(); k < width[c] + 2; ++k) line << ' ';
        }
        if (i == 0)
            line << "seconds";
        else
            line << format_g17(reports[i - 1].wall_seconds);
        log << line.str() << "\n";
    }
}

} // namespace

int run(const RunConfig& config, std::ostream& log) {
    validate(config);

    std::vector<CheckReport> reports;
    if (config.command == "verify") {
        // independent jobs; results land in input order regardless of scheduling
        reports.resize(config.checks.size());
        const int cap = std::max(1, thread_cap());
        std::size_t next = 0;
        while (next < config.checks.size()) {
            const std::size_t batch =
                std::min<std::size_t>(cap, config.checks.size() - next);
            std::vector<std::future<CheckReport>> futs;
            futs.reserve(batch);
            for (std::size_t k = 0; k < batch; ++k) {
                const std::string name = config.checks[next + k];
                futs.push_back(std::async(std::launch::async, [&, name] {
                    return run_check(name, config.spec, config.params);
                }));
            }
            for (std::size_t k = 0; k < batch; ++k) reports[next + k] = futs[k].get();
            next += batch;
        }
    } else {
        reports.push_back(convergence_study(config.converge_check, config.spec,
                                            config.resolutions, config.params));
    }

    bool all = true;
    for (const CheckReport& r : reports) all = all && r.passed;

    if (!config.out_path.empty())
        write_file(config.out_path, report_json(config, reports), log);
    if (!config.csv_path.empty() && config.command == "converge")
        write_file(config.csv_path, convergence_csv(reports.front()), log);
    if (!config.plot_path.empty()) {
        if (reports.empty())
            log << "warning: no reports, plot data not written\n";
        else
            write_file(config.plot_path, plot_csv(reports), log);
    }

    print_summary(log, reports);
    if (!all) {
        log << "failed checks:";
        for (const CheckReport& r : reports)
            if (!r.passed) log << " " << r.check;
        log << "\n";
    }
    return all ? 0 : 1;
}

int emit_plot_data_from_file(const std::string& report_path, const std::string& out_path,
                             std::ostream& log) {
    std::ifstream is(report_path);
    if (!is) throw UsageError("cannot read report: " + report_path);
    nlohmann::json doc = nlohmann::json::parse(is);
    std::vector<CheckReport> reports;
    for (const auto& jc : doc.at("checks")) {
        CheckReport rep;
        rep.check = jc.at("check").get<std::string>();
        rep.soliton = jc.at("soliton").get<std::string>();
        rep.backend = jc.at("backend").get<std::string>();
        for (const auto& r : jc.at("resolutions")) rep.resolutions.push_back(r.get<int>());
        rep.sup_residual = jc.at("sup_residual").get<double>();
        rep.l2_residual = jc.at("l2_residual").get<double>();
        rep.tolerance = jc.at("tolerance").get<double>();
        if (!jc.at("order").is_null()) rep.order = jc.at("order").get<double>();
        if (!jc.at("seed").is_null()) rep.seed = jc.at("seed").get<std::uint64_t>();
        rep.passed = jc.at("passed").get<bool>();
        for (const auto& jr : jc.at("detail")) {
            DetailRow row;
            for (const auto& [k, v] : jr.items())
                if (v.is_number()) row.kv.push_back({k, v.get<double>()});
            rep.detail.push_back(std::move(row));
        }
        reports.push_back(std::move(rep));
    }
    if (reports.empty()) {
        log << "warning: empty report set, nothing to emit\n";
        return 0;
    }
    write_file(out_path, plot_csv(reports), log);
    return 0;
}

} // namespace slab
