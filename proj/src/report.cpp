#include "slab/report.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <sstream>

#include "slab/runner.hpp"

namespace slab {

namespace {

void json_escape(std::string& out, const std::string& s) {
    out += '"';
    for (const char c : s) {
        switch (c) {
        case '"': out += "\\\""; break;
        case '\\': out += "\\\\"; break;
        case '\n': out += "\\n"; break;
        case '\t': out += "\\t"; break;
        default: out += c;
        }
    }
    out += '"';
}

void append_number(std::string& out, double v) {
    if (std::isnan(v) || std::isinf(v)) {
        out += "null";
        return;
    }
    out += format_g17(v);
}

void append_detail(std::string& out, const std::vector<DetailRow>& detail) {
    out += "[";
    for (std::size_t i = 0; i < detail.size(); ++i) {
        if (i) out += ",";
        out += "{";
        for (std::size_t k = 0; k < detail[i].kv.size(); ++k) {
            if (k) out += ",";
            json_escape(out, detail[i].kv[k].first);
            out += ":";
            append_number(out, detail[i].kv[k].second);
        }
        out += "}";
    }
    out += "]";
}

void append_check(std::string& out, const CheckReport& rep) {
    out += "{\"check\":";
    json_escape(out, rep.check);
    out += ",\"soliton\":";
    json_escape(out, rep.soliton);
    out += ",\"backend\":";
    json_escape(out, rep.backend);
    out += ",\"resolutions\":[";
    for (std::size_t i = 0; i < rep.resolutions.size(); ++i) {
        if (i) out += ",";
        out += std::to_string(rep.resolutions[i]);
    }
    out += "],\"sup_residual\":";
    append_number(out, rep.sup_residual);
    out += ",\"l2_residual\":";
    append_number(out, rep.l2_residual);
    out += ",\"tolerance\":";
    append_number(out, rep.tolerance);
    out += ",\"order\":";
    if (rep.order)
        append_number(out, *rep.order);
    else
        out += "null";
    out += ",\"seed\":";
    out += rep.seed ? std::to_string(*rep.seed) : "null";
    out += ",\"passed\":";
    out += rep.passed ? "true" : "false";
    if (!rep.note.empty()) {
        out += ",\"note\":";
        json_escape(out, rep.note);
    }
    out += ",\"detail\":";
    append_detail(out, rep.detail);
    out += "}";
}

} // namespace

std::string format_g17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string report_json(const RunConfig& config, const std::vector<CheckReport>& checks) {
    std::string out;
    out.reserve(1 << 16);
    out += "{\"schema\":\"solitonlab-report-v1\",\"command\":";
    json_escape(out, config.command);
    out += ",\"config\":{\"soliton\":";
    SolitonSpec full = config.spec;
    full.window = config.spec.effective_window();
    json_escape(out, full.to_kv());
    out += ",\"backend\":";
    json_escape(out, backend_name(config.params.backend));
    out += ",\"checks\":[";
    if (config.command == "converge") {
        json_escape(out, config.converge_check);
    } else {
        for (std::size_t i = 0; i < config.checks.size(); ++i) {
            if (i) out += ",";
            json_escape(out, config.checks[i]);
        }
    }
    out += "],\"resolutions\":[";
    if (config.command == "converge") {
        for (std::size_t i = 0; i < config.resolutions.size(); ++i) {
            if (i) out += ",";
            out += std::to_string(config.resolutions[i]);
        }
    } else {
        out += std::to_string(config.spec.resolution);
    }
    out += "],\"fd_step\":";
    append_number(out, config.params.fd_step);
    out += ",\"samples\":";
    out += std::to_string(config.params.samples);
    out += ",\"seed\":";
    out += std::to_string(config.params.seed);
    out += ",\"tolerance_overrides\":{";
    {
        bool first = true;
        for (const auto& [k, v] : config.params.tolerance_overrides) {
            if (!first) out += ",";
            first = false;
            json_escape(out, k);
            out += ":";
            append_number(out, v);
        }
    }
    out += "}},\"checks\":[";
    bool all = true;
    for (std::size_t i = 0; i < checks.size(); ++i) {
        if (i) out += ",";
        append_check(out, checks[i]);
        all = all && checks[i].passed;
    }
    out += "],\"all_passed\":";
    out += all ? "true" : "false";
    out += "}\n";
    return out;
}

std::string convergence_csv(const CheckReport& report) {
    std::string out = "resolution,sup_residual,l2_residual,order\n";
    for (const DetailRow& row : report.detail) {
        double res = 0, sup = 0, l2 = 0;
        bool has_order = false;
        double order = 0;
        for (const auto& [k, v] : row.kv) {
            if (k == "resolution") res = v;
            else if (k == "sup_residual") sup = v;
            else if (k == "l2_residual") l2 = v;
            else if (k == "order") { has_order = true; order = v; }
        }
        out += format_g17(res) + "," + format_g17(sup) + "," + format_g17(l2) + ",";
        if (has_order) out += format_g17(order);
        out += "\n";
    }
    return out;
}

std::string plot_csv(const std::vector<CheckReport>& reports) {
    std::string out = "check,resolution,sample,residual,order,fd,quadform,lf2_integral\n";
    auto field = [](const DetailRow& row, const char* key, double& dst) {
        for (const auto& [k, v] : row.kv)
            if (k == key) {
                dst = v;
                return true;
            }
        return false;
    };
    for (const CheckReport& rep : reports) {
        for (const DetailRow& row : rep.detail) {
            double res = rep.resolutions.empty() ? 0.0 : double(rep.resolutions.back());
            field(row, "resolution", res);
            out += rep.check + "," + format_g17(res) + ",";
            double v = 0;
            out += field(row, "sample", v) ? format_g17(v) : "";
            out += ",";
            if (field(row, "sup_residual", v) || field(row, "sup", v) || field(row, "relative", v))
                out += format_g17(v);
            else
                out += format_g17(rep.sup_residual);
            out += ",";
            out += field(row, "order", v) ? format_g17(v) : "";
            out += ",";
            out += field(row, "fd", v) ? format_g17(v) : "";
            out += ",";
            out += field(row, "quadform", v) ? format_g17(v) : "";
            out += ",";
            out += field(row, "lf2_integral", v) ? format_g17(v) : "";
            out += "\n";
        }
    }
    return out;
}

void write_file(const std::string& path, const std::string& text, std::ostream& log) {
    if (std::filesystem::exists(path))
        log << "notice: overwriting " << path << "\n";
    std::ofstream os(path, std::ios::binary);
    if (!os) throw std::runtime_error("cannot open for writing: " + path);
    os << text;
}

} // namespace slab
