#include "slab/catalog.hpp"

#include <cmath>
#include <cstdio>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "slab/blockops.hpp"

namespace slab {

namespace {

struct CurveFactor {
    bool reaper = false;
    double speed = 1.0;
};

// Product of planar curves, one per complex line: flat factors map to
// (u, 0), grim reaper factors to (u, -(1/c) log cos(c u)).
class ProductCurveChart final : public Chart {
public:
    explicit ProductCurveChart(std::vector<CurveFactor> factors)
        : factors_(std::move(factors)), n_(static_cast<int>(factors_.size())) {}

    int domain_dim() const override { return n_; }
    int ambient_dim() const override { return 2 * n_; }
    bool has_jets() const override { return true; }

    void position(const double* u, double* x) const override {
        for (int k = 0; k < n_; ++k) {
            x[2 * k] = u[k];
            x[2 * k + 1] = 0.0;
            if (factors_[k].reaper) {
                const double c = factors_[k].speed;
                x[2 * k + 1] = -std::log(std::cos(c * u[k])) / c;
            }
        }
    }

    void jets(const double* u, double* x, double* d1, double* d2, double* d3) const override {
        const int N = 2 * n_;
        const int s2 = sym2_count(n_), s3 = sym3_count(n_);
        for (int k = 0; k < N; ++k) x[k] = 0.0;
        for (int k = 0; k < n_ * N; ++k) d1[k] = 0.0;
        for (int k = 0; k < s2 * N; ++k) d2[k] = 0.0;
        for (int k = 0; k < s3 * N; ++k) d3[k] = 0.0;
        for (int k = 0; k < n_; ++k) {
            x[2 * k] = u[k];
            d1[k * N + 2 * k] = 1.0;
            if (!factors_[k].reaper) continue;
            const double c = factors_[k].speed;
            const double tn = std::tan(c * u[k]);
            const double sc = 1.0 / std::cos(c * u[k]);
            x[2 * k + 1] = -std::log(std::cos(c * u[k])) / c;
            d1[k * N + 2 * k + 1] = tn;
            d2[sym2_index(k, k) * N + 2 * k + 1] = c * sc * sc;
            d3[sym3_index(k, k, k) * N + 2 * k + 1] = 2.0 * c * c * sc * sc * tn;
        }
    }

private:
    std::vector<CurveFactor> factors_;
    int n_;
};

ParameterGrid grid_for(const std::vector<std::array<double, 2>>& window, int resolution,
                       Backend backend) {
    return ParameterGrid(window, std::vector<int>(window.size(), resolution),
                         backend == Backend::FiniteDifference ? 2 : 0);
}

ImmersedPatch build_product(const std::vector<CurveFactor>& factors,
                            const std::vector<std::array<double, 2>>& window,
                            const std::vector<double>& translation, int resolution,
                            Backend backend) {
    const int n = static_cast<int>(factors.size());
    for (int k = 0; k < n; ++k) {
        if (!factors[k].reaper) continue;
        const double lim = std::numbers::pi / (2.0 * factors[k].speed);
        if (!(window[k][0] > -lim && window[k][1] < lim)) {
            std::ostringstream os;
            os << "catalog: axis " << k << " window [" << window[k][0] << ", " << window[k][1]
               << "] must lie strictly inside (-" << lim << ", " << lim << ")";
            throw std::invalid_argument(os.str());
        }
    }
    ProductCurveChart chart(factors);
    AmbientStructure ambient(2 * n, translation, true);
    return build_patch(chart, grid_for(window, resolution, backend), std::move(ambient), backend,
                       /*lagrangian=*/true);
}

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

} // namespace

const std::vector<std::string>& catalog_names() {
    static const std::vector<std::string> names{"flat-plane", "grim-reaper-cylinder",
                                                "grim-reaper-product"};
    return names;
}

std::vector<std::array<double, 2>> SolitonSpec::effective_window() const {
    if (!window.empty()) return window;
    std::vector<std::array<double, 2>> w(n);
    for (int k = 0; k < n; ++k) {
        if (name == "grim-reaper-product" || (name == "grim-reaper-cylinder" && k == 0)) {
            const double c = name == "grim-reaper-product" ? speeds.at(k) : 1.0;
            const double lim = 0.8 * std::numbers::pi / (2.0 * c);
            w[k] = {-lim, lim};
        } else {
            w[k] = {0.0, 1.0};
        }
    }
    return w;
}

std::vector<double> SolitonSpec::effective_translation() const {
    std::vector<double> t(2 * n, 0.0);
    if (name == "flat-plane") {
        if (!translation.empty()) return translation;
        t[0] = 1.0;
        return t;
    }
    if (name == "grim-reaper-cylinder") {
        t[1] = 1.0;
        return t;
    }
    for (int k = 0; k < n; ++k) t[2 * k + 1] = speeds.at(k);
    return t;
}

std::string SolitonSpec::to_kv() const {
    std::ostringstream os;
    os << "name=" << name << " n=" << n;
    if (name == "grim-reaper-product") {
        os << " speeds=";
        for (int k = 0; k < n; ++k) os << (k ? "," : "") << format_double(speeds.at(k));
    }
    os << " window=";
    const auto w = effective_window();
    for (int k = 0; k < n; ++k)
        os << (k ? "," : "") << format_double(w[k][0]) << ":" << format_double(w[k][1]);
    os << " res=" << resolution;
    if (name == "flat-plane") {
        os << " t=";
        const auto t = effective_translation();
        for (std::size_t k = 0; k < t.size(); ++k) os << (k ? "," : "") << format_double(t[k]);
    }
    return os.str();
}

SolitonSpec SolitonSpec::from_kv(const std::string& text) {
    SolitonSpec spec;
    spec.window.clear();
    std::istringstream is(text);
    std::string token;
    auto parse_list = [](const std::string& s) {
        std::vector<double> out;
        std::istringstream ls(s);
        std::string item;
        while (std::getline(ls, item, ',')) out.push_back(std::stod(item));
        return out;
    };
    bool saw_name = false;
    while (is >> token) {
        const auto eq = token.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument("soliton spec: expected key=value, got '" + token + "'");
        const std::string key = token.substr(0, eq);
        const std::string val = token.substr(eq + 1);
        if (key == "name") {
            spec.name = val;
            saw_name = true;
        } else if (key == "n") {
            spec.n = std::stoi(val);
        } else if (key == "speeds") {
            spec.speeds = parse_list(val);
        } else if (key == "res") {
            spec.resolution = std::stoi(val);
        } else if (key == "t") {
            spec.translation = parse_list(val);
        } else if (key == "window") {
            std::istringstream ws(val);
            std::string axis;
            while (std::getline(ws, axis, ',')) {
                const auto colon = axis.find(':');
                if (colon == std::string::npos)
                    throw std::invalid_argument("soliton spec: window axis needs a:b");
                spec.window.push_back(
                    {std::stod(axis.substr(0, colon)), std::stod(axis.substr(colon + 1))});
            }
        } else {
            throw std::invalid_argument("soliton spec: unknown key '" + key + "'");
        }
    }
    if (!saw_name) throw std::invalid_argument("soliton spec: missing name");
    bool known = false;
    for (const auto& nm : catalog_names()) known = known || nm == spec.name;
    if (!known) {
        std::string msg = "unknown soliton '" + spec.name + "'; available:";
        for (const auto& nm : catalog_names()) msg += " " + nm;
        throw std::invalid_argument(msg);
    }
    return spec;
}

ImmersedPatch make_flat_plane(int n, const std::vector<double>& translation,
                              const std::vector<std::array<double, 2>>& window, int resolution,
                              Backend backend) {
    if (static_cast<int>(translation.size()) != 2 * n)
        throw std::invalid_argument("flat plane: translation vector must have dimension 2n");
    double norm = 0.0;
    for (int k = 0; k < n; ++k) {
        if (translation[2 * k + 1] != 0.0)
            throw std::invalid_argument(
                "flat plane: T has a normal component, the plane would not be a soliton");
        norm += translation[2 * k] * translation[2 * k];
    }
    if (norm == 0.0) throw std::invalid_argument("flat plane: T must be nonzero");
    std::vector<CurveFactor> factors(n);
    return build_product(factors, window, translation, resolution, backend);
}

ImmersedPatch make_grim_reaper_cylinder(int n, const std::vector<std::array<double, 2>>& window,
                                        int resolution, Backend backend) {
    std::vector<CurveFactor> factors(n);
    factors[0] = CurveFactor{true, 1.0};
    std::vector<double> t(2 * n, 0.0);
    t[1] = 1.0;
    return build_product(factors, window, t, resolution, backend);
}

ImmersedPatch make_grim_reaper_product(const std::vector<double>& speeds,
                                       const std::vector<std::array<double, 2>>& window,
                                       int resolution, Backend backend) {
    const int n = static_cast<int>(speeds.size());
    std::vector<CurveFactor> factors(n);
    std::vector<double> t(2 * n, 0.0);
    for (int k = 0; k < n; ++k) {
        if (!(speeds[k] > 0.0))
            throw std::invalid_argument("grim reaper product: speeds must be positive");
        factors[k] = CurveFactor{true, speeds[k]};
        t[2 * k + 1] = speeds[k];
    }
    return build_product(factors, window, t, resolution, backend);
}

ImmersedPatch make_patch(const SolitonSpec& spec, Backend backend) {
    if (spec.n < 1 || spec.n > kMaxDim)
        throw std::invalid_argument("soliton spec: n must be 1.." + std::to_string(kMaxDim));
    const auto window = spec.effective_window();
    if (static_cast<int>(window.size()) != spec.n)
        throw std::invalid_argument("soliton spec: window does not match dimension");
    if (spec.name == "flat-plane")
        return make_flat_plane(spec.n, spec.effective_translation(), window, spec.resolution,
                               backend);
    if (spec.name == "grim-reaper-cylinder")
        return make_grim_reaper_cylinder(spec.n, window, spec.resolution, backend);
    if (spec.name == "grim-reaper-product") {
        if (static_cast<int>(spec.speeds.size()) != spec.n)
            throw std::invalid_argument("grim reaper product: needs one speed per axis");
        return make_grim_reaper_product(spec.speeds, window, spec.resolution, backend);
    }
    std::string msg = "unknown soliton '" + spec.name + "'; available:";
    for (const auto& nm : catalog_names()) msg += " " + nm;
    throw std::invalid_argument(msg);
}

ResidualNorms soliton_residual(const ImmersedPatch& patch, const MetricData& metric,
                               const SffData& sff, const std::vector<double>& T,
                               const WeightedMeasure& measure) {
    const int N = patch.amb();
    std::vector<NodeArray> tblock(N);
    for (int A = 0; A < N; ++A) tblock[A].assign(patch.grid.node_count(), T[A]);
    SplitField split = project(patch, metric, tblock);
    std::vector<NodeArray> resid(N, zeros(patch.grid));
    const Region r = patch.grid.interior();
    for (int A = 0; A < N; ++A) bk::sub(r, resid[A], sff.mean[A], split.normal[A]);
    return block_norms(patch, measure, resid);
}

double closed_form_f(const SolitonSpec& spec,
                     const std::vector<std::array<double, 2>>& window) {
    const auto t = spec.effective_translation();
    double value = 1.0;
    for (int k = 0; k < spec.n; ++k) {
        const double a = window[k][0], b = window[k][1];
        const bool reaper =
            spec.name == "grim-reaper-product" || (spec.name == "grim-reaper-cylinder" && k == 0);
        if (reaper) {
            const double c = spec.name == "grim-reaper-product" ? spec.speeds.at(k) : 1.0;
            value *= (std::tan(c * b) - std::tan(c * a)) / c;
        } else {
            const double drift = t[2 * k];
            value *= drift == 0.0 ? b - a : (std::exp(drift * b) - std::exp(drift * a)) / drift;
        }
    }
    return value;
}

} // namespace slab
