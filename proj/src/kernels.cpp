#include "slab/kernels.hpp"

#include <atomic>
#include <cstdlib>
#include <stdexcept>

namespace slab::kernels {
namespace {

std::atomic<const Ops*> g_active{nullptr};

const Ops* pick(Mode mode) {
    switch (mode) {
    case Mode::Scalar:
        return &scalar_ops();
    case Mode::Avx2: {
        const Ops* v = avx2_ops();
        if (!v) throw std::runtime_error("kernels: AVX2 requested but not available on this CPU");
        return v;
    }
    case Mode::Auto:
    default: {
        const Ops* v = avx2_ops();
        return v ? v : &scalar_ops();
    }
    }
}

const Ops* init_from_env() {
    Mode mode = Mode::Auto;
    if (const char* env = std::getenv("SOLITONLAB_KERNELS")) mode = parse_mode(env);
    return pick(mode);
}

} // namespace

Mode parse_mode(const std::string& name) {
    if (name == "scalar") return Mode::Scalar;
    if (name == "avx2") return Mode::Avx2;
    if (name == "auto" || name.empty()) return Mode::Auto;
    throw std::invalid_argument("kernels: unknown mode '" + name + "' (expected scalar|avx2|auto)");
}

const Ops& active() {
    const Ops* p = g_active.load(std::memory_order_acquire);
    if (!p) {
        p = init_from_env();
        g_active.store(p, std::memory_order_release);
    }
    return *p;
}

void select(Mode mode) { g_active.store(pick(mode), std::memory_order_release); }

} // namespace slab::kernels
