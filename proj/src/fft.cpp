#include "ifeq/fft.hpp"

#include <fftw3.h>

#include <bit>
#include <algorithm>
#include <cstring>
#include <memory>
#include <mutex>
#include <unordered_map>

#include "ifeq/errors.hpp"

namespace ifeq::fft {

namespace {

// The FFTW planner is not thread-safe; plan creation is serialized and the
// resulting plans (with their buffers) are cached per thread and size.
std::mutex planner_mutex;

struct PlanEntry {
    fftw_complex* buf = nullptr;
    fftw_plan fwd = nullptr;
    fftw_plan inv = nullptr;
    std::size_t n = 0;

    explicit PlanEntry(std::size_t size) : n(size) {
        std::lock_guard<std::mutex> lock(planner_mutex);
        buf = fftw_alloc_complex(size);
        fwd = fftw_plan_dft_1d(static_cast<int>(size), buf, buf, FFTW_FORWARD, FFTW_ESTIMATE);
        inv = fftw_plan_dft_1d(static_cast<int>(size), buf, buf, FFTW_BACKWARD, FFTW_ESTIMATE);
    }
    PlanEntry(const PlanEntry&) = delete;
    PlanEntry& operator=(const PlanEntry&) = delete;
    ~PlanEntry() {
        std::lock_guard<std::mutex> lock(planner_mutex);
        if (fwd) fftw_destroy_plan(fwd);
        if (inv) fftw_destroy_plan(inv);
        if (buf) fftw_free(buf);
    }
};

PlanEntry& plan_for(std::size_t n) {
    thread_local std::unordered_map<std::size_t, std::unique_ptr<PlanEntry>> cache;
    auto& slot = cache[n];
    if (!slot) slot = std::make_unique<PlanEntry>(n);
    return *slot;
}

std::vector<cplx> run(const std::vector<cplx>& x, bool forward_dir) {
    if (!std::has_single_bit(x.size())) throw InputDomainError("FFT size must be a power of two");
    PlanEntry& p = plan_for(x.size());
    // std::complex<double> is layout-compatible with fftw_complex
    static_assert(sizeof(fftw_complex) == sizeof(cplx));
    auto* buf = reinterpret_cast<cplx*>(p.buf);
    std::copy(x.begin(), x.end(), buf);
    fftw_execute(forward_dir ? p.fwd : p.inv);
    std::vector<cplx> out(buf, buf + x.size());
    if (!forward_dir) {
        const double scale = 1.0 / static_cast<double>(x.size());
        for (auto& v : out) v *= scale;
    }
    return out;
}

}  // namespace

std::vector<cplx> forward(const std::vector<cplx>& x) { return run(x, true); }
std::vector<cplx> inverse(const std::vector<cplx>& x) { return run(x, false); }

}  // namespace ifeq::fft
