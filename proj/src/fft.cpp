#include "blosim/fft.hpp"

#include <fftw3.h>

#include <cstring>
#include <mutex>
#include <stdexcept>

namespace blosim::fft {

// FFTW's planner mutates global state; executions are thread-safe once a
// plan exists. FFTW_ESTIMATE keeps planning deterministic (no timing
// measurements feed back into the chosen algorithm). Plans own aligned
// scratch buffers; execute() copies through them.
namespace {
std::mutex planner_mutex;
}

struct RfftPlan::Impl {
    std::size_t n;
    double* in;
    fftw_complex* out;
    fftw_plan plan;
};

RfftPlan::RfftPlan(std::size_t n) : impl_(new Impl) {
    if (n == 0) throw std::invalid_argument("RfftPlan: size must be > 0");
    impl_->n = n;
    impl_->in = fftw_alloc_real(n);
    impl_->out = fftw_alloc_complex(n / 2 + 1);
    std::lock_guard<std::mutex> lock(planner_mutex);
    impl_->plan = fftw_plan_dft_r2c_1d(static_cast<int>(n), impl_->in, impl_->out,
                                       FFTW_ESTIMATE);
}

RfftPlan::~RfftPlan() {
    if (!impl_) return;
    std::lock_guard<std::mutex> lock(planner_mutex);
    fftw_destroy_plan(impl_->plan);
    fftw_free(impl_->in);
    fftw_free(impl_->out);
}

std::size_t RfftPlan::size() const { return impl_->n; }

void RfftPlan::execute(const double* in, std::complex<double>* out) const {
    std::memcpy(impl_->in, in, impl_->n * sizeof(double));
    fftw_execute(impl_->plan);
    // std::complex<double> is layout-compatible with double[2].
    std::memcpy(reinterpret_cast<double*>(out), impl_->out,
                (impl_->n / 2 + 1) * sizeof(fftw_complex));
}

struct IrfftPlan::Impl {
    std::size_t n;
    fftw_complex* in;
    double* out;
    fftw_plan plan;
};

IrfftPlan::IrfftPlan(std::size_t n) : impl_(new Impl) {
    if (n == 0 || n % 2 != 0)
        throw std::invalid_argument("IrfftPlan: size must be even and > 0");
    impl_->n = n;
    impl_->in = fftw_alloc_complex(n / 2 + 1);
    impl_->out = fftw_alloc_real(n);
    std::lock_guard<std::mutex> lock(planner_mutex);
    impl_->plan = fftw_plan_dft_c2r_1d(static_cast<int>(n), impl_->in, impl_->out,
                                       FFTW_ESTIMATE);
}

IrfftPlan::~IrfftPlan() {
    if (!impl_) return;
    std::lock_guard<std::mutex> lock(planner_mutex);
    fftw_destroy_plan(impl_->plan);
    fftw_free(impl_->in);
    fftw_free(impl_->out);
}

std::size_t IrfftPlan::size() const { return impl_->n; }

void IrfftPlan::execute(const std::complex<double>* in, double* out) const {
    std::memcpy(impl_->in, in, (impl_->n / 2 + 1) * sizeof(fftw_complex));
    fftw_execute(impl_->plan);
    std::memcpy(out, impl_->out, impl_->n * sizeof(double));
}

std::vector<std::complex<double>> rfft(const std::vector<double>& x) {
    RfftPlan plan(x.size());
    std::vector<std::complex<double>> out(x.size() / 2 + 1);
    plan.execute(x.data(), out.data());
    return out;
}

std::vector<double> irfft(const std::vector<std::complex<double>>& spectrum, std::size_t n) {
    if (spectrum.size() != n / 2 + 1)
        throw std::invalid_argument("irfft: spectrum must hold n/2+1 bins");
    IrfftPlan plan(n);
    std::vector<double> out(n);
    plan.execute(spectrum.data(), out.data());
    return out;
}

} // namespace blosim::fft
