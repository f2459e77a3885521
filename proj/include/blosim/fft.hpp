#ifndef BLOSIM_FFT_HPP
#define BLOSIM_FFT_HPP

#include <complex>
#include <cstddef>
#include <memory>
#include <vector>

namespace blosim::fft {

/// Reusable forward real-to-complex DFT plan, unnormalized (FFTW
/// convention): X[k] = sum_n x[n] exp(-2*pi*i*k*n/N), k = 0..N/2.
class RfftPlan {
public:
    explicit RfftPlan(std::size_t n);
    ~RfftPlan();
    RfftPlan(const RfftPlan&) = delete;
    RfftPlan& operator=(const RfftPlan&) = delete;

    std::size_t size() const;
    /// `in` must hold size() reals; `out` receives size()/2+1 bins.
    void execute(const double* in, std::complex<double>* out) const;

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

/// Reusable inverse complex-to-real DFT plan, unnormalized:
/// x[n] = sum over the Hermitian extension of X[k] exp(+2*pi*i*k*n/N).
class IrfftPlan {
public:
    explicit IrfftPlan(std::size_t n); // n even
    ~IrfftPlan();
    IrfftPlan(const IrfftPlan&) = delete;
    IrfftPlan& operator=(const IrfftPlan&) = delete;

    std::size_t size() const;
    /// `in` must hold size()/2+1 bins; `out` receives size() reals.
    void execute(const std::complex<double>* in, double* out) const;

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

std::vector<std::complex<double>> rfft(const std::vector<double>& x);
std::vector<double> irfft(const std::vector<std::complex<double>>& spectrum, std::size_t n);

} // namespace blosim::fft

#endif
