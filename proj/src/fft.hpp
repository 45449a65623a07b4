#pragma once

#include <complex>
#include <mutex>
#include <vector>

#include <fftw3.h>

namespace nasolv::detail {

// Unnormalised in-place DFT, sign -1 forward and +1 backward.
// FFTW planning is not thread-safe, execution is.
inline void dft(std::vector<std::complex<double>>& a, int sign) {
    static std::mutex planMutex;
    auto* data = reinterpret_cast<fftw_complex*>(a.data());
    fftw_plan p;
    {
        std::lock_guard<std::mutex> lock(planMutex);
        p = fftw_plan_dft_1d(static_cast<int>(a.size()), data, data, sign < 0 ? FFTW_FORWARD : FFTW_BACKWARD,
                             FFTW_ESTIMATE);
    }
    fftw_execute(p);
    std::lock_guard<std::mutex> lock(planMutex);
    fftw_destroy_plan(p);
}

// Angular frequency of DFT bin k on a grid with spacing h.
inline double dft_frequency(int k, int n, double h) {
    const int kk = k < n / 2 ? k : k - n;
    return 2.0 * 3.141592653589793238 * kk / (n * h);
}

}  // namespace nasolv::detail
