#include "dwol/fft.hpp"

#include <mutex>
#include <vector>

#include <fftw3.h>

#include "dwol/errors.hpp"

namespace dwol {

namespace {

// The FFTW planner is not thread-safe; execution of existing plans is.
std::mutex g_planner_mutex;

}  // namespace

Fft::Fft(const GridSpec& grid) : size_(grid.size()) {
    std::lock_guard lock(g_planner_mutex);
    std::vector<std::complex<double>> scratch(static_cast<std::size_t>(size_));
    auto* buf = reinterpret_cast<fftw_complex*>(scratch.data());
    const int dims[3] = {grid.n[2], grid.n[1], grid.n[0]};
    const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
    forward_ = fftw_plan_dft(3, dims, buf, buf, FFTW_FORWARD, flags);
    backward_ = fftw_plan_dft(3, dims, buf, buf, FFTW_BACKWARD, flags);
    if (!forward_ || !backward_) throw Error("FFTW planning failed");
}

Fft::~Fft() {
    std::lock_guard lock(g_planner_mutex);
    if (forward_) fftw_destroy_plan(static_cast<fftw_plan>(forward_));
    if (backward_) fftw_destroy_plan(static_cast<fftw_plan>(backward_));
}

void Fft::forward(Eigen::ArrayXcd& data) const {
    if (data.size() != size_) throw GridMismatch("transform size mismatch");
    auto* p = reinterpret_cast<fftw_complex*>(data.data());
    fftw_execute_dft(static_cast<fftw_plan>(forward_), p, p);
}

void Fft::backward(Eigen::ArrayXcd& data) const {
    if (data.size() != size_) throw GridMismatch("transform size mismatch");
    auto* p = reinterpret_cast<fftw_complex*>(data.data());
    fftw_execute_dft(static_cast<fftw_plan>(backward_), p, p);
    data /= static_cast<double>(size_);
}

}  // namespace dwol
