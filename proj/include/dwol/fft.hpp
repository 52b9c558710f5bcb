#pragma once

#include <Eigen/Core>

#include "dwol/grid.hpp"

namespace dwol {

// In-place 3D complex transform on a grid (x fastest). backward() includes the 1/N factor.
class Fft {
public:
    explicit Fft(const GridSpec& grid);
    ~Fft();
    Fft(const Fft&) = delete;
    Fft& operator=(const Fft&) = delete;

    void forward(Eigen::ArrayXcd& data) const;
    void backward(Eigen::ArrayXcd& data) const;

private:
    void* forward_ = nullptr;
    void* backward_ = nullptr;
    Eigen::Index size_ = 0;
};

}  // namespace dwol
