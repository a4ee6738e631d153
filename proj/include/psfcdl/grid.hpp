#pragma once

#include <complex>
#include <Eigen/Dense>

namespace psfcdl {

// Row-major throughout: matches the on-disk sample order and FFTW's layout.
using RealGrid =
    Eigen::Array<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using ComplexGrid =
    Eigen::Array<std::complex<double>, Eigen::Dynamic, Eigen::Dynamic,
                 Eigen::RowMajor>;

inline bool all_finite(const RealGrid& x) { return x.isFinite().all(); }

}  // namespace psfcdl
