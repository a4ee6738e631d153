#include "psfcdl/fft.hpp"

#include <fftw3.h>

#include <map>
#include <mutex>
#include <stdexcept>
#include <tuple>

namespace psfcdl {
namespace {

// Plans are cached per (rows, cols, sign). FFTW_UNALIGNED lets us execute the
// cached plan on whatever buffers Eigen hands us via the new-array interface.
class PlanCache {
 public:
  fftw_plan get(int rows, int cols, int sign) {
    std::lock_guard<std::mutex> lock(mutex_);
    auto key = std::make_tuple(rows, cols, sign);
    auto it = plans_.find(key);
    if (it != plans_.end()) return it->second;
    std::vector<fftw_complex> buf(static_cast<size_t>(rows) * cols);
    fftw_plan p = fftw_plan_dft_2d(rows, cols, buf.data(), buf.data(), sign,
                                   FFTW_ESTIMATE | FFTW_UNALIGNED);
    if (!p) throw std::runtime_error("fftw plan creation failed");
    plans_.emplace(key, p);
    return p;
  }

 private:
  std::mutex mutex_;
  std::map<std::tuple<int, int, int>, fftw_plan> plans_;
};

PlanCache& cache() {
  static PlanCache c;
  return c;
}

void execute(const ComplexGrid& in, ComplexGrid& out, int sign) {
  fftw_plan p = cache().get(static_cast<int>(in.rows()),
                            static_cast<int>(in.cols()), sign);
  auto* src = reinterpret_cast<fftw_complex*>(
      const_cast<std::complex<double>*>(in.data()));
  auto* dst = reinterpret_cast<fftw_complex*>(out.data());
  fftw_execute_dft(p, src, dst);
}

}  // namespace

ComplexGrid forward_dft(const ComplexGrid& x) {
  ComplexGrid out(x.rows(), x.cols());
  execute(x, out, FFTW_FORWARD);
  return out;
}

ComplexGrid forward_dft(const RealGrid& x) {
  ComplexGrid tmp = x.cast<std::complex<double>>();
  ComplexGrid out(x.rows(), x.cols());
  execute(tmp, out, FFTW_FORWARD);
  return out;
}

ComplexGrid inverse_dft(const ComplexGrid& spec) {
  ComplexGrid out(spec.rows(), spec.cols());
  execute(spec, out, FFTW_BACKWARD);
  out /= static_cast<double>(spec.size());
  return out;
}

RealGrid inverse_dft_real(const ComplexGrid& spec) {
  return inverse_dft(spec).real();
}

RealGrid circular_convolve(const RealGrid& x, const RealGrid& k) {
  if (x.rows() != k.rows() || x.cols() != k.cols())
    throw std::invalid_argument("circular_convolve: dimension mismatch");
  ComplexGrid prod = forward_dft(x) * forward_dft(k);
  return inverse_dft_real(prod);
}

ComplexGrid zero_dc(ComplexGrid spec) {
  spec(0, 0) = 0.0;
  return spec;
}

double weighted_fidelity(const RealGrid& residual) {
  double mean = residual.mean();
  return 0.5 * (residual - mean).square().sum();
}

}  // namespace psfcdl
