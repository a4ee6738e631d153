#include "psfcdl/sparse_coder.hpp"

#include <cmath>
#include <stdexcept>

#include "psfcdl/prox.hpp"

namespace psfcdl {

CoefficientMaps CoefficientMaps::zeros(int offsets_per_axis,
                                       Eigen::Index rows, Eigen::Index cols) {
  CoefficientMaps c;
  c.offsets_per_axis = offsets_per_axis;
  c.maps.assign(static_cast<size_t>(offsets_per_axis) * offsets_per_axis,
                RealGrid::Zero(rows, cols));
  return c;
}

double CoefficientMaps::abs_sum() const {
  double s = 0.0;
  for (const auto& m : maps) s += m.abs().sum();
  return s;
}

double CoefficientMaps::sq_norm() const {
  double s = 0.0;
  for (const auto& m : maps) s += m.square().sum();
  return s;
}

AdmmState AdmmState::zeros(int offsets_per_axis, Eigen::Index rows,
                           Eigen::Index cols, double rho) {
  AdmmState st;
  st.primary = CoefficientMaps::zeros(offsets_per_axis, rows, cols);
  st.auxiliary = CoefficientMaps::zeros(offsets_per_axis, rows, cols);
  st.dual = CoefficientMaps::zeros(offsets_per_axis, rows, cols);
  st.rho = rho;
  return st;
}

CoefficientMaps csc_x_step(const AdmmState& state,
                           const std::vector<ComplexGrid>& dict_spectra,
                           const ComplexGrid& s_spectrum) {
  if (state.rho <= 0.0) throw std::invalid_argument("csc_x_step: rho <= 0");
  const size_t nfilt = dict_spectra.size();
  if (nfilt == 0) throw std::invalid_argument("csc_x_step: empty dictionary");
  const Eigen::Index rows = s_spectrum.rows(), cols = s_spectrum.cols();
  const double rho = state.rho;

  // Spectra of the anchor u - v, per map.
  std::vector<ComplexGrid> rhat(nfilt);
  for (size_t m = 0; m < nfilt; ++m)
    rhat[m] = forward_dft(
        RealGrid(state.auxiliary.maps[m] - state.dual.maps[m]));

  // Per bin: (conj(d) d^T + rho I) x = conj(d) shat + rho rhat, with d the
  // filter responses at that bin. Rank-one inverse:
  //   x = b/rho - conj(d) (d^T b) / (rho (rho + ||d||^2)).
  std::vector<ComplexGrid> xhat(nfilt, ComplexGrid(rows, cols));
  ComplexGrid dtb = ComplexGrid::Zero(rows, cols);  // d^T b
  RealGrid dsq = RealGrid::Zero(rows, cols);        // ||d||^2
  for (size_t m = 0; m < nfilt; ++m) {
    const ComplexGrid& d = dict_spectra[m];
    ComplexGrid b = d.conjugate() * s_spectrum + rho * rhat[m];
    dtb += d * b;
    dsq += d.abs2();
    xhat[m] = std::move(b);
  }
  ComplexGrid factor = dtb / (rho * (rho + dsq)).cast<std::complex<double>>();
  CoefficientMaps out;
  out.offsets_per_axis = state.primary.offsets_per_axis;
  out.maps.resize(nfilt);
  for (size_t m = 0; m < nfilt; ++m) {
    xhat[m] = xhat[m] / rho - dict_spectra[m].conjugate() * factor;
    out.maps[m] = inverse_dft_real(xhat[m]);
  }
  return out;
}

void admm_iterate(AdmmState& state,
                  const std::vector<ComplexGrid>& dict_spectra,
                  const ComplexGrid& s_spectrum, double lambda_a,
                  bool nonneg) {
  state.primary = csc_x_step(state, dict_spectra, s_spectrum);

  const double t = lambda_a / state.rho;
  double primal_sq = 0.0, dual_sq = 0.0;
  double x_sq = 0.0, u_sq = 0.0, v_sq = 0.0;
  for (size_t m = 0; m < state.primary.maps.size(); ++m) {
    const RealGrid& x = state.primary.maps[m];
    RealGrid& u = state.auxiliary.maps[m];
    RealGrid& v = state.dual.maps[m];

    RealGrid u_prev = u;
    RealGrid arg = x + v;
    if (nonneg) arg = arg.max(0.0);
    Eigen::Map<const Eigen::ArrayXd> flat(arg.data(), arg.size());
    Eigen::ArrayXd proxed = prox_l1_minus_l2(flat, t);
    u = Eigen::Map<const RealGrid>(proxed.data(), arg.rows(), arg.cols());
    v += x - u;

    primal_sq += (x - u).square().sum();
    dual_sq += (u - u_prev).square().sum();
    x_sq += x.square().sum();
    u_sq += u.square().sum();
    v_sq += v.square().sum();
  }
  const double eps = 1e-30;
  state.primal_residual =
      std::sqrt(primal_sq) / (std::sqrt(std::max(x_sq, u_sq)) + eps);
  state.dual_residual =
      state.rho * std::sqrt(dual_sq) /
      (state.rho * std::sqrt(v_sq) + eps);
}

CoefficientMaps csc_solve(const RealGrid& s,
                          const std::vector<RealGrid>& dict_filters,
                          double lambda_a, double rho_a, int max_iter,
                          double tol, bool nonneg) {
  const int nfilt = static_cast<int>(dict_filters.size());
  const int per_axis = static_cast<int>(std::lround(std::sqrt(nfilt)));
  std::vector<ComplexGrid> dict_spectra;
  dict_spectra.reserve(dict_filters.size());
  for (const auto& f : dict_filters) dict_spectra.push_back(zero_dc(forward_dft(f)));
  ComplexGrid shat = zero_dc(forward_dft(s));

  AdmmState state = AdmmState::zeros(per_axis, s.rows(), s.cols(), rho_a);
  for (int it = 0; it < max_iter; ++it) {
    admm_iterate(state, dict_spectra, shat, lambda_a, nonneg);
    if (!std::isfinite(state.auxiliary.sq_norm()))
      throw std::runtime_error("csc_solve: non-finite iterate");
    if (state.primal_residual <= tol && state.dual_residual <= tol) break;
  }
  return state.auxiliary;
}

}  // namespace psfcdl
