#pragma once

#include <cstdint>
#include <vector>

#include "psfcdl/driver.hpp"
#include "psfcdl/grid.hpp"

namespace psfcdl {

// Reciprocal of the degree-3 Taylor polynomial of exp(z): the analytic
// stellar profile, with z = r^2 / (2 sigma^2) supplied by the caller.
double pseudo_gaussian(double z);

// z at which pseudo_gaussian drops to 1/2; used to calibrate sigma from a
// requested FWHM.
double pseudo_gaussian_half_z();
double sigma_from_fwhm(double fwhm);

struct PsfComponent {
  double amplitude = 1.0;
  double dx = 0.0, dy = 0.0;     // centroid offset, px
  double sigma_major = 1.0;      // px
  double sigma_minor = 1.0;      // px
  double angle = 0.0;            // radians, major-axis direction
};

// Analytic reference PSF, normalized to unit total mass.
struct ReferencePsf {
  Shape shape = Shape::narrow;
  std::vector<PsfComponent> components;
  double norm = 1.0;        // applied multiplicatively
  double peak_value = 0.0;  // max of the normalized evaluator

  double evaluate(double x, double y) const;
};

ReferencePsf make_reference_psf(Shape shape);

struct SceneSpec {
  int width = 256, height = 256;
  int density = 10;             // pixels per star
  double background = 1000.0;   // counts
  double inverse_gain = 1.0;    // electrons per count
  double peak_min = 2.0e3;      // log-uniform peak-count range
  double peak_max = 5.0e4;      // 16-bit ceiling territory
  int oversample = 8;
  std::uint64_t seed = 0;
  bool noise = true;

  long star_count() const {
    return static_cast<long>(width) * height / density;
  }
};

struct Star {
  double x = 0.0, y = 0.0;  // px; x along columns, y along rows
  double flux = 0.0;        // total counts
};

struct GroundTruth {
  std::vector<Star> stars;
  Shape shape = Shape::narrow;
};

// Stars uniform over the tile, log-uniform peak counts, profiles box-averaged
// from an oversampled grid, constant background, optional Poisson noise,
// clipped to the 16-bit range.
std::pair<RealGrid, GroundTruth> render_scene(const SceneSpec& spec,
                                              Shape shape);

RealGrid add_poisson_noise(const RealGrid& x, double inverse_gain,
                           std::uint64_t seed);

}  // namespace psfcdl
