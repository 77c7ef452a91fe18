#pragma once

#include <functional>
#include <iosfwd>
#include <vector>

#include "henon/complex_dynamics.hpp"

namespace henon {

// Axis order throughout: (Re x, Im x, Re y, Im y).
struct GridSpec {
  double lo[4] = {0, 0, 0, 0};
  double hi[4] = {0, 0, 0, 0};
  int n_per_axis = 16;
  double smoothing_eps = 0.25;

  double step(int axis) const { return (hi[axis] - lo[axis]) / n_per_axis; }
  double cell_volume() const;
  // node = cell center
  double coord(int axis, int index) const { return lo[axis] + (index + 0.5) * step(axis); }
  std::size_t node_count() const;
  void validate() const;
};

// Default box [-R-1, R+1]^4: the non-escaping locus sits inside it.
// eps <= 0 selects one grid cell of smoothing.
GridSpec default_grid(const ComplexHenon& h, int n_per_axis = 16, double eps = 0.0);

struct GreenField {
  GridSpec spec;
  std::vector<double> values;  // row-major over (i0,i1,i2,i3)

  std::size_t index(int i0, int i1, int i2, int i3) const;
  double at(int i0, int i1, int i2, int i3) const;
};

struct GridCell {
  C x, y;
  double weight = 0.0;
};

struct GridMeasure {
  std::vector<GridCell> cells;  // only positive-weight cells are stored
  double total_mass = 0.0;
  double clipped_mass = 0.0;  // discarded negative discrete density (abs)
  int resolution = 0;
  double eps = 0.0;
};

struct LyapunovResult {
  double lambda1 = 0.0;
  double lambda2 = 0.0;
  int n_steps = 0;
  double sum_residual = 0.0;  // |lambda1 + lambda2 - log|a||
};

// G = max(G+, G-) at every node, certified to spec.smoothing_eps / 10.
GreenField build_green_grid(const ComplexHenon& h, const GridSpec& spec, int threads = 0);

// As above for an arbitrary scalar field (calibration and tests).
GreenField sample_field(const GridSpec& spec, const std::function<double(C, C)>& g,
                        int threads = 0);

// Discrete Monge-Ampere of the field: mollified complex Hessian determinant
// times cell volume; negative densities are clipped and accounted. The raw
// variant is uncalibrated (convergence diagnostics); ma_measure applies one
// global constant fixed so the toric model log+ max{|x|,|y|} has total mass 1
// on a fine reference grid.
GridMeasure ma_measure_raw(const GreenField& field, int threads = 0);
GridMeasure ma_measure(const GreenField& field, int threads = 0);

double integrate(const GridMeasure& m, const std::function<double(C, C)>& f);

// QR-accumulated Lyapunov exponents along the orbit of `start`. When
// reset_every > 0 the base point is re-pinned to `start` every that many
// steps (periodic-orbit mode; avoids numeric escape from a saddle).
LyapunovResult lyapunov_qr(const ComplexHenon& h, C x0, C y0, int n_steps,
                           double bailout = 0.0, int reset_every = 0);

// mu-average of (1/n) log ||DH^n|| over the grid measure.
double lyapunov_measure_avg(const ComplexHenon& h, const GridMeasure& m, int n_horizon,
                            int threads = 0);

// Fixed points x of p(x) - (1+a)x = 0, as (x, x) in the plane.
std::vector<C> fixed_points(const ComplexHenon& h);

void write_measure_csv(const GridMeasure& m, std::ostream& os);
void write_measure_summary_json(const GridMeasure& m, std::ostream& os);

}  // namespace henon
