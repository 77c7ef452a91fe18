#include "henon/measure.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <mutex>
#include <numbers>
#include <ostream>

#include "henon/parallel.hpp"

namespace henon {

namespace {
int g_threads = 0;
}

int default_thread_count() {
  if (g_threads > 0) return g_threads;
  const unsigned hw = std::thread::hardware_concurrency();
  return hw > 0 ? static_cast<int>(hw) : 1;
}

void set_default_thread_count(int n) { g_threads = n; }

double GridSpec::cell_volume() const {
  return step(0) * step(1) * step(2) * step(3);
}

std::size_t GridSpec::node_count() const {
  const auto n = static_cast<std::size_t>(n_per_axis);
  return n * n * n * n;
}

void GridSpec::validate() const {
  if (n_per_axis < 8) throw InvalidRadius("grid needs at least 8 nodes per axis");
  if (!(smoothing_eps > 0.0)) throw InvalidRadius("smoothing width must be positive");
  for (int a = 0; a < 4; ++a)
    if (!(hi[a] > lo[a])) throw InvalidRadius("empty grid box");
}

GridSpec default_grid(const ComplexHenon& h, int n_per_axis, double eps) {
  GridSpec s;
  const double b = h.R + 1.0;
  for (int a = 0; a < 4; ++a) {
    s.lo[a] = -b;
    s.hi[a] = b;
  }
  s.n_per_axis = n_per_axis;
  s.smoothing_eps = eps > 0.0 ? eps : s.step(0);
  return s;
}

std::size_t GreenField::index(int i0, int i1, int i2, int i3) const {
  const auto n = static_cast<std::size_t>(spec.n_per_axis);
  return ((static_cast<std::size_t>(i0) * n + i1) * n + i2) * n + i3;
}

double GreenField::at(int i0, int i1, int i2, int i3) const {
  return values[index(i0, i1, i2, i3)];
}

GreenField sample_field(const GridSpec& spec, const std::function<double(C, C)>& g,
                        int threads) {
  spec.validate();
  GreenField f;
  f.spec = spec;
  f.values.assign(spec.node_count(), 0.0);
  const int n = spec.n_per_axis;
  parallel_for(static_cast<std::size_t>(n) * n, [&](std::size_t slab) {
    const int i0 = static_cast<int>(slab) / n;
    const int i1 = static_cast<int>(slab) % n;
    for (int i2 = 0; i2 < n; ++i2)
      for (int i3 = 0; i3 < n; ++i3) {
        const C x(spec.coord(0, i0), spec.coord(1, i1));
        const C y(spec.coord(2, i2), spec.coord(3, i3));
        f.values[f.index(i0, i1, i2, i3)] = g(x, y);
      }
  }, threads);
  return f;
}

GreenField build_green_grid(const ComplexHenon& h, const GridSpec& spec, int threads) {
  const double eps = spec.smoothing_eps / 10.0;
  return sample_field(spec, [&](C x, C y) { return green_max(h, x, y, eps).value; },
                      threads);
}

namespace {

// nodes distorted by the edge-replicating mollifier along one axis
int mollify_radius(const GridSpec& g, int axis) {
  const double sigma = g.smoothing_eps / g.step(axis);
  return std::max(1, static_cast<int>(std::ceil(2.0 * sigma)));
}

// separable Gaussian smoothing, width eps in box units, edge-replicated
void mollify(GreenField& f) {
  const int n = f.spec.n_per_axis;
  for (int axis = 0; axis < 4; ++axis) {
    const double sigma = f.spec.smoothing_eps / f.spec.step(axis);
    const int rad = mollify_radius(f.spec, axis);
    std::vector<double> k(static_cast<size_t>(2 * rad + 1));
    double sum = 0.0;
    for (int j = -rad; j <= rad; ++j) {
      k[static_cast<size_t>(j + rad)] = std::exp(-0.5 * (j * j) / (sigma * sigma));
      sum += k[static_cast<size_t>(j + rad)];
    }
    for (auto& v : k) v /= sum;

    std::vector<double> out(f.values.size());
    const std::size_t stride = [&] {
      std::size_t s = 1;
      for (int a = 3; a > axis; --a) s *= static_cast<std::size_t>(n);
      return s;
    }();
    parallel_for(f.values.size(), [&](std::size_t idx) {
      const int pos = static_cast<int>((idx / stride) % static_cast<std::size_t>(n));
      double acc = 0.0;
      for (int j = -rad; j <= rad; ++j) {
        const int q = std::clamp(pos + j, 0, n - 1);
        acc += k[static_cast<size_t>(j + rad)] *
               f.values[idx + (static_cast<std::size_t>(q) - pos) * stride];
      }
      out[idx] = acc;
    });
    f.values.swap(out);
  }
}

}  // namespace

GridMeasure ma_measure_raw(const GreenField& field, int threads) {
  for (const double v : field.values)
    if (!std::isfinite(v)) throw NonFiniteField("grid field has a non-finite node");

  GreenField s = field;
  mollify(s);

  const GridSpec& g = s.spec;
  const int n = g.n_per_axis;
  const double h0 = g.step(0), h1 = g.step(1), h2 = g.step(2), h3 = g.step(3);
  const double vol = g.cell_volume();
  const double cal = 8.0 / (std::numbers::pi * std::numbers::pi);

  // skip everything the edge-replicated smoothing touched, plus the stencil;
  // on very coarse grids keep at least a few interior nodes per axis and
  // accept the residual edge bias
  int mg[4];
  for (int a = 0; a < 4; ++a)
    mg[a] = std::min(mollify_radius(g, a) + 1, std::max(1, (n - 3) / 2));

  std::vector<double> dens(s.values.size(), 0.0);
  parallel_for(static_cast<std::size_t>(n) * n, [&](std::size_t slab) {
    const int i0 = static_cast<int>(slab) / n;
    const int i1 = static_cast<int>(slab) % n;
    if (i0 < mg[0] || i0 >= n - mg[0] || i1 < mg[1] || i1 >= n - mg[1]) return;
    for (int i2 = mg[2]; i2 < n - mg[2]; ++i2)
      for (int i3 = mg[3]; i3 < n - mg[3]; ++i3) {
        const auto v = [&](int a, int b, int c, int d) {
          return s.at(i0 + a, i1 + b, i2 + c, i3 + d);
        };
        const double c0 = v(0, 0, 0, 0);
        const double gxx = (v(1, 0, 0, 0) - 2 * c0 + v(-1, 0, 0, 0)) / (h0 * h0) +
                           (v(0, 1, 0, 0) - 2 * c0 + v(0, -1, 0, 0)) / (h1 * h1);
        const double gyy = (v(0, 0, 1, 0) - 2 * c0 + v(0, 0, -1, 0)) / (h2 * h2) +
                           (v(0, 0, 0, 1) - 2 * c0 + v(0, 0, 0, -1)) / (h3 * h3);
        const auto cross = [&](int a, int b) {
          int da[4] = {0, 0, 0, 0}, db[4] = {0, 0, 0, 0};
          da[a] = 1;
          db[b] = 1;
          return (s.at(i0 + da[0] + db[0], i1 + da[1] + db[1], i2 + da[2] + db[2],
                       i3 + da[3] + db[3]) -
                  s.at(i0 + da[0] - db[0], i1 + da[1] - db[1], i2 + da[2] - db[2],
                       i3 + da[3] - db[3]) -
                  s.at(i0 - da[0] + db[0], i1 - da[1] + db[1], i2 - da[2] + db[2],
                       i3 - da[3] + db[3]) +
                  s.at(i0 - da[0] - db[0], i1 - da[1] - db[1], i2 - da[2] - db[2],
                       i3 - da[3] - db[3])) /
                 (4.0 * g.step(a) * g.step(b));
        };
        // complex Hessian: H11 = dd/dz1 dz1bar etc., z1 = axis(0,1), z2 = axis(2,3)
        const double H11 = 0.25 * gxx;
        const double H22 = 0.25 * gyy;
        const double re12 = 0.25 * (cross(0, 2) + cross(1, 3));
        const double im12 = 0.25 * (cross(0, 3) - cross(1, 2));
        dens[s.index(i0, i1, i2, i3)] = H11 * H22 - (re12 * re12 + im12 * im12);
      }
  }, threads);

  GridMeasure m;
  m.resolution = n;
  m.eps = g.smoothing_eps;
  for (int i0 = 0; i0 < n; ++i0)
    for (int i1 = 0; i1 < n; ++i1)
      for (int i2 = 0; i2 < n; ++i2)
        for (int i3 = 0; i3 < n; ++i3) {
          const double d = dens[s.index(i0, i1, i2, i3)];
          const double w = cal * d * vol;
          if (w > 0.0) {
            m.cells.push_back({C(g.coord(0, i0), g.coord(1, i1)),
                               C(g.coord(2, i2), g.coord(3, i3)), w});
            m.total_mass += w;
          } else {
            m.clipped_mass += -w;
          }
        }
  return m;
}

namespace {

// One global constant, fixed once against the toric model log+ max{|x|,|y|}
// whose Monge-Ampere measure is the unit-torus probability measure: the
// reference grid is chosen fine enough that the raw estimate is near 1, and
// the factor removes the residual smoothing loss of the discrete operator.
double toric_factor(int threads) {
  static std::once_flag once;
  static double factor = 1.0;
  std::call_once(once, [threads] {
    GridSpec ref;
    for (int a = 0; a < 4; ++a) {
      ref.lo[a] = -3.0;
      ref.hi[a] = 3.0;
    }
    ref.n_per_axis = 36;
    ref.smoothing_eps = 0.3;
    const GreenField f = sample_field(
        ref, [](C x, C y) { return std::log(std::max({std::abs(x), std::abs(y), 1.0})); },
        threads);
    const double mass = ma_measure_raw(f, threads).total_mass;
    if (!(mass > 0.0)) throw NonFiniteField("degenerate toric calibration mass");
    factor = 1.0 / mass;
  });
  return factor;
}

}  // namespace

GridMeasure ma_measure(const GreenField& field, int threads) {
  GridMeasure m = ma_measure_raw(field, threads);
  const double k = toric_factor(threads);
  for (auto& c : m.cells) c.weight *= k;
  m.total_mass *= k;
  m.clipped_mass *= k;
  return m;
}

double integrate(const GridMeasure& m, const std::function<double(C, C)>& f) {
  double acc = 0.0;
  for (const auto& c : m.cells) acc += f(c.x, c.y) * c.weight;
  return m.total_mass > 0.0 ? acc / m.total_mass : 0.0;
}

namespace {

struct Mat2 {
  C a, b, c, d;  // row-major
};

Mat2 dh_at(const ComplexHenon& h, C x) { return {h.dp(x), -h.a, C(1.0, 0.0), C(0.0, 0.0)}; }

Mat2 mul(const Mat2& m, const Mat2& n) {
  return {m.a * n.a + m.b * n.c, m.a * n.b + m.b * n.d, m.c * n.a + m.d * n.c,
          m.c * n.b + m.d * n.d};
}

double spectral_norm(const Mat2& m) {
  const double f2 = std::norm(m.a) + std::norm(m.b) + std::norm(m.c) + std::norm(m.d);
  const double det2 = std::norm(m.a * m.d - m.b * m.c);
  const double disc = std::max(0.0, f2 * f2 - 4.0 * det2);
  return std::sqrt(0.5 * (f2 + std::sqrt(disc)));
}

}  // namespace

LyapunovResult lyapunov_qr(const ComplexHenon& h, C x0, C y0, int n_steps, double bailout,
                           int reset_every) {
  if (bailout <= 0.0) bailout = std::max(1e8, 10.0 * h.R);
  C x = x0, y = y0;
  // orthonormal frame columns (u, v)
  C u1(1.0, 0.0), u2(0.0, 0.0), v1(0.0, 0.0), v2(1.0, 0.0);
  double s1 = 0.0, s2 = 0.0;
  for (int k = 0; k < n_steps; ++k) {
    const Mat2 dh = dh_at(h, x);
    const C w1 = dh.a * u1 + dh.b * u2, w2 = dh.c * u1 + dh.d * u2;
    const C z1 = dh.a * v1 + dh.b * v2, z2 = dh.c * v1 + dh.d * v2;
    const double r11 = std::sqrt(std::norm(w1) + std::norm(w2));
    u1 = w1 / r11;
    u2 = w2 / r11;
    const C proj = std::conj(u1) * z1 + std::conj(u2) * z2;
    C p1 = z1 - proj * u1, p2 = z2 - proj * u2;
    const double r22 = std::sqrt(std::norm(p1) + std::norm(p2));
    v1 = p1 / r22;
    v2 = p2 / r22;
    s1 += std::log(r11);
    s2 += std::log(r22);

    const auto [nx, ny] = h.apply(x, y);
    x = nx;
    y = ny;
    if (std::max(std::abs(x), std::abs(y)) > bailout) throw OrbitEscaped(k + 1);
    if (reset_every > 0 && (k + 1) % reset_every == 0) {
      x = x0;
      y = y0;
    }
  }
  LyapunovResult r;
  r.n_steps = n_steps;
  r.lambda1 = std::max(s1, s2) / n_steps;
  r.lambda2 = std::min(s1, s2) / n_steps;
  r.sum_residual = std::abs(r.lambda1 + r.lambda2 - std::log(std::abs(h.a)));
  return r;
}

double lyapunov_measure_avg(const ComplexHenon& h, const GridMeasure& m, int n_horizon,
                            int threads) {
  if (m.cells.empty() || m.total_mass <= 0.0) return 0.0;
  std::vector<double> vals(m.cells.size(), 0.0);
  parallel_for(m.cells.size(), [&](std::size_t i) {
    const auto& cell = m.cells[i];
    C x = cell.x, y = cell.y;
    Mat2 acc{C(1, 0), C(0, 0), C(0, 0), C(1, 0)};
    double logscale = 0.0;
    int used = 0;
    for (int k = 0; k < n_horizon; ++k) {
      acc = mul(dh_at(h, x), acc);
      // rescale by the max entry: unlike the spectral norm it cannot
      // overflow, keeping the accumulated log exact
      const double s = std::max(std::max(std::abs(acc.a), std::abs(acc.b)),
                                std::max(std::abs(acc.c), std::abs(acc.d)));
      if (s > 0.0 && std::isfinite(s)) {
        logscale += std::log(s);
        const double inv = 1.0 / s;
        acc.a *= inv;
        acc.b *= inv;
        acc.c *= inv;
        acc.d *= inv;
      }
      ++used;
      const auto [nx, ny] = h.apply(x, y);
      x = nx;
      y = ny;
      // escaped cells: stop before the orbit overflows; the mean over the
      // steps actually taken still upper-approximates the local rate
      if (std::max(std::abs(x), std::abs(y)) > 1e100) break;
    }
    vals[i] = (logscale + std::log(spectral_norm(acc))) / used;
  }, threads);
  double num = 0.0;
  for (std::size_t i = 0; i < vals.size(); ++i) num += vals[i] * m.cells[i].weight;
  return num / m.total_mass;
}

std::vector<C> fixed_points(const ComplexHenon& h) {
  // roots of q(x) = p(x) - (1+a) x by Durand-Kerner
  std::vector<C> c(static_cast<size_t>(h.d) + 1);
  c[0] = C(1.0, 0.0);
  for (int i = 1; i <= h.d; ++i) c[static_cast<size_t>(i)] = h.ai[static_cast<size_t>(i - 1)];
  c[static_cast<size_t>(h.d - 1)] -= C(1.0, 0.0) + h.a;
  const auto q = [&](C x) {
    C v(0.0, 0.0);
    for (const auto& ck : c) v = v * x + ck;
    return v;
  };
  std::vector<C> roots(static_cast<size_t>(h.d));
  for (int i = 0; i < h.d; ++i)
    roots[static_cast<size_t>(i)] = std::pow(C(0.4, 0.9), i + 1);
  for (int it = 0; it < 300; ++it) {
    double move = 0.0;
    for (int i = 0; i < h.d; ++i) {
      C denom(1.0, 0.0);
      for (int j = 0; j < h.d; ++j)
        if (j != i) denom *= roots[static_cast<size_t>(i)] - roots[static_cast<size_t>(j)];
      const C delta = q(roots[static_cast<size_t>(i)]) / denom;
      roots[static_cast<size_t>(i)] -= delta;
      move = std::max(move, std::abs(delta));
    }
    if (move < 1e-14) break;
  }
  return roots;
}

void write_measure_csv(const GridMeasure& m, std::ostream& os) {
  os << "re_x,im_x,re_y,im_y,weight\n" << std::setprecision(17);
  for (const auto& c : m.cells)
    os << c.x.real() << ',' << c.x.imag() << ',' << c.y.real() << ',' << c.y.imag() << ','
       << c.weight << '\n';
}

void write_measure_summary_json(const GridMeasure& m, std::ostream& os) {
  os << std::setprecision(17) << "{\"total_mass\": " << m.total_mass
     << ", \"clipped_mass\": " << m.clipped_mass << ", \"resolution\": " << m.resolution
     << ", \"eps\": " << m.eps << "}\n";
}

}  // namespace henon
