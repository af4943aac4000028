#include "dgff/harmonic_continuum.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <utility>

#include "dgff/constants.hpp"
#include "dgff/green.hpp"
#include "dgff/lattice.hpp"

namespace dgff {

namespace {

constexpr double kPi = 3.14159265358979323846;

bool single_disc(const ContinuumDomain& d, Disc* out) {
  if (d.components().size() != 1 || !d.holes().empty()) return false;
  if (const auto* dc = std::get_if<Disc>(&d.components().front())) {
    *out = *dc;
    return true;
  }
  return false;
}

}  // namespace

HarmonicMeasureEngine::HarmonicMeasureEngine(ContinuumDomain domain,
                                             HarmonicMeasureMethod method,
                                             int lattice_scale, int circle_nodes)
    : domain_(std::move(domain)),
      method_(method),
      lattice_scale_(lattice_scale),
      circle_nodes_(circle_nodes) {
  const bool is_disc = single_disc(domain_, &disc_);
  if (method_ == HarmonicMeasureMethod::automatic)
    method_ = is_disc ? HarmonicMeasureMethod::disc_analytic
                      : HarmonicMeasureMethod::lattice_limit;
  if (method_ == HarmonicMeasureMethod::disc_analytic && !is_disc)
    throw MethodUnsupported("disc_analytic harmonic measure needs a plain disc domain");
  if (method_ == HarmonicMeasureMethod::lattice_limit) {
    if (lattice_scale_ < 2)
      throw MethodUnsupported("lattice_limit harmonic measure needs scale >= 2");
    solver_ = std::make_unique<DirichletSolver>(discretize(domain_, lattice_scale_));
  }
}

HarmonicMeasureEngine::~HarmonicMeasureEngine() = default;
HarmonicMeasureEngine::HarmonicMeasureEngine(HarmonicMeasureEngine&&) noexcept = default;

BoundarySample HarmonicMeasureEngine::measure(const Vec2& x) const {
  if (!domain_.contains(x))
    throw PointOutsideDomain("harmonic measure source (" + std::to_string(x.x) + ", " +
                             std::to_string(x.y) + ") is outside the domain");
  BoundarySample sample;
  if (method_ == HarmonicMeasureMethod::disc_analytic) {
    const int m = circle_nodes_;
    const double rx = (x.x - disc_.center.x) / disc_.radius;
    const double ry = (x.y - disc_.center.y) / disc_.radius;
    const double rho2 = rx * rx + ry * ry;
    sample.points.reserve(m);
    sample.weights.reserve(m);
    double total = 0.0;
    for (int i = 0; i < m; ++i) {
      const double th = 2.0 * kPi * (i + 0.5) / m;
      const double cx = std::cos(th), cy = std::sin(th);
      const double dist2 = (cx - rx) * (cx - rx) + (cy - ry) * (cy - ry);
      const double w = (1.0 - rho2) / (2.0 * kPi * dist2) * (2.0 * kPi / m);
      sample.points.push_back({disc_.center.x + disc_.radius * cx,
                               disc_.center.y + disc_.radius * cy});
      sample.weights.push_back(w);
      total += w;
    }
    for (double& w : sample.weights) w /= total;
    return sample;
  }

  // lattice_limit: exit distribution of the SRW from the nearest vertex.
  const auto& lat = solver_->domain();
  const int n = lattice_scale_;
  const int px = static_cast<int>(std::llround(x.x * n));
  const int py = static_cast<int>(std::llround(x.y * n));
  LatticePoint source{px, py};
  if (!lat.is_vertex(px, py)) {
    bool found = false;
    for (int radius = 1; radius <= 2 && !found; ++radius)
      for (int dy = -radius; dy <= radius && !found; ++dy)
        for (int dx = -radius; dx <= radius && !found; ++dx)
          if (lat.is_vertex(px + dx, py + dy)) {
            source = {px + dx, py + dy};
            found = true;
          }
    if (!found)
      throw PointOutsideDomain("no lattice vertex near the harmonic measure source");
  }
  const HarmonicMeasureRow row = harmonic_measure_discrete(*solver_, source);
  sample.points.reserve(row.boundary.size());
  double total = 0.0;
  for (double p : row.probabilities) total += p;
  for (std::size_t i = 0; i < row.boundary.size(); ++i) {
    sample.points.push_back({static_cast<double>(row.boundary[i].x) / n,
                             static_cast<double>(row.boundary[i].y) / n});
    sample.weights.push_back(row.probabilities[i] / total);
  }
  return sample;
}

double HarmonicMeasureEngine::log_integral(const Vec2& x, const Vec2& y) const {
  const BoundarySample s = measure(x);
  double acc = 0.0;
  for (std::size_t i = 0; i < s.points.size(); ++i)
    acc += s.weights[i] * std::log(std::hypot(s.points[i].x - y.x, s.points[i].y - y.y));
  return acc;
}

BoundarySample continuum_harmonic_measure(const ContinuumDomain& domain, const Vec2& x,
                                          HarmonicMeasureMethod method,
                                          int lattice_scale) {
  return HarmonicMeasureEngine(domain, method, lattice_scale).measure(x);
}

void check_harmonic_quadrature(const ContinuumDomain& domain, const Vec2& x,
                               const Vec2& probe, int lattice_scale, double tolerance) {
  HarmonicMeasureEngine coarse(domain, HarmonicMeasureMethod::lattice_limit,
                               lattice_scale);
  HarmonicMeasureEngine fine(domain, HarmonicMeasureMethod::lattice_limit,
                             2 * lattice_scale);
  const double a = coarse.log_integral(x, probe);
  const double b = fine.log_integral(x, probe);
  if (std::abs(a - b) > tolerance)
    throw QuadratureUnconverged("lattice harmonic measure at N and 2N differ by " +
                                std::to_string(std::abs(a - b)));
}

double continuum_green(const ContinuumDomain& domain, const Vec2& x, const Vec2& y,
                       HarmonicMeasureMethod method, int lattice_scale) {
  if (!domain.contains(y))
    throw PointOutsideDomain("Green function target point is outside the domain");
  const double dist = std::hypot(y.x - x.x, y.y - x.y);
  if (dist == 0.0) throw PointOutsideDomain("Green function requires x != y");
  HarmonicMeasureEngine engine(domain, method, lattice_scale);
  const double g = constants().g;
  return -g * std::log(dist) + g * engine.log_integral(x, y);
}

double binding_covariance(const HarmonicMeasureEngine& outer,
                          const HarmonicMeasureEngine& inner, const Vec2& x,
                          const Vec2& y) {
  const double g = constants().g;
  return g * outer.log_integral(x, y) - g * inner.log_integral(x, y);
}

double binding_covariance(const ContinuumDomain& outer, const ContinuumDomain& inner,
                          const Vec2& x, const Vec2& y, HarmonicMeasureMethod method,
                          int lattice_scale) {
  HarmonicMeasureEngine oe(outer, method, lattice_scale);
  HarmonicMeasureEngine ie(inner, method, lattice_scale);
  return binding_covariance(oe, ie, x, y);
}

Eigen::MatrixXd binding_cov_matrix(const ContinuumDomain& outer,
                                   const ContinuumDomain& inner,
                                   const std::vector<Vec2>& points,
                                   HarmonicMeasureMethod method, int lattice_scale) {
  HarmonicMeasureEngine oe(outer, method, lattice_scale);
  HarmonicMeasureEngine ie(inner, method, lattice_scale);
  const auto n = static_cast<Eigen::Index>(points.size());
  const double g = constants().g;
  Eigen::MatrixXd c(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const BoundarySample so = oe.measure(points[i]);
    const BoundarySample si = ie.measure(points[i]);
    for (Eigen::Index j = 0; j < n; ++j) {
      double acc = 0.0;
      for (std::size_t k = 0; k < so.points.size(); ++k)
        acc += so.weights[k] * std::log(std::hypot(so.points[k].x - points[j].x,
                                                   so.points[k].y - points[j].y));
      for (std::size_t k = 0; k < si.points.size(); ++k)
        acc -= si.weights[k] * std::log(std::hypot(si.points[k].x - points[j].x,
                                                   si.points[k].y - points[j].y));
      c(i, j) = g * acc;
    }
  }
  // The kernel is symmetric; average out the quadrature asymmetry.
  c = (0.5 * (c + c.transpose())).eval();
  return c;
}

double conformal_radius(const HarmonicMeasureEngine& engine, const Vec2& x) {
  return std::exp(engine.log_integral(x, x));
}

double conformal_radius(const ContinuumDomain& domain, const Vec2& x,
                        HarmonicMeasureMethod method, int lattice_scale) {
  HarmonicMeasureEngine engine(domain, method, lattice_scale);
  return conformal_radius(engine, x);
}

double psi_density_at(const HarmonicMeasureEngine& engine, const Vec2& x) {
  if (!engine.domain().contains(x)) return 0.0;
  const double rad = conformal_radius(engine, x);
  return rad * rad;
}

DensityField psi_density(const ContinuumDomain& domain, const Rect& box, int nx,
                         int ny, HarmonicMeasureMethod method, int lattice_scale) {
  if (nx < 1 || ny < 1) throw InvalidDomain("density grid needs nx, ny >= 1");
  HarmonicMeasureEngine engine(domain, method, lattice_scale);
  DensityField field;
  field.nx = nx;
  field.ny = ny;
  field.box = box;
  const double hx = box.width() / nx, hy = box.height() / ny;
  field.cell_area = hx * hy;
  field.centers.reserve(static_cast<std::size_t>(nx) * ny);
  field.values.reserve(static_cast<std::size_t>(nx) * ny);
  for (int j = 0; j < ny; ++j) {
    for (int i = 0; i < nx; ++i) {
      const Vec2 c{box.lo.x + (i + 0.5) * hx, box.lo.y + (j + 0.5) * hy};
      field.centers.push_back(c);
      field.values.push_back(psi_density_at(engine, c));
    }
  }
  return field;
}

MobiusMap::MobiusMap(std::complex<double> a, double theta)
    : a_(a), phase_(std::polar(1.0, theta)) {
  if (std::abs(a) >= 1.0)
    throw ParameterOutOfDisc("Mobius parameter must lie strictly inside the unit disc");
}

std::complex<double> MobiusMap::operator()(std::complex<double> z) const {
  return phase_ * (z - a_) / (1.0 - std::conj(a_) * z);
}

std::complex<double> MobiusMap::derivative(std::complex<double> z) const {
  const std::complex<double> den = 1.0 - std::conj(a_) * z;
  return phase_ * (1.0 - std::norm(a_)) / (den * den);
}

Vec2 MobiusMap::map(const Vec2& p) const {
  const auto w = (*this)(std::complex<double>(p.x, p.y));
  return {w.real(), w.imag()};
}

double MobiusMap::derivative_abs(const Vec2& p) const {
  return std::abs(derivative(std::complex<double>(p.x, p.y)));
}

MobiusMap mobius(const Vec2& a, double theta) {
  return MobiusMap(std::complex<double>(a.x, a.y), theta);
}

Disc mobius_image_disc(const MobiusMap& f, const Disc& d) {
  // Circumcircle of the images of three circle points.
  std::array<Vec2, 3> p;
  for (int k = 0; k < 3; ++k) {
    const double th = 2.0 * kPi * k / 3.0 + 0.41;
    p[k] = f.map({d.center.x + d.radius * std::cos(th),
                  d.center.y + d.radius * std::sin(th)});
  }
  const double ax = p[0].x, ay = p[0].y, bx = p[1].x, by = p[1].y, cx = p[2].x,
               cy = p[2].y;
  const double dd = 2.0 * (ax * (by - cy) + bx * (cy - ay) + cx * (ay - by));
  const double ux = ((ax * ax + ay * ay) * (by - cy) + (bx * bx + by * by) * (cy - ay) +
                     (cx * cx + cy * cy) * (ay - by)) /
                    dd;
  const double uy = ((ax * ax + ay * ay) * (cx - bx) + (bx * bx + by * by) * (ax - cx) +
                     (cx * cx + cy * cy) * (bx - ax)) /
                    dd;
  const Vec2 center{ux, uy};
  return Disc{center, std::hypot(p[0].x - ux, p[0].y - uy)};
}

}  // namespace dgff
