#include "dgff/lqg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>
#include <utility>

#include "dgff/constants.hpp"

namespace dgff {

namespace {

// Cell lookup of a point inside a density field; returns the flat index.
std::size_t density_cell(const DensityField& psi, const Vec2& p,
                         const char* caller) {
  const double hx = psi.box.width() / psi.nx;
  const double hy = psi.box.height() / psi.ny;
  const int ix = static_cast<int>(std::floor((p.x - psi.box.lo.x) / hx));
  const int iy = static_cast<int>(std::floor((p.y - psi.box.lo.y) / hy));
  if (ix < 0 || ix >= psi.nx || iy < 0 || iy >= psi.ny) {
    throw GridMismatch(std::string(caller) +
                       ": grid point outside the density box");
  }
  return static_cast<std::size_t>(iy) * psi.nx + ix;
}

void require_same_grid(const std::vector<Vec2>& a, const std::vector<Vec2>& b,
                       const char* caller) {
  if (a.size() != b.size()) {
    throw GridMismatch(std::string(caller) + ": grids have different sizes");
  }
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i].x != b[i].x || a[i].y != b[i].y) {
      throw GridMismatch(std::string(caller) +
                         ": grids differ at point " + std::to_string(i));
    }
  }
}

struct RunningMoments {
  double sum = 0.0;
  double sumsq = 0.0;
  std::size_t n = 0;

  void add(double v) {
    sum += v;
    sumsq += v * v;
    ++n;
  }
  double mean() const { return sum / static_cast<double>(n); }
  double se() const {
    const double m = mean();
    const double var =
        std::max(0.0, (sumsq - static_cast<double>(n) * m * m) /
                          (static_cast<double>(n) - 1.0));
    return std::sqrt(var / static_cast<double>(n));
  }
};

}  // namespace

double GridMeasure::total() const {
  return std::accumulate(masses.begin(), masses.end(), 0.0);
}

PhiSampler::PhiSampler(const TruncatedKernel& kernel)
    : kernel_(kernel),
      cov_(kernel.grid, kernel.matrix),
      variances_(kernel.matrix.diagonal()) {}

FieldSample PhiSampler::sample(RngStream& rng) const {
  const Eigen::Index n = static_cast<Eigen::Index>(kernel_.grid.size());
  Eigen::VectorXd z(n);
  for (Eigen::Index i = 0; i < n; ++i) z[i] = rng.next_normal();
  FieldSample field;
  field.points = kernel_.grid;
  field.values = cov_.color(z);
  field.master_seed = rng.master_seed();
  field.stream_id = rng.stream_id();
  return field;
}

FieldSample PhiSampler::sample(std::uint64_t master_seed,
                               std::uint64_t stream_id) const {
  RngStream rng(master_seed, stream_id);
  return sample(rng);
}

FieldSample sample_phi_t(const TruncatedKernel& kernel, RngStream& rng) {
  return PhiSampler(kernel).sample(rng);
}

GridMeasure seneta_heyde_measure(const FieldSample& phi,
                                 const TruncatedKernel& kernel,
                                 const DensityField& psi) {
  require_same_grid(phi.points, kernel.grid, "seneta_heyde_measure");
  if (phi.values.size() != static_cast<Eigen::Index>(phi.points.size())) {
    throw GridMismatch("seneta_heyde_measure: field values/points mismatch");
  }
  const double alpha = constants().alpha;
  const double sqrt_t = std::sqrt(kernel.t);
  GridMeasure measure;
  measure.centers = phi.points;
  measure.masses.resize(phi.points.size());
  measure.t = kernel.t;
  measure.cell_area = psi.cell_area;
  measure.master_seed = phi.master_seed;
  measure.stream_id = phi.stream_id;
  for (std::size_t i = 0; i < phi.points.size(); ++i) {
    const std::size_t cell =
        density_cell(psi, phi.points[i], "seneta_heyde_measure");
    const double var = kernel.matrix(static_cast<Eigen::Index>(i),
                                     static_cast<Eigen::Index>(i));
    const double h = phi.values[static_cast<Eigen::Index>(i)];
    measure.masses[i] = sqrt_t *
                        std::exp(alpha * h - 0.5 * alpha * alpha * var) *
                        psi.values[cell] * psi.cell_area;
  }
  return measure;
}

LadderDiagnostic seneta_heyde_ladder(const ContinuumDomain& domain,
                                     const DensityField& psi,
                                     const std::vector<double>& t_values,
                                     std::size_t replicas,
                                     std::uint64_t master_seed,
                                     const TruncatedGreenOptions& options) {
  if (replicas < 2) {
    throw InsufficientSamples("seneta_heyde_ladder: needs >= 2 replicas");
  }
  std::vector<Vec2> grid;
  double psi_total = 0.0;
  for (std::size_t i = 0; i < psi.centers.size(); ++i) {
    if (psi.values[i] > 0.0) {
      grid.push_back(psi.centers[i]);
      psi_total += psi.values[i] * psi.cell_area;
    }
  }
  if (grid.empty()) {
    throw GridMismatch("seneta_heyde_ladder: density field has no mass");
  }
  LadderDiagnostic ladder;
  std::uint64_t stream = 0;
  for (double t : t_values) {
    const TruncatedKernel kernel = truncated_green(domain, grid, t, options);
    const PhiSampler sampler(kernel);
    RunningMoments total;
    for (std::size_t r = 0; r < replicas; ++r) {
      RngStream rng(master_seed, stream++);
      const FieldSample phi = sampler.sample(rng);
      const GridMeasure m = seneta_heyde_measure(phi, kernel, psi);
      total.add(m.total());
    }
    ladder.t_values.push_back(t);
    ladder.mean_total.push_back(total.mean());
    ladder.expected_total.push_back(std::sqrt(t) * psi_total);
    ladder.ratio.push_back(total.mean() / (std::sqrt(t) * psi_total));
  }
  return ladder;
}

GirsanovTester::GirsanovTester(TruncatedKernel kernel, DensityField psi)
    : sampler_(kernel), cell_area_(psi.cell_area) {
  psi_values_.resize(kernel.grid.size());
  for (std::size_t i = 0; i < kernel.grid.size(); ++i) {
    psi_values_[i] =
        psi.values[density_cell(psi, kernel.grid[i], "GirsanovTester")];
  }
}

std::vector<StatReport> GirsanovTester::check(
    const std::vector<Config>& configs, std::size_t replicas_per_side,
    std::uint64_t master_seed, std::uint64_t lhs_stream_base,
    std::uint64_t rhs_stream_base, double z_bound) const {
  if (configs.empty()) {
    throw DomainError("girsanov check: no configurations");
  }
  if (replicas_per_side < 2) {
    throw InsufficientSamples("girsanov check: needs >= 2 replicas per side");
  }
  const TruncatedKernel& kernel = sampler_.kernel();
  const std::size_t n = kernel.grid.size();
  const double alpha = constants().alpha;
  const double sqrt_t = std::sqrt(kernel.t);
  for (const Config& c : configs) {
    if (c.point_index >= n) {
      throw DomainError("girsanov check: point index out of range");
    }
    if (c.lambda < 0.0) {
      throw DomainError("girsanov check: lambda must be nonnegative");
    }
    if (psi_values_[c.point_index] <= 0.0) {
      throw DomainError("girsanov check: tilt point carries no density");
    }
  }

  // Tilt rows e^{alpha^2 G_t(x, .)} per configuration.
  std::vector<Eigen::VectorXd> tilt(configs.size());
  for (std::size_t c = 0; c < configs.size(); ++c) {
    tilt[c] = (alpha * alpha *
               kernel.matrix.col(
                   static_cast<Eigen::Index>(configs[c].point_index)))
                  .array()
                  .exp();
  }

  std::vector<RunningMoments> lhs(configs.size()), rhs(configs.size());
  Eigen::VectorXd masses(static_cast<Eigen::Index>(n));
  for (int side = 0; side < 2; ++side) {
    const std::uint64_t base = side == 0 ? lhs_stream_base : rhs_stream_base;
    for (std::size_t r = 0; r < replicas_per_side; ++r) {
      RngStream rng(master_seed, base + r);
      const FieldSample phi = sampler_.sample(rng);
      for (std::size_t i = 0; i < n; ++i) {
        const double var = sampler_.variances()[static_cast<Eigen::Index>(i)];
        masses[static_cast<Eigen::Index>(i)] =
            sqrt_t *
            std::exp(alpha * phi.values[static_cast<Eigen::Index>(i)] -
                     0.5 * alpha * alpha * var) *
            psi_values_[i] * cell_area_;
      }
      if (side == 0) {
        const double total = masses.sum();
        for (std::size_t c = 0; c < configs.size(); ++c) {
          const std::size_t x = configs[c].point_index;
          const double w =
              masses[static_cast<Eigen::Index>(x)] /
              (sqrt_t * psi_values_[x] * cell_area_);
          lhs[c].add(w * std::exp(-configs[c].lambda * total));
        }
      } else {
        for (std::size_t c = 0; c < configs.size(); ++c) {
          const double tilted = tilt[c].dot(masses);
          rhs[c].add(std::exp(-configs[c].lambda * tilted));
        }
      }
    }
  }

  std::vector<StatReport> reports;
  reports.reserve(configs.size());
  for (std::size_t c = 0; c < configs.size(); ++c) {
    const double diff = lhs[c].mean() - rhs[c].mean();
    const double se = std::hypot(lhs[c].se(), rhs[c].se());
    StatReport report;
    report.estimator = "girsanov_identity";
    report.params = {{"lambda", configs[c].lambda},
                     {"x", kernel.grid[configs[c].point_index].x},
                     {"y", kernel.grid[configs[c].point_index].y},
                     {"t", kernel.t},
                     {"lhs_mean", lhs[c].mean()},
                     {"rhs_mean", rhs[c].mean()},
                     {"diff", diff},
                     {"diff_se", se},
                     {"replicas_per_side",
                      static_cast<double>(replicas_per_side)}};
    report.estimate = se > 0.0 ? diff / se : 0.0;  // z-score
    report.standard_error = 1.0;
    report.tolerance = z_bound;
    report.pass = std::abs(report.estimate) <= z_bound;
    reports.push_back(std::move(report));
  }
  return reports;
}

StatReport laplace_tail(const std::vector<double>& mass_a,
                        const std::vector<double>& mass_d, double lambda,
                        std::size_t min_samples) {
  if (mass_a.size() != mass_d.size()) {
    throw GridMismatch("laplace_tail: sample vectors differ in length");
  }
  if (mass_a.size() < min_samples) {
    throw InsufficientSamples("laplace_tail: " +
                              std::to_string(mass_a.size()) +
                              " samples, needs " +
                              std::to_string(min_samples));
  }
  if (!(lambda > 0.0) || !(lambda < 1.0)) {
    throw DomainError("laplace_tail: lambda must lie in (0, 1)");
  }
  const double log_inv = std::log(1.0 / lambda);
  RunningMoments m;
  for (std::size_t i = 0; i < mass_a.size(); ++i) {
    m.add(mass_a[i] * std::exp(-lambda * mass_d[i]));
  }
  StatReport report;
  report.estimator = "laplace_tail";
  report.params = {{"lambda", lambda},
                   {"samples", static_cast<double>(mass_a.size())}};
  report.estimate = m.mean() / log_inv;
  report.standard_error = m.se() / log_inv;
  report.tolerance = std::numeric_limits<double>::infinity();
  report.pass = true;
  return report;
}

StatReport cauchy_tail(const std::vector<double>& masses, double threshold,
                       std::size_t min_samples,
                       std::size_t min_exceedances) {
  if (masses.size() < min_samples) {
    throw InsufficientSamples("cauchy_tail: " + std::to_string(masses.size()) +
                              " samples, needs " +
                              std::to_string(min_samples));
  }
  if (!(threshold > 0.0)) {
    throw DomainError("cauchy_tail: threshold must be positive");
  }
  std::size_t k = 0;
  for (double v : masses) {
    if (v > threshold) ++k;
  }
  if (k < min_exceedances) {
    throw InsufficientExceedances("cauchy_tail: " + std::to_string(k) +
                                  " exceedances, needs " +
                                  std::to_string(min_exceedances));
  }
  const double n = static_cast<double>(masses.size());
  const double p = static_cast<double>(k) / n;
  StatReport report;
  report.estimator = "cauchy_tail";
  report.params = {{"threshold", threshold},
                   {"samples", n},
                   {"exceedances", static_cast<double>(k)}};
  report.estimate = threshold * p;
  report.standard_error = threshold * std::sqrt(p * (1.0 - p) / n);
  report.tolerance = std::numeric_limits<double>::infinity();
  report.pass = true;
  return report;
}

namespace {

// Degree-5 symmetric 7-point rule on a triangle, barycentric nodes and
// weights (weights sum to 1).
struct TriangleRule {
  std::array<std::array<double, 3>, 7> bary;
  std::array<double, 7> weight;
};

TriangleRule seven_point_rule() {
  TriangleRule rule;
  const double s15 = std::sqrt(15.0);
  const double a = (6.0 - s15) / 21.0;
  const double b = (6.0 + s15) / 21.0;
  const double wa = (155.0 - s15) / 1200.0;
  const double wb = (155.0 + s15) / 1200.0;
  rule.bary[0] = {1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0};
  rule.weight[0] = 9.0 / 40.0;
  rule.bary[1] = {a, a, 1.0 - 2.0 * a};
  rule.bary[2] = {a, 1.0 - 2.0 * a, a};
  rule.bary[3] = {1.0 - 2.0 * a, a, a};
  rule.weight[1] = rule.weight[2] = rule.weight[3] = wa;
  rule.bary[4] = {b, b, 1.0 - 2.0 * b};
  rule.bary[5] = {b, 1.0 - 2.0 * b, b};
  rule.bary[6] = {1.0 - 2.0 * b, b, b};
  rule.weight[4] = rule.weight[5] = rule.weight[6] = wb;
  return rule;
}

double triangle_area(const Triangle& t) {
  return 0.5 * std::abs((t.v[1].x - t.v[0].x) * (t.v[2].y - t.v[0].y) -
                        (t.v[2].x - t.v[0].x) * (t.v[1].y - t.v[0].y));
}

Vec2 bary_point(const Triangle& t, const std::array<double, 3>& bary) {
  return {bary[0] * t.v[0].x + bary[1] * t.v[1].x + bary[2] * t.v[2].x,
          bary[0] * t.v[0].y + bary[1] * t.v[1].y + bary[2] * t.v[2].y};
}

std::array<Triangle, 4> midpoint_children(const Triangle& t) {
  const Vec2 m01{0.5 * (t.v[0].x + t.v[1].x), 0.5 * (t.v[0].y + t.v[1].y)};
  const Vec2 m12{0.5 * (t.v[1].x + t.v[2].x), 0.5 * (t.v[1].y + t.v[2].y)};
  const Vec2 m02{0.5 * (t.v[0].x + t.v[2].x), 0.5 * (t.v[0].y + t.v[2].y)};
  return {Triangle{{t.v[0], m01, m02}}, Triangle{{m01, t.v[1], m12}},
          Triangle{{m02, m12, t.v[2]}}, Triangle{{m01, m12, m02}}};
}

}  // namespace

DerivativeMartingale::DerivativeMartingale(
    const ContinuumDomain& domain, const TriangularPartition& partition,
    const DerivativeMartingaleOptions& options)
    : triangle_count_(partition.interior_count),
      mesh_(partition.mesh),
      options_(options) {
  if (triangle_count_ == 0) {
    throw DomainError(
        "derivative martingale: partition has no interior triangles");
  }
  const TriangleRule rule = seven_point_rule();
  const std::size_t nodes_per_triangle = 35;
  if (triangle_count_ * nodes_per_triangle > options.dense_limit) {
    throw PartitionTooFine(
        "derivative martingale: " +
        std::to_string(triangle_count_ * nodes_per_triangle) +
        " quadrature nodes exceed the dense limit " +
        std::to_string(options.dense_limit));
  }

  std::vector<Shape> cover;
  cover.reserve(triangle_count_);
  for (std::size_t i = 0; i < triangle_count_; ++i) {
    const Triangle& full = partition.triangles[i];
    cover.push_back(
        Polygon{{full.v[0], full.v[1], full.v[2]}});
    centroids_.push_back(full.centroid());

    const Triangle& core = partition.shrunk[i];
    const double area = triangle_area(core);
    for (int j = 0; j < 7; ++j) {
      nodes_.push_back(bary_point(core, rule.bary[j]));
      node_weights_.push_back(rule.weight[j] * area);
    }
    for (const Triangle& child : midpoint_children(core)) {
      for (int j = 0; j < 7; ++j) {
        nodes_.push_back(bary_point(child, rule.bary[j]));
        node_weights_.push_back(rule.weight[j] * area / 4.0);
      }
    }
  }

  const ContinuumDomain triangulated(std::move(cover));
  Eigen::MatrixXd cov = binding_cov_matrix(domain, triangulated, nodes_,
                                           options.method,
                                           options.lattice_scale);
  kernel_ = std::make_unique<CovKernel>(nodes_, std::move(cov),
                                        options.psd_tolerance);
  variances_ = kernel_->matrix().diagonal();

  const HarmonicMeasureEngine engine(domain, options.method,
                                     options.lattice_scale);
  psi_nodes_.reserve(nodes_.size());
  for (const Vec2& p : nodes_) {
    psi_nodes_.push_back(psi_density_at(engine, p));
  }
}

DerivativeMartingale::Sample DerivativeMartingale::sample(
    RngStream& rng) const {
  const Eigen::Index n = static_cast<Eigen::Index>(nodes_.size());
  Eigen::VectorXd z(n);
  for (Eigen::Index i = 0; i < n; ++i) z[i] = rng.next_normal();
  const Eigen::VectorXd field = kernel_->color(z);

  const double alpha = constants().alpha;
  const double sqrt_g = std::sqrt(constants().g);
  const double max_bound =
      2.0 * sqrt_g * std::log(static_cast<double>(mesh_)) -
      options_.max_shift;

  Sample result;
  result.measure.centers = centroids_;
  result.measure.masses.assign(triangle_count_, 0.0);
  result.measure.master_seed = rng.master_seed();
  result.measure.stream_id = rng.stream_id();

  for (std::size_t tri = 0; tri < triangle_count_; ++tri) {
    const std::size_t base = tri * 35;
    double lo = field[static_cast<Eigen::Index>(base)];
    double hi = lo;
    for (std::size_t j = 1; j < 7; ++j) {
      const double v = field[static_cast<Eigen::Index>(base + j)];
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
    const bool refine =
        hi - lo >= (1.0 - options_.refine_margin) * options_.osc_bound;
    const std::size_t first = refine ? base + 7 : base;
    const std::size_t count = refine ? 28 : 7;
    if (refine) {
      ++result.refined;
      lo = hi = field[static_cast<Eigen::Index>(first)];
      for (std::size_t j = 1; j < count; ++j) {
        const double v = field[static_cast<Eigen::Index>(first + j)];
        lo = std::min(lo, v);
        hi = std::max(hi, v);
      }
    }
    if (hi - lo > options_.osc_bound || hi > max_bound) continue;
    ++result.active;
    double mass = 0.0;
    for (std::size_t j = 0; j < count; ++j) {
      const std::size_t k = first + j;
      const double phi = field[static_cast<Eigen::Index>(k)];
      const double var = variances_[static_cast<Eigen::Index>(k)];
      const double integrand =
          alpha * (alpha * var - phi) *
          std::exp(alpha * phi - 0.5 * alpha * alpha * var) * psi_nodes_[k];
      if (integrand < 0.0) ++result.negative_nodes;
      mass += node_weights_[k] * integrand;
    }
    result.measure.masses[tri] = mass;
  }
  return result;
}

DerivativeMartingale::Sample DerivativeMartingale::sample(
    std::uint64_t master_seed, std::uint64_t stream_id) const {
  RngStream rng(master_seed, stream_id);
  return sample(rng);
}

StatReport kahane_check(const CovKernel& hi, const CovKernel& lo,
                        const std::vector<double>& sigma,
                        std::size_t replicas, std::uint64_t master_seed,
                        std::uint64_t hi_stream_base,
                        std::uint64_t lo_stream_base) {
  const std::size_t n = hi.size();
  if (lo.size() != n || sigma.size() != n) {
    throw DomainError("kahane_check: dimension mismatch");
  }
  if (replicas < 2) {
    throw InsufficientSamples("kahane_check: needs >= 2 replicas");
  }
  for (double s : sigma) {
    if (s < 0.0) throw DomainError("kahane_check: sigma must be nonnegative");
  }
  for (Eigen::Index i = 0; i < static_cast<Eigen::Index>(n); ++i) {
    for (Eigen::Index j = 0; j < static_cast<Eigen::Index>(n); ++j) {
      if (hi.matrix()(i, j) < lo.matrix()(i, j) - 1e-10) {
        throw CovarianceNotOrdered(
            "kahane_check: covariances are not entrywise ordered at (" +
            std::to_string(i) + ", " + std::to_string(j) + ")");
      }
    }
  }

  const auto functional = [&](const CovKernel& cov, RngStream& rng) {
    Eigen::VectorXd z(static_cast<Eigen::Index>(n));
    for (Eigen::Index i = 0; i < static_cast<Eigen::Index>(n); ++i) {
      z[i] = rng.next_normal();
    }
    const Eigen::VectorXd x = cov.color(z);
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      s += sigma[i] *
           std::exp(x[static_cast<Eigen::Index>(i)] -
                    0.5 * cov.matrix()(static_cast<Eigen::Index>(i),
                                       static_cast<Eigen::Index>(i)));
    }
    return std::exp(-s);
  };

  RunningMoments m_hi, m_lo;
  for (std::size_t r = 0; r < replicas; ++r) {
    RngStream rng_hi(master_seed, hi_stream_base + r);
    RngStream rng_lo(master_seed, lo_stream_base + r);
    m_hi.add(functional(hi, rng_hi));
    m_lo.add(functional(lo, rng_lo));
  }

  StatReport report;
  report.estimator = "kahane_direction";
  report.params = {{"points", static_cast<double>(n)},
                   {"replicas", static_cast<double>(replicas)},
                   {"mean_hi", m_hi.mean()},
                   {"mean_lo", m_lo.mean()}};
  report.estimate = m_hi.mean() - m_lo.mean();
  report.standard_error = std::hypot(m_hi.se(), m_lo.se());
  report.tolerance = 3.0 * report.standard_error;
  report.pass = report.estimate >= -report.tolerance;
  return report;
}

double lognormal_laplace_moment(double sigma, double variance) {
  if (sigma < 0.0 || variance <= 0.0) {
    throw DomainError(
        "lognormal_laplace_moment: needs sigma >= 0, variance > 0");
  }
  if (sigma == 0.0) return 1.0;
  const double sd = std::sqrt(variance);
  const double half = 14.0 * sd + variance;
  const int n = 40000;
  const double h = 2.0 * half / n;
  double sum = 0.0;
  for (int i = 0; i <= n; ++i) {
    const double x = -half + i * h;
    const double density = std::exp(-x * x / (2.0 * variance)) /
                           std::sqrt(2.0 * 3.14159265358979323846 * variance);
    const double value =
        density * std::exp(-sigma * std::exp(x - 0.5 * variance));
    sum += (i == 0 || i == n) ? 0.5 * value : value;
  }
  return sum * h;
}

}  // namespace dgff
