#include "dgff/fields.hpp"

#include <algorithm>
#include <cmath>

#include "dgff/potential_kernel.hpp"
#include <cstdint>
#include <string>
#include <utility>

namespace dgff {

namespace {

std::vector<Vec2> integer_points(const std::vector<LatticePoint>& vertices) {
  std::vector<Vec2> pts;
  pts.reserve(vertices.size());
  for (const auto& p : vertices) {
    pts.push_back({static_cast<double>(p.x), static_cast<double>(p.y)});
  }
  return pts;
}

Eigen::VectorXd standard_normals(std::size_t n, RngStream& rng) {
  Eigen::VectorXd z(static_cast<Eigen::Index>(n));
  for (Eigen::Index i = 0; i < z.size(); ++i) z[i] = rng.next_normal();
  return z;
}

std::uint64_t tri_key(int m, int n) {
  return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(n)) << 32) |
         static_cast<std::uint32_t>(m);
}

}  // namespace

DgffSampler::DgffSampler(LatticeDomain domain, SamplerMethod method,
                         std::size_t dense_limit)
    : domain_(std::move(domain)), method_(method) {
  if (domain_.empty()) {
    throw EmptyDiscretization("sampler domain has no vertices");
  }
  point_cache_ = integer_points(domain_.vertices());

  const LatticeBounds b = domain_.bounds();
  const std::size_t hull_size = static_cast<std::size_t>(b.xmax - b.xmin + 1) *
                                static_cast<std::size_t>(b.ymax - b.ymin + 1);
  domain_is_rectangle_ = hull_size == domain_.size();
  rect_width_ = b.xmax - b.xmin + 1;
  rect_height_ = b.ymax - b.ymin + 1;

  switch (method_) {
    case SamplerMethod::cholesky:
      if (domain_.size() > dense_limit) {
        throw DenseLimitExceeded("cholesky sampler: " + std::to_string(domain_.size()) +
                                 " vertices exceed the limit " +
                                 std::to_string(dense_limit));
      }
      solver_ = std::make_unique<DirichletSolver>(domain_);
      break;
    case SamplerMethod::sine_transform:
      if (!domain_is_rectangle_) {
        throw MethodUnsupported(
            "sine_transform requires a full lattice rectangle");
      }
      break;
    case SamplerMethod::gibbs_markov:
      if (!domain_is_rectangle_) {
        hull_ = lattice_rectangle(b.xmin, b.xmax, b.ymin, b.ymax, domain_.scale());
        solver_ = std::make_unique<DirichletSolver>(domain_);
      }
      break;
  }
}

FieldSample DgffSampler::sample(RngStream& rng) const {
  FieldSample out;
  out.lattice = domain_;
  out.points = point_cache_;
  out.master_seed = rng.master_seed();
  out.stream_id = rng.stream_id();

  switch (method_) {
    case SamplerMethod::cholesky:
      out.values = solver_->color(standard_normals(domain_.size(), rng));
      break;
    case SamplerMethod::sine_transform:
      out.values = sine_rectangle_sample(rect_width_, rect_height_, rng);
      break;
    case SamplerMethod::gibbs_markov: {
      if (domain_is_rectangle_) {
        out.values = sine_rectangle_sample(rect_width_, rect_height_, rng);
        break;
      }
      FieldSample hull_sample;
      hull_sample.lattice = hull_;
      hull_sample.values = sine_rectangle_sample(rect_width_, rect_height_, rng);
      hull_sample.master_seed = out.master_seed;
      hull_sample.stream_id = out.stream_id;
      out.values = gibbs_markov_decompose(hull_sample, *solver_).bulk.values;
      break;
    }
  }
  return out;
}

FieldSample DgffSampler::sample(std::uint64_t master_seed,
                                std::uint64_t stream_id) const {
  RngStream rng(master_seed, stream_id);
  return sample(rng);
}

FieldSample sample_dgff(const LatticeDomain& domain, SamplerMethod method,
                        RngStream& rng, std::size_t dense_limit) {
  return DgffSampler(domain, method, dense_limit).sample(rng);
}

GibbsMarkovSplit gibbs_markov_decompose(const FieldSample& h,
                                        const DirichletSolver& inner_solver) {
  const LatticeDomain& outer = h.lattice;
  const LatticeDomain& inner = inner_solver.domain();
  if (outer.empty()) {
    throw NotSubdomain("decomposition needs a lattice field");
  }
  if (h.values.size() != static_cast<Eigen::Index>(outer.size())) {
    throw DomainError("field sample length does not match its lattice domain");
  }
  if (inner.scale() != outer.scale()) {
    throw NotSubdomain("subdomain scale differs from the field scale");
  }
  for (const auto& p : inner.vertices()) {
    if (!outer.is_vertex(p.x, p.y)) {
      throw NotSubdomain("subdomain vertex (" + std::to_string(p.x) + ", " +
                         std::to_string(p.y) + ") is not in the field domain");
    }
  }

  // Dirichlet data of the harmonic extension: for x in the subdomain the
  // extension u solves u(x) = (1/4) sum_{y ~ x} u(y) with u = h off the
  // subdomain (0 outside the field domain), i.e. (I - P) u = c with
  // c(x) = (1/4) sum_{y ~ x, y outside the subdomain} h(y).
  const std::size_t m = inner.size();
  Eigen::VectorXd c = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(m));
  for (std::size_t i = 0; i < m; ++i) {
    const LatticePoint p = inner.vertices()[i];
    double acc = 0.0;
    for (const auto& o : kNeighborOffsets) {
      const int nx = p.x + o.x, ny = p.y + o.y;
      if (inner.is_vertex(nx, ny)) continue;
      if (auto j = outer.vertex_index({nx, ny})) {
        acc += h.values[static_cast<Eigen::Index>(*j)];
      }
    }
    c[static_cast<Eigen::Index>(i)] = 0.25 * acc;
  }
  const Eigen::VectorXd extension = inner_solver.solve(c);

  GibbsMarkovSplit split;
  split.phi.lattice = outer;
  split.phi.points = integer_points(outer.vertices());
  split.phi.values = h.values;
  split.phi.master_seed = h.master_seed;
  split.phi.stream_id = h.stream_id;

  split.bulk.lattice = inner;
  split.bulk.points = integer_points(inner.vertices());
  split.bulk.values.resize(static_cast<Eigen::Index>(m));
  split.bulk.master_seed = h.master_seed;
  split.bulk.stream_id = h.stream_id;

  for (std::size_t i = 0; i < m; ++i) {
    const std::size_t j = outer.require_index(inner.vertices()[i]);
    split.phi.values[static_cast<Eigen::Index>(j)] =
        extension[static_cast<Eigen::Index>(i)];
    split.bulk.values[static_cast<Eigen::Index>(i)] =
        h.values[static_cast<Eigen::Index>(j)] -
        extension[static_cast<Eigen::Index>(i)];
  }
  return split;
}

GibbsMarkovSplit gibbs_markov_decompose(const FieldSample& h,
                                        const LatticeDomain& inner) {
  const LatticeDomain& outer = h.lattice;
  if (outer.empty()) {
    throw NotSubdomain("decomposition needs a lattice field");
  }
  if (inner.empty() || inner.scale() != outer.scale()) {
    throw NotSubdomain("subdomain is empty or at a different scale");
  }
  for (const auto& p : inner.vertices()) {
    if (!outer.is_vertex(p.x, p.y)) {
      throw NotSubdomain("subdomain vertex (" + std::to_string(p.x) + ", " +
                         std::to_string(p.y) + ") is not in the field domain");
    }
  }
  return gibbs_markov_decompose(h, DirichletSolver(inner));
}

BindingFieldSampler::BindingFieldSampler(const ContinuumDomain& outer,
                                         const ContinuumDomain& inner,
                                         std::vector<Vec2> points,
                                         HarmonicMeasureMethod method,
                                         int lattice_scale)
    : kernel_(points, binding_cov_matrix(outer, inner, points, method, lattice_scale)) {}

FieldSample BindingFieldSampler::sample(RngStream& rng) const {
  FieldSample out;
  out.points = kernel_.points();
  out.master_seed = rng.master_seed();
  out.stream_id = rng.stream_id();
  out.values = kernel_.color(standard_normals(kernel_.size(), rng));
  return out;
}

FieldSample BindingFieldSampler::sample(std::uint64_t master_seed,
                                        std::uint64_t stream_id) const {
  RngStream rng(master_seed, stream_id);
  return sample(rng);
}

FieldSample sample_binding_field(const ContinuumDomain& outer,
                                 const ContinuumDomain& inner,
                                 const std::vector<Vec2>& points, RngStream& rng,
                                 HarmonicMeasureMethod method, int lattice_scale) {
  return BindingFieldSampler(outer, inner, points, method, lattice_scale).sample(rng);
}

TriangularDomain TriangularDomain::from_points(std::vector<LatticePoint> points,
                                               int mesh) {
  if (mesh < 1) throw InvalidDomain("triangular mesh parameter must be >= 1");
  if (points.empty()) throw EmptyDiscretization("triangular domain has no vertices");
  std::sort(points.begin(), points.end(), [](LatticePoint a, LatticePoint b) {
    return a.y != b.y ? a.y < b.y : a.x < b.x;
  });
  points.erase(std::unique(points.begin(), points.end()), points.end());

  TriangularDomain d;
  d.mesh_ = mesh;
  d.vertices_ = std::move(points);
  d.index_.reserve(d.vertices_.size());
  for (std::size_t i = 0; i < d.vertices_.size(); ++i) {
    d.index_.emplace(tri_key(d.vertices_[i].x, d.vertices_[i].y), i);
  }
  return d;
}

bool TriangularDomain::is_vertex(int m, int n) const {
  return index_.count(tri_key(m, n)) != 0;
}

std::optional<std::size_t> TriangularDomain::vertex_index(LatticePoint p) const {
  auto it = index_.find(tri_key(p.x, p.y));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

Vec2 TriangularDomain::embed(LatticePoint p) const {
  const Vec2 e = triangular_embed(p.x, p.y);
  const double s = 1.0 / static_cast<double>(mesh_);
  return {e.x * s, e.y * s};
}

TriangularDomain triangular_patch(int side, int mesh) {
  if (side < 0) throw InvalidDomain("triangular patch side must be >= 0");
  std::vector<LatticePoint> pts;
  pts.reserve(static_cast<std::size_t>(side + 1) * (side + 2) / 2);
  for (int n = 0; n <= side; ++n) {
    for (int m = 0; m + n <= side; ++m) pts.push_back({m, n});
  }
  return TriangularDomain::from_points(std::move(pts), mesh);
}

TriangularSampler::TriangularSampler(TriangularDomain domain,
                                     std::size_t dense_limit)
    : domain_(std::move(domain)) {
  if (domain_.empty()) {
    throw EmptyDiscretization("sampler domain has no vertices");
  }
  if (domain_.size() > dense_limit) {
    throw DenseLimitExceeded("triangular sampler: " + std::to_string(domain_.size()) +
                             " vertices exceed the limit " + std::to_string(dense_limit));
  }
  const std::size_t n = domain_.size();
  point_cache_.reserve(n);
  for (const auto& p : domain_.vertices()) point_cache_.push_back(domain_.embed(p));

  Eigen::MatrixXd system = Eigen::MatrixXd::Identity(
      static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  for (std::size_t i = 0; i < n; ++i) {
    const LatticePoint p = domain_.vertices()[i];
    for (const auto& o : kTriangularOffsets) {
      if (auto j = domain_.vertex_index({p.x + o.x, p.y + o.y})) {
        system(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(*j)) -=
            1.0 / 6.0;
      }
    }
  }
  llt_.compute(system);
  if (llt_.info() != Eigen::Success) {
    throw SingularSystem("triangular walk system is not positive definite");
  }
}

Eigen::MatrixXd TriangularSampler::green() const {
  const Eigen::Index n = static_cast<Eigen::Index>(domain_.size());
  return llt_.solve(Eigen::MatrixXd::Identity(n, n));
}

FieldSample TriangularSampler::sample(RngStream& rng) const {
  FieldSample out;
  out.points = point_cache_;
  out.master_seed = rng.master_seed();
  out.stream_id = rng.stream_id();
  // x = U^{-1} z has covariance (I - P)^{-1}; rescale to (2/sqrt(3)) G.
  const Eigen::VectorXd z = standard_normals(domain_.size(), rng);
  out.values = std::sqrt(2.0 / std::sqrt(3.0)) * llt_.matrixU().solve(z);
  return out;
}

FieldSample TriangularSampler::sample(std::uint64_t master_seed,
                                      std::uint64_t stream_id) const {
  RngStream rng(master_seed, stream_id);
  return sample(rng);
}

FieldSample sample_triangular_field(const TriangularDomain& domain, RngStream& rng,
                                    std::size_t dense_limit) {
  return TriangularSampler(domain, dense_limit).sample(rng);
}

CovarianceAccumulator::CovarianceAccumulator(std::vector<Vec2> points)
    : points_(std::move(points)),
      sum_(Eigen::VectorXd::Zero(static_cast<Eigen::Index>(points_.size()))),
      sumsq_(Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(points_.size()),
                                   static_cast<Eigen::Index>(points_.size()))) {}

void CovarianceAccumulator::add(const Eigen::VectorXd& values) {
  if (values.size() != sum_.size()) {
    throw DomainError("sample length does not match the accumulator point list");
  }
  sum_ += values;
  sumsq_.selfadjointView<Eigen::Lower>().rankUpdate(values);
  ++count_;
}

void CovarianceAccumulator::add(const FieldSample& sample) {
  if (sample.points.size() != points_.size()) {
    throw DomainError("sample point list does not match the accumulator");
  }
  for (std::size_t i = 0; i < points_.size(); ++i) {
    if (sample.points[i].x != points_[i].x || sample.points[i].y != points_[i].y) {
      throw DomainError("sample point list does not match the accumulator");
    }
  }
  add(sample.values);
}

EmpiricalCovariance CovarianceAccumulator::finalize() const {
  if (count_ < 2) {
    throw InsufficientSamples("covariance needs at least 2 samples, have " +
                              std::to_string(count_));
  }
  const double n = static_cast<double>(count_);
  const Eigen::VectorXd mean = sum_ / n;
  Eigen::MatrixXd s = sumsq_.selfadjointView<Eigen::Lower>();
  s = (s - n * mean * mean.transpose()) / (n - 1.0);
  s = 0.5 * (s + s.transpose());

  Eigen::MatrixXd se(s.rows(), s.cols());
  for (Eigen::Index i = 0; i < s.rows(); ++i) {
    for (Eigen::Index j = 0; j < s.cols(); ++j) {
      se(i, j) = std::sqrt(
          std::max(0.0, s(i, i) * s(j, j) + s(i, j) * s(i, j)) / (n - 1.0));
    }
  }
  return EmpiricalCovariance{CovKernel(points_, s), std::move(se), count_};
}

EmpiricalCovariance empirical_covariance(const std::vector<FieldSample>& samples) {
  if (samples.size() < 2) {
    throw InsufficientSamples("covariance needs at least 2 samples, have " +
                              std::to_string(samples.size()));
  }
  CovarianceAccumulator acc(samples.front().points);
  for (const auto& s : samples) acc.add(s);
  return acc.finalize();
}

}  // namespace dgff
