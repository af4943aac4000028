#include "dgff/green.hpp"

#include <string>
#include <utility>
#include <vector>

#include "dgff/potential_kernel.hpp"

namespace dgff {

Eigen::SparseMatrix<double> lattice_system(const LatticeDomain& domain) {
  const auto n = static_cast<Eigen::Index>(domain.size());
  std::vector<Eigen::Triplet<double>> trips;
  trips.reserve(static_cast<std::size_t>(n) * 5);
  const auto& verts = domain.vertices();
  for (Eigen::Index i = 0; i < n; ++i) {
    trips.emplace_back(i, i, 1.0);
    for (const auto& d : kNeighborOffsets) {
      const auto j = domain.vertex_index({verts[i].x + d.x, verts[i].y + d.y});
      if (j) trips.emplace_back(i, static_cast<Eigen::Index>(*j), -0.25);
    }
  }
  Eigen::SparseMatrix<double> m(n, n);
  m.setFromTriplets(trips.begin(), trips.end());
  return m;
}

DirichletSolver::DirichletSolver(LatticeDomain domain)
    : domain_(std::move(domain)), system_(lattice_system(domain_)) {
  llt_.compute(system_);
  if (llt_.info() != Eigen::Success)
    throw SingularSystem("killed-walk system factorization failed (internal error)");
}

Eigen::VectorXd DirichletSolver::solve(const Eigen::VectorXd& rhs) const {
  return llt_.solve(rhs);
}

Eigen::VectorXd DirichletSolver::color(const Eigen::VectorXd& z) const {
  // system = Pi^T L L^T Pi, so Pi^T L^-T z has covariance system^-1.
  Eigen::VectorXd y = llt_.matrixU().solve(z);
  return llt_.permutationPinv() * y;
}

namespace {

Eigen::MatrixXd dense_green(const LatticeDomain& domain) {
  DirichletSolver solver(domain);
  const auto n = static_cast<Eigen::Index>(domain.size());
  Eigen::MatrixXd g(n, n);
  Eigen::VectorXd e = Eigen::VectorXd::Zero(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    e[i] = 1.0;
    g.col(i) = solver.solve(e);
    e[i] = 0.0;
  }
  return g;
}

Eigen::MatrixXd representation_green(const LatticeDomain& domain) {
  const auto& verts = domain.vertices();
  const auto& bdry = domain.outer_boundary();
  const auto n = static_cast<Eigen::Index>(verts.size());
  const auto b = static_cast<Eigen::Index>(bdry.size());

  // Harmonic measure of every vertex at once: H solves (I - P) H = C with
  // C(x, z) = (1/4) 1{x ~ z}.
  DirichletSolver solver(domain);
  Eigen::MatrixXd h(n, b);
  {
    Eigen::MatrixXd c = Eigen::MatrixXd::Zero(n, b);
    for (Eigen::Index k = 0; k < b; ++k) {
      for (const auto& d : kNeighborOffsets) {
        const auto i = domain.vertex_index({bdry[k].x + d.x, bdry[k].y + d.y});
        if (i) c(static_cast<Eigen::Index>(*i), k) = 0.25;
      }
    }
    for (Eigen::Index k = 0; k < b; ++k) h.col(k) = solver.solve(c.col(k));
  }

  Eigen::MatrixXd azy(b, n);
  for (Eigen::Index k = 0; k < b; ++k)
    for (Eigen::Index j = 0; j < n; ++j)
      azy(k, j) = potential_kernel(verts[j].x - bdry[k].x, verts[j].y - bdry[k].y);

  Eigen::MatrixXd g = h * azy;
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j)
      g(i, j) -= potential_kernel(verts[i].x - verts[j].x, verts[i].y - verts[j].y);
  return g;
}

}  // namespace

CovKernel green_matrix(const LatticeDomain& domain, GreenMode mode,
                       std::size_t dense_limit) {
  if (domain.size() > dense_limit)
    throw DenseLimitExceeded("domain has " + std::to_string(domain.size()) +
                             " vertices; dense Green limit is " +
                             std::to_string(dense_limit));
  Eigen::MatrixXd g = mode == GreenMode::direct_solve ? dense_green(domain)
                                                      : representation_green(domain);
  std::vector<Vec2> pts;
  pts.reserve(domain.size());
  for (const auto& v : domain.vertices())
    pts.push_back({static_cast<double>(v.x), static_cast<double>(v.y)});
  return CovKernel(std::move(pts), std::move(g));
}

Eigen::MatrixXd green_rows(const DirichletSolver& solver,
                           const std::vector<LatticePoint>& sources) {
  const auto n = static_cast<Eigen::Index>(solver.domain().size());
  Eigen::MatrixXd rows(static_cast<Eigen::Index>(sources.size()), n);
  Eigen::VectorXd e = Eigen::VectorXd::Zero(n);
  for (std::size_t s = 0; s < sources.size(); ++s) {
    const auto i = solver.domain().require_index(sources[s]);
    e[static_cast<Eigen::Index>(i)] = 1.0;
    rows.row(static_cast<Eigen::Index>(s)) = solver.solve(e).transpose();
    e[static_cast<Eigen::Index>(i)] = 0.0;
  }
  return rows;
}

HarmonicMeasureRow harmonic_measure_discrete(const DirichletSolver& solver,
                                             LatticePoint source) {
  const auto& domain = solver.domain();
  const auto n = static_cast<Eigen::Index>(domain.size());
  const auto idx = domain.require_index(source);
  Eigen::VectorXd e = Eigen::VectorXd::Zero(n);
  e[static_cast<Eigen::Index>(idx)] = 1.0;
  const Eigen::VectorXd g_row = solver.solve(e);  // G(x, .) by symmetry

  HarmonicMeasureRow row;
  row.source = source;
  row.boundary = domain.outer_boundary();
  row.probabilities.reserve(row.boundary.size());
  for (const auto& z : row.boundary) {
    double p = 0.0;
    for (const auto& d : kNeighborOffsets) {
      const auto i = domain.vertex_index({z.x + d.x, z.y + d.y});
      if (i) p += 0.25 * g_row[static_cast<Eigen::Index>(*i)];
    }
    row.probabilities.push_back(p);
  }
  return row;
}

HarmonicMeasureRow harmonic_measure_discrete(const LatticeDomain& domain,
                                             LatticePoint source) {
  return harmonic_measure_discrete(DirichletSolver(domain), source);
}

}  // namespace dgff
