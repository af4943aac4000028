#include "dgff/heat_kernel.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <optional>
#include <string>
#include <utility>

#include "dgff/green.hpp"
#include "dgff/lattice.hpp"

namespace dgff {

namespace {

// Smallest eigenvalue cap M such that the certified tail bound
//   sum_{mu > M} e^{-eps mu} / mu * |phi(x) phi(y)|
//     <= (e^{-eps M / 2} / M) * p_{eps/2}(x, x)
//     <= (e^{-eps M / 2} / M) * 2 / (pi eps)
// drops below the tolerance.  The middle step is Cauchy-Schwarz over the
// eigen-expansion of the heat kernel; the last uses the whole-plane bound
// p_s(x, x) <= 1 / (pi s).
double certified_cap(double eps, double tolerance, double min_eigenvalue) {
  double cap = std::max(min_eigenvalue, 1.0);
  for (int iter = 0; iter < 400; ++iter) {
    const double bound = std::exp(-0.5 * eps * cap) / cap * 2.0 /
                         (3.14159265358979323846 * eps);
    if (bound < tolerance) return cap;
    cap *= 1.5;
  }
  throw SeriesNotConverged("truncated_green: certified cap search failed");
}

struct RectangleInfo {
  Vec2 lo;
  double width = 0.0;
  double height = 0.0;
};

RectangleInfo require_rectangle(const ContinuumDomain& domain) {
  if (domain.components().size() != 1 || !domain.holes().empty() ||
      !std::holds_alternative<Rect>(domain.components().front())) {
    throw UnsupportedDomainShape(
        "truncated_green: rectangle series needs a single rectangle with no "
        "holes");
  }
  const Rect& r = std::get<Rect>(domain.components().front());
  if (!(r.width() > 0.0) || !(r.height() > 0.0)) {
    throw UnsupportedDomainShape("truncated_green: degenerate rectangle");
  }
  return RectangleInfo{r.lo, r.width(), r.height()};
}

Disc require_disc(const ContinuumDomain& domain) {
  if (domain.components().size() != 1 || !domain.holes().empty() ||
      !std::holds_alternative<Disc>(domain.components().front())) {
    throw UnsupportedDomainShape(
        "truncated_green: disc series needs a single disc with no holes");
  }
  return std::get<Disc>(domain.components().front());
}

// Index of a coordinate in its deduplicated sorted list (exact match).
std::vector<int> dedupe(const std::vector<double>& coords,
                        std::vector<double>& unique_out) {
  std::map<double, int> index;
  for (double c : coords) index.emplace(c, 0);
  unique_out.clear();
  for (auto& [value, slot] : index) {
    slot = static_cast<int>(unique_out.size());
    unique_out.push_back(value);
  }
  std::vector<int> result(coords.size());
  for (std::size_t i = 0; i < coords.size(); ++i) {
    result[i] = index[coords[i]];
  }
  return result;
}

Eigen::MatrixXd rectangle_series(const RectangleInfo& rect,
                                 const std::vector<Vec2>& grid, double eps,
                                 const TruncatedGreenOptions& options) {
  const double pi = 3.14159265358979323846;
  const double w = rect.width, h = rect.height;
  const double mu11 =
      (pi * pi / 4.0) * (1.0 / (w * w) + 1.0 / (h * h));
  const double cap = certified_cap(eps, options.tail_tolerance, mu11);
  const std::size_t jmax = static_cast<std::size_t>(
      std::ceil(2.0 * w / pi * std::sqrt(cap)));
  const std::size_t kmax = static_cast<std::size_t>(
      std::ceil(2.0 * h / pi * std::sqrt(cap)));
  if (jmax * kmax > options.max_terms) {
    throw SeriesNotConverged("truncated_green: rectangle series needs " +
                             std::to_string(jmax * kmax) + " terms, cap is " +
                             std::to_string(options.max_terms));
  }

  const std::size_t n = grid.size();
  std::vector<double> xs(n), ys(n);
  for (std::size_t i = 0; i < n; ++i) {
    const Vec2& p = grid[i];
    if (p.x < rect.lo.x || p.x > rect.lo.x + w || p.y < rect.lo.y ||
        p.y > rect.lo.y + h) {
      throw PointOutsideDomain("truncated_green: grid point outside domain");
    }
    xs[i] = p.x - rect.lo.x;
    ys[i] = p.y - rect.lo.y;
  }
  std::vector<double> ux, uy;
  const std::vector<int> ix = dedupe(xs, ux);
  const std::vector<int> iy = dedupe(ys, uy);
  const std::size_t nx = ux.size(), ny = uy.size();

  // Sine tables over the deduplicated coordinates.
  std::vector<double> sx(jmax * nx), sy(kmax * ny);
  for (std::size_t j = 1; j <= jmax; ++j) {
    for (std::size_t a = 0; a < nx; ++a) {
      sx[(j - 1) * nx + a] = std::sin(pi * static_cast<double>(j) * ux[a] / w);
    }
  }
  for (std::size_t k = 1; k <= kmax; ++k) {
    for (std::size_t a = 0; a < ny; ++a) {
      sy[(k - 1) * ny + a] = std::sin(pi * static_cast<double>(k) * uy[a] / h);
    }
  }

  // Inner sums over k for every j and unordered pair of y-coordinates:
  //   B[j][(a,b)] = sum_k  e^{-eps mu_jk} / mu_jk  sy_k(a) sy_k(b).
  const std::size_t npair = ny * (ny + 1) / 2;
  std::vector<double> b(jmax * npair, 0.0);
  std::vector<double> pair_scratch(npair);
  for (std::size_t j = 1; j <= jmax; ++j) {
    std::fill(pair_scratch.begin(), pair_scratch.end(), 0.0);
    const double jj = (pi * pi / 4.0) * static_cast<double>(j * j) / (w * w);
    for (std::size_t k = 1; k <= kmax; ++k) {
      const double mu =
          jj + (pi * pi / 4.0) * static_cast<double>(k * k) / (h * h);
      const double weight = std::exp(-eps * mu) / mu;
      if (weight == 0.0) continue;
      const double* row = &sy[(k - 1) * ny];
      std::size_t slot = 0;
      for (std::size_t a = 0; a < ny; ++a) {
        const double wa = weight * row[a];
        for (std::size_t bidx = a; bidx < ny; ++bidx) {
          pair_scratch[slot++] += wa * row[bidx];
        }
      }
    }
    std::copy(pair_scratch.begin(), pair_scratch.end(), &b[(j - 1) * npair]);
  }

  // Pair slot of (a, b) with a <= b in the packed upper triangle.
  std::vector<std::size_t> row_base(ny);
  for (std::size_t a = 0; a < ny; ++a) {
    row_base[a] = a * ny - a * (a + 1) / 2;
  }

  Eigen::MatrixXd out(n, n);
  const double norm = 4.0 / (w * h);
  for (std::size_t p = 0; p < n; ++p) {
    for (std::size_t q = p; q < n; ++q) {
      const std::size_t a = static_cast<std::size_t>(std::min(iy[p], iy[q]));
      const std::size_t c = static_cast<std::size_t>(std::max(iy[p], iy[q]));
      const std::size_t pair = row_base[a] + c;
      double sum = 0.0;
      for (std::size_t j = 0; j < jmax; ++j) {
        sum += sx[j * nx + ix[p]] * sx[j * nx + ix[q]] * b[j * npair + pair];
      }
      out(static_cast<Eigen::Index>(p), static_cast<Eigen::Index>(q)) =
          norm * sum;
      out(static_cast<Eigen::Index>(q), static_cast<Eigen::Index>(p)) =
          norm * sum;
    }
  }
  return out;
}

Eigen::MatrixXd disc_series(const Disc& disc, const std::vector<Vec2>& grid,
                            double eps, const TruncatedGreenOptions& options) {
  const double pi = 3.14159265358979323846;
  const double R = disc.radius;
  // Unit-disc reduction: G_t^{R disc}(x, y) = G^{unit}(u_x, u_y) at the
  // rescaled truncation eps' = eps / R^2.
  const double eps_unit = eps / (R * R);
  const double j01 = 2.404825557695773;
  const double cap =
      certified_cap(eps_unit, options.tail_tolerance, j01 * j01 / 4.0);
  const double zmax = 2.0 * std::sqrt(cap);

  const std::size_t n = grid.size();
  std::vector<double> rad(n), theta(n);
  for (std::size_t i = 0; i < n; ++i) {
    const Vec2 u = (grid[i] - disc.center) * (1.0 / R);
    rad[i] = u.norm();
    theta[i] = std::atan2(u.y, u.x);
    if (rad[i] > 1.0 + 1e-12) {
      throw PointOutsideDomain("truncated_green: grid point outside disc");
    }
  }

  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(n, n);
  std::size_t terms = 0;
  std::vector<double> radial(n);
  for (int m = 0;; ++m) {
    // Zeros of J_m start above m, so orders beyond zmax contribute nothing.
    if (static_cast<double>(m) > zmax) break;
    bool any = false;
    for (int k = 1;; ++k) {
      const std::vector<double> zs = bessel_zeros(m, k);
      const double z = zs.back();
      if (z > zmax) break;
      any = true;
      if (++terms > options.max_terms) {
        throw SeriesNotConverged("truncated_green: disc series exceeded " +
                                 std::to_string(options.max_terms) +
                                 " terms");
      }
      const double mu = z * z / 4.0;
      const double weight = std::exp(-eps_unit * mu) / mu;
      const double denom = bessel_j(m + 1, z);
      const double fac =
          (m == 0 ? 1.0 : 2.0) / (pi * denom * denom) * weight;
      for (std::size_t i = 0; i < n; ++i) radial[i] = bessel_j(m, z * rad[i]);
      for (std::size_t p = 0; p < n; ++p) {
        for (std::size_t q = p; q < n; ++q) {
          const double ang =
              m == 0 ? 1.0 : std::cos(m * (theta[p] - theta[q]));
          const double v = fac * ang * radial[p] * radial[q];
          out(static_cast<Eigen::Index>(p), static_cast<Eigen::Index>(q)) += v;
        }
      }
    }
    if (!any) break;
  }
  for (std::size_t p = 0; p < n; ++p) {
    for (std::size_t q = p + 1; q < n; ++q) {
      out(static_cast<Eigen::Index>(q), static_cast<Eigen::Index>(p)) =
          out(static_cast<Eigen::Index>(p), static_cast<Eigen::Index>(q));
    }
  }
  return out;
}

// Chebyshev coefficients b_k = e^{-tau} I_k(tau) of the semigroup
// e^{tau (P - I)}, via the downward continued-fraction ratio recurrence
// I_k / I_{k-1}; normalized with I_0 + 2 sum I_k = e^tau.  Truncated where
// the certified operator tail 2 sum_{k > K} b_k falls below the tolerance.
std::vector<double> semigroup_coefficients(double tau, double tolerance) {
  if (tau <= 0.0) return {1.0};
  const int kmax = static_cast<int>(tau + 14.0 * std::sqrt(tau + 4.0) + 40.0);
  std::vector<double> ratio(static_cast<std::size_t>(kmax) + 1, 0.0);
  for (int k = kmax; k >= 1; --k) {
    ratio[static_cast<std::size_t>(k)] =
        1.0 / (2.0 * k / tau + (k < kmax ? ratio[static_cast<std::size_t>(k) + 1]
                                         : 0.0));
  }
  std::vector<double> b(static_cast<std::size_t>(kmax) + 1, 0.0);
  b[0] = 1.0;
  double sum = 1.0;
  for (int k = 1; k <= kmax; ++k) {
    b[static_cast<std::size_t>(k)] =
        b[static_cast<std::size_t>(k) - 1] * ratio[static_cast<std::size_t>(k)];
    sum += 2.0 * b[static_cast<std::size_t>(k)];
  }
  for (double& v : b) v /= sum;
  // Trim the negligible tail (coefficients are positive and decreasing
  // beyond k ~ tau).
  double tail = 0.0;
  std::size_t keep = b.size();
  while (keep > 1 && tail + 2.0 * b[keep - 1] < tolerance) {
    tail += 2.0 * b[keep - 1];
    --keep;
  }
  b.resize(keep);
  return b;
}

Eigen::MatrixXd lattice_semigroup(const ContinuumDomain& domain,
                                  const std::vector<Vec2>& grid, double eps,
                                  const TruncatedGreenOptions& options) {
  const int scale = options.lattice_scale;
  const LatticeDomain lattice = discretize(domain, scale);
  const DirichletSolver solver(lattice);
  const auto& system = solver.system();  // I - P
  const double tau = eps * static_cast<double>(scale) * scale;
  const std::vector<double> coeffs = semigroup_coefficients(tau, 1e-12);

  // Map each grid point to its nearest lattice vertex.
  const std::size_t n = grid.size();
  std::vector<std::size_t> vertex_of(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double gx = grid[i].x * scale, gy = grid[i].y * scale;
    const int cx = static_cast<int>(std::llround(gx));
    const int cy = static_cast<int>(std::llround(gy));
    std::optional<std::size_t> best;
    double best_d2 = 0.0;
    for (int dy = -3; dy <= 3; ++dy) {
      for (int dx = -3; dx <= 3; ++dx) {
        const auto idx = lattice.vertex_index(LatticePoint{cx + dx, cy + dy});
        if (!idx) continue;
        const double ddx = gx - (cx + dx), ddy = gy - (cy + dy);
        const double d2 = ddx * ddx + ddy * ddy;
        if (!best || d2 < best_d2) {
          best = idx;
          best_d2 = d2;
        }
      }
    }
    if (!best) {
      throw PointOutsideDomain(
          "truncated_green: grid point has no nearby lattice vertex at scale " +
          std::to_string(scale));
    }
    vertex_of[i] = *best;
  }

  // One semigroup-then-Green column per distinct vertex.
  std::map<std::size_t, Eigen::VectorXd> columns;
  const Eigen::Index m = static_cast<Eigen::Index>(lattice.size());
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t v = vertex_of[i];
    if (columns.count(v)) continue;
    Eigen::VectorXd prev = Eigen::VectorXd::Zero(m);
    prev[static_cast<Eigen::Index>(v)] = 1.0;
    Eigen::VectorXd acc = coeffs[0] * prev;
    if (coeffs.size() > 1) {
      Eigen::VectorXd curr = prev - system * prev;  // P e_v
      acc += 2.0 * coeffs[1] * curr;
      for (std::size_t k = 2; k < coeffs.size(); ++k) {
        Eigen::VectorXd next = 2.0 * (curr - system * curr) - prev;
        acc += 2.0 * coeffs[k] * next;
        prev = std::move(curr);
        curr = std::move(next);
      }
    }
    columns.emplace(v, solver.solve(acc));
  }

  Eigen::MatrixXd out(n, n);
  for (std::size_t p = 0; p < n; ++p) {
    const Eigen::VectorXd& col = columns.at(vertex_of[p]);
    for (std::size_t q = 0; q < n; ++q) {
      out(static_cast<Eigen::Index>(q), static_cast<Eigen::Index>(p)) =
          col[static_cast<Eigen::Index>(vertex_of[q])];
    }
  }
  return 0.5 * (out + out.transpose());
}

}  // namespace

double bessel_j(int order, double x) {
  if (order < 0 || x < 0.0) {
    throw DomainError("bessel_j: needs order >= 0 and x >= 0");
  }
  if (x == 0.0) return order == 0 ? 1.0 : 0.0;
  if (x < 1e-8) {
    // Leading term of the ascending series, enough at this magnitude.
    if (order == 0) return 1.0 - 0.25 * x * x;
    if (order == 1) return 0.5 * x;
    return 0.0;
  }
  // Miller downward recurrence: stable for every order, normalized with
  // J_0(x) + 2 sum_k J_{2k}(x) = 1.
  const int start = std::max(order, static_cast<int>(std::ceil(x))) + 30 +
                    static_cast<int>(8.0 * std::sqrt(
                        static_cast<double>(std::max(order, 8))));
  double jp = 0.0;       // J_{k+1}
  double jc = 1e-300;    // J_k (arbitrary scale)
  double result = order == start ? jc : 0.0;
  double norm = start % 2 == 0 ? 2.0 * jc : 0.0;
  for (int k = start; k >= 1; --k) {
    double jm = 2.0 * k / x * jc - jp;
    jp = jc;
    jc = jm;
    if (std::abs(jc) > 1e250) {
      jc *= 1e-250;
      jp *= 1e-250;
      result *= 1e-250;
      norm *= 1e-250;
    }
    const int idx = k - 1;
    if (idx == order) result = jc;
    if (idx % 2 == 0) norm += (idx == 0 ? 1.0 : 2.0) * jc;
  }
  return result / norm;
}

std::vector<double> bessel_zeros(int order, int count) {
  if (order < 0 || count < 1) {
    throw DomainError("bessel_zeros: needs order >= 0 and count >= 1");
  }
  static std::map<int, std::vector<double>> cache;
  static std::mutex cache_mutex;
  std::lock_guard<std::mutex> lock(cache_mutex);
  std::vector<double>& zeros = cache[order];
  if (static_cast<int>(zeros.size()) >= count) {
    return {zeros.begin(), zeros.begin() + count};
  }
  // Scan for sign changes; consecutive zeros of J_m are separated by more
  // than 3 for every order, so a step of 1.5 cannot skip a zero.  Restarting
  // half a step past the last known zero keeps its residual sign noise out
  // of the scan.
  const double step = 1.5;
  double x = zeros.empty() ? std::max(static_cast<double>(order), 1e-3)
                           : zeros.back() + 0.5 * step;
  double fx = bessel_j(order, x);
  while (static_cast<int>(zeros.size()) < count) {
    double x2 = x + step;
    double f2 = bessel_j(order, x2);
    if ((fx < 0.0) != (f2 < 0.0)) {
      double lo = x, hi = x2;
      for (int iter = 0; iter < 80; ++iter) {
        const double mid = 0.5 * (lo + hi);
        const double fm = bessel_j(order, mid);
        if ((fx < 0.0) != (fm < 0.0)) {
          hi = mid;
        } else {
          lo = mid;
        }
      }
      zeros.push_back(0.5 * (lo + hi));
    }
    x = x2;
    fx = f2;
  }
  return {zeros.begin(), zeros.begin() + count};
}

TruncatedKernel truncated_green(const ContinuumDomain& domain,
                                const std::vector<Vec2>& grid, double t,
                                const TruncatedGreenOptions& options) {
  if (grid.empty()) {
    throw DomainError("truncated_green: empty grid");
  }
  if (!(t >= 0.0)) {
    throw DomainError("truncated_green: t must be nonnegative");
  }
  if (domain.empty()) {
    throw UnsupportedDomainShape("truncated_green: empty domain");
  }
  const double eps = std::exp(-2.0 * t);

  TruncatedGreenMethod method = options.method;
  if (method == TruncatedGreenMethod::automatic) {
    if (domain.components().size() == 1 && domain.holes().empty()) {
      if (std::holds_alternative<Rect>(domain.components().front())) {
        method = TruncatedGreenMethod::rectangle_series;
      } else if (std::holds_alternative<Disc>(domain.components().front())) {
        method = TruncatedGreenMethod::disc_series;
      } else {
        method = TruncatedGreenMethod::lattice_semigroup;
      }
    } else {
      method = TruncatedGreenMethod::lattice_semigroup;
    }
  }

  TruncatedKernel kernel;
  kernel.grid = grid;
  kernel.t = t;
  switch (method) {
    case TruncatedGreenMethod::rectangle_series:
      kernel.matrix =
          rectangle_series(require_rectangle(domain), grid, eps, options);
      break;
    case TruncatedGreenMethod::disc_series:
      kernel.matrix = disc_series(require_disc(domain), grid, eps, options);
      break;
    case TruncatedGreenMethod::lattice_semigroup:
      kernel.matrix = lattice_semigroup(domain, grid, eps, options);
      break;
    case TruncatedGreenMethod::automatic:
      break;  // unreachable
  }
  return kernel;
}

}  // namespace dgff
