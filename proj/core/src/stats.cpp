#include "dgff/stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace dgff {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Expected value of an exponential(lambda) variable truncated to [0, w].
double truncated_exp_mean(double lambda, double w) {
  if (lambda * w < 1e-8) {
    // Series around lambda = 0: w/2 - lambda w^2 / 12 + O(lambda^2).
    return 0.5 * w - lambda * w * w / 12.0;
  }
  return 1.0 / lambda - w / std::expm1(lambda * w);
}

// Per-sample Fisher information of the truncated exponential.
double truncated_exp_info(double lambda, double w) {
  if (lambda * w < 1e-8) return w * w / 12.0;
  const double em1 = std::expm1(lambda * w);
  return 1.0 / (lambda * lambda) -
         w * w * (em1 + 1.0) / (em1 * em1);
}

double ks_asymptotic_p(double lambda) {
  if (lambda < 1e-3) return 1.0;
  double sum = 0.0;
  double sign = 1.0;
  for (int k = 1; k <= 200; ++k) {
    const double term = std::exp(-2.0 * k * k * lambda * lambda);
    sum += sign * term;
    if (term < 1e-14) break;
    sign = -sign;
  }
  return std::clamp(2.0 * sum, 0.0, 1.0);
}

}  // namespace

StatReport intensity_profile(const std::vector<double>& centered_heights,
                             double t0, double t1, double target_rate,
                             double rel_tolerance, std::size_t min_count) {
  if (!(t1 > t0)) {
    throw DomainError("intensity_profile: window must satisfy t1 > t0");
  }
  const double w = t1 - t0;
  std::vector<double> y;
  for (double h : centered_heights) {
    if (h >= t0 && h <= t1) y.push_back(h - t0);
  }
  if (y.size() < min_count) {
    throw WindowEmpty("intensity_profile: window [" + std::to_string(t0) +
                      ", " + std::to_string(t1) + "] holds " +
                      std::to_string(y.size()) + " samples, needs " +
                      std::to_string(min_count));
  }
  const double mean =
      std::accumulate(y.begin(), y.end(), 0.0) / static_cast<double>(y.size());

  StatReport report;
  report.estimator = "intensity_profile";
  report.params = {{"t0", t0},
                   {"t1", t1},
                   {"count", static_cast<double>(y.size())},
                   {"target_rate", target_rate}};
  report.tolerance = rel_tolerance * target_rate;

  // The mean of a truncated exponential is decreasing in the rate and lives
  // in (0, w/2); a sample mean at or above w/2 admits no positive MLE.
  double lo = 1e-9;
  double hi = std::max(1e4, 4.0 / std::max(mean, 1e-12));
  if (truncated_exp_mean(lo, w) <= mean) {
    report.estimate = 0.0;
    report.standard_error = kInf;
    report.pass = false;
    return report;
  }
  for (int iter = 0; iter < 200; ++iter) {
    const double mid = 0.5 * (lo + hi);
    if (truncated_exp_mean(mid, w) > mean) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  const double rate = 0.5 * (lo + hi);
  const double info = std::max(truncated_exp_info(rate, w), 1e-300);
  report.estimate = rate;
  report.standard_error =
      1.0 / std::sqrt(static_cast<double>(y.size()) * info);
  report.pass = std::abs(rate - target_rate) <= report.tolerance;
  return report;
}

StatReport tail_ratio(const std::vector<double>& centered_maxima,
                      double threshold, double alpha_rate,
                      std::size_t min_exceedances) {
  if (threshold <= 0.0) {
    throw DomainError("tail_ratio: threshold must be positive");
  }
  const std::size_t n = centered_maxima.size();
  std::size_t k = 0;
  for (double v : centered_maxima) {
    if (v > threshold) ++k;
  }
  if (k < min_exceedances) {
    throw InsufficientExceedances(
        "tail_ratio: threshold " + std::to_string(threshold) + " has " +
        std::to_string(k) + " exceedances, needs " +
        std::to_string(min_exceedances));
  }
  const double p = static_cast<double>(k) / static_cast<double>(n);
  const double scale = std::exp(alpha_rate * threshold) / threshold;
  StatReport report;
  report.estimator = "tail_ratio";
  report.params = {{"threshold", threshold},
                   {"exceedances", static_cast<double>(k)},
                   {"replicas", static_cast<double>(n)},
                   {"alpha_rate", alpha_rate}};
  report.estimate = scale * p;
  report.standard_error =
      scale * std::sqrt(p * (1.0 - p) / static_cast<double>(n));
  report.tolerance = kInf;
  report.pass = true;
  return report;
}

std::vector<StatReport> tail_ratio(const std::vector<double>& centered_maxima,
                                   const std::vector<double>& thresholds,
                                   double alpha_rate,
                                   std::size_t min_exceedances) {
  std::vector<StatReport> reports;
  reports.reserve(thresholds.size());
  for (double t : thresholds) {
    reports.push_back(
        tail_ratio(centered_maxima, t, alpha_rate, min_exceedances));
  }
  return reports;
}

StatReport tail_ratio_flatness(const std::vector<StatReport>& ratios,
                               double max_over_min_bound) {
  if (ratios.size() < 2) {
    throw DomainError("tail_ratio_flatness: needs at least two ratios");
  }
  const StatReport* lo = &ratios.front();
  const StatReport* hi = &ratios.front();
  for (const StatReport& r : ratios) {
    if (r.estimate < lo->estimate) lo = &r;
    if (r.estimate > hi->estimate) hi = &r;
  }
  StatReport report;
  report.estimator = "tail_ratio_flatness";
  report.params = {{"thresholds", static_cast<double>(ratios.size())},
                   {"min_ratio", lo->estimate},
                   {"max_ratio", hi->estimate}};
  report.estimate = hi->estimate / lo->estimate;
  const double rel_hi = hi->standard_error / hi->estimate;
  const double rel_lo = lo->standard_error / lo->estimate;
  report.standard_error =
      report.estimate * std::sqrt(rel_hi * rel_hi + rel_lo * rel_lo);
  report.tolerance = max_over_min_bound;
  report.pass = report.estimate <= max_over_min_bound;
  return report;
}

namespace {

// Normalized cell probabilities of a density field.
std::vector<double> cell_probabilities(const DensityField& psi) {
  double total = 0.0;
  for (double v : psi.values) total += v;
  if (total <= 0.0) {
    throw DomainError("argmax_density: density field has no mass");
  }
  std::vector<double> q(psi.values.size());
  for (std::size_t i = 0; i < q.size(); ++i) q[i] = psi.values[i] / total;
  return q;
}

std::vector<std::size_t> cell_histogram(const std::vector<Vec2>& positions,
                                        const DensityField& psi) {
  const double dx = psi.box.width() / psi.nx;
  const double dy = psi.box.height() / psi.ny;
  std::vector<std::size_t> hits(psi.values.size(), 0);
  for (const Vec2& p : positions) {
    const int ix = static_cast<int>(std::floor((p.x - psi.box.lo.x) / dx));
    const int iy = static_cast<int>(std::floor((p.y - psi.box.lo.y) / dy));
    if (ix < 0 || ix >= psi.nx || iy < 0 || iy >= psi.ny) {
      throw DomainError("argmax_density: position outside the density box");
    }
    ++hits[static_cast<std::size_t>(iy) * psi.nx + ix];
  }
  return hits;
}

}  // namespace

std::vector<StatReport> argmax_density(const std::vector<Vec2>& positions,
                                       const DensityField& psi,
                                       double rel_tolerance,
                                       double min_expected_hits) {
  if (positions.empty()) {
    throw InsufficientSamples("argmax_density: no argmax events");
  }
  const std::vector<double> q = cell_probabilities(psi);
  const std::vector<std::size_t> hits = cell_histogram(positions, psi);
  const double n = static_cast<double>(positions.size());

  std::vector<StatReport> reports;
  for (std::size_t i = 0; i < q.size(); ++i) {
    if (n * q[i] < min_expected_hits) continue;
    const double p = static_cast<double>(hits[i]) / n;
    StatReport report;
    report.estimator = "argmax_density_cell";
    report.params = {{"cell_x", psi.centers[i].x},
                     {"cell_y", psi.centers[i].y},
                     {"hits", static_cast<double>(hits[i])},
                     {"expected", n * q[i]}};
    report.estimate = p / q[i];
    report.standard_error = std::sqrt(p * (1.0 - p) / n) / q[i];
    report.tolerance = rel_tolerance;
    report.pass = std::abs(report.estimate - 1.0) <= rel_tolerance;
    reports.push_back(std::move(report));
  }
  return reports;
}

DensityField aggregate_density(const DensityField& psi, int factor) {
  if (factor < 1 || psi.nx % factor != 0 || psi.ny % factor != 0) {
    throw DomainError("aggregate_density: grid not divisible by factor");
  }
  DensityField out;
  out.nx = psi.nx / factor;
  out.ny = psi.ny / factor;
  out.box = psi.box;
  out.cell_area = psi.cell_area * factor * factor;
  const double hx = psi.box.width() / out.nx;
  const double hy = psi.box.height() / out.ny;
  out.centers.resize(static_cast<std::size_t>(out.nx) * out.ny);
  out.values.assign(static_cast<std::size_t>(out.nx) * out.ny, 0.0);
  for (int iy = 0; iy < out.ny; ++iy) {
    for (int ix = 0; ix < out.nx; ++ix) {
      const std::size_t i = static_cast<std::size_t>(iy) * out.nx + ix;
      out.centers[i] = Vec2{psi.box.lo.x + (ix + 0.5) * hx,
                            psi.box.lo.y + (iy + 0.5) * hy};
      double sum = 0.0;
      for (int sy = 0; sy < factor; ++sy) {
        for (int sx = 0; sx < factor; ++sx) {
          sum += psi.values[static_cast<std::size_t>(iy * factor + sy) *
                                psi.nx +
                            (ix * factor + sx)];
        }
      }
      // Mean value over the block, so value * cell_area stays the integral.
      out.values[i] = sum / (factor * factor);
    }
  }
  return out;
}

StatReport argmax_corner_center_ratio(const std::vector<Vec2>& positions,
                                      const DensityField& psi,
                                      int corner_cells, int center_cells,
                                      double rel_tolerance,
                                      std::size_t min_events) {
  if (positions.size() < min_events) {
    throw InsufficientSamples("argmax_corner_center_ratio: " +
                              std::to_string(positions.size()) +
                              " events, needs " + std::to_string(min_events));
  }
  if (corner_cells < 1 || center_cells < 1 ||
      2 * corner_cells > psi.nx || 2 * corner_cells > psi.ny ||
      center_cells > psi.nx - 2 * corner_cells ||
      center_cells > psi.ny - 2 * corner_cells) {
    throw DomainError(
        "argmax_corner_center_ratio: blocks do not fit disjointly");
  }
  const std::vector<double> q = cell_probabilities(psi);
  const std::vector<std::size_t> hits = cell_histogram(positions, psi);
  const double n = static_cast<double>(positions.size());

  // Pool the four corner blocks against one centered block.
  double corner_q = 0.0, center_q = 0.0;
  double corner_hits = 0.0, center_hits = 0.0;
  const int b = corner_cells;
  const int c = center_cells;
  const int cx0 = (psi.nx - c) / 2;
  const int cy0 = (psi.ny - c) / 2;
  for (int iy = 0; iy < psi.ny; ++iy) {
    for (int ix = 0; ix < psi.nx; ++ix) {
      const std::size_t i = static_cast<std::size_t>(iy) * psi.nx + ix;
      const bool in_x = ix < b || ix >= psi.nx - b;
      const bool in_y = iy < b || iy >= psi.ny - b;
      if (in_x && in_y) {
        corner_q += q[i];
        corner_hits += static_cast<double>(hits[i]);
      } else if (ix >= cx0 && ix < cx0 + c && iy >= cy0 && iy < cy0 + c) {
        center_q += q[i];
        center_hits += static_cast<double>(hits[i]);
      }
    }
  }
  const double p_corner = std::max(corner_hits, 1.0) / n;
  const double p_center = std::max(center_hits, 1.0) / n;

  StatReport report;
  report.estimator = "argmax_corner_center_ratio";
  report.params = {{"corner_cells", static_cast<double>(b)},
                   {"center_cells", static_cast<double>(c)},
                   {"corner_hits", corner_hits},
                   {"center_hits", center_hits},
                   {"corner_mass", corner_q},
                   {"center_mass", center_q},
                   {"events", n}};
  report.estimate =
      (corner_hits / n / corner_q) / (center_hits / n / center_q);
  report.standard_error =
      report.estimate * std::sqrt((1.0 - p_corner) / (n * p_corner) +
                                  (1.0 - p_center) / (n * p_center));
  report.tolerance = rel_tolerance;
  report.pass = std::abs(report.estimate - 1.0) <= rel_tolerance;
  return report;
}

double ks_distance(std::vector<double> a, std::vector<double> b) {
  if (a.empty() || b.empty()) {
    throw InsufficientSamples("ks_distance: empty sample");
  }
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  const double na = static_cast<double>(a.size());
  const double nb = static_cast<double>(b.size());
  std::size_t i = 0, j = 0;
  double d = 0.0;
  while (i < a.size() && j < b.size()) {
    const double x = std::min(a[i], b[j]);
    while (i < a.size() && a[i] <= x) ++i;
    while (j < b.size() && b[j] <= x) ++j;
    d = std::max(d, std::abs(static_cast<double>(i) / na -
                             static_cast<double>(j) / nb));
  }
  return d;
}

StatReport two_sample_ks(const std::vector<double>& a,
                         const std::vector<double>& b, double significance,
                         const std::string& name) {
  const double d = ks_distance(a, b);
  const double na = static_cast<double>(a.size());
  const double nb = static_cast<double>(b.size());
  const double ne = na * nb / (na + nb);
  const double lambda = (std::sqrt(ne) + 0.12 + 0.11 / std::sqrt(ne)) * d;
  const double p = ks_asymptotic_p(lambda);
  StatReport report;
  report.estimator = name;
  report.params = {{"p_value", p},
                   {"n_a", na},
                   {"n_b", nb},
                   {"ks_distance", d}};
  report.estimate = d;
  report.standard_error = 0.5 / std::sqrt(ne);
  report.tolerance = significance;
  report.pass = p >= significance;
  return report;
}

StatReport max_law_stability(const std::vector<double>& coarse,
                             const std::vector<double>& fine,
                             double ks_bound) {
  const double d = ks_distance(coarse, fine);
  const double na = static_cast<double>(coarse.size());
  const double nb = static_cast<double>(fine.size());
  const double mean_a =
      std::accumulate(coarse.begin(), coarse.end(), 0.0) / na;
  const double mean_b = std::accumulate(fine.begin(), fine.end(), 0.0) / nb;
  StatReport report;
  report.estimator = "max_law_stability";
  report.params = {{"mean_coarse", mean_a},
                   {"mean_fine", mean_b},
                   {"mean_shift", mean_b - mean_a},
                   {"n_coarse", na},
                   {"n_fine", nb}};
  report.estimate = d;
  report.standard_error = 0.5 / std::sqrt(na * nb / (na + nb));
  report.tolerance = ks_bound;
  report.pass = d <= ks_bound;
  return report;
}

StatReport separation_probability(
    const std::vector<std::vector<LatticePoint>>& replicas, double r,
    int scale, double bound) {
  if (replicas.empty()) {
    throw InsufficientSamples("separation_probability: no replicas");
  }
  const double inner = r * r;
  const double outer_len = static_cast<double>(scale) / r;
  const double outer = outer_len * outer_len;
  std::size_t flagged = 0;
  for (const std::vector<LatticePoint>& pts : replicas) {
    bool found = false;
    for (std::size_t i = 0; i < pts.size() && !found; ++i) {
      for (std::size_t j = i + 1; j < pts.size(); ++j) {
        const double dx = pts[i].x - pts[j].x;
        const double dy = pts[i].y - pts[j].y;
        const double d2 = dx * dx + dy * dy;
        if (d2 > inner && d2 < outer) {
          found = true;
          break;
        }
      }
    }
    if (found) ++flagged;
  }
  const double n = static_cast<double>(replicas.size());
  const double p = static_cast<double>(flagged) / n;
  StatReport report;
  report.estimator = "separation_probability";
  report.params = {{"r", r},
                   {"scale", static_cast<double>(scale)},
                   {"replicas", n},
                   {"flagged", static_cast<double>(flagged)}};
  report.estimate = p;
  report.standard_error = std::sqrt(p * (1.0 - p) / n);
  report.tolerance = bound;
  report.pass = p <= bound;
  return report;
}

StatReport level_set_size(const std::vector<std::size_t>& sizes,
                          double bound) {
  if (sizes.empty()) {
    throw InsufficientSamples("level_set_size: no replicas");
  }
  const double n = static_cast<double>(sizes.size());
  double mean = 0.0;
  for (std::size_t s : sizes) mean += static_cast<double>(s);
  mean /= n;
  double var = 0.0;
  for (std::size_t s : sizes) {
    const double d = static_cast<double>(s) - mean;
    var += d * d;
  }
  var = sizes.size() > 1 ? var / (n - 1.0) : 0.0;
  StatReport report;
  report.estimator = "level_set_size";
  report.params = {{"replicas", n}};
  report.estimate = mean;
  report.standard_error = std::sqrt(var / n);
  report.tolerance = bound;
  report.pass = mean <= bound;
  return report;
}

}  // namespace dgff
