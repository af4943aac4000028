#include "dgff/extremes.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "dgff/constants.hpp"

namespace dgff {

CenteringValue centering(int scale) {
  if (scale < 2) {
    throw DomainError("centering: scale must be at least 2, got " +
                      std::to_string(scale));
  }
  const double sqrt_g = std::sqrt(constants().g);
  const double log_n = std::log(static_cast<double>(scale));
  const double loglog_n = std::log(log_n);
  CenteringValue result;
  result.value = 2.0 * sqrt_g * log_n - 0.75 * sqrt_g * loglog_n;
  result.loglog_negative = loglog_n < 0.0;
  return result;
}

double centering_strict(int scale) {
  const CenteringValue value = centering(scale);
  if (value.loglog_negative) {
    throw DomainError(
        "centering_strict: ln ln N <= 0 at scale " + std::to_string(scale) +
        "; the correction term is only meaningful for scale >= 3");
  }
  return value.value;
}

int default_extraction_radius(int scale) {
  if (scale < 2) {
    throw DomainError("default_extraction_radius: scale must be at least 2");
  }
  return static_cast<int>(
      std::floor(std::pow(static_cast<double>(scale), 0.25)));
}

std::vector<LatticePoint> ball_offsets(double radius, BallNorm norm) {
  if (radius < 0.0) {
    throw DomainError("ball_offsets: radius must be nonnegative");
  }
  const int bound = static_cast<int>(std::floor(radius));
  const double r2 = radius * radius;
  std::vector<LatticePoint> offsets;
  for (int dy = -bound; dy <= bound; ++dy) {
    for (int dx = -bound; dx <= bound; ++dx) {
      if (norm == BallNorm::euclidean &&
          static_cast<double>(dx) * dx + static_cast<double>(dy) * dy > r2) {
        continue;
      }
      offsets.push_back(LatticePoint{dx, dy});
    }
  }
  std::sort(offsets.begin(), offsets.end(),
            [](const LatticePoint& a, const LatticePoint& b) {
              const long la = static_cast<long>(a.x) * a.x +
                              static_cast<long>(a.y) * a.y;
              const long lb = static_cast<long>(b.x) * b.x +
                              static_cast<long>(b.y) * b.y;
              if (la != lb) return la < lb;
              if (a.y != b.y) return a.y < b.y;
              return a.x < b.x;
            });
  return offsets;
}

LocalMaxima extract_local_maxima(const FieldSample& sample, double radius,
                                 std::optional<double> threshold,
                                 BallNorm norm) {
  if (sample.lattice.empty()) {
    throw DomainError("extract_local_maxima: sample has no lattice domain");
  }
  if (radius < 1.0) {
    throw DomainError("extract_local_maxima: radius must be at least 1");
  }
  const LatticeDomain& domain = sample.lattice;
  const int scale = domain.scale();
  const CenteringValue m = centering(scale);

  std::vector<LatticePoint> offsets = ball_offsets(radius, norm);
  // Drop the origin: a vertex competes against the other ball members only.
  offsets.erase(std::remove_if(offsets.begin(), offsets.end(),
                               [](const LatticePoint& p) {
                                 return p.x == 0 && p.y == 0;
                               }),
                offsets.end());

  LocalMaxima result;
  result.points.scale = scale;
  result.points.radius = radius;
  result.points.centering_value = m.value;
  result.points.master_seed = sample.master_seed;
  result.points.stream_id = sample.stream_id;
  result.threshold = threshold;

  const std::vector<LatticePoint>& vertices = domain.vertices();
  const double inv_scale = 1.0 / static_cast<double>(scale);

  std::size_t argmax_index = 0;
  double max_value = sample.values[0];
  for (std::size_t i = 1; i < vertices.size(); ++i) {
    if (sample.values[static_cast<Eigen::Index>(i)] > max_value) {
      max_value = sample.values[static_cast<Eigen::Index>(i)];
      argmax_index = i;
    }
  }
  result.argmax = vertices[argmax_index];
  result.max_value = max_value;

  const double level_cut =
      threshold ? m.value - *threshold
                : std::numeric_limits<double>::infinity();

  for (std::size_t i = 0; i < vertices.size(); ++i) {
    const LatticePoint p = vertices[i];
    const double h = sample.values[static_cast<Eigen::Index>(i)];
    if (threshold && h >= level_cut) result.level_set.push_back(p);
    bool is_max = true;
    for (const LatticePoint& d : offsets) {
      const auto j = domain.vertex_index(LatticePoint{p.x + d.x, p.y + d.y});
      if (j && sample.values[static_cast<Eigen::Index>(*j)] > h) {
        is_max = false;
        break;
      }
    }
    if (is_max) {
      result.points.atoms.push_back(ExtremalAtom{
          p, Vec2{p.x * inv_scale, p.y * inv_scale}, h - m.value});
    }
  }
  return result;
}

}  // namespace dgff
