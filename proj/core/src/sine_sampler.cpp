#include "dgff/fields.hpp"

#include <fftw3.h>

#include <cmath>
#include <map>
#include <mutex>
#include <new>
#include <utility>

namespace dgff {

namespace {

struct FftwBuffer {
  explicit FftwBuffer(std::size_t n)
      : data(static_cast<double*>(fftw_malloc(n * sizeof(double)))) {
    if (data == nullptr) throw std::bad_alloc();
  }
  ~FftwBuffer() { fftw_free(data); }
  FftwBuffer(const FftwBuffer&) = delete;
  FftwBuffer& operator=(const FftwBuffer&) = delete;
  double* data;
};

// Plan creation is not thread-safe and moderately expensive; plans are cached
// per rectangle size and executed on fresh arrays (which is thread-safe).
// FFTW_ESTIMATE keeps the chosen algorithm a function of the size alone, so
// results are reproducible run to run.
fftw_plan rodft00_plan(int width, int height) {
  static std::mutex mutex;
  static std::map<std::pair<int, int>, fftw_plan> plans;

  std::lock_guard<std::mutex> lock(mutex);
  const auto key = std::make_pair(width, height);
  auto it = plans.find(key);
  if (it != plans.end()) return it->second;

  const std::size_t n = static_cast<std::size_t>(width) * height;
  FftwBuffer in(n), out(n);
  fftw_plan plan = fftw_plan_r2r_2d(height, width, in.data, out.data,
                                    FFTW_RODFT00, FFTW_RODFT00, FFTW_ESTIMATE);
  if (plan == nullptr) throw SingularSystem("sine transform plan creation failed");
  plans.emplace(key, plan);
  return plan;
}

}  // namespace

Eigen::VectorXd sine_rectangle_sample(int width, int height, RngStream& rng) {
  if (width < 1 || height < 1) {
    throw InvalidDomain("sine sampler needs a nonempty rectangle");
  }
  const std::size_t n = static_cast<std::size_t>(width) * height;
  FftwBuffer in(n), out(n);

  // Eigenvalue of I - P at frequency (kx, ky) is
  //   lambda = 1 - (cos(pi kx / (width+1)) + cos(pi ky / (height+1))) / 2,
  // and the RODFT00 transform contributes a factor 4 per sine product, so
  // the coefficient of an N(0,1) draw is lambda^{-1/2} / (2 sqrt((W+1)(H+1))).
  const double norm =
      1.0 / (2.0 * std::sqrt(static_cast<double>(width + 1) *
                             static_cast<double>(height + 1)));
  for (int ky = 1; ky <= height; ++ky) {
    const double cy = std::cos(M_PI * ky / (height + 1));
    for (int kx = 1; kx <= width; ++kx) {
      const double lambda = 1.0 - 0.5 * (std::cos(M_PI * kx / (width + 1)) + cy);
      in.data[static_cast<std::size_t>(ky - 1) * width + (kx - 1)] =
          rng.next_normal() * norm / std::sqrt(lambda);
    }
  }

  fftw_execute_r2r(rodft00_plan(width, height), in.data, out.data);

  Eigen::VectorXd values(static_cast<Eigen::Index>(n));
  for (std::size_t i = 0; i < n; ++i) {
    values[static_cast<Eigen::Index>(i)] = out.data[i];
  }
  return values;
}

}  // namespace dgff
