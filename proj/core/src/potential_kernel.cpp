#include "dgff/potential_kernel.hpp"

#include <boost/multiprecision/cpp_bin_float.hpp>
#include <boost/multiprecision/cpp_int.hpp>

#include <algorithm>
#include <array>
#include <cmath>
#include <mutex>
#include <vector>

#include "dgff/constants.hpp"
#include "dgff/quadrature.hpp"

namespace dgff {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr int kTableMax = 64;

// ---- exact table -----------------------------------------------------------
//
// Every table value is p + q/pi with p integer and q rational: the anchors are
// a(0,0) = 0, a(1,0) = 1, and the diagonal a(n,n) = (4/pi) sum_{k<=n} 1/(2k-1),
// and the recursion that fills the wedge has integer coefficients.  Carried in
// exact arithmetic the recursion is stable by construction (in plain doubles
// it loses all precision near m ~ 25), and the final rounding through a
// 100-digit float absorbs the huge cancelling p and q parts.

using BigInt = boost::multiprecision::cpp_int;
using BigRat = boost::multiprecision::cpp_rational;
using BigFloat = boost::multiprecision::cpp_bin_float_100;

const BigFloat& big_pi() {
  static const BigFloat pi(
      "3.14159265358979323846264338327950288419716939937510582097494459230781"
      "6406286208998628034825342117067982148086513282306647");
  return pi;
}

std::vector<std::vector<double>> build_square_table() {
  const int M = kTableMax;
  std::vector<std::vector<BigInt>> P(M + 1);
  std::vector<std::vector<BigRat>> Q(M + 1);
  for (int m = 0; m <= M; ++m) {
    P[m].assign(m + 1, BigInt(0));
    Q[m].assign(m + 1, BigRat(0));
  }
  P[1][0] = 1;
  BigRat harmonic_odd = 0;
  for (int n = 1; n <= M; ++n) {
    harmonic_odd += BigRat(1, 2 * n - 1);
    Q[n][n] = 4 * harmonic_odd;
  }
  for (int m = 1; m < M; ++m) {
    P[m + 1][0] = 4 * P[m][0] - P[m - 1][0] - 2 * P[m][1];
    Q[m + 1][0] = 4 * Q[m][0] - Q[m - 1][0] - 2 * Q[m][1];
    for (int n = 1; n < m; ++n) {
      P[m + 1][n] = 4 * P[m][n] - P[m - 1][n] - P[m][n - 1] - P[m][n + 1];
      Q[m + 1][n] = 4 * Q[m][n] - Q[m - 1][n] - Q[m][n - 1] - Q[m][n + 1];
    }
    P[m + 1][m] = 2 * P[m][m] - P[m][m - 1];
    Q[m + 1][m] = 2 * Q[m][m] - Q[m][m - 1];
  }
  std::vector<std::vector<double>> table(M + 1);
  for (int m = 0; m <= M; ++m) {
    table[m].resize(m + 1);
    for (int n = 0; n <= m; ++n) {
      const BigFloat value = BigFloat(P[m][n]) + BigFloat(Q[m][n]) / big_pi();
      table[m][n] = static_cast<double>(value);
    }
  }
  return table;
}

const std::vector<std::vector<double>>& square_table() {
  static const std::vector<std::vector<double>> table = build_square_table();
  return table;
}

// ---- reduced integral ------------------------------------------------------
//
// a(m,n) = (2/pi) Int_0^pi [1 - e^{-N lam} cos(M th)] / sinh lam dth with
// cosh lam = 2 - cos th, N = max(|m|,|n|), M = min(|m|,|n|).  The integrand is
// evaluated in the cancellation-free form
//   2 sin^2(M th / 2) - cos(M th) expm1(-N lam).

double square_integrand(double theta, long long decay_n, long long osc_m) {
  const double s = std::sin(0.5 * theta);
  const double u = 2.0 * s * s;  // cosh(lam) - 1, exact at small theta
  const double sinh_lam = std::sqrt(u * (u + 2.0));
  const double lam = std::log1p(u + sinh_lam);
  const double so = std::sin(0.5 * osc_m * theta);
  const double num =
      2.0 * so * so - std::cos(osc_m * theta) * std::expm1(-decay_n * lam);
  return num / sinh_lam;
}

// Panels: geometric growth away from the theta = 0 boundary layer of width
// ~1/N, kept fine enough to resolve the oscillation while the decaying factor
// is alive (N theta < ~45; there M theta <= 45 too since M <= N).
std::vector<double> boundary_layer_panels(double w0, double live_end, double cap) {
  std::vector<double> cuts{0.0};
  double t = 0.0, w = w0;
  while (t < kPi) {
    if (t < live_end) w = std::min(w, cap);
    t = std::min(t + w, kPi);
    cuts.push_back(t);
    w *= 1.6;
  }
  return cuts;
}

double square_integral(long long m, long long n) {
  const long long N = std::max(std::llabs(m), std::llabs(n));
  const long long M = std::min(std::llabs(m), std::llabs(n));
  if (N == 0) return 0.0;
  const auto& rule = gauss_legendre(24);
  const double w0 = std::min(1.0 / static_cast<double>(N), kPi / 16);
  const double live_end = 45.0 / static_cast<double>(N);
  const double cap = 3.0 / static_cast<double>(N);
  const auto cuts = boundary_layer_panels(w0, live_end, cap);
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i)
    total += gl_integrate(rule, cuts[i], cuts[i + 1],
                          [&](double t) { return square_integrand(t, N, M); });
  return 2.0 / kPi * total;
}

// ---- triangular lattice ----------------------------------------------------
//
// Integrating one Brillouin coordinate exactly leaves
//   a(m,n) = (1/pi) Int_0^pi [1 - rho^{|n|} cos((m + n/2) th)] / S dth,
// A = 1 - cos(th)/3, B = (2/3) cos(th/2), S = sqrt(A^2 - B^2), rho = B/(A+S).

double triangular_integrand(double theta, long long decay_n, double osc_c) {
  const double A = 1.0 - std::cos(theta) / 3.0;
  const double B = (2.0 / 3.0) * std::cos(0.5 * theta);
  const double S = std::sqrt(std::max((A - B) * (A + B), 0.0));
  const double so = std::sin(0.5 * osc_c * theta);
  double num;
  if (B <= 0.0) {
    num = 1.0 - (decay_n == 0 ? std::cos(osc_c * theta) : 0.0);
  } else {
    const double log_rho = std::log(B) - std::log(A + S);
    num = 2.0 * so * so - std::cos(osc_c * theta) * std::expm1(decay_n * log_rho);
  }
  return num / S;
}

double triangular_integral(long long m, long long n) {
  const long long N = std::llabs(n);
  const double c = static_cast<double>(m) + 0.5 * static_cast<double>(n);
  const double freq = std::max({static_cast<double>(N), std::abs(c), 1.0});
  const auto& rule = gauss_legendre(24);
  const double w0 = std::min(1.0 / freq, kPi / 16);
  const double live_end = 50.0 / std::max(1.0, static_cast<double>(N));
  const double cap = kPi / (3.0 * (std::abs(c) + 1.0));
  const auto cuts = boundary_layer_panels(w0, live_end, cap);
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i)
    total += gl_integrate(rule, cuts[i], cuts[i + 1],
                          [&](double t) { return triangular_integrand(t, N, c); });
  return total / kPi;
}

}  // namespace

double potential_kernel(int x, int y) {
  const int ax = std::abs(x), ay = std::abs(y);
  int m = std::max(ax, ay), n = std::min(ax, ay);
  if (m == 0) return 0.0;
  if (m <= kTableMax) return square_table()[m][n];
  const double r = std::hypot(static_cast<double>(x), static_cast<double>(y));
  if (r > 1e6) return constants().g * std::log(r) + potential_kernel_c0();
  return square_integral(m, n);
}

double potential_kernel_c0() {
  static std::once_flag flag;
  static double c0 = 0.0;
  std::call_once(flag, [] {
    // Deterministic radii 10^{3 + k/8} over a few directions; the O(r^-2)
    // correction is below 1e-6 throughout this range.
    double sum = 0.0;
    int count = 0;
    for (int k = 0; k <= 8; ++k) {
      const double r = std::pow(10.0, 3.0 + k / 8.0);
      for (const double phi : {0.13, 0.71, 1.29}) {
        const long long px = std::llround(r * std::cos(phi));
        const long long py = std::llround(r * std::sin(phi));
        const double rr = std::hypot(static_cast<double>(px), static_cast<double>(py));
        sum += square_integral(std::max(std::llabs(px), std::llabs(py)),
                               std::min(std::llabs(px), std::llabs(py))) -
               constants().g * std::log(rr);
        ++count;
      }
    }
    c0 = sum / count;
  });
  return c0;
}

double triangular_potential_kernel(int m, int n) {
  if (m == 0 && n == 0) return 0.0;
  // Pick the sixfold-rotation image (plus the swap reflection) with the
  // largest decay index |n|; all images share the same kernel value.
  long long bm = m, bn = n;
  long long cm = m, cn = n;
  for (int k = 0; k < 6; ++k) {
    const long long rm = -cn, rn = cm + cn;  // rotation by 60 degrees
    cm = rm;
    cn = rn;
    if (std::llabs(cn) > std::llabs(bn)) bm = cm, bn = cn;
    if (std::llabs(cm) > std::llabs(bn)) bm = cn, bn = cm;  // swap reflection
  }
  return triangular_integral(bm, bn);
}

Vec2 triangular_embed(int m, int n) {
  return {static_cast<double>(m) + 0.5 * static_cast<double>(n),
          0.8660254037844386467637231707529362 * static_cast<double>(n)};
}

}  // namespace dgff
