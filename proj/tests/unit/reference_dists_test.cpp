#include "doctest.h"

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/sinh_sinh.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>

#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include "zpf/error.hpp"
#include "zpf/reference_dists.hpp"

using namespace zpf;
using std::numbers::pi;

namespace {

double integrate_line(const std::function<double(double)>& f) {
  boost::math::quadrature::sinh_sinh<double> q;
  return q.integrate(f);
}

double integrate_between(const std::function<double(double)>& f, double a, double b) {
  boost::math::quadrature::tanh_sinh<double> q;
  return q.integrate(f, a, b);
}

// physicists' Hermite polynomial by the textbook recurrence
double hermite_poly(int n, double y) {
  double h0 = 1.0, h1 = 2.0 * y;
  if (n == 0) return h0;
  for (int k = 1; k < n; ++k) {
    const double h2 = 2.0 * y * h1 - 2.0 * k * h0;
    h0 = h1;
    h1 = h2;
  }
  return h1;
}

ModeGrid single_k_grid(double volume = 1.0) {
  const std::vector<Vec3> ks{{0, 0, 2}};
  return build_grid_from_wavevectors(ks, volume);
}

double max_gf_deviation(const ModeGrid& grid, const Vec3& dir) {
  const double sigma = std::sqrt(lattice_component_variance(grid, dir));
  double worst = 0.0;
  for (int i = 0; i <= 500; ++i) {
    const double s = (5.0 * i / 500) / sigma;
    worst = std::max(worst, std::abs(boyer_generating(s, dir, grid) - gaussian_generating(s, sigma)));
  }
  return worst;
}

}  // namespace

TEST_CASE("closed-form values") {
  CHECK(classical_oscillator_pdf(0.0, 1.0) == doctest::Approx(1 / pi).epsilon(1e-15));
  CHECK(classical_oscillator_pdf(1.5, 1.0) == 0.0);
  CHECK(std::isinf(classical_oscillator_pdf(1.0, 1.0)));
  CHECK(arcsine_cdf(0.0, 2.0) == 0.5);
  CHECK(arcsine_cdf(2.0, 2.0) == 1.0);
  CHECK(arcsine_cdf(-3.0, 2.0) == 0.0);
  CHECK(arcsine_cdf(2.0 / std::numbers::sqrt2, 2.0) == doctest::Approx(0.75).epsilon(1e-14));
  CHECK(quantum_oscillator_pdf(0, 0.0, 1.0) == doctest::Approx(1 / std::sqrt(pi)).epsilon(1e-15));
  CHECK(quantum_oscillator_pdf(1, 0.0, 1.0) == 0.0);
  CHECK(gaussian_mode_pdf(0.0, 1.0) == doctest::Approx(0.398942280401).epsilon(1e-12));
  CHECK(gaussian_mode_pdf(0.7, 2.0) == gaussian_mode_pdf(-0.7, 2.0));
  CHECK(gaussian_generating(0.0, 3.0) == 1.0);
  CHECK(gaussian_generating(1.0, 1.0) == doctest::Approx(0.606530659713).epsilon(1e-12));
  CHECK(zero_point_energy_density(1.0) == doctest::Approx(1 / (2 * pi * pi)).epsilon(1e-15));
  CHECK(zero_point_energy_density(0.0) == 0.0);
  CHECK(mode_energy(mode_sigma(3.0, 1.0), 1.0) == doctest::Approx(1.5).epsilon(1e-14));
  CHECK(mode_energy(0.0, 1.0) == 0.0);
  const double s1 = total_field_sigma(1.0);
  CHECK(s1 * s1 == doctest::Approx(1 / (24 * pi * pi)).epsilon(1e-14));
  CHECK(std::pow(total_field_sigma(2.0) / s1, 2) == doctest::Approx(16.0).epsilon(1e-14));
}

TEST_CASE("hermite functions match the explicit polynomial form") {
  for (int n = 0; n <= 12; ++n) {
    double fact = 1.0;
    for (int k = 2; k <= n; ++k) fact *= k;
    for (double x : {-1.3, -0.2, 0.0, 0.45, 0.9}) {
      const double alpha = 2.5;
      const double y = alpha * x;
      const double expected = alpha / (std::sqrt(pi) * std::ldexp(fact, n)) * std::pow(hermite_poly(n, y), 2) *
                              std::exp(-y * y);
      CHECK(quantum_oscillator_pdf(n, x, alpha) == doctest::Approx(expected).epsilon(1e-12));
    }
  }
  CHECK_THROWS_AS(quantum_oscillator_pdf(kMaxOscillatorLevel + 1, 0.0, 1.0), ValidationError);
  CHECK_THROWS_AS(quantum_oscillator_pdf(-1, 0.0, 1.0), ValidationError);
  CHECK_THROWS_AS(quantum_oscillator_pdf(2, 0.0, 0.0), ValidationError);
}

TEST_CASE("every analytic distribution integrates to one") {
  const std::vector<AnalyticDistribution> dists{
      AnalyticDistribution(GaussianMode{0.7}), AnalyticDistribution(GaussianTotal3D{2.0}),
      AnalyticDistribution(QuantumOscillator{0, 1.0}), AnalyticDistribution(QuantumOscillator{12, 5.0}),
      AnalyticDistribution(QuantumOscillator{60, 3.0})};
  for (const auto& d : dists) {
    CHECK(integrate_line([&](double x) { return d.pdf(x); }) == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(d.cdf(-1e3) == doctest::Approx(0.0));
    CHECK(d.cdf(1e3) == doctest::Approx(1.0));
  }
  for (const auto& d : {AnalyticDistribution(Arcsine{1.3}), AnalyticDistribution(ClassicalOscillator{0.4})}) {
    const auto [a, b] = d.support();
    CHECK(integrate_between([&](double x) { return d.pdf(x); }, a, b) == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(d.cdf(a) == 0.0);
    CHECK(d.cdf(b) == 1.0);
  }
}

TEST_CASE("cdf agrees with quadrature of pdf and is monotone") {
  const std::vector<AnalyticDistribution> dists{
      AnalyticDistribution(GaussianMode{1.4}), AnalyticDistribution(Arcsine{2.0}),
      AnalyticDistribution(QuantumOscillator{5, 1.7}), AnalyticDistribution(QuantumOscillator{12, 5.0})};
  for (const auto& d : dists) {
    double prev = 0.0;
    for (double x = -2.5; x <= 2.5; x += 0.05) {
      const double c = d.cdf(x);
      CHECK(c >= prev - 1e-15);
      prev = c;
    }
    for (double x : {-1.1, -0.3, 0.0, 0.6, 1.9}) {
      const auto [lo, hi] = d.support();
      const double from = std::max(lo, -12.0);
      if (x <= from) continue;
      const double q = integrate_between([&](double t) { return d.pdf(t); }, from, std::min(x, hi));
      CHECK(d.cdf(x) == doctest::Approx(q).epsilon(1e-8));
    }
  }
}

TEST_CASE("moments: arcsine(sqrt2 sigma) shares two moments with the Gaussian, not the fourth") {
  const double sigma = 0.8;
  const AnalyticDistribution arc(Arcsine{std::numbers::sqrt2 * sigma});
  const AnalyticDistribution gau(GaussianMode{sigma});
  const double a = std::numbers::sqrt2 * sigma;
  auto arc_moment = [&](int p) { return integrate_between([&](double x) { return std::pow(x, p) * arc.pdf(x); }, -a, a); };
  auto gau_moment = [&](int p) {
    return integrate_line([&](double x) { return std::abs(x) > 60 ? 0.0 : std::pow(x, p) * gau.pdf(x); });
  };
  CHECK(std::abs(arc_moment(1)) < 1e-12);
  CHECK(arc_moment(2) == doctest::Approx(sigma * sigma).epsilon(1e-8));
  CHECK(gau_moment(2) == doctest::Approx(sigma * sigma).epsilon(1e-8));
  CHECK(arc_moment(4) == doctest::Approx(1.5 * std::pow(sigma, 4)).epsilon(1e-8));
  CHECK(gau_moment(4) == doctest::Approx(3.0 * std::pow(sigma, 4)).epsilon(1e-8));
}

TEST_CASE("3D Gaussian density factorizes and integrates radially to one") {
  const AnalyticDistribution d(GaussianTotal3D{1.5});
  const Vec3 v{0.3, -1.0, 2.0};
  CHECK(d.pdf3(v) == doctest::Approx(d.pdf(v.x) * d.pdf(v.y) * d.pdf(v.z)).epsilon(1e-13));
  boost::math::quadrature::exp_sinh<double> q;
  const double radial = q.integrate([&](double r) { return 4 * pi * r * r * d.pdf3({r, 0, 0}); });
  CHECK(radial == doctest::Approx(1.0).epsilon(1e-9));
  CHECK_THROWS_AS(AnalyticDistribution(GaussianMode{1}).pdf3(v), ValidationError);
}

TEST_CASE("J0 of sqrt2 via the phase average of a single mode") {
  const auto grid = single_k_grid();
  const double sigma = grid[0].sigma;
  const Vec3 dir = grid[0].eps;
  const double s = 1.0 / sigma;  // sqrt2 sigma s (s_hat . eps) = sqrt2
  // (1/2pi) int cos(sqrt2 cos th) dth by the periodic trapezoid rule, exponentially convergent
  double avg = 0.0;
  const int n = 256;
  for (int i = 0; i < n; ++i) avg += std::cos(std::numbers::sqrt2 * std::cos(2 * pi * i / n));
  avg /= n;
  CHECK(avg == doctest::Approx(0.5591341444189797).epsilon(1e-12));
  CHECK(boyer_generating(s, dir, grid) == doctest::Approx(avg).epsilon(1e-12));
  CHECK(boyer_generating(0.0, dir, grid) == 1.0);
}

TEST_CASE("generating functions are bounded by one") {
  const auto grid = build_grid(8 * pi, 1.0);
  const Vec3 dir = normalized(Vec3{1, 2, 2});
  const auto gf = bessel_product_gf(grid, dir);
  CHECK(gf(0.0) == 1.0);
  for (double s = -200; s <= 200; s += 0.37) CHECK(std::abs(gf(s)) <= 1.0);
}

TEST_CASE("gaussian product over modes equals the lattice-sum exponent") {
  const auto grid = build_grid(8 * pi, 1.0);
  const Vec3 dir{0, 0, 1};
  const double var = lattice_component_variance(grid, dir);
  for (double s : {0.5, 3.0, 11.0}) {
    double prod = 1.0;
    for (const auto& m : grid.modes()) {
      const double a = m.sigma * s * dot(dir, m.eps);
      prod *= std::exp(-a * a / 2);
    }
    CHECK(prod == doctest::Approx(gaussian_generating(s, std::sqrt(var))).epsilon(1e-12));
  }
}

TEST_CASE("dense lattice bessel product approaches the Gaussian") {
  const auto grid = build_grid(16 * pi, 1.0);
  const Vec3 dir = normalized(Vec3{1, 1, 0});
  const double sigma = std::sqrt(lattice_component_variance(grid, dir));
  // lattice variance approaches the continuum value as L grows
  CHECK(sigma == doctest::Approx(total_field_sigma(1.0)).epsilon(0.05));
  CHECK(max_gf_deviation(grid, dir) < 0.01);
}

TEST_CASE("bessel-gaussian deviation falls roughly as 1/V") {
  const Vec3 dir{0, 0, 1};
  const double d1 = max_gf_deviation(build_grid(8 * pi, 1.0), dir);
  const double d4 = max_gf_deviation(build_grid(8 * pi * std::cbrt(4.0), 1.0), dir);
  CHECK(d1 / d4 >= 3.0);
  CHECK(d1 / d4 <= 7.0);
}

TEST_CASE("gaussian round trip through the inversion") {
  for (double sigma : {1.0, 0.3}) {
    std::vector<double> x;
    for (double v = -8 * sigma; v <= 8 * sigma; v += sigma / 50) x.push_back(v);
    const InversionRange range{40.0 / sigma, 4000, true};
    const auto pdf = invert_characteristic(gaussian_gf(sigma), range, x);
    double worst = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) worst = std::max(worst, std::abs(pdf[i] - gaussian_mode_pdf(x[i], sigma)));
    CHECK(worst * sigma < 1e-6);
    // symmetric gf gives symmetric pdf
    CHECK(pdf.front() == doctest::Approx(pdf.back()).epsilon(1e-12));
  }
}

TEST_CASE("insufficient s-range is reported") {
  const GeneratingFunction one("one", [](double) { return 1.0; });
  const std::vector<double> x{0.0, 1.0};
  CHECK_THROWS_AS(invert_characteristic(one, {}, x), ConvergenceError);
  CHECK_THROWS_AS(invert_characteristic(gaussian_gf(1.0), {3.0, 300, true}, x), ConvergenceError);
}

TEST_CASE("single-mode bessel product inverts to the arcsine law") {
  const auto grid = single_k_grid();
  const Vec3 dir = grid[0].eps;
  const double amp = std::numbers::sqrt2 * grid[0].sigma;
  const double width = 0.005 * amp;
  const auto gf = smoothed(bessel_product_gf(grid, dir), width);
  const double s_max = 1400.0 / amp;
  const InversionRange range{s_max, 28'000, false};
  // cdf(x) = 1/2 + int_0^x pdf by symmetry; stays clear of the endpoint spikes
  std::vector<double> x;
  const int steps = 3600;
  for (int i = 0; i <= steps; ++i) x.push_back(0.9 * amp * i / steps);
  const auto pdf = invert_characteristic(gf, range, x);
  double cdf = 0.5, worst = 0.0;
  for (std::size_t i = 1; i < x.size(); ++i) {
    cdf += 0.5 * (pdf[i] + pdf[i - 1]) * (x[i] - x[i - 1]);
    worst = std::max(worst, std::abs(cdf - arcsine_cdf(x[i], amp)));
  }
  CHECK(worst < 1e-3);
}

TEST_CASE("lattice energy per band matches the zero-point spectrum") {
  const auto grid = build_grid(16 * pi, 4.0);
  std::vector<double> edges;
  for (double w = 1.0; w <= 4.0 + 1e-12; w += 0.5) edges.push_back(w);
  const auto lattice = lattice_energy_density(grid, edges);
  for (std::size_t b = 0; b < lattice.size(); ++b)
    CHECK(lattice[b] == doctest::Approx(zero_point_energy_in_band(edges[b], edges[b + 1])).epsilon(0.02));
  CHECK(zero_point_energy_in_band(0.0, 1.0) ==
        doctest::Approx(integrate_between([](double w) { return zero_point_energy_density(w); }, 0.0, 1.0)));
}

TEST_CASE("quantum level 12 against the classical density") {
  const int n = 12;
  const double alpha = 5.0;
  const double amp = std::sqrt(2.0 * n + 1) / alpha;
  CHECK(amp == doctest::Approx(1.0));
  CHECK(integrate_line([&](double x) { return quantum_oscillator_pdf(n, x, alpha); }) ==
        doctest::Approx(1.0).epsilon(1e-6));

  // interior zeros are the sign changes of the Hermite function
  std::vector<double> nodes;
  double prev = hermite_functions(n, alpha * -2.0).back();
  for (int i = 1; i <= 40'000; ++i) {
    const double x = -2.0 + 4.0 * i / 40'000;
    const double cur = hermite_functions(n, alpha * x).back();
    if ((cur < 0) != (prev < 0)) nodes.push_back(x);
    prev = cur;
  }
  CHECK(nodes.size() == 12);

  int compared = 0;
  for (std::size_t i = 0; i + 1 < nodes.size(); ++i) {
    const double a = nodes[i], b = nodes[i + 1];
    if (a < -0.9 || b > 0.9) continue;
    const double q = integrate_between([&](double x) { return quantum_oscillator_pdf(n, x, alpha); }, a, b);
    const double c = arcsine_cdf(b, amp) - arcsine_cdf(a, amp);
    CHECK(std::abs(q / c - 1.0) < 0.15);
    ++compared;
  }
  CHECK(compared >= 8);
}

TEST_CASE("level 0 is the closed-form ground state") {
  for (double alpha : {1.0, 2.0, 5.0})
    for (double x = -2.0; x <= 2.0; x += 0.01) {
      const double expected = alpha / std::sqrt(pi) * std::exp(-alpha * alpha * x * x);
      CHECK(std::abs(quantum_oscillator_pdf(0, x, alpha) - expected) <= 1e-12);
    }
}
