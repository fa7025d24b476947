#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "support.hpp"

using namespace fmg;
using fmtest::agree_x;
using fmtest::digits;

namespace {

// Median digits over an integer grid of the upper default domain.
template <class Fn>
double median_digits(int m, Fn fn) {
  std::vector<double> d;
  for (double x = -15.0; x <= 15.0; x += 1.0)
    for (double y = 0.0; y <= 15.0; y += 1.0) {
      const cplx z(x, y);
      d.push_back(digits(fn(z), m, z));
    }
  return fmtest::median(d);
}

SubintervalConfig cfg(int N) {
  SubintervalConfig c;
  c.N = N;
  return c;
}

}  // namespace

TEST_CASE("subinterval centers tile [0,1]") {
  for (int N : {1, 7, 20, 40}) {
    const SubintervalConfig c = cfg(N);
    CHECK(c.center(1) - c.delta() == 0.0);
    CHECK(c.center(N) + c.delta() == doctest::Approx(1.0).epsilon(1e-15));
    for (int l = 1; l < N; ++l) CHECK(c.center(l) + c.delta() == doctest::Approx(c.center(l + 1) - c.delta()).epsilon(1e-15));
  }
}

TEST_CASE("even_scaled_hermite") {
  CHECK(even_scaled_hermite(0, cplx(3, 1), cplx(0.2, 0.7)) == cplx(1.0, 0.0));
  CHECK(even_scaled_hermite(2, 1.0, 1.0) == cplx(2.0, 0.0));
  CHECK_THROWS_AS(even_scaled_hermite(3, 1.0, 1.0), domain_error);

  // z^3 H_6(sqrt(z) t) by the Hermite recurrence in double-double
  std::mt19937_64 rng(53);
  std::uniform_real_distribution<double> u(-10.0, 10.0), ut(0.0, 1.0);
  for (int k = 0; k < 100; ++k) {
    const cplx z(u(rng), u(rng));
    const double t = ut(rng);
    const XComplex x = x_sqrt(XComplex(z)) * XReal(t);
    XComplex h0(1.0), h1 = x * XReal(2.0);
    for (int n = 1; n < 6; ++n) {
      XComplex h2 = XReal(2.0) * x * h1 - XReal(2.0 * n) * h0;
      h0 = h1;
      h1 = h2;
    }
    const XComplex zx(z);
    const XComplex want = zx * zx * zx * h1;
    const cplx zt2 = z * (t * t);
    // scale: the monomials of the polynomial, each carrying |z|^3
    const double scale = std::pow(std::abs(z), 3) * (120.0 + 720.0 * std::abs(zt2) + 480.0 * std::pow(std::abs(zt2), 2) +
                                                      64.0 * std::pow(std::abs(zt2), 3));
    CHECK(std::abs(even_scaled_hermite(6, z, zt2) - want.to_complex()) <= 8 * kEps * scale);
  }
}

TEST_CASE("hermite_local_taylor") {
  CHECK(hermite_local_taylor(0.0, cfg(20), 6).value == cplx(1.0, 0.0));
  CHECK_THROWS_AS(hermite_local_taylor(1.0, cfg(20), 5), domain_error);

  // with many orders at fixed N the sum converges to F_0
  double worst = 99.0;
  for (double x = -8.0; x <= 8.0; x += 0.5)
    for (double y = -8.0; y <= 8.0; y += 0.5) {
      const cplx z(x, y);
      if (std::abs(z) > 8.0) continue;
      worst = std::min(worst, digits(hermite_local_taylor(z, cfg(20), 16).value, 0, z));
    }
  CHECK(worst >= 13.0);
}

TEST_CASE("hermite_local_taylor spots on the real axis") {
  auto maxima = [](int n_max) {
    std::vector<double> xs, ds;
    for (double x = 0.5; x <= 9.0; x += 0.01) {
      xs.push_back(x);
      ds.push_back(fmtest::agree_x(hermite_local_taylor_x(x, cfg(20), n_max), oracle_eval(0, x)));
    }
    return fmtest::local_maxima(xs, ds);
  };
  const auto six = maxima(6), four = maxima(4);
  CHECK(std::fabs(fmtest::nearest(six, 2.80) - 2.80) <= 0.15);
  CHECK(std::fabs(fmtest::nearest(six, 7.02) - 7.02) <= 0.15);
  CHECK(std::fabs(fmtest::nearest(four, 4.08) - 4.08) <= 0.15);
}

TEST_CASE("algebraic_taylor") {
  CHECK_THROWS_AS(algebraic_taylor(1, 0.0, cfg(20)), domain_error);
  CHECK_THROWS_AS(algebraic_taylor_patched(1, 1.0, cfg(20), 9), domain_error);
  std::mt19937_64 rng(59);
  std::uniform_real_distribution<double> u(-15.0, 15.0);
  for (int k = 0; k < 200; ++k) {
    const int m = static_cast<int>(rng() % 4);
    const cplx z(u(rng), u(rng));
    const SeriesResult a = algebraic_taylor(m, z, cfg(40)), p = algebraic_taylor_patched(m, z, cfg(40), 3);
    CHECK(algebraic_taylor(m, std::conj(z), cfg(40)).value == std::conj(a.value));
    CHECK(algebraic_taylor_patched(m, std::conj(z), cfg(40), 3).value == std::conj(p.value));
    if (a.error_estimate <= 1e-4) CHECK(digits(a.value, m, z) >= -std::log10(a.error_estimate) - 1.0);
    if (p.error_estimate <= 1e-4) CHECK(digits(p.value, m, z) >= -std::log10(p.error_estimate) - 1.0);
  }
}

TEST_CASE("fourier_table") {
  CHECK_THROWS_AS(fourier_table(1, 100), domain_error);
  CHECK_THROWS_AS(fourier_table(1, 32), domain_error);
  const FourierTable t = fourier_table(1, 512);
  CHECK(t.c.size() == 128);  // odd l up to N/2

  // printed reconstruction errors, within a factor of 2
  auto within2 = [](double got, double printed) { return got <= 2.0 * printed && got >= printed / 2.0; };
  CHECK(within2(fourier_table(1, 512).max_deviation, 3.6e-2));
  CHECK(within2(fourier_table(2, 256).max_deviation, 1.3e-4));
  CHECK(within2(fourier_table(3, 128).max_deviation, 1.4e-4));

  for (int m = 1; m <= 3; ++m) {
    double prev = 1e300;
    for (int N = 64; N <= 4096; N *= 2) {
      const double dev = fourier_table(m, N).max_deviation;
      CHECK(dev < prev);
      prev = dev;
    }
  }
}

TEST_CASE("fourier_eval") {
  const FourierTable t2 = fourier_table(2, 512), t1 = fourier_table(1, 512), t0 = fourier_table(0, 512);
  CHECK(fourier_eval(2, 0.0, t2).value == cplx(0.2, 0.0));
  CHECK_THROWS_AS(fourier_eval(1, 1.0, t2), domain_error);
  CHECK((fourier_eval(0, 1.0, t0).flags & kFlagSingularCarrier) != 0);

  const double d = digits(fourier_eval(2, 2.0, t2).value, 2, 2.0);
  CHECK(d >= 1.0);
  CHECK(d <= 31.0);

  // no spurious poles along the imaginary axis
  for (double y : {10.0, 100.0, 1e3, 1e4}) {
    const cplx v = fourier_eval(1, cplx(0.0, y), t1).value;
    CHECK(std::isfinite(v.real()));
    CHECK(std::abs(v) < 1.0);
  }

  const cplx z(5, -5);
  CHECK(digits(fourier_eval(2, z, t2).value, 2, z) >= digits(fourier_eval(0, z, t0).value, 0, z));
}

TEST_CASE("gauss_jacobi_rule") {
  const QuadRule r10 = gauss_jacobi_rule(1, 0);
  CHECK(r10.x[0] == 0.5);
  CHECK(r10.w[0] == 1.0);
  const QuadRule r12 = gauss_jacobi_rule(1, 2);
  CHECK(r12.x[0] == doctest::Approx(0.75).epsilon(1e-15));
  CHECK(r12.w[0] == doctest::Approx(1.0 / 3.0).epsilon(1e-15));

  const QuadRule a = gauss_jacobi_rule(20, 2), b = gauss_jacobi_rule(20, 4);
  CHECK(agree_x(XComplex(a.x_x[0]), XComplex(parse_xreal("0.0142042111593581533"))) >= 17.5);
  CHECK(agree_x(XComplex(a.w_x[0]), XComplex(parse_xreal("0.37492209933371347e-5"))) >= 15.5);
  CHECK(agree_x(XComplex(b.x_x[19]), XComplex(parse_xreal("0.9971245845242836849"))) >= 17.5);
  CHECK(agree_x(XComplex(b.w_x[19]), XComplex(parse_xreal("0.72877914199740330e-2"))) >= 15.5);

  for (int k : {0, 2, 8, 16}) {
    const QuadRule r = gauss_jacobi_rule(20, k);
    XReal s(0.0);
    for (const XReal& w : r.w_x) s += w;
    CHECK(std::fabs((s - XReal(1.0) / XReal(k + 1.0)).to_double()) <= 1e-14);
    for (size_t i = 1; i < r.x.size(); ++i) CHECK(r.x[i] > r.x[i - 1]);
    CHECK(r.x.front() > 0.0);
    CHECK(r.x.back() < 1.0);
  }
  CHECK_THROWS_AS(gauss_jacobi_rule(65, 0), domain_error);
}

TEST_CASE("gauss_jacobi_rule is exact to degree 2n-1") {
  std::mt19937_64 rng(61);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int n = 1; n <= 20; ++n)
    for (int k : {0, 2, 4, 10, 16}) {
      const QuadRule r = gauss_jacobi_rule(n, k);
      for (int rep = 0; rep < 3; ++rep) {
        std::vector<double> c(static_cast<size_t>(2 * n));
        double exact = 0.0, scale = 0.0;
        for (size_t j = 0; j < c.size(); ++j) {
          c[j] = u(rng);
          exact += c[j] / (k + j + 1.0);
          scale += std::fabs(c[j]) / (k + j + 1.0);
        }
        double q = 0.0;
        for (size_t i = 0; i < r.x.size(); ++i) {
          double p = 0.0;
          for (size_t j = c.size(); j-- > 0;) p = p * r.x[i] + c[j];
          q += r.w[i] * p;
        }
        INFO("n=" << n << " k=" << k);
        CHECK(std::fabs(q - exact) <= 1e-12 * scale);
      }
    }
}

TEST_CASE("gauss_jacobi_eval") {
  for (int m = 0; m <= 4; ++m) {
    const QuadRule r = gauss_jacobi_rule(20, 2 * m);
    CHECK(std::abs(gauss_jacobi_eval(m, 0.0, r).value - 1.0 / (2 * m + 1)) <= 1e-14);
  }
  CHECK_THROWS_AS(gauss_jacobi_eval(1, 1.0, gauss_jacobi_rule(10, 0)), domain_error);
  const cplx z(-10, 10);
  const double d = digits(gauss_jacobi_eval(1, z, gauss_jacobi_rule(20, 2)).value, 1, z);
  CHECK(d >= 2.5);
  CHECK(d <= 31.0);
}

TEST_CASE("gauss-jacobi beats local Taylor at n = N = 20") {
  const QuadRule r = gauss_jacobi_rule(20, 0);
  const double gj = median_digits(0, [&](cplx z) { return gauss_jacobi_eval(0, z, r).value; });
  const double ht = median_digits(0, [&](cplx z) { return hermite_local_taylor(z, cfg(20), 6).value; });
  CHECK(gj > ht);
}

// At n = N = 10 the six-order local Taylor sum (median 7.2 digits) beats the
// 10-point rule (5.8). The general superiority claim does not hold here.
TEST_CASE("gauss-jacobi beats local Taylor at n = N = 10" * doctest::should_fail()) {
  const QuadRule r = gauss_jacobi_rule(10, 0);
  const double gj = median_digits(0, [&](cplx z) { return gauss_jacobi_eval(0, z, r).value; });
  const double ht = median_digits(0, [&](cplx z) { return hermite_local_taylor(z, cfg(10), 6).value; });
  CHECK(gj > ht);
}

TEST_CASE("spline_eval") {
  for (int N : {1, 5, 10, 20}) {
    CHECK(spline_eval(0, 0.0, N).value == cplx(1.0, 0.0));
    CHECK(spline_eval(1, 0.0, N).value == cplx(1.0 / 3.0, 0.0));
  }
  CHECK_THROWS_AS(spline_eval(2, 1.0, 10), domain_error);

  // N = 20 gains about one digit over N = 10
  for (int m : {0, 1}) {
    std::vector<double> gain;
    for (double x = -15.0; x <= 15.0; x += 1.0)
      for (double y = 0.0; y <= 15.0; y += 1.0) {
        const cplx z(x, y);
        if (z == 0.0) continue;
        gain.push_back(digits(spline_eval(m, z, 20).value, m, z) - digits(spline_eval(m, z, 10).value, m, z));
      }
    CHECK(fmtest::median(gain) >= 0.5);
    CHECK(fmtest::median(gain) <= 1.5);
  }
}

// Band floor 1 - 0.5 over the default domain at step 0.25. The N = 10
// spline misses it at about 0.5% of the points: dips near zeros of F_m
// (min 0.07 at -1.75+11.75i for m = 0, -0.01 at 1.5+13.25i for m = 1) and
// the far corner toward -15+15i.
TEST_CASE("spline N = 10 stays in the plotted band on the default domain" * doctest::should_fail()) {
  for (int m : {0, 1}) {
    double lowest = 99.0;
    for (double x = -15.0; x <= 15.0; x += 0.25)
      for (double y = 0.0; y <= 15.0; y += 0.25) {
        const cplx z(x, y);
        if (z == 0.0) continue;
        lowest = std::min(lowest, digits(spline_eval(m, z, 10).value, m, z));
      }
    INFO("m=" << m);
    CHECK(lowest >= 0.5);
  }
}

TEST_CASE("moment_integral") {
  const double a = 0.0, b = 1.0;
  // f = x^3
  CHECK(moment_integral(0, a, b, 0.0, 1.0, 0.0, 3.0) == cplx(0.25, 0.0));
  // f = x^2
  CHECK(moment_integral(1, a, b, 0.0, 1.0, 0.0, 2.0) == cplx(0.25, 0.0));
  CHECK_THROWS_AS(moment_integral(0, 1.0, 1.0, 0.0, 0.0, 0.0, 0.0), domain_error);
  CHECK_THROWS_AS(moment_integral(3, 0.0, 1.0, 0.0, 0.0, 0.0, 0.0), domain_error);
}

TEST_CASE("moment_integral is exact on cubics") {
  std::mt19937_64 rng(67);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  for (int k = 0; k < 200; ++k) {
    cplx c[4];
    for (auto& ci : c) ci = cplx(u(rng), u(rng));
    double a = u(rng), b = u(rng);
    if (a > b) std::swap(a, b);
    if (b - a < 1e-3) continue;
    auto f = [&](double x) { return ((c[3] * x + c[2]) * x + c[1]) * x + c[0]; };
    auto df = [&](double x) { return (3.0 * c[3] * x + 2.0 * c[2]) * x + c[1]; };
    // antiderivative of x^p f(x)
    auto prim = [&](int p, double x) {
      cplx s = 0.0;
      for (int j = 0; j < 4; ++j) s += c[j] * std::pow(x, p + j + 1) / static_cast<double>(p + j + 1);
      return s;
    };
    for (int p = 0; p <= 2; ++p) {
      const cplx want = prim(p, b) - prim(p, a);
      double scale = 0.0;
      for (int j = 0; j < 4; ++j) scale += std::abs(c[j]) * (std::pow(std::fabs(a), p + j + 1) + std::pow(std::fabs(b), p + j + 1));
      CHECK(std::abs(moment_integral(p, a, b, f(a), f(b), df(a), df(b)) - want) <= 1e-13 * scale);
    }
  }
}

TEST_CASE("moment assembly reproduces the m = 1 spline closed form") {
  std::mt19937_64 rng(71);
  std::uniform_real_distribution<double> u(-15.0, 15.0);
  for (int k = 0; k < 100; ++k) {
    const cplx z(u(rng), u(rng));
    const int N = 10;
    cplx s = 0.0;
    for (int j = 0; j < N; ++j) {
      const double a = static_cast<double>(j) / N, b = static_cast<double>(j + 1) / N;
      const cplx fa = std::exp(-z * (a * a)), fb = std::exp(-z * (b * b));
      s += moment_integral(2, a, b, fa, fb, -2.0 * z * a * fa, -2.0 * z * b * fb);
    }
    const cplx v = spline_eval(1, z, N).value;
    CHECK(std::abs(s - v) <= 1e-13 * std::max(std::abs(v), 1.0));
  }
}

TEST_CASE("quadrature methods are conjugate symmetric") {
  std::mt19937_64 rng(73);
  std::uniform_real_distribution<double> u(-15.0, 15.0);
  const QuadRule r = gauss_jacobi_rule(20, 2);
  const FourierTable t = fourier_table(1, 256);
  for (int k = 0; k < 200; ++k) {
    const cplx z(u(rng), u(rng)), zc = std::conj(z);
    CHECK(hermite_local_taylor(zc, cfg(10), 6).value == std::conj(hermite_local_taylor(z, cfg(10), 6).value));
    CHECK(gauss_jacobi_eval(1, zc, r).value == std::conj(gauss_jacobi_eval(1, z, r).value));
    CHECK(fourier_eval(1, zc, t).value == std::conj(fourier_eval(1, z, t).value));
    CHECK(spline_eval(1, zc, 10).value == std::conj(spline_eval(1, z, 10).value));
  }
}
