#include <doctest.h>

#include <numbers>
#include <random>

#include "oracles.hpp"
#include "schro/errors.hpp"
#include "schro/spectral.hpp"

using namespace schro;

namespace {

constexpr double kPi = std::numbers::pi;

WaveField random_field(const GridPtr& grid, unsigned seed) {
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  WaveField f = make_field(grid);
  for (auto& z : f.values) {
    z = cplx(u(rng), u(rng));
  }
  return f;
}

}  // namespace

TEST_CASE("make_grid wavenumber ordering and spacing") {
  auto g = make_grid(1, 4, 2.0 * kPi);
  REQUIRE(g->wavenumbers.size() == 4);
  CHECK(g->wavenumbers[0] == doctest::Approx(0.0));
  CHECK(g->wavenumbers[1] == doctest::Approx(1.0));
  CHECK(g->wavenumbers[2] == doctest::Approx(-2.0));
  CHECK(g->wavenumbers[3] == doctest::Approx(-1.0));

  auto g2 = make_grid(1, 2048, 80.0);
  CHECK(g2->spacing == doctest::Approx(0.0390625).epsilon(1e-15));

  auto g3 = make_grid(2, 8, 4.0 * kPi);
  const std::vector<double> expect = {0.0, 0.5, 1.0, 1.5, -2.0, -1.5, -1.0,
                                      -0.5};
  for (int m = 0; m < 8; ++m) {
    CHECK(g3->wavenumbers[m] == doctest::Approx(expect[m]));
  }
  CHECK(g3->size == 64);
  CHECK(g3->k_squared[0] == 0.0);
  for (double k2 : g3->k_squared) {
    CHECK(k2 >= 0.0);
  }
}

TEST_CASE("make_grid rejects bad parameters") {
  CHECK_THROWS_AS(make_grid(3, 8, 1.0), ConfigError);
  CHECK_THROWS_AS(make_grid(1, 7, 1.0), ConfigError);
  CHECK_THROWS_AS(make_grid(1, 2, 1.0), ConfigError);
  CHECK_THROWS_AS(make_grid(1, 8, 0.0), ConfigError);
  CHECK_THROWS_AS(make_grid(1, 8, -1.0), ConfigError);
  // 12 is even but not a power of two
  CHECK_THROWS_AS(make_grid(1, 12, 1.0), ConfigError);
}

TEST_CASE("forward picks out single modes") {
  auto g = make_grid(1, 32, 2.0 * kPi);
  WaveField f = make_field(g);
  for (auto& z : f.values) {
    z = 3.5;
  }
  SpectralField hat = forward(f);
  CHECK(std::abs(hat.values[0] - cplx(3.5 * 32, 0.0)) < 1e-12);
  for (std::size_t m = 1; m < hat.values.size(); ++m) {
    CHECK(std::abs(hat.values[m]) < 1e-12);
  }

  for (int l = 0; l < 32; ++l) {
    f.values[l] = std::polar(1.0, g->coords[l]);  // e^{ix}
  }
  hat = forward(f);
  // x starts at -L/2, so mode 1 carries the offset phase e^{-i k_1 L/2} = -1
  for (std::size_t m = 0; m < hat.values.size(); ++m) {
    if (m == 1) {
      CHECK(std::abs(hat.values[m] - cplx(-32.0, 0.0)) < 1e-10);
    } else {
      CHECK(std::abs(hat.values[m]) < 1e-10);
    }
  }
}

TEST_CASE("round-trip identity and Parseval, 1D and 2D") {
  for (int dim : {1, 2}) {
    auto g = make_grid(dim, 32, 5.0);
    for (unsigned seed = 0; seed < (dim == 1 ? 1000u : 100u); ++seed) {
      WaveField f = random_field(g, seed);
      SpectralField hat = forward(f);
      WaveField back = inverse(hat);

      const double norm2 = kernels::sum_abs_squared(f.values);
      CHECK(oracles::max_abs_diff(f.values, back.values) <
            1e-12 * std::sqrt(norm2));

      const double spec2 =
          kernels::sum_abs_squared(hat.values) / static_cast<double>(g->size);
      CHECK(std::abs(spec2 - norm2) <= 1e-12 * norm2);
    }
  }
}

TEST_CASE("spectral gradient") {
  auto g = make_grid(1, 64, 2.0 * kPi);
  WaveField f = make_field(g);
  for (int l = 0; l < 64; ++l) {
    f.values[l] = std::sin(g->coords[l]);
  }
  WaveField df = spectral_gradient(f, 0);
  for (int l = 0; l < 64; ++l) {
    CHECK(std::abs(df.values[l] - cplx(std::cos(g->coords[l]), 0.0)) < 1e-10);
  }

  for (auto& z : f.values) {
    z = 2.0;
  }
  df = spectral_gradient(f, 0);
  for (const auto& z : df.values) {
    CHECK(std::abs(z) < 1e-12);
  }

  CHECK_THROWS_AS(spectral_gradient(f, 1), ConfigError);

  auto gw = make_grid(1, 512, 40.0);
  WaveField gauss = make_field(gw);
  for (int l = 0; l < 512; ++l) {
    gauss.values[l] = std::exp(-0.5 * gw->coords[l] * gw->coords[l]);
  }
  WaveField dgauss = spectral_gradient(gauss, 0);
  for (int l = 0; l < 512; ++l) {
    const double x = gw->coords[l];
    CHECK(std::abs(dgauss.values[l] - cplx(-x * std::exp(-0.5 * x * x), 0.0)) <
          1e-8);
  }
}

TEST_CASE("spectral laplacian") {
  auto g = make_grid(1, 64, 2.0 * kPi);
  WaveField f = make_field(g);
  for (int l = 0; l < 64; ++l) {
    f.values[l] = std::sin(g->coords[l]);
  }
  WaveField lap = spectral_laplacian(f);
  for (int l = 0; l < 64; ++l) {
    CHECK(std::abs(lap.values[l] + f.values[l]) < 1e-10);
  }

  auto g2 = make_grid(2, 16, 2.0 * kPi);
  WaveField f2 = make_field(g2);
  for (int ix = 0; ix < 16; ++ix) {
    for (int iy = 0; iy < 16; ++iy) {
      f2.values[g2->index(ix, iy)] =
          std::polar(1.0, g2->coords[ix] + g2->coords[iy]);
    }
  }
  WaveField lap2 = spectral_laplacian(f2);
  for (std::size_t l = 0; l < f2.values.size(); ++l) {
    CHECK(std::abs(lap2.values[l] + 2.0 * f2.values[l]) < 1e-10);
  }
}

TEST_CASE("laplacian equals summed double gradients") {
  for (int dim : {1, 2}) {
    auto g = make_grid(dim, 32, 7.0);
    std::mt19937 rng(11);
    WaveField f = oracles::random_smooth_field(g, rng);
    WaveField lap = spectral_laplacian(f);
    WaveField composed = make_field(g);
    for (int axis = 0; axis < dim; ++axis) {
      WaveField dd = spectral_gradient(spectral_gradient(f, axis), axis);
      for (std::size_t l = 0; l < composed.values.size(); ++l) {
        composed.values[l] += dd.values[l];
      }
    }
    CHECK(oracles::max_abs_diff(lap.values, composed.values) < 1e-10);
  }
}

TEST_CASE("mass") {
  auto g = make_grid(1, 2048, 80.0);
  WaveField psi = make_field(g);
  const double s2 = std::sqrt(2.0);
  for (int l = 0; l < 2048; ++l) {
    psi.values[l] = s2 / std::cosh(s2 * g->coords[l]);
  }
  // quadrature oracle for the soliton mass on the same window
  const double expected = oracles::quadrature(
      [&](double x) {
        const double v = s2 / std::cosh(s2 * x);
        return v * v;
      },
      -40.0, 40.0);
  // analytically: int 2 sech^2(sqrt(2) x) dx = 2 sqrt(2)
  CHECK(expected == doctest::Approx(2.0 * std::sqrt(2.0)).epsilon(1e-10));
  CHECK(mass(psi) == doctest::Approx(expected).epsilon(1e-10));

  WaveField zero = make_field(g);
  CHECK(mass(zero) == 0.0);
}
