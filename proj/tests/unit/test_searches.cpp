#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include <Eigen/LU>

#include "qpsa/searches.hpp"

using namespace qpsa;
using oracle::Rng;

namespace {

QuadPoly scalar_poly() {
  QuadPoly p;
  p.M = p.C = p.K = ComplexMatrix::Constant(1, 1, 1.0);
  return p;
}

}  // namespace

TEST_SUITE_BEGIN("searches");

TEST_CASE("vertical pencil blocks match the hand-computed scalar case") {
  const QuadPoly p = scalar_poly();
  const double eps = 0.3;
  const auto q = searches::build_vertical_pencil(p, {1, 1, 1}, eps, 0.0);
  REQUIRE(q.block_size() == 2);
  CHECK(q.effective_degree == 4);

  // p_w(0) = 1, P(0) = 1, P'(0) = 1, M = 1
  ComplexMatrix b0(2, 2), b1(2, 2), b2(2, 2), b4(2, 2);
  b0 << -eps, 1, 1, -eps;
  b1 << 0, -1, 1, 0;
  b2 << eps, 1, 1, 0;
  b4 << -eps, 0, 0, 0;
  CHECK((q.coeff[0] - b0).norm() <= 1e-15);
  CHECK((q.coeff[1] - b1).norm() <= 1e-15);
  CHECK((q.coeff[2] - b2).norm() <= 1e-15);
  CHECK(q.coeff[3].norm() == 0.0);
  CHECK((q.coeff[4] - b4).norm() <= 1e-15);
}

TEST_CASE("horizontal pencil blocks match the hand-computed scalar case") {
  const QuadPoly p = scalar_poly();
  const double eps = 0.3;
  const auto q = searches::build_horizontal_pencil(p, {1, 1, 1}, eps, 0.0);
  CHECK(q.effective_degree == 4);
  // P(i*0) = 1, P'(i*0) = 1, so the degree-1 blocks are -i off-diagonals
  ComplexMatrix b0(2, 2), b1(2, 2), b2(2, 2);
  const Complex mi(0.0, -1.0);
  b0 << -eps, 1, 1, -eps;
  b1 << 0, mi, mi, 0;
  b2 << eps, -1, -1, 0;
  CHECK((q.coeff[0] - b0).norm() <= 1e-15);
  CHECK((q.coeff[1] - b1).norm() <= 1e-15);
  CHECK((q.coeff[2] - b2).norm() <= 1e-15);
}

TEST_CASE("pencil degrees degenerate with the weights") {
  const QuadPoly p = scalar_poly();
  auto q = searches::build_vertical_pencil(p, {0, 1, 1}, 0.3, 0.4);
  CHECK(q.effective_degree <= 2);
  q = searches::build_horizontal_pencil(p, {0, 1, 1}, 0.3, 0.4);
  CHECK(q.effective_degree <= 2);

  QuadPoly matrix_case;
  matrix_case.M = ComplexMatrix::Zero(2, 2);
  matrix_case.C = -ComplexMatrix::Identity(2, 2);
  matrix_case.K = ComplexMatrix::Identity(2, 2) * 0.5;
  q = searches::build_vertical_pencil(matrix_case, {0, 0, 1}, 0.3, 0.0);
  CHECK(q.effective_degree == 1);
}

TEST_CASE("linearization reproduces block polynomial determinants") {
  Rng rng(67);
  const QuadPoly p = oracle::random_quad_poly(rng, 2);
  const auto q = searches::build_vertical_pencil(p, {1, 1, 1}, 0.4, 0.2);
  const Pencil lin = searches::linearize_block_poly(q);
  std::uniform_real_distribution<double> u(-1.5, 1.5);
  for (int k = 0; k < 10; ++k) {
    const Complex lam(u(rng), u(rng));
    ComplexMatrix val = ComplexMatrix::Zero(4, 4);
    Complex pw(1.0, 0.0);
    for (int j = 0; j <= 4; ++j) {
      val += pw * q.coeff[j];
      pw *= lam;
    }
    const Complex det_block = val.determinant();
    const Complex det_pencil = (lin.X - lam * lin.Y).determinant();
    // both vanish together; compare their ratio against a reference point
    CHECK(std::abs(det_block) ==
          doctest::Approx(std::abs(det_pencil)).epsilon(1e-6));
  }
}

TEST_CASE("vertical search matches the scalar root scan") {
  const QuadPoly p = scalar_poly();
  const Weights w{0, 0, 1};
  const double eps = 0.3;
  const auto crossings = searches::vertical_search(p, w, eps, -0.5);
  const auto expected =
      oracle::scalar_vertical_roots(p, w, eps, -0.5, -2.0, 2.0);
  REQUIRE(crossings.size() == expected.size());
  for (std::size_t i = 0; i < expected.size(); ++i)
    CHECK(crossings[i].ordinate ==
          doctest::Approx(expected[i]).epsilon(1e-8));
}

TEST_CASE("deflated and structured pencil forms agree") {
  Rng rng(71);
  for (int rep = 0; rep < 10; ++rep) {
    const QuadPoly p = oracle::random_quad_poly(rng, 3, rep % 2 == 0);
    const Weights w{0.5, 1.0, 1.0};
    const double eps = 0.2;
    const double x = -0.3 + 0.1 * rep;
    searches::SearchTolerances st;
    st.pencil = searches::PencilForm::structured;
    const auto a = searches::vertical_search(p, w, eps, x, st);
    st.pencil = searches::PencilForm::deflated;
    const auto b = searches::vertical_search(p, w, eps, x, st);
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i)
      CHECK(a[i].ordinate == doctest::Approx(b[i].ordinate).epsilon(1e-8));
  }
}

TEST_CASE("vertical search far right of the pseudospectrum is empty") {
  const QuadPoly p = scalar_poly();
  CHECK(searches::vertical_search(p, {0, 0, 1}, 0.3, 10.0).empty());
  CHECK(searches::vertical_search(p, {1, 1, 1}, 0.05, 25.0).empty());
}

TEST_CASE("real problems produce exactly mirrored crossings") {
  Rng rng(73);
  const QuadPoly p = oracle::random_quad_poly(rng, 4, true);
  const auto crossings = searches::vertical_search(p, {1, 1, 1}, 0.4, 0.0);
  REQUIRE(!crossings.empty());
  for (const auto& c : crossings) {
    bool found = false;
    for (const auto& d : crossings)
      if (std::abs(d.ordinate + c.ordinate) <= 1e-10) found = true;
    CHECK(found);
  }
}

TEST_CASE("cross-section assembly pairs crossings by membership") {
  const QuadPoly p = scalar_poly();
  const Weights w{0, 0, 1};
  const double eps = 0.3;

  // |p(-0.5 + iy)| = |3/4 - y^2|: two disjoint intervals on this line
  const auto crossings = searches::vertical_search(p, w, eps, -0.5);
  REQUIRE(crossings.size() == 4);
  const auto section =
      searches::assemble_cross_section(crossings, p, w, eps, -0.5);
  REQUIRE(section.intervals.size() == 2);
  const double inner = std::sqrt(0.45);
  const double outer = std::sqrt(1.05);
  CHECK(section.intervals[0].first == doctest::Approx(-outer).epsilon(1e-8));
  CHECK(section.intervals[0].second == doctest::Approx(-inner).epsilon(1e-8));
  CHECK(section.intervals[1].first == doctest::Approx(inner).epsilon(1e-8));
  CHECK(section.intervals[1].second == doctest::Approx(outer).epsilon(1e-8));

  CHECK(searches::assemble_cross_section({}, p, w, eps, -0.5).empty());

  // single tangential-style crossing degenerates to a point interval
  const std::vector<searches::Crossing> lone = {{0.7, 0.0}};
  const auto degen = searches::assemble_cross_section(lone, p, w, eps, -0.5);
  REQUIRE(degen.intervals.size() == 1);
  CHECK(degen.intervals[0].first == degen.intervals[0].second);
}

TEST_CASE("cross-section agrees with dense membership classification") {
  const QuadPoly p = scalar_poly();
  const Weights w{0, 0, 1};
  const double eps = 0.3;
  for (double x : {-0.9, -0.5, -0.4}) {
    const auto crossings = searches::vertical_search(p, w, eps, x);
    const auto section =
        searches::assemble_cross_section(crossings, p, w, eps, x);
    for (int i = 0; i < 2001; ++i) {
      const double y = -2.0 + 4.0 * i / 2000;
      const bool inside =
          oracle::sigma_min_poly_small(p, Complex(x, y)) <= eps;
      bool in_interval = false;
      double dist_to_edge = 1e300;
      for (const auto& [yl, yr] : section.intervals) {
        if (y >= yl && y <= yr) in_interval = true;
        dist_to_edge = std::min({dist_to_edge, std::abs(y - yl), std::abs(y - yr)});
      }
      if (inside != in_interval)
        CHECK(dist_to_edge <= 1e-6);  // only near an endpoint
    }
  }
}

TEST_CASE("horizontal search matches the scalar root scan") {
  const QuadPoly p = scalar_poly();
  const Weights w{0, 0, 1};
  const double eps = 0.3;
  for (double y : {0.8, 0.9, -0.75}) {
    const auto hx = searches::horizontal_search(p, w, eps, y);
    const auto roots = oracle::scalar_horizontal_roots(p, w, eps, y, -3.0, 2.0);
    REQUIRE(hx.has_value());
    REQUIRE(!roots.empty());
    CHECK(*hx == doctest::Approx(roots.back()).epsilon(1e-8));
  }
  // a line that misses the pseudospectrum entirely
  CHECK_FALSE(searches::horizontal_search(p, w, eps, 5.0).has_value());
  CHECK_FALSE(searches::horizontal_search(p, w, eps, 0.0).has_value());
}

TEST_CASE("horizontal search dominates the cross-section on 2x2 problems") {
  Rng rng(79);
  for (int rep = 0; rep < 5; ++rep) {
    const QuadPoly p = oracle::random_quad_poly(rng, 2, true);
    const Weights w{1, 1, 1};
    const double eps = 0.25;
    double re_lo, re_hi, im_lo, im_hi;
    oracle::psa_bounding_box(p, 1.0, &re_lo, &re_hi, &im_lo, &im_hi);
    const auto grid =
        oracle::grid_psa_small(p, w, eps, re_lo, re_hi, im_lo, im_hi, 501);
    const auto hx =
        searches::horizontal_search(p, w, eps, grid.rightmost.imag());
    REQUIRE(hx.has_value());
    CHECK(*hx >= grid.abscissa - 1e-8);
  }
}

TEST_SUITE_END();
