#include "ise/interval_linalg.hpp"

#include <cmath>

#include "doctest.h"
#include "ise/rng.hpp"

using namespace ise;

namespace {

IntervalMatrix rand_matrix(StreamRng& r, std::size_t n, double rad) {
  IntervalMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      double mid = r.uniform(-2.0, 2.0);
      if (i == j) mid += 6.0;  // keep midpoint nonsingular
      double w = r.uniform(0.0, rad);
      m.set_entry(i, j, Interval(mid - w, mid + w));
    }
  return m;
}

Mat sample(StreamRng& r, const IntervalMatrix& m) {
  Mat p = Mat::Zero(m.rows(), m.cols());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (const auto& e : m.row(i)) {
      double t = r.uniform(0.0, 1.0);
      p(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(e.col)) =
          e.value.lo() + t * (e.value.hi() - e.value.lo());
    }
  return p;
}

}  // namespace

TEST_CASE("vector basics") {
  IntervalVector v(3);
  v[0] = Interval(1.0, 2.0);
  v[1] = Interval(-1.0, 1.0);
  v[2] = Interval(0.5);
  CHECK(v.mid()(0) == doctest::Approx(1.5));
  CHECK(v.widths()(1) == doctest::Approx(2.0));
  CHECK(v.max_width() >= 2.0);
  CHECK(inf_norm(v) == 2.0);
  Vec p(3);
  p << 1.5, 0.0, 0.5;
  CHECK(v.contains(p));
  p(2) = 0.6;
  CHECK(!v.contains(p));
  CHECK(!v.all_thin());
  CHECK(IntervalVector::thin(p).all_thin());
}

TEST_CASE("vector intersection reports first empty index") {
  IntervalVector a(2), b(2);
  a[0] = Interval(0.0, 1.0);
  a[1] = Interval(0.0, 1.0);
  b[0] = Interval(0.5, 2.0);
  b[1] = Interval(3.0, 4.0);
  std::size_t idx = 99;
  auto i = intersect(a, b, &idx);
  CHECK(!i.has_value());
  CHECK(idx == 1);
  b[1] = Interval(1.0, 4.0);
  i = intersect(a, b);
  REQUIRE(i.has_value());
  CHECK((*i)[1].is_thin());
}

TEST_CASE("sparse matrix entry semantics") {
  IntervalMatrix m(2, 3);
  CHECK(m.nonzeros() == 0);
  m.set_entry(0, 1, Interval(2.0));
  m.add_entry(0, 1, Interval(1.0));  // accumulates
  m.add_entry(0, 0, Interval(5.0));  // inserts
  CHECK(m.entry(0, 1) == Interval(3.0));
  CHECK(m.entry(0, 0) == Interval(5.0));
  CHECK(m.entry(1, 2) == Interval(0.0));
  CHECK(m.nonzeros() == 2);
  m.set_entry(0, 1, Interval(-1.0));  // overwrites
  CHECK(m.entry(0, 1) == Interval(-1.0));
  Mat d = m.mid_dense();
  CHECK(d(0, 1) == -1.0);
  CHECK(d(1, 2) == 0.0);
}

TEST_CASE("identity and transpose") {
  IntervalMatrix i3 = IntervalMatrix::identity(3);
  CHECK(i3.entry(1, 1) == Interval(1.0));
  CHECK(i3.entry(0, 1) == Interval(0.0));
  IntervalMatrix m(2, 3);
  m.set_entry(0, 2, Interval(1.0, 2.0));
  IntervalMatrix t = m.transposed();
  CHECK(t.rows() == 3);
  CHECK(t.entry(2, 0) == Interval(1.0, 2.0));
}

TEST_CASE("inf norm bounds every point realization") {
  StreamRng rng(5150);
  auto r = rng.stream("norm");
  for (int t = 0; t < 200; ++t) {
    IntervalMatrix m = rand_matrix(r, 4, 0.5);
    double bound = inf_norm(m);
    for (int s = 0; s < 20; ++s) {
      Mat p = sample(r, m);
      CHECK(p.cwiseAbs().rowwise().sum().maxCoeff() <= bound);
    }
  }
}

TEST_CASE("interval matvec containment fuzz") {
  StreamRng rng(31337);
  auto r = rng.stream("matvec");
  for (int t = 0; t < 300; ++t) {
    IntervalMatrix m = rand_matrix(r, 5, 1.0);
    IntervalVector v(5);
    for (std::size_t i = 0; i < 5; ++i) {
      double a = r.uniform(-3.0, 3.0);
      v[i] = Interval(a, a + r.uniform(0.0, 2.0));
    }
    IntervalVector out = interval_matvec(m, v);
    Mat pm = sample(r, m);
    Vec pv(5);
    for (std::size_t i = 0; i < 5; ++i) {
      double tt = r.uniform(0.0, 1.0);
      pv(static_cast<Eigen::Index>(i)) =
          v[i].lo() + tt * (v[i].hi() - v[i].lo());
    }
    CHECK(out.contains(pm * pv));
  }
}

TEST_CASE("preconditioned products agree with direct evaluation") {
  StreamRng rng(906090);
  auto r = rng.stream("precond");
  IntervalMatrix a = rand_matrix(r, 4, 0.3);
  Mat c = a.mid_dense().inverse();
  DenseIntervalMatrix ca = point_times_interval_matrix(c, a);
  DenseIntervalMatrix m = identity_minus(ca);
  // M = I - C[A] must contain I - C*P for every point realization P.
  for (int s = 0; s < 50; ++s) {
    Mat p = sample(r, a);
    Mat direct = Mat::Identity(4, 4) - c * p;
    for (std::size_t i = 0; i < 4; ++i)
      for (std::size_t j = 0; j < 4; ++j)
        CHECK(m.at(i, j).contains(direct(static_cast<Eigen::Index>(i),
                                         static_cast<Eigen::Index>(j))));
  }
  // Midpoint preconditioning keeps the contraction bound small.
  CHECK(inf_norm(m) < 1.0);
}

TEST_CASE("point matvec outward containment") {
  StreamRng rng(1123);
  auto r = rng.stream("pmv");
  Mat c(2, 2);
  c << 0.1, -0.7, 1.3, 0.2;
  IntervalVector v(2);
  v[0] = Interval(-1.0, 2.0);
  v[1] = Interval(0.5, 0.75);
  IntervalVector out = point_matvec(c, v);
  for (int s = 0; s < 100; ++s) {
    Vec pv(2);
    for (std::size_t i = 0; i < 2; ++i) {
      double t = r.uniform(0.0, 1.0);
      pv(static_cast<Eigen::Index>(i)) =
          v[i].lo() + t * (v[i].hi() - v[i].lo());
    }
    CHECK(out.contains(c * pv));
  }
}
