#include "ise/interval_linalg.hpp"

#include <algorithm>
#include <stdexcept>

namespace ise {

namespace {

using rounding::add_down;
using rounding::add_up;
using rounding::mul_down;
using rounding::mul_up;

// c * [v] into raw endpoints.
inline void scale_endpoints(double c, const Interval& v, double& lo, double& hi) {
  if (c >= 0.0) {
    lo = mul_down(c, v.lo());
    hi = mul_up(c, v.hi());
  } else {
    lo = mul_down(c, v.hi());
    hi = mul_up(c, v.lo());
  }
}

// [a] * [b] into raw endpoints.
inline void mul_endpoints(const Interval& a, const Interval& b, double& lo,
                          double& hi) {
  double l1 = mul_down(a.lo(), b.lo()), l2 = mul_down(a.lo(), b.hi());
  double l3 = mul_down(a.hi(), b.lo()), l4 = mul_down(a.hi(), b.hi());
  lo = std::min(std::min(l1, l2), std::min(l3, l4));
  double h1 = mul_up(a.lo(), b.lo()), h2 = mul_up(a.lo(), b.hi());
  double h3 = mul_up(a.hi(), b.lo()), h4 = mul_up(a.hi(), b.hi());
  hi = std::max(std::max(h1, h2), std::max(h3, h4));
}

void check_same_size(std::size_t a, std::size_t b, const char* what) {
  if (a != b) throw std::invalid_argument(std::string(what) + ": size mismatch");
}

}  // namespace

IntervalVector IntervalVector::thin(const Vec& x) {
  IntervalVector r(static_cast<std::size_t>(x.size()));
  for (Eigen::Index i = 0; i < x.size(); ++i) r[i] = Interval(x[i]);
  return r;
}

Vec IntervalVector::mid() const {
  Vec r(static_cast<Eigen::Index>(v_.size()));
  for (std::size_t i = 0; i < v_.size(); ++i) r[static_cast<Eigen::Index>(i)] = v_[i].mid();
  return r;
}

Vec IntervalVector::rad() const {
  Vec r(static_cast<Eigen::Index>(v_.size()));
  for (std::size_t i = 0; i < v_.size(); ++i) r[static_cast<Eigen::Index>(i)] = v_[i].rad();
  return r;
}

Vec IntervalVector::widths() const {
  Vec r(static_cast<Eigen::Index>(v_.size()));
  for (std::size_t i = 0; i < v_.size(); ++i) r[static_cast<Eigen::Index>(i)] = v_[i].width();
  return r;
}

double IntervalVector::max_width() const {
  double w = 0.0;
  for (const auto& iv : v_) w = std::max(w, iv.width());
  return w;
}

bool IntervalVector::contains(const Vec& x) const {
  if (static_cast<std::size_t>(x.size()) != v_.size()) return false;
  for (std::size_t i = 0; i < v_.size(); ++i)
    if (!v_[i].contains(x[static_cast<Eigen::Index>(i)])) return false;
  return true;
}

bool IntervalVector::contains(const IntervalVector& o) const {
  if (o.size() != v_.size()) return false;
  for (std::size_t i = 0; i < v_.size(); ++i)
    if (!v_[i].contains(o[i])) return false;
  return true;
}

bool IntervalVector::all_thin() const {
  for (const auto& iv : v_)
    if (!iv.is_thin()) return false;
  return true;
}

IntervalVector operator+(const IntervalVector& a, const IntervalVector& b) {
  check_same_size(a.size(), b.size(), "IntervalVector +");
  IntervalVector r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] + b[i];
  return r;
}

IntervalVector operator-(const IntervalVector& a, const IntervalVector& b) {
  check_same_size(a.size(), b.size(), "IntervalVector -");
  IntervalVector r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] - b[i];
  return r;
}

IntervalVector operator+(const IntervalVector& a, const Vec& b) {
  check_same_size(a.size(), static_cast<std::size_t>(b.size()), "IntervalVector +");
  IntervalVector r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i)
    r[i] = a[i] + Interval(b[static_cast<Eigen::Index>(i)]);
  return r;
}

IntervalVector operator-(const IntervalVector& a, const Vec& b) {
  check_same_size(a.size(), static_cast<std::size_t>(b.size()), "IntervalVector -");
  IntervalVector r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i)
    r[i] = a[i] - Interval(b[static_cast<Eigen::Index>(i)]);
  return r;
}

IntervalVector operator+(const Vec& a, const IntervalVector& b) { return b + a; }

std::optional<IntervalVector> intersect(const IntervalVector& a,
                                        const IntervalVector& b,
                                        std::size_t* first_empty) {
  check_same_size(a.size(), b.size(), "IntervalVector intersect");
  IntervalVector r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    auto c = intersect(a[i], b[i]);
    if (!c) {
      if (first_empty) *first_empty = i;
      return std::nullopt;
    }
    r[i] = *c;
  }
  return r;
}

double inf_norm(const IntervalVector& v) {
  double n = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) n = std::max(n, v[i].mag());
  return n;
}

double distance(const IntervalVector& a, const IntervalVector& b) {
  check_same_size(a.size(), b.size(), "IntervalVector distance");
  double d = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) d = std::max(d, distance(a[i], b[i]));
  return d;
}

IntervalMatrix IntervalMatrix::identity(std::size_t n) {
  IntervalMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m.set_entry(i, i, Interval(1.0));
  return m;
}

IntervalMatrix IntervalMatrix::thin(const Mat& m) {
  IntervalMatrix r(static_cast<std::size_t>(m.rows()),
                   static_cast<std::size_t>(m.cols()));
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j)
      if (m(i, j) != 0.0)
        r.set_entry(static_cast<std::size_t>(i), static_cast<std::size_t>(j),
                    Interval(m(i, j)));
  return r;
}

std::size_t IntervalMatrix::nonzeros() const {
  std::size_t n = 0;
  for (const auto& row : data_) n += row.size();
  return n;
}

void IntervalMatrix::add_entry(std::size_t r, std::size_t c, const Interval& v) {
  if (r >= rows_ || c >= cols_)
    throw std::out_of_range("IntervalMatrix::add_entry: index out of range");
  auto& row = data_[r];
  auto it = std::lower_bound(row.begin(), row.end(), c,
                             [](const Entry& e, std::size_t col) { return e.col < col; });
  if (it != row.end() && it->col == c)
    it->value = it->value + v;
  else
    row.insert(it, Entry{c, v});
}

void IntervalMatrix::set_entry(std::size_t r, std::size_t c, const Interval& v) {
  if (r >= rows_ || c >= cols_)
    throw std::out_of_range("IntervalMatrix::set_entry: index out of range");
  auto& row = data_[r];
  auto it = std::lower_bound(row.begin(), row.end(), c,
                             [](const Entry& e, std::size_t col) { return e.col < col; });
  if (it != row.end() && it->col == c)
    it->value = v;
  else
    row.insert(it, Entry{c, v});
}

Interval IntervalMatrix::entry(std::size_t r, std::size_t c) const {
  if (r >= rows_ || c >= cols_)
    throw std::out_of_range("IntervalMatrix::entry: index out of range");
  const auto& row = data_[r];
  auto it = std::lower_bound(row.begin(), row.end(), c,
                             [](const Entry& e, std::size_t col) { return e.col < col; });
  if (it != row.end() && it->col == c) return it->value;
  return Interval();
}

Mat IntervalMatrix::mid_dense() const {
  Mat m = Mat::Zero(static_cast<Eigen::Index>(rows_), static_cast<Eigen::Index>(cols_));
  for (std::size_t i = 0; i < rows_; ++i)
    for (const auto& e : data_[i])
      m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(e.col)) = e.value.mid();
  return m;
}

Mat IntervalMatrix::rad_dense() const {
  Mat m = Mat::Zero(static_cast<Eigen::Index>(rows_), static_cast<Eigen::Index>(cols_));
  for (std::size_t i = 0; i < rows_; ++i)
    for (const auto& e : data_[i])
      m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(e.col)) = e.value.rad();
  return m;
}

IntervalMatrix IntervalMatrix::transposed() const {
  IntervalMatrix t(cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (const auto& e : data_[i]) t.data_[e.col].push_back(Entry{i, e.value});
  return t;  // rows already sorted: column index i is visited in order
}

bool IntervalMatrix::all_thin() const {
  for (const auto& row : data_)
    for (const auto& e : row)
      if (!e.value.is_thin()) return false;
  return true;
}

bool IntervalMatrix::contains(const Mat& m) const {
  if (static_cast<std::size_t>(m.rows()) != rows_ ||
      static_cast<std::size_t>(m.cols()) != cols_)
    return false;
  for (std::size_t i = 0; i < rows_; ++i) {
    std::size_t next = 0;
    const auto& row = data_[i];
    for (std::size_t j = 0; j < cols_; ++j) {
      Interval v;
      if (next < row.size() && row[next].col == j) v = row[next++].value;
      if (!v.contains(m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j))))
        return false;
    }
  }
  return true;
}

double inf_norm(const IntervalMatrix& m) {
  double n = 0.0;
  for (std::size_t i = 0; i < m.rows(); ++i) {
    double s = 0.0;
    for (const auto& e : m.row(i)) s = add_up(s, e.value.mag());
    n = std::max(n, s);
  }
  return n;
}

double inf_norm(const DenseIntervalMatrix& m) {
  double n = 0.0;
  for (std::size_t i = 0; i < m.rows(); ++i) {
    double s = 0.0;
    for (std::size_t j = 0; j < m.cols(); ++j) s = add_up(s, m.at(i, j).mag());
    n = std::max(n, s);
  }
  return n;
}

DenseIntervalMatrix point_times_interval_matrix(const Mat& C,
                                                const IntervalMatrix& A) {
  if (static_cast<std::size_t>(C.cols()) != A.rows())
    throw std::invalid_argument("point_times_interval_matrix: inner dimension mismatch");
  const std::size_t n = static_cast<std::size_t>(C.rows());
  const std::size_t m = A.cols();
  Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor> Cr = C;
  DenseIntervalMatrix R(n, m);
  std::vector<double> lo(m), hi(m);
  for (std::size_t i = 0; i < n; ++i) {
    std::fill(lo.begin(), lo.end(), 0.0);
    std::fill(hi.begin(), hi.end(), 0.0);
    const double* crow = Cr.data() + i * A.rows();
    for (std::size_t k = 0; k < A.rows(); ++k) {
      double c = crow[k];
      if (c == 0.0) continue;
      for (const auto& e : A.row(k)) {
        double plo, phi;
        scale_endpoints(c, e.value, plo, phi);
        lo[e.col] = add_down(lo[e.col], plo);
        hi[e.col] = add_up(hi[e.col], phi);
      }
    }
    for (std::size_t j = 0; j < m; ++j) R.at(i, j) = Interval(lo[j], hi[j]);
  }
  return R;
}

DenseIntervalMatrix identity_minus(const DenseIntervalMatrix& CA) {
  if (CA.rows() != CA.cols())
    throw std::invalid_argument("identity_minus: matrix must be square");
  DenseIntervalMatrix R(CA.rows(), CA.cols());
  using rounding::sub_down;
  using rounding::sub_up;
  for (std::size_t i = 0; i < CA.rows(); ++i)
    for (std::size_t j = 0; j < CA.cols(); ++j) {
      double d = (i == j) ? 1.0 : 0.0;
      const Interval& v = CA.at(i, j);
      R.at(i, j) = Interval(sub_down(d, v.hi()), sub_up(d, v.lo()));
    }
  return R;
}

IntervalVector interval_matvec(const IntervalMatrix& M, const IntervalVector& v) {
  check_same_size(M.cols(), v.size(), "interval_matvec");
  IntervalVector r(M.rows());
  for (std::size_t i = 0; i < M.rows(); ++i) {
    double lo = 0.0, hi = 0.0;
    for (const auto& e : M.row(i)) {
      double plo, phi;
      mul_endpoints(e.value, v[e.col], plo, phi);
      lo = add_down(lo, plo);
      hi = add_up(hi, phi);
    }
    r[i] = Interval(lo, hi);
  }
  return r;
}

IntervalVector interval_matvec(const IntervalMatrix& M, const Vec& x) {
  check_same_size(M.cols(), static_cast<std::size_t>(x.size()), "interval_matvec");
  IntervalVector r(M.rows());
  for (std::size_t i = 0; i < M.rows(); ++i) {
    double lo = 0.0, hi = 0.0;
    for (const auto& e : M.row(i)) {
      double plo, phi;
      // interval entry times point component
      double c = x[static_cast<Eigen::Index>(e.col)];
      if (c >= 0.0) {
        plo = mul_down(e.value.lo(), c);
        phi = mul_up(e.value.hi(), c);
      } else {
        plo = mul_down(e.value.hi(), c);
        phi = mul_up(e.value.lo(), c);
      }
      lo = add_down(lo, plo);
      hi = add_up(hi, phi);
    }
    r[i] = Interval(lo, hi);
  }
  return r;
}

IntervalVector interval_matvec(const DenseIntervalMatrix& M,
                               const IntervalVector& v) {
  check_same_size(M.cols(), v.size(), "interval_matvec");
  IntervalVector r(M.rows());
  for (std::size_t i = 0; i < M.rows(); ++i) {
    double lo = 0.0, hi = 0.0;
    for (std::size_t j = 0; j < M.cols(); ++j) {
      const Interval& a = M.at(i, j);
      if (a.lo() == 0.0 && a.hi() == 0.0) continue;
      double plo, phi;
      mul_endpoints(a, v[j], plo, phi);
      lo = add_down(lo, plo);
      hi = add_up(hi, phi);
    }
    r[i] = Interval(lo, hi);
  }
  return r;
}

IntervalVector point_matvec(const Mat& C, const IntervalVector& v) {
  check_same_size(static_cast<std::size_t>(C.cols()), v.size(), "point_matvec");
  IntervalVector r(static_cast<std::size_t>(C.rows()));
  for (Eigen::Index i = 0; i < C.rows(); ++i) {
    double lo = 0.0, hi = 0.0;
    for (Eigen::Index j = 0; j < C.cols(); ++j) {
      double c = C(i, j);
      if (c == 0.0) continue;
      double plo, phi;
      scale_endpoints(c, v[static_cast<std::size_t>(j)], plo, phi);
      lo = add_down(lo, plo);
      hi = add_up(hi, phi);
    }
    r[static_cast<std::size_t>(i)] = Interval(lo, hi);
  }
  return r;
}

}  // namespace ise
