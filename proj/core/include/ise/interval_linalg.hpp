#pragma once

#include <Eigen/Dense>
#include <cstddef>
#include <optional>
#include <vector>

#include "ise/interval.hpp"

namespace ise {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

class IntervalVector {
 public:
  IntervalVector() = default;
  explicit IntervalVector(std::size_t n, const Interval& fill = Interval())
      : v_(n, fill) {}
  static IntervalVector thin(const Vec& x);

  std::size_t size() const { return v_.size(); }
  Interval& operator[](std::size_t i) { return v_[i]; }
  const Interval& operator[](std::size_t i) const { return v_[i]; }
  void push_back(const Interval& x) { v_.push_back(x); }
  void reserve(std::size_t n) { v_.reserve(n); }

  Vec mid() const;
  Vec rad() const;
  Vec widths() const;
  double max_width() const;
  bool contains(const Vec& x) const;
  bool contains(const IntervalVector& o) const;
  bool all_thin() const;

 private:
  std::vector<Interval> v_;
};

IntervalVector operator+(const IntervalVector& a, const IntervalVector& b);
IntervalVector operator-(const IntervalVector& a, const IntervalVector& b);
IntervalVector operator+(const IntervalVector& a, const Vec& b);
IntervalVector operator-(const IntervalVector& a, const Vec& b);
IntervalVector operator+(const Vec& a, const IntervalVector& b);

// Componentwise intersection; nullopt when any component is empty, with the
// offending index reported through first_empty when given.
std::optional<IntervalVector> intersect(const IntervalVector& a,
                                        const IntervalVector& b,
                                        std::size_t* first_empty = nullptr);

double inf_norm(const IntervalVector& v);  // max magnitude, upper bound
double distance(const IntervalVector& a, const IntervalVector& b);

// Sparse interval matrix, rows of (col, value) sorted by column.
class IntervalMatrix {
 public:
  struct Entry {
    std::size_t col;
    Interval value;
  };

  IntervalMatrix() : rows_(0), cols_(0) {}
  IntervalMatrix(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), data_(rows) {}
  static IntervalMatrix identity(std::size_t n);
  static IntervalMatrix thin(const Mat& m);  // keeps structural zeros out

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  std::size_t nonzeros() const;

  // Accumulates into an existing entry, inserts otherwise.
  void add_entry(std::size_t r, std::size_t c, const Interval& v);
  void set_entry(std::size_t r, std::size_t c, const Interval& v);
  Interval entry(std::size_t r, std::size_t c) const;  // zero when absent
  const std::vector<Entry>& row(std::size_t r) const { return data_[r]; }

  Mat mid_dense() const;
  Mat rad_dense() const;
  IntervalMatrix transposed() const;
  bool all_thin() const;
  bool contains(const Mat& m) const;

 private:
  std::size_t rows_, cols_;
  std::vector<std::vector<Entry>> data_;
};

// Dense interval matrix (row major), used for preconditioned products.
class DenseIntervalMatrix {
 public:
  DenseIntervalMatrix() : rows_(0), cols_(0) {}
  DenseIntervalMatrix(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), data_(rows * cols) {}

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  Interval& at(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  const Interval& at(std::size_t r, std::size_t c) const {
    return data_[r * cols_ + c];
  }

 private:
  std::size_t rows_, cols_;
  std::vector<Interval> data_;
};

// Max row sum of magnitudes, accumulated with upward rounding so the result
// bounds the norm of every point realization.
double inf_norm(const IntervalMatrix& m);
double inf_norm(const DenseIntervalMatrix& m);

// C * [A] with point C, outward rounded, fixed accumulation order.
DenseIntervalMatrix point_times_interval_matrix(const Mat& C,
                                                const IntervalMatrix& A);

// identity - C * [A], fused so no dense intermediate is needed twice.
DenseIntervalMatrix identity_minus(const DenseIntervalMatrix& CA);

IntervalVector interval_matvec(const IntervalMatrix& M, const IntervalVector& v);
IntervalVector interval_matvec(const IntervalMatrix& M, const Vec& x);
IntervalVector interval_matvec(const DenseIntervalMatrix& M,
                               const IntervalVector& v);

// C * [v] with point C, outward rounded.
IntervalVector point_matvec(const Mat& C, const IntervalVector& v);

}  // namespace ise
