#include "ise/solvers.hpp"

#include <algorithm>
#include <chrono>
#include <stdexcept>

#include "ise/errors.hpp"

namespace ise {

namespace {

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
      .count();
}

[[noreturn]] void empty_component(std::size_t i) {
  throw InconsistencyError("empty intersection at component " +
                           std::to_string(i) + "; no point system is solvable");
}

void require_nested(const IntervalVector& outer, const IntervalVector& inner) {
  if (!outer.contains(inner))
    throw std::logic_error("contraction iterate escaped the previous one");
}

}  // namespace

Preconditioned precondition(const IntervalMatrix& A, const IntervalVector& B) {
  if (A.rows() != A.cols()) throw std::invalid_argument("matrix not square");
  if (A.rows() != B.size()) throw std::invalid_argument("size mismatch");
  Preconditioned p;
  Mat mid = A.mid_dense();
  p.C = Eigen::PartialPivLU<Mat>(mid).inverse();
  if (!p.C.array().isFinite().all())
    throw PreconditionError("midpoint matrix is singular");
  p.M = identity_minus(point_times_interval_matrix(p.C, A));
  p.beta = inf_norm(p.M);
  if (!(p.beta < 1.0))
    throw PreconditionError("contraction bound " + std::to_string(p.beta) +
                            " >= 1; midpoint inverse does not precondition");
  p.CB = point_matvec(p.C, B);
  return p;
}

IntervalVector initial_box(const Preconditioned& p) {
  double alpha = rounding::div_up(inf_norm(p.CB),
                                  rounding::sub_down(1.0, p.beta));
  IntervalVector x(p.CB.size(), Interval(-alpha, alpha));
  return x;
}

namespace {

// Shared contraction loop: x <- (base + M x) ∩ x. Records iterations and
// convergence into rep.
IntervalVector contract(const DenseIntervalMatrix& M, const IntervalVector& base,
                        IntervalVector x, const SolverOptions& opt,
                        SolverReport& rep) {
  for (int it = 1; it <= opt.max_iterations; ++it) {
    IntervalVector image = base + interval_matvec(M, x);
    std::size_t bad = 0;
    auto next = intersect(image, x, &bad);
    if (!next) empty_component(bad);
    require_nested(x, *next);
    double move = distance(*next, x);
    x = std::move(*next);
    rep.iterations = it;
    if (move <= opt.eps) {
      rep.converged = true;
      break;
    }
  }
  return x;
}

}  // namespace

SolverReport mko_solve(const IntervalMatrix& A, const IntervalVector& B,
                       const SolverOptions& opt) {
  SolverReport rep;
  rep.method = "mko";
  auto t0 = std::chrono::steady_clock::now();

  Preconditioned p = precondition(A, B);
  rep.beta = p.beta;
  Vec xs = p.C * B.mid();

  // Residual enclosure C(B - A xs) = C[B] - xs + (I - C[A]) xs.
  IntervalVector r =
      (p.CB - xs) + interval_matvec(p.M, IntervalVector::thin(xs));
  IntervalVector x0 = initial_box(p);
  rep.alpha = x0[0].hi();
  IntervalVector d = x0 - xs;

  rep.time_initial = seconds_since(t0);
  t0 = std::chrono::steady_clock::now();
  d = contract(p.M, r, std::move(d), opt, rep);
  rep.time_iterate = seconds_since(t0);

  rep.solution = d + xs;
  return rep;
}

SolverReport krawczyk_solve(const IntervalMatrix& A, const IntervalVector& B,
                            const SolverOptions& opt, const IntervalVector& x0) {
  SolverReport rep;
  rep.method = "krawczyk";
  auto t0 = std::chrono::steady_clock::now();

  Preconditioned p = precondition(A, B);
  rep.beta = p.beta;
  IntervalVector x = x0;
  if (x.size() == 0) {
    x = initial_box(p);
    rep.alpha = x[0].hi();
  } else if (x.size() != B.size()) {
    throw std::invalid_argument("seed box size mismatch");
  }

  rep.time_initial = seconds_since(t0);
  t0 = std::chrono::steady_clock::now();
  x = contract(p.M, p.CB, std::move(x), opt, rep);
  rep.time_iterate = seconds_since(t0);

  rep.solution = std::move(x);
  return rep;
}

IntervalVector ige_solve(const IntervalMatrix& A, const IntervalVector& B) {
  if (A.rows() != A.cols()) throw std::invalid_argument("matrix not square");
  if (A.rows() != B.size()) throw std::invalid_argument("size mismatch");
  const std::size_t n = A.rows();

  std::vector<std::vector<Interval>> a(n, std::vector<Interval>(n));
  for (std::size_t i = 0; i < n; ++i)
    for (const auto& e : A.row(i)) a[i][e.col] = e.value;
  IntervalVector b = B;

  for (std::size_t k = 0; k < n; ++k) {
    std::size_t piv = k;
    double best = std::abs(a[k][k].mid());
    for (std::size_t i = k + 1; i < n; ++i) {
      double c = std::abs(a[i][k].mid());
      if (c > best) {
        best = c;
        piv = i;
      }
    }
    if (piv != k) {
      std::swap(a[piv], a[k]);
      std::swap(b[piv], b[k]);
    }
    if (a[k][k].contains(0.0))
      throw BreakdownError("pivot at column " + std::to_string(k) +
                           " contains zero");
    for (std::size_t i = k + 1; i < n; ++i) {
      if (a[i][k].is_thin() && a[i][k].lo() == 0.0) continue;
      Interval factor = a[i][k] / a[k][k];
      for (std::size_t j = k + 1; j < n; ++j) a[i][j] -= factor * a[k][j];
      b[i] -= factor * b[k];
      a[i][k] = Interval(0.0);
    }
  }

  IntervalVector x(n);
  for (std::size_t kk = n; kk-- > 0;) {
    Interval s = b[kk];
    for (std::size_t j = kk + 1; j < n; ++j) s -= a[kk][j] * x[j];
    x[kk] = s / a[kk][kk];
  }
  return x;
}

SolverReport iko_solve(const IntervalMatrix& A, const IntervalVector& B,
                       const SolverOptions& opt) {
  auto t0 = std::chrono::steady_clock::now();
  IntervalVector seed = ige_solve(A, B);
  // The contraction needs a seed containing its own limit, not just the
  // solution set; a tight elimination box would pin the iterate inside it.
  // The norm-bound box always contains the limit, so widen to its hull.
  Preconditioned p = precondition(A, B);
  IntervalVector box = initial_box(p);
  double alpha = box[0].hi();
  for (std::size_t i = 0; i < seed.size(); ++i)
    seed[i] = Interval(std::min(seed[i].lo(), box[i].lo()),
                       std::max(seed[i].hi(), box[i].hi()));
  double t_seed = seconds_since(t0);
  SolverReport rep = krawczyk_solve(A, B, opt, seed);
  rep.method = "iko";
  rep.alpha = alpha;
  rep.time_initial += t_seed;
  return rep;
}

IntervalVector hull_oracle(const IntervalMatrix& A, const IntervalVector& B,
                           std::size_t max_corners) {
  if (A.rows() != A.cols()) throw std::invalid_argument("matrix not square");
  const std::size_t n = A.rows();

  struct Slot {
    bool in_b;
    std::size_t r, c;
    double lo, hi;
  };
  std::vector<Slot> slots;
  Mat a = A.mid_dense();
  Vec b = B.mid();
  for (std::size_t i = 0; i < n; ++i)
    for (const auto& e : A.row(i))
      if (!e.value.is_thin())
        slots.push_back({false, i, e.col, e.value.lo(), e.value.hi()});
  for (std::size_t i = 0; i < n; ++i)
    if (!B[i].is_thin()) slots.push_back({true, i, 0, B[i].lo(), B[i].hi()});

  if (slots.size() >= 8 * sizeof(std::size_t) ||
      (std::size_t(1) << slots.size()) > max_corners)
    throw std::invalid_argument("too many interval entries (" +
                                std::to_string(slots.size()) +
                                ") for corner enumeration");

  Vec lo = Vec::Constant(static_cast<Eigen::Index>(n),
                         std::numeric_limits<double>::infinity());
  Vec hi = -lo;
  const std::size_t corners = std::size_t(1) << slots.size();
  for (std::size_t mask = 0; mask < corners; ++mask) {
    for (std::size_t s = 0; s < slots.size(); ++s) {
      const Slot& sl = slots[s];
      double v = (mask >> s) & 1 ? sl.hi : sl.lo;
      if (sl.in_b)
        b[static_cast<Eigen::Index>(sl.r)] = v;
      else
        a(static_cast<Eigen::Index>(sl.r), static_cast<Eigen::Index>(sl.c)) = v;
    }
    Vec x = Eigen::PartialPivLU<Mat>(a).solve(b);
    if (!x.array().isFinite().all())
      throw PreconditionError("singular corner matrix; solution set unbounded");
    lo = lo.cwiseMin(x);
    hi = hi.cwiseMax(x);
  }

  IntervalVector out(n);
  for (std::size_t i = 0; i < n; ++i)
    out[i] = Interval(lo[static_cast<Eigen::Index>(i)],
                      hi[static_cast<Eigen::Index>(i)]);
  return out;
}

}  // namespace ise
