#pragma once

#include <string>

#include "ise/interval_linalg.hpp"

namespace ise {

struct SolverOptions {
  double eps = 1e-4;  // stop when successive iterates move at most this far
  int max_iterations = 1000;
};

struct SolverReport {
  std::string method;
  IntervalVector solution;
  int iterations = 0;
  double beta = 0.0;   // contraction bound |I - C[A]|_inf, < 1 when usable
  double alpha = 0.0;  // initial box radius (contraction methods)
  double time_initial = 0.0;  // seconds: preconditioning and seeding
  double time_iterate = 0.0;  // seconds: contraction loop
  bool converged = false;
};

struct Preconditioned {
  Mat C;                  // explicit inverse of the midpoint matrix
  DenseIntervalMatrix M;  // I - C[A]
  IntervalVector CB;      // C[B]
  double beta = 0.0;
};

// LU-based inverse of the midpoint matrix; throws PreconditionError when the
// midpoint is singular or the contraction bound reaches 1.
Preconditioned precondition(const IntervalMatrix& A, const IntervalVector& B);

// [-alpha, alpha]^n with alpha = |C[B]|_inf / (1 - beta), rounded outward; an
// outer bound on every point solution.
IntervalVector initial_box(const Preconditioned& p);

// Residual-form contraction about the midpoint solution x_s = C mid(B):
// d <- (C(B - A x_s) + (I - C[A]) d) ∩ d, returning x_s + d. Nested iterates
// are asserted each step; an empty intersection means the system admits no
// solution and raises InconsistencyError.
SolverReport mko_solve(const IntervalMatrix& A, const IntervalVector& B,
                       const SolverOptions& opt = {});

// Plain contraction X <- (C[B] + (I - C[A]) X) ∩ X from x0, or from the
// initial box when x0 is empty.
SolverReport krawczyk_solve(const IntervalMatrix& A, const IntervalVector& B,
                            const SolverOptions& opt = {},
                            const IntervalVector& x0 = IntervalVector());

// Interval Gaussian elimination, partial pivoting on midpoint magnitude.
// Throws BreakdownError when the selected pivot straddles zero.
IntervalVector ige_solve(const IntervalMatrix& A, const IntervalVector& B);

// Contraction seeded by the elimination enclosure, widened to the hull of
// the norm-bound box so the seed always contains the contraction limit.
SolverReport iko_solve(const IntervalMatrix& A, const IntervalVector& B,
                       const SolverOptions& opt = {});

// Componentwise min/max of the point solutions over every endpoint
// combination of the non-thin entries of A and B. Exhaustive, so the number
// of corners 2^k is capped. A lower bound on the hull, which suffices for
// "solver output contains oracle" checks.
IntervalVector hull_oracle(const IntervalMatrix& A, const IntervalVector& B,
                           std::size_t max_corners = std::size_t(1) << 20);

}  // namespace ise
