#pragma once

#include <string>
#include <vector>

#include "ise/estimator.hpp"

namespace ise {

// Model variants gate what the inputs may contain; assembly itself never
// branches on the variant, so a permissive variant fed degenerate inputs
// produces the identical system.
//   i   thin line parameters, no band rows
//   ii  thin line parameters, band rows allowed
//   iii interval line parameters, all DG metered (no band rows)
//   iv  interval line parameters and band rows
enum class Variant { I, II, III, IV };

Variant parse_variant(const std::string& s);
std::string variant_name(Variant v);

struct IseSystem {
  IntervalMatrix A;  // (m+n) x (m+n)
  IntervalVector B;  // [z1; z2; 0]
  Vec weights;       // 1/sigma^2 per row, band sigma taken from the band itself
  StateIndex index;
  std::vector<RowSpec> rows;  // weighted rows then band rows
  std::size_t m1 = 0, m2 = 0, n = 0;

  std::size_t m() const { return m1 + m2; }
  std::size_t dim() const { return m() + n; }
};

// Augmented square system
//     [ H  -I ] [x]   [z]
//     [ 0 H'W ] [y] = [0]
// whose x block ranges over the weighted least squares solutions of every
// point realization of the measurement and parameter boxes.
IseSystem assemble(const Feeder& f, const MeasurementSet& ms, Variant v);

IntervalVector extract_states(const IseSystem& s, const IntervalVector& X);
IntervalVector extract_residuals(const IseSystem& s, const IntervalVector& X);

// Exact triplet dump (hexfloat endpoints, fixed order) for diffing
// assemblies.
std::string dump_system(const IseSystem& s);

}  // namespace ise
