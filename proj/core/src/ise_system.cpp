#include "ise/ise_system.hpp"

#include <algorithm>
#include <cstdio>
#include <sstream>

#include "ise/errors.hpp"

namespace ise {

Variant parse_variant(const std::string& s) {
  if (s == "i") return Variant::I;
  if (s == "ii") return Variant::II;
  if (s == "iii") return Variant::III;
  if (s == "iv") return Variant::IV;
  throw SchemaError("unknown model variant '" + s + "' (expected i, ii, iii, iv)");
}

std::string variant_name(Variant v) {
  switch (v) {
    case Variant::I: return "i";
    case Variant::II: return "ii";
    case Variant::III: return "iii";
    case Variant::IV: return "iv";
  }
  return "?";
}

namespace {

bool thin_lines(const Feeder& f) {
  for (const auto& b : f.branches)
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j)
        if (!b.r[i][j].is_thin() || !b.x[i][j].is_thin()) return false;
  return true;
}

}  // namespace

IseSystem assemble(const Feeder& f, const MeasurementSet& ms, Variant v) {
  MeasurementVector z1 = build_z1(f, ms);
  MeasurementVector z2 = build_z2(f, ms);

  if ((v == Variant::I || v == Variant::II) && !thin_lines(f))
    throw SchemaError("model " + variant_name(v) +
                      " requires thin line parameters");
  if ((v == Variant::I || v == Variant::III) && z2.z.size() != 0)
    throw SchemaError("model " + variant_name(v) + " admits no band rows; " +
                      std::to_string(z2.z.size()) + " present");

  IseSystem s;
  s.index = StateIndex::build(f);
  s.m1 = z1.z.size();
  s.m2 = z2.z.size();
  s.n = s.index.n();
  s.rows = std::move(z1.rows);
  s.rows.insert(s.rows.end(), z2.rows.begin(), z2.rows.end());

  IntervalMatrix H = build_jacobian(f, s.index, s.rows);
  require_observable(H.mid_dense(), f, s.index);

  Vec w1 = build_weights(f, ms);
  s.weights = Vec::Ones(static_cast<Eigen::Index>(s.m()));
  s.weights.head(w1.size()) = w1;
  // Band rows carry no meter sigma; the band itself is the 3-sigma spread.
  // Unit weights in per-unit scale would let precise channels override the
  // band anchor and push its information into 1/|Z|-amplified voltage rows.
  for (std::size_t j = 0; j < s.m2; ++j) {
    double hb = std::max(z2.z[j].rad(), 1e-4);
    double sg = hb / 3.0;
    s.weights[static_cast<Eigen::Index>(s.m1 + j)] = 1.0 / (sg * sg);
  }

  const std::size_t m = s.m(), n = s.n;
  s.A = IntervalMatrix(m + n, m + n);
  const Interval minus_one(-1.0);
  for (std::size_t i = 0; i < m; ++i) {
    for (const auto& e : H.row(i)) s.A.set_entry(i, e.col, e.value);
    s.A.set_entry(i, n + i, minus_one);
    // Transposed weighted copy: row block enforcing H'W y = 0.
    Interval wi(s.weights[static_cast<Eigen::Index>(i)]);
    for (const auto& e : H.row(i)) s.A.add_entry(m + e.col, n + i, e.value * wi);
  }

  s.B = IntervalVector(m + n, Interval(0.0));
  for (std::size_t i = 0; i < s.m1; ++i) s.B[i] = z1.z[i];
  for (std::size_t i = 0; i < s.m2; ++i) s.B[s.m1 + i] = z2.z[i];
  return s;
}

IntervalVector extract_states(const IseSystem& s, const IntervalVector& X) {
  IntervalVector x(s.n);
  for (std::size_t i = 0; i < s.n; ++i) x[i] = X[i];
  return x;
}

IntervalVector extract_residuals(const IseSystem& s, const IntervalVector& X) {
  IntervalVector y(s.m());
  for (std::size_t i = 0; i < s.m(); ++i) y[i] = X[s.n + i];
  return y;
}

std::string dump_system(const IseSystem& s) {
  std::ostringstream os;
  char buf[128];
  os << "ise-system m1 " << s.m1 << " m2 " << s.m2 << " n " << s.n << "\n";
  for (std::size_t i = 0; i < s.rows.size(); ++i) {
    const RowSpec& r = s.rows[i];
    os << "row " << i << ' ' << meas_kind_name(r.kind) << ' ' << r.element << ' '
       << phase_letter(r.phase) << (r.imag ? " im" : " re") << "\n";
  }
  for (std::size_t i = 0; i < s.A.rows(); ++i)
    for (const auto& e : s.A.row(i)) {
      std::snprintf(buf, sizeof buf, "A %zu %zu %a %a\n", i, e.col,
                    e.value.lo(), e.value.hi());
      os << buf;
    }
  for (std::size_t i = 0; i < s.B.size(); ++i) {
    std::snprintf(buf, sizeof buf, "B %zu %a %a\n", i, s.B[i].lo(), s.B[i].hi());
    os << buf;
  }
  for (Eigen::Index i = 0; i < s.weights.size(); ++i) {
    std::snprintf(buf, sizeof buf, "W %td %a\n", static_cast<std::ptrdiff_t>(i),
                  s.weights[i]);
    os << buf;
  }
  return os.str();
}

}  // namespace ise
