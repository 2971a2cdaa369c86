#include "ise/measurements.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <complex>
#include <set>

#include "ise/errors.hpp"
#include "json.hpp"

namespace ise {

namespace {

// Numeric ids order by value so reports read in feeder order; mixed or
// non-numeric ids fall back to the lexicographic order.
bool natural_less(const std::string& a, const std::string& b) {
  auto as_int = [](const std::string& s, long long& v) {
    if (s.empty()) return false;
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    return ec == std::errc() && p == s.data() + s.size();
  };
  long long va = 0, vb = 0;
  bool na = as_int(a, va), nb = as_int(b, vb);
  if (na && nb && va != vb) return va < vb;
  if (na != nb) return na;
  return a < b;
}

bool entry_less(const Measurement& a, const Measurement& b) {
  if (a.kind != b.kind) return static_cast<int>(a.kind) < static_cast<int>(b.kind);
  if (a.element != b.element) return natural_less(a.element, b.element);
  return static_cast<int>(a.phase) < static_cast<int>(b.phase);
}

double draw(StreamRng s, double sigma, double rel_frac, const ErrorSpec& es) {
  if (es.zero_noise || sigma == 0.0) return 0.0;
  // Truncating at 3/(1+f) sigma keeps truth inside the band later derived
  // from the measured value: |e| <= f|true|/(1+f) <= f|meas|.
  if (es.truncated) return sigma * s.truncated_normal(3.0 / (1.0 + rel_frac));
  return sigma * s.normal();
}

struct Chan {
  double value = 0.0;
  double sigma = 0.0;
  double halfband = 0.0;
};

// Relative-error channel: max error = pct% of the value, floored. Sigma and
// band are re-derived from the measured value, the only quantity the
// estimator may see.
Chan rel_channel(StreamRng s, double truth, double pct, double floor_hb,
                 const ErrorSpec& es) {
  double frac = pct / 100.0;
  double hb_true = std::max(frac * std::abs(truth), floor_hb);
  Chan c;
  c.value = truth + draw(std::move(s), hb_true / 3.0, frac, es);
  c.halfband = std::max(frac * std::abs(c.value), floor_hb);
  c.sigma = c.halfband / 3.0;
  return c;
}

// Absolute channel for phasor angles; the band is fixed in radians.
Chan abs_channel(StreamRng s, double truth, double halfband, const ErrorSpec& es) {
  Chan c;
  c.halfband = halfband;
  c.sigma = halfband / 3.0;
  c.value = truth + draw(std::move(s), c.sigma, 0.0, es);
  return c;
}

StreamRng chan(const StreamRng& rng, const char* group, const std::string& element,
               Phase ph, const char* comp) {
  return rng.stream(group)
      .stream(element)
      .stream(std::string(1, phase_letter(ph)))
      .stream(comp);
}

Interval band_of(double value, double halfband) {
  return Interval(value - halfband, value + halfband);
}

}  // namespace

std::string meas_kind_name(MeasKind k) {
  switch (k) {
    case MeasKind::PmuVoltage: return "pmu_voltage";
    case MeasKind::PmuCurrent: return "pmu_current";
    case MeasKind::ScadaFlow: return "scada_flow";
    case MeasKind::PseudoInjection: return "pseudo_injection";
    case MeasKind::DgBand: return "dg_band";
  }
  return "?";
}

namespace {

MeasKind parse_kind(const std::string& s, const std::string& origin) {
  for (MeasKind k : {MeasKind::PmuVoltage, MeasKind::PmuCurrent, MeasKind::ScadaFlow,
                     MeasKind::PseudoInjection, MeasKind::DgBand})
    if (s == meas_kind_name(k)) return k;
  throw SchemaError(origin + ": unknown measurement kind '" + s + "'");
}

}  // namespace

MeasurementSet synthesize_measurements(const Feeder& f, const TrueState& ts,
                                       const Placements& pl, const ErrorSpec& es,
                                       const StreamRng& rng) {
  MeasurementSet ms;

  for (const auto& id : pl.pmu_voltage) {
    std::size_t bi = f.bus_index(id);
    for (Phase ph : f.buses[bi].phases.list()) {
      cd v = ts.v_bus[bi][static_cast<int>(ph)];
      Measurement m;
      m.kind = MeasKind::PmuVoltage;
      m.element = id;
      m.phase = ph;
      Chan cm = rel_channel(chan(rng, "pmuV", id, ph, "mag"), std::abs(v),
                            es.pmu_mag_pct, es.min_halfband_pu, es);
      Chan ca = abs_channel(chan(rng, "pmuV", id, ph, "ang"), std::arg(v),
                            es.pmu_angle_crad / 100.0, es);
      m.mag = cm.value;
      m.sigma_mag = cm.sigma;
      m.halfband_mag = cm.halfband;
      m.angle = ca.value;
      m.sigma_angle = ca.sigma;
      m.halfband_angle = ca.halfband;
      ms.entries.push_back(m);
    }
  }

  for (const auto& id : pl.pmu_current) {
    std::size_t br = f.branch_index(id);
    for (Phase ph : f.branches[br].phases.list()) {
      cd i = ts.i_branch[br][static_cast<int>(ph)];
      Measurement m;
      m.kind = MeasKind::PmuCurrent;
      m.element = id;
      m.phase = ph;
      Chan cm = rel_channel(chan(rng, "pmuI", id, ph, "mag"), std::abs(i),
                            es.pmu_mag_pct, es.min_halfband_pu, es);
      Chan ca = abs_channel(chan(rng, "pmuI", id, ph, "ang"), std::arg(i),
                            es.pmu_angle_crad / 100.0, es);
      m.mag = cm.value;
      m.sigma_mag = cm.sigma;
      m.halfband_mag = cm.halfband;
      m.angle = ca.value;
      m.sigma_angle = ca.sigma;
      m.halfband_angle = ca.halfband;
      ms.entries.push_back(m);
    }
  }

  for (const auto& id : pl.scada_flow) {
    std::size_t br = f.branch_index(id);
    for (Phase ph : f.branches[br].phases.list()) {
      const PQ& s = ts.flow_from[br][static_cast<int>(ph)];
      Measurement m;
      m.kind = MeasKind::ScadaFlow;
      m.element = id;
      m.phase = ph;
      Chan cp = rel_channel(chan(rng, "flow", id, ph, "p"), s.p, es.scada_pct,
                            es.min_halfband_pu, es);
      Chan cq = rel_channel(chan(rng, "flow", id, ph, "q"), s.q, es.scada_pct,
                            es.min_halfband_pu, es);
      m.power = {cp.value, cq.value};
      m.sigma_p = cp.sigma;
      m.sigma_q = cq.sigma;
      m.halfband_p = cp.halfband;
      m.halfband_q = cq.halfband;
      ms.entries.push_back(m);
    }
  }

  // Injection rows: every covered non-slack bus phase gets exactly one row.
  // Metered DG folds into the measured value; unmetered DG turns the row
  // into a band entry carrying the full output interval.
  std::set<std::string> inj_buses(pl.pseudo_injection.begin(),
                                  pl.pseudo_injection.end());
  if (pl.pseudo_everywhere)
    for (const auto& b : f.buses) inj_buses.insert(b.id);
  for (const auto& dg : f.dg) inj_buses.insert(dg.bus);
  inj_buses.erase(f.slack);

  for (const auto& id : inj_buses) {
    std::size_t bi = f.bus_index(id);
    const Bus& b = f.buses[bi];
    for (Phase ph : b.phases.list()) {
      int pi = static_cast<int>(ph);
      Chan cp = rel_channel(chan(rng, "inj", id, ph, "p"), b.load[pi].p,
                            es.pseudo_pct, es.min_halfband_pu, es);
      Chan cq = rel_channel(chan(rng, "inj", id, ph, "q"), b.load[pi].q,
                            es.pseudo_pct, es.min_halfband_pu, es);
      double var_p = cp.sigma * cp.sigma, var_q = cq.sigma * cq.sigma;

      Interval p_dg_band(0.0), q_dg_band(0.0);
      PQ dg_point{};
      bool banded = false;
      for (const auto& dg : f.dg) {
        if (dg.bus != id || !dg.phases.has(ph)) continue;
        if (dg.metered) {
          const PQ& out = ts.dg_output.at(dg.id)[pi];
          Chan mp = rel_channel(chan(rng, "dgm", dg.id, ph, "p"), out.p,
                                es.scada_pct, es.min_halfband_pu, es);
          Chan mq = rel_channel(chan(rng, "dgm", dg.id, ph, "q"), out.q,
                                es.scada_pct, es.min_halfband_pu, es);
          cp.value -= mp.value;
          cq.value -= mq.value;
          cp.halfband += mp.halfband;
          cq.halfband += mq.halfband;
          var_p += mp.sigma * mp.sigma;
          var_q += mq.sigma * mq.sigma;
        } else {
          banded = true;
          DgPhasePower dpp = dg_phase_power(dg, f.base_mva);
          p_dg_band += dpp.p;
          q_dg_band += dpp.q;
          const PQ& out = ts.dg_output.at(dg.id)[pi];
          dg_point.p += out.p;
          dg_point.q += out.q;
        }
      }

      Measurement m;
      m.element = id;
      m.phase = ph;
      m.sigma_p = std::sqrt(var_p);
      m.sigma_q = std::sqrt(var_q);
      m.halfband_p = cp.halfband;
      m.halfband_q = cq.halfband;
      if (banded) {
        m.kind = MeasKind::DgBand;
        m.p_band = band_of(cp.value, cp.halfband) - p_dg_band;
        m.q_band = band_of(cq.value, cq.halfband) - q_dg_band;
        // Operating-point value; MC trials feed the sampled output back in
        // here, the interval path only uses the bands.
        m.power = {cp.value - dg_point.p, cq.value - dg_point.q};
      } else {
        m.kind = MeasKind::PseudoInjection;
        m.power = {cp.value, cq.value};
      }
      ms.entries.push_back(m);
    }
  }

  std::sort(ms.entries.begin(), ms.entries.end(), entry_less);
  return ms;
}

std::pair<Interval, Interval> power_to_equivalent_current(const Interval& p,
                                                          const Interval& q,
                                                          cd v_ref) {
  Interval vr(v_ref.real()), vx(v_ref.imag());
  Interval d = square(vr) + square(vx);
  Interval ir = (p * vr + q * vx) / d;
  Interval ix = (p * vx - q * vr) / d;
  return {ir, ix};
}

std::pair<double, double> power_to_equivalent_current(double p, double q, cd v_ref) {
  double d = std::norm(v_ref);
  return {(p * v_ref.real() + q * v_ref.imag()) / d,
          (p * v_ref.imag() - q * v_ref.real()) / d};
}

MeasurementVector build_z1(const Feeder& f, const MeasurementSet& ms) {
  MeasurementVector out;
  for (const auto& m : ms.entries) {
    if (m.kind == MeasKind::DgBand) continue;
    Interval re, im;
    if (m.kind == MeasKind::PmuVoltage || m.kind == MeasKind::PmuCurrent) {
      Interval mag = band_of(m.mag, m.halfband_mag);
      Interval ang = band_of(m.angle, m.halfband_angle);
      re = mag * cos(ang);
      im = mag * sin(ang);
    } else {
      auto [ir, ix] = power_to_equivalent_current(band_of(m.power.p, m.halfband_p),
                                                  band_of(m.power.q, m.halfband_q),
                                                  slack_phasor(f, m.phase));
      re = ir;
      im = ix;
    }
    out.z.push_back(re);
    out.rows.push_back({m.kind, m.element, m.phase, false});
    out.z.push_back(im);
    out.rows.push_back({m.kind, m.element, m.phase, true});
  }
  return out;
}

MeasurementVector build_z2(const Feeder& f, const MeasurementSet& ms) {
  MeasurementVector out;
  for (const auto& m : ms.entries) {
    if (m.kind != MeasKind::DgBand) continue;
    auto [ir, ix] =
        power_to_equivalent_current(m.p_band, m.q_band, slack_phasor(f, m.phase));
    out.z.push_back(ir);
    out.rows.push_back({m.kind, m.element, m.phase, false});
    out.z.push_back(ix);
    out.rows.push_back({m.kind, m.element, m.phase, true});
  }
  return out;
}

Vec build_weights(const Feeder& f, const MeasurementSet& ms) {
  std::vector<double> w;
  for (const auto& m : ms.entries) {
    if (m.kind == MeasKind::DgBand) continue;
    if (m.kind == MeasKind::PmuVoltage || m.kind == MeasKind::PmuCurrent) {
      // Small-angle rectangular bound: both components share it.
      double var = m.sigma_mag * m.sigma_mag +
                   (m.mag * m.sigma_angle) * (m.mag * m.sigma_angle);
      w.push_back(1.0 / var);
      w.push_back(1.0 / var);
    } else {
      double vm = std::abs(slack_phasor(f, m.phase));
      double sr = m.sigma_p / vm, sx = m.sigma_q / vm;
      w.push_back(1.0 / (sr * sr));
      w.push_back(1.0 / (sx * sx));
    }
  }
  return Eigen::Map<Vec>(w.data(), static_cast<Eigen::Index>(w.size()));
}

std::string save_measurements(const MeasurementSet& ms) {
  nlohmann::json root;
  auto& arr = root["entries"];
  arr = nlohmann::json::array();
  for (const auto& m : ms.entries) {
    nlohmann::json e;
    e["kind"] = meas_kind_name(m.kind);
    e["element"] = m.element;
    e["phase"] = std::string(1, phase_letter(m.phase));
    switch (m.kind) {
      case MeasKind::PmuVoltage:
      case MeasKind::PmuCurrent:
        e["mag"] = m.mag;
        e["angle"] = m.angle;
        e["sigma_mag"] = m.sigma_mag;
        e["sigma_angle"] = m.sigma_angle;
        e["halfband_mag"] = m.halfband_mag;
        e["halfband_angle"] = m.halfband_angle;
        break;
      case MeasKind::DgBand:
        e["p_band"] = {m.p_band.lo(), m.p_band.hi()};
        e["q_band"] = {m.q_band.lo(), m.q_band.hi()};
        [[fallthrough]];
      case MeasKind::ScadaFlow:
      case MeasKind::PseudoInjection:
        e["p"] = m.power.p;
        e["q"] = m.power.q;
        e["sigma_p"] = m.sigma_p;
        e["sigma_q"] = m.sigma_q;
        e["halfband_p"] = m.halfband_p;
        e["halfband_q"] = m.halfband_q;
        break;
    }
    arr.push_back(std::move(e));
  }
  return root.dump(2) + "\n";
}

MeasurementSet load_measurements(const std::string& json_text,
                                 const std::string& origin) {
  nlohmann::json root;
  try {
    root = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::exception& ex) {
    throw SchemaError(origin + ": " + ex.what());
  }
  if (!root.contains("entries") || !root["entries"].is_array())
    throw SchemaError(origin + ": missing 'entries' array");

  MeasurementSet ms;
  for (const auto& e : root["entries"]) {
    auto num = [&](const char* key) -> double {
      if (!e.contains(key) || !e[key].is_number())
        throw SchemaError(origin + ": entry missing number '" + key + "'");
      return e[key].get<double>();
    };
    Measurement m;
    m.kind = parse_kind(e.value("kind", ""), origin);
    m.element = e.value("element", "");
    if (m.element.empty()) throw SchemaError(origin + ": entry missing 'element'");
    std::string ph = e.value("phase", "");
    if (ph.size() != 1 || ph[0] < 'A' || ph[0] > 'C')
      throw SchemaError(origin + ": bad phase '" + ph + "'");
    m.phase = static_cast<Phase>(ph[0] - 'A');
    switch (m.kind) {
      case MeasKind::PmuVoltage:
      case MeasKind::PmuCurrent:
        m.mag = num("mag");
        m.angle = num("angle");
        m.sigma_mag = num("sigma_mag");
        m.sigma_angle = num("sigma_angle");
        m.halfband_mag = num("halfband_mag");
        m.halfband_angle = num("halfband_angle");
        break;
      case MeasKind::DgBand: {
        auto band = [&](const char* key) {
          if (!e.contains(key) || !e[key].is_array() || e[key].size() != 2)
            throw SchemaError(origin + ": '" + std::string(key) +
                              "' must be [lo, hi]");
          return Interval(e[key][0].get<double>(), e[key][1].get<double>());
        };
        m.p_band = band("p_band");
        m.q_band = band("q_band");
        [[fallthrough]];
      }
      case MeasKind::ScadaFlow:
      case MeasKind::PseudoInjection:
        m.power = {num("p"), num("q")};
        m.sigma_p = num("sigma_p");
        m.sigma_q = num("sigma_q");
        m.halfband_p = num("halfband_p");
        m.halfband_q = num("halfband_q");
        break;
    }
    ms.entries.push_back(std::move(m));
  }
  std::sort(ms.entries.begin(), ms.entries.end(), entry_less);
  return ms;
}

}  // namespace ise
