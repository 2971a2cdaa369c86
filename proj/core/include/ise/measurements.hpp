#pragma once

#include <string>
#include <utility>
#include <vector>

#include "ise/feeder.hpp"
#include "ise/interval_linalg.hpp"
#include "ise/power_flow.hpp"
#include "ise/rng.hpp"

namespace ise {

// Kinds are listed in stacking order of the measurement vector.
enum class MeasKind {
  PmuVoltage,      // bus voltage phasor, polar noise
  PmuCurrent,      // branch current phasor, polar noise
  ScadaFlow,       // sending-end branch power per phase
  PseudoInjection, // net consumption power at a bus phase
  DgBand,          // injection band at a bus phase hosting unmetered DG
};

std::string meas_kind_name(MeasKind k);

struct Measurement {
  MeasKind kind{};
  std::string element;  // bus id or branch id
  Phase phase{};

  // Polar channels (PmuVoltage, PmuCurrent).
  double mag = 0.0, angle = 0.0;
  double sigma_mag = 0.0, sigma_angle = 0.0;
  double halfband_mag = 0.0, halfband_angle = 0.0;

  // Power channels (ScadaFlow, PseudoInjection, DgBand point value).
  PQ power;
  double sigma_p = 0.0, sigma_q = 0.0;
  double halfband_p = 0.0, halfband_q = 0.0;

  // DgBand only: net consumption band including the DG output band.
  Interval p_band, q_band;
};

struct MeasurementSet {
  std::vector<Measurement> entries;  // sorted by kind, element, phase
};

struct Placements {
  std::vector<std::string> pmu_voltage;  // bus ids
  std::vector<std::string> pmu_current;  // branch ids
  std::vector<std::string> scada_flow;   // branch ids
  // Injection rows cover every non-slack bus when true; otherwise only the
  // listed buses. Buses hosting unmetered DG always get band rows.
  bool pseudo_everywhere = true;
  std::vector<std::string> pseudo_injection;
};

// Maximum relative errors; the 3-sigma band equals the maximum error.
struct ErrorSpec {
  double pmu_mag_pct = 0.7;
  double pmu_angle_crad = 0.7;  // hundredths of a radian, absolute
  double scada_pct = 2.0;
  double pseudo_pct = 10.0;
  // Half-band floor for power channels, per-unit; keeps zero-injection rows
  // usable as near-exact constraints.
  double min_halfband_pu = 1e-4;
  // Truncate noise so measured-value bands are guaranteed to contain truth.
  bool truncated = false;
  bool zero_noise = false;
};

// Draws one measurement document. Every channel consumes an independent
// stream keyed by (kind, element, phase, component), so values are
// reproducible bit for bit regardless of placement order.
MeasurementSet synthesize_measurements(const Feeder& f, const TrueState& ts,
                                       const Placements& pl, const ErrorSpec& es,
                                       const StreamRng& rng);

std::string save_measurements(const MeasurementSet& ms);
MeasurementSet load_measurements(const std::string& json_text,
                                 const std::string& origin);

// conj((P + jQ) / v): equivalent current of a power pair at a reference
// phasor, componentwise outward rounded.
std::pair<Interval, Interval> power_to_equivalent_current(const Interval& p,
                                                          const Interval& q,
                                                          cd v_ref);
std::pair<double, double> power_to_equivalent_current(double p, double q, cd v_ref);

struct RowSpec {
  MeasKind kind{};
  std::string element;
  Phase phase{};
  bool imag = false;  // imaginary-part row of the pair
};

struct MeasurementVector {
  IntervalVector z;
  std::vector<RowSpec> rows;
};

// Weighted block: PMU rows in rectangular coordinates, power rows as
// equivalent currents referenced to the slack phasor. Rows come in
// (real, imaginary) pairs per entry.
MeasurementVector build_z1(const Feeder& f, const MeasurementSet& ms);

// Band block from unmetered DG buses, same conversion.
MeasurementVector build_z2(const Feeder& f, const MeasurementSet& ms);

// Diagonal weights for the z1 block, 1/sigma^2 per row.
Vec build_weights(const Feeder& f, const MeasurementSet& ms);

}  // namespace ise
