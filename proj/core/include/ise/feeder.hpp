#pragma once

#include <array>
#include <cstddef>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "ise/interval.hpp"

namespace ise {

inline constexpr std::size_t npos = static_cast<std::size_t>(-1);

enum class Phase : int { A = 0, B = 1, C = 2 };

inline char phase_letter(Phase p) { return "ABC"[static_cast<int>(p)]; }

struct PhaseMask {
  unsigned bits = 0;

  bool has(Phase p) const { return bits & (1u << static_cast<int>(p)); }
  void add(Phase p) { bits |= (1u << static_cast<int>(p)); }
  int count() const;
  bool empty() const { return bits == 0; }
  bool subset_of(PhaseMask o) const { return (bits & ~o.bits) == 0; }
  std::vector<Phase> list() const;  // ascending A, B, C
  static PhaseMask parse(const std::string& s);
  std::string str() const;
  bool operator==(const PhaseMask&) const = default;
};

struct PQ {
  double p = 0.0;
  double q = 0.0;
};

struct Bus {
  std::string id;
  PhaseMask phases;
  std::array<PQ, 3> load{};  // per phase, per-unit, consumption positive
};

// Series element between two buses. Impedance entries are per-unit intervals
// over the present phases; absent rows/columns stay zero. Nominal documents
// load as thin intervals.
struct Branch {
  std::string id;
  std::string from;  // parent side after orientation
  std::string to;
  PhaseMask phases;
  std::array<std::array<Interval, 3>, 3> r{};
  std::array<std::array<Interval, 3>, 3> x{};
};

enum class DgKind { Pv, Wtg };

struct DgUnit {
  std::string id;
  std::string bus;
  PhaseMask phases;
  DgKind kind = DgKind::Pv;
  Interval p_kw;  // active power band for the whole unit, kW
  double pf = 1.0;
  bool lagging = true;
  bool metered = false;
};

struct Feeder {
  std::string name;
  double base_kv = 0.0;  // line-to-line
  double base_mva = 0.0;
  std::string slack;
  double v_slack_pu = 1.0;
  std::vector<Bus> buses;
  std::vector<Branch> branches;  // oriented parent -> child, document order
  std::vector<DgUnit> dg;
  std::vector<std::string> notes;

  std::size_t bus_index(const std::string& id) const;
  std::size_t branch_index(const std::string& id) const;
  const Bus& bus(const std::string& id) const { return buses[bus_index(id)]; }
  const Branch& branch(const std::string& id) const {
    return branches[branch_index(id)];
  }
  std::size_t slack_index() const { return bus_index(slack); }

  // Index of the branch feeding the bus; npos for the slack.
  std::size_t parent_branch(std::size_t bus_idx) const;
  std::vector<std::size_t> child_branches(std::size_t bus_idx) const;
  // Branch indices from the slack down to the bus (empty for the slack).
  std::vector<std::size_t> path_to_slack(const std::string& bus_id) const;

  double z_base_ohm() const { return base_kv * base_kv / base_mva; }
  double s_base_kva() const { return base_mva * 1000.0; }

  void rebuild_topology();  // orients branches, computes parents; validates

 private:
  std::map<std::string, std::size_t> bus_lookup_;
  std::map<std::string, std::size_t> branch_lookup_;
  std::vector<std::size_t> parent_;  // per bus: feeding branch index
};

Feeder load_feeder(const std::filesystem::path& file);
Feeder parse_feeder(const std::string& json_text, const std::string& origin);

// Widens every nonzero impedance entry e to the span of (1-f)e and (1+f)e.
Feeder apply_line_uncertainty(const Feeder& f, double fraction);

// Single-phase positive-sequence reduction: every bus and branch collapses
// to phase A, loads and DG bands sum across phases, impedances average the
// present diagonal entries. Used for dimension comparisons.
Feeder balanced_equivalent(const Feeder& f);

// Per-phase injection intervals of one DG unit, per-unit, injection
// positive. The unit's band is split equally across its phases; lagging
// units inject reactive power along with active, leading units absorb it.
struct DgPhasePower {
  Interval p;
  Interval q;
};
DgPhasePower dg_phase_power(const DgUnit& dg, double base_mva);

}  // namespace ise
