#include "ise/feeder.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "ise/errors.hpp"

namespace ise {

using nlohmann::json;

int PhaseMask::count() const {
  int n = 0;
  for (int p = 0; p < 3; ++p)
    if (bits & (1u << p)) ++n;
  return n;
}

std::vector<Phase> PhaseMask::list() const {
  std::vector<Phase> r;
  for (int p = 0; p < 3; ++p)
    if (bits & (1u << p)) r.push_back(static_cast<Phase>(p));
  return r;
}

PhaseMask PhaseMask::parse(const std::string& s) {
  PhaseMask m;
  for (char c : s) {
    switch (c) {
      case 'A': case 'a': m.add(Phase::A); break;
      case 'B': case 'b': m.add(Phase::B); break;
      case 'C': case 'c': m.add(Phase::C); break;
      default:
        throw SchemaError("phase string '" + s + "': unknown phase '" +
                          std::string(1, c) + "'");
    }
  }
  if (m.empty()) throw SchemaError("phase string '" + s + "': empty");
  return m;
}

std::string PhaseMask::str() const {
  std::string s;
  for (Phase p : list()) s += phase_letter(p);
  return s;
}

std::size_t Feeder::bus_index(const std::string& id) const {
  auto it = bus_lookup_.find(id);
  if (it == bus_lookup_.end())
    throw SchemaError("feeder '" + name + "': unknown bus '" + id + "'");
  return it->second;
}

std::size_t Feeder::branch_index(const std::string& id) const {
  auto it = branch_lookup_.find(id);
  if (it == branch_lookup_.end())
    throw SchemaError("feeder '" + name + "': unknown branch '" + id + "'");
  return it->second;
}

std::size_t Feeder::parent_branch(std::size_t bus_idx) const {
  return parent_.at(bus_idx);
}

std::vector<std::size_t> Feeder::child_branches(std::size_t bus_idx) const {
  std::vector<std::size_t> r;
  const std::string& id = buses[bus_idx].id;
  for (std::size_t b = 0; b < branches.size(); ++b)
    if (branches[b].from == id) r.push_back(b);
  return r;
}

std::vector<std::size_t> Feeder::path_to_slack(const std::string& bus_id) const {
  std::vector<std::size_t> path;
  std::size_t k = bus_index(bus_id);
  while (parent_[k] != npos) {
    path.push_back(parent_[k]);
    k = bus_index(branches[parent_[k]].from);
  }
  std::reverse(path.begin(), path.end());
  return path;
}

void Feeder::rebuild_topology() {
  const std::string where = "feeder '" + name + "'";
  if (base_kv <= 0.0 || base_mva <= 0.0)
    throw SchemaError(where + ": base_kV and base_MVA must be positive");
  if (v_slack_pu < 0.5 || v_slack_pu > 1.5)
    throw SchemaError(where + ": v_slack_pu outside [0.5, 1.5]");

  bus_lookup_.clear();
  branch_lookup_.clear();
  for (std::size_t i = 0; i < buses.size(); ++i) {
    if (!bus_lookup_.emplace(buses[i].id, i).second)
      throw SchemaError(where + ": duplicate bus id '" + buses[i].id + "'");
    if (buses[i].phases.empty())
      throw SchemaError(where + ": bus '" + buses[i].id + "' has no phases");
  }
  for (std::size_t b = 0; b < branches.size(); ++b) {
    if (!branch_lookup_.emplace(branches[b].id, b).second)
      throw SchemaError(where + ": duplicate branch id '" + branches[b].id + "'");
  }
  if (!bus_lookup_.count(slack))
    throw SchemaError(where + ": slack bus '" + slack + "' not in bus list");
  if (branches.size() + 1 != buses.size())
    throw SchemaError(where + ": radial feeder needs exactly buses-1 branches (" +
                      std::to_string(branches.size()) + " branches, " +
                      std::to_string(buses.size()) + " buses)");

  // Orient every branch away from the slack.
  std::map<std::string, std::vector<std::size_t>> adjacency;
  for (std::size_t b = 0; b < branches.size(); ++b) {
    if (!bus_lookup_.count(branches[b].from) || !bus_lookup_.count(branches[b].to))
      throw SchemaError(where + ": branch '" + branches[b].id +
                        "' references an unknown bus");
    adjacency[branches[b].from].push_back(b);
    adjacency[branches[b].to].push_back(b);
  }
  parent_.assign(buses.size(), npos);
  std::vector<char> bus_seen(buses.size(), 0);
  std::vector<char> branch_seen(branches.size(), 0);
  std::deque<std::string> queue{slack};
  bus_seen[bus_lookup_[slack]] = 1;
  std::size_t visited = 1;
  while (!queue.empty()) {
    std::string cur = queue.front();
    queue.pop_front();
    for (std::size_t b : adjacency[cur]) {
      if (branch_seen[b]) continue;
      branch_seen[b] = 1;
      Branch& br = branches[b];
      if (br.to == cur) std::swap(br.from, br.to);
      std::size_t child = bus_lookup_[br.to];
      if (bus_seen[child])
        throw SchemaError(where + ": branch '" + br.id + "' closes a loop");
      bus_seen[child] = 1;
      parent_[child] = b;
      ++visited;
      queue.push_back(br.to);
    }
  }
  if (visited != buses.size())
    throw SchemaError(where + ": feeder is not connected (" +
                      std::to_string(visited) + " of " +
                      std::to_string(buses.size()) + " buses reachable)");

  // Phase consistency: a branch carries a subset of its parent bus's phases
  // and exactly the phases of the bus it energizes.
  for (std::size_t b = 0; b < branches.size(); ++b) {
    const Branch& br = branches[b];
    if (br.phases.empty())
      throw SchemaError(where + ": branch '" + br.id + "' has no phases");
    const Bus& from = buses[bus_lookup_[br.from]];
    const Bus& to = buses[bus_lookup_[br.to]];
    if (!br.phases.subset_of(from.phases))
      throw SchemaError(where + ": branch '" + br.id + "' phases " +
                        br.phases.str() + " not a subset of bus '" + from.id +
                        "' phases " + from.phases.str());
    if (!(to.phases == br.phases))
      throw SchemaError(where + ": bus '" + to.id + "' phases " +
                        to.phases.str() + " differ from feeding branch '" +
                        br.id + "' phases " + br.phases.str());
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) {
        bool present = br.phases.has(static_cast<Phase>(i)) &&
                       br.phases.has(static_cast<Phase>(j));
        bool zero = br.r[i][j] == Interval() && br.x[i][j] == Interval();
        if (!present && !zero)
          throw SchemaError(where + ": branch '" + br.id +
                            "' has impedance outside its phase set");
        if (present && i == j && zero)
          throw SchemaError(where + ": branch '" + br.id +
                            "' has zero self impedance on phase " +
                            std::string(1, phase_letter(static_cast<Phase>(i))));
      }
  }
  for (const Bus& bus : buses)
    for (int p = 0; p < 3; ++p)
      if (!bus.phases.has(static_cast<Phase>(p)) &&
          (bus.load[p].p != 0.0 || bus.load[p].q != 0.0))
        throw SchemaError(where + ": bus '" + bus.id + "' has load on absent phase " +
                          std::string(1, phase_letter(static_cast<Phase>(p))));
  std::set<std::string> dg_ids;
  for (const DgUnit& d : dg) {
    if (!dg_ids.insert(d.id).second)
      throw SchemaError(where + ": duplicate dg id '" + d.id + "'");
    if (!bus_lookup_.count(d.bus))
      throw SchemaError(where + ": dg '" + d.id + "' at unknown bus '" + d.bus + "'");
    if (!d.phases.subset_of(buses[bus_lookup_[d.bus]].phases))
      throw SchemaError(where + ": dg '" + d.id + "' phases not present at bus '" +
                        d.bus + "'");
    if (d.pf <= 0.0 || d.pf > 1.0)
      throw SchemaError(where + ": dg '" + d.id + "' power factor outside (0, 1]");
    if (d.p_kw.lo() < 0.0)
      throw SchemaError(where + ": dg '" + d.id + "' has negative output band");
  }
}

namespace {

const json& need(const json& j, const char* field, const std::string& where) {
  auto it = j.find(field);
  if (it == j.end())
    throw SchemaError(where + ": missing field '" + field + "'");
  return *it;
}

double need_num(const json& j, const char* field, const std::string& where) {
  const json& v = need(j, field, where);
  if (!v.is_number())
    throw SchemaError(where + ": field '" + field + "' must be a number");
  return v.get<double>();
}

std::string need_str(const json& j, const char* field, const std::string& where) {
  const json& v = need(j, field, where);
  if (!v.is_string())
    throw SchemaError(where + ": field '" + field + "' must be a string");
  return v.get<std::string>();
}

std::array<std::array<Interval, 3>, 3> parse_matrix(const json& j,
                                                    const std::string& where,
                                                    double scale) {
  if (!j.is_array() || j.size() != 3)
    throw SchemaError(where + ": expected a 3x3 array");
  std::array<std::array<Interval, 3>, 3> m{};
  for (int i = 0; i < 3; ++i) {
    const json& row = j[i];
    if (!row.is_array() || row.size() != 3)
      throw SchemaError(where + ": expected a 3x3 array");
    for (int k = 0; k < 3; ++k) {
      if (!row[k].is_number())
        throw SchemaError(where + ": matrix entries must be numbers");
      m[i][k] = Interval(row[k].get<double>() * scale);
    }
  }
  return m;
}

}  // namespace

Feeder parse_feeder(const std::string& json_text, const std::string& origin) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw SchemaError(origin + ": " + e.what());
  }
  Feeder f;
  f.name = doc.value("name", origin);
  const std::string where = origin;
  f.base_kv = need_num(doc, "base_kV", where);
  f.base_mva = need_num(doc, "base_MVA", where);
  f.slack = need_str(doc, "slack", where);
  f.v_slack_pu = doc.value("v_slack_pu", 1.0);
  if (doc.contains("notes")) {
    for (const auto& n : doc["notes"]) f.notes.push_back(n.get<std::string>());
  }

  double s_base_kw = f.base_mva * 1000.0;
  for (const auto& jb : need(doc, "buses", where)) {
    const std::string bwhere = where + ", bus '" + jb.value("id", "?") + "'";
    Bus b;
    b.id = need_str(jb, "id", bwhere);
    b.phases = PhaseMask::parse(need_str(jb, "phases", bwhere));
    if (jb.contains("load")) {
      for (auto& [key, val] : jb["load"].items()) {
        PhaseMask pm = PhaseMask::parse(key);
        if (pm.count() != 1)
          throw SchemaError(bwhere + ": load keys must name a single phase");
        if (!val.is_array() || val.size() != 2)
          throw SchemaError(bwhere + ": load values must be [kW, kvar]");
        int p = static_cast<int>(pm.list()[0]);
        b.load[p].p = val[0].get<double>() / s_base_kw;
        b.load[p].q = val[1].get<double>() / s_base_kw;
      }
    }
    f.buses.push_back(std::move(b));
  }

  double z_base = f.z_base_ohm();
  for (const auto& jb : need(doc, "branches", where)) {
    const std::string bwhere = where + ", branch '" + jb.value("id", "?") + "'";
    Branch br;
    br.id = need_str(jb, "id", bwhere);
    br.from = need_str(jb, "from", bwhere);
    br.to = need_str(jb, "to", bwhere);
    br.phases = PhaseMask::parse(need_str(jb, "phases", bwhere));
    std::string unit = jb.value("unit", "pu");
    double scale;
    if (unit == "ohm")
      scale = 1.0 / z_base;
    else if (unit == "pu")
      scale = 1.0;
    else
      throw SchemaError(bwhere + ": unit must be 'ohm' or 'pu'");
    br.r = parse_matrix(need(jb, "r", bwhere), bwhere + " r", scale);
    br.x = parse_matrix(need(jb, "x", bwhere), bwhere + " x", scale);
    f.branches.push_back(std::move(br));
  }

  if (doc.contains("dg")) {
    for (const auto& jd : doc["dg"]) {
      const std::string dwhere = where + ", dg '" + jd.value("id", "?") + "'";
      DgUnit d;
      d.id = need_str(jd, "id", dwhere);
      d.bus = need_str(jd, "bus", dwhere);
      d.phases = PhaseMask::parse(need_str(jd, "phases", dwhere));
      std::string kind = need_str(jd, "kind", dwhere);
      if (kind == "pv")
        d.kind = DgKind::Pv;
      else if (kind == "wtg")
        d.kind = DgKind::Wtg;
      else
        throw SchemaError(dwhere + ": kind must be 'pv' or 'wtg'");
      const json& p = need(jd, "P_kW", dwhere);
      if (!p.is_array() || p.size() != 2)
        throw SchemaError(dwhere + ": P_kW must be [lo, hi]");
      double plo = p[0].get<double>(), phi = p[1].get<double>();
      if (plo > phi)
        throw SchemaError(dwhere + ": P_kW lower bound exceeds upper bound");
      d.p_kw = Interval(plo, phi);
      d.pf = need_num(jd, "pf", dwhere);
      d.lagging = jd.value("lagging", true);
      d.metered = jd.value("metered", false);
      f.dg.push_back(std::move(d));
    }
  }

  f.rebuild_topology();
  return f;
}

Feeder load_feeder(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in)
    throw SchemaError("cannot open feeder document '" + file.string() + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_feeder(ss.str(), file.filename().string());
}

Feeder apply_line_uncertainty(const Feeder& f, double fraction) {
  if (fraction < 0.0 || fraction >= 1.0)
    throw std::invalid_argument("apply_line_uncertainty: fraction outside [0, 1)");
  Feeder g = f;
  if (fraction == 0.0) return g;
  using rounding::mul_down;
  using rounding::mul_up;
  auto widen = [&](Interval& e) {
    if (e == Interval()) return;
    double c1 = mul_down(1.0 - fraction, e.lo());
    double c2 = mul_down(1.0 + fraction, e.lo());
    double c3 = mul_up(1.0 - fraction, e.hi());
    double c4 = mul_up(1.0 + fraction, e.hi());
    e = Interval(std::min(c1, c2), std::max(c3, c4));
  };
  for (Branch& br : g.branches)
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) {
        widen(br.r[i][j]);
        widen(br.x[i][j]);
      }
  g.rebuild_topology();
  return g;
}

Feeder balanced_equivalent(const Feeder& f) {
  Feeder g = f;
  PhaseMask only_a;
  only_a.add(Phase::A);
  for (Bus& b : g.buses) {
    PQ total;
    for (int p = 0; p < 3; ++p) {
      total.p += b.load[p].p;
      total.q += b.load[p].q;
    }
    b.phases = only_a;
    b.load = {};
    b.load[0] = total;
  }
  for (Branch& br : g.branches) {
    Interval r_sum(0.0), x_sum(0.0);
    int cnt = 0;
    for (Phase p : br.phases.list()) {
      int i = static_cast<int>(p);
      r_sum += br.r[i][i];
      x_sum += br.x[i][i];
      ++cnt;
    }
    Interval inv(1.0 / cnt);
    br.phases = only_a;
    br.r = {};
    br.x = {};
    br.r[0][0] = r_sum * inv;
    br.x[0][0] = x_sum * inv;
  }
  for (DgUnit& dg : g.dg) dg.phases = only_a;
  g.rebuild_topology();
  return g;
}

DgPhasePower dg_phase_power(const DgUnit& dg, double base_mva) {
  int n = dg.phases.count();
  if (n == 0) throw std::invalid_argument("dg_phase_power: unit has no phases");
  double scale = 1.0 / (base_mva * 1000.0 * n);
  DgPhasePower r;
  r.p = dg.p_kw * Interval(scale);
  double t = std::tan(std::acos(dg.pf));
  Interval q = r.p * Interval(t);
  r.q = dg.lagging ? q : -q;
  return r;
}

}  // namespace ise
