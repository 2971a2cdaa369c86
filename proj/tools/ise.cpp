#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "ise/casework.hpp"
#include "ise/errors.hpp"

namespace {

using namespace ise;

// Parsed back from a dump_system file; only the interval data matters here.
struct DumpedSystem {
  std::size_t m1 = 0, m2 = 0, n = 0;
  IntervalMatrix A;
  IntervalVector B;
};

DumpedSystem load_dump(const std::filesystem::path& file) {
  std::ifstream is(file);
  if (!is) throw SchemaError("cannot open system dump " + file.string());
  std::string line;
  if (!std::getline(is, line))
    throw SchemaError("empty system dump " + file.string());
  DumpedSystem d;
  if (std::sscanf(line.c_str(), "ise-system m1 %zu m2 %zu n %zu", &d.m1, &d.m2,
                  &d.n) != 3)
    throw SchemaError(file.string() + ": bad dump header");
  std::size_t dim = d.m1 + d.m2 + d.n;
  d.A = IntervalMatrix(dim, dim);
  d.B = IntervalVector(dim);
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    std::size_t i = 0, j = 0;
    double lo = 0, hi = 0;
    switch (line[0]) {
      case 'A':
        if (std::sscanf(line.c_str(), "A %zu %zu %la %la", &i, &j, &lo, &hi) != 4)
          throw SchemaError(file.string() + ": bad A line '" + line + "'");
        d.A.set_entry(i, j, Interval(lo, hi));
        break;
      case 'B':
        if (std::sscanf(line.c_str(), "B %zu %la %la", &i, &lo, &hi) != 3)
          throw SchemaError(file.string() + ": bad B line '" + line + "'");
        d.B[i] = Interval(lo, hi);
        break;
      default:  // row descriptors and weights carry no interval data
        break;
    }
  }
  return d;
}

SolverReport dispatch_solver(const std::string& name, const IntervalMatrix& A,
                             const IntervalVector& B, const SolverOptions& opt) {
  if (name == "mko") return mko_solve(A, B, opt);
  if (name == "krawczyk") return krawczyk_solve(A, B, opt);
  if (name == "iko") return iko_solve(A, B, opt);
  if (name == "ige") {
    SolverReport r;
    r.method = "ige";
    r.solution = ige_solve(A, B);
    r.converged = true;
    return r;
  }
  throw SchemaError("unknown solver '" + name + "'");
}

void print_rows(const CaseResult& res, bool have_mc) {
  std::printf("%-10s %-12s %-12s %6s %6s %6s\n", "method", "q1_mag", "q2_mag",
              "iters", "truth", "mc");
  for (const auto& row : res.rows)
    std::printf("%-10s %-12.5g %-12.5g %6d %6s %6s\n", row.method.c_str(),
                row.q1_mag, row.q2_mag, row.iterations,
                row.contains_truth ? "in" : "OUT",
                have_mc ? (row.contains_mc ? "in" : "OUT") : "-");
}

int cmd_run(CaseConfig cfg) {
  CaseResult res = run_case(cfg);
  std::filesystem::path out =
      cfg.out_dir.empty() ? std::filesystem::path("out") / cfg.name : cfg.out_dir;
  write_reports(cfg, res, out);
  std::printf("case %s  model %s  seed %llu\n", cfg.name.c_str(),
              variant_name(cfg.model).c_str(),
              static_cast<unsigned long long>(cfg.seed));
  std::printf("system n=%zu m1=%zu m2=%zu dim=%zu\n", res.system.n,
              res.system.m1, res.system.m2, res.system.dim());
  for (const auto& rep : res.reports)
    std::printf("%s: beta=%.6g iterations=%d initial=%.3fs iterate=%.3fs\n",
                rep.method.c_str(), rep.beta, rep.iterations, rep.time_initial,
                rep.time_iterate);
  for (const auto& [method, reason] : res.failures)
    std::printf("%s: failed (%s)\n", method.c_str(), reason.c_str());
  if (res.mc)
    std::printf("mc: trials=%d failures=%d total=%.3fs\n", res.mc->trials,
                res.mc->failures, res.mc->total_seconds);
  print_rows(res, res.mc.has_value());
  std::printf("reports written to %s\n", out.string().c_str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"interval state bounds for unbalanced distribution feeders"};
  app.require_subcommand(1);

  std::string case_file, dump_file;
  std::string model, out;
  std::vector<std::string> solvers;
  std::uint64_t seed = 0;
  int trials = -1, threads = 0;
  double line_fraction = -1.0, eps = -1.0;
  bool dump_flag = false, balanced = false;
  std::size_t max_corners = std::size_t(1) << 20;
  std::string check_solver;

  CLI::App* run = app.add_subcommand("run", "run a case config end to end");
  run->add_option("case", case_file, "case config file")->required();
  run->add_option("--out", out, "output directory (default out/<name>)");
  run->add_option("--seed", seed, "override the config seed");
  run->add_option("--trials", trials, "override the Monte Carlo trial count");
  run->add_option("--solver", solvers, "override the solver list")
      ->delimiter(',');
  run->add_option("--model", model, "override the model variant (i..iv)");
  run->add_option("--line-uncertainty", line_fraction,
                  "override the line parameter fraction");
  run->add_option("--threads", threads, "override the Monte Carlo thread count");
  run->add_option("--eps", eps, "override the contraction stop width");
  run->add_flag("--dump-system", dump_flag, "also write the assembled system");

  CLI::App* audit = app.add_subcommand("audit", "report system dimensions");
  audit->add_option("case", case_file, "case config file")->required();
  audit->add_flag("--balanced", balanced,
                  "audit the single-phase reduction instead");

  CLI::App* oracle = app.add_subcommand(
      "oracle", "corner-enumeration hull of a dumped system");
  oracle->add_option("dump", dump_file, "system dump file")->required();
  oracle->add_option("--max-corners", max_corners,
                     "largest corner count to enumerate");
  oracle->add_option("--check", check_solver,
                     "also run this solver and verify it contains the hull");

  CLI::App* mc = app.add_subcommand("mc", "Monte Carlo envelope only");
  mc->add_option("case", case_file, "case config file")->required();
  mc->add_option("--out", out, "output directory (default out/<name>)");
  mc->add_option("--seed", seed, "override the config seed");
  mc->add_option("--trials", trials, "trial count (default 1000)");
  mc->add_option("--threads", threads, "thread count");

  CLI11_PARSE(app, argc, argv);

  try {
    if (run->parsed() || mc->parsed()) {
      CLI::App* sub = run->parsed() ? run : mc;
      CaseConfig cfg = load_case(case_file);
      if (sub->count("--seed")) cfg.seed = seed;
      if (sub->count("--trials")) cfg.trials = trials;
      if (sub->count("--threads")) cfg.threads = threads;
      if (sub->count("--out")) cfg.out_dir = out;
      if (run->parsed()) {
        if (run->count("--solver")) cfg.solvers = solvers;
        if (run->count("--model")) cfg.model = parse_variant(model);
        if (run->count("--line-uncertainty")) {
          if (!(line_fraction >= 0.0 && line_fraction < 0.5))
            throw SchemaError("--line-uncertainty must lie in [0, 0.5)");
          cfg.line_fraction = line_fraction;
        }
        if (run->count("--eps")) cfg.solver.eps = eps;
        if (dump_flag) cfg.dump_system_file = true;
      } else {
        cfg.solvers = {"mc"};
        if (cfg.trials < 1) cfg.trials = 1000;
      }
      return cmd_run(std::move(cfg));
    }

    if (audit->parsed()) {
      CaseConfig cfg = load_case(case_file);
      Feeder f = load_feeder(cfg.feeder_file);
      if (balanced) {
        DimensionReport d = audit_dimensions(balanced_equivalent(f), cfg.placements);
        std::printf("balanced single-phase reduction of %s: n=%zu m1=%zu m2=%zu m+n=%zu\n",
                    f.name.c_str(), d.n, d.m1, d.m2, d.total());
      } else {
        std::fputs(dimension_text(f, cfg.placements).c_str(), stdout);
      }
      return 0;
    }

    if (oracle->parsed()) {
      DumpedSystem d = load_dump(dump_file);
      IntervalVector hull = hull_oracle(d.A, d.B, max_corners);
      for (std::size_t i = 0; i < hull.size(); ++i)
        std::printf("%zu %.17g %.17g\n", i, hull[i].lo(), hull[i].hi());
      if (!check_solver.empty()) {
        SolverReport rep = dispatch_solver(check_solver, d.A, d.B, SolverOptions{});
        bool ok = rep.solution.contains(hull);
        std::printf("%s %s the corner hull\n", rep.method.c_str(),
                    ok ? "contains" : "MISSES");
        return ok ? 0 : 1;
      }
      return 0;
    }
  } catch (const Error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}
