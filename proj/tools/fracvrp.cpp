#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <map>
#include <mutex>
#include <random>
#include <set>
#include <sstream>
#include <thread>

#include "fracvrp/bounds.hpp"
#include "fracvrp/error.hpp"
#include "fracvrp/exact.hpp"
#include "fracvrp/genr.hpp"
#include "fracvrp/oracle.hpp"

namespace fs = std::filesystem;
using json = nlohmann::json;
using namespace fracvrp;

namespace {

struct Config {
  std::vector<std::string> inputs;
  std::string cls = "CA";
  std::vector<double> alpha;
  int delta_ng = 12;
  long long delta_max = 300'000;
  double tlim = 3600;
  int itermax = 3;
  double gapmax = std::numeric_limits<double>::infinity();
  long long nstatb = 200'000'000;
  std::uint64_t seed = 42;
  std::string format = "text";
  std::string out;
  std::string procedures = "cb,da,cg,dk";
  bool exact_reference = false;
  bool no_timing = false;
  int trials = 100;
  int n_max = 7;
  bool self_test = false;
};

int worker_count(std::size_t jobs) {
  unsigned hw = std::max(1U, std::thread::hardware_concurrency());
  if (const char* env = std::getenv("FRACVRP_THREADS")) {
    int v = std::atoi(env);
    if (v > 0) hw = std::min<unsigned>(hw, static_cast<unsigned>(v));
  }
  return static_cast<int>(std::max<std::size_t>(1, std::min<std::size_t>(hw, jobs)));
}

// Runs fn(i) for every job; results are gathered by index so output order never depends on scheduling.
template <class Fn>
void run_jobs(std::size_t jobs, Fn fn) {
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t i; (i = next++) < jobs;) fn(i);
  };
  const int n = worker_count(jobs);
  std::vector<std::thread> pool;
  for (int k = 1; k < n; ++k) pool.emplace_back(work);
  work();
  for (auto& t : pool) t.join();
}

std::string alpha_suffix(double alpha) {
  if (alpha == 0.5) return "a";
  if (alpha == 0.75) return "b";
  std::ostringstream s;
  s << "_alpha" << alpha;
  return s.str();
}

Instance make_class(const CvrpInstance& cv, const std::string& cls, double alpha) {
  Instance inst = cls == "PA" ? make_class_pa(cv, alpha) : make_class_ca(cv, alpha);
  inst.name = cv.name + alpha_suffix(alpha);
  return inst;
}

std::vector<fs::path> expand(const std::vector<std::string>& inputs, const std::set<std::string>& exts) {
  std::vector<fs::path> out;
  for (const auto& in : inputs) {
    fs::path p(in);
    if (fs::is_directory(p)) {
      std::vector<fs::path> found;
      for (const auto& e : fs::directory_iterator(p))
        if (e.is_regular_file() && exts.count(e.path().extension().string())) found.push_back(e.path());
      std::sort(found.begin(), found.end());
      if (found.empty()) std::cerr << "warning: no instances in " << p << '\n';
      out.insert(out.end(), found.begin(), found.end());
    } else {
      out.push_back(p);
    }
  }
  return out;
}

// A .vrp file yields one instance per alpha; anything else is read as a VRPFO file.
std::vector<Instance> load_instances(const Config& cfg) {
  std::vector<Instance> out;
  for (const fs::path& p : expand(cfg.inputs, {".vrp", ".vrpfo"})) {
    if (p.extension() == ".vrp") {
      CvrpInstance cv = load_tsplib(p);
      std::vector<double> alphas = cfg.alpha.empty() ? std::vector<double>{0.5} : cfg.alpha;
      for (double a : alphas) out.push_back(make_class(cv, cfg.cls, a));
    } else {
      out.push_back(load_vrpfo(p));
    }
  }
  return out;
}

ExactParams exact_params(const Config& cfg) {
  ExactParams p;
  p.delta_ng = cfg.delta_ng;
  p.delta_max = cfg.delta_max;
  p.tlim = cfg.tlim;
  p.itermax = cfg.itermax;
  p.gapmax = cfg.gapmax;
  p.nstatb = cfg.nstatb;
  return p;
}

std::ostream& output(const Config& cfg, std::ofstream& file) {
  if (cfg.out.empty()) return std::cout;
  file.open(cfg.out);
  if (!file) throw std::runtime_error("cannot write " + cfg.out);
  return file;
}

int cmd_generate(const Config& cfg) {
  const auto files = expand(cfg.inputs, {".vrp"});
  if (files.empty()) return 0;
  const fs::path dir = cfg.out.empty() ? fs::path(".") : fs::path(cfg.out);
  fs::create_directories(dir);
  std::vector<double> alphas = cfg.alpha.empty() ? std::vector<double>{0.5, 0.75} : cfg.alpha;
  std::vector<std::string> log(files.size());
  run_jobs(files.size(), [&](std::size_t i) {
    CvrpInstance cv = load_tsplib(files[i]);
    for (double a : alphas) {
      Instance inst = make_class(cv, cfg.cls, a);
      fs::path target = dir / (inst.name + ".vrpfo");
      std::ofstream f(target);
      write_vrpfo(f, inst);
      log[i] += target.string() + '\n';
    }
  });
  for (const auto& l : log) std::cout << l;
  return 0;
}

int cmd_bounds(const Config& cfg) {
  std::vector<Instance> insts = load_instances(cfg);
  std::set<std::string> want;
  {
    std::stringstream ss(cfg.procedures);
    for (std::string p; std::getline(ss, p, ',');) want.insert(p);
  }
  struct Row {
    std::vector<BoundReport> reports;
    double reference = 0;
    std::string error;
  };
  std::vector<Row> rows(insts.size());
  run_jobs(insts.size(), [&](std::size_t i) {
    try {
      const Instance& inst = insts[i];
      BoundContext ctx = make_bound_context(inst, cfg.delta_ng);
      Row& row = rows[i];
      auto keep = [&](std::string name, auto fn) {
        if (want.count(name)) row.reports.push_back(fn());
      };
      keep("cb", [&] { return run_cb(ctx); });
      keep("da", [&] { return run_da(ctx); });
      keep("cg", [&] { return run_cg(ctx); });
      keep("dk", [&] { return run_dk(ctx); });
      row.reference = ctx.incumbent ? ctx.incumbent->value.value() : kInf;
      if (cfg.exact_reference) row.reference = solve_exact(inst, exact_params(cfg)).best.value.value();
    } catch (const std::exception& e) {
      rows[i].error = e.what();
    }
  });
  for (std::size_t i = 0; i < insts.size(); ++i)
    if (!rows[i].error.empty()) std::cerr << insts[i].name << ": " << rows[i].error << '\n';
  if (cfg.no_timing)
    for (auto& r : rows)
      for (auto& b : r.reports) b.elapsed = 0;

  std::ofstream file;
  std::ostream& out = output(cfg, file);
  if (cfg.format == "json") {
    json j = json::array();
    for (std::size_t i = 0; i < insts.size(); ++i) {
      json e{{"name", insts[i].name}};
      if (!rows[i].error.empty()) e["error"] = rows[i].error;
      for (const auto& r : rows[i].reports) {
        e[r.procedure] = {{"dual_bound", r.dual_bound},
                          {"%B", 100 * r.dual_bound / rows[i].reference},
                          {"columns", r.columns},
                          {"iterations", r.iterations},
                          {"time", r.elapsed}};
        if (r.primal) e[r.procedure]["%PB"] = 100 * r.primal->value.value() / rows[i].reference;
      }
      j.push_back(e);
    }
    out << j.dump(2) << '\n';
  } else {
    write_bound_csv_header(out);
    std::map<std::string, std::vector<double>> sum;
    std::map<std::string, int> count;
    std::vector<std::string> order;
    for (std::size_t i = 0; i < insts.size(); ++i) {
      if (!rows[i].error.empty()) continue;
      write_bound_csv(out, insts[i].name, rows[i].reports, rows[i].reference);
      for (const auto& r : rows[i].reports) {
        auto& s = sum[r.procedure];
        if (s.empty()) {
          s.assign(5, 0.0);
          order.push_back(r.procedure);
        }
        s[0] += 100 * r.dual_bound / rows[i].reference;
        s[1] += r.primal ? 100 * r.primal->value.value() / rows[i].reference : 0;
        s[2] += r.columns;
        s[3] += r.iterations;
        s[4] += r.elapsed;
        ++count[r.procedure];
      }
    }
    for (const auto& p : order) {
      const auto& s = sum[p];
      const double n = count[p];
      out << "mean," << p << ',' << std::fixed << std::setprecision(1) << s[0] / n << ',' << s[1] / n << ','
          << s[2] / n << ',' << s[3] / n << ',' << std::setprecision(2) << s[4] / n << '\n';
      out.unsetf(std::ios::floatfield);
    }
  }
  for (const auto& r : rows)
    if (!r.error.empty()) return 1;
  return 0;
}

int cmd_solve(const Config& cfg) {
  std::vector<Instance> insts = load_instances(cfg);
  if (insts.empty()) throw InvalidInput("no instance given");
  std::vector<ExactResult> res(insts.size());
  std::vector<std::string> err(insts.size());
  run_jobs(insts.size(), [&](std::size_t i) {
    try {
      res[i] = solve_exact(insts[i], exact_params(cfg));
    } catch (const std::exception& e) {
      err[i] = e.what();
    }
  });
  std::ofstream file;
  std::ostream& out = output(cfg, file);
  int code = 0;
  json all = json::array();
  for (std::size_t i = 0; i < insts.size(); ++i) {
    const Instance& inst = insts[i];
    if (!err[i].empty()) {
      std::cerr << inst.name << ": " << err[i] << '\n';
      code = 1;
      continue;
    }
    ExactResult& r = res[i];
    if (cfg.no_timing) {
      r.elapsed = 0;
      for (auto& it : r.trace) it.elapsed = 0;
    }
    if (code == 0 && r.status != ExactStatus::Optimal) code = 2;
    const Ratio value = reported_ratio(inst, r.best.value);
    if (cfg.format == "json") {
      json routes = json::array();
      for (const Route& rt : r.best.routes)
        routes.push_back({{"customers", rt.customers()}, {"cost", rt.cost}, {"working_time", rt.working_time}});
      json trace = json::array();
      for (const auto& it : r.trace)
        trace.push_back({{"routes", it.routes},
                         {"value", reported_ratio(inst, it.value).str()},
                         {"dinkelbach_iterations", it.dinkelbach_iterations},
                         {"db_new", std::isfinite(it.db_new) ? json(it.db_new) : json(nullptr)},
                         {"reduced_optimal", it.reduced_optimal},
                         {"fp_optimal", it.fp_optimal},
                         {"time", it.elapsed}});
      all.push_back({{"name", inst.name},
                     {"status", to_string(r.status)},
                     {"value", value.str()},
                     {"ratio", value.value()},
                     {"dual_bound", inst.kind == ObjectiveKind::ProfitOverTime ? -r.dual_bound : r.dual_bound},
                     {"m_min", r.m_min},
                     {"m_max", r.m_max},
                     {"routes", routes},
                     {"trace", trace},
                     {"time", r.elapsed}});
    } else if (cfg.format == "csv") {
      write_trace_csv(out, inst.name, r);
    } else {
      out << "NAME " << inst.name << '\n';
      out << "STATUS " << to_string(r.status) << '\n';
      write_solution(out, inst, r.best);
      out << "RATIO " << std::setprecision(6) << std::fixed << value.value() << '\n';
      out << "ROUTES " << r.best.routes.size() << '\n';
      out.unsetf(std::ios::floatfield);
      out << std::setprecision(6);
      if (!cfg.no_timing) out << "TIME " << r.elapsed << '\n';
    }
  }
  if (cfg.format == "json") out << all.dump(2) << '\n';
  return code;
}

int cmd_oracle_check(const Config& cfg) {
  std::vector<ObjectiveKind> kinds;
  if (cfg.cls != "PA") kinds.push_back(ObjectiveKind::CostOverLoad);
  if (cfg.cls != "CA") kinds.push_back(ObjectiveKind::ProfitOverTime);
  std::ofstream file;
  std::ostream& out = output(cfg, file);
  int failures = 0;
  for (ObjectiveKind kind : kinds) {
    std::mt19937_64 rng(cfg.seed);
    int pass = 0;
    for (int k = 0; k < cfg.trials; ++k) {
      Instance inst = random_instance(rng, {kind, cfg.n_max, 30});
      inst.name = std::string("trial") + std::to_string(k);
      BruteForceResult bf = brute_force(inst);
      std::string why;
      try {
        ExactParams p = exact_params(cfg);
        p.keep_route_sets = true;
        ExactResult r = solve_exact(inst, p);
        Ratio expect = bf.solution.value;
        if (cfg.self_test) expect = Ratio(expect.num() * 2 + 1, expect.den() * 2);
        if (r.status != ExactStatus::Optimal) why = std::string("status ") + to_string(r.status);
        else if (!(r.best.value == expect)) why = "value " + r.best.value.str() + " expected " + expect.str();
        for (const ReducedSet& rs : r.route_sets) {
          std::set<RouteSignature> have;
          for (const Route& x : rs.routes) have.insert(signature(x));
          for (const Route& o : bf.optimal_routes)
            if (why.empty() && !have.count(signature(o))) why = "optimal route pruned";
        }
      } catch (const std::exception& e) {
        why = e.what();
      }
      if (why.empty()) {
        ++pass;
        continue;
      }
      ++failures;
      out << "MISMATCH " << to_string(kind) << ' ' << inst.name << ": " << why << '\n';
      write_vrpfo(out, inst);
    }
    out << to_string(kind) << ' ' << pass << '/' << cfg.trials << " passed\n";
  }
  return failures == 0 ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact solver for vehicle routing with a fractional objective"};
  app.require_subcommand(1);
  Config cfg;
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("inputs", cfg.inputs, "TSPLIB (.vrp) or VRPFO files, or directories");
    sub->add_option("--class", cfg.cls, "Instance class")->check(CLI::IsMember({"CA", "PA"}));
    sub->add_option("--alpha", cfg.alpha, "Fraction of mandatory customers")
        ->check(CLI::Range(0.0, 1.0).description("in (0,1)"));
    sub->add_option("--delta-ng", cfg.delta_ng, "ng neighbourhood size");
    sub->add_option("--out", cfg.out, "Output file (directory for generate)");
    sub->add_option("--format", cfg.format, "Output format")->check(CLI::IsMember({"text", "csv", "json"}));
  };
  auto add_exact = [&](CLI::App* sub) {
    sub->add_option("--delta-max", cfg.delta_max, "Route limit of the reduced problem");
    sub->add_option("--tlim", cfg.tlim, "Time limit of the integer solver per iteration (s)");
    sub->add_option("--itermax", cfg.itermax, "Maximum number of iterations");
    sub->add_option("--gapmax", cfg.gapmax, "Stop when the relative gap is at most this");
    sub->add_option("--nstatb", cfg.nstatb, "Maximum number of stored paths");
    sub->add_flag("--no-timing", cfg.no_timing, "Omit wall-clock times from the output");
  };
  auto* gen = app.add_subcommand("generate", "Write VRPFO instances from TSPLIB files");
  add_common(gen);
  auto* bnd = app.add_subcommand("bounds", "Compare the dual bounds");
  add_common(bnd);
  add_exact(bnd);
  bnd->add_option("--procedures", cfg.procedures, "Comma-separated subset of cb,da,cg,dk");
  bnd->add_flag("--exact", cfg.exact_reference, "Use the exact optimum as the reference value");
  auto* sol = app.add_subcommand("solve", "Solve instances exactly");
  add_common(sol);
  add_exact(sol);
  auto* orc = app.add_subcommand("oracle-check", "Compare against exhaustive enumeration on random instances");
  add_common(orc);
  add_exact(orc);
  orc->add_option("--seed", cfg.seed, "Random seed");
  orc->add_option("--trials", cfg.trials, "Instances per objective kind");
  orc->add_option("--n-max", cfg.n_max, "Largest number of customers")->check(CLI::Range(1, 10));
  orc->add_flag("--self-test", cfg.self_test, "Corrupt the reference values to exercise the mismatch report");
  cfg.cls = "CA";

  CLI11_PARSE(app, argc, argv);
  if (orc->parsed() && orc->count("--class") == 0) cfg.cls = "both";
  if (sol->parsed() && sol->count("--format") == 0) cfg.format = "text";
  if (bnd->parsed() && bnd->count("--format") == 0) cfg.format = "csv";
  for (double a : cfg.alpha)
    if (!(a > 0 && a < 1)) {
      std::cerr << "alpha must lie in (0,1)\n";
      return 1;
    }
  try {
    if (gen->parsed()) return cmd_generate(cfg);
    if (bnd->parsed()) return cmd_bounds(cfg);
    if (sol->parsed()) return cmd_solve(cfg);
    return cmd_oracle_check(cfg);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}
