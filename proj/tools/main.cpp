#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <mutex>
#include <thread>
#include <vector>

#include "se3sat/config.hpp"
#include "se3sat/csv.hpp"
#include "se3sat/feasibility.hpp"
#include "se3sat/simulator.hpp"

namespace fs = std::filesystem;
using namespace se3sat;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInfeasible = 1;
constexpr int kExitUsage = 2;

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
  out << text;
}

struct AuditOutput {
  BoundsReport bounds;
  Assumption1Report a1;
  std::string text;
  std::string kv;
};

AuditOutput run_audit(const RunConfig& cfg) {
  AuditOutput out;
  const EnvelopeConstants env = envelope_from_trajectory(cfg.traj);
  out.bounds = audit(cfg.veh, env, cfg.outer, cfg.inner, cfg.filter_init_zero);
  out.a1 = check_assumption1(env, cfg.veh);
  out.text = format_report(out.bounds, out.a1);
  out.kv = format_report_kv(out.bounds, out.a1);
  return out;
}

int cmd_audit(const std::string& config_path, const std::string& out_prefix) {
  const RunConfig cfg = load_config(config_path);
  const AuditOutput a = run_audit(cfg);
  std::cout << a.text;
  write_text(out_prefix + ".txt", a.text);
  write_text(out_prefix + ".kv", a.kv);
  return a.bounds.feasible() ? kExitOk : kExitInfeasible;
}

std::string summary_file_text(const RunConfig& cfg, const Summary& sum) {
  std::string s = "[summary]\n" + format_summary(sum) + "\n";
  s += serialize_config(cfg);
  return s;
}

int run_one(RunConfig cfg, const std::string& out_prefix, bool force, bool no_monitors) {
  if (no_monitors) cfg.monitors = false;
  SimConfig sim = cfg.sim_config();

  bool audited = false;
  try {
    const AuditOutput a = run_audit(cfg);
    audited = true;
    if (!a.bounds.feasible() && !force) {
      std::cerr << "audit failed (assumption1_ok=" << a.bounds.assumption1_ok
                << ", theorem2_ok=" << a.bounds.theorem2_ok
                << "); rerun with --force to simulate anyway\n";
      return kExitInfeasible;
    }
    sim.bounds = a.bounds;
  } catch (const std::domain_error& e) {
    if (!force) {
      std::cerr << "audit failed: " << e.what() << "\n";
      return kExitInfeasible;
    }
    std::cerr << "audit failed (" << e.what() << "); continuing without input assertions\n";
  }
  if (force && !audited) sim.bounds.reset();

  try {
    const Log log = run(sim);
    write_csv(out_prefix + ".csv", log);
    write_text(out_prefix + "_summary.txt", summary_file_text(cfg, log.summary));
    std::cout << format_summary(log.summary);
    return kExitOk;
  } catch (const SimulationError& e) {
    std::cerr << "simulation aborted: " << e.what() << "\n";
    return kExitInfeasible;
  }
}

int cmd_sweep(const std::vector<std::string>& config_paths, const std::string& out_dir,
              unsigned jobs) {
  fs::create_directories(out_dir);
  std::vector<RunConfig> cfgs;
  std::vector<std::string> prefixes;
  for (const auto& path : config_paths) {
    cfgs.push_back(load_config(path));
    prefixes.push_back((fs::path(out_dir) / fs::path(path).stem()).string());
  }
  std::vector<int> codes(cfgs.size(), kExitOk);
  std::size_t next = 0;
  std::mutex mtx;
  const auto worker = [&] {
    for (;;) {
      std::size_t i;
      {
        std::lock_guard<std::mutex> lk(mtx);
        if (next >= cfgs.size()) return;
        i = next++;
      }
      codes[i] = run_one(cfgs[i], prefixes[i], false, false);
    }
  };
  jobs = std::max(1u, std::min<unsigned>(jobs, cfgs.size()));
  std::vector<std::thread> pool;
  for (unsigned k = 0; k < jobs; ++k) pool.emplace_back(worker);
  for (auto& th : pool) th.join();
  for (std::size_t i = 0; i < codes.size(); ++i)
    std::cout << config_paths[i] << ": " << (codes[i] == kExitOk ? "ok" : "FAILED") << "\n";
  for (int c : codes)
    if (c != kExitOk) return c;
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"saturated hybrid position-and-heading tracking on SE(3)"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_prefix = "out";
  std::string log_path;
  std::string out_dir = ".";
  std::vector<std::string> sweep_configs;
  unsigned jobs = std::thread::hardware_concurrency();
  bool force = false, no_monitors = false, print_config = false;
  double t_final_override = -1.0, dt_override = -1.0;

  CLI::App* c_audit = app.add_subcommand("audit", "a-priori feasibility audit of a configuration");
  c_audit->add_option("config", config_path, "configuration file")->required();
  c_audit->add_option("--out", out_prefix, "output prefix for the .txt/.kv reports");

  CLI::App* c_run = app.add_subcommand("run", "closed-loop simulation");
  c_run->add_option("config", config_path, "configuration file")->required();
  c_run->add_option("--out", out_prefix, "output prefix for the .csv/_summary.txt files");
  c_run->add_option("--t-final", t_final_override, "override final time [s]");
  c_run->add_option("--dt", dt_override, "override step size [s]");
  c_run->add_flag("--no-monitors", no_monitors, "disable Lyapunov/lift monitors");
  c_run->add_flag("--force", force, "simulate even if the audit fails");
  c_run->add_flag("--print-config", print_config, "print the effective configuration and exit");

  CLI::App* c_plot = app.add_subcommand("plotdata", "per-panel columnar files from a run CSV");
  c_plot->add_option("log", log_path, "run CSV file")->required();
  c_plot->add_option("--out-dir", out_dir, "directory for the panel files");

  CLI::App* c_sweep = app.add_subcommand("sweep", "run several configurations in parallel");
  c_sweep->add_option("configs", sweep_configs, "configuration files")->required();
  c_sweep->add_option("--out-dir", out_dir, "directory for per-config outputs");
  c_sweep->add_option("--jobs", jobs, "worker threads");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (app.got_subcommand(c_audit)) return cmd_audit(config_path, out_prefix);
    if (app.got_subcommand(c_run)) {
      RunConfig cfg = load_config(config_path);
      if (t_final_override >= 0) cfg.t_final = t_final_override;
      if (dt_override > 0) cfg.dt = dt_override;
      if (print_config) {
        std::cout << serialize_config(cfg);
        return kExitOk;
      }
      return run_one(cfg, out_prefix, force, no_monitors);
    }
    if (app.got_subcommand(c_plot)) {
      fs::create_directories(out_dir);
      const CsvTable table = read_csv(log_path);
      for (const auto& name : write_plot_panels(table, out_dir))
        std::cout << out_dir << "/" << name << "\n";
      return kExitOk;
    }
    if (app.got_subcommand(c_sweep)) return cmd_sweep(sweep_configs, out_dir, jobs);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const SimulationError& e) {
    std::cerr << "simulation aborted: " << e.what() << "\n";
    return kExitInfeasible;
  } catch (const std::domain_error& e) {
    std::cerr << "infeasible: " << e.what() << "\n";
    return kExitInfeasible;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}
