// fpgasched: command-line experiment runner.
//
//   fpgasched run      one simulation (generated or replayed workload)
//   fpgasched sweep    rates x sizes x regions x preemption x replicas
//   fpgasched workload export a generated workload for later replay

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "fpgasched/errors.hpp"
#include "fpgasched/experiment.hpp"
#include "fpgasched/metrics.hpp"
#include "fpgasched/report.hpp"

namespace fs = std::filesystem;
using namespace fpgasched;

namespace {

struct KnobFlags {
  int priorities = 5;
  double t_partial_s = 0.07;
  double t_full_s = 0.22;
  SimTime median_cost = kMedianBlurCost;
  SimTime gaussian_cost = kGaussianBlurCost;
  std::int64_t stride = 1;
  SimTime save_window = 1;
  SimTime preempt_overhead = 100;
  SimTime restore_overhead = 100;

  ModelKnobs knobs() const {
    ModelKnobs k;
    k.n_priorities = priorities;
    k.t_partial = static_cast<SimTime>(std::llround(t_partial_s * 1e6));
    k.t_full = static_cast<SimTime>(std::llround(t_full_s * 1e6));
    k.median_cost = median_cost;
    k.gaussian_cost = gaussian_cost;
    k.checkpoint_stride = stride;
    k.exec.save_window = save_window;
    k.exec.preempt_overhead = preempt_overhead;
    k.exec.restore_overhead = restore_overhead;
    return k;
  }
};

void add_knobs(CLI::App* app, KnobFlags& k) {
  app->add_option("--priorities", k.priorities, "Number of priority levels")->capture_default_str();
  app->add_option("--t-partial", k.t_partial_s, "Partial reconfiguration time [s]")
      ->capture_default_str();
  app->add_option("--t-full", k.t_full_s, "Full reconfiguration time [s], used for the bound")
      ->capture_default_str();
  app->add_option("--median-cost-us", k.median_cost,
                  "Median blur cost per pixel-iteration [us]")
      ->capture_default_str();
  app->add_option("--gaussian-cost-us", k.gaussian_cost,
                  "Gaussian blur cost per pixel [us]")
      ->capture_default_str();
  app->add_option("--checkpoint-stride", k.stride,
                  "Inner iterations between checkpoints")
      ->capture_default_str();
  app->add_option("--save-window-us", k.save_window,
                  "Duration of a checkpoint write [us]")
      ->capture_default_str();
  app->add_option("--preempt-overhead-us", k.preempt_overhead,
                  "Context copy to the host after a preemption [us]")
      ->capture_default_str();
  app->add_option("--restore-overhead-us", k.restore_overhead,
                  "Context copy back to the device before a resume [us]")
      ->capture_default_str();
}

std::ofstream open_out(const fs::path& path) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream os(path, std::ios::binary);
  if (!os) throw ConfigError("cannot write " + path.string());
  return os;
}

void print_summary(std::ostream& os, const RunRecord& rec) {
  os << "tasks: " << rec.tasks.size() << "  regions: " << rec.config.n_regions
     << "  preemption: " << (rec.config.policy.preemption_enabled ? "on" : "off") << '\n';
  if (rec.tasks.empty()) {
    os << "empty run\n";
    return;
  }
  os << "makespan: " << format_double(to_seconds(rec.makespan)) << " s\n"
     << "throughput: " << format_double(throughput(rec)) << " tasks/s\n"
     << "full-reconfiguration bound: "
     << format_double(full_reconfig_bound(rec, rec.config.t_full, rec.config.t_partial))
     << " tasks/s\n"
     << "reconfigurations: " << rec.n_reconfigs << "  preemptions: " << rec.n_preemptions << '\n';
  os << "priority  tasks  mean service [s]  accumulated [s]\n";
  for (const auto& row : per_priority_service(rec)) {
    os << "  " << row.priority << "       " << row.count << "      "
       << format_double(row.mean_us / 1e6) << "      " << format_double(to_seconds(row.sum_us))
       << '\n';
  }
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Preemptive FPGA partial-reconfiguration scheduler simulator"};
  app.set_config("--config", "", "INI/TOML file with option defaults (flags take precedence)");
  app.require_subcommand(1);

  // run
  auto* run = app.add_subcommand("run", "Simulate one workload");
  int rrs = 1;
  int tasks = 30;
  std::uint64_t seed = 15;
  std::string rate = "busy";
  std::string size = "600";
  std::string preemption = "on";
  std::string out_dir = "results";
  std::string trace = "off";
  std::string workload_file;
  KnobFlags run_knobs;
  run->add_option("--rrs", rrs, "Reconfigurable regions")->capture_default_str();
  run->add_option("--tasks", tasks, "Tasks to generate")->capture_default_str();
  run->add_option("--seed", seed, "Workload seed")->capture_default_str();
  run->add_option("--rate", rate, "Arrival window: busy (6 s) | medium (30 s) | idle (48 s) | seconds")
      ->capture_default_str();
  run->add_option("--size", size, "Image size: 200..600 or HxW")->capture_default_str();
  run->add_option("--preemption", preemption, "Preemption")
      ->check(CLI::IsMember({"on", "off"}))
      ->capture_default_str();
  run->add_option("--out", out_dir, "Output directory")->capture_default_str();
  run->add_option("--trace", trace, "Write the event trace")
      ->check(CLI::IsMember({"on", "off"}))
      ->capture_default_str();
  run->add_option("--workload", workload_file, "Replay a workload file instead of generating one");
  add_knobs(run, run_knobs);

  // sweep
  auto* sweep = app.add_subcommand("sweep", "Run the full experiment grid");
  std::uint64_t base_seed = 15;
  int replicas = 10;
  int sweep_tasks = 30;
  std::string rates = "busy,medium,idle";
  std::string sizes = "200,300,400,500,600";
  std::string rrs_list = "1,2";
  std::string sweep_out = "results";
  std::string sweep_trace = "off";
  int threads = 0;
  bool serial = false;
  KnobFlags sweep_knobs;
  sweep->add_option("--seed", base_seed, "Base seed; replica r uses seed+r")->capture_default_str();
  sweep->add_option("--replicas", replicas, "Replicas per cell")->capture_default_str();
  sweep->add_option("--tasks", sweep_tasks, "Tasks per run")->capture_default_str();
  sweep->add_option("--rates", rates, "Comma-separated arrival windows")->capture_default_str();
  sweep->add_option("--sizes", sizes, "Comma-separated image sizes")->capture_default_str();
  sweep->add_option("--rrs", rrs_list, "Comma-separated region counts")->capture_default_str();
  sweep->add_option("--out", sweep_out, "Output directory")->capture_default_str();
  sweep->add_option("--trace", sweep_trace, "Write all event traces")
      ->check(CLI::IsMember({"on", "off"}))
      ->capture_default_str();
  sweep->add_option("--threads", threads, "Worker threads, 0 = OpenMP default")
      ->capture_default_str();
  sweep->add_flag("--serial", serial, "Use the serial reference runner");
  add_knobs(sweep, sweep_knobs);

  // workload
  auto* wl = app.add_subcommand("workload", "Export a generated workload");
  int wl_tasks = 30;
  std::uint64_t wl_seed = 15;
  std::string wl_rate = "busy";
  std::string wl_size = "600";
  std::string wl_out;
  KnobFlags wl_knobs;
  wl->add_option("--tasks", wl_tasks, "Tasks to generate")->capture_default_str();
  wl->add_option("--seed", wl_seed, "Workload seed")->capture_default_str();
  wl->add_option("--rate", wl_rate, "Arrival window")->capture_default_str();
  wl->add_option("--size", wl_size, "Image size")->capture_default_str();
  wl->add_option("--out", wl_out, "Output file (default: stdout)");
  add_knobs(wl, wl_knobs);

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run) {
      RunSpec spec;
      spec.cell = {rate_spec(rate), parse_size(size), rrs, preemption == "on"};
      spec.seed = seed;
      spec.n_tasks = tasks;
      spec.knobs = run_knobs.knobs();
      spec.trace = trace == "on";
      validate(make_sim_config(spec));

      RunRecord rec;
      if (!workload_file.empty()) {
        std::ifstream in(workload_file);
        if (!in) throw ConfigError("cannot read " + workload_file);
        auto workload = read_workload(in, make_menu(spec.knobs));
        spec.n_tasks = static_cast<int>(workload.size());
        rec = execute(spec, std::move(workload));
      } else {
        rec = execute(spec);
      }
      const fs::path dir(out_dir);
      auto metrics = open_out(dir / "metrics.csv");
      write_run_metrics(metrics, spec, rec);
      if (spec.trace) {
        auto tr = open_out(dir / "trace.csv");
        write_run_trace(tr, spec, rec);
      }
      print_summary(std::cout, rec);
      std::cout << "wrote " << (dir / "metrics.csv").string()
                << (spec.trace ? " and " + (dir / "trace.csv").string() : std::string()) << '\n';
      return 0;
    }

    if (*sweep) {
      SweepConfig cfg;
      cfg.base_seed = base_seed;
      cfg.replicas = replicas;
      cfg.n_tasks = sweep_tasks;
      cfg.rates.clear();
      for (const auto& r : split_list(rates)) cfg.rates.push_back(rate_spec(r));
      cfg.sizes.clear();
      for (const auto& s : split_list(sizes)) cfg.sizes.push_back(parse_size(s));
      cfg.rrs.clear();
      for (const auto& r : split_list(rrs_list)) cfg.rrs.push_back(std::stoi(r));
      cfg.knobs = sweep_knobs.knobs();
      cfg.trace = sweep_trace == "on";
      for (int r : cfg.rrs) {
        RunSpec probe;
        probe.cell.rrs = r;
        probe.knobs = cfg.knobs;
        validate(make_sim_config(probe));
      }

      const SweepResult result = serial ? run_sweep_serial(cfg) : run_sweep_parallel(cfg, threads);
      const fs::path dir(sweep_out);
      {
        auto os = open_out(dir / "runs.csv");
        write_sweep_metrics(os, cfg, result);
      }
      const auto cells = aggregate(result);
      {
        auto os = open_out(dir / "service_summary.csv");
        write_service_summary(os, cfg, cells);
      }
      {
        auto os = open_out(dir / "throughput_summary.csv");
        write_throughput_summary(os, cfg, cells);
      }
      {
        auto os = open_out(dir / "overhead_summary.csv");
        write_overhead_summary(os, cfg, aggregate_overhead(result));
      }
      if (cfg.trace) {
        auto os = open_out(dir / "traces.csv");
        write_sweep_traces(os, cfg, result);
      }
      std::cout << result.cells.size() << " cells x " << cfg.replicas << " replicas -> "
                << dir.string() << '\n';
      const auto failed = result.failures();
      if (!failed.empty()) {
        std::cerr << failed.size() << " run(s) failed:\n";
        for (const auto* f : failed) {
          const CellKey& c = result.cells[f->cell];
          std::cerr << "  rate=" << c.rate.label << " size=" << size_label(c.size)
                    << " rrs=" << c.rrs << " preemption=" << (c.preemption ? "on" : "off")
                    << " replica=" << f->replica << ": " << f->error << '\n';
        }
        return 1;
      }
      return 0;
    }

    if (*wl) {
      RunSpec spec;
      spec.cell = {rate_spec(wl_rate), parse_size(wl_size), 1, true};
      spec.seed = wl_seed;
      spec.n_tasks = wl_tasks;
      spec.knobs = wl_knobs.knobs();
      const auto tasks_out = generate(make_workload_config(spec));
      const std::string comment = describe(spec);
      if (wl_out.empty()) {
        write_workload(std::cout, tasks_out, comment);
      } else {
        auto os = open_out(wl_out);
        write_workload(os, tasks_out, comment);
      }
      return 0;
    }
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
