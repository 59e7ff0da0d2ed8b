#include "fpgasched/report.hpp"

#include <charconv>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>

#include "fpgasched/errors.hpp"

namespace fpgasched {

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

namespace {

const char* on_off(bool b) { return b ? "on" : "off"; }

}  // namespace

std::string describe(const ModelKnobs& k) {
  std::ostringstream os;
  os << "priorities=" << k.n_priorities << " t_partial_us=" << k.t_partial
     << " t_full_us=" << k.t_full << " median_cost_us=" << k.median_cost
     << " gaussian_cost_us=" << k.gaussian_cost << " checkpoint_stride=" << k.checkpoint_stride
     << " save_window_us=" << k.exec.save_window
     << " preempt_overhead_us=" << k.exec.preempt_overhead
     << " restore_overhead_us=" << k.exec.restore_overhead;
  return os.str();
}

std::string describe(const RunSpec& s) {
  std::ostringstream os;
  os << "# run rate=" << s.cell.rate.label << " window_us=" << s.cell.rate.window
     << " size=" << size_label(s.cell.size) << " rrs=" << s.cell.rrs
     << " preemption=" << on_off(s.cell.preemption) << " tasks=" << s.n_tasks
     << " seed=" << s.seed << " replica=" << s.replica << '\n'
     << "# model " << describe(s.knobs) << '\n';
  return os.str();
}

std::string describe(const SweepConfig& c) {
  std::ostringstream os;
  os << "# sweep base_seed=" << c.base_seed << " replicas=" << c.replicas
     << " tasks=" << c.n_tasks << " rates=";
  for (std::size_t i = 0; i < c.rates.size(); ++i) {
    os << (i ? ";" : "") << c.rates[i].label << ':' << c.rates[i].window;
  }
  os << " sizes=";
  for (std::size_t i = 0; i < c.sizes.size(); ++i) os << (i ? ";" : "") << size_label(c.sizes[i]);
  os << " rrs=";
  for (std::size_t i = 0; i < c.rrs.size(); ++i) os << (i ? ";" : "") << c.rrs[i];
  os << " preemption=";
  for (std::size_t i = 0; i < c.preemption.size(); ++i) os << (i ? ";" : "") << on_off(c.preemption[i]);
  os << '\n' << "# model " << describe(c.knobs) << '\n';
  return os.str();
}

void write_metrics_rows(std::ostream& os, const CellKey& cell, std::uint64_t seed, int replica,
                        const RunRecord& record) {
  if (record.tasks.empty()) return;
  const double thr = throughput(record);
  const double bound = full_reconfig_bound(record, record.config.t_full, record.config.t_partial);
  for (const auto& row : per_priority_service(record)) {
    os << cell.rate.label << ',' << size_label(cell.size) << ',' << cell.rrs << ','
       << on_off(cell.preemption) << ',' << seed << ',' << replica << ',' << row.priority << ','
       << format_double(row.mean_us) << ',' << row.sum_us << ',' << format_double(thr) << ','
       << record.n_reconfigs << ',' << record.n_preemptions << ',' << format_double(bound) << '\n';
  }
}

void write_run_metrics(std::ostream& os, const RunSpec& spec, const RunRecord& record) {
  os << describe(spec) << kMetricsHeader << '\n';
  write_metrics_rows(os, spec.cell, spec.seed, spec.replica, record);
}

void write_sweep_metrics(std::ostream& os, const SweepConfig& cfg, const SweepResult& result) {
  os << describe(cfg) << kMetricsHeader << '\n';
  for (const auto& run : result.runs) {
    if (run.record) write_metrics_rows(os, result.cells[run.cell], run.seed, run.replica, *run.record);
  }
}

void write_trace_lines(std::ostream& os, const RunRecord& record) {
  for (const auto& r : record.trace) os << format_trace_line(r) << '\n';
}

void write_run_trace(std::ostream& os, const RunSpec& spec, const RunRecord& record) {
  os << describe(spec) << kTraceHeader << '\n';
  write_trace_lines(os, record);
}

void write_sweep_traces(std::ostream& os, const SweepConfig& cfg, const SweepResult& result) {
  os << describe(cfg) << kTraceHeader << '\n';
  for (const auto& run : result.runs) {
    if (!run.record) continue;
    os << describe(run_spec(cfg, result.cells[run.cell], run.replica));
    write_trace_lines(os, *run.record);
  }
}

// ---------------------------------------------------------------------------
// Workload files

void write_workload(std::ostream& os, std::span<const Task> tasks, std::string_view comment) {
  if (!comment.empty()) os << comment;
  os << kWorkloadHeader << '\n';
  for (const auto& t : tasks) {
    if (t.args.size() != 3) {
      throw FormatError("task " + std::to_string(t.id) + ": workload files hold (H, W, iters)");
    }
    os << t.id << ',' << t.arrival << ',' << t.priority << ',' << t.kernel->id << ',' << t.args[0]
       << ',' << t.args[1] << ',' << t.args[2] << '\n';
  }
}

namespace {

std::vector<std::string_view> split(std::string_view line, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  for (;;) {
    const auto pos = line.find(sep, start);
    if (pos == std::string_view::npos) {
      out.push_back(line.substr(start));
      return out;
    }
    out.push_back(line.substr(start, pos - start));
    start = pos + 1;
  }
}

std::int64_t parse_field(std::string_view s, int line_no, const char* name) {
  std::int64_t v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size()) {
    throw FormatError("line " + std::to_string(line_no) + ": bad " + name + " '" + std::string(s) + "'");
  }
  return v;
}

}  // namespace

std::vector<Task> read_workload(std::istream& is, const std::vector<MenuEntry>& catalog) {
  std::vector<Task> tasks;
  std::string line;
  int line_no = 0;
  bool header_seen = false;
  while (std::getline(is, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line.front() == '#') continue;
    if (!header_seen) {
      if (line != kWorkloadHeader) {
        throw FormatError("line " + std::to_string(line_no) + ": expected header '" +
                          std::string(kWorkloadHeader) + "'");
      }
      header_seen = true;
      continue;
    }
    const auto f = split(line, ',');
    if (f.size() != 7) {
      throw FormatError("line " + std::to_string(line_no) + ": expected 7 fields, got " +
                        std::to_string(f.size()));
    }
    Task t;
    t.id = parse_field(f[0], line_no, "id");
    t.arrival = parse_field(f[1], line_no, "arrival_us");
    t.priority = static_cast<int>(parse_field(f[2], line_no, "priority"));
    t.kernel = find_kernel(catalog, f[3]);
    if (!t.kernel) {
      throw FormatError("line " + std::to_string(line_no) + ": unknown kernel '" + std::string(f[3]) + "'");
    }
    t.args = {parse_field(f[4], line_no, "h"), parse_field(f[5], line_no, "w"),
              parse_field(f[6], line_no, "iters")};
    tasks.push_back(std::move(t));
  }
  if (!header_seen) throw FormatError("workload file has no header");
  return tasks;
}

// ---------------------------------------------------------------------------
// Aggregation

std::vector<CellSummary> aggregate(const SweepResult& result) {
  std::vector<CellSummary> out;
  out.reserve(result.cells.size());
  for (std::size_t c = 0; c < result.cells.size(); ++c) {
    std::vector<double> thr, bound, reconf, pre;
    std::map<int, std::vector<double>> smean, ssum;
    for (int r = 0; r < result.replicas; ++r) {
      const SweepRun& run = result.at(c, r);
      if (!run.record || run.record->tasks.empty()) continue;
      const RunRecord& rec = *run.record;
      thr.push_back(throughput(rec));
      bound.push_back(full_reconfig_bound(rec, rec.config.t_full, rec.config.t_partial));
      reconf.push_back(static_cast<double>(rec.n_reconfigs));
      pre.push_back(static_cast<double>(rec.n_preemptions));
      for (const auto& row : per_priority_service(rec)) {
        smean[row.priority].push_back(row.mean_us);
        ssum[row.priority].push_back(static_cast<double>(row.sum_us));
      }
    }
    CellSummary s;
    s.cell = result.cells[c];
    s.runs = thr.size();
    s.throughput = summarize(thr);
    s.bound = summarize(bound);
    s.reconfigs = summarize(reconf);
    s.preemptions = summarize(pre);
    for (const auto& [p, v] : smean) s.service_mean_us[p] = summarize(v);
    for (const auto& [p, v] : ssum) s.service_sum_us[p] = summarize(v);
    out.push_back(std::move(s));
  }
  return out;
}

std::vector<OverheadSummary> aggregate_overhead(const SweepResult& result) {
  std::vector<OverheadSummary> out;
  for (std::size_t np = 0; np < result.cells.size(); ++np) {
    const CellKey& a = result.cells[np];
    if (a.preemption) continue;
    for (std::size_t p = 0; p < result.cells.size(); ++p) {
      const CellKey& b = result.cells[p];
      if (!b.preemption || !(b.rate == a.rate) || !(b.size == a.size) || b.rrs != a.rrs) continue;
      std::vector<double> values;
      for (int r = 0; r < result.replicas; ++r) {
        const SweepRun& x = result.at(np, r);
        const SweepRun& y = result.at(p, r);
        if (!x.record || !y.record || x.record->tasks.empty()) continue;
        values.push_back(preemption_overhead(*x.record, *y.record));
      }
      out.push_back({a.rate, a.size, a.rrs, summarize(values)});
      break;
    }
  }
  return out;
}

void write_service_summary(std::ostream& os, const SweepConfig& cfg,
                           std::span<const CellSummary> rows) {
  os << describe(cfg)
     << "rate,size,rrs,preemption,priority,replicas,service_mean_us_mean,service_mean_us_std,"
        "service_sum_us_mean,service_sum_us_std\n";
  for (const auto& s : rows) {
    for (const auto& [p, mean] : s.service_mean_us) {
      const Summary& sum = s.service_sum_us.at(p);
      os << s.cell.rate.label << ',' << size_label(s.cell.size) << ',' << s.cell.rrs << ','
         << on_off(s.cell.preemption) << ',' << p << ',' << mean.n << ','
         << format_double(mean.mean) << ',' << format_double(mean.stddev) << ','
         << format_double(sum.mean) << ',' << format_double(sum.stddev) << '\n';
    }
  }
}

void write_throughput_summary(std::ostream& os, const SweepConfig& cfg,
                              std::span<const CellSummary> rows) {
  os << describe(cfg)
     << "rate,size,rrs,preemption,replicas,throughput_per_s_mean,throughput_per_s_std,"
        "reconfigs_mean,reconfigs_std,preemptions_mean,preemptions_std,bound_per_s_mean,"
        "bound_per_s_std\n";
  for (const auto& s : rows) {
    os << s.cell.rate.label << ',' << size_label(s.cell.size) << ',' << s.cell.rrs << ','
       << on_off(s.cell.preemption) << ',' << s.runs << ',' << format_double(s.throughput.mean)
       << ',' << format_double(s.throughput.stddev) << ',' << format_double(s.reconfigs.mean)
       << ',' << format_double(s.reconfigs.stddev) << ',' << format_double(s.preemptions.mean)
       << ',' << format_double(s.preemptions.stddev) << ',' << format_double(s.bound.mean) << ','
       << format_double(s.bound.stddev) << '\n';
  }
}

void write_overhead_summary(std::ostream& os, const SweepConfig& cfg,
                            std::span<const OverheadSummary> rows) {
  os << describe(cfg) << "rate,size,rrs,replicas,overhead_mean,overhead_std\n";
  for (const auto& s : rows) {
    os << s.rate.label << ',' << size_label(s.size) << ',' << s.rrs << ',' << s.overhead.n << ','
       << format_double(s.overhead.mean) << ',' << format_double(s.overhead.stddev) << '\n';
  }
}

}  // namespace fpgasched
