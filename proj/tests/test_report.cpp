#include <doctest.h>

#include <sstream>

#include "fpgasched/errors.hpp"
#include "fpgasched/report.hpp"

using namespace fpgasched;

TEST_CASE("stable headers") {
  CHECK(kMetricsHeader ==
        "rate,size,rrs,preemption,seed,replica,priority,service_mean_us,service_sum_us,"
        "throughput_per_s,reconfigs,preemptions,bound_per_s");
  CHECK(kTraceHeader == "time,seq,kind,region,task");
}

TEST_CASE("workload files round-trip") {
  for (std::uint64_t seed : {1ULL, 15ULL, 99ULL}) {
    WorkloadConfig c;
    c.seed = seed;
    c.sizes = {{200, 200}, {300, 500}};
    const auto tasks = generate(c);
    std::stringstream ss;
    write_workload(ss, tasks, "# comment line\n");
    const auto back = read_workload(ss, default_menu());
    REQUIRE(back.size() == tasks.size());
    for (std::size_t i = 0; i < tasks.size(); ++i) {
      CHECK(back[i].id == tasks[i].id);
      CHECK(back[i].arrival == tasks[i].arrival);
      CHECK(back[i].priority == tasks[i].priority);
      CHECK(back[i].kernel->id == tasks[i].kernel->id);
      CHECK(back[i].args == tasks[i].args);
    }
    // A replayed workload simulates exactly like the generated one.
    std::ostringstream a, b;
    write_trace_lines(a, simulate(SimConfig{}, tasks));
    write_trace_lines(b, simulate(SimConfig{}, back));
    CHECK(a.str() == b.str());
  }
}

TEST_CASE("malformed workload files are rejected") {
  const auto menu = default_menu();
  auto parse = [&](const std::string& text) {
    std::istringstream is(text);
    return read_workload(is, menu);
  };
  const std::string header = std::string(kWorkloadHeader) + "\n";
  CHECK(parse(header).empty());
  CHECK(parse("# only comments\n" + header + "0,5,1,MedianBlur,2,2,1\r\n").size() == 1);
  CHECK_THROWS_AS(parse(""), FormatError);
  CHECK_THROWS_AS(parse("id,arrival\n"), FormatError);
  CHECK_THROWS_AS(parse(header + "0,5,1,MedianBlur,2,2\n"), FormatError);
  CHECK_THROWS_AS(parse(header + "0,5x,1,MedianBlur,2,2,1\n"), FormatError);
  CHECK_THROWS_AS(parse(header + "0,5,1,Sobel,2,2,1\n"), FormatError);
}

TEST_CASE("metrics rows carry one line per priority present") {
  RunSpec spec;
  spec.seed = 15;
  const RunRecord rec = execute(spec);
  std::ostringstream os;
  write_run_metrics(os, spec, rec);
  std::istringstream is(os.str());
  std::string line;
  int comments = 0, header = 0, rows = 0;
  while (std::getline(is, line)) {
    if (line.rfind('#', 0) == 0) {
      ++comments;
    } else if (line == kMetricsHeader) {
      ++header;
    } else {
      ++rows;
      CHECK(line.rfind("busy,600,1,on,15,0,", 0) == 0);
    }
  }
  CHECK(comments == 2);
  CHECK(header == 1);
  CHECK(rows == static_cast<int>(per_priority_service(rec).size()));
}

TEST_CASE("empty run writes the header only") {
  RunSpec spec;
  spec.n_tasks = 0;
  const RunRecord rec = execute(spec);
  std::ostringstream os;
  write_run_metrics(os, spec, rec);
  CHECK(os.str() == describe(spec) + std::string(kMetricsHeader) + "\n");
}

TEST_CASE("provenance lines echo every knob") {
  RunSpec spec;
  spec.knobs.exec.save_window = 2;
  const std::string d = describe(spec);
  for (const char* key : {"rate=busy", "size=600", "rrs=1", "preemption=on", "seed=15", "t_partial_us=70000",
                          "t_full_us=220000", "save_window_us=2", "preempt_overhead_us=100",
                          "restore_overhead_us=100", "checkpoint_stride=1", "median_cost_us=2",
                          "gaussian_cost_us=3", "priorities=5"}) {
    CHECK_MESSAGE(d.find(key) != std::string::npos, key);
  }
}

TEST_CASE("numbers are printed compactly and exactly enough") {
  CHECK(format_double(0.5) == "0.5");
  CHECK(format_double(30.0 / 61.5) == "0.487804878");
  CHECK(format_double(0) == "0");
}
