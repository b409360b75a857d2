#include <atomic>
#include <csignal>
#include <fstream>
#include <iostream>
#include <mutex>
#include <thread>

#include <CLI11.hpp>

#include "ccmp/cli/cli.hpp"
#include "ccmp/errors.hpp"
#include "ccmp/gen/io.hpp"
#include "ccmp/gen/tiny.hpp"

using namespace ccmp;

namespace {

std::atomic<bool> g_interrupted{false};

void on_sigint(int) { g_interrupted = true; }

struct UsageError : Error {
  using Error::Error;
};

cli::RunConfig config_from(const std::string& path) {
  return path.empty() ? cli::RunConfig{} : cli::load_config(path);
}

cli::MethodId method_from(const std::string& name) {
  const auto m = cli::parse_method(name);
  if (!m) throw UsageError("unknown method '" + name + "'");
  return *m;
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path);
  out << text;
}

int solve_one(const std::string& instance_path, const std::string& method,
              const std::optional<double>& epsilon, const std::string& config,
              const std::string& solution_path, const std::string& log_path) {
  auto inst = gen::read_instance(instance_path);
  if (epsilon) inst.epsilon = *epsilon;
  const auto cfg = config_from(config);
  const auto out = cli::run_method(inst, method_from(method), cfg);
  std::cout << cli::csv_header() << "\n" << cli::csv_line(out.row) << "\n\n";
  std::cout << cli::text_table({out.row});
  if (out.has_solution) {
    std::cout << "x =";
    for (double v : out.solution.x) std::cout << " " << cli::format_number(v);
    std::cout << "\nz =";
    for (int v : out.solution.z) std::cout << " " << v;
    std::cout << "\n";
  }
  if (!solution_path.empty()) write_file(solution_path, cli::solution_json(out.row, out) + "\n");
  if (!log_path.empty()) {
    std::string text;
    for (const auto& l : out.log) text += l + "\n";
    write_file(log_path, text);
  }
  return cli::exit_code(out.status.tag);
}

CcmpInstance generate(const std::string& kind, const cli::BenchSpec& base, double epsilon,
                      bool eps_given, int variant) {
  CcmpInstance inst;
  if (kind == "tiny1") {
    inst = gen::tiny1(eps_given ? epsilon : 0.5);
  } else if (kind == "tiny2") {
    inst = gen::tiny2(eps_given ? epsilon : 0.5);
  } else if (kind == "conflict1") {
    inst = gen::conflict1(eps_given ? epsilon : 0.0, variant);
  } else {
    auto spec = base;
    spec.kind = cli::parse_bench_spec(kind).kind;
    spec.count = 1;
    inst = cli::bench_instances(spec).front();
    if (eps_given) inst.epsilon = epsilon;
  }
  return inst;
}

// Split on commas keeping empty fields, so "bd0,,bd1" is rejected.
std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> out;
  std::size_t start = 0;
  for (;;) {
    const auto p = text.find(',', start);
    out.push_back(text.substr(start, p - start));
    if (p == std::string::npos) return out;
    start = p + 1;
  }
}

int bench(const std::string& spec_text, const std::vector<std::string>& files,
          const std::string& methods_text, const std::vector<double>& epsilons,
          const std::string& config, const std::string& csv_path, int jobs) {
  std::vector<cli::MethodId> ms;
  for (const auto& m : split_list(methods_text)) {
    if (m.empty()) throw UsageError("empty method name in --methods");
    ms.push_back(method_from(m));
  }
  if (spec_text.empty() == files.empty())
    throw UsageError("give exactly one of --spec and --instances");
  const auto cfg = config_from(config);
  std::vector<CcmpInstance> instances;
  if (!spec_text.empty()) {
    instances = cli::bench_instances(cli::parse_bench_spec(spec_text));
  } else {
    for (const auto& f : files) instances.push_back(gen::read_instance(f));
  }

  struct Cell {
    CcmpInstance inst;
    cli::MethodId method;
  };
  std::vector<Cell> cells;
  std::vector<double> eps = epsilons;
  for (std::size_t i = 0; i < instances.size(); ++i) {
    const auto list = eps.empty() ? std::vector<double>{instances[i].epsilon} : eps;
    for (double e : list) {
      auto inst = instances[i];
      inst.epsilon = e;
      for (const auto& m : ms) cells.push_back({inst, m});
    }
  }

  std::ofstream csv_file;
  std::ostream* csv = &std::cout;
  if (!csv_path.empty()) {
    csv_file.open(csv_path);
    if (!csv_file) throw Error("cannot write " + csv_path);
    csv = &csv_file;
  }
  *csv << cli::csv_header() << "\n" << std::flush;

  std::vector<std::optional<cli::ReportRow>> rows(cells.size());
  std::mutex out_mu;
  std::atomic<std::size_t> next{0};
  std::signal(SIGINT, on_sigint);
  auto worker = [&] {
    for (;;) {
      if (g_interrupted) return;
      const std::size_t c = next++;
      if (c >= cells.size()) return;
      cli::ReportRow row;
      try {
        row = cli::run_method(cells[c].inst, cells[c].method, cfg).row;
      } catch (const Error& e) {
        row.instance = cells[c].inst.name;
        row.method = cells[c].method.name();
        row.epsilon = cells[c].inst.epsilon;
        row.status = "Error";
        std::lock_guard<std::mutex> lock(out_mu);
        std::cerr << row.instance << " " << row.method << ": " << e.what() << "\n";
      }
      std::lock_guard<std::mutex> lock(out_mu);
      rows[c] = row;
      *csv << cli::csv_line(row) << "\n" << std::flush;
    }
  };
  std::vector<std::thread> pool;
  for (int t = 1; t < std::max(jobs, 1); ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();

  std::vector<cli::ReportRow> done;
  for (const auto& r : rows)
    if (r) done.push_back(*r);
  *csv << cli::csv_footer(cli::summarize(done)) << std::flush;
  if (!csv_path.empty()) std::cout << cli::text_table(done);
  return g_interrupted ? 130 : 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Chance-constrained two-stage programs: formulations, Benders variants, oracle"};
  app.require_subcommand(1);

  auto* gen_cmd = app.add_subcommand("generate", "Write a generated instance as JSON");
  std::string g_kind = "scaled", g_out;
  cli::BenchSpec g_spec;
  double g_eps = 0.1;
  int g_variant = 0;
  gen_cmd->add_option("--kind", g_kind,
                      "scaled, T1, T2, random, rhs, or, tiny1, tiny2 or conflict1")
      ->capture_default_str();
  gen_cmd->add_option("--K", g_spec.K, "Scenario count")->capture_default_str();
  gen_cmd->add_option("--seed", g_spec.seed, "Generator seed")->capture_default_str();
  auto* g_eps_opt = gen_cmd->add_option("--epsilon", g_eps, "Risk level");
  gen_cmd->add_option("--x-kind", g_spec.x_kind, "binary, integer, continuous or mixed")
      ->capture_default_str();
  gen_cmd->add_flag("--common-recourse", g_spec.common_recourse, "Share G, H, f across scenarios");
  gen_cmd->add_option("--surgeries", g_spec.surgeries)->capture_default_str();
  gen_cmd->add_option("--surgeons", g_spec.surgeons)->capture_default_str();
  gen_cmd->add_option("--rooms", g_spec.rooms)->capture_default_str();
  gen_cmd->add_option("--group", g_spec.group, "Duration group I or II")->capture_default_str();
  gen_cmd->add_option("--variant", g_variant, "conflict1 variant")->capture_default_str();
  gen_cmd->add_option("-o,--out", g_out, "Output path (stdout when absent)");

  std::string instance, method, config, solution, log;
  std::optional<double> epsilon;
  auto* solve_cmd = app.add_subcommand("solve", "Solve one instance with one method");
  solve_cmd->add_option("--instance", instance, "Instance JSON")->required();
  solve_cmd->add_option("--method", method, "One of: " + [] {
    std::string s;
    for (const auto& n : cli::method_names()) s += (s.empty() ? "" : ", ") + n;
    return s;
  }())->required();
  solve_cmd->add_option("--epsilon", epsilon, "Override the instance risk level");
  solve_cmd->add_option("--config", config, "Config JSON (see config/defaults.json)");
  solve_cmd->add_option("--solution", solution, "Write the solution JSON here");
  solve_cmd->add_option("--log", log, "Write Benders iteration records (JSON lines) here");

  auto* oracle_cmd = app.add_subcommand("oracle", "Solve by enumerating scenario selections");
  oracle_cmd->add_option("--instance", instance, "Instance JSON")->required();
  oracle_cmd->add_option("--epsilon", epsilon, "Override the instance risk level");
  oracle_cmd->add_option("--config", config, "Config JSON");
  oracle_cmd->add_option("--solution", solution, "Write the solution JSON here");

  auto* validate_cmd = app.add_subcommand("validate", "Check an instance file");
  validate_cmd->add_option("--instance", instance, "Instance JSON")->required();

  auto* bench_cmd = app.add_subcommand("bench", "Run methods over an instance suite");
  std::string b_spec, b_csv;
  std::vector<std::string> b_files;
  std::string b_methods;
  std::vector<double> b_eps;
  int b_jobs = 1;
  bench_cmd->add_option("--spec", b_spec, "Generator spec, e.g. scaled,K=6,count=5,seed=1");
  bench_cmd->add_option("--instances", b_files, "Instance files instead of --spec");
  bench_cmd->add_option("--methods", b_methods, "Comma-separated methods")->required();
  bench_cmd->add_option("--epsilons", b_eps, "Comma-separated risk levels")->delimiter(',');
  bench_cmd->add_option("--config", config, "Config JSON");
  bench_cmd->add_option("--csv", b_csv, "CSV output path (stdout when absent)");
  bench_cmd->add_option("--jobs", b_jobs, "Concurrent cells")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "usage error: " << e.what() << "\n" << app.help();
    return cli::kExitUsage;
  }

  try {
    if (*gen_cmd) {
      const auto inst = generate(g_kind, g_spec, g_eps, g_eps_opt->count() > 0, g_variant);
      if (g_out.empty())
        gen::write_instance(inst, std::cout);
      else
        gen::write_instance(inst, g_out);
      return 0;
    }
    if (*solve_cmd) return solve_one(instance, method, epsilon, config, solution, log);
    if (*oracle_cmd) return solve_one(instance, "oracle", epsilon, config, solution, "");
    if (*validate_cmd) {
      const auto inst = gen::read_instance(instance);
      const auto v = validate_instance(inst);
      for (const auto& e : v) std::cout << e.field << ": " << e.message << "\n";
      if (v.empty()) std::cout << "valid\n";
      return v.empty() ? 0 : cli::kExitError;
    }
    if (*bench_cmd) return bench(b_spec, b_files, b_methods, b_eps, config, b_csv, b_jobs);
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return cli::kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return cli::kExitError;
  }
  return cli::kExitUsage;
}
