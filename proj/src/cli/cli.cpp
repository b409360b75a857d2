#include "ccmp/cli/cli.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <map>
#include <sstream>

#include <json.hpp>

#include "ccmp/errors.hpp"
#include "ccmp/formulate/formulate.hpp"
#include "ccmp/gen/generators.hpp"

namespace ccmp::cli {

using nlohmann::json;

namespace {

using Clock = std::chrono::steady_clock;

const std::vector<std::pair<std::string, Method>> kPlain{
    {"extensive-bigm", Method::kExtensiveBigM},
    {"extensive-mibp", Method::kExtensiveMibp},
    {"strengthened-rhs", Method::kStrengthenedRhs},
    {"strengthened-recourse", Method::kStrengthenedRecourse},
    {"sp", Method::kSp},
    {"small-m", Method::kSmallM},
    {"oracle", Method::kOracle},
};

const std::vector<benders::Variant> kVariants{
    benders::Variant::kBD0, benders::Variant::kBD1, benders::Variant::kBD2,
    benders::Variant::kBD3, benders::Variant::kBD4, benders::Variant::kBD5,
    benders::Variant::kBD6, benders::Variant::kBD7, benders::Variant::kBD8,
    benders::Variant::kBD1J, benders::Variant::kBD1RJ};

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

json number(double v) {
  if (std::isnan(v)) return nullptr;
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return v;
}

void fill_formulation(RunOutcome& out, const CcmpInstance& inst,
                      const formulate::BuiltFormulation& built, const RunConfig& cfg) {
  lpkit::Limits lim;
  lim.time_seconds = cfg.time_limit;
  const auto fr = formulate::solve_formulation(inst, built, lim, cfg.mip_gap);
  out.status = fr.status;
  out.row.lb = fr.status.tag == StatusTag::kInfeasible ? kInf : fr.bound;
  out.row.ub = fr.objective;
  out.row.objective = fr.has_solution ? fr.objective : kInf;
  out.row.iterations = fr.raw.nodes;
  out.has_solution = fr.has_solution;
  out.solution = fr.solution;
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string q = "\"";
  for (char ch : s) q += ch == '"' ? std::string("\"\"") : std::string(1, ch);
  return q + "\"";
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char ch = line[i];
    if (quoted) {
      if (ch == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        cur += '"';
        ++i;
      } else if (ch == '"') {
        quoted = false;
      } else {
        cur += ch;
      }
    } else if (ch == '"') {
      quoted = true;
    } else if (ch == ',') {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += ch;
    }
  }
  out.push_back(cur);
  return out;
}

double parse_number(const std::string& s, const std::string& field) {
  if (s == "inf") return kInf;
  if (s == "-inf") return -kInf;
  if (s == "nan") return std::nan("");
  double v = 0;
  const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || p != s.data() + s.size()) throw SchemaError(field, "not a number: " + s);
  return v;
}

std::string fixed(double v, int prec) {
  if (!std::isfinite(v)) return v > 0 ? "inf" : (v < 0 ? "-inf" : "-");
  std::ostringstream s;
  s << std::fixed << std::setprecision(prec) << v;
  return s.str();
}

gen::XKind parse_x_kind(const std::string& s) {
  if (s == "binary") return gen::XKind::kBinary;
  if (s == "integer") return gen::XKind::kInteger;
  if (s == "continuous") return gen::XKind::kContinuous;
  if (s == "mixed") return gen::XKind::kMixed;
  throw SchemaError("x_kind", "expected binary, integer, continuous or mixed");
}

}  // namespace

std::string MethodId::name() const {
  if (method == Method::kBenders) return benders::to_string(variant);
  for (const auto& [n, m] : kPlain)
    if (m == method) return n;
  return "?";
}

std::optional<MethodId> parse_method(const std::string& name) {
  for (const auto& [n, m] : kPlain)
    if (n == name) return MethodId{m};
  if (const auto v = benders::parse_variant(name)) return MethodId{Method::kBenders, *v};
  return std::nullopt;
}

std::vector<std::string> method_names() {
  std::vector<std::string> out;
  for (const auto& [n, m] : kPlain)
    if (m != Method::kOracle) out.push_back(n);
  for (auto v : kVariants) out.emplace_back(benders::to_string(v));
  out.emplace_back("oracle");
  return out;
}

benders::BendersConfig RunConfig::benders(benders::Variant v) const {
  benders::BendersConfig c;
  c.variant = v;
  c.master_gap = master_gap;
  c.sub_gap = sub_gap;
  c.init_gap = init_gap;
  c.init_time_cap = init_time_cap;
  c.time_limit = time_limit;
  c.small_M = small_M;
  c.big_M = big_M;
  c.mccormick.fallback = product_bound;
  c.mccormick.y_upper = product_bound;
  c.opt_tol = opt_tol;
  c.lb_floor = lb_floor;
  c.max_iterations = max_iterations;
  if (eta_floor) c.eta_floor = *eta_floor;
  return c;
}

void apply_config(RunConfig& cfg, const std::string& json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw SchemaError("byte " + std::to_string(e.byte), e.what());
  }
  if (!j.is_object()) throw SchemaError("(root)", "expected an object");
  auto positive = [](const std::string& key, const json& v) {
    if (!v.is_number()) throw SchemaError(key, "expected a number");
    const double d = v.get<double>();
    if (!(d > 0) || !std::isfinite(d)) throw SchemaError(key, "expected a positive number");
    return d;
  };
  for (const auto& [key, v] : j.items()) {
    if (key == "time_limit") cfg.time_limit = positive(key, v);
    else if (key == "mip_gap") cfg.mip_gap = positive(key, v);
    else if (key == "master_gap") cfg.master_gap = positive(key, v);
    else if (key == "sub_gap") cfg.sub_gap = positive(key, v);
    else if (key == "init_gap") cfg.init_gap = positive(key, v);
    else if (key == "init_time_cap") cfg.init_time_cap = positive(key, v);
    else if (key == "small_M") cfg.small_M = positive(key, v);
    else if (key == "big_M") cfg.big_M = positive(key, v);
    else if (key == "product_bound") cfg.product_bound = positive(key, v);
    else if (key == "opt_tol") cfg.opt_tol = positive(key, v);
    else if (key == "lb_floor") cfg.lb_floor = positive(key, v);
    else if (key == "oracle_gap") cfg.oracle_gap = positive(key, v);
    else if (key == "max_iterations") {
      if (!v.is_number_integer() || v.get<long>() < 1) throw SchemaError(key, "expected a positive integer");
      cfg.max_iterations = v.get<long>();
    } else if (key == "oracle_max_scenarios") {
      if (!v.is_number_integer() || v.get<int>() < 1) throw SchemaError(key, "expected a positive integer");
      cfg.oracle_max_scenarios = v.get<int>();
    } else if (key == "eta_floor") {
      if (v.is_null()) cfg.eta_floor.reset();
      else if (v.is_number()) cfg.eta_floor = v.get<double>();
      else throw SchemaError(key, "expected a number or null");
    } else {
      throw SchemaError(key, "unknown key");
    }
  }
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot read " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  RunConfig cfg;
  apply_config(cfg, ss.str());
  return cfg;
}

std::string config_json(const RunConfig& cfg) {
  nlohmann::ordered_json j;
  j["time_limit"] = cfg.time_limit;
  j["mip_gap"] = cfg.mip_gap;
  j["master_gap"] = cfg.master_gap;
  j["sub_gap"] = cfg.sub_gap;
  j["init_gap"] = cfg.init_gap;
  j["init_time_cap"] = cfg.init_time_cap;
  j["small_M"] = cfg.small_M;
  j["big_M"] = cfg.big_M;
  j["product_bound"] = cfg.product_bound;
  j["opt_tol"] = cfg.opt_tol;
  j["lb_floor"] = cfg.lb_floor;
  j["max_iterations"] = cfg.max_iterations;
  j["oracle_max_scenarios"] = cfg.oracle_max_scenarios;
  j["oracle_gap"] = cfg.oracle_gap;
  j["eta_floor"] = cfg.eta_floor ? json(*cfg.eta_floor) : json(nullptr);
  return j.dump(2);
}

double gap_percent(double lb, double ub, double floor) {
  return 100.0 * benders::benders_gap(lb, ub, floor);
}

RunOutcome run_method(const CcmpInstance& inst, const MethodId& method, const RunConfig& cfg) {
  const auto t0 = Clock::now();
  RunOutcome out;
  out.row.instance = inst.name;
  out.row.method = method.name();
  out.row.epsilon = inst.epsilon;
  switch (method.method) {
    case Method::kExtensiveBigM:
      fill_formulation(out, inst, formulate::build_indicator(inst, cfg.big_M), cfg);
      break;
    case Method::kSmallM:
      fill_formulation(out, inst, formulate::build_indicator(inst, cfg.small_M), cfg);
      break;
    case Method::kExtensiveMibp: {
      formulate::ProductBounds pb;
      pb.fallback = cfg.product_bound;
      pb.y_upper = cfg.product_bound;
      fill_formulation(out, inst, formulate::build_mibp_mccormick(inst, pb), cfg);
      break;
    }
    case Method::kStrengthenedRhs:
      fill_formulation(out, inst,
                       formulate::build_strengthened_rhs(inst, formulate::RhsVariant::kDominant), cfg);
      break;
    case Method::kStrengthenedRecourse: {
      const auto q = formulate::compute_q_star(inst, formulate::QStarMode::kExactMip);
      fill_formulation(out, inst, formulate::build_strengthened_recourse(inst, q), cfg);
      break;
    }
    case Method::kSp:
      fill_formulation(out, inst,
                       formulate::build_fixed_z(inst, std::vector<int>(inst.num_scenarios(), 0)),
                       cfg);
      break;
    case Method::kOracle: {
      lpkit::Limits lim;
      lim.time_seconds = cfg.time_limit;
      const auto r = formulate::oracle_solve(inst, cfg.oracle_max_scenarios, cfg.oracle_gap, lim);
      out.status = r.status;
      out.row.iterations = r.subproblems;
      if (r.status.tag == StatusTag::kOptimal) {
        out.row.lb = out.row.ub = out.row.objective = r.objective;
        out.has_solution = true;
        out.solution = r.solution;
      } else if (r.status.tag == StatusTag::kInfeasible) {
        out.row.lb = kInf;
      }
      break;
    }
    case Method::kBenders: {
      auto bc = cfg.benders(method.variant);
      const auto rep = benders::run(inst, bc);
      out.status = rep.status;
      out.row.lb = rep.status.tag == StatusTag::kInfeasible ? kInf : rep.lb;
      out.row.ub = rep.ub;
      out.row.objective = rep.has_solution ? rep.ub : kInf;
      out.row.iterations = rep.init_iterations + rep.main_iterations;
      out.has_solution = rep.has_solution;
      out.solution = rep.solution;
      for (const auto& r : rep.log) out.log.push_back(r.json_line());
      break;
    }
  }
  if (out.status.tag == StatusTag::kUnbounded) {
    out.row.lb = out.row.ub = out.row.objective = -kInf;
  }
  out.row.status = to_string(out.status.tag);
  out.row.gap_pct = gap_percent(out.row.lb, out.row.ub, cfg.lb_floor);
  out.row.seconds = seconds_since(t0);
  return out;
}

int exit_code(StatusTag tag) {
  switch (tag) {
    case StatusTag::kOptimal:
    case StatusTag::kFeasible:
      return 0;
    case StatusTag::kInfeasible:
      return 2;
    case StatusTag::kTimeLimit:
    case StatusTag::kIterLimit:
      return 3;
    case StatusTag::kUnbounded:
      return 5;
  }
  return kExitError;
}

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  const auto r = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, r.ptr);
}

std::string csv_header() {
  return "instance,method,epsilon,status,objective,lb,ub,gap_pct,iterations,seconds";
}

std::string csv_line(const ReportRow& r) {
  return csv_field(r.instance) + "," + csv_field(r.method) + "," + format_number(r.epsilon) +
         "," + csv_field(r.status) + "," + format_number(r.objective) + "," +
         format_number(r.lb) + "," + format_number(r.ub) + "," + format_number(r.gap_pct) + "," +
         std::to_string(r.iterations) + "," + format_number(r.seconds);
}

ReportRow parse_csv_line(const std::string& line) {
  const auto f = split_csv(line);
  if (f.size() != 10) throw SchemaError("csv", "expected 10 fields, got " + std::to_string(f.size()));
  ReportRow r;
  r.instance = f[0];
  r.method = f[1];
  r.epsilon = parse_number(f[2], "epsilon");
  r.status = f[3];
  r.objective = parse_number(f[4], "objective");
  r.lb = parse_number(f[5], "lb");
  r.ub = parse_number(f[6], "ub");
  r.gap_pct = parse_number(f[7], "gap_pct");
  r.iterations = std::stol(f[8]);
  r.seconds = parse_number(f[9], "seconds");
  return r;
}

std::vector<CellSummary> summarize(const std::vector<ReportRow>& rows) {
  std::vector<CellSummary> cells;
  for (const auto& r : rows) {
    auto it = std::find_if(cells.begin(), cells.end(), [&](const CellSummary& c) {
      return c.method == r.method && c.epsilon == r.epsilon;
    });
    if (it == cells.end()) {
      cells.push_back({r.method, r.epsilon});
      it = cells.end() - 1;
    }
    ++it->runs;
  }
  for (auto& c : cells) {
    double sec = 0, gap = 0;
    int unsolved = 0;
    for (const auto& r : rows) {
      if (r.method != c.method || r.epsilon != c.epsilon) continue;
      if (r.status == to_string(StatusTag::kOptimal)) {
        ++c.solved;
        sec += r.seconds;
      } else if (std::isfinite(r.gap_pct)) {
        ++unsolved;
        gap += r.gap_pct;
      }
    }
    if (c.solved) c.avg_seconds = sec / c.solved;
    if (unsolved) c.avg_gap_pct = gap / unsolved;
  }
  return cells;
}

std::string csv_footer(const std::vector<CellSummary>& cells) {
  std::string out;
  for (const auto& c : cells) {
    const std::string key = csv_field(c.method) + "," + format_number(c.epsilon);
    out += "# solved," + key + "," + std::to_string(c.solved) + "\n";
    out += "avg sec (solved)," + key + "," + format_number(c.avg_seconds) + "\n";
    out += "avg gap (unsolved)," + key + "," + format_number(c.avg_gap_pct) + "\n";
  }
  return out;
}

std::string text_table(const std::vector<ReportRow>& rows) {
  std::vector<double> eps;
  std::vector<std::string> methods, instances;
  for (const auto& r : rows) {
    if (std::find(eps.begin(), eps.end(), r.epsilon) == eps.end()) eps.push_back(r.epsilon);
    if (std::find(methods.begin(), methods.end(), r.method) == methods.end())
      methods.push_back(r.method);
    if (std::find(instances.begin(), instances.end(), r.instance) == instances.end())
      instances.push_back(r.instance);
  }
  std::sort(eps.begin(), eps.end());
  std::size_t w0 = std::string("avg. sec.: S").size();
  for (const auto& i : instances) w0 = std::max(w0, i.size());
  const int wi = 6, ws = 10, wg = 8;
  const int wm = wi + ws + wg;
  std::ostringstream out;
  auto pad = [](const std::string& s, std::size_t w) {
    return s.size() >= w ? s : s + std::string(w - s.size(), ' ');
  };
  auto rpad = [](const std::string& s, std::size_t w) {
    return s.size() >= w ? s : std::string(w - s.size(), ' ') + s;
  };
  const auto cells = summarize(rows);
  for (double e : eps) {
    out << "epsilon = " << format_number(e) << "\n";
    out << pad("", w0);
    for (const auto& m : methods) out << " | " << pad(m, wm);
    out << "\n" << pad("instance", w0);
    for (std::size_t m = 0; m < methods.size(); ++m)
      out << " | " << rpad("itr.", wi) << rpad("sec.", ws) << rpad("g(%)", wg);
    out << "\n";
    for (const auto& inst : instances) {
      out << pad(inst, w0);
      for (const auto& m : methods) {
        const auto it = std::find_if(rows.begin(), rows.end(), [&](const ReportRow& r) {
          return r.instance == inst && r.method == m && r.epsilon == e;
        });
        out << " | ";
        if (it == rows.end()) {
          out << pad("", wm);
          continue;
        }
        std::string g = fixed(it->gap_pct, 2);
        if (it->status == to_string(StatusTag::kInfeasible)) g = "infeas";
        if (it->status == to_string(StatusTag::kUnbounded)) g = "unbdd";
        out << rpad(std::to_string(it->iterations), wi) << rpad(fixed(it->seconds, 2), ws)
            << rpad(g, wg);
      }
      out << "\n";
    }
    auto footer = [&](const std::string& label, auto value) {
      out << pad(label, w0);
      for (const auto& m : methods) {
        const auto it = std::find_if(cells.begin(), cells.end(), [&](const CellSummary& c) {
          return c.method == m && c.epsilon == e;
        });
        out << " | " << pad(it == cells.end() ? "" : value(*it), wm);
      }
      out << "\n";
    };
    footer("# solved (S)", [](const CellSummary& c) { return std::to_string(c.solved); });
    footer("avg. sec.: S", [](const CellSummary& c) { return fixed(c.avg_seconds, 2); });
    footer("avg. gap: U", [](const CellSummary& c) { return fixed(c.avg_gap_pct, 2); });
    out << "\n";
  }
  return out.str();
}

std::string solution_json(const ReportRow& row, const RunOutcome& out) {
  nlohmann::ordered_json j;
  j["instance"] = row.instance;
  j["method"] = row.method;
  j["epsilon"] = row.epsilon;
  j["status"] = row.status;
  j["objective"] = number(row.objective);
  j["lb"] = number(row.lb);
  j["ub"] = number(row.ub);
  if (out.has_solution) {
    j["x"] = out.solution.x;
    j["z"] = out.solution.z;
    nlohmann::ordered_json y = nlohmann::ordered_json::object();
    for (const auto& [k, v] : out.solution.y) y[std::to_string(k)] = v;
    j["y"] = y;
  }
  return j.dump(2);
}

BenchSpec parse_bench_spec(const std::string& text) {
  BenchSpec s;
  std::stringstream ss(text);
  std::string part;
  bool first = true;
  auto to_int = [](const std::string& key, const std::string& v) {
    char* end = nullptr;
    const long x = std::strtol(v.c_str(), &end, 10);
    if (v.empty() || *end != '\0') throw SchemaError(key, "expected an integer: " + v);
    return x;
  };
  while (std::getline(ss, part, ',')) {
    if (first) {
      first = false;
      if (part.find('=') == std::string::npos) {
        s.kind = part;
        continue;
      }
    }
    const auto eq = part.find('=');
    if (eq == std::string::npos) throw SchemaError(part, "expected key=value");
    const std::string key = part.substr(0, eq), v = part.substr(eq + 1);
    if (key == "kind") s.kind = v;
    else if (key == "count") s.count = static_cast<int>(to_int(key, v));
    else if (key == "seed") s.seed = static_cast<std::uint64_t>(to_int(key, v));
    else if (key == "K") s.K = static_cast<int>(to_int(key, v));
    else if (key == "x_kind") s.x_kind = v;
    else if (key == "common_recourse") s.common_recourse = v == "1" || v == "true";
    else if (key == "surgeries") s.surgeries = static_cast<int>(to_int(key, v));
    else if (key == "surgeons") s.surgeons = static_cast<int>(to_int(key, v));
    else if (key == "rooms") s.rooms = static_cast<int>(to_int(key, v));
    else if (key == "group") s.group = v;
    else throw SchemaError(key, "unknown bench spec key");
  }
  static const std::vector<std::string> kinds{"scaled", "T1", "T2", "random", "rhs", "or"};
  if (std::find(kinds.begin(), kinds.end(), s.kind) == kinds.end())
    throw SchemaError("kind", "unknown instance kind " + s.kind);
  if (s.count < 1) throw SchemaError("count", "must be positive");
  if (s.K < 1) throw SchemaError("K", "must be positive");
  if (s.group != "I" && s.group != "II") throw SchemaError("group", "expected I or II");
  parse_x_kind(s.x_kind);
  return s;
}

std::vector<CcmpInstance> bench_instances(const BenchSpec& spec) {
  std::vector<CcmpInstance> out;
  for (int i = 0; i < spec.count; ++i) {
    const std::uint64_t seed = spec.seed + static_cast<std::uint64_t>(i);
    if (spec.kind == "rhs") {
      gen::RhsSpec r;
      r.K = spec.K;
      r.seed = seed;
      out.push_back(gen::random_rhs_instance(r));
    } else if (spec.kind == "or") {
      gen::OrSpec o;
      o.n_surgeries = spec.surgeries;
      o.n_surgeons = spec.surgeons;
      o.n_rooms = spec.rooms;
      o.K = spec.K;
      o.seed = seed;
      if (spec.group != "I" && spec.group != "II") throw SchemaError("group", "expected I or II");
      o.group = spec.group == "I" ? gen::DurationGroup::kI : gen::DurationGroup::kII;
      out.push_back(gen::or_instance(o));
    } else {
      gen::RandomSpec r;
      if (spec.kind == "scaled") {
        r = gen::RandomSpec::scaled(spec.K, seed);
      } else if (spec.kind == "T1") {
        r = gen::RandomSpec::T1(spec.K, parse_x_kind(spec.x_kind), seed);
      } else if (spec.kind == "T2") {
        r = gen::RandomSpec::T2(spec.K, parse_x_kind(spec.x_kind), seed);
      } else {
        r.K = spec.K;
        r.seed = seed;
        r.x_kind = parse_x_kind(spec.x_kind);
      }
      if (r.x_kind == gen::XKind::kMixed && r.n_continuous == 0) r.n_continuous = r.n / 2;
      r.common_recourse = spec.common_recourse;
      out.push_back(gen::random_instance(r));
    }
  }
  return out;
}

}  // namespace ccmp::cli
