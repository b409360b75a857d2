#include "ccmp/gen/io.hpp"

#include <cmath>
#include <fstream>
#include <json.hpp>
#include <sstream>

#include "ccmp/errors.hpp"

namespace ccmp::gen {

using nlohmann::json;

namespace {

constexpr const char* kFormat = "ccmp-instance/1";

std::string num(double v) {
  if (v == kInf) return "\"inf\"";
  if (v == -kInf) return "\"-inf\"";
  if (!std::isfinite(v)) throw Error("cannot serialize NaN");
  return json(v).dump();
}

std::string vec(const std::vector<double>& v) {
  std::string s = "[";
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) s += ", ";
    s += num(v[i]);
  }
  return s + "]";
}

std::string matrix(const SparseMatrix& a, const std::string& indent) {
  std::string s = "{\"rows\": " + std::to_string(a.rows()) +
                  ", \"cols\": " + std::to_string(a.cols()) + ", \"entries\": [";
  const auto t = a.triplets();
  for (std::size_t i = 0; i < t.size(); ++i) {
    s += i ? ",\n" + indent + "  " : "\n" + indent + "  ";
    s += "[" + std::to_string(t[i].row) + ", " + std::to_string(t[i].col) +
         ", " + num(t[i].value) + "]";
  }
  if (!t.empty()) s += "\n" + indent;
  return s + "]}";
}

const char* kind_name(VarKind k) {
  switch (k) {
    case VarKind::kContinuous: return "continuous";
    case VarKind::kBinary: return "binary";
    case VarKind::kInteger: return "integer";
  }
  return "?";
}

const json& field(const json& obj, const std::string& key, const std::string& locus) {
  if (!obj.is_object()) throw SchemaError(locus.empty() ? "document" : locus, "expected an object");
  auto it = obj.find(key);
  if (it == obj.end())
    throw SchemaError(locus.empty() ? key : locus + "." + key, "missing field");
  return *it;
}

std::string join(const std::string& locus, const std::string& key) {
  return locus.empty() ? key : locus + "." + key;
}

double to_double(const json& v, const std::string& locus) {
  if (v.is_number()) {
    const double d = v.get<double>();
    if (std::isnan(d)) throw SchemaError(locus, "NaN");
    return d;
  }
  if (v.is_string()) {
    const auto& s = v.get_ref<const std::string&>();
    if (s == "inf") return kInf;
    if (s == "-inf") return -kInf;
    throw SchemaError(locus, "not a number: " + s);
  }
  throw SchemaError(locus, "expected a number");
}

double finite(const json& v, const std::string& locus) {
  const double d = to_double(v, locus);
  if (!std::isfinite(d)) throw SchemaError(locus, "must be finite");
  return d;
}

int to_int(const json& v, const std::string& locus) {
  if (!v.is_number_integer()) throw SchemaError(locus, "expected an integer");
  const auto i = v.get<long long>();
  if (i < 0 || i > std::numeric_limits<int>::max())
    throw SchemaError(locus, "out of range");
  return static_cast<int>(i);
}

std::vector<double> read_vec(const json& obj, const std::string& key,
                             const std::string& locus, std::size_t size) {
  const std::string here = join(locus, key);
  const json& v = field(obj, key, locus);
  if (!v.is_array()) throw SchemaError(here, "expected an array");
  if (v.size() != size)
    throw SchemaError(here, "expected " + std::to_string(size) + " entries, got " +
                                std::to_string(v.size()));
  std::vector<double> out;
  for (std::size_t i = 0; i < v.size(); ++i)
    out.push_back(finite(v[i], here + "[" + std::to_string(i) + "]"));
  return out;
}

SparseMatrix read_matrix(const json& obj, const std::string& key,
                         const std::string& locus, int rows, int cols) {
  const std::string here = join(locus, key);
  const json& v = field(obj, key, locus);
  const int r = to_int(field(v, "rows", here), here + ".rows");
  const int c = to_int(field(v, "cols", here), here + ".cols");
  if (r != rows || c != cols)
    throw SchemaError(here, "expected " + std::to_string(rows) + "x" +
                                std::to_string(cols) + ", got " + std::to_string(r) +
                                "x" + std::to_string(c));
  const json& e = field(v, "entries", here);
  if (!e.is_array()) throw SchemaError(here + ".entries", "expected an array");
  std::vector<Triplet> t;
  for (std::size_t i = 0; i < e.size(); ++i) {
    const std::string at = here + ".entries[" + std::to_string(i) + "]";
    if (!e[i].is_array() || e[i].size() != 3)
      throw SchemaError(at, "expected [row, col, value]");
    const int ri = to_int(e[i][0], at);
    const int ci = to_int(e[i][1], at);
    if (ri >= r || ci >= c) throw SchemaError(at, "index out of range");
    t.push_back({ri, ci, finite(e[i][2], at)});
  }
  return SparseMatrix::from_triplets(r, c, std::move(t));
}

}  // namespace

void write_instance(const CcmpInstance& inst, std::ostream& out) {
  out << "{\n";
  out << "  \"format\": \"" << kFormat << "\",\n";
  out << "  \"name\": " << json(inst.name).dump() << ",\n";
  out << "  \"epsilon\": " << num(inst.epsilon) << ",\n";
  out << "  \"n\": " << inst.n() << ",\n";
  out << "  \"m\": " << inst.m << ",\n";
  out << "  \"c\": " << vec(inst.c) << ",\n";
  out << "  \"x_specs\": [";
  for (int j = 0; j < inst.n(); ++j) {
    const VarSpec& s = inst.x_specs[j];
    out << (j ? ",\n    " : "\n    ") << "[\"" << kind_name(s.kind) << "\", "
        << num(s.lower) << ", " << num(s.upper) << "]";
  }
  out << (inst.n() ? "\n  ],\n" : "],\n");
  out << "  \"A\": " << matrix(inst.A, "  ") << ",\n";
  out << "  \"b\": " << vec(inst.b) << ",\n";
  out << "  \"scenarios\": [";
  for (int k = 0; k < inst.num_scenarios(); ++k) {
    const Scenario& s = inst.scenarios[k];
    out << (k ? ",\n" : "\n") << "    {\n";
    out << "      \"prob\": " << num(s.prob) << ",\n";
    out << "      \"G\": " << matrix(s.G, "      ") << ",\n";
    out << "      \"H\": " << matrix(s.H, "      ") << ",\n";
    out << "      \"h\": " << vec(s.h) << ",\n";
    out << "      \"f\": " << vec(s.f) << "\n";
    out << "    }";
  }
  out << (inst.num_scenarios() ? "\n  ]\n" : "]\n");
  out << "}\n";
}

std::string instance_text(const CcmpInstance& inst) {
  std::ostringstream out;
  write_instance(inst, out);
  return out.str();
}

void write_instance(const CcmpInstance& inst, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot open " + path + " for writing");
  write_instance(inst, out);
  if (!out) throw Error("write failed: " + path);
}

CcmpInstance parse_instance(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    const auto end = std::min<std::size_t>(e.byte, text.size());
    const long line = 1 + std::count(text.begin(), text.begin() + static_cast<long>(end), '\n');
    throw SchemaError("line " + std::to_string(line), e.what());
  }
  const json& fmt = field(doc, "format", "");
  if (!fmt.is_string() || fmt.get<std::string>() != kFormat)
    throw SchemaError("format", std::string("expected \"") + kFormat + "\"");

  CcmpInstance inst;
  const json& name = field(doc, "name", "");
  if (!name.is_string()) throw SchemaError("name", "expected a string");
  inst.name = name.get<std::string>();
  inst.epsilon = finite(field(doc, "epsilon", ""), "epsilon");
  const int n = to_int(field(doc, "n", ""), "n");
  inst.m = to_int(field(doc, "m", ""), "m");
  inst.c = read_vec(doc, "c", "", n);

  const json& specs = field(doc, "x_specs", "");
  if (!specs.is_array() || specs.size() != static_cast<std::size_t>(n))
    throw SchemaError("x_specs", "expected " + std::to_string(n) + " entries");
  for (int j = 0; j < n; ++j) {
    const std::string at = "x_specs[" + std::to_string(j) + "]";
    const json& s = specs[j];
    if (!s.is_array() || s.size() != 3 || !s[0].is_string())
      throw SchemaError(at, "expected [kind, lower, upper]");
    VarSpec v;
    const auto kind = s[0].get<std::string>();
    if (kind == "continuous") v.kind = VarKind::kContinuous;
    else if (kind == "binary") v.kind = VarKind::kBinary;
    else if (kind == "integer") v.kind = VarKind::kInteger;
    else throw SchemaError(at, "unknown kind " + kind);
    v.lower = to_double(s[1], at);
    v.upper = to_double(s[2], at);
    inst.x_specs.push_back(v);
  }

  const json& a = field(doc, "A", "");
  const int rows = to_int(field(a, "rows", "A"), "A.rows");
  inst.A = read_matrix(doc, "A", "", rows, n);
  inst.b = read_vec(doc, "b", "", rows);

  const json& sc = field(doc, "scenarios", "");
  if (!sc.is_array()) throw SchemaError("scenarios", "expected an array");
  int srows = -1;
  for (std::size_t k = 0; k < sc.size(); ++k) {
    const std::string at = "scenarios[" + std::to_string(k) + "]";
    Scenario s;
    s.prob = finite(field(sc[k], "prob", at), at + ".prob");
    const int r = to_int(field(field(sc[k], "G", at), "rows", at + ".G"), at + ".G.rows");
    if (srows < 0) srows = r;
    s.G = read_matrix(sc[k], "G", at, srows, n);
    s.H = read_matrix(sc[k], "H", at, srows, inst.m);
    s.h = read_vec(sc[k], "h", at, srows);
    s.f = read_vec(sc[k], "f", at, inst.m);
    inst.scenarios.push_back(std::move(s));
  }
  return inst;
}

CcmpInstance read_instance(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_instance(buf.str());
}

}  // namespace ccmp::gen
