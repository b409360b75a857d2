#include "ccmp/lpkit/lp_text.hpp"

#include <charconv>
#include <cmath>
#include <sstream>

namespace ccmp::lpkit {

namespace {

std::string num(double v) {
  if (v == kInf) return "inf";
  if (v == -kInf) return "-inf";
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

std::string col_name(const LinearProgram& lp, int j) {
  const auto& n = lp.col_names()[j];
  return n.empty() ? "c" + std::to_string(j) : n;
}

std::string row_name(const LinearProgram& lp, int r) {
  const auto& n = lp.row_names()[r];
  return n.empty() ? "r" + std::to_string(r) : n;
}

}  // namespace

void write_lp_text(std::ostream& out, const LinearProgram& lp,
                   const std::vector<char>* integral) {
  out << (lp.sense == ObjSense::kMaximize ? "maximize" : "minimize") << "\n";
  out << "  obj:";
  bool any = false;
  for (int j = 0; j < lp.num_cols(); ++j) {
    if (lp.cost()[j] == 0.0) continue;
    out << ' ' << (lp.cost()[j] < 0 ? "- " : "+ ") << num(std::abs(lp.cost()[j]))
        << ' ' << col_name(lp, j);
    any = true;
  }
  if (lp.objective_offset != 0.0 || !any)
    out << ' ' << (lp.objective_offset < 0 ? "- " : "+ ")
        << num(std::abs(lp.objective_offset));
  out << "\nsubject to\n";
  for (int r = 0; r < lp.num_rows(); ++r) {
    out << "  " << row_name(lp, r) << ':';
    for (int p = lp.row_start()[r]; p < lp.row_start()[r + 1]; ++p) {
      const double a = lp.row_value()[p];
      out << ' ' << (a < 0 ? "- " : "+ ") << num(std::abs(a)) << ' '
          << col_name(lp, lp.row_index()[p]);
    }
    if (lp.row_start()[r] == lp.row_start()[r + 1]) out << " 0";
    switch (lp.row_sense()[r]) {
      case RowSense::kLessEqual: out << " <= "; break;
      case RowSense::kGreaterEqual: out << " >= "; break;
      case RowSense::kEqual: out << " = "; break;
    }
    out << num(lp.rhs()[r]) << '\n';
  }
  out << "bounds\n";
  for (int j = 0; j < lp.num_cols(); ++j)
    out << "  " << num(lp.lower()[j]) << " <= " << col_name(lp, j)
        << " <= " << num(lp.upper()[j]) << '\n';
  if (integral != nullptr) {
    out << "integer\n";
    for (int j = 0; j < lp.num_cols(); ++j)
      if (j < static_cast<int>(integral->size()) && (*integral)[j])
        out << "  " << col_name(lp, j) << '\n';
  }
  out << "end\n";
}

std::string lp_text(const LinearProgram& lp) {
  std::ostringstream s;
  write_lp_text(s, lp);
  return s.str();
}

std::string lp_text(const MipProblem& mip) {
  std::ostringstream s;
  write_lp_text(s, mip.lp, &mip.integral);
  return s.str();
}

}  // namespace ccmp::lpkit
