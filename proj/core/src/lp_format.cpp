#include "deafs/lp_format.hpp"

#include <fstream>
#include <map>
#include <ostream>
#include <sstream>

#include "deafs/errors.hpp"

namespace deafs::milp {

namespace {

std::string number(double v) {
  std::ostringstream s;
  s.precision(15);
  s << v;
  return s.str();
}

void write_term(std::ostream& out, double coef, const std::string& name, bool& first) {
  if (coef == 0.0) return;
  if (first) {
    out << (coef < 0 ? " - " : " ");
  } else {
    out << (coef < 0 ? " - " : " + ");
  }
  out << number(std::abs(coef)) << ' ' << name;
  first = false;
}

void write_bound(std::ostream& out, double v) {
  if (v == kInfinity) {
    out << "+inf";
  } else if (v == -kInfinity) {
    out << "-inf";
  } else {
    out << number(v);
  }
}

}  // namespace

void write_lp(std::ostream& out, const MilpModel& model) {
  const auto& vars = model.variables();
  out << (model.sense() == Sense::Maximize ? "Maximize" : "Minimize") << "\n obj:";
  bool first = true;
  for (std::size_t j = 0; j < vars.size(); ++j) write_term(out, model.objective()[j], vars[j].name, first);

  // weight * (A - sum c_i v_i)^2 with A = target - constant.
  double constant = model.objective_offset();
  std::map<std::pair<int, int>, double> quad;
  std::map<int, double> linear;
  for (const auto& q : model.quadratic_terms()) {
    const double a = q.target - q.constant;
    constant += q.weight * a * a;
    for (const auto& t : q.terms) linear[t.var] -= 2.0 * q.weight * a * t.coef;
    for (const auto& s : q.terms) {
      for (const auto& t : q.terms) {
        if (s.var > t.var) continue;
        const double factor = s.var == t.var ? 1.0 : 2.0;
        quad[{s.var, t.var}] += q.weight * factor * s.coef * t.coef;
      }
    }
  }
  for (const auto& [j, c] : linear) write_term(out, c, vars[static_cast<std::size_t>(j)].name, first);
  if (!quad.empty()) {
    out << (first ? " [" : " + [");
    bool inner = true;
    for (const auto& [key, c] : quad) {
      const auto& a = vars[static_cast<std::size_t>(key.first)].name;
      const auto& b = vars[static_cast<std::size_t>(key.second)].name;
      write_term(out, 2.0 * c, key.first == key.second ? a + " ^ 2" : a + " * " + b, inner);
    }
    out << " ] / 2";
    first = false;
  }
  if (constant != 0.0) {
    out << (constant < 0 ? " - " : " + ") << number(std::abs(constant));
  } else if (first) {
    out << " 0 " << (vars.empty() ? "" : vars.front().name);
  }
  out << "\nSubject To\n";
  int row = 0;
  for (const auto& c : model.constraints()) {
    out << ' ' << (c.name.empty() ? "c" + std::to_string(row) : c.name) << ":";
    bool f = true;
    for (const auto& t : c.terms) write_term(out, t.coef, vars[static_cast<std::size_t>(t.var)].name, f);
    if (f) out << " 0 " << (vars.empty() ? "" : vars.front().name);
    switch (c.relation) {
      case Relation::LessEqual: out << " <= "; break;
      case Relation::GreaterEqual: out << " >= "; break;
      case Relation::Equal: out << " = "; break;
    }
    out << number(c.rhs) << '\n';
    ++row;
  }
  out << "Bounds\n";
  for (const auto& v : vars) {
    if (v.kind == VarKind::Binary && v.lower == 0.0 && v.upper == 1.0) continue;
    if (v.lower == -kInfinity && v.upper == kInfinity) {
      out << ' ' << v.name << " free\n";
      continue;
    }
    out << ' ';
    write_bound(out, v.lower);
    out << " <= " << v.name << " <= ";
    write_bound(out, v.upper);
    out << '\n';
  }
  bool any_binary = false;
  for (const auto& v : vars) {
    if (v.kind != VarKind::Binary) continue;
    if (!any_binary) out << "Binaries\n";
    any_binary = true;
    out << ' ' << v.name << '\n';
  }
  out << "End\n";
}

void write_lp_file(const std::string& path, const MilpModel& model) {
  std::ofstream out(path);
  if (!out) throw DataError(DataErrorKind::Io, "cannot write " + path);
  write_lp(out, model);
}

}  // namespace deafs::milp
