#include "secantlab/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

namespace secantlab::io {

namespace {

const Json& field(const Json& j, const char* name, const std::string& where) {
  if (!j.is_object()) throw InputError(where + ": expected a JSON object");
  const auto it = j.find(name);
  if (it == j.end()) throw InputError(where + ": missing field '" + name + "'");
  return *it;
}

std::string sub(const std::string& where, const std::string& name) { return where + "." + name; }

std::string at(const std::string& where, std::size_t i) { return where + "[" + std::to_string(i) + "]"; }

double number(const Json& j, const std::string& where) {
  if (!j.is_number()) throw InputError(where + ": expected a number");
  return j.get<double>();
}

int integer(const Json& j, const std::string& where) {
  if (!j.is_number_integer()) throw InputError(where + ": expected an integer");
  return j.get<int>();
}

std::vector<double> number_list(const Json& j, const std::string& where) {
  if (!j.is_array()) throw InputError(where + ": expected an array");
  std::vector<double> out;
  for (std::size_t i = 0; i < j.size(); ++i) out.push_back(number(j[i], at(where, i)));
  return out;
}

CVector complex_vector(const Json& j, const char* re_name, const char* im_name, const std::string& where) {
  const auto re = number_list(field(j, re_name, where), sub(where, re_name));
  const auto im = number_list(field(j, im_name, where), sub(where, im_name));
  if (re.size() != im.size()) throw InputError(where + ": real and imaginary parts differ in length");
  CVector out(static_cast<Eigen::Index>(re.size()));
  for (std::size_t i = 0; i < re.size(); ++i) out(i) = Complex(re[i], im[i]);
  if (!out.allFinite()) throw InputError(where + ": entries must be finite");
  return out;
}

Json complex_list(const CVector& v, const char* re_name, const char* im_name) {
  Json re = Json::array(), im = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    re.push_back(v(i).real());
    im.push_back(v(i).imag());
  }
  return Json{{re_name, re}, {im_name, im}};
}

std::vector<ComplexPoint> point_list(const Json& j, int g, const std::string& where) {
  if (!j.is_array()) throw InputError(where + ": expected an array of points");
  std::vector<ComplexPoint> out;
  for (std::size_t i = 0; i < j.size(); ++i) out.push_back(point_from_json(j[i], g, at(where, i)));
  return out;
}

Json points_json(const std::vector<ComplexPoint>& pts) {
  Json out = Json::array();
  for (const auto& p : pts) out.push_back(point_to_json(p));
  return out;
}

}  // namespace

Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError(path + ": cannot open file");
  try {
    return Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw InputError(path + ": malformed JSON (" + e.what() + ")");
  }
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw InputError(path + ": cannot open for writing");
  out << text;
  if (!out) throw InputError(path + ": write failed");
}

Json to_json(const PeriodMatrix& pm) {
  const int g = pm.genus();
  Json re = Json::array(), im = Json::array();
  for (int i = 0; i < g; ++i) {
    Json rr = Json::array(), ii = Json::array();
    for (int k = 0; k < g; ++k) {
      rr.push_back(pm.tau()(i, k).real());
      ii.push_back(pm.tau()(i, k).imag());
    }
    re.push_back(rr);
    im.push_back(ii);
  }
  return Json{{"g", g}, {"tau_re", re}, {"tau_im", im}};
}

PeriodMatrix period_matrix_from_json(const Json& j, const std::string& where) {
  const int g = integer(field(j, "g", where), sub(where, "g"));
  if (g < 1) throw InputError(sub(where, "g") + ": must be positive");
  CMatrix tau(g, g);
  for (const char* part : {"tau_re", "tau_im"}) {
    const Json& rows = field(j, part, where);
    const std::string w = sub(where, part);
    if (!rows.is_array() || static_cast<int>(rows.size()) != g) throw InputError(w + ": expected " + std::to_string(g) + " rows");
    for (int r = 0; r < g; ++r) {
      const auto row = number_list(rows[r], at(w, r));
      if (static_cast<int>(row.size()) != g) throw InputError(at(w, r) + ": expected " + std::to_string(g) + " entries");
      for (int c = 0; c < g; ++c) {
        if (part[4] == 'r') tau(r, c).real(row[c]);
        else tau(r, c).imag(row[c]);
      }
    }
  }
  if (!tau.allFinite()) throw InputError(where + ": entries must be finite");
  try {
    return make_period_matrix(g, tau);
  } catch (const InputError& e) {
    throw InputError(where + ": " + e.what());
  }
}

Json point_to_json(const CVector& p) { return complex_list(p, "re", "im"); }

ComplexPoint point_from_json(const Json& j, int expected_size, const std::string& where) {
  ComplexPoint p = complex_vector(j, "re", "im", where);
  if (expected_size > 0 && p.size() != expected_size) {
    throw InputError(where + ": expected length " + std::to_string(expected_size));
  }
  return p;
}

Json to_json(const ProjectivePoint& p) { return complex_list(p.coords(), "coords_re", "coords_im"); }

ProjectivePoint projective_from_json(const Json& j, const std::string& where) {
  try {
    return ProjectivePoint::from_coordinates(complex_vector(j, "coords_re", "coords_im", where));
  } catch (const InputError& e) {
    throw InputError(where + ": " + e.what());
  }
}

Json to_json(const SecantConfiguration& cfg) {
  Json out{{"m", cfg.m}, {"points", points_json(cfg.points)}, {"zeta", point_to_json(cfg.zeta)}};
  out["residual"] = cfg.residual ? Json(*cfg.residual) : Json(nullptr);
  out["alpha"] = cfg.alpha ? point_to_json(*cfg.alpha) : Json(nullptr);
  return out;
}

SecantConfiguration secant_from_json(const Json& j, const PeriodMatrix& pm, const std::string& where) {
  const int g = pm.genus();
  SecantConfiguration cfg{pm, integer(field(j, "m", where), sub(where, "m")),
                          point_list(field(j, "points", where), g, sub(where, "points")),
                          point_from_json(field(j, "zeta", where), g, sub(where, "zeta")), std::nullopt,
                          std::nullopt};
  if (const auto it = j.find("residual"); it != j.end() && !it->is_null()) cfg.residual = number(*it, sub(where, "residual"));
  if (const auto it = j.find("alpha"); it != j.end() && !it->is_null()) {
    cfg.alpha = point_from_json(*it, cfg.m + 2, sub(where, "alpha"));
  }
  try {
    cfg.validate();
  } catch (const InputError& e) {
    throw InputError(where + ": " + e.what());
  }
  return cfg;
}

Json to_json(const HierarchyState& st) {
  CVector a1(st.order);
  for (int i = 0; i < st.order; ++i) a1(i) = st.alpha1[i];
  Json aj = Json::array();
  for (const auto& series : st.alphaj) {
    CVector v(st.order);
    for (int i = 0; i < st.order; ++i) v(i) = series[i];
    aj.push_back(point_to_json(v));
  }
  return Json{{"m", st.m},
              {"u", point_to_json(st.u)},
              {"b", points_json(st.b)},
              {"order", st.order},
              {"W", points_json(st.W)},
              {"alpha1", point_to_json(a1)},
              {"alphaj", aj},
              {"per_order_residuals", st.per_order_residuals},
              {"per_order_ranks", st.per_order_ranks}};
}

HierarchyState hierarchy_from_json(const Json& j, const PeriodMatrix& pm, const std::string& where) {
  const int g = pm.genus();
  const int m = integer(field(j, "m", where), sub(where, "m"));
  const int order = integer(field(j, "order", where), sub(where, "order"));
  if (order < 1 || order > kMaxDerivativeOrder) throw InputError(sub(where, "order") + ": must lie in 1..12");
  if (m < 1) throw InputError(sub(where, "m") + ": must be positive");
  HierarchyState st{pm, m, point_from_json(field(j, "u", where), g, sub(where, "u")),
                    point_list(field(j, "b", where), g, sub(where, "b")), order, {}, {}, {}, {}, {}};
  st.W = point_list(field(j, "W", where), g, sub(where, "W"));
  if (static_cast<int>(st.W.size()) != order) throw InputError(sub(where, "W") + ": expected one direction per order");
  const CVector a1 = point_from_json(field(j, "alpha1", where), order, sub(where, "alpha1"));
  st.alpha1.assign(a1.data(), a1.data() + a1.size());
  const Json& aj = field(j, "alphaj", where);
  if (!aj.is_array()) throw InputError(sub(where, "alphaj") + ": expected an array");
  for (std::size_t k = 0; k < aj.size(); ++k) {
    const CVector v = point_from_json(aj[k], order, at(sub(where, "alphaj"), k));
    st.alphaj.emplace_back(v.data(), v.data() + v.size());
  }
  if (const auto it = j.find("per_order_residuals"); it != j.end()) {
    st.per_order_residuals = number_list(*it, sub(where, "per_order_residuals"));
  }
  if (const auto it = j.find("per_order_ranks"); it != j.end()) {
    if (!it->is_array()) throw InputError(sub(where, "per_order_ranks") + ": expected an array");
    for (std::size_t k = 0; k < it->size(); ++k) st.per_order_ranks.push_back(integer((*it)[k], at(sub(where, "per_order_ranks"), k)));
  }
  try {
    st.validate();
  } catch (const InputError& e) {
    throw InputError(where + ": " + e.what());
  }
  return st;
}

Json to_json(const PremiseReport& rep) {
  Json lifts = Json::array();
  for (const auto& l : rep.shifted_lifts) lifts.push_back(lift_to_string(l));
  return Json{{"tangency", rep.tangency},
              {"direction", point_to_json(rep.direction)},
              {"shifted", rep.shifted},
              {"shifted_lifts", lifts}};
}

void CsvTable::add_row(std::vector<std::string> row) {
  if (row.size() != header_.size()) throw InputError("CSV row has the wrong number of columns");
  rows_.push_back(std::move(row));
}

std::string CsvTable::str() const {
  std::ostringstream out;
  auto line = [&](const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) out << (i ? "," : "") << cells[i];
    out << "\n";
  };
  line(header_);
  for (const auto& r : rows_) line(r);
  return out.str();
}

std::string format_number(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

}  // namespace secantlab::io
