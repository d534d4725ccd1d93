#include "nilfrac/field_io.hpp"

#include <fstream>
#include <iomanip>
#include <sstream>

#include <json.hpp>

namespace nilfrac {

namespace {

Rational coefficient_from_json(const nlohmann::json& v) {
  if (v.is_string()) return parse_rational(v.get<std::string>());
  if (v.is_number_integer()) return Rational(v.get<long long>());
  if (v.is_number_float()) return parse_rational(v.dump());
  throw Error(ErrorKind::InvalidInput, "coefficient must be a string or a number");
}

BiPoly<Rational> poly_from_json(const nlohmann::json& terms, int trunc) {
  if (!terms.is_array()) throw Error(ErrorKind::InvalidInput, "component must be an array of terms");
  BiPoly<Rational> p(trunc);
  for (const auto& t : terms) {
    if (!t.is_array() || t.size() != 3 || !t[0].is_number_integer() || !t[1].is_number_integer())
      throw Error(ErrorKind::InvalidInput, "term must be [i, j, coefficient]");
    p.add_term(t[0].get<int>(), t[1].get<int>(), coefficient_from_json(t[2]));
  }
  return p;
}

nlohmann::json poly_to_json(const BiPoly<Rational>& p) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& [mon, c] : p.terms()) arr.push_back({mon.i, mon.j, to_string(c)});
  return arr;
}

template <class S>
std::string format_poly(const BiPoly<S>& p, const char* xn, const char* yn) {
  if (p.is_zero()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& [mon, c] : p.terms()) {
    const bool negative = sign(c) < 0;
    const S mag = negative ? S(0) - c : c;
    os << (first ? (negative ? "-" : "") : (negative ? " - " : " + "));
    first = false;
    const bool unit = mag == S(1);
    if (!unit || mon.degree() == 0) os << to_string(mag);
    bool need_star = !unit;
    if (mon.i > 0) {
      if (need_star) os << '*';
      os << xn;
      if (mon.i > 1) os << '^' << mon.i;
      need_star = true;
    }
    if (mon.j > 0) {
      if (need_star) os << '*';
      os << yn;
      if (mon.j > 1) os << '^' << mon.j;
    }
  }
  return os.str();
}

}  // namespace

PlanarVectorField<Rational> parse_field_json(const std::string& text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::InvalidInput, std::string("malformed field JSON: ") + e.what());
  }
  if (!doc.is_object() || !doc.contains("P") || !doc.contains("Q"))
    throw Error(ErrorKind::InvalidInput, "field JSON needs \"P\" and \"Q\"");
  const int trunc = doc.value("trunc", kDefaultTrunc);
  return {poly_from_json(doc["P"], trunc), poly_from_json(doc["Q"], trunc)};
}

PlanarVectorField<Rational> read_field_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::Io, "cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_field_json(ss.str());
}

std::string field_to_json(const PlanarVectorField<Rational>& field) {
  nlohmann::json doc;
  doc["P"] = poly_to_json(field.P);
  doc["Q"] = poly_to_json(field.Q);
  doc["trunc"] = field.trunc_degree();
  return doc.dump();
}

std::string poly_to_string(const BiPoly<Rational>& p, const char* xname, const char* yname) {
  return format_poly(p, xname, yname);
}

std::string poly_to_string(const BiPoly<double>& p, const char* xname, const char* yname) {
  return format_poly(p, xname, yname);
}

void write_orbit_csv(std::ostream& os, const std::vector<Eigen::Vector2d>& points) {
  os << "k,x,y\n" << std::setprecision(17);
  for (std::size_t k = 0; k < points.size(); ++k) os << k << ',' << points[k].x() << ',' << points[k].y() << '\n';
}

std::vector<Eigen::Vector2d> read_orbit_csv(std::istream& is) {
  std::vector<Eigen::Vector2d> pts;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    if (line.empty()) continue;
    if (lineno == 1 && line.find_first_of("kxy") != std::string::npos && line.find_first_of("0123456789") == std::string::npos)
      continue;
    std::stringstream ss(line);
    std::string k, x, y;
    if (!std::getline(ss, k, ',') || !std::getline(ss, x, ',') || !std::getline(ss, y, ','))
      throw Error(ErrorKind::InvalidInput, "orbit CSV line " + std::to_string(lineno) + " needs k,x,y");
    try {
      pts.emplace_back(std::stod(x), std::stod(y));
    } catch (const std::exception&) {
      throw Error(ErrorKind::InvalidInput, "orbit CSV line " + std::to_string(lineno) + " is not numeric");
    }
  }
  return pts;
}

std::vector<Eigen::Vector2d> read_orbit_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::Io, "cannot open " + path);
  return read_orbit_csv(in);
}

}  // namespace nilfrac
