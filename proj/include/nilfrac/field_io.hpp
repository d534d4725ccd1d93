#pragma once

// JSON vector-field documents and orbit CSV files.

#include <iosfwd>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "nilfrac/bipoly.hpp"

namespace nilfrac {

/// {"P": [[i, j, "num/den"], ...], "Q": [...], "trunc": 12}. Coefficients may
/// also be JSON integers or finite decimals; both are read exactly.
PlanarVectorField<Rational> parse_field_json(const std::string& text);
PlanarVectorField<Rational> read_field_json(const std::string& path);
std::string field_to_json(const PlanarVectorField<Rational>& field);

/// Human-readable polynomial, e.g. "x^2 - 3/2*x*y^2".
std::string poly_to_string(const BiPoly<Rational>& p, const char* xname = "x", const char* yname = "y");
std::string poly_to_string(const BiPoly<double>& p, const char* xname = "x", const char* yname = "y");

/// Columns k,x,y.
void write_orbit_csv(std::ostream& os, const std::vector<Eigen::Vector2d>& points);
std::vector<Eigen::Vector2d> read_orbit_csv(std::istream& is);
std::vector<Eigen::Vector2d> read_orbit_csv(const std::string& path);

}  // namespace nilfrac
