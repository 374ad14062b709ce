#pragma once

#include <string>

#include "primesphere/lattice.hpp"
#include "primesphere/norms.hpp"
#include "primesphere/operators.hpp"

namespace psph {

// Shortest text representation that round-trips a double exactly.
std::string format_double(double v);

// Point lists: one point per row, columns x1..xn,weight.
std::string to_csv(const PrimeSphere& sphere);
std::string to_json(const PrimeSphere& sphere);

// Lattice functions: {point: value} as JSON, x1..xn,re,im as CSV.
std::string to_csv(const LatticeFunction& f);
std::string to_json(const LatticeFunction& f);

std::string to_json(const RateFit& fit);

}  // namespace psph
