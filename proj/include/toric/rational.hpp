#ifndef TORIC_RATIONAL_HPP
#define TORIC_RATIONAL_HPP

#include <boost/multiprecision/cpp_int.hpp>
#include <string>
#include <vector>

#include "toric/error.hpp"

namespace toric {

using Rational = boost::multiprecision::cpp_rational;
using BigInt = boost::multiprecision::cpp_int;
using RatVec = std::vector<Rational>;

inline double to_double(const Rational& r) { return r.convert_to<double>(); }

// Parses "p", "p/q" or a decimal like "-0.25" into an exact rational.
Rational rational_from_string(const std::string& s);

std::string rational_to_string(const Rational& r);

// Exact rational from a double (binary expansion, no rounding).
Rational rational_from_double(double x);

inline RatVec rat_vec(std::initializer_list<long> xs) {
  RatVec v;
  for (long x : xs) v.emplace_back(x);
  return v;
}

// Dense Gaussian elimination with partial (nonzero) pivoting over Q.
// Returns false if the matrix is singular.
bool solve_rational_system(std::vector<RatVec> A, RatVec b, RatVec& out);

Rational rational_det(std::vector<RatVec> A);

}  // namespace toric

#endif
