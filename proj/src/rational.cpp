#include "toric/rational.hpp"

#include <cctype>
#include <cmath>
#include <cstdlib>

namespace toric {

Rational rational_from_string(const std::string& s) {
  std::string t;
  for (char c : s)
    if (!std::isspace(static_cast<unsigned char>(c))) t += c;
  if (t.empty()) throw Error(ErrorCode::InvalidInput, "empty rational literal");

  auto slash = t.find('/');
  if (slash != std::string::npos) {
    BigInt p(t.substr(0, slash));
    BigInt q(t.substr(slash + 1));
    if (q == 0) throw Error(ErrorCode::InvalidInput, "zero denominator in '" + s + "'");
    return Rational(p, q);
  }
  auto dot = t.find('.');
  auto exp = t.find_first_of("eE");
  if (dot == std::string::npos && exp == std::string::npos) return Rational(BigInt(t));

  // Decimal literal: mantissa digits over a power of ten, exponent applied after.
  long e10 = 0;
  std::string mant = t;
  if (exp != std::string::npos) {
    e10 = std::strtol(t.c_str() + exp + 1, nullptr, 10);
    mant = t.substr(0, exp);
  }
  dot = mant.find('.');
  std::string digits = mant;
  long frac_len = 0;
  if (dot != std::string::npos) {
    digits = mant.substr(0, dot) + mant.substr(dot + 1);
    frac_len = static_cast<long>(mant.size() - dot - 1);
  }
  if (digits.empty() || digits == "-" || digits == "+")
    throw Error(ErrorCode::InvalidInput, "bad rational literal '" + s + "'");
  Rational r{BigInt(digits)};
  long shift = e10 - frac_len;
  BigInt ten(10);
  if (shift > 0)
    for (long i = 0; i < shift; ++i) r *= ten;
  else
    for (long i = 0; i < -shift; ++i) r /= ten;
  return r;
}

std::string rational_to_string(const Rational& r) {
  if (denominator(r) == 1) return numerator(r).str();
  return numerator(r).str() + "/" + denominator(r).str();
}

Rational rational_from_double(double x) {
  if (!std::isfinite(x)) throw Error(ErrorCode::InvalidInput, "non-finite offset");
  return Rational(x);
}

bool solve_rational_system(std::vector<RatVec> A, RatVec b, RatVec& out) {
  const size_t n = A.size();
  for (size_t col = 0; col < n; ++col) {
    size_t piv = col;
    while (piv < n && A[piv][col] == 0) ++piv;
    if (piv == n) return false;
    std::swap(A[piv], A[col]);
    std::swap(b[piv], b[col]);
    for (size_t r = 0; r < n; ++r) {
      if (r == col || A[r][col] == 0) continue;
      Rational f = A[r][col] / A[col][col];
      for (size_t k = col; k < n; ++k) A[r][k] -= f * A[col][k];
      b[r] -= f * b[col];
    }
  }
  out.assign(n, Rational(0));
  for (size_t i = 0; i < n; ++i) out[i] = b[i] / A[i][i];
  return true;
}

Rational rational_det(std::vector<RatVec> A) {
  const size_t n = A.size();
  Rational det(1);
  for (size_t col = 0; col < n; ++col) {
    size_t piv = col;
    while (piv < n && A[piv][col] == 0) ++piv;
    if (piv == n) return Rational(0);
    if (piv != col) {
      std::swap(A[piv], A[col]);
      det = -det;
    }
    det *= A[col][col];
    for (size_t r = col + 1; r < n; ++r) {
      if (A[r][col] == 0) continue;
      Rational f = A[r][col] / A[col][col];
      for (size_t k = col; k < n; ++k) A[r][k] -= f * A[col][k];
    }
  }
  return det;
}

}  // namespace toric
