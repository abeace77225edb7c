#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cctype>
#include <complex>
#include <string>
#include <string_view>

#include "tracial/errors.hpp"

namespace tracial {

using Rational = boost::multiprecision::cpp_rational;

inline double to_double(const Rational& q) { return q.convert_to<double>(); }

/// Canonical text: "p" for integers, "p/q" otherwise (q > 0, lowest terms).
inline std::string to_string(const Rational& q) {
  const auto num = boost::multiprecision::numerator(q);
  const auto den = boost::multiprecision::denominator(q);
  if (den == 1) return num.str();
  return num.str() + "/" + den.str();
}

/// Accepts "p", "-p", "p/q" and decimals such as "0.05" or "-1.25".
inline Rational parse_rational(std::string_view text) {
  using boost::multiprecision::cpp_int;
  auto fail = [&] { throw InvalidArgument("not a rational literal: '" + std::string(text) + "'"); };
  if (text.empty()) fail();
  std::size_t pos = 0;
  bool negative = false;
  if (text[0] == '-' || text[0] == '+') {
    negative = text[0] == '-';
    ++pos;
  }
  auto digits = [&](std::size_t from) {
    std::size_t end = from;
    while (end < text.size() && std::isdigit(static_cast<unsigned char>(text[end]))) ++end;
    return end;
  };
  std::size_t int_end = digits(pos);
  if (int_end == pos) fail();
  cpp_int num(std::string(text.substr(pos, int_end - pos)));
  cpp_int den = 1;
  if (int_end < text.size()) {
    if (text[int_end] == '/') {
      std::size_t den_end = digits(int_end + 1);
      if (den_end == int_end + 1 || den_end != text.size()) fail();
      den = cpp_int(std::string(text.substr(int_end + 1, den_end - int_end - 1)));
      if (den == 0) throw InvalidArgument("zero denominator in '" + std::string(text) + "'");
    } else if (text[int_end] == '.') {
      std::size_t frac_end = digits(int_end + 1);
      if (frac_end == int_end + 1 || frac_end != text.size()) fail();
      for (std::size_t k = int_end + 1; k < frac_end; ++k) {
        num = num * 10 + (text[k] - '0');
        den *= 10;
      }
    } else {
      fail();
    }
  }
  Rational q(num, den);
  return negative ? Rational(-q) : q;
}

/// Exact complex rational used for scalar coefficients inside terms.
struct ComplexRational {
  Rational re{0};
  Rational im{0};

  ComplexRational() = default;
  ComplexRational(Rational r) : re(std::move(r)) {}  // NOLINT(implicit)
  ComplexRational(Rational r, Rational i) : re(std::move(r)), im(std::move(i)) {}

  bool is_real() const { return im == 0; }
  std::complex<double> to_complex() const { return {to_double(re), to_double(im)}; }
  friend bool operator==(const ComplexRational&, const ComplexRational&) = default;
};

}  // namespace tracial
