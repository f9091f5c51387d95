// Copyright 2026 The spikelab Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <gmpxx.h>

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

namespace spikelab {

/// Arbitrary-precision rational. All combinatorial sums stay in this type until
/// a value is reported.
using ExactScalar = mpq_class;
using BigInt = mpz_class;

/// Parses "p/q" or an integer "p". Decimal notation is rejected so that callers
/// rationalize floating inputs explicitly.
inline ExactScalar parse_rational(std::string_view text) {
  std::string s(text);
  if (s.empty() || s.find_first_not_of("0123456789/+-") != std::string::npos ||
      s.find('/') != s.rfind('/')) {
    throw std::invalid_argument("not a rational p/q: '" + s + "'");
  }
  ExactScalar q;
  if (q.set_str(s, 10) != 0) {
    throw std::invalid_argument("not a rational p/q: '" + s + "'");
  }
  if (q.get_den() == 0) {
    throw std::invalid_argument("zero denominator: '" + s + "'");
  }
  q.canonicalize();
  return q;
}

/// Parses "p/q" or a plain decimal such as "1.5" or "2.5e-1" as the exact
/// rational it denotes (1.5 -> 3/2), without passing through a double.
inline ExactScalar parse_exact_decimal(std::string_view text) {
  const std::string s(text);
  if (s.find('/') != std::string::npos) return parse_rational(s);
  std::size_t i = 0;
  std::string digits;
  bool negative = false;
  if (i < s.size() && (s[i] == '+' || s[i] == '-')) negative = s[i++] == '-';
  long scale = 0;
  bool any = false, dot = false;
  for (; i < s.size() && s[i] != 'e' && s[i] != 'E'; ++i) {
    if (s[i] == '.' && !dot) {
      dot = true;
    } else if (s[i] >= '0' && s[i] <= '9') {
      digits += s[i];
      any = true;
      if (dot) --scale;
    } else {
      throw std::invalid_argument("not a decimal number: '" + s + "'");
    }
  }
  if (!any) throw std::invalid_argument("not a decimal number: '" + s + "'");
  if (i < s.size()) {
    const std::string ex = s.substr(i + 1);
    std::size_t used = 0;
    long e = 0;
    try {
      e = std::stol(ex, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (ex.empty() || used != ex.size()) throw std::invalid_argument("bad exponent in '" + s + "'");
    scale += e;
  }
  ExactScalar q(BigInt(digits, 10));
  BigInt ten_pow;
  mpz_ui_pow_ui(ten_pow.get_mpz_t(), 10, static_cast<unsigned long>(scale < 0 ? -scale : scale));
  if (scale >= 0) {
    q *= ten_pow;
  } else {
    q /= ten_pow;
  }
  q.canonicalize();
  return negative ? ExactScalar(-q) : q;
}

/// p/q in canonical form (GMP requires canonical operands).
inline ExactScalar make_rational(unsigned long p, unsigned long q) {
  if (q == 0) throw std::invalid_argument("zero denominator");
  ExactScalar r(p, q);
  r.canonicalize();
  return r;
}

inline std::string to_string(const ExactScalar& q) { return q.get_str(10); }

/// Natural log of a positive rational, accurate for values far outside the
/// double range.
inline double log_of(const ExactScalar& q) {
  if (sgn(q) <= 0) {
    throw std::domain_error("log of non-positive rational");
  }
  auto log_z = [](const BigInt& z) {
    long exp = 0;
    const double mant = mpz_get_d_2exp(&exp, z.get_mpz_t());
    return std::log(mant) + static_cast<double>(exp) * std::log(2.0);
  };
  return log_z(q.get_num()) - log_z(q.get_den());
}

/// Nearest-ish double (mpq_get_d truncates); +inf past the double range.
inline double to_double(const ExactScalar& q) {
  if (sgn(q) != 0 && std::abs(log_of(abs(q))) > 709.0) {
    const double mag = log_of(abs(q)) > 0 ? HUGE_VAL : 0.0;
    return sgn(q) < 0 ? -mag : mag;
  }
  return q.get_d();
}

inline BigInt factorial(unsigned long k) {
  BigInt r;
  mpz_fac_ui(r.get_mpz_t(), k);
  return r;
}

inline BigInt binomial(unsigned long n, unsigned long k) {
  BigInt r;
  mpz_bin_uiui(r.get_mpz_t(), n, k);
  return r;
}

inline ExactScalar power(const ExactScalar& base, unsigned long e) {
  BigInt num, den;
  mpz_pow_ui(num.get_mpz_t(), base.get_num_mpz_t(), e);
  mpz_pow_ui(den.get_mpz_t(), base.get_den_mpz_t(), e);
  ExactScalar r(num, den);
  r.canonicalize();
  return r;
}

/// Decimal scientific notation with exactly `digits` significant digits,
/// rounded half-up, e.g. "1.25000000000000000000000000000e+00".
inline std::string to_decimal_string(const ExactScalar& value, int digits = 30) {
  if (digits < 1) {
    throw std::invalid_argument("digits must be positive");
  }
  if (sgn(value) == 0) {
    return "0." + std::string(static_cast<std::size_t>(digits - 1), '0') + "e+00";
  }
  ExactScalar a = abs(value);
  // Estimate the decimal exponent, then correct by at most one in either direction.
  long e10 = static_cast<long>(std::floor(log_of(a) / std::log(10.0)));
  auto scaled_integer = [&](long e) {
    // round(a * 10^(digits-1-e)) as an integer.
    const long shift = digits - 1 - e;
    BigInt p;
    mpz_ui_pow_ui(p.get_mpz_t(), 10, static_cast<unsigned long>(shift >= 0 ? shift : -shift));
    ExactScalar s = shift >= 0 ? ExactScalar(a * p) : ExactScalar(a / p);
    BigInt rounded = (2 * s.get_num() + s.get_den()) / (2 * s.get_den());
    return rounded;
  };
  BigInt lower, upper;
  mpz_ui_pow_ui(lower.get_mpz_t(), 10, static_cast<unsigned long>(digits - 1));
  mpz_ui_pow_ui(upper.get_mpz_t(), 10, static_cast<unsigned long>(digits));
  BigInt m = scaled_integer(e10);
  for (int guard = 0; guard < 4 && (m < lower || m >= upper); ++guard) {
    e10 += m >= upper ? 1 : -1;
    m = scaled_integer(e10);
  }
  std::string mant = m.get_str(10);
  std::string out = sgn(value) < 0 ? "-" : "";
  out += mant.substr(0, 1);
  if (digits > 1) {
    out += "." + mant.substr(1);
  }
  out += e10 < 0 ? "e-" : "e+";
  const std::string ex = std::to_string(e10 < 0 ? -e10 : e10);
  out += (ex.size() < 2 ? "0" : "") + ex;
  return out;
}

}  // namespace spikelab
