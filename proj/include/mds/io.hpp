#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <istream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "euler.hpp"

namespace mds {

// 17 significant digits in scientific notation: enough to round-trip any
// double exactly, and a fixed width so equal values print identically.
inline std::string format_float17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.16e", v);
  return std::string(buf);
}

inline std::string int128_to_string(__int128 v) {
  if (v == 0) return "0";
  const bool negative = v < 0;
  unsigned __int128 mag = negative ? -static_cast<unsigned __int128>(v)
                                   : static_cast<unsigned __int128>(v);
  std::string digits;
  while (mag > 0) {
    digits.push_back(static_cast<char>('0' + static_cast<int>(mag % 10)));
    mag /= 10;
  }
  if (negative) digits.push_back('-');
  std::reverse(digits.begin(), digits.end());
  return digits;
}

// Complex literals: "2", "-1.5", "1+2i", "0.5-1i", "2i", "-i".
inline cdouble parse_complex_literal(std::string text) {
  std::erase(text, ' ');
  if (text.empty()) throw std::invalid_argument("empty complex literal");
  auto parse_real = [](const std::string& str) -> double {
    std::size_t consumed = 0;
    const double value = std::stod(str, &consumed);
    if (consumed != str.size())
      throw std::invalid_argument("malformed number '" + str + "'");
    return value;
  };
  if (text.back() != 'i') return cdouble{parse_real(text), 0.0};
  text.pop_back();
  // Split at the last top-level sign that is not an exponent sign.
  std::size_t split = std::string::npos;
  for (std::size_t i = text.size(); i-- > 1;) {
    if ((text[i] == '+' || text[i] == '-') &&
        text[i - 1] != 'e' && text[i - 1] != 'E') {
      split = i;
      break;
    }
  }
  if (split == std::string::npos) {
    if (text.empty() || text == "+") return cdouble{0.0, 1.0};
    if (text == "-") return cdouble{0.0, -1.0};
    return cdouble{0.0, parse_real(text)};
  }
  const std::string real_part = text.substr(0, split);
  std::string imag_part = text.substr(split);
  if (imag_part == "+") imag_part = "1";
  if (imag_part == "-") imag_part = "-1";
  return cdouble{parse_real(real_part), parse_real(imag_part)};
}

inline std::vector<std::string> split_csv(const std::string& text) {
  std::vector<std::string> out;
  std::string token;
  std::istringstream in(text);
  while (std::getline(in, token, ',')) out.push_back(token);
  return out;
}

inline std::vector<cdouble> parse_complex_list(const std::string& text) {
  std::vector<cdouble> out;
  for (const std::string& token : split_csv(text))
    out.push_back(parse_complex_literal(token));
  return out;
}

inline std::vector<int> parse_int_list(const std::string& text) {
  std::vector<int> out;
  for (const std::string& token : split_csv(text)) {
    std::size_t consumed = 0;
    out.push_back(std::stoi(token, &consumed));
    if (consumed != token.size())
      throw std::invalid_argument("malformed integer '" + token + "'");
  }
  return out;
}

inline std::vector<std::uint64_t> parse_uint_list(const std::string& text) {
  std::vector<std::uint64_t> out;
  for (const std::string& token : split_csv(text)) {
    std::size_t consumed = 0;
    out.push_back(std::stoull(token, &consumed));
    if (consumed != token.size())
      throw std::invalid_argument("malformed integer '" + token + "'");
  }
  return out;
}

// RFC-4180 quoting: fields with commas, quotes or newlines get wrapped and
// inner quotes doubled.
inline std::string csv_field(const std::string& field) {
  if (field.find_first_of(",\"\n\r") == std::string::npos) return field;
  std::string quoted = "\"";
  for (char c : field) {
    if (c == '"') quoted += "\"\"";
    else quoted.push_back(c);
  }
  quoted += "\"";
  return quoted;
}

// ---------------------------------------------------------------------------
// Coefficient tables: plain text, one term per line as
//   a_1 a_2 ... a_r coefficient
// with '#' comments. The golden tables under data/ use this format.
// ---------------------------------------------------------------------------

struct CoeffTableEntry {
  ExponentVector a;
  long long c = 0;
};

inline std::vector<CoeffTableEntry> read_coeff_table(std::istream& in) {
  std::vector<CoeffTableEntry> entries;
  std::string line;
  std::size_t width = 0;
  while (std::getline(in, line)) {
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::istringstream fields(line);
    std::vector<long long> numbers;
    long long v = 0;
    while (fields >> v) numbers.push_back(v);
    if (numbers.empty()) continue;
    if (numbers.size() < 2)
      throw std::invalid_argument("coefficient table line needs an exponent vector");
    if (width == 0) width = numbers.size();
    if (numbers.size() != width)
      throw std::invalid_argument("inconsistent arity in coefficient table");
    CoeffTableEntry entry;
    for (std::size_t i = 0; i + 1 < numbers.size(); ++i)
      entry.a.push_back(static_cast<int>(numbers[i]));
    entry.c = numbers.back();
    entries.push_back(std::move(entry));
  }
  return entries;
}

inline std::vector<CoeffTableEntry> read_coeff_table_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open coefficient table " + path);
  return read_coeff_table(in);
}

// Integer-coefficient view of a local factor, for exact comparisons against
// golden tables. Throws when any coefficient is not (numerically) integral.
inline std::vector<CoeffTableEntry> integer_entries(const LocalFactor& factor) {
  std::vector<CoeffTableEntry> entries;
  for (const auto& [a, c] : factor.coeffs) {
    const double rounded = std::round(c.real());
    if (std::abs(c.imag()) > 1e-9 || std::abs(c.real() - rounded) > 1e-9)
      throw std::invalid_argument("local factor has non-integer coefficients");
    entries.push_back({a, static_cast<long long>(rounded)});
  }
  return entries;
}

inline bool same_table(std::vector<CoeffTableEntry> lhs,
                       std::vector<CoeffTableEntry> rhs) {
  auto order = [](const CoeffTableEntry& x, const CoeffTableEntry& y) {
    return x.a != y.a ? x.a < y.a : x.c < y.c;
  };
  std::sort(lhs.begin(), lhs.end(), order);
  std::sort(rhs.begin(), rhs.end(), order);
  if (lhs.size() != rhs.size()) return false;
  for (std::size_t i = 0; i < lhs.size(); ++i)
    if (lhs[i].a != rhs[i].a || lhs[i].c != rhs[i].c) return false;
  return true;
}

}  // namespace mds
