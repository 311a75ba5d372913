#include "nvk/complex_format.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <stdexcept>
#include <string>

namespace nvk {

namespace {

[[noreturn]] void bad_literal(std::string_view text) {
  throw std::invalid_argument("malformed complex literal '" + std::string(text) + "' (expected a+bi)");
}

bool parse_double(std::string_view s, double& out) {
  if (s.empty()) return false;
  if (s.front() == '+') s.remove_prefix(1);
  const char* first = s.data();
  const char* last = s.data() + s.size();
  const auto res = std::from_chars(first, last, out);
  return res.ec == std::errc() && res.ptr == last && std::isfinite(out);
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
  return s;
}

}  // namespace

std::complex<double> parse_complex(std::string_view text) {
  const std::string_view s = trim(text);
  if (s.size() < 4 || s.back() != 'i') bad_literal(text);
  // The imaginary sign is the last '+' or '-' not directly following an
  // exponent marker and not at position 0.
  std::size_t split = std::string_view::npos;
  for (std::size_t p = s.size() - 1; p-- > 1;) {
    if ((s[p] == '+' || s[p] == '-') && s[p - 1] != 'e' && s[p - 1] != 'E') {
      split = p;
      break;
    }
  }
  if (split == std::string_view::npos) bad_literal(text);
  double re = 0.0;
  double im = 0.0;
  if (!parse_double(s.substr(0, split), re)) bad_literal(text);
  const std::string_view imag = s.substr(split + 1, s.size() - split - 2);
  if (!parse_double(imag, im)) bad_literal(text);
  if (s[split] == '-') im = -im;
  return {re, im};
}

std::vector<std::complex<double>> parse_complex_list(std::string_view text) {
  std::vector<std::complex<double>> out;
  std::size_t start = 0;
  while (start <= text.size()) {
    const std::size_t comma = text.find(',', start);
    const std::size_t end = comma == std::string_view::npos ? text.size() : comma;
    out.push_back(parse_complex(text.substr(start, end - start)));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

std::vector<double> parse_real_list(std::string_view text) {
  std::vector<double> out;
  std::size_t start = 0;
  while (start <= text.size()) {
    const std::size_t comma = text.find(',', start);
    const std::size_t end = comma == std::string_view::npos ? text.size() : comma;
    double v = 0.0;
    if (!parse_double(trim(text.substr(start, end - start)), v)) {
      throw std::invalid_argument("malformed number list '" + std::string(text) + "'");
    }
    out.push_back(v);
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

std::string format_real(double x) {
  if (x == 0.0) x = 0.0;  // drop the sign of -0
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

std::string format_complex(std::complex<double> z) {
  const double im = z.imag() == 0.0 ? 0.0 : z.imag();
  std::string s = format_real(z.real());
  s += std::signbit(im) ? '-' : '+';
  s += format_real(std::abs(im));
  s += 'i';
  return s;
}

}  // namespace nvk
