#pragma once

#include <complex>
#include <string>
#include <string_view>
#include <vector>

namespace nvk {

/// Parses "a+bi" / "a-bi" (sign mandatory, real part optional only as in
/// "0+1i"). Throws std::invalid_argument with the offending text.
std::complex<double> parse_complex(std::string_view text);

/// Comma-separated list of complex literals.
std::vector<std::complex<double>> parse_complex_list(std::string_view text);

/// Comma-separated list of reals.
std::vector<double> parse_real_list(std::string_view text);

/// Shortest round-trip formatting, e.g. "0+1i", "-0.5-2.25i".
std::string format_complex(std::complex<double> z);
std::string format_real(double x);

}  // namespace nvk
