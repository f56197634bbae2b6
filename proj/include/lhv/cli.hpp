#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace lhv::cli {

enum ExitCode : int {
  kOk = 0,
  kUsage = 1,
  kNumerical = 2,
  kIo = 3,
};

/// Runs one command line (args[0] is the program name). Data goes to `out`
/// or to --out; the effective-config header also goes to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Radians by default: plain numbers or pi expressions such as "pi/3",
/// "-pi/4", "2pi/3", "0.5*pi". With degrees=true only plain numbers are
/// accepted and converted.
double parse_angle(const std::string& text, bool degrees);

std::vector<double> parse_angle_list(const std::string& text, bool degrees);

}  // namespace lhv::cli
