#pragma once

#include <sstream>
#include <string>
#include <vector>

#include "lhv/cli.hpp"

namespace lhv::testing {

struct CliResult {
  int code = 0;
  std::string out;
  std::string err;
};

inline CliResult run_cli(const std::vector<std::string>& args) {
  std::vector<std::string> full{"lhv"};
  full.insert(full.end(), args.begin(), args.end());
  std::ostringstream out, err;
  const int code = lhv::cli::run(full, out, err);
  return {code, out.str(), err.str()};
}

/// Arguments recovered from the "# lhv ..." header on the first stderr line.
inline std::vector<std::string> header_args(const std::string& err) {
  std::istringstream in(err.substr(0, err.find('\n')));
  std::vector<std::string> words;
  for (std::string w; in >> w;) words.push_back(w);
  // drop "#" and "lhv"
  return {words.begin() + 2, words.end()};
}

}  // namespace lhv::testing
