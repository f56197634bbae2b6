#pragma once

#include <stdexcept>
#include <string>

namespace lhv {

/// A numerical contract was broken (e.g. an acos argument far outside [-1, 1]).
/// Always indicates a bug in branch selection or a corrupted input, never a
/// recoverable condition.
class ContractError : public std::runtime_error {
 public:
  explicit ContractError(const std::string& what) : std::runtime_error(what) {}
};

/// Reading or writing an external file failed.
class IoError : public std::runtime_error {
 public:
  explicit IoError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace lhv
