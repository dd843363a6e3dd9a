// Part of fracwave, released under the MIT license; see LICENSE at the
// repository root.
//
// Error taxonomy shared by the library and the command-line tool.  Each
// category maps to a distinct process exit code so scripted callers can
// distinguish "your input is malformed" from "the computation went bad"
// from "the disk said no".
#pragma once

#include <stdexcept>
#include <string>

namespace fracwave {

// Invalid or inconsistent user-supplied configuration.  CLI exit code 2.
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

// Numerical failure at run time: divergence detected, factorization
// breakdown, stability guard violated.  CLI exit code 3.
class NumericalError : public std::runtime_error {
 public:
  explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

// Filesystem failure: unreadable config, unwritable output.  CLI exit code 4.
class IoError : public std::runtime_error {
 public:
  explicit IoError(const std::string& what) : std::runtime_error(what) {}
};

inline constexpr int exit_success = 0;
inline constexpr int exit_config_error = 2;
inline constexpr int exit_numerical_error = 3;
inline constexpr int exit_io_error = 4;

}  // namespace fracwave
