#pragma once

#include <complex>
#include <stdexcept>
#include <string>

namespace fmg {

// Argument outside the region where an operation is defined or trusted.
struct domain_error : std::domain_error {
  using std::domain_error::domain_error;
};

// Raised by the oracle outside its guaranteed region; still carries the
// best value it could produce.
struct oracle_domain_error : domain_error {
  std::complex<double> best;
  double error_estimate;
  oracle_domain_error(const std::string& what, std::complex<double> v, double est)
      : domain_error(what), best(v), error_estimate(est) {}
};

struct range_error : std::range_error {
  using std::range_error::range_error;
};

// Iteration failed to converge, singular system, collapsed denominator.
struct numeric_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Malformed grid file.
struct format_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct io_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct usage_error : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

}  // namespace fmg
