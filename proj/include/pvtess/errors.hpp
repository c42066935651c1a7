#ifndef PVTESS_ERRORS_HPP
#define PVTESS_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace pvtess {

// A configuration value is malformed or out of range; the message names the
// offending field. CLI maps this to exit code 2.
struct config_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// The configuration was valid but the requested computation rejects the data
// (empty certified set, all replicas censored, ...). CLI exit code 3.
struct rejection_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace pvtess

#endif  // PVTESS_ERRORS_HPP
