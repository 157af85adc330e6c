#ifndef TVPSV_ERRORS_HPP
#define TVPSV_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace tvpsv {

// Bad or inconsistent input: files, columns, date alignment, config values.
struct data_error : std::runtime_error {
  explicit data_error(const std::string& msg) : std::runtime_error(msg) {}
};

// Numerical breakdown inside a sampler or solver (non-finite values,
// non-positive variances, failed factorizations).
struct numerical_error : std::runtime_error {
  explicit numerical_error(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace tvpsv

#endif
