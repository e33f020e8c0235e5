#ifndef ARCHIPELAGO_ERRORS_HPP
#define ARCHIPELAGO_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace archipelago {

/// An island (or the whole system) lost all of its weight mass.
/// Derives from std::domain_error: a zero weight sum is outside the domain
/// every operation is defined on.
class degeneracy_error : public std::domain_error {
 public:
  explicit degeneracy_error(const std::string& what) : std::domain_error(what) {}
};

/// A user-supplied function (test function, weight function, potential)
/// produced a non-finite value.
class evaluation_error : public std::runtime_error {
 public:
  explicit evaluation_error(const std::string& what) : std::runtime_error(what) {}
};

/// Malformed configuration or model description.
class config_error : public std::invalid_argument {
 public:
  explicit config_error(const std::string& what) : std::invalid_argument(what) {}
};

}  // namespace archipelago

#endif  // ARCHIPELAGO_ERRORS_HPP
