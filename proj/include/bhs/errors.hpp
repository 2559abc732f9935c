#ifndef BHS_ERRORS_HPP
#define BHS_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace bhs {

// Bad configuration or precondition, detected before any expensive compute.
class ValidationError : public std::invalid_argument {
 public:
  explicit ValidationError(const std::string& what) : std::invalid_argument(what) {}
};

// Mid-run failure: blowup, non-finite samples, wrap-around, broken artifact.
class AbortError : public std::runtime_error {
 public:
  explicit AbortError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace bhs

#endif
