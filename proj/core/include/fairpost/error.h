#ifndef FAIRPOST_ERROR_H_
#define FAIRPOST_ERROR_H_

#include <stdexcept>
#include <string>

namespace fairpost {

// Bad input: empty samples, out-of-range indices, parameters outside their
// admissible box, a partition cell missing one of the classes, ...
class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A computation that started from valid input but could not produce a
// usable answer (degenerate regression, failed calibration, ...).
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace fairpost

#endif  // FAIRPOST_ERROR_H_
