#pragma once

#include <stdexcept>
#include <string>

namespace diracsf {

// Error taxonomy shared by the library and the CLI. Each type maps to a
// distinct CLI exit code (see tools/).
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct DimensionMismatch : Error {
  using Error::Error;
};

struct NotPositiveDefinite : Error {
  using Error::Error;
};

struct TooFewSamples : Error {
  using Error::Error;
};

struct GridMismatch : Error {
  using Error::Error;
};

struct SingularDenominator : Error {
  using Error::Error;
};

struct SingularBlock : Error {
  using Error::Error;
};

struct NotHerglotz : Error {
  using Error::Error;
};

struct CharacterizationFailure : Error {
  using Error::Error;
};

struct ParseError : Error {
  using Error::Error;
};

}  // namespace diracsf
