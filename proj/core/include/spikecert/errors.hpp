#pragma once

#include <stdexcept>
#include <string>

namespace spikecert {

class Error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

class DomainViolation : public Error {
  public:
    using Error::Error;
};

class DerivOrderUnsupported : public Error {
  public:
    using Error::Error;
};

class RankDeficient : public Error {
  public:
    using Error::Error;
};

class UnsupportedClosedForm : public Error {
  public:
    using Error::Error;
};

class TooManySamples : public Error {
  public:
    using Error::Error;
};

class InfiniteMass : public Error {
  public:
    using Error::Error;
};

class NonPositiveNormalizer : public Error {
  public:
    using Error::Error;
};

class ConfigError : public Error {
  public:
    using Error::Error;
};

} // namespace spikecert
