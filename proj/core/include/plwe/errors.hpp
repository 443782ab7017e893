#pragma once

#include <stdexcept>
#include <string>

namespace plwe {

// Root of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidModulus : public Error {
 public:
  using Error::Error;
};

class DivisionByZero : public Error {
 public:
  DivisionByZero() : Error("inversion of zero") {}
};

class ContextMismatch : public Error {
 public:
  using Error::Error;
};

class ZeroHasNoOrder : public Error {
 public:
  ZeroHasNoOrder() : Error("zero has no multiplicative order") {}
};

class ReducibleBinomial : public Error {
 public:
  using Error::Error;
};

class InvalidPolynomial : public Error {
 public:
  using Error::Error;
};

class BudgetExhausted : public Error {
 public:
  using Error::Error;
};

class TableTooLarge : public Error {
 public:
  using Error::Error;
};

class NoSamples : public Error {
 public:
  NoSamples() : Error("attack invoked on an empty sample set") {}
};

class NonMemberSample : public Error {
 public:
  using Error::Error;
};

class InsufficientSamples : public Error {
 public:
  using Error::Error;
};

class DomainError : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

// An attack precondition does not hold; the message carries the inequality.
class PreconditionRefused : public Error {
 public:
  using Error::Error;
};

}  // namespace plwe
