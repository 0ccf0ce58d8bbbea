#pragma once

#include <stdexcept>
#include <string>

namespace selmer3 {

/// Input outside the mathematical domain of an operation (p = 3 in Table-1
/// lookups, singular matrices, non-integral forms, ...).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// A configuration document lacks a value the calculus needs (a missing
/// override at a bad or 3-adic place, an unlisted kappa entry, ...).
class IncompleteConfig : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed user input (flags, JSON shape, number syntax).
class UsageError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

}  // namespace selmer3
