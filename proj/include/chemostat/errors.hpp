#ifndef CHEMOSTAT_ERRORS_HPP
#define CHEMOSTAT_ERRORS_HPP

#include <stdexcept>

namespace chemostat {

/// Invalid biological, operating, or configuration parameters.
class ParameterError : public std::invalid_argument {
  public:
    using std::invalid_argument::invalid_argument;
};

/// Argument outside the domain on which a function is defined.
class DomainError : public std::domain_error {
  public:
    using std::domain_error::domain_error;
};

/// Two independent routes to the same quantity disagree; indicates a defect.
class ConsistencyError : public std::logic_error {
  public:
    using std::logic_error::logic_error;
};

}  // namespace chemostat

#endif  // CHEMOSTAT_ERRORS_HPP
