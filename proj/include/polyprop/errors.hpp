#ifndef POLYPROP_ERRORS_HPP
#define POLYPROP_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace polyprop {

// Argument outside the mathematical domain of an operation (non-finite input,
// energy outside the band, index outside the box, ...).
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

// Inconsistent use of otherwise valid objects (mismatched lattices, bad time
// ordering, insufficient grid resolution, ...).
class UsageError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// A physical precondition on a state does not hold, e.g. a box state with
// support on a wall.
class PreconditionViolation : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

} // namespace polyprop

#endif // POLYPROP_ERRORS_HPP
