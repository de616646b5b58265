#pragma once

#include <stdexcept>
#include <string>

namespace ncg {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Input violates an operation's precondition (refusal).
class PreconditionError : public Error {
public:
    using Error::Error;
};

// The requested point lies in the unresolved tail; `bound` is the best
// available estimate of the quantity's magnitude.
class TailUncertain : public Error {
public:
    TailUncertain(const std::string& what, double bound) : Error(what), bound_(bound) {}
    double bound() const { return bound_; }

private:
    double bound_;
};

class Indeterminate : public Error {
public:
    using Error::Error;
};

// Kernel dimension could not be read off a clean singular-value gap.
class IllConditioned : public Error {
public:
    IllConditioned(const std::string& what, double gap_ratio) : Error(what), gap_ratio_(gap_ratio) {}
    double gap_ratio() const { return gap_ratio_; }

private:
    double gap_ratio_;
};

class SchemaError : public Error {
public:
    SchemaError(const std::string& pointer, const std::string& what)
        : Error(pointer + ": " + what), pointer_(pointer) {}
    const std::string& pointer() const { return pointer_; }

private:
    std::string pointer_;
};

}  // namespace ncg
