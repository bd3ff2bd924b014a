#pragma once

#include <stdexcept>
#include <string>

namespace qcover {

// Argument outside the domain an operation is defined on (bad k, bad family parameters).
class InvalidArgument : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

class RangeError : public std::out_of_range {
public:
    using std::out_of_range::out_of_range;
};

// Combinatorial budget exceeded (2^n enumeration, antichain search, partition sweeps).
class ResourceLimit : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// A computed quantity violated an invariant the mathematics guarantees.
// Always an implementation bug, never a property of the input.
class ConsistencyError : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

class InfeasibleNormalization : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Every event is precluded: mu(Omega) is zero, so no preclusive coevent exists.
class NoCoevent : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace qcover
