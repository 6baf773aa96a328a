#pragma once

#include <stdexcept>
#include <string>

namespace replaylab {

/// Input data violates a precondition (wrong dimension, non-finite value).
class RejectedInput : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Lookup of a buffer slot that is not currently occupied.
class InvalidSlot : public std::out_of_range {
public:
    using std::out_of_range::out_of_range;
};

/// Cluster index and buffer disagree; fail fast, the state is unrecoverable.
class IndexCorruption : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

/// Invalid configuration value (maps to CLI exit code 2).
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Operation needs more data before it can run, e.g. sampling from an
/// empty buffer during warmup.
class NotReady : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A quantity became non-finite during training.
class NumericFault : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Metric series that must align (same episode counts) do not.
class AlignmentError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace replaylab
