#pragma once

#include <stdexcept>
#include <string>

namespace clic {

// Base class for all recoverable pipeline errors. The CLI maps subclasses
// onto its fixed exit-code table.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

class EmptyCaption : public Error {
public:
    explicit EmptyCaption(const std::string& msg = "caption is empty") : Error(msg) {}
};

class NoSwapPossible : public Error {
public:
    explicit NoSwapPossible(const std::string& msg = "every cross-sentence word pair has equal surface forms")
        : Error(msg) {}
};

class OrientationMismatch : public Error {
public:
    explicit OrientationMismatch(const std::string& msg = "images have different orientation classes")
        : Error(msg) {}
};

class DimensionMismatch : public Error {
public:
    explicit DimensionMismatch(const std::string& msg = "feature vectors have different dimensions")
        : Error(msg) {}
};

class DatasetTooSmall : public Error {
public:
    explicit DatasetTooSmall(const std::string& msg = "dataset needs at least 2 items") : Error(msg) {}
};

class ShapeMismatch : public Error {
public:
    explicit ShapeMismatch(const std::string& msg = "matrix shapes are inconsistent") : Error(msg) {}
};

class NonFinite : public Error {
public:
    explicit NonFinite(const std::string& msg = "non-finite value encountered") : Error(msg) {}
};

class StepOutOfRange : public Error {
public:
    explicit StepOutOfRange(const std::string& msg = "step outside [0, total_steps]") : Error(msg) {}
};

class KOutOfRange : public Error {
public:
    explicit KOutOfRange(const std::string& msg = "k outside [1, n_texts]") : Error(msg) {}
};

class EmptySuite : public Error {
public:
    explicit EmptySuite(const std::string& msg = "evaluation suite is empty") : Error(msg) {}
};

class UnknownId : public Error {
public:
    explicit UnknownId(const std::string& msg = "no example with that id") : Error(msg) {}
};

class IoError : public Error {
public:
    explicit IoError(const std::string& msg) : Error(msg) {}
};

class ConfigError : public Error {
public:
    explicit ConfigError(const std::string& msg) : Error(msg) {}
};

class HashMismatch : public Error {
public:
    explicit HashMismatch(const std::string& msg) : Error(msg) {}
};

} // namespace clic
