#pragma once

#include <stdexcept>
#include <string>

namespace hitforge {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Argument has the wrong length or arity.
class InputShapeError : public Error {
public:
    using Error::Error;
};

/// Requested work exceeds a configured enumeration cap.
class ResourceLimitError : public Error {
public:
    using Error::Error;
};

/// Malformed text in one of the file formats.
class FormatError : public Error {
public:
    using Error::Error;
};

class ConstructionFailedError : public Error {
public:
    ConstructionFailedError(const std::string& what, std::size_t attempted_universe)
        : Error(what), attempted_universe_(attempted_universe) {}
    std::size_t attempted_universe() const noexcept { return attempted_universe_; }

private:
    std::size_t attempted_universe_;
};

/// A membership procedure (built-in or plug-in) failed to answer.
class PropertyError : public Error {
public:
    using Error::Error;
};

/// A compression scheme produced an output longer than its input.
class SchemeContractError : public Error {
public:
    using Error::Error;
};

/// A randomized producer threw while running.
class ProducerError : public Error {
public:
    using Error::Error;
};

/// A randomized producer returned something its declaration rules out.
class ProducerContractError : public Error {
public:
    using Error::Error;
};

class IncompatibleVersionError : public Error {
public:
    using Error::Error;
};

}  // namespace hitforge
