#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace vizpipe {

/// Root of every exception thrown by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

#define VIZPIPE_DEFINE_ERROR(Name, Base)     \
    class Name : public Base {               \
    public:                                  \
        using Base::Base;                    \
    }

// dataset
VIZPIPE_DEFINE_ERROR(DatasetShapeError, Error);
VIZPIPE_DEFINE_ERROR(DatasetParamError, Error);
VIZPIPE_DEFINE_ERROR(DatasetAttributeError, Error);
VIZPIPE_DEFINE_ERROR(DatasetEmptyError, Error);
VIZPIPE_DEFINE_ERROR(IndexError, Error);

// observable
VIZPIPE_DEFINE_ERROR(UnknownPropertyError, Error);
VIZPIPE_DEFINE_ERROR(ValidationError, Error);
VIZPIPE_DEFINE_ERROR(ReentrancyError, Error);

// pipeline / engine / registry
VIZPIPE_DEFINE_ERROR(PipelineStructureError, Error);
VIZPIPE_DEFINE_ERROR(EngineStateError, Error);
VIZPIPE_DEFINE_ERROR(StateLoadError, Error);
VIZPIPE_DEFINE_ERROR(RegistryError, Error);
VIZPIPE_DEFINE_ERROR(NameError, Error);

// kernels / mlab
VIZPIPE_DEFINE_ERROR(RangeError, Error);
VIZPIPE_DEFINE_ERROR(ShapeError, Error);
VIZPIPE_DEFINE_ERROR(UnknownSlotError, Error);

// recorder
VIZPIPE_DEFINE_ERROR(RecorderStateError, Error);

#undef VIZPIPE_DEFINE_ERROR

/// Replay failure anchored at a 1-based record index.
class ReplayError : public Error {
public:
    ReplayError(std::size_t index, const std::string& what)
        : Error("record " + std::to_string(index) + ": " + what), index_(index) {}
    std::size_t index() const noexcept { return index_; }

private:
    std::size_t index_;
};

/// Legacy VTK parse failure anchored at a 1-based line number. All reader
/// failures derive from this so callers can treat the reader as total.
class ParseError : public Error {
public:
    ParseError(std::size_t line, const std::string& what)
        : Error("line " + std::to_string(line) + ": " + what), line_(line) {}
    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

class UnsupportedDatasetError : public ParseError {
public:
    using ParseError::ParseError;
};
class UnsupportedCellError : public ParseError {
public:
    using ParseError::ParseError;
};
class UnsupportedFormatError : public ParseError {
public:
    using ParseError::ParseError;
};

} // namespace vizpipe
