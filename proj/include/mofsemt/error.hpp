// SPDX-License-Identifier: Apache-2.0
#ifndef MOFSEMT_ERROR_HPP
#define MOFSEMT_ERROR_HPP

#include <stdexcept>
#include <string>

namespace mofs {

enum class ErrorCode {
    invalid_argument,
    io,
    empty_file,
    malformed_row,
    bad_number,
    single_class,
    dimension_mismatch,
    empty_elites,
};

// All recoverable failures in the library are reported as mofs::Error.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what)
        : std::runtime_error(what)
        , code_(code)
    {
    }

    [[nodiscard]] auto code() const noexcept -> ErrorCode { return code_; }

private:
    ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) { throw Error(code, what); }

inline void require(bool condition, const std::string& what)
{
    if (!condition) {
        throw Error(ErrorCode::invalid_argument, what);
    }
}

} // namespace mofs

#endif
