#pragma once

#include <stdexcept>
#include <string>

namespace whichpath {

enum class ErrorCode {
    invalid_argument,
    incompatible_spectra,
    insufficient_structure,  // mode selection found no max/min structure
    zero_reference,
    parse,
    io,
};

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what) : std::runtime_error(what), code_(code) {}
    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

[[noreturn]] void fail(ErrorCode code, const std::string& what);

inline void require(bool cond, const std::string& what) {
    if (!cond) fail(ErrorCode::invalid_argument, what);
}

}  // namespace whichpath
