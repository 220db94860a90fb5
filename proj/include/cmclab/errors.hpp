#pragma once

#include <stdexcept>
#include <string>

namespace cmclab {

enum class ErrorCode {
    range,
    numeric,
    invalid_axis,
    ideal_point,
    precondition,
    construction,
    no_solution,
    config,
    io,
};

const char* to_string(ErrorCode code);

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what);

    ErrorCode code() const noexcept { return code_; }
    const std::string& detail() const noexcept { return detail_; }

private:
    ErrorCode code_;
    std::string detail_;
};

[[noreturn]] void fail(ErrorCode code, const std::string& what);

inline void require(bool ok, ErrorCode code, const std::string& what)
{
    if (!ok) fail(code, what);
}

} // namespace cmclab
