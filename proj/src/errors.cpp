#include "cmclab/errors.hpp"

namespace cmclab {

const char* to_string(ErrorCode code)
{
    switch (code) {
    case ErrorCode::range: return "range";
    case ErrorCode::numeric: return "numeric";
    case ErrorCode::invalid_axis: return "invalid-axis";
    case ErrorCode::ideal_point: return "ideal-point";
    case ErrorCode::precondition: return "precondition";
    case ErrorCode::construction: return "construction";
    case ErrorCode::no_solution: return "no-solution";
    case ErrorCode::config: return "config";
    case ErrorCode::io: return "io";
    }
    return "unknown";
}

Error::Error(ErrorCode code, const std::string& what)
    : std::runtime_error(std::string(to_string(code)) + " error: " + what), code_(code), detail_(what)
{
}

void fail(ErrorCode code, const std::string& what)
{
    throw Error(code, what);
}

} // namespace cmclab
