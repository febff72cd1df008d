#pragma once

#include <stdexcept>
#include <string>

namespace fpm {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct DegenerateInput : Error { using Error::Error; };
struct IllConditioned : Error { using Error::Error; };
struct NoIntersection : Error { using Error::Error; };
struct DegenerateCenters : Error { using Error::Error; };
struct ParallelPlanes : Error { using Error::Error; };
struct ZeroNormal : Error { using Error::Error; };

struct InvalidDesign : Error { using Error::Error; };
struct InvalidLinks : Error { using Error::Error; };
struct NonPositiveResult : Error { using Error::Error; };

struct OutOfWorkspace : Error { using Error::Error; };
struct DegenerateFrame : Error { using Error::Error; };
struct DegenerateTarget : Error { using Error::Error; };

struct InsufficientSamples : Error { using Error::Error; };
struct OutOfDomain : Error { using Error::Error; };

struct ParseError : Error {
    int line;
    std::string token;
    ParseError(int line_, std::string token_, const std::string& what_)
        : Error(what_), line(line_), token(std::move(token_)) {}
};

struct UnsupportedCommand : Error {
    int line;
    std::string code;
    UnsupportedCommand(int line_, std::string code_, const std::string& what_)
        : Error(what_), line(line_), code(std::move(code_)) {}
};

struct IoError : Error { using Error::Error; };

}  // namespace fpm
