#pragma once

#include <stdexcept>
#include <string>

namespace mwk {

enum class ErrorCode {
    InvalidArgument,
    UnsupportedField,
    DegreeCapExceeded,
    FieldMismatch,
    NonHomogeneous,
    NotMonogenic,
    NotFinite,
    InseparableUnsupported,
    DegenerateSpecialization,
    NegativeDegreeUnsupported,
    SyntaxError,
    UnknownSuite,
};

const char* error_name(ErrorCode code);

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what)
        : std::runtime_error(std::string(error_name(code)) + ": " + what), code_(code) {}
    ErrorCode code() const { return code_; }

private:
    ErrorCode code_;
};

/* Three-valued answer used by every equality and membership decision. */
enum class Tri { Yes, No, Unknown };

inline Tri tri_and(Tri a, Tri b)
{
    if (a == Tri::No || b == Tri::No) return Tri::No;
    if (a == Tri::Unknown || b == Tri::Unknown) return Tri::Unknown;
    return Tri::Yes;
}

inline Tri tri_of(bool b) { return b ? Tri::Yes : Tri::No; }

const char* tri_name(Tri t);

}  // namespace mwk
