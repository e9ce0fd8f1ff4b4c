#include "blm/error.hpp"

namespace blm {

std::string_view to_string(ErrorKind kind) noexcept {
    switch (kind) {
        case ErrorKind::InvalidArgument: return "invalid-argument";
        case ErrorKind::EmptyInput: return "empty-input";
        case ErrorKind::UndefinedCorrelation: return "undefined-correlation";
        case ErrorKind::Domain: return "domain";
        case ErrorKind::DimensionMismatch: return "dimension-mismatch";
        case ErrorKind::Parse: return "parse";
        case ErrorKind::Schema: return "schema";
        case ErrorKind::IllConditioned: return "ill-conditioned";
        case ErrorKind::Usage: return "usage";
        case ErrorKind::InvalidValue: return "invalid-value";
        case ErrorKind::Io: return "io";
    }
    return "unknown";
}

}  // namespace blm
