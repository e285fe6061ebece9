#pragma once

#include <stdexcept>
#include <string>

namespace mapl {

enum class Errc {
    invalid_argument,
    malformed_spec,
    malformed_input,
    duplicate_family,
    hash_collision,
    divergence,
    unregistered_pair,
    io_error,
    config_error,
};

// All recoverable failures surface as Error; the code tells callers which
// contract was violated without parsing the message.
class Error : public std::runtime_error {
public:
    Error(Errc code, const std::string& what) : std::runtime_error(what), code_(code) {}

    Errc code() const noexcept { return code_; }

private:
    Errc code_;
};

[[noreturn]] inline void raise(Errc code, const std::string& what) { throw Error(code, what); }

}  // namespace mapl
