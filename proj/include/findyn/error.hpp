#pragma once

#include <stdexcept>
#include <string>

namespace findyn {

// Error taxonomy shared by the library and the CLI. The CLI maps every kind
// to exit code 2 (usage / environment trouble); check failures use exit 1.
enum class errc {
    argument,     // bad value passed by the caller
    dimension,    // operand sizes do not match
    precondition, // documented operation precondition violated
    resource,     // a configured cap or budget was exceeded
    validation,   // an object fails its own invariants
    decode,       // input bytes/tables do not parse as the expected object
    internal,     // invariant of the implementation itself broke
};

class error : public std::runtime_error {
  public:
    error(errc kind, const std::string& msg) : std::runtime_error(msg), kind_(kind) {}
    errc kind() const noexcept { return kind_; }

  private:
    errc kind_;
};

[[noreturn]] inline void fail(errc kind, const std::string& msg) { throw error(kind, msg); }

inline const char* errc_name(errc k) {
    switch (k) {
    case errc::argument: return "argument";
    case errc::dimension: return "dimension";
    case errc::precondition: return "precondition";
    case errc::resource: return "resource";
    case errc::validation: return "validation";
    case errc::decode: return "decode";
    case errc::internal: return "internal";
    }
    return "unknown";
}

} // namespace findyn
