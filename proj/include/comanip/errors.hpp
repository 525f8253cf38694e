#pragma once

#include <stdexcept>
#include <string>

namespace comanip {

/// What went wrong, at the granularity callers branch on (CLI exit codes,
/// test assertions on specific failure modes).
enum class Errc {
    Validation,     ///< bad value: non-finite input, unit mismatch, out-of-range
    Parse,          ///< malformed file content
    Version,        ///< unknown schema version
    Sampling,       ///< non-uniform timestamps / too-short stream
    Config,         ///< invalid configuration (filter cutoff, unknown policy, ...)
    StreamMissing,  ///< a required data stream is absent from the trial
    Geometry,       ///< degenerate geometric input (zero direction, zero grasp offset)
    Alignment,      ///< streams of mismatched length fed to an aggregation
    Instability,    ///< simulation state diverged
    EmptyInput,     ///< aggregation over zero samples
    Io,             ///< filesystem failure
};

class Error : public std::runtime_error {
public:
    Error(Errc code, const std::string& what) : std::runtime_error(what), code_(code) {}
    Errc code() const { return code_; }

    /// True for errors caused by bad user input (files, flags) rather than
    /// failures during analysis. The CLI maps these to exit code 2.
    bool is_input_error() const {
        switch (code_) {
            case Errc::Parse:
            case Errc::Version:
            case Errc::Config:
            case Errc::Io:
                return true;
            default:
                return false;
        }
    }

private:
    Errc code_;
};

[[noreturn]] inline void throw_error(Errc code, const std::string& what) {
    throw Error(code, what);
}

} // namespace comanip
