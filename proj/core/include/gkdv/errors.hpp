#pragma once

#include <stdexcept>
#include <string>

namespace gkdv {

// Error hierarchy. Configuration and input mistakes derive from ConfigInvalid
// (CLI exit code 1); failures that occur mid-computation derive from
// RuntimeFailure (CLI exit code 2).

struct ConfigInvalid : std::runtime_error {
    explicit ConfigInvalid(const std::string& what) : std::runtime_error(what) {}
};

struct UnknownQuantity : ConfigInvalid {
    explicit UnknownQuantity(const std::string& what) : ConfigInvalid(what) {}
};

struct RuntimeFailure : std::runtime_error {
    explicit RuntimeFailure(const std::string& what) : std::runtime_error(what) {}
};

struct BlowupDetected : RuntimeFailure {
    BlowupDetected(const std::string& what, double when)
        : RuntimeFailure(what), failure_time(when) {}
    double failure_time;
};

struct FitDiverged : RuntimeFailure {
    FitDiverged(const std::string& what, long frame = -1)
        : RuntimeFailure(what), frame_index(frame) {}
    long frame_index;
};

struct BoxTooSmall : ConfigInvalid {
    explicit BoxTooSmall(const std::string& what) : ConfigInvalid(what) {}
};

struct NegativeOrderOnNonzeroMean : ConfigInvalid {
    explicit NegativeOrderOnNonzeroMean(const std::string& what) : ConfigInvalid(what) {}
};

struct WindowTooShort : ConfigInvalid {
    explicit WindowTooShort(const std::string& what) : ConfigInvalid(what) {}
};

}  // namespace gkdv
