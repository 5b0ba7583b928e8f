#pragma once

#include <stdexcept>
#include <string>

namespace selfsim {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Numerical / geometric failures (CLI exit status 3).
struct NonImmersed : Error {
    explicit NonImmersed(const std::string& what) : Error(what) {}
};
struct StencilOutOfDomain : Error {
    explicit StencilOutOfDomain(const std::string& what) : Error(what) {}
};
struct InvalidInitialFrame : Error {
    explicit InvalidInitialFrame(const std::string& what) : Error(what) {}
};
struct NotInPlane : Error {
    explicit NotInPlane(const std::string& what) : Error(what) {}
};
struct DegenerateDerivative : Error {
    explicit DegenerateDerivative(const std::string& what) : Error(what) {}
};
struct StepUnderflow : Error {
    explicit StepUnderflow(const std::string& what) : Error(what) {}
};

// Spec / usage failures (CLI exit status 2).
struct SchemaError : Error {
    std::string path;
    SchemaError(const std::string& path_, const std::string& what)
        : Error("schema error at '" + path_ + "': " + what), path(path_) {}
};
struct UnknownBuiltin : Error {
    explicit UnknownBuiltin(const std::string& name) : Error("unknown builtin function: " + name) {}
};
struct IoError : Error {
    explicit IoError(const std::string& what) : Error(what) {}
};

} // namespace selfsim
