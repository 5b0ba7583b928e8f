#pragma once

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "selfsim/catalog.hpp"
#include "selfsim/profile_ode.hpp"
#include "selfsim/ruled.hpp"
#include "selfsim/translation.hpp"
#include "selfsim/types.hpp"

namespace selfsim::job {

enum class Command { Verify, Ode, GraphOde, RuledCoeffs, TranslationCheck, Sweep };

struct VerifyJob {
    catalog::CatalogSurface surface;
    SelfSimParams params;
    std::size_t ns = 20, nt = 20;
    FrameMode mode = FrameMode::Closed;
    double fd_step = kDefaultFdStep;
};

struct OdeJob {
    profile::ProfileState init;
    SelfSimParams params;
    double length = 1.0;
    profile::OdeConfig config;
};

struct GraphOdeJob {
    double f0 = 0, df0 = 0;
    double x_begin = 0, x_end = 1;
    SelfSimParams params;
    profile::OdeConfig config;
};

enum class RuledForm { Lambda0, Squared, Conical };

struct RuledCoeffsJob {
    ruled::RuledSurface surface;
    SelfSimParams params;
    RuledForm form = RuledForm::Lambda0;
    std::vector<double> s_samples;
};

struct TranslationCheckJob {
    translation::TranslationSurface surface;
    SelfSimParams params;
    std::size_t nx = 20, ny = 20;
};

struct SweepJob {
    std::string param;        // "alpha" or "lambda"
    double from = 0, to = 0;
    std::size_t steps = 2;
    std::string target;       // "circle-radii" or "verify"
    SelfSimParams base;       // the non-swept parameter is taken from here
    std::optional<catalog::CatalogSurface> surface; // verify target
    std::size_t ns = 20, nt = 20;
};

struct JobSpec {
    Command command = Command::Verify;
    std::variant<VerifyJob, OdeJob, GraphOdeJob, RuledCoeffsJob, TranslationCheckJob, SweepJob>
        payload;
    double tol = 1e-8;
    std::string out_path;     // optional artifact destination
    std::string format = "json"; // csv | svg | json
    nlohmann::json echo;      // the parsed document, reproduced in the report
};

// Parses and validates a JSON job document. Unknown fields are rejected with
// SchemaError carrying the field path; unknown builtin names raise
// UnknownBuiltin.
JobSpec parse_spec(const std::string& text);
JobSpec parse_spec_json(const nlohmann::json& doc);

struct RunReport {
    nlohmann::json doc;   // deterministic for a fixed spec
    bool pass = false;
    double wall_ms = 0;   // reported on stderr, never inside doc
};

// Dispatches the job, writes requested artifacts, and returns the report.
RunReport run(const JobSpec& job);

// ---------- exports ----------

void export_csv(const std::vector<std::vector<double>>& rows,
                const std::vector<std::string>& columns, const std::string& path);

struct Polyline {
    std::vector<std::pair<double, double>> points; // (x, z); +z renders upward
};
void export_svg(const std::vector<Polyline>& polylines, const std::string& path);

std::string command_name(Command c);

} // namespace selfsim::job
