#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "selfsim/errors.hpp"
#include "selfsim/job.hpp"

namespace {

struct Options {
    std::string spec_path;
    double tol = -1; // negative: take from the spec (default 1e-8)
    std::string out_path;
    std::string format;
};

std::string read_spec(const std::string& path) {
    if (path == "-") {
        std::ostringstream ss;
        ss << std::cin.rdbuf();
        return ss.str();
    }
    std::ifstream in(path);
    if (!in) throw selfsim::IoError("cannot open spec file '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

int run_command(const std::string& subcommand, const Options& opt) {
    using namespace selfsim;

    job::JobSpec spec = job::parse_spec(read_spec(opt.spec_path));
    if (job::command_name(spec.command) != subcommand)
        throw SchemaError("command", "spec says '" + job::command_name(spec.command) +
                                         "' but the subcommand is '" + subcommand + "'");
    if (opt.tol >= 0) spec.tol = opt.tol;
    if (!opt.out_path.empty()) spec.out_path = opt.out_path;
    if (!opt.format.empty()) {
        if (opt.format != "csv" && opt.format != "svg" && opt.format != "json")
            throw SchemaError("format", "expected csv, svg or json");
        spec.format = opt.format;
    }

    const job::RunReport report = job::run(spec);
    const std::string text = report.doc.dump(2);
    std::cout << text << "\n";
    if (!spec.out_path.empty() && spec.format == "json") {
        std::ofstream out(spec.out_path);
        if (!out) throw IoError("cannot open '" + spec.out_path + "'");
        out << text << "\n";
    }
    std::cerr << "wall_ms " << report.wall_ms << "\n";
    return report.pass ? 0 : 1;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"batch checks for surfaces satisfying H = alpha<N,x> + lambda"};
    app.require_subcommand(1);

    Options opt;
    static const char* names[] = {"verify",       "ode",
                                  "graph-ode",    "ruled-coeffs",
                                  "translation-check", "sweep"};
    for (const char* name : names) {
        CLI::App* sub = app.add_subcommand(name);
        sub->add_option("--spec", opt.spec_path, "job spec JSON file ('-' for stdin)")->required();
        sub->add_option("--tol", opt.tol, "pass/fail tolerance (default 1e-8)");
        sub->add_option("--out", opt.out_path, "artifact output path");
        sub->add_option("--format", opt.format, "artifact format: csv|svg|json");
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 2;
    }

    const std::string sub = app.get_subcommands().front()->get_name();
    try {
        return run_command(sub, opt);
    } catch (const selfsim::SchemaError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const selfsim::UnknownBuiltin& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const selfsim::IoError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const selfsim::Error& e) {
        std::cerr << "numerical error: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
}
