#include "selfsim/job.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <mutex>
#include <set>

#include "selfsim/errors.hpp"
#include "selfsim/numeric.hpp"

namespace selfsim::job {

using nlohmann::json;

std::string command_name(Command c) {
    switch (c) {
        case Command::Verify: return "verify";
        case Command::Ode: return "ode";
        case Command::GraphOde: return "graph-ode";
        case Command::RuledCoeffs: return "ruled-coeffs";
        case Command::TranslationCheck: return "translation-check";
        case Command::Sweep: return "sweep";
    }
    return "?";
}

// ---------- strict object reader ----------

namespace {

class Obj {
public:
    Obj(const json& j, std::string path) : j_(j), path_(std::move(path)) {
        if (!j_.is_object()) throw SchemaError(path_, "expected an object");
    }

    std::string join(const std::string& key) const {
        return path_.empty() ? key : path_ + "." + key;
    }

    bool has(const std::string& key) const { return j_.contains(key); }

    const json& req(const std::string& key) {
        used_.insert(key);
        if (!j_.contains(key)) throw SchemaError(join(key), "missing required field");
        return j_.at(key);
    }
    const json* opt(const std::string& key) {
        used_.insert(key);
        return j_.contains(key) ? &j_.at(key) : nullptr;
    }

    double num(const std::string& key) {
        const json& v = req(key);
        if (!v.is_number()) throw SchemaError(join(key), "expected a number");
        return v.get<double>();
    }
    double num_or(const std::string& key, double dflt) {
        const json* v = opt(key);
        if (!v) return dflt;
        if (!v->is_number()) throw SchemaError(join(key), "expected a number");
        return v->get<double>();
    }
    std::size_t count(const std::string& key) {
        const json& v = req(key);
        if (!v.is_number_integer() || v.get<long long>() < 0)
            throw SchemaError(join(key), "expected a nonnegative integer");
        return v.get<std::size_t>();
    }
    std::string str(const std::string& key) {
        const json& v = req(key);
        if (!v.is_string()) throw SchemaError(join(key), "expected a string");
        return v.get<std::string>();
    }
    std::string str_or(const std::string& key, const std::string& dflt) {
        const json* v = opt(key);
        if (!v) return dflt;
        if (!v->is_string()) throw SchemaError(join(key), "expected a string");
        return v->get<std::string>();
    }
    std::vector<double> numbers(const std::string& key) {
        const json& v = req(key);
        if (!v.is_array()) throw SchemaError(join(key), "expected an array of numbers");
        std::vector<double> out;
        for (const auto& e : v) {
            if (!e.is_number()) throw SchemaError(join(key), "expected an array of numbers");
            out.push_back(e.get<double>());
        }
        return out;
    }
    Vec3 vec3(const std::string& key) {
        const auto v = numbers(key);
        if (v.size() != 3) throw SchemaError(join(key), "expected 3 components");
        return Vec3{v[0], v[1], v[2]};
    }
    Vec3 vec3_or(const std::string& key, const Vec3& dflt) {
        if (!j_.contains(key)) {
            used_.insert(key);
            return dflt;
        }
        return vec3(key);
    }
    std::pair<std::size_t, std::size_t> grid_or(const std::string& key, std::size_t dn) {
        const json* v = opt(key);
        if (!v) return {dn, dn};
        if (!v->is_array() || v->size() != 2 || !(*v)[0].is_number_integer() ||
            !(*v)[1].is_number_integer())
            throw SchemaError(join(key), "expected [ns, nt]");
        return {(*v)[0].get<std::size_t>(), (*v)[1].get<std::size_t>()};
    }

    void finish() const {
        for (const auto& item : j_.items())
            if (!used_.count(item.key())) throw SchemaError(join(item.key()), "unknown field");
    }

private:
    const json& j_;
    std::string path_;
    std::set<std::string> used_;
};

catalog::CatalogSurface parse_surface(const json& j, const std::string& path) {
    Obj o(j, path);
    const std::string kind = o.str("kind");
    catalog::CatalogSurface out;
    if (kind == "sphere") {
        const double r = o.num("r");
        if (!(r > 0)) throw SchemaError(o.join("r"), "radius must be positive");
        out = catalog::Sphere{r};
    } else if (kind == "cylinder") {
        const double r = o.num("r");
        if (!(r > 0)) throw SchemaError(o.join("r"), "radius must be positive");
        out = catalog::Cylinder{r, o.vec3_or("axis", {0, 0, 1}).normalized()};
    } else if (kind == "plane") {
        out = catalog::Plane{o.vec3_or("normal", {0, 0, 1}).normalized(), o.num_or("d", 0.0)};
    } else {
        throw SchemaError(path + ".kind", "expected sphere, cylinder or plane");
    }
    o.finish();
    return out;
}

SelfSimParams parse_params(Obj& o) {
    SelfSimParams p;
    p.alpha = o.num("alpha");
    p.lambda = o.num_or("lambda", 0.0);
    return p;
}

profile::OdeConfig parse_config(const json* j, const std::string& path) {
    profile::OdeConfig cfg;
    if (!j) return cfg;
    Obj o(*j, path);
    const std::string method = o.str_or("method", "rk4");
    if (method == "rk4")
        cfg.method = profile::OdeMethod::FixedRk4;
    else if (method == "rkf45")
        cfg.method = profile::OdeMethod::AdaptiveRkf45;
    else
        throw SchemaError(path + ".method", "expected rk4 or rkf45");
    cfg.step = o.num_or("step", cfg.step);
    cfg.abs_tol = o.num_or("abs_tol", cfg.abs_tol);
    cfg.rel_tol = o.num_or("rel_tol", cfg.rel_tol);
    cfg.max_arc_length = o.num_or("max_arc_length", cfg.max_arc_length);
    cfg.derivative_cap = o.num_or("derivative_cap", cfg.derivative_cap);
    o.finish();
    if (!(cfg.step > 0)) throw SchemaError(path + ".step", "step must be positive");
    if (!(cfg.abs_tol > 0) || !(cfg.rel_tol > 0))
        throw SchemaError(path + ".abs_tol", "tolerances must be positive");
    return cfg;
}

std::shared_ptr<ruled::Curve3> parse_directrix(const json& j, const std::string& path) {
    Obj o(j, path);
    const std::string family = o.str("family");
    std::shared_ptr<ruled::Curve3> out;
    if (family == "line") {
        out = ruled::line_curve(o.vec3("p"), o.vec3("v"));
    } else if (family == "point") {
        out = ruled::point_curve(o.vec3("p"));
    } else if (family == "helix") {
        out = ruled::helix_curve(o.num("radius"), o.num("pitch"));
    } else if (family == "circle") {
        out = ruled::circle_curve(o.vec3_or("center", {0, 0, 0}), o.vec3_or("e1", {1, 0, 0}),
                                  o.vec3_or("e2", {0, 1, 0}), o.num("r"));
    } else if (family == "table") {
        out = ruled::table_curve(o.numbers("s"), o.numbers("x"), o.numbers("y"), o.numbers("z"));
    } else {
        throw SchemaError(path + ".family", "expected line, point, helix, circle or table");
    }
    o.finish();
    return out;
}

std::shared_ptr<ruled::DirectorCurve> parse_director(const json& j, const std::string& path,
                                                     double s0, double s1) {
    Obj o(j, path);
    const std::string family = o.str("family");
    std::shared_ptr<ruled::DirectorCurve> out;
    if (family == "great_circle") {
        out = ruled::great_circle_director(o.vec3_or("e1", {1, 0, 0}), o.vec3_or("e2", {0, 1, 0}));
    } else if (family == "theta_const") {
        const double theta = o.num("theta");
        const Vec3 b0 = o.vec3_or("beta0", {1, 0, 0});
        const Vec3 db0 = o.vec3_or("dbeta0", {0, 1, 0});
        const double step = o.num_or("step", 1e-3);
        out = ruled::synthesize_director([theta](double) { return theta; }, b0, db0, s0, s1, step);
    } else if (family == "table") {
        out = ruled::director_from_table(o.numbers("s"), o.numbers("x"), o.numbers("y"),
                                         o.numbers("z"));
    } else {
        throw SchemaError(path + ".family", "expected great_circle, theta_const or table");
    }
    o.finish();
    return out;
}

ruled::RuledSurface parse_ruled_surface(const json& j, const std::string& path) {
    Obj o(j, path);
    const std::string kind = o.str_or("kind", "generic");
    const auto range = o.numbers("s_range");
    if (range.size() != 2 || !(range[1] > range[0]))
        throw SchemaError(path + ".s_range", "expected [begin, end] with end > begin");
    ruled::RuledSurface out;
    if (kind == "generic") {
        const double step = o.num_or("step", 1e-3);
        auto director = parse_director(o.req("director"), path + ".director", range[0], range[1]);
        auto directrix = parse_directrix(o.req("directrix"), path + ".directrix");
        out = ruled::make_ruled(directrix, director, range[0], range[1], step);
    } else if (kind == "conical") {
        auto director = parse_director(o.req("director"), path + ".director", range[0], range[1]);
        out = ruled::make_conical(o.vec3("apex"), director, range[0], range[1]);
    } else if (kind == "cylindrical") {
        const double step = o.num_or("step", 1e-3);
        auto directrix = parse_directrix(o.req("directrix"), path + ".directrix");
        out = ruled::make_cylindrical(directrix, o.vec3("direction"), range[0], range[1], step);
    } else {
        throw SchemaError(path + ".kind", "expected generic, conical or cylindrical");
    }
    o.finish();
    return out;
}

translation::FnSpec parse_fnspec(const json& j, const std::string& path) {
    Obj o(j, path);
    translation::FnSpec out;
    int provided = 0;
    if (o.has("poly")) {
        out = translation::FnSpec::poly(o.numbers("poly"));
        ++provided;
    }
    if (o.has("builtin")) {
        const std::string name = o.str("builtin");
        std::map<std::string, double> params;
        if (const json* p = o.opt("params")) {
            if (!p->is_object()) throw SchemaError(path + ".params", "expected an object");
            for (const auto& item : p->items()) {
                if (!item.value().is_number())
                    throw SchemaError(path + ".params." + item.key(), "expected a number");
                params[item.key()] = item.value().get<double>();
            }
        }
        out = translation::FnSpec::builtin(name, params);
        ++provided;
    }
    if (o.has("table")) {
        Obj t(o.req("table"), path + ".table");
        out = translation::FnSpec::table(t.numbers("x"), t.numbers("y"));
        t.finish();
        ++provided;
    }
    if (provided != 1)
        throw SchemaError(path, "expected exactly one of poly, builtin or table");
    o.finish();
    return out;
}

std::vector<double> linspace(double a, double b, std::size_t n) {
    std::vector<double> out(n);
    for (std::size_t i = 0; i < n; ++i)
        out[i] = n == 1 ? a : a + (b - a) * double(i) / double(n - 1);
    return out;
}

} // namespace

// ---------- parse ----------

JobSpec parse_spec(const std::string& text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::exception& e) {
        throw SchemaError("", std::string("invalid JSON: ") + e.what());
    }
    return parse_spec_json(doc);
}

JobSpec parse_spec_json(const json& doc) {
    Obj o(doc, "");
    JobSpec spec;
    spec.echo = doc;
    const std::string cmd = o.str("command");
    spec.tol = o.num_or("tol", 1e-8);

    if (cmd == "verify") {
        spec.command = Command::Verify;
        VerifyJob job;
        job.surface = parse_surface(o.req("surface"), "surface");
        job.params = parse_params(o);
        std::tie(job.ns, job.nt) = o.grid_or("grid", 20);
        const std::string frames = o.str_or("frames", "closed");
        if (frames == "closed")
            job.mode = FrameMode::Closed;
        else if (frames == "fd")
            job.mode = FrameMode::FiniteDifference;
        else
            throw SchemaError("frames", "expected closed or fd");
        job.fd_step = o.num_or("h", kDefaultFdStep);
        spec.payload = std::move(job);
    } else if (cmd == "ode") {
        spec.command = Command::Ode;
        OdeJob job;
        job.params = parse_params(o);
        Obj init(o.req("init"), "init");
        job.init.x = init.num("x");
        job.init.z = init.num("z");
        job.init.theta = init.num("theta");
        job.init.s = init.num_or("s", 0.0);
        init.finish();
        job.length = o.num("length");
        if (!(job.length > 0)) throw SchemaError("length", "must be positive");
        job.config = parse_config(o.opt("config"), "config");
        spec.payload = std::move(job);
    } else if (cmd == "graph-ode") {
        spec.command = Command::GraphOde;
        GraphOdeJob job;
        job.params = parse_params(o);
        job.f0 = o.num("f0");
        job.df0 = o.num_or("df0", 0.0);
        const auto range = o.numbers("x_range");
        if (range.size() != 2 || !(range[1] > range[0]))
            throw SchemaError("x_range", "expected [begin, end] with end > begin");
        job.x_begin = range[0];
        job.x_end = range[1];
        job.config = parse_config(o.opt("config"), "config");
        spec.payload = std::move(job);
    } else if (cmd == "ruled-coeffs") {
        spec.command = Command::RuledCoeffs;
        RuledCoeffsJob job;
        job.params = parse_params(o);
        if (job.params.alpha == 0.0)
            throw SchemaError("alpha", "classification checks need alpha != 0");
        job.surface = parse_ruled_surface(o.req("surface"), "surface");
        const std::string form = o.str_or("form", "lambda0");
        if (form == "lambda0")
            job.form = RuledForm::Lambda0;
        else if (form == "squared")
            job.form = RuledForm::Squared;
        else if (form == "conical")
            job.form = RuledForm::Conical;
        else
            throw SchemaError("form", "expected lambda0, squared or conical");
        if (job.form == RuledForm::Conical && job.surface.kind != ruled::RuledKind::Conical)
            throw SchemaError("form", "conical form requires a conical surface");
        const std::size_t n = o.has("samples") ? o.count("samples") : 20;
        if (n < 1) throw SchemaError("samples", "need at least one sample");
        // samples stay strictly inside the parametr range; the end nodes of a
        // synthesized director are interpolation boundaries
        const double a = job.surface.s_begin, b = job.surface.s_end;
        const double pad = 1e-6 * (b - a);
        job.s_samples = linspace(a + pad, b - pad, n);
        spec.payload = std::move(job);
    } else if (cmd == "translation-check") {
        spec.command = Command::TranslationCheck;
        TranslationCheckJob job;
        job.params = parse_params(o);
        if (job.params.alpha == 0.0)
            throw SchemaError("alpha", "classification checks need alpha != 0");
        job.surface.f = parse_fnspec(o.req("f"), "f");
        job.surface.g = parse_fnspec(o.req("g"), "g");
        if (const json* d = o.opt("domain")) {
            if (!d->is_array() || d->size() != 4)
                throw SchemaError("domain", "expected [x0, x1, y0, y1]");
            job.surface.x0 = (*d)[0].get<double>();
            job.surface.x1 = (*d)[1].get<double>();
            job.surface.y0 = (*d)[2].get<double>();
            job.surface.y1 = (*d)[3].get<double>();
        }
        std::tie(job.nx, job.ny) = o.grid_or("grid", 20);
        spec.payload = std::move(job);
    } else if (cmd == "sweep") {
        spec.command = Command::Sweep;
        SweepJob job;
        job.param = o.str("param");
        if (job.param != "alpha" && job.param != "lambda")
            throw SchemaError("param", "expected alpha or lambda");
        job.from = o.num("from");
        job.to = o.num("to");
        job.steps = o.count("steps");
        if (job.steps < 1) throw SchemaError("steps", "need at least one step");
        job.target = o.str("target");
        job.base.alpha = o.num_or("alpha", 0.0);
        job.base.lambda = o.num_or("lambda", 0.0);
        if (job.target == "verify") {
            job.surface = parse_surface(o.req("surface"), "surface");
            std::tie(job.ns, job.nt) = o.grid_or("grid", 20);
        } else if (job.target != "circle-radii") {
            throw SchemaError("target", "expected circle-radii or verify");
        }
        spec.payload = std::move(job);
    } else {
        throw SchemaError("command",
                          "expected verify, ode, graph-ode, ruled-coeffs, translation-check or sweep");
    }
    o.finish();
    return spec;
}

// ---------- exports ----------

namespace {

std::string fmt17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

} // namespace

void export_csv(const std::vector<std::vector<double>>& rows,
                const std::vector<std::string>& columns, const std::string& path) {
    if (rows.empty()) throw IoError("export_csv: empty sample list");
    std::ofstream out(path);
    if (!out) throw IoError("export_csv: cannot open '" + path + "'");
    for (std::size_t i = 0; i < columns.size(); ++i)
        out << columns[i] << (i + 1 < columns.size() ? "," : "");
    out << "\n";
    for (const auto& row : rows) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (!std::isnan(row[i])) out << fmt17(row[i]);
            out << (i + 1 < row.size() ? "," : "");
        }
        out << "\n";
    }
    if (!out) throw IoError("export_csv: write failed for '" + path + "'");
}

void export_svg(const std::vector<Polyline>& polylines, const std::string& path) {
    bool any = false;
    for (const auto& p : polylines) any = any || !p.points.empty();
    if (polylines.empty() || !any) throw IoError("export_svg: empty sample list");

    double xmin = 1e300, xmax = -1e300, zmin = 1e300, zmax = -1e300;
    for (const auto& p : polylines)
        for (const auto& [x, z] : p.points) {
            xmin = std::min(xmin, x);
            xmax = std::max(xmax, x);
            zmin = std::min(zmin, z);
            zmax = std::max(zmax, z);
        }
    const double spanx = std::max(xmax - xmin, 1e-12);
    const double spanz = std::max(zmax - zmin, 1e-12);
    const double scale = 640.0 / std::max(spanx, spanz);
    const double margin = 16.0;
    const double w = spanx * scale + 2 * margin;
    const double h = spanz * scale + 2 * margin;

    static const char* palette[] = {"#000000", "#c22f2f", "#2857a4", "#1e8449", "#8e44ad", "#b7760f"};

    std::ofstream out(path);
    if (!out) throw IoError("export_svg: cannot open '" + path + "'");
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 " << fmt17(w) << " " << fmt17(h)
        << "\">\n";
    std::size_t ci = 0;
    for (const auto& p : polylines) {
        if (p.points.empty()) continue;
        out << "  <polyline fill=\"none\" stroke=\"" << palette[ci % 6]
            << "\" stroke-width=\"1\" points=\"";
        for (const auto& [x, z] : p.points) {
            // +z up: flip into SVG's downward y axis
            const double px = margin + (x - xmin) * scale;
            const double pz = margin + (zmax - z) * scale;
            out << fmt17(px) << "," << fmt17(pz) << " ";
        }
        out << "\"/>\n";
        ++ci;
    }
    out << "</svg>\n";
    if (!out) throw IoError("export_svg: write failed for '" + path + "'");
}

// ---------- run ----------

namespace {

json witness_json(double a, double b, const char* ka, const char* kb) {
    json w;
    w[ka] = a;
    w[kb] = b;
    return w;
}

void maybe_export(const JobSpec& spec, const std::vector<std::vector<double>>& rows,
                  const std::vector<std::string>& columns, const std::vector<Polyline>& lines) {
    if (spec.out_path.empty()) return;
    if (spec.format == "csv") {
        export_csv(rows, columns, spec.out_path);
    } else if (spec.format == "svg") {
        export_svg(lines, spec.out_path);
    }
    // json artifacts are written by the caller of run() from the report
}

RunReport run_verify(const JobSpec& spec, const VerifyJob& job) {
    RunReport rep;
    const auto r = catalog::verify_catalog(job.surface, job.params, job.ns, job.nt, spec.tol,
                                           job.mode, job.fd_step);
    rep.pass = r.pass;
    rep.doc["max_abs_residual"] = r.max_abs;
    rep.doc["mean_abs_residual"] = r.mean_abs;
    rep.doc["samples"] = r.residuals.size();
    rep.doc["witness"] = witness_json(r.worst_s, r.worst_t, "s", "t");

    std::vector<std::vector<double>> rows;
    const SurfacePatch patch = catalog::make_patch(job.surface);
    for (std::size_t i = 0; i < r.ns; ++i)
        for (std::size_t j = 0; j < r.nt; ++j) {
            const double s =
                patch.domain.s0 + (patch.domain.s1 - patch.domain.s0) * double(i) / double(r.ns - 1);
            const double t =
                patch.domain.t0 + (patch.domain.t1 - patch.domain.t0) * double(j) / double(r.nt - 1);
            rows.push_back({s, t, r.residuals[i * r.nt + j]});
        }
    maybe_export(spec, rows, {"s", "t", "residual"}, {});
    return rep;
}

RunReport run_ode(const JobSpec& spec, const OdeJob& job) {
    RunReport rep;
    const auto sol = profile::integrate_profile(job.init, job.params, job.length, job.config);
    const auto res = profile::profile_recompute_residuals(sol, job.params);
    rep.pass = sol.max_recompute_residual <= spec.tol;
    rep.doc["samples"] = sol.states.size();
    rep.doc["max_recompute_residual"] = sol.max_recompute_residual;
    const auto& last = sol.states.back();
    rep.doc["endpoint"] = {{"x", last.x}, {"z", last.z}, {"theta", last.theta}, {"s", last.s}};
    const double gap = std::hypot(last.x - job.init.x, last.z - job.init.z);
    rep.doc["closure_gap"] = gap;

    std::vector<std::vector<double>> rows;
    Polyline line;
    for (std::size_t i = 0; i < sol.states.size(); ++i) {
        const auto& st = sol.states[i];
        rows.push_back(
            {st.s, st.x, st.z, st.theta, profile::curvature_at(st, job.params), res[i]});
        line.points.push_back({st.x, st.z});
    }
    maybe_export(spec, rows, {"s", "x", "z", "theta", "kappa", "residual"}, {line});
    return rep;
}

RunReport run_graph_ode(const JobSpec& spec, const GraphOdeJob& job) {
    RunReport rep;
    const auto sol = profile::integrate_graph(job.f0, job.df0, job.x_begin, job.x_end, job.params,
                                              job.config);
    const auto res = profile::graph_recompute_residuals(sol, job.params);
    double max_res = 0;
    for (double r : res) max_res = std::max(max_res, std::abs(r));
    rep.pass = max_res <= spec.tol;
    rep.doc["samples"] = sol.xs.size();
    rep.doc["max_recompute_residual"] = max_res;
    rep.doc["last_valid_x"] = sol.last_valid_x;
    rep.doc["termination"] = sol.termination == profile::Termination::Completed ? "completed"
                             : sol.termination == profile::Termination::DerivativeBlowup
                                 ? "derivative-blowup"
                                 : "length-capped";

    std::vector<std::vector<double>> rows;
    Polyline line;
    for (std::size_t i = 0; i < sol.xs.size(); ++i) {
        rows.push_back({sol.xs[i], sol.f[i], sol.df[i], res[i]});
        line.points.push_back({sol.xs[i], sol.f[i]});
    }
    maybe_export(spec, rows, {"x", "f", "df", "residual"}, {line});
    return rep;
}

RunReport run_ruled(const JobSpec& spec, const RuledCoeffsJob& job) {
    RunReport rep;
    std::vector<std::vector<double>> rows;
    std::vector<std::string> columns{"s"};
    double max_abs = 0, worst_s = job.s_samples.empty() ? 0.0 : job.s_samples.front();

    if (job.form == RuledForm::Conical) {
        // degree-3 rows; the conical polynomial has no t^0 or t^1 part
        columns.insert(columns.end(), {"c0", "c1", "c2", "c3"});
        for (double s : job.s_samples) {
            const auto [c2, c3] =
                ruled::conical_coeffs(job.surface.apex, job.surface.director, job.params, s);
            rows.push_back({s, 0.0, 0.0, c2, c3});
            const double m = std::max(std::abs(c2), std::abs(c3));
            if (m > max_abs) {
                max_abs = m;
                worst_s = s;
            }
        }
    } else {
        const auto form =
            job.form == RuledForm::Lambda0 ? ruled::CoeffForm::Lambda0 : ruled::CoeffForm::Squared;
        const auto report = ruled::build_coeff_report(job.surface, job.params, job.s_samples, form);
        const std::size_t ncoef = report.rows.empty() ? 0 : report.rows.front().c.size();
        for (std::size_t j = 0; j < ncoef; ++j) columns.push_back("c" + std::to_string(j));
        for (const auto& row : report.rows) {
            std::vector<double> r{row.s};
            r.insert(r.end(), row.c.begin(), row.c.end());
            rows.push_back(std::move(r));
        }
        max_abs = report.max_abs;
        worst_s = report.worst_s;
    }
    rep.pass = max_abs <= spec.tol;
    rep.doc["max_abs_coefficient"] = max_abs;
    rep.doc["witness"] = {{"s", worst_s}};
    rep.doc["samples"] = rows.size();

    std::vector<Polyline> lines;
    if (!rows.empty()) {
        for (std::size_t j = 1; j < rows.front().size(); ++j) {
            Polyline pl;
            for (const auto& r : rows) pl.points.push_back({r[0], r[j]});
            lines.push_back(std::move(pl));
        }
    }
    maybe_export(spec, rows, columns, lines);
    return rep;
}

RunReport run_translation(const JobSpec& spec, const TranslationCheckJob& job) {
    RunReport rep;
    if (job.nx < 2 || job.ny < 2) throw Error("translation-check: grid must be at least 2x2");
    std::vector<std::vector<double>> rows;
    double max_res = 0, max_diag = 0, max_obstruction = 0;
    double wx = job.surface.x0, wy = job.surface.y0;
    bool first = true;
    for (std::size_t i = 0; i < job.nx; ++i)
        for (std::size_t j = 0; j < job.ny; ++j) {
            const double x =
                job.surface.x0 + (job.surface.x1 - job.surface.x0) * double(i) / double(job.nx - 1);
            const double y =
                job.surface.y0 + (job.surface.y1 - job.surface.y0) * double(j) / double(job.ny - 1);
            const double r = translation::translation_residual(job.surface, job.params, x, y);
            const double d = translation::separation_diagnostic(job.surface, job.params, x, y);
            const double ob = job.params.lambda != 0.0
                                  ? translation::nonzero_lambda_obstruction(job.surface, job.params, x, y)
                                  : 0.0;
            rows.push_back({x, y, r, d, ob});
            if (first || std::abs(r) > max_res) {
                first = false;
                max_res = std::abs(r);
                wx = x;
                wy = y;
            }
            max_diag = std::max(max_diag, std::abs(d));
            max_obstruction = std::max(max_obstruction, std::abs(ob));
        }
    rep.pass = max_res <= spec.tol;
    rep.doc["max_abs_residual"] = max_res;
    rep.doc["max_abs_separation_diagnostic"] = max_diag;
    if (job.params.lambda != 0.0) rep.doc["max_abs_obstruction"] = max_obstruction;
    rep.doc["witness"] = witness_json(wx, wy, "x", "y");
    rep.doc["samples"] = rows.size();
    maybe_export(spec, rows, {"x", "y", "residual", "separation_diagnostic", "obstruction"}, {});
    return rep;
}

RunReport run_sweep(const JobSpec& spec, const SweepJob& job) {
    RunReport rep;
    std::vector<std::vector<double>> rows(job.steps);
    std::vector<char> passes(job.steps, 1);

    std::exception_ptr failure;
    std::mutex failure_mutex;
    numeric::parallel_for(job.steps, [&](std::size_t i) {
        try {
            const double v =
                job.steps == 1
                    ? job.from
                    : job.from + (job.to - job.from) * double(i) / double(job.steps - 1);
            SelfSimParams p = job.base;
            if (job.param == "alpha")
                p.alpha = v;
            else
                p.lambda = v;
            if (job.target == "circle-radii") {
                const auto radii = profile::circle_radii(p);
                std::vector<double> row{v};
                row.push_back(double(radii.size()));
                row.push_back(radii.size() > 0 ? radii[0] : std::nan(""));
                row.push_back(radii.size() > 1 ? radii[1] : std::nan(""));
                rows[i] = std::move(row);
            } else {
                const auto r = catalog::verify_catalog(*job.surface, p, job.ns, job.nt, spec.tol);
                rows[i] = {v, r.max_abs, r.pass ? 1.0 : 0.0};
                passes[i] = r.pass ? 1 : 0;
            }
        } catch (...) {
            const std::lock_guard<std::mutex> lock(failure_mutex);
            if (!failure) failure = std::current_exception();
        }
    });
    if (failure) std::rethrow_exception(failure);

    bool all_pass = true;
    for (char b : passes) all_pass = all_pass && b != 0;
    rep.pass = all_pass;
    rep.doc["rows"] = rows.size();
    json jrows = json::array();
    for (const auto& r : rows) {
        json jr = json::array();
        for (double cell : r) {
            if (std::isnan(cell))
                jr.push_back(nullptr);
            else
                jr.push_back(cell);
        }
        jrows.push_back(std::move(jr));
    }
    rep.doc["table"] = std::move(jrows);

    const std::vector<std::string> columns =
        job.target == "circle-radii"
            ? std::vector<std::string>{job.param, "count", "r1", "r2"}
            : std::vector<std::string>{job.param, "max_abs_residual", "pass"};
    rep.doc["columns"] = columns;
    maybe_export(spec, rows, columns, {});
    return rep;
}

} // namespace

RunReport run(const JobSpec& spec) {
    const auto start = std::chrono::steady_clock::now();
    RunReport rep;
    switch (spec.command) {
        case Command::Verify: rep = run_verify(spec, std::get<VerifyJob>(spec.payload)); break;
        case Command::Ode: rep = run_ode(spec, std::get<OdeJob>(spec.payload)); break;
        case Command::GraphOde: rep = run_graph_ode(spec, std::get<GraphOdeJob>(spec.payload)); break;
        case Command::RuledCoeffs: rep = run_ruled(spec, std::get<RuledCoeffsJob>(spec.payload)); break;
        case Command::TranslationCheck:
            rep = run_translation(spec, std::get<TranslationCheckJob>(spec.payload));
            break;
        case Command::Sweep: rep = run_sweep(spec, std::get<SweepJob>(spec.payload)); break;
    }
    rep.doc["command"] = command_name(spec.command);
    rep.doc["pass"] = rep.pass;
    rep.doc["tol"] = spec.tol;
    rep.doc["job"] = spec.echo;
    rep.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start)
                      .count();
    return rep;
}

} // namespace selfsim::job
