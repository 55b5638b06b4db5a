#include "cli.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "finsler/finsler.hpp"

namespace finsler::cli {

namespace {

using nlohmann::json;

struct Options {
    std::string metric;
    std::string config;
    int n = 2;
    std::string params;
    std::string x, y, flag;
    std::optional<double> length;
    double step = kDefaultStep;
    double lambda = 1.0;
    int geodesics = 10;
    int samples = 0;
    std::string phi;
    std::string out;
    std::string format = "json";
    std::uint64_t seed = kDefaultSeed;
    std::optional<double> tol;
};

std::vector<double> parse_list(const std::string& text, const char* what) {
    std::vector<double> v;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        std::size_t used = 0;
        double d = 0.0;
        try {
            d = std::stod(item, &used);
        } catch (const std::exception&) {
            used = 0;
        }
        if (used == 0 || used != item.size()) throw InvalidParameter(std::string("bad number in --") + what + ": '" + item + "'");
        v.push_back(d);
    }
    if (v.empty()) throw InvalidParameter(std::string("--") + what + " is empty");
    return v;
}

MetricSpec build_metric(const Options& o) {
    if (!o.config.empty()) {
        if (!o.metric.empty() || !o.params.empty()) throw InvalidParameter("--config excludes --metric and --params");
        return load_metric_config(o.config);
    }
    if (o.metric.empty()) throw InvalidParameter("a metric is required (--metric or --config)");
    json params = json::object();
    if (!o.params.empty()) {
        try {
            params = json::parse(o.params);
        } catch (const json::exception& e) {
            throw InvalidParameter(std::string("--params is not valid JSON: ") + e.what());
        }
    }
    return catalog(o.metric, o.n, params);
}

std::vector<double> vector_or(const std::string& text, const char* what, int n, std::vector<double> fallback) {
    std::vector<double> v = text.empty() ? std::move(fallback) : parse_list(text, what);
    if (static_cast<int>(v.size()) != n) {
        throw InvalidParameter(std::string("--") + what + " needs " + std::to_string(n) + " components");
    }
    return v;
}

std::vector<double> default_x(int n) {
    std::vector<double> x(static_cast<std::size_t>(n), 0.0);
    x[0] = 0.3;
    return x;
}

std::vector<double> default_y(int n) {
    std::vector<double> y(static_cast<std::size_t>(n), 0.0);
    y[1] = 1.0;
    return y;
}

TangentPoint point_of(const Options& o, const MetricSpec& spec, bool unit) {
    const int n = spec.dim();
    TangentPoint tp{vector_or(o.x, "x", n, default_x(n)), vector_or(o.y, "y", n, default_y(n))};
    if (!spec.contains(tp.x)) throw DomainError("point lies outside the metric's chart");
    spec.check_admissible(tp);
    return unit ? normalized(spec, tp) : tp;
}

ScalarField scalar_field(const std::string& text, int n) {
    return Expression::parse(text, n).function();
}

json tensor_json(const Tensor& t) {
    const int n = t.dim();
    const int r = t.rank();
    std::function<json(std::vector<int>&)> rec = [&](std::vector<int>& idx) -> json {
        if (static_cast<int>(idx.size()) == r) return t.at(idx);
        json arr = json::array();
        for (int i = 0; i < n; ++i) {
            idx.push_back(i);
            arr.push_back(rec(idx));
            idx.pop_back();
        }
        return arr;
    };
    std::vector<int> idx;
    return rec(idx);
}

std::string num(double v) {
    if (!std::isfinite(v)) return std::isnan(v) ? "nan" : (v > 0 ? "inf" : "-inf");
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void tensor_rows(std::ostream& os, const std::string& name, const Tensor& t) {
    const int n = t.dim();
    const int r = t.rank();
    std::vector<int> idx(static_cast<std::size_t>(r), 0);
    for (std::size_t flat = 0; flat < t.size(); ++flat) {
        os << name << ',';
        for (int s = 0; s < r; ++s) os << (s ? "." : "") << idx[static_cast<std::size_t>(s)] + 1;
        os << ',' << num(t.at(idx)) << '\n';
        for (int s = r - 1; s >= 0; --s) {
            if (++idx[static_cast<std::size_t>(s)] < n) break;
            idx[static_cast<std::size_t>(s)] = 0;
        }
    }
}

void scalar_row(std::ostream& os, const std::string& name, double v) { os << name << ",," << num(v) << '\n'; }

void verdict_rows(std::ostream& os, const json& report) {
    if (!report.contains("verdicts")) return;
    for (const auto& [k, v] : report["verdicts"].items()) os << "verdict:" << k << ",," << (v.get<bool>() ? "pass" : "fail") << '\n';
}

bool verdicts_pass(const json& report) {
    if (!report.contains("verdicts")) return true;
    for (const auto& [k, v] : report["verdicts"].items()) {
        if (!v.get<bool>()) return false;
    }
    return true;
}

/// Writes the report (json) or the csv rendering to --out or the output stream.
int emit(const Options& o, std::ostream& out, const json& report, const std::function<void(std::ostream&)>& csv) {
    std::ostringstream buf;
    if (o.format == "csv") {
        csv(buf);
    } else {
        buf << report.dump(2) << '\n';
    }
    if (o.out.empty()) {
        out << buf.str();
    } else {
        std::ofstream f(o.out, std::ios::binary);
        if (!f) throw InvalidParameter("cannot open output file '" + o.out + "'");
        f << buf.str();
        if (!f) throw InvalidParameter("failed writing '" + o.out + "'");
        json brief{{"command", report.value("command", "")}, {"out", o.out}, {"pass", verdicts_pass(report)}};
        out << brief.dump() << '\n';
    }
    return verdicts_pass(report) ? kExitPass : kExitVerdictFailure;
}

std::vector<double> default_flag(const TangentPoint& tp) {
    const int n = static_cast<int>(tp.y.size());
    int best = 0;
    for (int i = 1; i < n; ++i) {
        if (std::abs(tp.y[static_cast<std::size_t>(i)]) < std::abs(tp.y[static_cast<std::size_t>(best)])) best = i;
    }
    std::vector<double> X(static_cast<std::size_t>(n), 0.0);
    X[static_cast<std::size_t>(best)] = 1.0;
    return X;
}

int cmd_tensors(const Options& o, const EngineOptions& eo, std::ostream& out) {
    const MetricSpec spec = build_metric(o);
    const TangentPoint tp = point_of(o, spec, false);
    const int n = spec.dim();
    const PointGeometry geo = compute_geometry(spec, tp, 4, eo);
    const Tensor Rk = riemann_operator(geo);
    const Tensor ric_ij = ricci_tensor(spec, tp, eo);
    const std::vector<double> X = o.flag.empty() ? default_flag(tp) : vector_or(o.flag, "flag", n, {});
    const double kappa = flag_curvature(geo, X);

    json r;
    r["command"] = "tensors";
    r["metric"] = spec.name();
    r["x"] = tp.x;
    r["y"] = tp.y;
    r["flag"] = X;
    r["F"] = geo.F;
    r["g"] = tensor_json(geo.g);
    r["ginv"] = tensor_json(geo.ginv);
    r["spray"] = tensor_json(geo.spray);
    r["nonlinear"] = tensor_json(geo.nonlinear);
    r["christoffel"] = tensor_json(geo.christoffel);
    r["cartan"] = tensor_json(geo.cartan_low);
    r["chern"] = tensor_json(geo.chern);
    r["spray_curvature"] = tensor_json(geo.spray_curv);
    r["riemann"] = tensor_json(Rk);
    r["ricci"] = geo.ricci;
    r["ricci_per_F2"] = geo.ricci / geo.F2;
    r["ricci_tensor"] = tensor_json(ric_ij);
    r["flag_curvature"] = kappa;
    return emit(o, out, r, [&](std::ostream& os) {
        os << "quantity,index,value\n";
        scalar_row(os, "F", geo.F);
        tensor_rows(os, "g", geo.g);
        tensor_rows(os, "ginv", geo.ginv);
        tensor_rows(os, "spray", geo.spray);
        tensor_rows(os, "nonlinear", geo.nonlinear);
        tensor_rows(os, "christoffel", geo.christoffel);
        tensor_rows(os, "cartan", geo.cartan_low);
        tensor_rows(os, "chern", geo.chern);
        tensor_rows(os, "spray_curvature", geo.spray_curv);
        tensor_rows(os, "riemann", Rk);
        scalar_row(os, "ricci", geo.ricci);
        scalar_row(os, "ricci_per_F2", geo.ricci / geo.F2);
        tensor_rows(os, "ricci_tensor", ric_ij);
        scalar_row(os, "flag_curvature", kappa);
    });
}

int cmd_check(const Options& o, const EngineOptions& eo, std::ostream& out) {
    const MetricSpec spec = build_metric(o);
    const int count = o.samples > 0 ? o.samples : 100;
    const auto sample = sample_points(spec, count, o.seed);
    std::optional<ScalarField> phi;
    if (!o.phi.empty()) phi = scalar_field(o.phi, spec.dim());
    const IntegrabilityReport rep = integrability_report(spec, sample, phi, o.tol.value_or(kDefaultIntegrabilityTol), eo);
    const auto inv = invariant_suite(spec, sample, kInvariantTol, eo);

    json r = rep.to_json();
    r["command"] = "check";
    r["seed"] = o.seed;
    r["scaled_Z"] = rep.scaled_Z;
    r["scaled_Zscalar"] = rep.scaled_Zscalar;
    r["scaled_B"] = rep.scaled_B ? json(*rep.scaled_B) : json(nullptr);
    json invj = json::object();
    for (const auto& i : inv) {
        invj[i.name] = {{"value", i.value}, {"tol", i.tol}, {"pass", i.pass}};
        r["verdicts"][i.name] = i.pass;
    }
    r["invariants"] = invj;
    return emit(o, out, r, [&](std::ostream& os) {
        os << "quantity,index,value\n";
        scalar_row(os, "sup_Z", rep.sup_Z);
        scalar_row(os, "sup_Zscalar", rep.sup_Zscalar);
        if (rep.sup_B) scalar_row(os, "sup_B", *rep.sup_B);
        scalar_row(os, "scaled_Z", rep.scaled_Z);
        scalar_row(os, "scaled_Zscalar", rep.scaled_Zscalar);
        if (rep.scaled_B) scalar_row(os, "scaled_B", *rep.scaled_B);
        for (const auto& i : inv) scalar_row(os, i.name, i.value);
        verdict_rows(os, r);
    });
}

int emit_trajectory(const Options& o, std::ostream& out, json r, const Trajectory& t) {
    return emit(o, out, r, [&](std::ostream& os) { t.write_csv(os); });
}

int cmd_geodesic(const Options& o, const EngineOptions& eo, std::ostream& out) {
    const MetricSpec spec = build_metric(o);
    const TangentPoint tp = point_of(o, spec, true);
    const Trajectory t = geodesic(spec, tp.x, tp.y, o.length.value_or(1.0), o.step, eo);
    const double tol = o.tol.value_or(1e-8);
    json r = t.summary();
    r["command"] = "geodesic";
    r["tol"] = tol;
    r["verdicts"] = {{"speed", t.speed_drift() <= tol}};
    return emit_trajectory(o, out, r, t);
}

int cmd_conjugate(const Options& o, const EngineOptions& eo, std::ostream& out) {
    const MetricSpec spec = build_metric(o);
    const TangentPoint tp = point_of(o, spec, true);
    const Trajectory t = geodesic(spec, tp.x, tp.y, o.length.value_or(4.0), o.step, eo);
    const ConjugateResult c = conjugate_search(spec, t, eo);
    json r = c.jacobi.trajectory.summary();
    r["command"] = "conjugate";
    r["conjugate_distance"] = c.distance ? json(*c.distance) : json(nullptr);
    r["ill_conditioned"] = c.ill_conditioned;
    r["wronskian_defect"] = c.jacobi.wronskian_defect();
    r["verdicts"] = {{"found", c.distance.has_value()}};
    return emit_trajectory(o, out, r, c.jacobi.trajectory);
}

int cmd_projparam(const Options& o, const EngineOptions& eo, std::ostream& out) {
    const MetricSpec spec = build_metric(o);
    const TangentPoint tp = point_of(o, spec, true);
    const Trajectory t = geodesic(spec, tp.x, tp.y, o.length.value_or(1.4), o.step, eo);
    const ProjectiveParameter pp = projective_parameter(spec, t, {}, eo);
    const double res = schwarzian_residual_of_p(spec, t, pp, eo);
    const double tol = o.tol.value_or(1e-6);
    json r = pp.trajectory.summary();
    r["command"] = "projparam";
    r["initial"] = {{"p", pp.initial.p}, {"dp", pp.initial.dp}, {"ddp", pp.initial.ddp}};
    r["p_end"] = pp.p.empty() ? json(nullptr) : json(pp.p.back());
    r["schwarzian_residual"] = res;
    r["tol"] = tol;
    r["verdicts"] = {{"residual", res <= tol}, {"no_blow_up", !pp.blow_up}};
    return emit_trajectory(o, out, r, pp.trajectory);
}

int cmd_bonnet(const Options& o, const EngineOptions& eo, std::ostream& out) {
    const MetricSpec spec = build_metric(o);
    BonnetOptions bo;
    bo.n_geodesics = o.geodesics;
    bo.length = o.length;
    bo.step = o.step;
    bo.seed = o.seed;
    if (o.tol) bo.equivalence_tol = *o.tol;
    const BonnetReport rep = bonnet_myers_check(spec, o.lambda, bo, eo);
    json r = rep.to_json();
    r["command"] = "bonnet";
    r["verdicts"] = {{"bonnet", rep.pass}};
    return emit(o, out, r, [&](std::ostream& os) {
        os << "index";
        for (int i = 1; i <= spec.dim(); ++i) os << ",x0_" << i;
        for (int i = 1; i <= spec.dim(); ++i) os << ",y0_" << i;
        os << ",min_ricci_ratio,equivalence_error,conjugate_distance,status\n";
        for (std::size_t k = 0; k < rep.geodesics.size(); ++k) {
            const auto& g = rep.geodesics[k];
            os << k;
            for (double v : g.x0) os << ',' << num(v);
            for (double v : g.y0) os << ',' << num(v);
            os << ',' << num(g.min_ricci_ratio) << ',' << num(g.equivalence_error) << ','
               << (g.conjugate_distance ? num(*g.conjugate_distance) : std::string("none")) << ',' << g.status << '\n';
        }
    });
}

int cmd_mobius(const Options& o, const EngineOptions& eo, std::ostream& out) {
    const MetricSpec spec = build_metric(o);
    if (o.phi.empty()) throw InvalidParameter("mobius needs --phi");
    const ScalarField phi = scalar_field(o.phi, spec.dim());
    const int count = o.samples > 0 ? o.samples : 50;
    const auto sample = sample_points(spec, count, o.seed);
    const double tol = o.tol.value_or(1e-6);
    double sup_b = 0.0, sup_c = 0.0, sym = 0.0, trace = 0.0;
    for (const auto& tp : sample) {
        const PointGeometry geo = compute_geometry(spec, tp, 3, eo);
        const Tensor B = schwarzian_tensor(geo, phi);
        sup_b = std::max(sup_b, B.max_abs());
        sym = std::max(sym, B.symmetry_defect(0, 1));
        double tr = 0.0;
        for (int i = 0; i < spec.dim(); ++i)
            for (int j = 0; j < spec.dim(); ++j) tr += geo.ginv(i, j) * B(i, j);
        trace = std::max(trace, std::abs(tr));
        sup_c = std::max(sup_c, c_conformal_residual(spec, phi, tp, eo).max_abs());
    }
    json r;
    r["command"] = "mobius";
    r["metric"] = spec.name();
    r["phi"] = o.phi;
    r["n_samples"] = count;
    r["seed"] = o.seed;
    r["mobius_residual"] = sup_b;
    r["c_conformal_residual"] = sup_c;
    r["symmetry_defect"] = sym;
    r["trace_defect"] = trace;
    r["tol"] = tol;
    r["verdicts"] = {{"mobius", sup_b <= tol}};
    return emit(o, out, r, [&](std::ostream& os) {
        os << "quantity,index,value\n";
        scalar_row(os, "mobius_residual", sup_b);
        scalar_row(os, "c_conformal_residual", sup_c);
        scalar_row(os, "symmetry_defect", sym);
        scalar_row(os, "trace_defect", trace);
        verdict_rows(os, r);
    });
}

void add_metric(CLI::App* s, Options& o) {
    s->add_option("--metric", o.metric, "catalog metric (" + [] {
        std::string names;
        for (const auto& n : catalog_names()) names += (names.empty() ? "" : ", ") + n;
        return names;
    }() + ")");
    s->add_option("--config", o.config, "metric config file (JSON)");
    s->add_option("--n", o.n, "dimension")->check(CLI::Range(2, 16));
    s->add_option("--params", o.params, "metric parameters as a JSON object");
    s->add_option("--out", o.out, "write the report here instead of stdout");
    s->add_option("--format", o.format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
}

void add_point(CLI::App* s, Options& o) {
    s->add_option("--x", o.x, "base point, comma separated");
    s->add_option("--y", o.y, "direction, comma separated");
}

void add_integration(CLI::App* s, Options& o) {
    s->add_option("--length", o.length, "arc length")->check(CLI::PositiveNumber);
    s->add_option("--step", o.step, "RK4 step")->check(CLI::PositiveNumber);
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    Options o;
    CLI::App app{"Numerical Finsler geometry", "finsler"};
    app.require_subcommand(1);
    app.set_help_all_flag("--help-all", "help for all subcommands");

    using Handler = int (*)(const Options&, const EngineOptions&, std::ostream&);
    std::map<const CLI::App*, Handler> handlers;

    auto* tensors = app.add_subcommand("tensors", "tensor dump at one tangent point");
    add_metric(tensors, o);
    add_point(tensors, o);
    tensors->add_option("--flag", o.flag, "flag vector for the flag curvature");
    handlers[tensors] = cmd_tensors;

    auto* check = app.add_subcommand("check", "invariant suite and integrability report");
    add_metric(check, o);
    check->add_option("--samples", o.samples, "sample size")->check(CLI::PositiveNumber);
    check->add_option("--seed", o.seed, "sampling seed");
    check->add_option("--phi", o.phi, "conformal factor expression in x1..xn");
    check->add_option("--tol", o.tol, "integrability tolerance")->check(CLI::PositiveNumber);
    handlers[check] = cmd_check;

    auto* geo = app.add_subcommand("geodesic", "unit-speed geodesic");
    add_metric(geo, o);
    add_point(geo, o);
    add_integration(geo, o);
    geo->add_option("--tol", o.tol, "speed drift tolerance")->check(CLI::PositiveNumber);
    handlers[geo] = cmd_geodesic;

    auto* conj = app.add_subcommand("conjugate", "first conjugate point along a geodesic");
    add_metric(conj, o);
    add_point(conj, o);
    add_integration(conj, o);
    handlers[conj] = cmd_conjugate;

    auto* proj = app.add_subcommand("projparam", "projective parameter along a geodesic");
    add_metric(proj, o);
    add_point(proj, o);
    add_integration(proj, o);
    proj->add_option("--tol", o.tol, "Schwarzian residual tolerance")->check(CLI::PositiveNumber);
    handlers[proj] = cmd_projparam;

    auto* bon = app.add_subcommand("bonnet", "Bonnet-Myers conjugate distance check");
    add_metric(bon, o);
    add_integration(bon, o);
    bon->add_option("--lambda", o.lambda, "Ricci lower bound")->check(CLI::PositiveNumber);
    bon->add_option("--geodesics", o.geodesics, "number of geodesics")->check(CLI::PositiveNumber);
    bon->add_option("--seed", o.seed, "start point seed");
    bon->add_option("--tol", o.tol, "equivalence tolerance")->check(CLI::PositiveNumber);
    handlers[bon] = cmd_bonnet;

    auto* mob = app.add_subcommand("mobius", "Schwarzian tensor of a conformal factor");
    add_metric(mob, o);
    mob->add_option("--phi", o.phi, "conformal factor expression in x1..xn")->required();
    mob->add_option("--samples", o.samples, "sample size")->check(CLI::PositiveNumber);
    mob->add_option("--seed", o.seed, "sampling seed");
    mob->add_option("--tol", o.tol, "residual tolerance")->check(CLI::PositiveNumber);
    handlers[mob] = cmd_mobius;

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitPass : kExitError;
    }

    try {
        const EngineOptions eo = EngineOptions::from_environment();
        for (const auto& [sub, handler] : handlers) {
            if (sub->parsed()) return handler(o, eo, out);
        }
        err << "error: no subcommand\n";
        return kExitError;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kExitError;
    }
}

}  // namespace finsler::cli
