// Acceptance checks. One PASS/FAIL line per criterion; exit status is the
// number of failures (capped at 1).

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <string>
#include <vector>

#include "finsler/finsler.hpp"
#include "oracles.hpp"

using namespace finsler;

namespace {

int failures = 0;

void report(int id, const std::string& what, bool ok, const std::string& detail) {
    std::printf("%s criterion %d: %s [%s]\n", ok ? "PASS" : "FAIL", id, what.c_str(), detail.c_str());
    std::fflush(stdout);
    if (!ok) ++failures;
}

std::string fmt(const char* f, double a) {
    char buf[128];
    std::snprintf(buf, sizeof buf, f, a);
    return buf;
}

std::string fmt(const char* f, double a, double b) {
    char buf[160];
    std::snprintf(buf, sizeof buf, f, a, b);
    return buf;
}

/// Runs one criterion; an exception counts as a failure.
void criterion(int id, const std::string& what, const std::function<std::pair<bool, std::string>()>& body) {
    try {
        const auto [ok, detail] = body();
        report(id, what, ok, detail);
    } catch (const std::exception& e) {
        report(id, what, false, std::string("exception: ") + e.what());
    }
}

ScalarField field(const std::string& text, int n) { return Expression::parse(text, n).function(); }

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string num17(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "(%.17g)", v);
    return buf;
}

MetricSpec custom_randers_like() {
    return custom_metric(2, "sqrt((1 + x1^2)*y1^2 + y2^2) + 0.3*y1", 1.0);
}

std::vector<MetricSpec> all_catalog(int n) {
    std::vector<MetricSpec> v{euclidean(n), sphere(n), hyperbolic(n), funk(n), perturbed_randers(n)};
    if (n == 2) {
        v.push_back(randers_constant({2.0, 0.3, 0.3, 1.0}, {0.2, 0.4}));
        v.push_back(custom_randers_like());
    }
    return v;
}

double g_trace(const Tensor& ginv, const Tensor& B) {
    double s = 0.0;
    for (int i = 0; i < B.dim(); ++i)
        for (int j = 0; j < B.dim(); ++j) s += ginv(i, j) * B(i, j);
    return s;
}

/// Chern Γ from F^2 values: 1/2 g^il (δ_j g_lk + δ_k g_jl - δ_l g_jk), δ_j = ∂x_j - N^s_j ∂y_s.
Tensor christoffel_fd(const oracle::Fn& F2, const TangentPoint& tp) {
    const int n = tp.dim();
    const std::vector<double> z = tp.joined();
    const auto sz = static_cast<std::size_t>(n);
    Eigen::MatrixXd g(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) g(i, j) = 0.5 * oracle::fd(F2, z, {n + i, n + j});
    const Eigen::MatrixXd ginv = g.inverse();
    // N^s_j = ∂G^s/∂y^j
    std::vector<double> N(sz * sz);
    for (int s = 0; s < n; ++s) {
        const oracle::Fn Gs = [&, s](std::span<const double> w) {
            TangentPoint q{{w.begin(), w.begin() + n}, {w.begin() + n, w.end()}};
            return oracle::spray_fd(F2, q)[static_cast<std::size_t>(s)];
        };
        for (int j = 0; j < n; ++j) N[static_cast<std::size_t>(s * n + j)] = oracle::fd(Gs, z, {n + j}, 1e-2);
    }
    const auto dg = [&](int j, int a, int b) {  // δ_j g_ab
        double v = 0.5 * oracle::fd(F2, z, {j, n + a, n + b});
        for (int s = 0; s < n; ++s) v -= N[static_cast<std::size_t>(s * n + j)] * 0.5 * oracle::fd(F2, z, {n + s, n + a, n + b});
        return v;
    };
    Tensor G(n, {Variance::upper, Variance::lower, Variance::lower});
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k) {
                double v = 0.0;
                for (int l = 0; l < n; ++l) v += 0.5 * ginv(i, l) * (dg(j, l, k) + dg(k, j, l) - dg(l, j, k));
                G(i, j, k) = v;
            }
    return G;
}

double rel_err(double got, double want, double ref) {
    return std::abs(got - want) / std::max(std::abs(want), 1e-3 * std::max(1.0, ref));
}

}  // namespace

int main() {
    const EngineOptions eo = EngineOptions::from_environment();

    criterion(1, "Z tensor vanishes on euclidean, sphere, hyperbolic", [&] {
        const auto t0 = std::chrono::steady_clock::now();
        double worst = 0.0;
        for (int n : {2, 3})
            for (const auto& spec : {euclidean(n), sphere(n), hyperbolic(n)}) {
                const auto rep = integrability_report(spec, sample_points(spec, 100), std::nullopt, 1e-5, eo);
                worst = std::max(worst, rep.scaled_Z);
            }
        const double dt = seconds_since(t0);
        return std::pair{worst <= 1e-5 && dt <= 60.0, fmt("scaled sup|Z| = %.3g over n=2,3; %.2f s", worst, dt)};
    });

    criterion(2, "scalar-curvature Z tensor vanishes on funk and sphere", [&] {
        double worst = 0.0, raw = 0.0;
        for (int n : {2, 3})
            for (const auto& spec : {funk(n), sphere(n)}) {
                const auto rep = integrability_report(spec, sample_points(spec, 100), std::nullopt, 1e-4, eo);
                worst = std::max(worst, rep.scaled_Zscalar);
                raw = std::max(raw, rep.sup_Zscalar);
            }
        return std::pair{raw <= 1e-4, fmt("sup|Zscalar| = %.3g (scaled %.3g)", raw, worst)};
    });

    criterion(3, "Schwarzian tensor symmetric, traceless; stereographic factor is Mobius", [&] {
        const std::vector<std::string> phis{"0.7", "0.3*x1 - 0.2*x2", "x1^2 + x1*x2", "sin(x1)*exp(0.5*x2)",
                                            "log(1 + x1^2 + 2*x2^2)"};
        double sym = 0.0, tr = 0.0;
        for (const auto& spec : {sphere(2), funk(2), perturbed_randers(2)})
            for (const auto& text : phis) {
                const ScalarField phi = field(text, 2);
                for (const auto& tp : sample_points(spec, 20)) {
                    const PointGeometry geo = compute_geometry(spec, tp, 3, eo);
                    const Tensor B = schwarzian_tensor(geo, phi);
                    const double scale = 1.0 + hessian(geo, phi).max_abs();
                    sym = std::max(sym, B.symmetry_defect(0, 1) / scale);
                    tr = std::max(tr, std::abs(g_trace(geo.ginv, B)) / scale);
                }
            }
        double stereo = 0.0;
        for (int n : {2, 3}) {
            std::string r2 = "x1^2";
            for (int i = 2; i <= n; ++i) r2 += " + x" + std::to_string(i) + "^2";
            const MetricSpec e = euclidean(n);
            stereo = std::max(stereo, mobius_residual(e, field("log(2/(1 + " + r2 + "))", n), sample_points(e, 50), eo));
        }
        const bool ok = sym <= 1e-9 && tr <= 1e-9 && stereo <= 1e-6;
        return std::pair{ok, fmt("symmetry %.2g, trace %.2g", sym, tr) + fmt(", stereographic sup|B| = %.2g", stereo)};
    });

    criterion(4, "1-D Schwarzian kernel is fractional-linear; S(tan as) = 2a^2", [&] {
        UniformSource src(kDefaultSeed);
        double worst = 0.0;
        int transforms = 0;
        while (transforms < 10) {
            const double a = src.uniform(-2, 2), b = src.uniform(-2, 2), c = src.uniform(-2, 2), d = src.uniform(-2, 2);
            if (std::abs(a * d - b * c) < 0.1) continue;
            ++transforms;
            const Function T = field("(" + num17(a) + "*x1 + " + num17(b) + ")/(" + num17(c) + "*x1 + " + num17(d) + ")", 1);
            int pts = 0;
            while (pts < 5) {
                const double s = src.uniform(-2, 2);
                if (std::abs(c * s + d) < 0.5) continue;
                ++pts;
                worst = std::max(worst, std::abs(schwarzian_1d(T, s)));
            }
        }
        double tan_rel = 0.0;
        for (double a : {0.5, 1.0, 3.0})
            for (double s : {-0.2, 0.1, 0.3}) {
                const double S = schwarzian_1d(field("tan(" + num17(a) + "*x1)", 1), s);
                tan_rel = std::max(tan_rel, std::abs(S - 2 * a * a) / (2 * a * a));
            }
        return std::pair{worst <= 1e-10 && tan_rel <= 1e-9, fmt("max|S(T)| = %.2g, tan relative error %.2g", worst, tan_rel)};
    });

    criterion(5, "projective parameter on sphere geodesics", [&] {
        const MetricSpec s = sphere(2);
        UniformSource src(kDefaultSeed);
        double tan_rel = 0.0, resid = 0.0, gauge = 0.0;
        const ProjectiveInitial other{0.5, 2.0, 0.3};
        const double B = -other.ddp / (2.0 * other.dp);  // T(u) = p0 + dp u / (1 + B u)
        for (int k = 0; k < 5; ++k) {
            TangentPoint tp{{src.uniform(-0.5, 0.5), src.uniform(-0.5, 0.5)}, {0, 0}};
            tp.y = sample_transverse(src, std::vector<double>{1.0, 0.0});
            tp = normalized(s, tp);
            const Trajectory t = geodesic(s, tp.x, tp.y, 1.4, kDefaultStep, eo);
            const ProjectiveParameter pp = projective_parameter(s, t, {}, eo);
            for (std::size_t i = 0; i < pp.s.size(); ++i)
                tan_rel = std::max(tan_rel, std::abs(pp.p[i] - std::tan(pp.s[i])) / std::max(1.0, std::abs(std::tan(pp.s[i]))));
            resid = std::max(resid, schwarzian_residual_of_p(s, t, pp, eo));
            const ProjectiveParameter pq = projective_parameter(s, t, other, eo);
            for (std::size_t i = 0; i < pq.s.size(); ++i) {
                const double want = other.p + other.dp * pp.p[i] / (1.0 + B * pp.p[i]);
                gauge = std::max(gauge, std::abs(pq.p[i] - want) / std::max(1.0, std::abs(want)));
            }
            resid = std::max(resid, schwarzian_residual_of_p(s, t, pq, eo));
        }
        const bool ok = tan_rel <= 1e-6 && resid <= 1e-6 && gauge <= 1e-5;
        return std::pair{ok, fmt("tan relative %.2g, residual %.2g", tan_rel, resid) + fmt(", gauge %.2g", gauge)};
    });

    criterion(6, "Bonnet-Myers conjugate distance on spheres; flat violates hypothesis", [&] {
        bool ok = true;
        std::string detail;
        for (double kappa : {0.25, 1.0, 4.0}) {
            const BonnetReport r = bonnet_myers_check(sphere(2, kappa), kappa, {}, eo);
            double worst = 0.0;
            for (const auto& g : r.geodesics)
                worst = std::max(worst, g.conjugate_distance ? std::abs(*g.conjugate_distance - r.bound) : INFINITY);
            ok = ok && r.pass && r.geodesics.size() == 10 && worst <= 1e-2;
            detail += fmt("k=%.2g: max|s*-pi/sqrt k| = %.2g; ", kappa, worst);
        }
        const BonnetReport flat = bonnet_myers_check(euclidean(2), 1.0, {}, eo);
        ok = ok && flat.hypothesis_violated && !flat.pass;
        detail += flat.hypothesis_violated ? "flat: hypothesis-violated" : "flat: not flagged";
        return std::pair{ok, detail};
    });

    criterion(7, "concircular function on the sphere", [&] {
        const MetricSpec s = sphere(2);
        const ScalarField rho = field("(1 - x1^2 - x2^2)/(1 + x1^2 + x2^2)", 2);
        double worst = 0.0;
        for (const auto& tp : sample_points(s, 50)) worst = std::max(worst, concircular_residual(s, rho, 1.0, tp, eo).max_abs());
        return std::pair{worst <= 1e-5, fmt("sup residual %.2g", worst)};
    });

    criterion(8, "structural identities on every catalog metric", [&] {
        double worst = 0.0;
        std::string worst_name;
        bool ok = true;
        for (int n : {2, 3})
            for (const auto& spec : all_catalog(n)) {
                for (const auto& r : invariant_suite(spec, sample_points(spec, 50), kInvariantTol, eo)) {
                    ok = ok && r.pass;
                    if (r.value >= worst) {
                        worst = r.value;
                        worst_name = spec.name() + "/" + r.name;
                    }
                }
            }
        return std::pair{ok, fmt("worst scaled defect %.2g", worst) + " at " + worst_name};
    });

    criterion(9, "automatic vs finite-difference derivatives", [&] {
        UniformSource src(7);
        const std::vector<MetricSpec> metrics = all_catalog(2);
        double f2 = 0.0, gs = 0.0, gam = 0.0;
        int count = 0;
        for (int k = 0; k < 40; ++k, ++count) {
            const MetricSpec& spec = metrics[static_cast<std::size_t>(k) % metrics.size()];
            const TangentPoint tp = sample_points(spec, 1, 100 + static_cast<std::uint64_t>(k))[0];
            const int order = 1 + k % 3;
            std::vector<int> vars;
            for (int o = 0; o < order; ++o) vars.push_back(static_cast<int>(src.next() * 4));
            const std::vector<double> z = tp.joined();
            const double ad = partial(spec.norm_squared(), z, MultiIndex::from_variables(4, vars), eo);
            const double fd = oracle::fd([&](std::span<const double> w) { return spec.norm_squared()(w); }, z, vars);
            f2 = std::max(f2, rel_err(ad, fd, spec.norm_squared()(z)));
        }
        for (int k = 0; k < 10; ++k) {
            const MetricSpec& spec = metrics[static_cast<std::size_t>(k + 3) % metrics.size()];
            const TangentPoint tp = sample_points(spec, 1, 200 + static_cast<std::uint64_t>(k))[0];
            const oracle::Fn F2 = [&](std::span<const double> w) { return spec.norm_squared()(w); };
            const PointGeometry geo = compute_geometry(spec, tp, 3, eo);
            const auto G = oracle::spray_fd(F2, tp);
            const double gref = geo.spray.max_abs();
            for (int i = 0; i < 2; ++i, ++count) gs = std::max(gs, rel_err(geo.spray(i), G[static_cast<std::size_t>(i)], gref));
            const Tensor C = christoffel_fd(F2, tp);
            const double cref = C.max_abs();
            for (int i = 0; i < 2; ++i)
                for (int j = 0; j < 2; ++j)
                    for (int l = j; l < 2; ++l, ++count) gam = std::max(gam, rel_err(geo.christoffel(i, j, l), C(i, j, l), cref));
        }
        const bool ok = f2 <= 1e-5 && gs <= 1e-5 && gam <= 1e-5 && count >= 100;
        return std::pair{ok, std::to_string(count) + " partials; " + fmt("F^2 %.2g, G %.2g", f2, gs) + fmt(", Gamma %.2g", gam)};
    });

    criterion(10, "Funk vs flat projective factor equals F/2", [&] {
        double worst = 0.0;
        for (int n : {2, 3}) {
            const MetricSpec f = funk(n);
            const MetricSpec e = euclidean(n);
            for (const auto& tp : sample_points(f, 30)) {
                const auto p = projective_factor(e, f, tp, eo);
                if (!p) return std::pair{false, std::string("projective factor not found")};
                const double want = 0.5 * funk_norm(tp.x, tp.y);
                worst = std::max(worst, std::abs(*p - want) / want);
            }
        }
        return std::pair{worst <= 1e-5, fmt("max relative error %.2g", worst)};
    });

    std::printf("%d criteria failed\n", failures);
    return failures == 0 ? 0 : 1;
}
