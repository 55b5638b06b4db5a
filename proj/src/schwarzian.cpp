#include "finsler/schwarzian.hpp"

#include <algorithm>
#include <cmath>

#include "finsler/curvature.hpp"

namespace finsler {

namespace {

constexpr int kConnectionDepth = 3;
constexpr int kCurvatureDepth = 4;

void require_scalar_field(const ScalarField& phi, int n) {
    if (phi.arity() != n) throw InvalidParameter("scalar field must be a function of x");
}

ConformalFactor factor_at(const PointGeometry& geo, const ScalarField& phi) {
    const int n = geo.n;
    ConformalFactor cf;
    const Jet pj = taylor(phi, geo.tp.x, 1);
    cf.phi_i.resize(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) cf.phi_i[static_cast<std::size_t>(i)] = pj.first_derivative(i);
    cf.phi_up.assign(static_cast<std::size_t>(n), 0.0);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            cf.phi_up[static_cast<std::size_t>(i)] += geo.ginv(i, j) * cf.phi_i[static_cast<std::size_t>(j)];
    for (int i = 0; i < n; ++i) cf.grad_norm2 += cf.phi_up[static_cast<std::size_t>(i)] * cf.phi_i[static_cast<std::size_t>(i)];
    const Tensor H = hessian(geo, phi);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) cf.laplacian += geo.ginv(i, j) * H(i, j);
    cf.Phi = (cf.laplacian - cf.grad_norm2) / n;
    return cf;
}

double local_scale(const Tensor& t) { return 1.0 + t.max_abs(); }

}  // namespace

ConformalFactor conformal_factor(const MetricSpec& spec, const ScalarField& phi, const TangentPoint& tp,
                                 bool with_derivative, const EngineOptions& options) {
    const int n = spec.dim();
    require_scalar_field(phi, n);
    const PointGeometry geo = compute_geometry(spec, tp, kConnectionDepth, options);
    ConformalFactor cf = factor_at(geo, phi);
    if (!with_derivative) return cf;

    const auto Phi_at = [&](int var, double s) {
        TangentPoint q = tp;
        if (var < n) {
            q.x[static_cast<std::size_t>(var)] += s;
        } else {
            q.y[static_cast<std::size_t>(var - n)] += s;
        }
        return factor_at(compute_geometry(spec, q, kConnectionDepth, options), phi).Phi;
    };
    const auto d = [&](int var) {
        const double base = var < n ? tp.x[static_cast<std::size_t>(var)] : tp.y[static_cast<std::size_t>(var - n)];
        const double h = 1e-4 * (1.0 + std::abs(base));
        const double coarse = (Phi_at(var, h) - Phi_at(var, -h)) / (2.0 * h);
        const double fine = (Phi_at(var, 0.5 * h) - Phi_at(var, -0.5 * h)) / h;
        return (4.0 * fine - coarse) / 3.0;
    };
    std::vector<double> dy(static_cast<std::size_t>(n));
    for (int s = 0; s < n; ++s) dy[static_cast<std::size_t>(s)] = d(n + s);
    cf.Phi_k.resize(static_cast<std::size_t>(n));
    for (int k = 0; k < n; ++k) {
        double v = d(k);
        for (int s = 0; s < n; ++s) v -= geo.nonlinear(s, k) * dy[static_cast<std::size_t>(s)];
        cf.Phi_k[static_cast<std::size_t>(k)] = v;
    }
    return cf;
}

Tensor schwarzian_tensor(const PointGeometry& geo, const ScalarField& phi) {
    const int n = geo.n;
    require_scalar_field(phi, n);
    const ConformalFactor cf = factor_at(geo, phi);
    Tensor B = hessian(geo, phi);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            B(i, j) -= cf.phi_i[static_cast<std::size_t>(i)] * cf.phi_i[static_cast<std::size_t>(j)] + cf.Phi * geo.g(i, j);
    return B;
}

Tensor schwarzian_tensor(const MetricSpec& spec, const ScalarField& phi, const TangentPoint& tp,
                         const EngineOptions& options) {
    return schwarzian_tensor(compute_geometry(spec, tp, kConnectionDepth, options), phi);
}

Tensor z_tensor(const PointGeometry& geo) {
    const int n = geo.n;
    const Tensor Rt = ricci_trace_alt(geo);
    Tensor Z = geo.chern;
    const double c = 1.0 / (n - 1);
    for (int h = 0; h < n; ++h)
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                for (int k = 0; k < n; ++k)
                    Z(h, i, j, k) -= c * (geo.g(i, j) * Rt(h, k) - geo.g(i, k) * Rt(h, j));
    return Z;
}

Tensor z_tensor(const MetricSpec& spec, const TangentPoint& tp, const EngineOptions& options) {
    return z_tensor(compute_geometry(spec, tp, kCurvatureDepth, options));
}

Tensor z_scalar_tensor(const PointGeometry& geo) {
    const int n = geo.n;
    const Tensor R = riemann_operator(geo);
    const auto yl = lower_index(geo.g, geo.tp.y);
    Tensor Z = geo.spray_curv;
    for (int h = 0; h < n; ++h)
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k)
                Z(h, j, k) -= (yl[static_cast<std::size_t>(j)] * R(h, k) - yl[static_cast<std::size_t>(k)] * R(h, j)) / geo.F2;
    return Z;
}

Tensor z_scalar_tensor(const MetricSpec& spec, const TangentPoint& tp, const EngineOptions& options) {
    return z_scalar_tensor(compute_geometry(spec, tp, kCurvatureDepth, options));
}

bool IntegrabilityReport::all_pass() const {
    return std::all_of(verdicts.begin(), verdicts.end(), [](const auto& kv) { return kv.second; });
}

nlohmann::json IntegrabilityReport::to_json() const {
    nlohmann::json j;
    j["metric"] = metric;
    j["n_samples"] = n_samples;
    j["sup_Z"] = sup_Z;
    j["sup_Zscalar"] = sup_Zscalar;
    j["sup_B"] = sup_B ? nlohmann::json(*sup_B) : nlohmann::json(nullptr);
    j["tol"] = tol;
    j["verdicts"] = verdicts;
    return j;
}

IntegrabilityReport integrability_report(const MetricSpec& spec, const std::vector<TangentPoint>& sample,
                                         const std::optional<ScalarField>& phi, double tol,
                                         const EngineOptions& options) {
    if (sample.empty()) throw InvalidParameter("integrability report needs a non-empty sample");
    if (!(tol > 0.0)) throw InvalidParameter("tolerance must be positive");
    IntegrabilityReport r;
    r.metric = spec.name();
    r.n_samples = static_cast<int>(sample.size());
    r.tol = tol;
    if (phi) {
        r.sup_B = 0.0;
        r.scaled_B = 0.0;
    }
    for (const auto& tp : sample) {
        const PointGeometry geo = compute_geometry(spec, tp, kCurvatureDepth, options);
        const double z = z_tensor(geo).max_abs();
        const double zs = z_scalar_tensor(geo).max_abs();
        r.sup_Z = std::max(r.sup_Z, z);
        r.sup_Zscalar = std::max(r.sup_Zscalar, zs);
        r.scaled_Z = std::max(r.scaled_Z, z / local_scale(geo.chern));
        r.scaled_Zscalar = std::max(r.scaled_Zscalar, zs / local_scale(geo.spray_curv));
        if (phi) {
            const Tensor B = schwarzian_tensor(geo, *phi);
            const Tensor H = hessian(geo, *phi);
            const double b = B.max_abs();
            r.sup_B = std::max(*r.sup_B, b);
            r.scaled_B = std::max(*r.scaled_B, b / local_scale(H));
        }
    }
    r.verdicts["Z"] = r.scaled_Z <= tol;
    r.verdicts["Zscalar"] = r.scaled_Zscalar <= tol;
    if (phi) r.verdicts["B"] = *r.scaled_B <= tol;
    return r;
}

Tensor c_conformal_residual(const MetricSpec& spec, const ScalarField& phi, const TangentPoint& tp,
                            const EngineOptions& options) {
    const int n = spec.dim();
    require_scalar_field(phi, n);
    const PointGeometry geo = compute_geometry(spec, tp, kConnectionDepth, options);
    const Jet pj = taylor(phi, tp.x, 1, options);
    Tensor out(n, {Variance::lower, Variance::lower});
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            double s = 0.0;
            for (int h = 0; h < n; ++h) s += geo.cartan(h, i, j) * pj.first_derivative(h);
            out(i, j) = s;
        }
    return out;
}

MetricSpec conformal_change(const MetricSpec& spec, const ScalarField& phi) {
    const int n = spec.dim();
    require_scalar_field(phi, n);
    const std::string name = spec.name() + "+conformal";
    const auto scaled = [&](const std::vector<Function>& fs, double power) {
        std::vector<Function> out;
        out.reserve(fs.size());
        for (const auto& f : fs) {
            out.push_back(Function::from_generic(n, [f, phi, power](auto x) {
                using std::exp;
                return exp(power * phi(x)) * f(x);
            }));
        }
        return out;
    };
    switch (spec.kind()) {
        case MetricKind::riemannian:
            return MetricSpec::riemannian(name, n, scaled(spec.a(), 2.0), spec.domain_radius());
        case MetricKind::randers:
            return MetricSpec::randers(name, n, scaled(spec.a(), 2.0), scaled(spec.b(), 1.0),
                                       spec.domain_radius());
        case MetricKind::custom: {
            const Function F = spec.norm();
            auto norm = Function::from_generic(2 * n, [F, phi, n](auto z) {
                using std::exp;
                return exp(phi(z.subspan(0, static_cast<std::size_t>(n)))) * F(z);
            });
            return MetricSpec::custom(name, n, std::move(norm), spec.domain_radius());
        }
    }
    throw InvalidParameter("unknown metric kind");
}

Tensor concircular_residual(const MetricSpec& spec, const ScalarField& rho, double c, const TangentPoint& tp,
                            const EngineOptions& options) {
    const int n = spec.dim();
    require_scalar_field(rho, n);
    const PointGeometry geo = compute_geometry(spec, tp, kConnectionDepth, options);
    Tensor out = hessian(geo, rho);
    const double r = rho(tp.x);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) out(i, j) += c * c * r * geo.g(i, j);
    return out;
}

double mobius_residual(const MetricSpec& spec, const ScalarField& phi, const std::vector<TangentPoint>& sample,
                       const EngineOptions& options) {
    double m = 0.0;
    for (const auto& tp : sample) m = std::max(m, schwarzian_tensor(spec, phi, tp, options).max_abs());
    return m;
}

double schwarzian_1d(const Function& g, double x) {
    if (g.arity() != 1) throw InvalidParameter("schwarzian_1d needs a function of one variable");
    const double pt[1] = {x};
    const Jet j = taylor(g, pt, 3);
    const double d1 = j.coefficient(MultiIndex({1}));
    const double d2 = 2.0 * j.coefficient(MultiIndex({2}));
    const double d3 = 6.0 * j.coefficient(MultiIndex({3}));
    if (std::abs(d1) < 1e-12) throw DomainError("schwarzian_1d at a critical point (g' = 0)");
    const double r = d2 / d1;
    return d3 / d1 - 1.5 * r * r;
}

}  // namespace finsler
