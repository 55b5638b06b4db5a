#include "finsler/invariants.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "finsler/connection.hpp"
#include "finsler/curvature.hpp"
#include "finsler/geometry.hpp"
#include "finsler/schwarzian.hpp"

namespace finsler {

std::vector<InvariantResult> invariant_suite(const MetricSpec& spec, const std::vector<TangentPoint>& sample,
                                             double tol, const EngineOptions& options) {
    const int n = spec.dim();
    std::vector<std::string> order;
    std::map<std::string, double> worst;
    const auto record = [&](const std::string& name, double v) {
        if (!worst.count(name)) {
            order.push_back(name);
            worst[name] = 0.0;
        }
        worst[name] = std::max(worst[name], std::isfinite(v) ? v : 1e300);
    };
    const TensorField gfield = [&spec](const TangentPoint& q) { return fundamental_tensor(spec, q); };

    for (const auto& tp : sample) {
        const PointGeometry geo = compute_geometry(spec, tp, 4, options);
        const double gscale = 1.0 + geo.g.max_abs();

        for (double lambda : {0.5, 2.0, 10.0}) {
            TangentPoint q = tp;
            for (double& v : q.y) v *= lambda;
            record("homogeneity_F", std::abs(eval_F(spec, q) - lambda * geo.F) / (lambda * geo.F));
            record("homogeneity_g", max_abs_diff(fundamental_tensor(spec, q), geo.g) / gscale);
        }
        record("euler_F2", std::abs(inner(geo.g, tp.y, tp.y) - geo.F2) / geo.F2);
        record("positive_definite", 0.0);

        double cy = 0.0, gam = 0.0, nl = 0.0;
        for (int i = 0; i < n; ++i) {
            double gi = 0.0, ni = 0.0;
            for (int j = 0; j < n; ++j) {
                double c = 0.0;
                for (int k = 0; k < n; ++k) {
                    c += geo.cartan_low(i, j, k) * tp.y[static_cast<std::size_t>(k)];
                    gi += geo.christoffel(i, j, k) * tp.y[static_cast<std::size_t>(j)] * tp.y[static_cast<std::size_t>(k)];
                }
                cy = std::max(cy, std::abs(c));
                ni += geo.nonlinear(i, j) * tp.y[static_cast<std::size_t>(j)];
            }
            gam = std::max(gam, std::abs(gi - 2.0 * geo.spray(i)));
            nl = std::max(nl, std::abs(ni - 2.0 * geo.spray(i)));
        }
        record("cartan_y", cy / (1.0 + geo.cartan_low.max_abs()));
        record("spray_euler", gam / (1.0 + geo.spray.max_abs()));
        record("nonlinear_euler", nl / (1.0 + geo.spray.max_abs()));

        double dF = 0.0;
        for (int k = 0; k < n; ++k) dF = std::max(dF, std::abs(delta_x(spec, spec.norm(), tp, k, options)));
        record("delta_F", dF / (1.0 + geo.F));

        record("metricity_h", h_covariant(spec, gfield, tp, options).max_abs() / gscale);
        record("metricity_v", v_covariant(spec, gfield, tp, options).max_abs() / gscale);

        const double rscale = 1.0 + geo.chern.max_abs();
        record("chern_antisymmetry", geo.chern.antisymmetry_defect(2, 3) / rscale);
        Tensor yR(n, {Variance::upper, Variance::lower, Variance::lower});
        for (int i = 0; i < n; ++i)
            for (int k = 0; k < n; ++k)
                for (int m = 0; m < n; ++m) {
                    double s = 0.0;
                    for (int j = 0; j < n; ++j) s += tp.y[static_cast<std::size_t>(j)] * geo.chern(i, j, k, m);
                    yR(i, k, m) = s;
                }
        record("chern_spray", max_abs_diff(yR, geo.spray_curv) / (1.0 + geo.spray_curv.max_abs()));

        const Tensor Rk = riemann_operator(geo);
        double ry = 0.0;
        for (int i = 0; i < n; ++i) {
            double s = 0.0;
            for (int k = 0; k < n; ++k) s += Rk(i, k) * tp.y[static_cast<std::size_t>(k)];
            ry = std::max(ry, std::abs(s));
        }
        record("riemann_y", ry / (1.0 + Rk.max_abs()));

        const Tensor star = cartan_hh(geo);
        Tensor yS(n, {Variance::upper, Variance::lower, Variance::lower});
        for (int i = 0; i < n; ++i)
            for (int k = 0; k < n; ++k)
                for (int m = 0; m < n; ++m) {
                    double s = 0.0;
                    for (int j = 0; j < n; ++j) s += tp.y[static_cast<std::size_t>(j)] * star(i, j, k, m);
                    yS(i, k, m) = s;
                }
        record("cartan_hh_y", max_abs_diff(yS, yR) / (1.0 + yR.max_abs()));

        const Tensor Z = z_tensor(geo);
        double tr = 0.0;
        for (int h = 0; h < n; ++h)
            for (int k = 0; k < n; ++k) {
                double s = 0.0;
                for (int i = 0; i < n; ++i)
                    for (int j = 0; j < n; ++j) s += geo.ginv(i, j) * Z(h, i, j, k);
                tr = std::max(tr, std::abs(s));
            }
        record("trace_Z", tr / rscale);
        record("zscalar_antisymmetry", z_scalar_tensor(geo).antisymmetry_defect(1, 2) / (1.0 + geo.spray_curv.max_abs()));
    }

    std::vector<InvariantResult> out;
    for (const auto& name : order) {
        InvariantResult r;
        r.name = name;
        r.value = worst[name];
        r.tol = tol;
        r.pass = r.value <= tol;
        out.push_back(r);
    }
    return out;
}

}  // namespace finsler
