#include "finsler/dynamics.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>

#include "finsler/curvature.hpp"
#include "finsler/geometry.hpp"
#include "finsler/sampling.hpp"

namespace finsler {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
// p is treated as escaped once one step spans more than this fraction of p'/p''.
constexpr double kResolutionLimit = 0.02;

// State layout: x (n), v (n), [J (n*n, column-major), W (n*n)], [p, u, u'].
// The projective part is carried as p and the Hill variable u = p'^(-1/2),
// which solves the linear equation u'' = -S u / 2.
class Flow {
public:
    Flow(const MetricSpec& spec, bool jacobi, bool projective, const EngineOptions& options)
        : spec_(spec), n_(spec.dim()), jacobi_(jacobi), projective_(projective), options_(options) {}

    int n() const { return n_; }
    int size() const { return 2 * n_ + (jacobi_ ? 2 * n_ * n_ : 0) + (projective_ ? 3 : 0); }
    int j_offset() const { return 2 * n_; }
    int w_offset() const { return 2 * n_ + n_ * n_; }
    int p_offset() const { return 2 * n_ + (jacobi_ ? 2 * n_ * n_ : 0); }
    bool projective() const { return projective_; }
    bool jacobi() const { return jacobi_; }

    /// (p, p', p'') from the state.
    std::array<double, 3> projective_values(const Eigen::VectorXd& y) const {
        const int o = p_offset();
        const double u = y(o + 1);
        const double w = y(o + 2);
        return {y(o), 1.0 / (u * u), -2.0 * w / (u * u * u)};
    }

    void set_projective(Eigen::VectorXd& y, const ProjectiveInitial& init) const {
        const int o = p_offset();
        const double u = 1.0 / std::sqrt(init.dp);
        y(o) = init.p;
        y(o + 1) = u;
        y(o + 2) = -0.5 * init.ddp * u * u * u;
    }

    struct Sample {
        double F = 0.0;
        double ricci = kNaN;
        Eigen::MatrixXd g;
    };

    Eigen::VectorXd rhs(const Eigen::VectorXd& y, bool p_active, Sample* sample) const {
        const int n = n_;
        TangentPoint tp{std::vector<double>(y.data(), y.data() + n),
                        std::vector<double>(y.data() + n, y.data() + 2 * n)};
        const int depth = (jacobi_ || projective_) ? 4 : 2;
        const PointGeometry geo = compute_geometry(spec_, tp, depth, options_);
        Eigen::VectorXd d = Eigen::VectorXd::Zero(y.size());
        for (int i = 0; i < n; ++i) {
            d(i) = y(n + i);
            d(n + i) = -2.0 * geo.spray(i);
        }
        if (sample) {
            sample->F = geo.F;
            sample->g.resize(n, n);
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j) sample->g(i, j) = geo.g(i, j);
            if (depth >= 4) sample->ricci = geo.ricci;
        }
        if (jacobi_) {
            Eigen::MatrixXd A = Eigen::MatrixXd::Zero(n, n);
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j)
                    for (int k = 0; k < n; ++k) A(i, j) += geo.christoffel(i, j, k) * y(n + k);
            const Tensor Rt = riemann_operator(geo);
            Eigen::MatrixXd R(n, n);
            for (int i = 0; i < n; ++i)
                for (int k = 0; k < n; ++k) R(i, k) = Rt(i, k);
            const Eigen::Map<const Eigen::MatrixXd> J(y.data() + j_offset(), n, n);
            const Eigen::Map<const Eigen::MatrixXd> W(y.data() + w_offset(), n, n);
            Eigen::Map<Eigen::MatrixXd> dJ(d.data() + j_offset(), n, n);
            Eigen::Map<Eigen::MatrixXd> dW(d.data() + w_offset(), n, n);
            dJ = W - A * J;
            dW = -R * J - A * W;
        }
        if (projective_ && p_active) {
            const int o = p_offset();
            const double S = 2.0 * geo.ricci / (n - 1);
            d(o) = 1.0 / (y(o + 1) * y(o + 1));
            d(o + 1) = y(o + 2);
            d(o + 2) = -0.5 * S * y(o + 1);
        }
        return d;
    }

    Eigen::VectorXd step(const Eigen::VectorXd& y, double h, bool p_active, Sample* sample = nullptr) const {
        const Eigen::VectorXd k1 = rhs(y, p_active, sample);
        const Eigen::VectorXd k2 = rhs(y + 0.5 * h * k1, p_active, nullptr);
        const Eigen::VectorXd k3 = rhs(y + 0.5 * h * k2, p_active, nullptr);
        const Eigen::VectorXd k4 = rhs(y + h * k3, p_active, nullptr);
        return y + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    }

    struct Run {
        double h = 0.0;
        std::vector<double> s;
        std::vector<Eigen::VectorXd> state;
        std::vector<Sample> samples;
        bool exited = false;
        bool blow_up = false;
    };

    Run integrate(const Eigen::VectorXd& y0, double length, double step_size) const {
        if (!(length > 0.0)) throw InvalidParameter("trajectory length must be positive");
        if (!(step_size > 0.0)) throw InvalidParameter("step size must be positive");
        const auto steps = static_cast<long>(std::ceil(length / step_size - 1e-9));
        Run run;
        run.h = length / static_cast<double>(steps);
        Eigen::VectorXd y = y0;
        bool p_active = projective_;
        for (long k = 0;; ++k) {
            Sample sample;
            Eigen::VectorXd next;
            bool last = k == steps;
            try {
                if (last) {
                    rhs(y, p_active, &sample);
                } else {
                    next = step(y, run.h, p_active, &sample);
                }
            } catch (const DomainError&) {
                run.exited = true;
            } catch (const NotPositiveDefinite&) {
                run.exited = true;
            } catch (const SingularMatrix&) {
                run.exited = true;
            }
            if (run.exited) break;
            run.s.push_back(static_cast<double>(k) * run.h);
            run.state.push_back(y);
            run.samples.push_back(std::move(sample));
            if (last) break;
            if (!next.head(2 * n_).allFinite()) {
                run.exited = true;
                break;
            }
            if (p_active) {
                const int o = p_offset();
                const auto [p, dp, ddp] = projective_values(next);
                const bool escaped = !next.segment(o, 3).allFinite() || !(next(o + 1) > 0.0) ||
                                     !std::isfinite(dp) || std::abs(p) > kBlowUpThreshold ||
                                     run.h * std::abs(ddp) > kResolutionLimit * dp;
                if (escaped) {
                    p_active = false;
                    run.blow_up = true;
                    next.segment(o, 3).setConstant(kNaN);
                }
            }
            y = std::move(next);
        }
        if (run.s.empty()) throw DomainError("trajectory start is not admissible");
        return run;
    }

private:
    const MetricSpec& spec_;
    int n_;
    bool jacobi_;
    bool projective_;
    EngineOptions options_;
};

Eigen::VectorXd initial_state(const Flow& flow, std::span<const double> x0, std::span<const double> y0,
                              const ProjectiveInitial& pinit = {}) {
    const int n = flow.n();
    Eigen::VectorXd y = Eigen::VectorXd::Zero(flow.size());
    for (int i = 0; i < n; ++i) {
        y(i) = x0[static_cast<std::size_t>(i)];
        y(n + i) = y0[static_cast<std::size_t>(i)];
    }
    if (flow.jacobi()) {
        Eigen::Map<Eigen::MatrixXd> W(y.data() + flow.w_offset(), n, n);
        W.setIdentity();
    }
    if (flow.projective()) {
        flow.set_projective(y, pinit);
    }
    return y;
}

void require_unit_start(const MetricSpec& spec, std::span<const double> x0, std::span<const double> y0) {
    if (static_cast<int>(x0.size()) != spec.dim() || static_cast<int>(y0.size()) != spec.dim()) {
        throw InvalidParameter("initial point has the wrong dimension");
    }
    TangentPoint tp{std::vector<double>(x0.begin(), x0.end()), std::vector<double>(y0.begin(), y0.end())};
    const double F = eval_F(spec, tp);
    if (std::abs(F - 1.0) > 1e-10) throw InvalidParameter("initial vector must have unit length, F(x0, y0) = 1");
}

Trajectory to_trajectory(const MetricSpec& spec, const Flow& flow, const Flow::Run& run) {
    const int n = flow.n();
    Trajectory t;
    t.metric = spec.name();
    t.step = run.h;
    t.s = run.s;
    t.exited_chart = run.exited;
    t.blow_up = run.blow_up;
    for (std::size_t k = 0; k < run.s.size(); ++k) {
        const auto& y = run.state[k];
        t.x.emplace_back(y.data(), y.data() + n);
        t.v.emplace_back(y.data() + n, y.data() + 2 * n);
        t.speed.push_back(run.samples[k].F);
        if (flow.jacobi()) {
            const Eigen::Map<const Eigen::MatrixXd> J(y.data() + flow.j_offset(), n, n);
            t.detJ.push_back(J.determinant());
        }
        if (flow.projective()) {
            const auto [p, dp, ddp] = flow.projective_values(y);
            t.p.push_back(p);
            t.dp.push_back(dp);
            t.ddp.push_back(ddp);
        }
    }
    return t;
}

JacobiSolution to_jacobi(const MetricSpec& spec, const Flow& flow, const Flow::Run& run) {
    const int n = flow.n();
    JacobiSolution sol;
    sol.trajectory = to_trajectory(spec, flow, run);
    for (std::size_t k = 0; k < run.s.size(); ++k) {
        const auto& y = run.state[k];
        sol.J.push_back(Eigen::Map<const Eigen::MatrixXd>(y.data() + flow.j_offset(), n, n));
        sol.DJ.push_back(Eigen::Map<const Eigen::MatrixXd>(y.data() + flow.w_offset(), n, n));
        sol.g.push_back(run.samples[k].g);
    }
    return sol;
}

double hadamard_ratio(const Eigen::MatrixXd& J) {
    double norms = 1.0;
    for (int c = 0; c < J.cols(); ++c) norms *= J.col(c).norm();
    if (norms == 0.0) return 0.0;
    return J.determinant() / norms;
}

double ratio_of_state(const Flow& flow, const Eigen::VectorXd& y) {
    const int n = flow.n();
    return hadamard_ratio(Eigen::Map<const Eigen::MatrixXd>(y.data() + flow.j_offset(), n, n));
}

ConjugateResult search_run(const MetricSpec& spec, const Flow& flow, const Flow::Run& run) {
    ConjugateResult res;
    res.jacobi = to_jacobi(spec, flow, run);
    const std::size_t m = run.s.size();
    std::vector<double> r(m);
    for (std::size_t k = 0; k < m; ++k) r[k] = ratio_of_state(flow, run.state[k]);
    const double h = run.h;
    const auto partial = [&](std::size_t k, double tau) {
        if (tau <= 0.0) return r[k];
        return ratio_of_state(flow, flow.step(run.state[k], tau, false));
    };
    for (std::size_t k = 2; k < m; ++k) {
        if (std::signbit(r[k - 1]) != std::signbit(r[k]) && r[k] != 0.0) {
            double lo = 0.0, hi = h;
            const double rlo = r[k - 1];
            while (hi - lo > 1e-7) {
                const double mid = 0.5 * (lo + hi);
                const double rm = partial(k - 1, mid);
                if (std::signbit(rm) == std::signbit(rlo)) {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            res.distance = run.s[k - 1] + 0.5 * (lo + hi);
            const double slope = std::abs(r[k] - r[k - 1]) / h;
            res.ill_conditioned = slope < 1e-6;
            return res;
        }
        // Touching zero without a sign change (even multiplicity).
        if (k + 1 < m && std::abs(r[k]) < 1e-3 && std::abs(r[k]) <= std::abs(r[k - 1]) &&
            std::abs(r[k]) <= std::abs(r[k + 1]) && std::signbit(r[k]) == std::signbit(r[k + 1])) {
            const double phi = 0.5 * (std::sqrt(5.0) - 1.0);
            double a = 0.0, b = 2.0 * h;
            double c = b - phi * (b - a), d = a + phi * (b - a);
            double fc = std::abs(partial(k - 1, c)), fd = std::abs(partial(k - 1, d));
            while (b - a > 1e-7) {
                if (fc < fd) {
                    b = d;
                    d = c;
                    fd = fc;
                    c = b - phi * (b - a);
                    fc = std::abs(partial(k - 1, c));
                } else {
                    a = c;
                    c = d;
                    fc = fd;
                    d = a + phi * (b - a);
                    fd = std::abs(partial(k - 1, d));
                }
            }
            const double tau = 0.5 * (a + b);
            if (std::abs(partial(k - 1, tau)) < 1e-6) {
                res.distance = run.s[k - 1] + tau;
                res.ill_conditioned = true;
                return res;
            }
        }
    }
    return res;
}

}  // namespace

double Trajectory::speed_drift() const {
    double m = 0.0;
    for (double f : speed) m = std::max(m, std::abs(f - speed.front()));
    return m;
}

void Trajectory::write_csv(std::ostream& out) const {
    const int n = dim();
    out << "s";
    for (int i = 1; i <= n; ++i) out << ",x" << i;
    for (int i = 1; i <= n; ++i) out << ",v" << i;
    if (!detJ.empty()) out << ",detJ";
    if (!p.empty()) out << ",p,dp,ddp";
    out << '\n';
    const auto put = [&out](double v) {
        char buf[32];
        std::snprintf(buf, sizeof buf, "%.17g", v);
        out << ',' << buf;
    };
    for (std::size_t k = 0; k < s.size(); ++k) {
        char buf[32];
        std::snprintf(buf, sizeof buf, "%.17g", s[k]);
        out << buf;
        for (double v : x[k]) put(v);
        for (double w : v[k]) put(w);
        if (!detJ.empty()) put(detJ[k]);
        if (!p.empty()) {
            put(p[k]);
            put(dp[k]);
            put(ddp[k]);
        }
        out << '\n';
    }
}

nlohmann::json Trajectory::summary() const {
    nlohmann::json j;
    j["metric"] = metric;
    j["integrator"] = integrator;
    j["order"] = order;
    j["step"] = step;
    j["samples"] = size();
    j["length"] = length();
    j["exited_chart"] = exited_chart;
    j["blow_up"] = blow_up;
    j["speed_drift"] = speed_drift();
    if (!x.empty()) {
        j["x_start"] = x.front();
        j["x_end"] = x.back();
        j["v_end"] = v.back();
    }
    return j;
}

double JacobiSolution::wronskian_defect() const {
    double m = 0.0;
    for (std::size_t k = 0; k < J.size(); ++k) {
        const Eigen::MatrixXd w = DJ[k].transpose() * g[k] * J[k] - J[k].transpose() * g[k] * DJ[k];
        m = std::max(m, w.cwiseAbs().maxCoeff());
    }
    return m;
}

Trajectory geodesic(const MetricSpec& spec, std::span<const double> x0, std::span<const double> y0,
                    double length, double step, const EngineOptions& options) {
    require_unit_start(spec, x0, y0);
    const Flow flow(spec, false, false, options);
    return to_trajectory(spec, flow, flow.integrate(initial_state(flow, x0, y0), length, step));
}

JacobiSolution jacobi_fields(const MetricSpec& spec, std::span<const double> x0, std::span<const double> y0,
                             double length, double step, const EngineOptions& options) {
    require_unit_start(spec, x0, y0);
    const Flow flow(spec, true, false, options);
    return to_jacobi(spec, flow, flow.integrate(initial_state(flow, x0, y0), length, step));
}

double jacobi_residual(const MetricSpec& spec, const JacobiSolution& sol, int stride,
                       const EngineOptions& options) {
    const auto& t = sol.trajectory;
    const int n = t.dim();
    const double h = t.step;
    double worst = 0.0;
    if (stride < 1) stride = 1;
    for (std::size_t k = 2; k + 2 < t.size(); k += static_cast<std::size_t>(stride)) {
        const auto diff = [&](const std::vector<Eigen::MatrixXd>& M) {
            return ((M[k - 2] - 8.0 * M[k - 1] + 8.0 * M[k + 1] - M[k + 2]) / (12.0 * h)).eval();
        };
        const PointGeometry geo = compute_geometry(spec, TangentPoint{t.x[k], t.v[k]}, 4, options);
        Eigen::MatrixXd A = Eigen::MatrixXd::Zero(n, n), R(n, n);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                for (int q = 0; q < n; ++q) A(i, j) += geo.christoffel(i, j, q) * t.v[k][static_cast<std::size_t>(q)];
        const Tensor Rt = riemann_operator(geo);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) R(i, j) = Rt(i, j);
        const Eigen::MatrixXd rJ = diff(sol.J) - (sol.DJ[k] - A * sol.J[k]);
        const Eigen::MatrixXd rW = diff(sol.DJ) + R * sol.J[k] + A * sol.DJ[k];
        worst = std::max({worst, rJ.cwiseAbs().maxCoeff(), rW.cwiseAbs().maxCoeff()});
    }
    return worst;
}

ConjugateResult conjugate_search(const MetricSpec& spec, const Trajectory& traj, const EngineOptions& options) {
    if (traj.size() < 2) throw InvalidParameter("trajectory too short for a conjugate search");
    require_unit_start(spec, traj.x.front(), traj.v.front());
    const Flow flow(spec, true, false, options);
    const auto run = flow.integrate(initial_state(flow, traj.x.front(), traj.v.front()), traj.length(), traj.step);
    return search_run(spec, flow, run);
}

ProjectiveParameter projective_parameter(const MetricSpec& spec, const Trajectory& traj,
                                         const ProjectiveInitial& initial, const EngineOptions& options) {
    if (traj.size() < 2) throw InvalidParameter("trajectory too short for the projective parameter");
    if (!(initial.dp > 0.0)) throw InvalidParameter("projective parameter needs p'(0) > 0");
    require_unit_start(spec, traj.x.front(), traj.v.front());
    const Flow flow(spec, false, true, options);
    const auto run =
        flow.integrate(initial_state(flow, traj.x.front(), traj.v.front(), initial), traj.length(), traj.step);
    ProjectiveParameter pp;
    pp.initial = initial;
    pp.trajectory = to_trajectory(spec, flow, run);
    pp.s = pp.trajectory.s;
    pp.p = pp.trajectory.p;
    pp.dp = pp.trajectory.dp;
    pp.ddp = pp.trajectory.ddp;
    pp.blow_up = run.blow_up;
    return pp;
}

std::vector<double> schwarzian_of_samples(const ProjectiveParameter& pp, double max_dp) {
    const std::size_t m = pp.s.size();
    std::vector<double> out(m, kNaN);
    if (m < 5) return out;
    const double h = pp.s[1] - pp.s[0];
    std::vector<double> u(m), du(m);
    for (std::size_t k = 0; k < m; ++k) {
        const double dp = pp.dp[k];
        u[k] = 1.0 / std::sqrt(dp);
        du[k] = -0.5 * pp.ddp[k] * u[k] * u[k] * u[k];
    }
    for (std::size_t k = 2; k + 2 < m; ++k) {
        bool ok = true;
        for (std::size_t q = k - 2; q <= k + 2; ++q) ok = ok && std::isfinite(du[q]) && pp.dp[q] > 0.0 && pp.dp[q] < max_dp;
        if (!ok) continue;
        const double ddu = (du[k - 2] - 8.0 * du[k - 1] + 8.0 * du[k + 1] - du[k + 2]) / (12.0 * h);
        out[k] = -2.0 * ddu / u[k];
    }
    return out;
}

double schwarzian_residual_of_p(const MetricSpec& spec, const Trajectory& traj, const ProjectiveParameter& pp,
                                const EngineOptions& options) {
    const int n = spec.dim();
    const auto S = schwarzian_of_samples(pp);
    double worst = 0.0;
    bool any = false;
    for (std::size_t k = 0; k < S.size() && k < traj.size(); ++k) {
        if (!std::isfinite(S[k])) continue;
        const PointGeometry geo = compute_geometry(spec, TangentPoint{traj.x[k], traj.v[k]}, 4, options);
        worst = std::max(worst, std::abs(S[k] - 2.0 * geo.ricci / (n - 1)));
        any = true;
    }
    if (!any) throw InvalidParameter("no valid samples for the Schwarzian residual");
    return worst;
}

nlohmann::json BonnetReport::to_json() const {
    nlohmann::json j;
    j["metric"] = metric;
    j["lambda"] = lambda;
    j["bound"] = bound;
    j["length"] = length;
    j["hypothesis_violated"] = hypothesis_violated;
    j["pass"] = pass;
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& g : geodesics) {
        nlohmann::json e;
        e["x0"] = g.x0;
        e["y0"] = g.y0;
        e["status"] = g.status;
        e["hypothesis_ok"] = g.hypothesis_ok;
        e["min_ricci_ratio"] = g.min_ricci_ratio;
        e["equivalence_error"] = g.equivalence_error;
        e["equivalence_ok"] = g.equivalence_ok;
        e["conjugate_distance"] = g.conjugate_distance ? nlohmann::json(*g.conjugate_distance) : nlohmann::json(nullptr);
        e["bound_ok"] = g.bound_ok;
        arr.push_back(std::move(e));
    }
    j["geodesics"] = std::move(arr);
    return j;
}

BonnetReport bonnet_myers_check(const MetricSpec& spec, double lambda, const BonnetOptions& bopts,
                                const EngineOptions& options) {
    if (!(lambda > 0.0)) throw InvalidParameter("lambda must be positive");
    if (bopts.n_geodesics < 1) throw InvalidParameter("need at least one geodesic");
    const int n = spec.dim();
    BonnetReport rep;
    rep.metric = spec.name();
    rep.lambda = lambda;
    rep.bound = std::numbers::pi / std::sqrt(lambda);
    rep.length = bopts.length.value_or(rep.bound + 0.5);

    UniformSource src(bopts.seed);
    const double R = spec.domain_radius().value_or(1.0);
    const Flow flow(spec, true, true, options);
    for (int gi = 0; gi < bopts.n_geodesics; ++gi) {
        BonnetGeodesic res;
        // Start point with |x0| in [0.2, 0.8] R, direction away from radial.
        std::vector<double> x0(static_cast<std::size_t>(n)), y0(static_cast<std::size_t>(n));
        while (true) {
            double xx = 0.0, yy = 0.0, xy = 0.0;
            for (int i = 0; i < n; ++i) {
                x0[static_cast<std::size_t>(i)] = src.uniform(-0.8 * R, 0.8 * R);
                y0[static_cast<std::size_t>(i)] = src.uniform(-1.0, 1.0);
                xx += x0[static_cast<std::size_t>(i)] * x0[static_cast<std::size_t>(i)];
                yy += y0[static_cast<std::size_t>(i)] * y0[static_cast<std::size_t>(i)];
                xy += x0[static_cast<std::size_t>(i)] * y0[static_cast<std::size_t>(i)];
            }
            const double r = std::sqrt(xx);
            if (r < 0.2 * R || r > 0.8 * R || yy < 0.01) continue;
            if (std::abs(xy) / (r * std::sqrt(yy)) > 0.5) continue;
            TangentPoint tp{x0, y0};
            double F = 0.0;
            try {
                F = eval_F(spec, tp);
            } catch (const DomainError&) {
                continue;
            }
            for (double& v : y0) v /= F;
            break;
        }
        res.x0 = x0;
        res.y0 = y0;

        const auto run = flow.integrate(initial_state(flow, x0, y0), rep.length, bopts.step);
        res.min_ricci_ratio = std::numeric_limits<double>::infinity();
        for (const auto& smp : run.samples) {
            res.min_ricci_ratio = std::min(res.min_ricci_ratio, smp.ricci / ((n - 1) * lambda * smp.F * smp.F));
        }
        res.hypothesis_ok = res.min_ricci_ratio >= 1.0 - 1e-8;
        if (!res.hypothesis_ok) {
            res.status = "hypothesis-violated";
            rep.hypothesis_violated = true;
            rep.geodesics.push_back(std::move(res));
            continue;
        }

        ProjectiveParameter pp;
        pp.s = run.s;
        for (const auto& y : run.state) {
            const auto [p, dp, ddp] = flow.projective_values(y);
            pp.p.push_back(p);
            pp.dp.push_back(dp);
            pp.ddp.push_back(ddp);
        }
        const auto S = schwarzian_of_samples(pp);
        bool any = false;
        for (std::size_t k = 0; k < S.size(); ++k) {
            if (!std::isfinite(S[k])) continue;
            const double target = run.samples[k].ricci / (n - 1);
            const double lhs = S[k] / (2.0 * run.samples[k].F * run.samples[k].F);
            res.equivalence_error = std::max(res.equivalence_error, std::abs(lhs - target) / std::abs(target));
            any = true;
        }
        res.equivalence_ok = any && res.equivalence_error <= bopts.equivalence_tol;

        const ConjugateResult cr = search_run(spec, flow, run);
        res.conjugate_distance = cr.distance;
        res.bound_ok = cr.distance && *cr.distance <= rep.bound + bopts.distance_slack;
        res.status = (res.equivalence_ok && res.bound_ok) ? "pass" : "fail";
        rep.geodesics.push_back(std::move(res));
    }
    rep.pass = !rep.hypothesis_violated &&
               std::all_of(rep.geodesics.begin(), rep.geodesics.end(), [](const auto& g) { return g.status == "pass"; });
    return rep;
}

std::optional<double> projective_factor(const MetricSpec& a, const MetricSpec& b, const TangentPoint& tp,
                                        const EngineOptions& options) {
    if (a.dim() != b.dim()) throw InvalidParameter("metrics have different dimensions");
    const Tensor Ga = compute_geometry(a, tp, 2, options).spray;
    const Tensor Gb = compute_geometry(b, tp, 2, options).spray;
    const int n = a.dim();
    double dy = 0.0, yy = 0.0, scale = 0.0;
    for (int i = 0; i < n; ++i) {
        const double d = Gb(i) - Ga(i);
        dy += d * tp.y[static_cast<std::size_t>(i)];
        yy += tp.y[static_cast<std::size_t>(i)] * tp.y[static_cast<std::size_t>(i)];
        scale = std::max({scale, std::abs(Ga(i)), std::abs(Gb(i))});
    }
    const double p = dy / yy;
    double res = 0.0;
    for (int i = 0; i < n; ++i) {
        res = std::max(res, std::abs(Gb(i) - Ga(i) - p * tp.y[static_cast<std::size_t>(i)]));
    }
    if (res > 1e-6 * (1.0 + scale)) return std::nullopt;
    return p;
}

}  // namespace finsler
