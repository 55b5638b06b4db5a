#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "json.hpp"

#include "finsler/diff.hpp"
#include "finsler/metric.hpp"

namespace finsler {

inline constexpr double kDefaultStep = 1e-3;
inline constexpr double kBlowUpThreshold = 1e8;

/// Sampled curve with step metadata. Optional columns are empty unless the
/// producing routine computed them.
struct Trajectory {
    std::string metric;
    double step = kDefaultStep;
    int order = 4;
    std::string integrator = "rk4";
    std::vector<double> s;
    std::vector<std::vector<double>> x;
    std::vector<std::vector<double>> v;
    std::vector<double> speed;  // F(x, v)
    std::vector<double> detJ;
    std::vector<double> p, dp, ddp;
    bool exited_chart = false;
    bool blow_up = false;

    int dim() const { return x.empty() ? 0 : static_cast<int>(x.front().size()); }
    std::size_t size() const { return s.size(); }
    double length() const { return s.empty() ? 0.0 : s.back(); }
    /// max |F(x, v) - F(x0, v0)|.
    double speed_drift() const;

    /// Header: s,x1..xn,v1..vn[,detJ][,p,dp,ddp].
    void write_csv(std::ostream& out) const;
    nlohmann::json summary() const;
};

/// Unit-speed geodesic x'' + 2G(x, x') = 0 from (x0, y0), F(x0, y0) = 1.
Trajectory geodesic(const MetricSpec& spec, std::span<const double> x0, std::span<const double> y0,
                    double length, double step = kDefaultStep, const EngineOptions& options = {});

struct JacobiSolution {
    Trajectory trajectory;            // carries detJ
    std::vector<Eigen::MatrixXd> J;   // J(s)
    std::vector<Eigen::MatrixXd> DJ;  // D_T J(s)
    std::vector<Eigen::MatrixXd> g;   // g_ij(x(s), x'(s))

    /// max over samples of |(DJ)^T g J - J^T g DJ|.
    double wronskian_defect() const;
};

/// Jacobi matrix along the geodesic from (x0, y0): D_T D_T J + R(J, T)T = 0,
/// J(0) = 0, D_T J(0) = I, with D_T V^i = V'^i + Γ^i_jk V^j x'^k.
JacobiSolution jacobi_fields(const MetricSpec& spec, std::span<const double> x0, std::span<const double> y0,
                             double length, double step = kDefaultStep, const EngineOptions& options = {});

/// Largest violation of the Jacobi system re-substituted on every `stride`-th sample.
double jacobi_residual(const MetricSpec& spec, const JacobiSolution& sol, int stride = 10,
                       const EngineOptions& options = {});

struct ConjugateResult {
    std::optional<double> distance;
    bool ill_conditioned = false;
    JacobiSolution jacobi;
};

/// First zero of det J along the (unit-speed) trajectory.
ConjugateResult conjugate_search(const MetricSpec& spec, const Trajectory& traj,
                                 const EngineOptions& options = {});

struct ProjectiveInitial {
    double p = 0.0;
    double dp = 1.0;
    double ddp = 0.0;
};

struct ProjectiveParameter {
    ProjectiveInitial initial;
    Trajectory trajectory;  // carries p, dp, ddp
    std::vector<double> s, p, dp, ddp;
    bool blow_up = false;
};

/// p''' = 3/2 p''²/p' + S p' with S = 2 R^s_s(x, x') / (n-1) along the trajectory.
ProjectiveParameter projective_parameter(const MetricSpec& spec, const Trajectory& traj,
                                         const ProjectiveInitial& initial = {},
                                         const EngineOptions& options = {});

/// Pointwise S(p) recovered from the samples through u = p'^{-1/2}, S = -2u''/u.
/// Entries at the two ends and where p' >= max_dp are NaN.
std::vector<double> schwarzian_of_samples(const ProjectiveParameter& pp, double max_dp = 1e4);

/// sup |S(p) - 2 R^s_s/(n-1)| over the valid samples.
double schwarzian_residual_of_p(const MetricSpec& spec, const Trajectory& traj, const ProjectiveParameter& pp,
                                const EngineOptions& options = {});

struct BonnetGeodesic {
    std::vector<double> x0, y0;
    bool hypothesis_ok = false;
    double min_ricci_ratio = 0.0;  // min Ric / ((n-1) λ F²) along the curve
    double equivalence_error = 0.0;
    bool equivalence_ok = false;
    std::optional<double> conjugate_distance;
    bool bound_ok = false;
    std::string status;  // "pass", "fail", "hypothesis-violated"
};

struct BonnetReport {
    std::string metric;
    double lambda = 0.0;
    double bound = 0.0;  // π/√λ
    double length = 0.0;
    std::vector<BonnetGeodesic> geodesics;
    bool hypothesis_violated = false;
    bool pass = false;

    nlohmann::json to_json() const;
};

struct BonnetOptions {
    int n_geodesics = 10;
    std::optional<double> length;  // default π/√λ + 0.5
    double step = kDefaultStep;
    std::uint64_t seed = 42;
    double equivalence_tol = 1e-4;
    double distance_slack = 1e-2;
};

BonnetReport bonnet_myers_check(const MetricSpec& spec, double lambda, const BonnetOptions& bopts = {},
                                const EngineOptions& options = {});

/// p with G_B - G_A = p y, or none when the difference is not parallel to y.
std::optional<double> projective_factor(const MetricSpec& a, const MetricSpec& b, const TangentPoint& tp,
                                        const EngineOptions& options = {});

}  // namespace finsler
