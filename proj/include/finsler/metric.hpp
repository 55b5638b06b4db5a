#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "finsler/function.hpp"
#include "finsler/tensor.hpp"

namespace finsler {

/// Smallest accepted Euclidean length of a tangent vector.
inline constexpr double kMinTangentNorm = 1e-8;
/// Points closer than this to the chart boundary are rejected.
inline constexpr double kBoundaryMargin = 1e-6;

enum class MetricKind { riemannian, randers, custom };

std::string to_string(MetricKind kind);

/// Evaluation site (x, y) on the slit tangent bundle of one chart.
struct TangentPoint {
    std::vector<double> x;
    std::vector<double> y;

    int dim() const noexcept { return static_cast<int>(x.size()); }
    /// Concatenated (x, y), the variable order used by every metric function.
    std::vector<double> joined() const;
};

/// A Finsler metric on a single chart. Immutable once built.
///
/// Riemannian metrics carry a_ij(x); Randers metrics carry a_ij(x) and
/// b_i(x) with F = sqrt(a(y,y)) + b(y); custom metrics carry F(x, y)
/// directly. All coefficient functions are Functions of x alone, F and F^2
/// are Functions of the 2n variables (x, y).
class MetricSpec {
public:
    static MetricSpec riemannian(std::string name, int n, std::vector<Function> a,
                                 std::optional<double> domain_radius = std::nullopt);
    static MetricSpec randers(std::string name, int n, std::vector<Function> a,
                              std::vector<Function> b,
                              std::optional<double> domain_radius = std::nullopt);
    static MetricSpec custom(std::string name, int n, Function norm,
                             std::optional<double> domain_radius = std::nullopt);

    MetricKind kind() const noexcept { return kind_; }
    bool is_riemannian() const noexcept { return kind_ == MetricKind::riemannian; }
    int dim() const noexcept { return n_; }
    const std::string& name() const noexcept { return name_; }
    std::optional<double> domain_radius() const noexcept { return radius_; }

    const Function& norm() const noexcept { return norm_; }
    const Function& norm_squared() const noexcept { return norm_squared_; }
    /// a_ij as a row-major n*n list (riemannian, randers).
    const std::vector<Function>& a() const noexcept { return a_; }
    /// b_i (randers).
    const std::vector<Function>& b() const noexcept { return b_; }

    MetricSpec renamed(std::string name) const;
    /// Same metric on the ball of the given radius; may only shrink a bounded chart.
    MetricSpec restricted(double domain_radius) const;

    /// Domain predicate on x, including the boundary margin.
    bool contains(std::span<const double> x) const;
    /// Throws DomainError if tp is not an admissible evaluation site.
    void check_admissible(const TangentPoint& tp) const;
    /// a-norm of b at x (0 for non-Randers metrics).
    double randers_b_norm(std::span<const double> x) const;

private:
    MetricSpec() = default;
    void build_norms();

    MetricKind kind_ = MetricKind::custom;
    int n_ = 0;
    std::string name_;
    std::optional<double> radius_;
    std::vector<Function> a_;
    std::vector<Function> b_;
    Function norm_;
    Function norm_squared_;
};

double eval_F(const MetricSpec& spec, const TangentPoint& tp);

/// g_ij = 1/2 d^2 F^2 / dy^i dy^j. Throws NotPositiveDefinite.
Tensor fundamental_tensor(const MetricSpec& spec, const TangentPoint& tp);

/// g^ij. Throws SingularMatrix.
Tensor inverse_metric(const MetricSpec& spec, const TangentPoint& tp);

/// l^i = y^i / F.
std::vector<double> unit_vector(const MetricSpec& spec, const TangentPoint& tp);

/// y_i = g_ij y^j.
std::vector<double> lower_index(const Tensor& g, std::span<const double> v);

/// g(u, v) with the given fundamental tensor.
double inner(const Tensor& g, std::span<const double> u, std::span<const double> v);

/// Inverse of a symmetric positive-definite matrix stored as a rank-2 tensor.
Tensor invert_matrix(const Tensor& m, Variance slot_variance);

/// Rescale y so that F(x, y) = 1.
TangentPoint normalized(const MetricSpec& spec, TangentPoint tp);

}  // namespace finsler
