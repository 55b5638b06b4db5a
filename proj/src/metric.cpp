#include "finsler/metric.hpp"

#include <Eigen/Dense>
#include <cmath>

#include "finsler/diff.hpp"

namespace finsler {

std::string to_string(MetricKind kind) {
    switch (kind) {
        case MetricKind::riemannian: return "riemannian";
        case MetricKind::randers: return "randers";
        case MetricKind::custom: return "custom";
    }
    return "custom";
}

std::vector<double> TangentPoint::joined() const {
    std::vector<double> z(x);
    z.insert(z.end(), y.begin(), y.end());
    return z;
}

namespace {

void require_arity(const std::vector<Function>& fs, std::size_t count, int arity,
                   const char* what) {
    if (fs.size() != count) {
        throw InvalidParameter(std::string(what) + " needs " + std::to_string(count) +
                               " coefficient functions, got " + std::to_string(fs.size()));
    }
    for (const auto& f : fs) {
        if (f.arity() != arity) {
            throw InvalidParameter(std::string(what) + " coefficients must be functions of x");
        }
    }
}

template <class T>
T quadratic_form(const std::vector<Function>& a, int n, std::span<const T> z) {
    const auto x = z.subspan(0, static_cast<std::size_t>(n));
    const auto y = z.subspan(static_cast<std::size_t>(n));
    T sum(0.0);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            const T aij = a[static_cast<std::size_t>(i * n + j)](x);
            sum += aij * y[static_cast<std::size_t>(i)] * y[static_cast<std::size_t>(j)];
        }
    }
    return sum;
}

template <class T>
T linear_form(const std::vector<Function>& b, int n, std::span<const T> z) {
    const auto x = z.subspan(0, static_cast<std::size_t>(n));
    const auto y = z.subspan(static_cast<std::size_t>(n));
    T sum(0.0);
    for (int i = 0; i < n; ++i) sum += b[static_cast<std::size_t>(i)](x) * y[static_cast<std::size_t>(i)];
    return sum;
}

}  // namespace

MetricSpec MetricSpec::riemannian(std::string name, int n, std::vector<Function> a,
                                  std::optional<double> domain_radius) {
    if (n < 2) throw InvalidParameter("metric dimension must be >= 2");
    const auto nn = static_cast<std::size_t>(n) * static_cast<std::size_t>(n);
    require_arity(a, nn, n, "riemannian metric");
    MetricSpec s;
    s.kind_ = MetricKind::riemannian;
    s.n_ = n;
    s.name_ = std::move(name);
    s.radius_ = domain_radius;
    s.a_ = std::move(a);
    s.build_norms();
    return s;
}

MetricSpec MetricSpec::randers(std::string name, int n, std::vector<Function> a,
                               std::vector<Function> b, std::optional<double> domain_radius) {
    if (n < 2) throw InvalidParameter("metric dimension must be >= 2");
    const auto nn = static_cast<std::size_t>(n) * static_cast<std::size_t>(n);
    require_arity(a, nn, n, "randers metric");
    require_arity(b, static_cast<std::size_t>(n), n, "randers 1-form");
    MetricSpec s;
    s.kind_ = MetricKind::randers;
    s.n_ = n;
    s.name_ = std::move(name);
    s.radius_ = domain_radius;
    s.a_ = std::move(a);
    s.b_ = std::move(b);
    s.build_norms();
    return s;
}

MetricSpec MetricSpec::custom(std::string name, int n, Function norm,
                              std::optional<double> domain_radius) {
    if (n < 2) throw InvalidParameter("metric dimension must be >= 2");
    if (norm.arity() != 2 * n) throw InvalidParameter("custom F must be a function of (x, y)");
    MetricSpec s;
    s.kind_ = MetricKind::custom;
    s.n_ = n;
    s.name_ = std::move(name);
    s.radius_ = domain_radius;
    s.norm_ = std::move(norm);
    s.build_norms();
    return s;
}

void MetricSpec::build_norms() {
    const int n = n_;
    switch (kind_) {
        case MetricKind::riemannian: {
            auto a = a_;
            norm_squared_ = Function::from_generic(2 * n, [a, n](auto z) {
                return quadratic_form(a, n, z);
            });
            norm_ = Function::from_generic(2 * n, [a, n](auto z) {
                using std::sqrt;
                return sqrt(quadratic_form(a, n, z));
            });
            break;
        }
        case MetricKind::randers: {
            auto a = a_;
            auto b = b_;
            norm_ = Function::from_generic(2 * n, [a, b, n](auto z) {
                using std::sqrt;
                return sqrt(quadratic_form(a, n, z)) + linear_form(b, n, z);
            });
            norm_squared_ = Function::from_generic(2 * n, [a, b, n](auto z) {
                using std::sqrt;
                const auto f = sqrt(quadratic_form(a, n, z)) + linear_form(b, n, z);
                return f * f;
            });
            break;
        }
        case MetricKind::custom: {
            auto f = norm_;
            norm_squared_ = Function::from_generic(2 * n, [f](auto z) {
                const auto v = f(z);
                return v * v;
            });
            break;
        }
    }
}

MetricSpec MetricSpec::renamed(std::string name) const {
    MetricSpec s = *this;
    s.name_ = std::move(name);
    return s;
}

MetricSpec MetricSpec::restricted(double domain_radius) const {
    if (!(domain_radius > 0.0)) throw InvalidParameter("domain radius must be positive");
    if (radius_ && domain_radius > *radius_) {
        throw InvalidParameter("domain radius exceeds the chart of " + name_);
    }
    MetricSpec s = *this;
    s.radius_ = domain_radius;
    return s;
}

bool MetricSpec::contains(std::span<const double> x) const {
    if (static_cast<int>(x.size()) != n_) return false;
    for (double v : x) {
        if (!std::isfinite(v)) return false;
    }
    if (!radius_) return true;
    double r2 = 0.0;
    for (double v : x) r2 += v * v;
    return std::sqrt(r2) < *radius_ - kBoundaryMargin;
}

double MetricSpec::randers_b_norm(std::span<const double> x) const {
    if (kind_ != MetricKind::randers) return 0.0;
    Eigen::MatrixXd a(n_, n_);
    Eigen::VectorXd b(n_);
    for (int i = 0; i < n_; ++i) {
        b(i) = b_[static_cast<std::size_t>(i)](x);
        for (int j = 0; j < n_; ++j) a(i, j) = a_[static_cast<std::size_t>(i * n_ + j)](x);
    }
    Eigen::LLT<Eigen::MatrixXd> llt(a);
    if (llt.info() != Eigen::Success) {
        throw NotPositiveDefinite("randers a_ij is not positive-definite at x");
    }
    return std::sqrt(b.dot(llt.solve(b)));
}

void MetricSpec::check_admissible(const TangentPoint& tp) const {
    if (tp.dim() != n_ || static_cast<int>(tp.y.size()) != n_) {
        throw InvalidParameter("tangent point dimension does not match the metric");
    }
    if (!contains(tp.x)) throw DomainError("point outside the chart domain of " + name_);
    double y2 = 0.0;
    for (double v : tp.y) {
        if (!std::isfinite(v)) throw DomainError("non-finite tangent vector");
        y2 += v * v;
    }
    if (std::sqrt(y2) < kMinTangentNorm) throw DomainError("tangent vector too close to zero");
    if (kind_ == MetricKind::randers && randers_b_norm(tp.x) >= 1.0) {
        throw DomainError("randers 1-form has a-norm >= 1 at x (strong convexity lost)");
    }
}

double eval_F(const MetricSpec& spec, const TangentPoint& tp) {
    spec.check_admissible(tp);
    const double f = spec.norm()(tp.joined());
    if (!(f > 0.0)) throw DomainError("F is not positive at the evaluation point");
    return f;
}

Tensor invert_matrix(const Tensor& m, Variance slot_variance) {
    const int n = m.dim();
    Eigen::MatrixXd a(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) a(i, j) = m(i, j);
    Eigen::FullPivLU<Eigen::MatrixXd> lu(a);
    if (!lu.isInvertible()) throw SingularMatrix("matrix is singular");
    const Eigen::MatrixXd inv = lu.inverse();
    Tensor out(n, {slot_variance, slot_variance});
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) out(i, j) = inv(i, j);
    return out;
}

Tensor fundamental_tensor(const MetricSpec& spec, const TangentPoint& tp) {
    spec.check_admissible(tp);
    const int n = spec.dim();
    const auto z = Jet::seed(tp.joined(), 2);
    const Jet f2 = spec.norm_squared()(std::span<const Jet>(z));
    Tensor g(n, {Variance::lower, Variance::lower});
    for (int i = 0; i < n; ++i) {
        for (int j = i; j < n; ++j) {
            const double v = 0.5 * f2.d(n + i).d(n + j).value();
            g(i, j) = v;
            g(j, i) = v;
        }
    }
    Eigen::MatrixXd a(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) a(i, j) = g(i, j);
    if (!a.allFinite() || Eigen::LLT<Eigen::MatrixXd>(a).info() != Eigen::Success) {
        throw NotPositiveDefinite("fundamental tensor is not positive-definite at the point");
    }
    return g;
}

Tensor inverse_metric(const MetricSpec& spec, const TangentPoint& tp) {
    Tensor ginv = invert_matrix(fundamental_tensor(spec, tp), Variance::upper);
    const int n = spec.dim();
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            const double s = 0.5 * (ginv(i, j) + ginv(j, i));
            ginv(i, j) = s;
            ginv(j, i) = s;
        }
    }
    return ginv;
}

std::vector<double> unit_vector(const MetricSpec& spec, const TangentPoint& tp) {
    const double f = eval_F(spec, tp);
    std::vector<double> l(tp.y);
    for (double& v : l) v /= f;
    return l;
}

std::vector<double> lower_index(const Tensor& g, std::span<const double> v) {
    const int n = g.dim();
    std::vector<double> out(static_cast<std::size_t>(n), 0.0);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) out[static_cast<std::size_t>(i)] += g(i, j) * v[static_cast<std::size_t>(j)];
    return out;
}

double inner(const Tensor& g, std::span<const double> u, std::span<const double> v) {
    const int n = g.dim();
    double s = 0.0;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            s += g(i, j) * u[static_cast<std::size_t>(i)] * v[static_cast<std::size_t>(j)];
    return s;
}

TangentPoint normalized(const MetricSpec& spec, TangentPoint tp) {
    const double f = eval_F(spec, tp);
    for (double& v : tp.y) v /= f;
    return tp;
}

}  // namespace finsler
