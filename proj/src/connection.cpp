#include "finsler/connection.hpp"

#include <Eigen/Dense>
#include <cmath>

namespace finsler {

namespace {

constexpr int kConnectionDepth = 3;

PointGeometry connection_geometry(const MetricSpec& spec, const TangentPoint& tp,
                                  const EngineOptions& options) {
    return compute_geometry(spec, tp, kConnectionDepth, options);
}

// d/dz_var of a tensor field, z = (x, y); central difference plus one Richardson level.
Tensor fd_direction(const TensorField& T, const TangentPoint& tp, int var) {
    const int n = tp.dim();
    const double base = var < n ? tp.x[static_cast<std::size_t>(var)] : tp.y[static_cast<std::size_t>(var - n)];
    const double h = 1e-4 * (1.0 + std::abs(base));
    const auto eval = [&](double s) {
        TangentPoint q = tp;
        if (var < n) {
            q.x[static_cast<std::size_t>(var)] += s;
        } else {
            q.y[static_cast<std::size_t>(var - n)] += s;
        }
        return T(q);
    };
    const Tensor coarse = (eval(h) - eval(-h)) * (1.0 / (2.0 * h));
    const Tensor fine = (eval(0.5 * h) - eval(-0.5 * h)) * (1.0 / h);
    return (fine * 4.0 - coarse) * (1.0 / 3.0);
}

// out(idx, k) = D_k(idx) ± coefficient terms, one per slot of T.
Tensor covariant(const Tensor& T, const std::vector<Tensor>& Dk, const Tensor& coef) {
    const int n = T.dim();
    const int r = T.rank();
    std::vector<Variance> slots = T.variance();
    slots.push_back(Variance::lower);
    Tensor out(n, slots);
    std::vector<int> idx(static_cast<std::size_t>(r + 1), 0);
    std::vector<int> inner(static_cast<std::size_t>(r), 0);
    for (std::size_t flat = 0; flat < out.size(); ++flat) {
        std::size_t rem = flat;
        for (int s = r; s >= 0; --s) {
            idx[static_cast<std::size_t>(s)] = static_cast<int>(rem % static_cast<std::size_t>(n));
            rem /= static_cast<std::size_t>(n);
        }
        const int k = idx[static_cast<std::size_t>(r)];
        std::copy(idx.begin(), idx.begin() + r, inner.begin());
        double v = Dk[static_cast<std::size_t>(k)].at(inner);
        for (int a = 0; a < r; ++a) {
            const int ia = inner[static_cast<std::size_t>(a)];
            for (int q = 0; q < n; ++q) {
                std::vector<int> sub = inner;
                sub[static_cast<std::size_t>(a)] = q;
                if (T.variance()[static_cast<std::size_t>(a)] == Variance::upper) {
                    v += T.at(sub) * coef(ia, q, k);
                } else {
                    v -= T.at(sub) * coef(q, ia, k);
                }
            }
        }
        out.data()[flat] = v;
    }
    return out;
}

void require_field_dim(const Tensor& T, int n) {
    if (T.dim() != n) throw InvalidParameter("tensor field dimension does not match the metric");
}

}  // namespace

ConnectionData connection_data(const PointGeometry& geo) {
    if (!geo.has_connection()) throw InvalidParameter("geometry was computed without connection depth");
    return {geo.spray, geo.nonlinear, geo.christoffel, geo.cartan, geo.cartan_low, geo.formal};
}

Tensor spray(const MetricSpec& spec, const TangentPoint& tp, const EngineOptions& options) {
    return compute_geometry(spec, tp, 2, options).spray;
}

Tensor nonlinear_connection(const MetricSpec& spec, const TangentPoint& tp,
                            const EngineOptions& options) {
    return connection_geometry(spec, tp, options).nonlinear;
}

ConnectionData cartan_coefficients(const MetricSpec& spec, const TangentPoint& tp,
                                   const EngineOptions& options) {
    return connection_data(connection_geometry(spec, tp, options));
}

double delta_x(const MetricSpec& spec, const Function& f, const TangentPoint& tp, int k,
               const EngineOptions& options) {
    const int n = spec.dim();
    if (k < 0 || k >= n) throw InvalidParameter("delta_x index out of range");
    if (f.arity() != 2 * n) throw InvalidParameter("delta_x needs a function of (x, y)");
    const PointGeometry geo = connection_geometry(spec, tp, options);
    const Jet fj = taylor(f, tp.joined(), 1, options);
    double v = fj.first_derivative(k);
    for (int j = 0; j < n; ++j) v -= geo.nonlinear(j, k) * fj.first_derivative(n + j);
    return v;
}

Tensor h_covariant(const MetricSpec& spec, const TensorField& T, const TangentPoint& tp,
                   const EngineOptions& options) {
    const int n = spec.dim();
    const PointGeometry geo = connection_geometry(spec, tp, options);
    const Tensor T0 = T(tp);
    require_field_dim(T0, n);
    std::vector<Tensor> dy;
    for (int s = 0; s < n; ++s) dy.push_back(fd_direction(T, tp, n + s));
    std::vector<Tensor> delta;
    for (int k = 0; k < n; ++k) {
        Tensor d = fd_direction(T, tp, k);
        for (int s = 0; s < n; ++s) d -= dy[static_cast<std::size_t>(s)] * geo.nonlinear(s, k);
        delta.push_back(std::move(d));
    }
    return covariant(T0, delta, geo.christoffel);
}

Tensor v_covariant(const MetricSpec& spec, const TensorField& T, const TangentPoint& tp,
                   const EngineOptions& options) {
    const int n = spec.dim();
    const PointGeometry geo = connection_geometry(spec, tp, options);
    const Tensor T0 = T(tp);
    require_field_dim(T0, n);
    std::vector<Tensor> dy;
    for (int s = 0; s < n; ++s) dy.push_back(fd_direction(T, tp, n + s));
    return covariant(T0, dy, geo.cartan);
}

std::vector<double> gradient(const MetricSpec& spec, const ScalarField& h, std::span<const double> x,
                             const GradientOptions& gopts, const EngineOptions& options) {
    const int n = spec.dim();
    if (h.arity() != n) throw InvalidParameter("scalar field must be a function of x");
    const Jet hj = taylor(h, x, 1, options);
    Eigen::VectorXd dh(n);
    for (int i = 0; i < n; ++i) dh(i) = hj.first_derivative(i);
    if (dh.norm() == 0.0) return std::vector<double>(static_cast<std::size_t>(n), 0.0);

    const auto apply_inverse = [&](const Eigen::VectorXd& v) {
        TangentPoint tp{std::vector<double>(x.begin(), x.end()),
                        std::vector<double>(v.data(), v.data() + n)};
        const Tensor ginv = inverse_metric(spec, tp);
        Eigen::VectorXd out = Eigen::VectorXd::Zero(n);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) out(i) += ginv(i, j) * dh(j);
        return out;
    };

    Eigen::VectorXd v = dh;
    if (spec.is_riemannian()) {
        v = apply_inverse(v);
    } else {
        bool converged = false;
        for (int it = 0; it < gopts.max_iterations; ++it) {
            const Eigen::VectorXd next = (1.0 - gopts.damping) * v + gopts.damping * apply_inverse(v);
            const double step = (next - v).norm();
            v = next;
            if (step <= gopts.tolerance * (1.0 + v.norm())) {
                converged = true;
                break;
            }
        }
        if (!converged) throw NonConvergence("gradient fixed-point iteration did not converge");
    }
    return std::vector<double>(v.data(), v.data() + n);
}

Tensor hessian(const PointGeometry& geo, const ScalarField& h) {
    const int n = geo.n;
    if (h.arity() != n) throw InvalidParameter("scalar field must be a function of x");
    if (!geo.has_connection()) throw InvalidParameter("geometry was computed without connection depth");
    const Jet hj = taylor(h, geo.tp.x, 2);
    Tensor H(n, {Variance::lower, Variance::lower});
    for (int i = 0; i < n; ++i) {
        for (int j = i; j < n; ++j) {
            double v = hj.d(i).first_derivative(j);
            for (int k = 0; k < n; ++k) {
                v -= (geo.christoffel(k, i, j) + geo.cartan(k, i, j)) * hj.first_derivative(k);
            }
            H(i, j) = v;
            H(j, i) = v;
        }
    }
    return H;
}

Tensor hessian(const MetricSpec& spec, const ScalarField& h, const TangentPoint& tp,
               const EngineOptions& options) {
    return hessian(connection_geometry(spec, tp, options), h);
}

double laplacian(const MetricSpec& spec, const ScalarField& h, const TangentPoint& tp,
                 const EngineOptions& options) {
    const PointGeometry geo = connection_geometry(spec, tp, options);
    const Tensor H = hessian(geo, h);
    double s = 0.0;
    for (int i = 0; i < geo.n; ++i)
        for (int j = 0; j < geo.n; ++j) s += geo.ginv(i, j) * H(i, j);
    return s;
}

namespace {

void require_vector_field(const VectorField& Y, int n) {
    if (static_cast<int>(Y.size()) != n) throw InvalidParameter("vector field needs n components");
    for (const auto& c : Y) {
        if (c.arity() != n) throw InvalidParameter("vector field components must be functions of x");
    }
}

}  // namespace

double div_h(const MetricSpec& spec, const VectorField& Y, const TangentPoint& tp,
             const EngineOptions& options) {
    const int n = spec.dim();
    require_vector_field(Y, n);
    const PointGeometry geo = connection_geometry(spec, tp, options);
    double s = 0.0;
    for (int i = 0; i < n; ++i) {
        s += taylor(Y[static_cast<std::size_t>(i)], tp.x, 1, options).first_derivative(i);
    }
    for (int j = 0; j < n; ++j) {
        const double yj = Y[static_cast<std::size_t>(j)](tp.x);
        for (int i = 0; i < n; ++i) s += geo.christoffel(i, i, j) * yj;
    }
    return s;
}

double div_v(const MetricSpec& spec, const VectorField& Y, const TangentPoint& tp,
             const EngineOptions& options) {
    const int n = spec.dim();
    require_vector_field(Y, n);
    const PointGeometry geo = connection_geometry(spec, tp, options);
    double s = 0.0;
    for (int j = 0; j < n; ++j) {
        const double yj = Y[static_cast<std::size_t>(j)](tp.x);
        for (int i = 0; i < n; ++i) s += geo.cartan(i, i, j) * yj;
    }
    return s;
}

}  // namespace finsler
