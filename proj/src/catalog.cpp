#include "finsler/catalog.hpp"

#include <Eigen/Dense>
#include <cmath>

#include "finsler/expression.hpp"

namespace finsler {

namespace {

template <class S>
auto squared_length(S x) {
    element_t<S> r(0.0);
    for (const auto& v : x) r += v * v;
    return r;
}

void require_dimension(int n) {
    if (n < 2) throw InvalidParameter("metric dimension must be >= 2");
}

// a_ij = scale(x) delta_ij, with scale given as a generic callable of x.
template <class Scale>
std::vector<Function> conformally_flat(int n, Scale scale) {
    std::vector<Function> a;
    a.reserve(static_cast<std::size_t>(n * n));
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            if (i == j) {
                a.push_back(Function::from_generic(n, scale));
            } else {
                a.push_back(Function::constant(n, 0.0));
            }
        }
    }
    return a;
}

}  // namespace

MetricSpec euclidean(int n) {
    require_dimension(n);
    return MetricSpec::riemannian("euclidean", n,
                                  conformally_flat(n, [](auto) { return 1.0; }));
}

MetricSpec sphere(int n, double kappa) {
    require_dimension(n);
    if (!(kappa > 0.0)) throw InvalidParameter("sphere curvature must be positive");
    auto scale = [kappa](auto x) {
        const auto s = 1.0 + squared_length(x);
        return 4.0 / (kappa * s * s);
    };
    return MetricSpec::riemannian("sphere", n, conformally_flat(n, scale));
}

MetricSpec hyperbolic(int n, double kappa) {
    require_dimension(n);
    if (!(kappa > 0.0)) throw InvalidParameter("hyperbolic curvature magnitude must be positive");
    auto scale = [kappa](auto x) {
        const auto s = 1.0 - squared_length(x);
        return 4.0 / (kappa * s * s);
    };
    return MetricSpec::riemannian("hyperbolic", n, conformally_flat(n, scale), 1.0);
}

MetricSpec funk(int n) {
    require_dimension(n);
    std::vector<Function> a;
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            a.push_back(Function::from_generic(n, [i, j](auto x) {
                const auto s = 1.0 - squared_length(x);
                auto num = x[static_cast<std::size_t>(i)] * x[static_cast<std::size_t>(j)];
                if (i == j) num += s;
                return num / (s * s);
            }));
        }
    }
    std::vector<Function> b;
    for (int i = 0; i < n; ++i) {
        b.push_back(Function::from_generic(n, [i](auto x) {
            return x[static_cast<std::size_t>(i)] / (1.0 - squared_length(x));
        }));
    }
    return MetricSpec::randers("funk", n, std::move(a), std::move(b), 1.0);
}

double funk_norm(std::span<const double> x, std::span<const double> y) {
    double xy = 0.0, xx = 0.0, yy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        xy += x[i] * y[i];
        xx += x[i] * x[i];
        yy += y[i] * y[i];
    }
    const double s = 1.0 - xx;
    return (xy + std::sqrt(xy * xy + s * yy)) / s;
}

MetricSpec randers_constant(const std::vector<double>& a, const std::vector<double>& b) {
    const int n = static_cast<int>(b.size());
    require_dimension(n);
    if (a.size() != b.size() * b.size()) throw InvalidParameter("randers a must be n x n");
    Eigen::MatrixXd am(n, n);
    Eigen::VectorXd bv(n);
    for (int i = 0; i < n; ++i) {
        bv(i) = b[static_cast<std::size_t>(i)];
        for (int j = 0; j < n; ++j) am(i, j) = a[static_cast<std::size_t>(i * n + j)];
    }
    if ((am - am.transpose()).cwiseAbs().maxCoeff() > 1e-12) {
        throw InvalidParameter("randers a must be symmetric");
    }
    Eigen::LLT<Eigen::MatrixXd> llt(am);
    if (llt.info() != Eigen::Success) throw InvalidParameter("randers a must be positive-definite");
    if (std::sqrt(bv.dot(llt.solve(bv))) >= 1.0) {
        throw InvalidParameter("randers 1-form must have a-norm < 1");
    }
    std::vector<Function> af, bf;
    for (double v : a) af.push_back(Function::constant(n, v));
    for (double v : b) bf.push_back(Function::constant(n, v));
    return MetricSpec::randers("randers", n, std::move(af), std::move(bf));
}

MetricSpec perturbed_randers(int n) {
    require_dimension(n);
    std::vector<Function> a = conformally_flat(n, [](auto) { return 1.0; });
    std::vector<Function> b;
    b.push_back(Function::from_generic(n, [](auto x) { return 0.3 + 0.1 * x[1]; }));
    for (int i = 1; i < n; ++i) b.push_back(Function::constant(n, 0.0));
    return MetricSpec::randers("perturbed-randers", n, std::move(a), std::move(b));
}

MetricSpec custom_metric(int n, const std::string& expression, std::optional<double> domain_radius) {
    require_dimension(n);
    const Expression e = Expression::parse(expression, n, n);
    return MetricSpec::custom("custom", n, e.function(), domain_radius);
}

std::vector<std::string> catalog_names() {
    return {"euclidean", "flat", "sphere", "hyperbolic", "funk", "randers", "perturbed-randers", "custom"};
}

namespace {

void reject_unknown(const nlohmann::json& params, std::initializer_list<const char*> allowed,
                    const std::string& name) {
    if (params.is_null()) return;
    if (!params.is_object()) throw InvalidParameter("metric params must be an object");
    for (const auto& [key, value] : params.items()) {
        bool ok = false;
        for (const char* a : allowed) ok = ok || key == a;
        if (!ok) throw InvalidParameter("unknown parameter '" + key + "' for metric " + name);
    }
}

double number_or(const nlohmann::json& params, const char* key, double fallback) {
    if (params.is_null() || !params.contains(key)) return fallback;
    if (!params.at(key).is_number()) throw InvalidParameter(std::string(key) + " must be a number");
    return params.at(key).get<double>();
}

std::vector<double> flat_numbers(const nlohmann::json& j, const char* key) {
    std::vector<double> out;
    if (!j.is_array()) throw InvalidParameter(std::string(key) + " must be an array");
    for (const auto& v : j) {
        if (v.is_array()) {
            for (const auto& w : v) {
                if (!w.is_number()) throw InvalidParameter(std::string(key) + " entries must be numbers");
                out.push_back(w.get<double>());
            }
        } else if (v.is_number()) {
            out.push_back(v.get<double>());
        } else {
            throw InvalidParameter(std::string(key) + " entries must be numbers");
        }
    }
    return out;
}

}  // namespace

MetricSpec catalog(const std::string& name, int n, const nlohmann::json& params) {
    if (name == "euclidean" || name == "flat") {
        reject_unknown(params, {}, name);
        return euclidean(n).renamed(name);
    }
    if (name == "sphere") {
        reject_unknown(params, {"kappa"}, name);
        return sphere(n, number_or(params, "kappa", 1.0));
    }
    if (name == "hyperbolic") {
        reject_unknown(params, {"kappa"}, name);
        return hyperbolic(n, number_or(params, "kappa", 1.0));
    }
    if (name == "funk") {
        reject_unknown(params, {}, name);
        return funk(n);
    }
    if (name == "perturbed-randers") {
        reject_unknown(params, {}, name);
        return perturbed_randers(n);
    }
    if (name == "randers") {
        reject_unknown(params, {"a", "b"}, name);
        if (params.is_null() || !params.contains("b")) throw InvalidParameter("randers needs params.b");
        const auto b = flat_numbers(params.at("b"), "b");
        if (static_cast<int>(b.size()) != n) throw InvalidParameter("randers b must have n entries");
        std::vector<double> a;
        if (params.contains("a")) {
            a = flat_numbers(params.at("a"), "a");
        } else {
            a.assign(static_cast<std::size_t>(n * n), 0.0);
            for (int i = 0; i < n; ++i) a[static_cast<std::size_t>(i * n + i)] = 1.0;
        }
        return randers_constant(a, b);
    }
    if (name == "custom") {
        reject_unknown(params, {"F", "domain_radius"}, name);
        if (params.is_null() || !params.contains("F") || !params.at("F").is_string()) {
            throw InvalidParameter("custom metric needs params.F (expression string)");
        }
        std::optional<double> radius;
        if (params.contains("domain_radius")) radius = number_or(params, "domain_radius", 0.0);
        return custom_metric(n, params.at("F").get<std::string>(), radius);
    }
    throw InvalidParameter("unknown metric '" + name + "'");
}

}  // namespace finsler
