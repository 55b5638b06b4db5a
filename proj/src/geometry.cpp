#include "finsler/geometry.hpp"

#include <Eigen/Dense>
#include <cmath>

namespace finsler {

std::vector<Jet> invert_jets(std::vector<Jet> m, int n) {
    const auto at = [n](int i, int j) { return static_cast<std::size_t>(i * n + j); };
    std::vector<Jet> inv(static_cast<std::size_t>(n * n), Jet(0.0));
    for (int i = 0; i < n; ++i) inv[at(i, i)] = Jet(1.0);

    double scale = 0.0;
    for (const auto& e : m) scale = std::max(scale, std::abs(e.value()));

    for (int col = 0; col < n; ++col) {
        int piv = col;
        for (int r = col + 1; r < n; ++r) {
            if (std::abs(m[at(r, col)].value()) > std::abs(m[at(piv, col)].value())) piv = r;
        }
        if (!(std::abs(m[at(piv, col)].value()) > 1e-14 * scale)) {
            throw SingularMatrix("fundamental tensor is singular");
        }
        if (piv != col) {
            for (int j = 0; j < n; ++j) {
                std::swap(m[at(piv, j)], m[at(col, j)]);
                std::swap(inv[at(piv, j)], inv[at(col, j)]);
            }
        }
        const Jet rp = reciprocal(m[at(col, col)]);
        for (int j = 0; j < n; ++j) {
            m[at(col, j)] = m[at(col, j)] * rp;
            inv[at(col, j)] = inv[at(col, j)] * rp;
        }
        for (int r = 0; r < n; ++r) {
            if (r == col) continue;
            const Jet f = m[at(r, col)];
            for (int j = 0; j < n; ++j) {
                m[at(r, j)] -= f * m[at(col, j)];
                inv[at(r, j)] -= f * inv[at(col, j)];
            }
        }
    }
    return inv;
}

namespace {

Tensor values(const std::vector<Jet>& jets, int n, std::vector<Variance> slots) {
    Tensor t(n, std::move(slots));
    auto data = t.data();
    for (std::size_t i = 0; i < jets.size(); ++i) data[i] = jets[i].value();
    return t;
}

}  // namespace

PointGeometry compute_geometry(const MetricSpec& spec, const TangentPoint& tp, int depth,
                               const EngineOptions& options) {
    if (depth < 2) throw InvalidParameter("geometry depth must be at least 2");
    if (depth > options.max_order || depth > kHardMaxOrder) {
        throw OrderOverflow("derivative depth " + std::to_string(depth) +
                            " exceeds the configured maximum " + std::to_string(options.max_order));
    }
    spec.check_admissible(tp);
    const int n = spec.dim();
    const auto nu = static_cast<std::size_t>(n);
    const auto i2 = [n](int i, int j) { return static_cast<std::size_t>(i * n + j); };
    const auto i3 = [n](int i, int j, int k) { return static_cast<std::size_t>((i * n + j) * n + k); };
    const auto Y = [n](int i) { return n + i; };

    PointGeometry out;
    out.tp = tp;
    out.n = n;
    out.depth = depth;

    const auto z = Jet::seed(tp.joined(), depth);
    const Jet F2 = spec.norm_squared()(std::span<const Jet>(z));
    out.F2 = F2.value();
    if (!(out.F2 > 0.0) || !std::isfinite(out.F2)) throw DomainError("F is not positive at the point");
    out.F = std::sqrt(out.F2);

    std::vector<Jet> F2y(nu);
    for (int i = 0; i < n; ++i) F2y[static_cast<std::size_t>(i)] = F2.d(Y(i));

    std::vector<Jet> g(nu * nu);
    for (int i = 0; i < n; ++i) {
        for (int j = i; j < n; ++j) {
            g[i2(i, j)] = 0.5 * F2y[static_cast<std::size_t>(i)].d(Y(j));
            g[i2(j, i)] = g[i2(i, j)];
        }
    }
    out.g = values(g, n, {Variance::lower, Variance::lower});
    {
        Eigen::MatrixXd a(n, n);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) a(i, j) = out.g(i, j);
        if (!a.allFinite() || Eigen::LLT<Eigen::MatrixXd>(a).info() != Eigen::Success) {
            throw NotPositiveDefinite("fundamental tensor is not positive-definite at the point");
        }
    }
    const std::vector<Jet> ginv = invert_jets(g, n);
    out.ginv = values(ginv, n, {Variance::upper, Variance::upper});

    // G^i = 1/4 g^il ([F^2]_{x^k y^l} y^k - [F^2]_{x^l})
    std::vector<Jet> w(nu);
    for (int l = 0; l < n; ++l) {
        Jet s = -F2.d(l);
        for (int k = 0; k < n; ++k) s += F2y[static_cast<std::size_t>(l)].d(k) * z[static_cast<std::size_t>(Y(k))];
        w[static_cast<std::size_t>(l)] = s;
    }
    std::vector<Jet> G(nu);
    for (int i = 0; i < n; ++i) {
        Jet s(0.0);
        for (int l = 0; l < n; ++l) s += ginv[i2(i, l)] * w[static_cast<std::size_t>(l)];
        G[static_cast<std::size_t>(i)] = 0.25 * s;
    }
    out.spray = values(G, n, {Variance::upper});
    if (depth < 3) return out;

    std::vector<Jet> N(nu * nu);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) N[i2(i, j)] = G[static_cast<std::size_t>(i)].d(Y(j));
    out.nonlinear = values(N, n, {Variance::upper, Variance::lower});

    // dg[(i,j),k] = ∂g_ij/∂x^k, deltag = δg_ij/δx^k, vg = ∂g_ij/∂y^k
    std::vector<Jet> dg(nu * nu * nu), deltag(nu * nu * nu), vg(nu * nu * nu);
    for (int i = 0; i < n; ++i) {
        for (int j = i; j < n; ++j) {
            const Jet& gij = g[i2(i, j)];
            for (int k = 0; k < n; ++k) {
                dg[i3(i, j, k)] = gij.d(k);
                vg[i3(i, j, k)] = gij.d(Y(k));
            }
            for (int k = 0; k < n; ++k) {
                Jet s = dg[i3(i, j, k)];
                for (int m = 0; m < n; ++m) s -= N[i2(m, k)] * vg[i3(i, j, m)];
                deltag[i3(i, j, k)] = s;
            }
            for (int k = 0; k < n; ++k) {
                dg[i3(j, i, k)] = dg[i3(i, j, k)];
                vg[i3(j, i, k)] = vg[i3(i, j, k)];
                deltag[i3(j, i, k)] = deltag[i3(i, j, k)];
            }
        }
    }

    std::vector<Jet> Gamma(nu * nu * nu), gamma(nu * nu * nu), Clow(nu * nu * nu), C(nu * nu * nu);
    for (int j = 0; j < n; ++j) {
        for (int k = j; k < n; ++k) {
            std::vector<Jet> hl(nu), fl(nu), cl(nu);
            for (int l = 0; l < n; ++l) {
                hl[static_cast<std::size_t>(l)] =
                    deltag[i3(l, k, j)] + deltag[i3(j, l, k)] - deltag[i3(j, k, l)];
                fl[static_cast<std::size_t>(l)] = dg[i3(l, k, j)] + dg[i3(j, l, k)] - dg[i3(j, k, l)];
                cl[static_cast<std::size_t>(l)] = 0.5 * vg[i3(l, j, k)];
            }
            for (int l = 0; l < n; ++l) {
                Clow[i3(l, j, k)] = cl[static_cast<std::size_t>(l)];
                Clow[i3(l, k, j)] = cl[static_cast<std::size_t>(l)];
            }
            for (int i = 0; i < n; ++i) {
                Jet a(0.0), b(0.0), c(0.0);
                for (int l = 0; l < n; ++l) {
                    a += ginv[i2(i, l)] * hl[static_cast<std::size_t>(l)];
                    b += ginv[i2(i, l)] * fl[static_cast<std::size_t>(l)];
                    c += ginv[i2(i, l)] * cl[static_cast<std::size_t>(l)];
                }
                Gamma[i3(i, j, k)] = 0.5 * a;
                Gamma[i3(i, k, j)] = Gamma[i3(i, j, k)];
                gamma[i3(i, j, k)] = 0.5 * b;
                gamma[i3(i, k, j)] = gamma[i3(i, j, k)];
                C[i3(i, j, k)] = c;
                C[i3(i, k, j)] = c;
            }
        }
    }
    const std::vector<Variance> ul2{Variance::upper, Variance::lower, Variance::lower};
    out.christoffel = values(Gamma, n, ul2);
    out.formal = values(gamma, n, ul2);
    out.cartan = values(C, n, ul2);
    out.cartan_low = values(Clow, n, {Variance::lower, Variance::lower, Variance::lower});
    if (depth < 4) return out;

    // δ_m of a jet's value: ∂_m f - N^s_m ∂_{y^s} f
    const auto delta_value = [&](const Jet& f, int m) {
        double s = f.first_derivative(m);
        for (int q = 0; q < n; ++q) s -= out.nonlinear(q, m) * f.first_derivative(Y(q));
        return s;
    };

    Tensor R(n, {Variance::upper, Variance::lower, Variance::lower, Variance::lower});
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            for (int k = 0; k < n; ++k) {
                for (int m = k + 1; m < n; ++m) {
                    double v = delta_value(Gamma[i3(i, j, k)], m) - delta_value(Gamma[i3(i, j, m)], k);
                    for (int s = 0; s < n; ++s) {
                        v += out.christoffel(i, s, m) * out.christoffel(s, j, k) -
                             out.christoffel(i, s, k) * out.christoffel(s, j, m);
                    }
                    R(i, j, k, m) = v;
                    R(i, j, m, k) = -v;
                }
            }
        }
    }
    out.chern = std::move(R);

    // R^i_km = δ_m G^i_k - δ_k G^i_m, kept as jets for the depth-5 Ricci gradient.
    std::vector<Jet> Rk(nu * nu * nu, Jet(0.0));
    for (int i = 0; i < n; ++i) {
        for (int k = 0; k < n; ++k) {
            for (int m = k + 1; m < n; ++m) {
                Jet a = N[i2(i, k)].d(m) - N[i2(i, m)].d(k);
                for (int s = 0; s < n; ++s) {
                    a -= N[i2(s, m)] * N[i2(i, k)].d(Y(s));
                    a += N[i2(s, k)] * N[i2(i, m)].d(Y(s));
                }
                Rk[i3(i, k, m)] = a;
                Rk[i3(i, m, k)] = -a;
            }
        }
    }
    out.spray_curv = values(Rk, n, {Variance::upper, Variance::lower, Variance::lower});

    Jet ric(0.0);
    for (int s = 0; s < n; ++s)
        for (int j = 0; j < n; ++j) ric += z[static_cast<std::size_t>(Y(j))] * Rk[i3(s, j, s)];
    out.ricci = ric.value();
    if (depth >= 5) {
        out.ricci_grad_y.resize(nu);
        for (int i = 0; i < n; ++i) out.ricci_grad_y[static_cast<std::size_t>(i)] = ric.first_derivative(Y(i));
    }
    return out;
}

}  // namespace finsler
