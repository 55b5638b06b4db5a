#include "finsler/jet.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <stdexcept>

#include "finsler/errors.hpp"

namespace finsler {

namespace {

constexpr int kMaxTableVariables = 10;

std::uint64_t encode(std::span<const int> exps) {
    std::uint64_t code = 0;
    std::uint64_t base = 1;
    for (int e : exps) {
        code += static_cast<std::uint64_t>(e) * base;
        base *= static_cast<std::uint64_t>(kHardMaxOrder + 1);
    }
    return code;
}

// Appends all exponent vectors of total degree `remaining` for variables [var, nvars).
void enumerate_degree(int nvars, int var, int remaining, std::vector<int>& current,
                      std::vector<int>& out) {
    if (var == nvars - 1) {
        current[static_cast<std::size_t>(var)] = remaining;
        out.insert(out.end(), current.begin(), current.end());
        return;
    }
    for (int e = remaining; e >= 0; --e) {
        current[static_cast<std::size_t>(var)] = e;
        enumerate_degree(nvars, var + 1, remaining - e, current, out);
    }
}

double factorial(int k) {
    double f = 1.0;
    for (int i = 2; i <= k; ++i) f *= i;
    return f;
}

}  // namespace

// ---------------------------------------------------------------------------
// MultiIndex

MultiIndex::MultiIndex(std::vector<int> orders) : orders_(std::move(orders)) {
    for (int o : orders_) {
        if (o < 0) throw InvalidParameter("multi-index entries must be non-negative");
    }
}

MultiIndex MultiIndex::unit(int nvars, int var, int count) {
    std::vector<int> o(static_cast<std::size_t>(nvars), 0);
    o.at(static_cast<std::size_t>(var)) = count;
    return MultiIndex(std::move(o));
}

MultiIndex MultiIndex::from_variables(int nvars, std::span<const int> vars) {
    std::vector<int> o(static_cast<std::size_t>(nvars), 0);
    for (int v : vars) ++o.at(static_cast<std::size_t>(v));
    return MultiIndex(std::move(o));
}

int MultiIndex::total() const noexcept {
    int t = 0;
    for (int o : orders_) t += o;
    return t;
}

double MultiIndex::factorial() const {
    double f = 1.0;
    for (int o : orders_) f *= finsler::factorial(o);
    return f;
}

// ---------------------------------------------------------------------------
// MonomialTable

const MonomialTable& MonomialTable::for_variables(int nvars) {
    if (nvars < 1 || nvars > kMaxTableVariables) {
        throw InvalidParameter("jets support 1.." + std::to_string(kMaxTableVariables) +
                               " variables, got " + std::to_string(nvars));
    }
    static std::mutex mutex;
    static std::map<int, std::unique_ptr<const MonomialTable>> registry;
    std::lock_guard lock(mutex);
    auto& slot = registry[nvars];
    if (!slot) slot.reset(new MonomialTable(nvars));
    return *slot;
}

MonomialTable::MonomialTable(int nvars) : nvars_(nvars), max_order_(kHardMaxOrder) {
    std::vector<int> current(static_cast<std::size_t>(nvars), 0);
    count_upto_.reserve(static_cast<std::size_t>(max_order_) + 1);
    for (int d = 0; d <= max_order_; ++d) {
        enumerate_degree(nvars, 0, d, current, exps_);
        count_upto_.push_back(static_cast<int>(exps_.size()) / nvars);
    }
    size_ = count_upto_.back();
    degree_.resize(static_cast<std::size_t>(size_));
    lookup_.reserve(static_cast<std::size_t>(size_));
    for (int i = 0; i < size_; ++i) {
        std::span<const int> e(exps_.data() + static_cast<std::ptrdiff_t>(i) * nvars,
                               static_cast<std::size_t>(nvars));
        int deg = 0;
        for (int x : e) deg += x;
        degree_[static_cast<std::size_t>(i)] = deg;
        lookup_.emplace_back(encode(e), i);
    }
    std::sort(lookup_.begin(), lookup_.end());

    auto find = [this](std::span<const int> e) {
        auto it = std::lower_bound(lookup_.begin(), lookup_.end(),
                                   std::make_pair(encode(e), -1));
        return it->second;
    };

    product_.assign(static_cast<std::size_t>(size_) * static_cast<std::size_t>(size_), -1);
    std::vector<int> sum(static_cast<std::size_t>(nvars));
    for (int a = 0; a < size_; ++a) {
        for (int b = 0; b < size_; ++b) {
            if (degree(a) + degree(b) > max_order_) continue;
            for (int v = 0; v < nvars; ++v) {
                sum[static_cast<std::size_t>(v)] = exponent(a, v) + exponent(b, v);
            }
            product_[static_cast<std::size_t>(a) * static_cast<std::size_t>(size_) +
                     static_cast<std::size_t>(b)] = find(sum);
        }
    }
    raise_.assign(static_cast<std::size_t>(size_ * nvars), -1);
    for (int a = 0; a < size_; ++a) {
        if (degree(a) == max_order_) continue;
        for (int v = 0; v < nvars; ++v) {
            for (int w = 0; w < nvars; ++w) {
                sum[static_cast<std::size_t>(w)] = exponent(a, w) + (w == v ? 1 : 0);
            }
            raise_[static_cast<std::size_t>(a * nvars + v)] = find(sum);
        }
    }
}

int MonomialTable::index_of(const MultiIndex& idx) const {
    if (idx.size() != nvars_) {
        throw InvalidParameter("multi-index has " + std::to_string(idx.size()) +
                               " entries, expected " + std::to_string(nvars_));
    }
    if (idx.total() > max_order_) return -1;
    auto code = encode(idx.orders());
    auto it = std::lower_bound(lookup_.begin(), lookup_.end(), std::make_pair(code, -1));
    return it->second;
}

// ---------------------------------------------------------------------------
// Jet

Jet::Jet(const MonomialTable* table, int order)
    : table_(table), order_(order),
      c_(static_cast<std::size_t>(table->count(order)), 0.0) {}

Jet Jet::variable(const MonomialTable& table, int order, int var, double value) {
    if (order < 0 || order > table.max_order()) {
        throw OrderOverflow("jet order " + std::to_string(order) + " outside 0.." +
                            std::to_string(table.max_order()));
    }
    Jet j(&table, order);
    j.c_[0] = value;
    if (order >= 1) j.c_[static_cast<std::size_t>(table.raise(0, var))] = 1.0;
    return j;
}

Jet Jet::constant(const MonomialTable& table, int order, double value) {
    Jet j(&table, order);
    j.c_[0] = value;
    return j;
}

std::vector<Jet> Jet::seed(std::span<const double> point, int order) {
    const auto& table = MonomialTable::for_variables(static_cast<int>(point.size()));
    std::vector<Jet> z;
    z.reserve(point.size());
    for (std::size_t v = 0; v < point.size(); ++v) {
        z.push_back(variable(table, order, static_cast<int>(v), point[v]));
    }
    return z;
}

double Jet::coefficient(const MultiIndex& idx) const {
    if (table_ == nullptr) return idx.total() == 0 ? c_[0] : 0.0;
    if (idx.total() > order_) {
        throw OrderOverflow("coefficient of degree " + std::to_string(idx.total()) +
                            " requested from a jet of order " + std::to_string(order_));
    }
    return c_[static_cast<std::size_t>(table_->index_of(idx))];
}

double Jet::derivative(const MultiIndex& idx) const {
    return coefficient(idx) * idx.factorial();
}

Jet Jet::d(int var) const {
    if (table_ == nullptr) return Jet(0.0);
    if (order_ == 0) throw OrderOverflow("cannot differentiate an order-0 jet");
    Jet r(table_, order_ - 1);
    const int m = table_->count(order_ - 1);
    for (int b = 0; b < m; ++b) {
        const int up = table_->raise(b, var);
        r.c_[static_cast<std::size_t>(b)] =
            c_[static_cast<std::size_t>(up)] * (table_->exponent(b, var) + 1);
    }
    return r;
}

double Jet::first_derivative(int var) const {
    if (table_ == nullptr) return 0.0;
    if (order_ == 0) throw OrderOverflow("cannot differentiate an order-0 jet");
    return c_[static_cast<std::size_t>(table_->raise(0, var))];
}

namespace {

void require_same_table(const MonomialTable* a, const MonomialTable* b) {
    if (a != b) throw std::logic_error("jets seeded over different variable sets were combined");
}

}  // namespace

Jet& Jet::operator+=(const Jet& rhs) {
    if (rhs.table_ == nullptr) {
        c_[0] += rhs.c_[0];
        return *this;
    }
    if (table_ == nullptr) {
        const double v = c_[0];
        *this = rhs;
        c_[0] += v;
        return *this;
    }
    require_same_table(table_, rhs.table_);
    if (rhs.order_ < order_) {
        order_ = rhs.order_;
        c_.resize(rhs.c_.size());
    }
    for (std::size_t i = 0; i < c_.size(); ++i) c_[i] += rhs.c_[i];
    return *this;
}

Jet& Jet::operator-=(const Jet& rhs) {
    if (rhs.table_ == nullptr) {
        c_[0] -= rhs.c_[0];
        return *this;
    }
    if (table_ == nullptr) {
        const double v = c_[0];
        *this = -rhs;
        c_[0] += v;
        return *this;
    }
    require_same_table(table_, rhs.table_);
    if (rhs.order_ < order_) {
        order_ = rhs.order_;
        c_.resize(rhs.c_.size());
    }
    for (std::size_t i = 0; i < c_.size(); ++i) c_[i] -= rhs.c_[i];
    return *this;
}

Jet& Jet::operator*=(double rhs) {
    for (double& c : c_) c *= rhs;
    return *this;
}

Jet& Jet::operator*=(const Jet& rhs) { return *this = *this * rhs; }
Jet& Jet::operator/=(const Jet& rhs) { return *this = *this / rhs; }

Jet Jet::operator-() const {
    Jet r = *this;
    for (double& c : r.c_) c = -c;
    return r;
}

Jet operator*(const Jet& a, const Jet& b) {
    if (a.table_ == nullptr) return b * a.c_[0];
    if (b.table_ == nullptr) return a * b.c_[0];
    require_same_table(a.table_, b.table_);
    const MonomialTable& t = *a.table_;
    const int k = std::min(a.order_, b.order_);
    Jet r(a.table_, k);
    const int ma = t.count(k);
    for (int i = 0; i < ma; ++i) {
        const double ai = a.c_[static_cast<std::size_t>(i)];
        if (ai == 0.0) continue;
        const int mb = t.count(k - t.degree(i));
        for (int j = 0; j < mb; ++j) {
            const double bj = b.c_[static_cast<std::size_t>(j)];
            if (bj == 0.0) continue;
            r.c_[static_cast<std::size_t>(t.product(i, j))] += ai * bj;
        }
    }
    return r;
}

Jet operator/(const Jet& a, const Jet& b) {
    if (b.table_ == nullptr) {
        if (b.c_[0] == 0.0) throw DomainError("division by zero");
        return a * (1.0 / b.c_[0]);
    }
    return a * reciprocal(b);
}

Jet operator/(double a, const Jet& b) { return reciprocal(b) * a; }

Jet Jet::compose(const Jet& a, std::span<const double> derivatives) {
    if (a.table_ == nullptr) return Jet(derivatives[0]);
    const int k = a.order_;
    if (static_cast<int>(derivatives.size()) < k + 1) {
        throw std::logic_error("compose needs derivatives up to the jet order");
    }
    Jet u = a;
    u.c_[0] = 0.0;
    Jet r(derivatives[static_cast<std::size_t>(k)] / factorial(k));
    for (int j = k - 1; j >= 0; --j) {
        r = r * u;
        r += derivatives[static_cast<std::size_t>(j)] / factorial(j);
    }
    if (r.table_ == nullptr) r = Jet::constant(*a.table_, k, r.value());
    return r;
}

// ---------------------------------------------------------------------------
// Elementary functions

namespace {

int jet_order(const Jet& a) { return a.is_constant() ? 0 : a.order(); }

Jet power_derivatives(const Jet& a, double p) {
    const int k = jet_order(a);
    const double a0 = a.value();
    std::vector<double> d(static_cast<std::size_t>(k) + 1);
    double coef = 1.0;
    for (int j = 0; j <= k; ++j) {
        d[static_cast<std::size_t>(j)] = coef * std::pow(a0, p - j);
        coef *= (p - j);
    }
    return Jet::compose(a, d);
}

Jet integer_power(const Jet& a, long e) {
    Jet result(1.0);
    Jet base = a;
    while (e > 0) {
        if (e & 1) result = result * base;
        e >>= 1;
        if (e > 0) base = base * base;
    }
    return result;
}

}  // namespace

Jet reciprocal(const Jet& a) {
    if (a.value() == 0.0) throw DomainError("reciprocal of zero");
    return power_derivatives(a, -1.0);
}

Jet sqrt(const Jet& a) {
    const double a0 = a.value();
    if (a0 < 0.0 || (a0 == 0.0 && jet_order(a) > 0)) {
        throw DomainError("sqrt undefined or singular at " + std::to_string(a0));
    }
    if (a.is_constant()) return Jet(std::sqrt(a0));
    return power_derivatives(a, 0.5);
}

Jet exp(const Jet& a) {
    const int k = jet_order(a);
    std::vector<double> d(static_cast<std::size_t>(k) + 1, std::exp(a.value()));
    return Jet::compose(a, d);
}

Jet log(const Jet& a) {
    const double a0 = a.value();
    if (a0 <= 0.0) throw DomainError("log of non-positive value " + std::to_string(a0));
    const int k = jet_order(a);
    std::vector<double> d(static_cast<std::size_t>(k) + 1);
    d[0] = std::log(a0);
    double f = 1.0;  // (j-1)!
    for (int j = 1; j <= k; ++j) {
        d[static_cast<std::size_t>(j)] = ((j % 2 == 1) ? 1.0 : -1.0) * f / std::pow(a0, j);
        f *= j;
    }
    return Jet::compose(a, d);
}

Jet sin(const Jet& a) {
    const int k = jet_order(a);
    const double s = std::sin(a.value());
    const double c = std::cos(a.value());
    const double cycle[4] = {s, c, -s, -c};
    std::vector<double> d(static_cast<std::size_t>(k) + 1);
    for (int j = 0; j <= k; ++j) d[static_cast<std::size_t>(j)] = cycle[j % 4];
    return Jet::compose(a, d);
}

Jet cos(const Jet& a) {
    const int k = jet_order(a);
    const double s = std::sin(a.value());
    const double c = std::cos(a.value());
    const double cycle[4] = {c, -s, -c, s};
    std::vector<double> d(static_cast<std::size_t>(k) + 1);
    for (int j = 0; j <= k; ++j) d[static_cast<std::size_t>(j)] = cycle[j % 4];
    return Jet::compose(a, d);
}

Jet tan(const Jet& a) {
    if (std::cos(a.value()) == 0.0) throw DomainError("tan pole");
    return sin(a) / cos(a);
}

Jet pow(const Jet& a, double p) {
    const double rounded = std::round(p);
    const bool integral = rounded == p && std::abs(p) <= 64.0;
    if (integral) {
        const long e = static_cast<long>(rounded);
        if (e >= 0) return integer_power(a, e);
        return reciprocal(integer_power(a, -e));
    }
    const double a0 = a.value();
    if (a0 < 0.0 || (a0 == 0.0 && jet_order(a) > 0)) {
        throw DomainError("non-integer power of non-positive value " + std::to_string(a0));
    }
    if (a.is_constant()) return Jet(std::pow(a0, p));
    return power_derivatives(a, p);
}

Jet pow(const Jet& a, const Jet& b) {
    if (b.is_constant()) return pow(a, b.value());
    return exp(b * log(a));
}

}  // namespace finsler
