#pragma once

// Truncated multivariate Taylor polynomials ("jets").
//
// A jet of order k in m variables stores the normalized Taylor coefficients
// c_a = (d^a f)(z0) / a! for every multi-index a with |a| <= k. Products are
// truncated at the smaller order of the two operands and differentiation
// lowers the order by one, so jets derived from a seed of order N carry
// exactly the information that is still exact.

#include <cstdint>
#include <limits>
#include <span>
#include <string>
#include <vector>

namespace finsler {

/// Absolute ceiling on jet order supported by the monomial tables.
inline constexpr int kHardMaxOrder = 5;

class MultiIndex {
public:
    MultiIndex() = default;
    explicit MultiIndex(std::vector<int> orders);

    /// Multi-index with `count` derivatives in variable `var` out of `nvars`.
    static MultiIndex unit(int nvars, int var, int count = 1);
    /// Build from a list of variable indices, e.g. {0, 0, 3} -> d^2/dz0^2 d/dz3.
    static MultiIndex from_variables(int nvars, std::span<const int> vars);

    int size() const noexcept { return static_cast<int>(orders_.size()); }
    int total() const noexcept;
    int operator[](int v) const { return orders_.at(static_cast<std::size_t>(v)); }
    const std::vector<int>& orders() const noexcept { return orders_; }
    /// Product of factorials of the entries.
    double factorial() const;

    friend bool operator==(const MultiIndex&, const MultiIndex&) = default;

private:
    std::vector<int> orders_;
};

/// Graded enumeration of monomials in `nvars` variables up to kHardMaxOrder,
/// with precomputed product and shift tables. Instances are immutable and
/// shared through `for_variables`.
class MonomialTable {
public:
    static const MonomialTable& for_variables(int nvars);

    int variables() const noexcept { return nvars_; }
    int max_order() const noexcept { return max_order_; }
    /// Number of monomials with total degree <= order.
    int count(int order) const { return count_upto_.at(static_cast<std::size_t>(order)); }
    int degree(int index) const { return degree_[static_cast<std::size_t>(index)]; }
    int exponent(int index, int var) const {
        return exps_[static_cast<std::size_t>(index * nvars_ + var)];
    }
    /// Index of monomial a+b, or -1 if it exceeds the table order.
    int product(int a, int b) const {
        return product_[static_cast<std::size_t>(a) * static_cast<std::size_t>(size_) +
                        static_cast<std::size_t>(b)];
    }
    /// Index of monomial a + e_var, or -1.
    int raise(int a, int var) const {
        return raise_[static_cast<std::size_t>(a * nvars_ + var)];
    }
    int index_of(const MultiIndex& idx) const;

private:
    explicit MonomialTable(int nvars);

    int nvars_;
    int max_order_;
    int size_;
    std::vector<int> exps_;
    std::vector<int> degree_;
    std::vector<int> count_upto_;
    std::vector<int> product_;
    std::vector<int> raise_;
    std::vector<std::pair<std::uint64_t, int>> lookup_;  // sorted by code
};

class Jet {
public:
    /// Order reported by table-free constant jets.
    static constexpr int kConstantOrder = std::numeric_limits<int>::max();

    Jet() : c_{0.0} {}
    Jet(double value) : c_{value} {}  // NOLINT: implicit promotion is intended

    /// Seed the variable z_var = value + dz_var as a jet of the given order.
    static Jet variable(const MonomialTable& table, int order, int var, double value);
    static Jet constant(const MonomialTable& table, int order, double value);

    /// Seed all variables of a point; returns one jet per coordinate.
    static std::vector<Jet> seed(std::span<const double> point, int order);

    double value() const noexcept { return c_[0]; }
    int order() const noexcept { return order_; }
    bool is_constant() const noexcept { return table_ == nullptr; }
    const MonomialTable* table() const noexcept { return table_; }
    std::span<const double> coefficients() const noexcept { return c_; }

    /// Normalized Taylor coefficient of the given monomial (0 if beyond order).
    double coefficient(const MultiIndex& idx) const;
    /// Mixed partial derivative at the base point.
    double derivative(const MultiIndex& idx) const;

    /// Partial derivative with respect to one variable; order drops by one.
    Jet d(int var) const;
    /// Value of d(var) without building the jet.
    double first_derivative(int var) const;

    Jet& operator+=(const Jet& rhs);
    Jet& operator-=(const Jet& rhs);
    Jet& operator*=(const Jet& rhs);
    Jet& operator/=(const Jet& rhs);
    Jet& operator+=(double rhs) { c_[0] += rhs; return *this; }
    Jet& operator-=(double rhs) { c_[0] -= rhs; return *this; }
    Jet& operator*=(double rhs);
    Jet& operator/=(double rhs) { return *this *= 1.0 / rhs; }

    Jet operator-() const;

    friend Jet operator+(Jet a, const Jet& b) { return a += b; }
    friend Jet operator-(Jet a, const Jet& b) { return a -= b; }
    friend Jet operator*(const Jet& a, const Jet& b);
    friend Jet operator/(const Jet& a, const Jet& b);
    friend Jet operator+(Jet a, double b) { return a += b; }
    friend Jet operator+(double a, Jet b) { return b += a; }
    friend Jet operator-(Jet a, double b) { return a -= b; }
    friend Jet operator-(double a, const Jet& b) { return (-b) += a; }
    friend Jet operator*(Jet a, double b) { return a *= b; }
    friend Jet operator*(double a, Jet b) { return b *= a; }
    friend Jet operator/(Jet a, double b) { return a /= b; }
    friend Jet operator/(double a, const Jet& b);

    /// f(a) for a univariate f given its derivatives f^(j)(a0), j = 0..order.
    static Jet compose(const Jet& a, std::span<const double> derivatives);

private:
    Jet(const MonomialTable* table, int order);

    const MonomialTable* table_ = nullptr;
    int order_ = kConstantOrder;
    std::vector<double> c_;
};

Jet sqrt(const Jet& a);
Jet exp(const Jet& a);
Jet log(const Jet& a);
Jet sin(const Jet& a);
Jet cos(const Jet& a);
Jet tan(const Jet& a);
/// Real power; integral exponents also accept non-positive bases.
Jet pow(const Jet& a, double p);
Jet pow(const Jet& a, const Jet& b);
Jet reciprocal(const Jet& a);

}  // namespace finsler
