#pragma once

#include <cmath>
#include <complex>
#include <map>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "rokhlin/rational.hpp"

namespace rokhlin {

namespace detail {

inline unsigned euler_phi(unsigned n) {
    unsigned result = n;
    for (unsigned p = 2; p * p <= n; ++p) {
        if (n % p == 0) {
            while (n % p == 0) n /= p;
            result -= result / p;
        }
    }
    if (n > 1) result -= result / n;
    return result;
}

// Exact polynomial division, quotient only. Divisor must be monic.
inline std::vector<Integer> poly_div_monic(std::vector<Integer> num, const std::vector<Integer>& den) {
    if (num.size() < den.size()) return {};
    std::vector<Integer> quot(num.size() - den.size() + 1, Integer(0));
    for (std::size_t i = num.size(); i-- > den.size() - 1;) {
        Integer c = num[i];
        if (c == 0) continue;
        std::size_t shift = i - (den.size() - 1);
        quot[shift] = c;
        for (std::size_t j = 0; j < den.size(); ++j) num[shift + j] -= c * den[j];
    }
    return quot;
}

/// Coefficients of the N-th cyclotomic polynomial, low degree first.
inline const std::vector<Integer>& cyclotomic_polynomial(unsigned n) {
    static std::map<unsigned, std::vector<Integer>> cache;
    auto it = cache.find(n);
    if (it != cache.end()) return it->second;
    // x^n - 1 divided by the product of Phi_d over proper divisors d of n.
    std::vector<Integer> num(n + 1, Integer(0));
    num[0] = -1;
    num[n] = 1;
    for (unsigned d = 1; d < n; ++d) {
        if (n % d == 0) num = poly_div_monic(std::move(num), cyclotomic_polynomial(d));
    }
    while (num.size() > 1 && num.back() == 0) num.pop_back();
    return cache.emplace(n, std::move(num)).first->second;
}

}  // namespace detail

/// An element of Q(zeta_N), stored as the residue mod Phi_N.
/// Two values are equal iff their coefficient vectors agree after
/// lifting both to the lcm conductor; all predicates are exact.
class Cyclotomic {
public:
    Cyclotomic() : conductor_(1), coeffs_(1, Rational(0)) {}
    explicit Cyclotomic(const Rational& r) : conductor_(1), coeffs_(1, r) {}
    explicit Cyclotomic(long long n) : conductor_(1), coeffs_(1, Rational(n)) {}

    Cyclotomic(unsigned conductor, std::vector<Rational> reduced_coeffs)
        : conductor_(conductor), coeffs_(std::move(reduced_coeffs)) {
        if (conductor_ == 0) throw std::invalid_argument("conductor must be positive");
        if (coeffs_.size() != degree(conductor_))
            throw std::invalid_argument("coefficient count does not match deg(Phi_N)");
    }

    /// zeta_N^k.
    static Cyclotomic root_of_unity(unsigned n, long long k) {
        if (n == 0) throw std::invalid_argument("conductor must be positive");
        long long e = ((k % static_cast<long long>(n)) + n) % n;
        std::vector<Rational> poly(static_cast<std::size_t>(e) + 1, Rational(0));
        poly.back() = 1;
        return from_polynomial(n, std::move(poly));
    }

    static Cyclotomic zero() { return Cyclotomic(); }
    static Cyclotomic one() { return Cyclotomic(Rational(1)); }

    unsigned conductor() const { return conductor_; }
    const std::vector<Rational>& coeffs() const { return coeffs_; }

    bool is_zero() const {
        for (const auto& c : coeffs_)
            if (c != 0) return false;
        return true;
    }

    bool is_rational() const {
        for (std::size_t i = 1; i < coeffs_.size(); ++i)
            if (coeffs_[i] != 0) return false;
        return true;
    }

    /// Value as a rational; throws when the element is irrational.
    Rational as_rational() const {
        if (!is_rational()) throw std::domain_error("cyclotomic value is not rational");
        return coeffs_[0];
    }

    Cyclotomic lifted_to(unsigned m) const {
        if (m == conductor_) return *this;
        if (m % conductor_ != 0) throw std::invalid_argument("conductor does not divide target");
        unsigned q = m / conductor_;
        std::vector<Rational> poly(static_cast<std::size_t>(coeffs_.size() - 1) * q + 1, Rational(0));
        for (std::size_t k = 0; k < coeffs_.size(); ++k) poly[k * q] = coeffs_[k];
        return from_polynomial(m, std::move(poly));
    }

    friend Cyclotomic operator+(const Cyclotomic& a, const Cyclotomic& b) {
        auto [x, y] = to_common(a, b);
        for (std::size_t i = 0; i < x.coeffs_.size(); ++i) x.coeffs_[i] += y.coeffs_[i];
        return x;
    }

    friend Cyclotomic operator-(const Cyclotomic& a, const Cyclotomic& b) {
        auto [x, y] = to_common(a, b);
        for (std::size_t i = 0; i < x.coeffs_.size(); ++i) x.coeffs_[i] -= y.coeffs_[i];
        return x;
    }

    Cyclotomic operator-() const {
        Cyclotomic r = *this;
        for (auto& c : r.coeffs_) c = -c;
        return r;
    }

    friend Cyclotomic operator*(const Cyclotomic& a, const Cyclotomic& b) {
        auto [x, y] = to_common(a, b);
        std::vector<Rational> prod(x.coeffs_.size() + y.coeffs_.size() - 1, Rational(0));
        for (std::size_t i = 0; i < x.coeffs_.size(); ++i) {
            if (x.coeffs_[i] == 0) continue;
            for (std::size_t j = 0; j < y.coeffs_.size(); ++j)
                prod[i + j] += x.coeffs_[i] * y.coeffs_[j];
        }
        return from_polynomial(x.conductor_, std::move(prod));
    }

    friend Cyclotomic operator*(const Rational& r, const Cyclotomic& a) {
        Cyclotomic out = a;
        for (auto& c : out.coeffs_) c *= r;
        return out;
    }

    friend Cyclotomic operator/(const Cyclotomic& a, const Rational& r) {
        if (r == 0) throw std::domain_error("division by zero");
        return Rational(denominator(r), numerator(r)) * a;
    }

    Cyclotomic& operator+=(const Cyclotomic& b) { return *this = *this + b; }
    Cyclotomic& operator-=(const Cyclotomic& b) { return *this = *this - b; }
    Cyclotomic& operator*=(const Cyclotomic& b) { return *this = *this * b; }

    friend bool operator==(const Cyclotomic& a, const Cyclotomic& b) {
        auto [x, y] = to_common(a, b);
        return x.coeffs_ == y.coeffs_;
    }
    friend bool operator!=(const Cyclotomic& a, const Cyclotomic& b) { return !(a == b); }

    /// Complex conjugation: zeta_N -> zeta_N^{-1}.
    Cyclotomic conj() const {
        std::vector<Rational> poly(conductor_, Rational(0));
        for (std::size_t k = 0; k < coeffs_.size(); ++k)
            poly[(conductor_ - k) % conductor_] += coeffs_[k];
        return from_polynomial(conductor_, std::move(poly));
    }

    /// a * conj(a), a real cyclotomic.
    Cyclotomic norm_squared() const { return *this * conj(); }

    /// True iff |a| = 1 exactly.
    bool is_unit_modulus() const { return norm_squared() == one(); }

    std::complex<double> to_complex() const {
        std::complex<double> sum(0.0, 0.0);
        const double theta = 2.0 * 3.14159265358979323846 / conductor_;
        for (std::size_t k = 0; k < coeffs_.size(); ++k) {
            if (coeffs_[k] == 0) continue;
            double c = rational_to_double(coeffs_[k]);
            sum += c * std::complex<double>(std::cos(theta * k), std::sin(theta * k));
        }
        return sum;
    }

    static unsigned degree(unsigned conductor) { return detail::euler_phi(conductor); }

    /// Builds a value from an arbitrary-degree polynomial in zeta_N,
    /// reducing mod Phi_N.
    static Cyclotomic from_polynomial(unsigned n, std::vector<Rational> poly) {
        const auto& phi = detail::cyclotomic_polynomial(n);
        const std::size_t deg = phi.size() - 1;
        if (poly.size() < deg) poly.resize(deg, Rational(0));
        for (std::size_t i = poly.size(); i-- > deg;) {
            Rational c = poly[i];
            if (c != 0) {
                std::size_t shift = i - deg;
                for (std::size_t j = 0; j < phi.size(); ++j) poly[shift + j] -= c * Rational(phi[j]);
            }
        }
        poly.resize(deg);
        Cyclotomic out;
        out.conductor_ = n;
        out.coeffs_ = std::move(poly);
        return out;
    }

private:
    static std::pair<Cyclotomic, Cyclotomic> to_common(const Cyclotomic& a, const Cyclotomic& b) {
        unsigned l = std::lcm(a.conductor_, b.conductor_);
        return {a.lifted_to(l), b.lifted_to(l)};
    }

    unsigned conductor_;
    std::vector<Rational> coeffs_;
};

}  // namespace rokhlin
