#pragma once

#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

#include "rokhlin/cyclotomic.hpp"

namespace rokhlin {

/// Thrown when an input violates a documented precondition or invariant.
class input_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Thrown when a derived internal identity fails; this is a bug signal,
/// not bad input.
class inconsistency_error : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

enum class GroupKind { Cyclic, Abelian, Table };

struct IrreducibleCharacter {
    long long dim;
    std::vector<Cyclotomic> values;  // one per conjugacy class
};

/// A finite group given either as a (product of) cyclic order(s), where
/// elements are mixed-radix indices and the bicharacter
/// zeta(xi^i, xi^j) = xi^{ij} is available, or as a character-table
/// record (conjugacy classes with sizes plus the irreducible table).
class GroupModel {
public:
    static GroupModel cyclic(unsigned n) {
        if (n == 0) throw input_error("invalid-order: cyclic group order must be >= 1");
        GroupModel g;
        g.kind_ = GroupKind::Cyclic;
        g.orders_ = {n};
        g.order_ = n;
        return g;
    }

    static GroupModel abelian(std::vector<unsigned> orders) {
        if (orders.empty()) throw input_error("abelian group needs at least one cyclic factor");
        GroupModel g;
        g.kind_ = GroupKind::Abelian;
        g.order_ = 1;
        for (unsigned n : orders) {
            if (n == 0) throw input_error("invalid-order: cyclic factor order must be >= 1");
            g.order_ *= n;
        }
        g.orders_ = std::move(orders);
        return g;
    }

    static GroupModel table(std::vector<unsigned> class_sizes, unsigned exponent,
                            std::vector<IrreducibleCharacter> irreducibles) {
        GroupModel g;
        g.kind_ = GroupKind::Table;
        g.class_sizes_ = std::move(class_sizes);
        g.exponent_ = exponent;
        g.irreducibles_ = std::move(irreducibles);
        g.order_ = 0;
        for (unsigned s : g.class_sizes_) g.order_ += s;
        g.validate_table();
        return g;
    }

    GroupKind kind() const { return kind_; }
    unsigned order() const { return order_; }
    bool is_abelian() const { return kind_ != GroupKind::Table; }
    const std::vector<unsigned>& cyclic_orders() const { return orders_; }

    /// lcm of element orders; conductor of all bicharacter values.
    unsigned exponent() const {
        if (kind_ == GroupKind::Table) return exponent_;
        unsigned e = 1;
        for (unsigned n : orders_) e = std::lcm(e, n);
        return e;
    }

    // --- element arithmetic (abelian kinds; elements are indices 0..order-1) ---

    unsigned identity() const { return 0; }

    std::vector<unsigned> digits(unsigned a) const {
        require_abelian("element arithmetic");
        std::vector<unsigned> d(orders_.size());
        for (std::size_t i = orders_.size(); i-- > 0;) {
            d[i] = a % orders_[i];
            a /= orders_[i];
        }
        return d;
    }

    unsigned from_digits(const std::vector<unsigned>& d) const {
        unsigned a = 0;
        for (std::size_t i = 0; i < orders_.size(); ++i) a = a * orders_[i] + d[i] % orders_[i];
        return a;
    }

    unsigned mul(unsigned a, unsigned b) const {
        auto da = digits(a), db = digits(b);
        for (std::size_t i = 0; i < da.size(); ++i) da[i] = (da[i] + db[i]) % orders_[i];
        return from_digits(da);
    }

    unsigned inv(unsigned a) const {
        auto d = digits(a);
        for (std::size_t i = 0; i < d.size(); ++i) d[i] = (orders_[i] - d[i]) % orders_[i];
        return from_digits(d);
    }

    unsigned element_order(unsigned a) const {
        unsigned k = 1, x = a;
        while (x != identity()) {
            x = mul(x, a);
            ++k;
        }
        return k;
    }

    /// zeta(g, h): symmetric, bimultiplicative, unit modulus.
    Cyclotomic bichar(unsigned g, unsigned h) const {
        require_abelian("bichar");
        auto dg = digits(g), dh = digits(h);
        Cyclotomic out = Cyclotomic::one();
        for (std::size_t i = 0; i < orders_.size(); ++i)
            out *= Cyclotomic::root_of_unity(orders_[i],
                                             static_cast<long long>(dg[i]) * dh[i]);
        return out;
    }

    /// Sum over g of zeta^g(h); equals |G| * delta(h, 1).
    Cyclotomic dual_delta_sum(unsigned h) const {
        Cyclotomic sum;
        for (unsigned g = 0; g < order_; ++g) sum += bichar(g, h);
        return sum;
    }

    // --- conjugacy classes ---

    unsigned class_count() const { return kind_ == GroupKind::Table ? class_sizes_.size() : order_; }

    unsigned class_size(unsigned c) const { return kind_ == GroupKind::Table ? class_sizes_[c] : 1; }

    // --- irreducible characters (dual characters in the abelian case) ---

    unsigned irreducible_count() const {
        return kind_ == GroupKind::Table ? irreducibles_.size() : order_;
    }

    long long irreducible_dim(unsigned i) const {
        return kind_ == GroupKind::Table ? irreducibles_[i].dim : 1;
    }

    Cyclotomic irreducible_value(unsigned i, unsigned c) const {
        return kind_ == GroupKind::Table ? irreducibles_[i].values[c] : bichar(i, c);
    }

    const std::vector<unsigned>& table_class_sizes() const { return class_sizes_; }
    const std::vector<IrreducibleCharacter>& table_irreducibles() const { return irreducibles_; }

    friend bool operator==(const GroupModel& a, const GroupModel& b) {
        if (a.kind_ != b.kind_ || a.order_ != b.order_) return false;
        if (a.kind_ != GroupKind::Table) return a.orders_ == b.orders_;
        if (a.class_sizes_ != b.class_sizes_ || a.exponent_ != b.exponent_) return false;
        if (a.irreducibles_.size() != b.irreducibles_.size()) return false;
        for (std::size_t i = 0; i < a.irreducibles_.size(); ++i) {
            if (a.irreducibles_[i].dim != b.irreducibles_[i].dim ||
                a.irreducibles_[i].values != b.irreducibles_[i].values)
                return false;
        }
        return true;
    }
    friend bool operator!=(const GroupModel& a, const GroupModel& b) { return !(a == b); }

private:
    void require_abelian(const char* what) const {
        if (kind_ == GroupKind::Table)
            throw input_error(std::string("unsupported-operation: ") + what +
                              " requires a cyclic/abelian group");
    }

    void validate_table() const {
        if (class_sizes_.empty() || class_sizes_[0] != 1)
            throw input_error("table group: class 0 must be the identity class of size 1");
        long long sq = 0;
        for (const auto& irr : irreducibles_) {
            if (irr.values.size() != class_sizes_.size())
                throw input_error("table group: irreducible value count != class count");
            if (irr.values[0] != Cyclotomic(Rational(irr.dim)))
                throw input_error("table group: irreducible value at identity != dim");
            sq += irr.dim * irr.dim;
        }
        if (sq != static_cast<long long>(order_))
            throw input_error("table group: sum of squared dims != group order");
        // Column orthogonality: sum_i chi_i(c) conj(chi_i(c')) = |G|/|c| * delta(c,c').
        for (unsigned c = 0; c < class_sizes_.size(); ++c) {
            for (unsigned c2 = c; c2 < class_sizes_.size(); ++c2) {
                Cyclotomic sum;
                for (const auto& irr : irreducibles_) sum += irr.values[c] * irr.values[c2].conj();
                Cyclotomic expect =
                    c == c2 ? Cyclotomic(Rational(order_, class_sizes_[c])) : Cyclotomic::zero();
                if (sum != expect)
                    throw input_error("table group: column orthogonality fails at classes " +
                                      std::to_string(c) + "," + std::to_string(c2));
            }
        }
    }

    GroupKind kind_ = GroupKind::Cyclic;
    unsigned order_ = 1;
    std::vector<unsigned> orders_;               // cyclic/abelian
    std::vector<unsigned> class_sizes_;          // table
    unsigned exponent_ = 1;                      // table
    std::vector<IrreducibleCharacter> irreducibles_;  // table
};

inline GroupModel make_cyclic(unsigned n) { return GroupModel::cyclic(n); }

/// A class function: one cyclotomic value per element (abelian) or per
/// conjugacy class (table kind).
struct ClassFunction {
    GroupModel group;
    std::vector<Cyclotomic> values;

    ClassFunction(GroupModel g, std::vector<Cyclotomic> v) : group(std::move(g)), values(std::move(v)) {
        if (values.size() != group.class_count())
            throw input_error("class function: value count != class count");
    }

    const Cyclotomic& at(unsigned c) const { return values[c]; }

    friend bool operator==(const ClassFunction& a, const ClassFunction& b) {
        return a.group == b.group && a.values == b.values;
    }
};

/// The regular character: |G| at the identity, 0 elsewhere.
inline ClassFunction regular_character(const GroupModel& g) {
    std::vector<Cyclotomic> v(g.class_count());
    v[0] = Cyclotomic(Rational(g.order()));
    return {g, std::move(v)};
}

/// <chi, psi> = |G|^-1 sum_h chi(h) conj(psi(h)), class sizes weighted.
inline Cyclotomic inner_product(const ClassFunction& chi, const ClassFunction& psi) {
    if (chi.group != psi.group) throw input_error("inner_product: group mismatch");
    Cyclotomic sum;
    for (unsigned c = 0; c < chi.group.class_count(); ++c)
        sum += Rational(chi.group.class_size(c)) * (chi.at(c) * psi.at(c).conj());
    return sum / Rational(chi.group.order());
}

/// Multiplicities a_i = <chi, iota_i>; rejects inputs that are not
/// genuine characters (non-integer or negative multiplicity).
inline std::vector<long long> irreducible_decompose(const ClassFunction& chi) {
    const GroupModel& g = chi.group;
    std::vector<long long> mults(g.irreducible_count());
    for (unsigned i = 0; i < g.irreducible_count(); ++i) {
        std::vector<Cyclotomic> irr(g.class_count());
        for (unsigned c = 0; c < g.class_count(); ++c) irr[c] = g.irreducible_value(i, c);
        Cyclotomic a = inner_product(chi, ClassFunction(g, std::move(irr)));
        if (!a.is_rational())
            throw input_error("not-a-character: multiplicity " + std::to_string(i) + " is irrational");
        Rational r = a.as_rational();
        if (denominator(r) != 1 || r < 0)
            throw input_error("not-a-character: multiplicity " + std::to_string(i) + " = " +
                              rational_to_string(r));
        mults[i] = numerator(r).convert_to<long long>();
    }
    return mults;
}

/// Sum of a_i * iota_i; left inverse of irreducible_decompose.
inline ClassFunction assemble_character(const GroupModel& g, const std::vector<long long>& mults) {
    if (mults.size() != g.irreducible_count())
        throw input_error("assemble_character: multiplicity count != irreducible count");
    std::vector<Cyclotomic> v(g.class_count());
    for (unsigned i = 0; i < mults.size(); ++i) {
        if (mults[i] == 0) continue;
        for (unsigned c = 0; c < g.class_count(); ++c)
            v[c] += Rational(mults[i]) * g.irreducible_value(i, c);
    }
    return {g, std::move(v)};
}

}  // namespace rokhlin
