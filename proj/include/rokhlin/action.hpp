#pragma once

#include <Eigen/Dense>

#include <optional>
#include <variant>
#include <vector>

#include "rokhlin/group.hpp"

namespace rokhlin {

using ComplexMatrix = Eigen::MatrixXcd;

/// Unitary generator images, one per cyclic factor of an abelian group.
struct ExplicitMatrices {
    std::vector<ComplexMatrix> generators;
};

/// Abelian only: multiplicity per dual element, sum = dim.
struct MultVector {
    std::vector<long long> mults;
};

/// Character values, one per class; value at the identity = dim.
struct CharValues {
    std::vector<Cyclotomic> values;
};

struct LevelRep;

/// r copies of the regular representation plus an s-dimensional remainder.
struct ModelLevel {
    long long r = 0;
    long long s = 0;
    // remainder character values per class (identity value = s); empty
    // vector with s > 0 means the trivial representation of dim s.
    std::vector<Cyclotomic> remainder;
};

using LevelBody = std::variant<ExplicitMatrices, MultVector, CharValues, ModelLevel>;

struct LevelRep {
    GroupModel group;
    long long dim = 0;
    LevelBody body;
};

/// Polynomial with non-negative values on the level indices it is
/// evaluated at; rule for unbounded model-action tails.
struct IndexPolynomial {
    std::vector<long long> coeffs;  // low degree first

    long long eval(long long i) const {
        long long acc = 0;
        for (std::size_t k = coeffs.size(); k-- > 0;) acc = acc * i + coeffs[k];
        return acc;
    }
    bool is_zero() const {
        for (long long c : coeffs)
            if (c != 0) return false;
        return true;
    }
    int degree() const {
        for (std::size_t k = coeffs.size(); k-- > 0;)
            if (coeffs[k] != 0) return static_cast<int>(k);
        return -1;
    }
};

/// Unbounded model-action tail: level i (absolute, 1-based) is r(i)
/// copies of the regular representation plus a trivial remainder of
/// dimension s(i).
struct ModelTailRule {
    IndexPolynomial r;
    IndexPolynomial s;
};

struct Telescope {
    std::vector<long long> cuts;      // strictly increasing, first = 1
    long long tail_block = 0;         // block length after the last cut; 0 = no continuation

    void validate() const {
        if (cuts.empty() || cuts.front() != 1) throw input_error("telescope: first cut must be 1");
        for (std::size_t i = 1; i < cuts.size(); ++i)
            if (cuts[i] <= cuts[i - 1]) throw input_error("telescope: cuts must be strictly increasing");
        if (tail_block < 0) throw input_error("telescope: tail block must be non-negative");
    }
};

/// A product-type action: finite prefix of levels plus an optional
/// infinite tail (periodic repetition or a model rule).
struct ActionSpec {
    GroupModel group;
    std::vector<LevelRep> prefix;
    std::vector<LevelRep> periodic;           // empty = no periodic tail
    std::optional<ModelTailRule> model_tail;  // programmatic only

    bool has_tail() const { return !periodic.empty() || model_tail.has_value(); }

    /// Level by 1-based index, materializing the tail as needed.
    LevelRep level(long long i) const {
        if (i < 1) throw input_error("level index must be >= 1");
        if (i <= static_cast<long long>(prefix.size())) return prefix[i - 1];
        long long k = i - static_cast<long long>(prefix.size());
        if (!periodic.empty()) return periodic[(k - 1) % periodic.size()];
        if (model_tail) {
            long long r = model_tail->r.eval(i), s = model_tail->s.eval(i);
            if (r < 0 || s < 0 || (r == 0 && s == 0))
                throw input_error("model tail evaluates to an empty level at index " +
                                  std::to_string(i));
            ModelLevel ml{r, s, {}};
            return LevelRep{group, r * group.order() + s, LevelBody(ml)};
        }
        throw input_error("out-of-range: level " + std::to_string(i) +
                          " past prefix of a finite spec");
    }
};

inline void validate_level(const LevelRep& level);

/// The character of a level representation.
inline ClassFunction character_of(const LevelRep& level) {
    const GroupModel& g = level.group;
    std::vector<Cyclotomic> v(g.class_count());
    if (const auto* mv = std::get_if<MultVector>(&level.body)) {
        for (unsigned c = 0; c < g.class_count(); ++c)
            for (unsigned d = 0; d < g.order(); ++d)
                if (mv->mults[d] != 0) v[c] += Rational(mv->mults[d]) * g.bichar(d, c);
        return {g, std::move(v)};
    }
    if (const auto* cv = std::get_if<CharValues>(&level.body)) return {g, cv->values};
    if (const auto* ml = std::get_if<ModelLevel>(&level.body)) {
        v[0] = Cyclotomic(Rational(ml->r * g.order() + ml->s));
        for (unsigned c = 1; c < g.class_count(); ++c)
            v[c] = ml->remainder.empty() ? Cyclotomic(Rational(ml->s)) : ml->remainder[c];
        return {g, std::move(v)};
    }
    // ExplicitMatrices: recover dual multiplicities from numeric traces of
    // the spectral projections, then evaluate exactly.
    const auto& em = std::get<ExplicitMatrices>(level.body);
    const long long d = level.dim;
    std::vector<ComplexMatrix> pi(g.order());
    for (unsigned a = 0; a < g.order(); ++a) {
        ComplexMatrix m = ComplexMatrix::Identity(d, d);
        auto dig = g.digits(a);
        for (std::size_t f = 0; f < dig.size(); ++f)
            for (unsigned k = 0; k < dig[f]; ++k) m = em.generators[f] * m;
        pi[a] = std::move(m);
    }
    std::vector<long long> mults(g.order());
    long long total = 0;
    for (unsigned dual = 0; dual < g.order(); ++dual) {
        std::complex<double> tr(0.0, 0.0);
        for (unsigned h = 0; h < g.order(); ++h)
            tr += std::conj(g.bichar(h, dual).to_complex()) * pi[h].trace();
        tr /= static_cast<double>(g.order());
        double rounded = std::round(tr.real());
        if (std::abs(tr.real() - rounded) > 1e-9 || std::abs(tr.imag()) > 1e-9 || rounded < -1e-9)
            throw input_error("inexact-input: float traces are not recognizably cyclotomic");
        mults[dual] = static_cast<long long>(rounded);
        total += mults[dual];
    }
    if (total != d) throw input_error("inexact-input: recovered multiplicities do not sum to dim");
    return character_of(LevelRep{g, d, LevelBody(MultVector{std::move(mults)})});
}

inline void validate_level(const LevelRep& level) {
    const GroupModel& g = level.group;
    if (level.dim <= 0) throw input_error("level dim must be positive");
    if (const auto* mv = std::get_if<MultVector>(&level.body)) {
        if (!g.is_abelian()) throw input_error("mults body requires an abelian group");
        if (mv->mults.size() != g.order()) throw input_error("mults length != group order");
        long long sum = 0;
        for (long long m : mv->mults) {
            if (m < 0) throw input_error("invariant-violation: negative multiplicity");
            sum += m;
        }
        if (sum != level.dim) throw input_error("invariant-violation: sum of mults != dim");
    } else if (const auto* cv = std::get_if<CharValues>(&level.body)) {
        if (cv->values.size() != g.class_count())
            throw input_error("char values length != class count");
        if (cv->values[0] != Cyclotomic(Rational(level.dim)))
            throw input_error("invariant-violation: char value at identity != dim");
        for (unsigned c = 1; c < g.class_count(); ++c) {
            auto bound = Cyclotomic(Rational(level.dim * level.dim)) - cv->values[c].norm_squared();
            if (std::abs(bound.to_complex().imag()) > 1e-9 || bound.to_complex().real() < -1e-9)
                throw input_error("invariant-violation: |char value| > dim at class " +
                                  std::to_string(c));
        }
    } else if (const auto* ml = std::get_if<ModelLevel>(&level.body)) {
        if (ml->r < 0 || ml->s < 0 || (ml->r == 0 && ml->s == 0))
            throw input_error("model level: need r >= 0, s >= 0, not both zero");
        if (level.dim != ml->r * static_cast<long long>(g.order()) + ml->s)
            throw input_error("invariant-violation: model level dim != r|G| + s");
        if (!ml->remainder.empty()) {
            if (ml->remainder.size() != g.class_count())
                throw input_error("model level: remainder value count != class count");
            if (ml->remainder[0] != Cyclotomic(Rational(ml->s)))
                throw input_error("model level: remainder value at identity != s");
        }
    } else {
        const auto& em = std::get<ExplicitMatrices>(level.body);
        if (!g.is_abelian()) throw input_error("matrices body requires an abelian group");
        if (em.generators.size() != g.cyclic_orders().size())
            throw input_error("matrices body: one generator image per cyclic factor required");
        for (std::size_t f = 0; f < em.generators.size(); ++f) {
            const ComplexMatrix& u = em.generators[f];
            if (u.rows() != level.dim || u.cols() != level.dim)
                throw input_error("generator matrix dimension mismatch");
            if ((u * u.adjoint() - ComplexMatrix::Identity(u.rows(), u.rows())).norm() > 1e-9)
                throw input_error("generator matrix is not unitary (tolerance 1e-9)");
            ComplexMatrix pw = ComplexMatrix::Identity(u.rows(), u.rows());
            for (unsigned k = 0; k < g.cyclic_orders()[f]; ++k) pw = u * pw;
            if ((pw - ComplexMatrix::Identity(u.rows(), u.rows())).norm() > 1e-9)
                throw input_error("generator matrix order does not divide its cyclic factor");
        }
        for (std::size_t a = 0; a < em.generators.size(); ++a)
            for (std::size_t b = a + 1; b < em.generators.size(); ++b)
                if ((em.generators[a] * em.generators[b] - em.generators[b] * em.generators[a]).norm() >
                    1e-9)
                    throw input_error("generator matrices do not commute");
    }
}

inline void validate_spec(const ActionSpec& spec) {
    for (const auto& l : spec.prefix) {
        if (l.group != spec.group) throw input_error("all levels must share the spec group");
        validate_level(l);
    }
    for (const auto& l : spec.periodic) {
        if (l.group != spec.group) throw input_error("all levels must share the spec group");
        validate_level(l);
    }
    if (!spec.periodic.empty() && spec.model_tail)
        throw input_error("spec cannot have both a periodic and a model tail");
}

/// Character and dimension of the tensor block [n, m].
struct BlockCharacter {
    ClassFunction chi;
    Rational dim;  // integer-valued; Rational to avoid overflow in long blocks
};

inline BlockCharacter block_character(const ActionSpec& spec, long long n, long long m) {
    if (n < 1 || m < n) throw input_error("block_character: need 1 <= n <= m");
    std::vector<Cyclotomic> v(spec.group.class_count(), Cyclotomic::one());
    Rational dim = 1;
    for (long long i = n; i <= m; ++i) {
        LevelRep l = spec.level(i);
        ClassFunction chi = character_of(l);
        for (unsigned c = 0; c < v.size(); ++c) v[c] *= chi.at(c);
        dim *= l.dim;
    }
    return {ClassFunction(spec.group, std::move(v)), dim};
}

/// Builds a model action alpha(r, s, pi). Level i has r[i] regular
/// copies and remainder character `remainder` (empty = trivial) of
/// dimension s[i].
inline ActionSpec model_action(const GroupModel& g, const std::vector<long long>& r,
                               const std::vector<long long>& s,
                               const std::vector<Cyclotomic>& remainder = {}) {
    if (r.size() != s.size() || r.empty())
        throw input_error("model_action: r and s must be non-empty and equal length");
    ActionSpec spec;
    spec.group = g;
    for (std::size_t i = 0; i < r.size(); ++i) {
        if (r[i] < 0 || s[i] < 0 || (r[i] == 0 && s[i] == 0))
            throw input_error("model_action: empty level at index " + std::to_string(i + 1));
        ModelLevel ml{r[i], s[i], s[i] > 0 ? remainder : std::vector<Cyclotomic>{}};
        spec.prefix.push_back(LevelRep{g, r[i] * g.order() + s[i], LevelBody(ml)});
    }
    validate_spec(spec);
    return spec;
}

/// Model action with polynomial index rules and trivial remainder; the
/// tail makes the classification of unbounded sequences decidable.
inline ActionSpec model_action(const GroupModel& g, IndexPolynomial r, IndexPolynomial s) {
    ActionSpec spec;
    spec.group = g;
    // Constant rules are an honest periodic tail of period 1.
    if (r.degree() <= 0 && s.degree() <= 0) {
        long long rc = r.eval(1), sc = s.eval(1);
        if (rc < 0 || sc < 0 || (rc == 0 && sc == 0)) throw input_error("model_action: empty level");
        ModelLevel ml{rc, sc, {}};
        spec.periodic.push_back(LevelRep{g, rc * g.order() + sc, LevelBody(ml)});
    } else {
        spec.model_tail = ModelTailRule{std::move(r), std::move(s)};
        spec.level(1);  // force an early validity check
    }
    return spec;
}

/// Merges levels into the tensor blocks named by the telescope. Block i
/// spans [cut_i, cut_{i+1}-1]; after the last cut, blocks of length
/// tail_block continue (periodic specs only), which keeps the result
/// eventually periodic.
inline ActionSpec apply_telescope(const ActionSpec& spec, const Telescope& t) {
    t.validate();
    auto merge = [&spec](long long a, long long b) {
        BlockCharacter bc = block_character(spec, a, b);
        if (denominator(bc.dim) != 1) throw inconsistency_error("block dimension not integral");
        long long d = numerator(bc.dim).convert_to<long long>();
        // Preserve mults form when every merged level has it, by convolution.
        bool all_mults = true;
        for (long long i = a; i <= b && all_mults; ++i)
            all_mults = std::holds_alternative<MultVector>(spec.level(i).body);
        if (all_mults) {
            const GroupModel& g = spec.group;
            std::vector<long long> acc(g.order(), 0);
            acc[g.identity()] = 1;
            for (long long i = a; i <= b; ++i) {
                LevelRep li = spec.level(i);
                const auto& mv = std::get<MultVector>(li.body);
                std::vector<long long> next(g.order(), 0);
                for (unsigned x = 0; x < g.order(); ++x)
                    for (unsigned y = 0; y < g.order(); ++y)
                        next[g.mul(x, y)] += acc[x] * mv.mults[y];
                acc = std::move(next);
            }
            return LevelRep{spec.group, d, LevelBody(MultVector{std::move(acc)})};
        }
        return LevelRep{spec.group, d, LevelBody(CharValues{bc.chi.values})};
    };

    ActionSpec out;
    out.group = spec.group;
    if (spec.model_tail)
        throw input_error("apply_telescope: model-rule tails are not telescopable");
    long long prefix_end = static_cast<long long>(spec.prefix.size());
    for (std::size_t i = 0; i + 1 < t.cuts.size(); ++i)
        out.prefix.push_back(merge(t.cuts[i], t.cuts[i + 1] - 1));
    long long pos = t.cuts.back();
    if (spec.periodic.empty()) {
        if (t.tail_block != 0) throw input_error("apply_telescope: finite spec has no tail to block");
        if (pos <= prefix_end) out.prefix.push_back(merge(pos, prefix_end));
        else if (pos != prefix_end + 1)
            throw input_error("apply_telescope: cuts past the available levels");
        return out;
    }
    long long block = t.tail_block;
    if (block == 0) block = static_cast<long long>(spec.periodic.size());
    // Advance into the periodic region, then emit one full cycle of merged
    // blocks: lcm(block, period)/block blocks form the new period.
    while (pos <= prefix_end) {
        out.prefix.push_back(merge(pos, pos + block - 1));
        pos += block;
    }
    long long period = static_cast<long long>(spec.periodic.size());
    long long cycle = std::lcm(block, period) / block;
    for (long long j = 0; j < cycle; ++j)
        out.periodic.push_back(merge(pos + j * block, pos + (j + 1) * block - 1));
    // Align: levels between the last explicit cut and the cycle start.
    return out;
}

/// The cyclic subgroup of an abelian group generated by `gen`, presented
/// as a cyclic GroupModel plus the embedding h -> gen^h.
struct CyclicSubgroup {
    GroupModel subgroup;
    std::vector<unsigned> embedding;     // subgroup element -> ambient element
    std::vector<unsigned> dual_restrict;  // ambient dual element -> subgroup dual element
};

inline CyclicSubgroup cyclic_subgroup(const GroupModel& g, unsigned gen) {
    if (!g.is_abelian()) throw input_error("cyclic_subgroup requires an abelian group");
    unsigned q = g.element_order(gen);
    CyclicSubgroup sub{GroupModel::cyclic(q), {}, {}};
    sub.embedding.resize(q);
    unsigned x = g.identity();
    for (unsigned j = 0; j < q; ++j) {
        sub.embedding[j] = x;
        x = g.mul(x, gen);
    }
    // zeta_G^d restricted to the subgroup is some dual character of H.
    sub.dual_restrict.resize(g.order());
    for (unsigned d = 0; d < g.order(); ++d) {
        bool found = false;
        for (unsigned e = 0; e < q && !found; ++e) {
            bool match = true;
            for (unsigned j = 0; j < q && match; ++j)
                match = g.bichar(d, sub.embedding[j]) == sub.subgroup.bichar(e, j);
            if (match) {
                sub.dual_restrict[d] = e;
                found = true;
            }
        }
        if (!found) throw inconsistency_error("dual restriction not found");
    }
    return sub;
}

inline LevelRep restrict_level(const LevelRep& level, const CyclicSubgroup& sub) {
    const GroupModel& h = sub.subgroup;
    if (const auto* mv = std::get_if<MultVector>(&level.body)) {
        std::vector<long long> m(h.order(), 0);
        for (unsigned d = 0; d < level.group.order(); ++d) m[sub.dual_restrict[d]] += mv->mults[d];
        return LevelRep{h, level.dim, LevelBody(MultVector{std::move(m)})};
    }
    if (const auto* ml = std::get_if<ModelLevel>(&level.body)) {
        long long copies = level.group.order() / h.order();
        std::vector<Cyclotomic> rem;
        if (!ml->remainder.empty()) {
            rem.resize(h.order());
            for (unsigned j = 0; j < h.order(); ++j) rem[j] = ml->remainder[sub.embedding[j]];
        }
        ModelLevel out{ml->r * copies, ml->s, std::move(rem)};
        return LevelRep{h, level.dim, LevelBody(out)};
    }
    if (const auto* em = std::get_if<ExplicitMatrices>(&level.body)) {
        // Generator image of the subgroup generator = pi(gen).
        ComplexMatrix u = ComplexMatrix::Identity(level.dim, level.dim);
        auto dig = level.group.digits(sub.embedding.size() > 1 ? sub.embedding[1] : level.group.identity());
        for (std::size_t f = 0; f < dig.size(); ++f)
            for (unsigned k = 0; k < dig[f]; ++k) u = em->generators[f] * u;
        return LevelRep{h, level.dim, LevelBody(ExplicitMatrices{{u}})};
    }
    ClassFunction chi = character_of(level);
    std::vector<Cyclotomic> v(h.order());
    for (unsigned j = 0; j < h.order(); ++j) v[j] = chi.at(sub.embedding[j]);
    return LevelRep{h, level.dim, LevelBody(CharValues{std::move(v)})};
}

/// Restricts every level character along chi_H = chi|_H.
inline ActionSpec restrict_to_subgroup(const ActionSpec& spec, unsigned gen) {
    CyclicSubgroup sub = cyclic_subgroup(spec.group, gen);
    ActionSpec out;
    out.group = sub.subgroup;
    for (const auto& l : spec.prefix) out.prefix.push_back(restrict_level(l, sub));
    for (const auto& l : spec.periodic) out.periodic.push_back(restrict_level(l, sub));
    if (spec.model_tail) out.model_tail = spec.model_tail;  // trivial remainder restricts as-is
    return out;
}

/// Restriction of a cyclic spec to the subgroup of order `divisor`.
inline ActionSpec restrict_to_divisor(const ActionSpec& spec, unsigned divisor) {
    if (spec.group.kind() != GroupKind::Cyclic)
        throw input_error("divisor restriction needs a cyclic group");
    unsigned n = spec.group.order();
    if (divisor == 0 || n % divisor != 0)
        throw input_error("non-subgroup descriptor: " + std::to_string(divisor) +
                          " does not divide " + std::to_string(n));
    return restrict_to_subgroup(spec, n / divisor == n ? 0u : n / divisor);
}

}  // namespace rokhlin
