#pragma once

#include <algorithm>
#include <optional>

#include "rokhlin/spectral.hpp"

namespace rokhlin {

enum class Outcome { Strict, TracialOnly, Neither, Inconclusive };

inline const char* outcome_name(Outcome o) {
    switch (o) {
        case Outcome::Strict: return "Strict";
        case Outcome::TracialOnly: return "TracialOnly";
        case Outcome::Neither: return "Neither";
        case Outcome::Inconclusive: return "Inconclusive";
    }
    return "?";
}

/// Exact per-class zero / modulus-below-one positions of nu_i = chi_i/d_i
/// over the prefix and one tail period.
struct ZeroPattern {
    long long prefix_len = 0;
    long long period_len = 0;  // 0 when the spec has no periodic tail
    // per nontrivial class (index 1..class_count-1, stored from 0):
    std::vector<std::vector<long long>> zero_positions;
    std::vector<std::vector<long long>> submodulus_positions;  // |nu| < 1, includes zeros

    bool class_has_zero_in_period(unsigned c) const {
        for (long long p : zero_positions[c])
            if (p > prefix_len) return true;
        return false;
    }
    bool class_decays_in_period(unsigned c) const {
        for (long long p : submodulus_positions[c])
            if (p > prefix_len) return true;
        return false;
    }
};

/// nu values of one level, indexed by class.
inline std::vector<Cyclotomic> normalized_character(const LevelRep& level) {
    ClassFunction chi = character_of(level);
    std::vector<Cyclotomic> nu(chi.values.size());
    for (unsigned c = 0; c < nu.size(); ++c) nu[c] = chi.at(c) / Rational(level.dim);
    return nu;
}

inline ZeroPattern zero_pattern(const ActionSpec& spec) {
    if (spec.model_tail) throw input_error("zero_pattern: model-rule tails have no finite pattern");
    ZeroPattern zp;
    zp.prefix_len = static_cast<long long>(spec.prefix.size());
    zp.period_len = static_cast<long long>(spec.periodic.size());
    unsigned nclasses = spec.group.class_count();
    zp.zero_positions.resize(nclasses - 1);
    zp.submodulus_positions.resize(nclasses - 1);
    for (long long i = 1; i <= zp.prefix_len + zp.period_len; ++i) {
        auto nu = normalized_character(spec.level(i));
        for (unsigned c = 1; c < nclasses; ++c) {
            if (nu[c].is_zero()) zp.zero_positions[c - 1].push_back(i);
            if (!nu[c].is_unit_modulus()) zp.submodulus_positions[c - 1].push_back(i);
        }
    }
    return zp;
}

struct ClassAnalysis {
    unsigned cls = 0;                 // class index (nontrivial classes only)
    bool vanishes_infinitely = false; // some zero inside the tail period
    bool decays = false;              // tail magnitude products have inf 0
    Cyclotomic period_product;        // product of nu over one period (periodic tails)
};

struct Verdict {
    Outcome outcome = Outcome::Inconclusive;
    std::vector<ClassAnalysis> classes;
    std::optional<Telescope> telescope;       // Strict witness
    std::optional<unsigned> obstructing_class;  // Neither witness
    long long horizon = 0;
};

/// True iff chi_b vanishes off the identity; then |G| divides d_b and the
/// block is d_b/|G| copies of the regular representation.
struct RegularMultiple {
    bool is_multiple = false;
    Rational copies;
};

inline RegularMultiple regular_multiple_check(const ClassFunction& chi_b, const Rational& d_b) {
    for (unsigned c = 1; c < chi_b.group.class_count(); ++c)
        if (!chi_b.at(c).is_zero()) return {false, Rational(0)};
    Rational copies = d_b / Rational(chi_b.group.order());
    if (denominator(copies) != 1)
        throw inconsistency_error(
            "internal-inconsistency: character vanishes off identity but |G| does not divide dim");
    return {true, copies};
}

/// Greedy minimal telescope whose blocks are all regular multiples.
/// Returns the failure position instead when no block starting at some
/// cut can be completed within the horizon.
struct TelescopeResult {
    std::optional<Telescope> telescope;
    long long failure_position = 0;
};

inline TelescopeResult greedy_telescope(const ActionSpec& spec, long long horizon) {
    unsigned nclasses = spec.group.class_count();
    Telescope t;
    long long cut = 1;
    long long period = static_cast<long long>(spec.periodic.size());
    long long prefix = static_cast<long long>(spec.prefix.size());
    if (!spec.has_tail()) horizon = std::min(horizon, prefix);
    std::map<long long, long long> cut_at_phase;  // phase in the tail period -> cut
    while (cut <= horizon) {
        if (period > 0 && cut > prefix) {
            long long phase = (cut - prefix - 1) % period;
            auto it = cut_at_phase.find(phase);
            if (it != cut_at_phase.end()) {
                // A cut recurred at the same tail phase: the block pattern
                // between the two occurrences repeats forever.
                t.cuts.push_back(cut);
                t.tail_block = cut - it->second;
                return {t, 0};
            }
            cut_at_phase.emplace(phase, cut);
        }
        t.cuts.push_back(cut);
        std::vector<bool> covered(nclasses, false);
        covered[0] = true;
        long long m = cut;
        bool done = false;
        for (; m <= horizon; ++m) {
            auto nu = normalized_character(spec.level(m));
            for (unsigned c = 1; c < nclasses; ++c)
                if (nu[c].is_zero()) covered[c] = true;
            if (std::all_of(covered.begin(), covered.end(), [](bool b) { return b; })) {
                done = true;
                break;
            }
        }
        if (!done) {
            t.cuts.pop_back();
            // Finite spec: the uncoverable trailing levels fold into the
            // previous block, which already covers every class.
            if (!spec.has_tail() && !t.cuts.empty()) return {t, 0};
            return {std::nullopt, cut};
        }
        cut = m + 1;
    }
    // A finite spec whose last block closed exactly at the end telescopes
    // completely, with no tail continuation.
    if (!spec.has_tail() && cut == horizon + 1 && !t.cuts.empty()) return {t, 0};
    return {std::nullopt, horizon};
}

namespace detail {

enum class TriState { Yes, No, Unknown };

inline TriState strict_decision(const ActionSpec& spec, std::vector<ClassAnalysis>& out) {
    const unsigned nclasses = spec.group.class_count();
    if (spec.model_tail) {
        // Trivial-remainder rule: nu_i(c) = s_i/d_i off the identity, zero
        // iff s_i = 0; polynomial s vanishes infinitely often iff s = 0.
        bool all_regular = spec.model_tail->s.is_zero();
        for (unsigned c = 1; c < nclasses; ++c) {
            ClassAnalysis ca;
            ca.cls = c;
            ca.vanishes_infinitely = all_regular;
            out.push_back(ca);
        }
        return all_regular ? TriState::Yes : TriState::No;
    }
    if (spec.periodic.empty()) return TriState::Unknown;
    ZeroPattern zp = zero_pattern(spec);
    bool all = true;
    for (unsigned c = 1; c < nclasses; ++c) {
        ClassAnalysis ca;
        ca.cls = c;
        ca.vanishes_infinitely = zp.class_has_zero_in_period(c - 1);
        all = all && ca.vanishes_infinitely;
        out.push_back(ca);
    }
    return all ? TriState::Yes : TriState::No;
}

inline TriState tracial_decision(const ActionSpec& spec, std::vector<ClassAnalysis>& out,
                                 std::optional<unsigned>& obstruction) {
    const unsigned nclasses = spec.group.class_count();
    if (spec.model_tail) {
        const auto& rule = *spec.model_tail;
        bool tracial;
        if (rule.s.is_zero()) {
            tracial = true;
        } else if (rule.r.is_zero()) {
            tracial = false;  // trivial remainder only: nu = 1 at every level
        } else {
            // nu_i(c) = s_i/(r_i|G| + s_i); the tail product vanishes iff
            // sum r_i/s_i diverges, i.e. deg s <= deg r + 1.
            tracial = rule.s.degree() <= rule.r.degree() + 1;
        }
        for (unsigned c = 1; c < nclasses; ++c) {
            ClassAnalysis ca;
            ca.cls = c;
            ca.decays = tracial;
            out.push_back(ca);
        }
        if (!tracial) obstruction = 1;
        return tracial ? TriState::Yes : TriState::No;
    }
    if (spec.periodic.empty()) return TriState::Unknown;
    ZeroPattern zp = zero_pattern(spec);
    bool all = true;
    for (unsigned c = 1; c < nclasses; ++c) {
        ClassAnalysis ca;
        ca.cls = c;
        ca.decays = zp.class_decays_in_period(c - 1);
        Cyclotomic prod = Cyclotomic::one();
        for (long long i = zp.prefix_len + 1; i <= zp.prefix_len + zp.period_len; ++i)
            prod *= normalized_character(spec.level(i))[c];
        ca.period_product = prod;
        if (!ca.decays && !obstruction) obstruction = c;
        all = all && ca.decays;
        out.push_back(ca);
    }
    return all ? TriState::Yes : TriState::No;
}

}  // namespace detail

inline long long default_horizon(const ActionSpec& spec) {
    return static_cast<long long>(spec.prefix.size()) +
           8 * std::max<long long>(1, static_cast<long long>(spec.periodic.size()));
}

/// Theorem criterion (i): strict iff every nontrivial class vanishes at
/// infinitely many levels; exact for periodic and model-rule tails.
inline Verdict classify_strict(const ActionSpec& spec, long long horizon = 0) {
    if (horizon <= 0) horizon = default_horizon(spec);
    Verdict v;
    v.horizon = horizon;
    auto d = detail::strict_decision(spec, v.classes);
    if (d == detail::TriState::Unknown) {
        v.outcome = Outcome::Inconclusive;
        return v;
    }
    if (d == detail::TriState::Yes) {
        auto tr = greedy_telescope(spec, horizon);
        if (!tr.telescope && !spec.model_tail)
            throw inconsistency_error("greedy telescope failed although all classes have zeros");
        v.outcome = Outcome::Strict;
        v.telescope = tr.telescope;
    } else {
        v.outcome = Outcome::Neither;  // "not strict"; combine() refines this
    }
    return v;
}

/// Theorem criterion (ii): tracial iff every tail-start magnitude product
/// has infimum 0; for periodic tails this is a per-period exact
/// unit-modulus test.
inline Verdict classify_tracial(const ActionSpec& spec, long long horizon = 0) {
    if (horizon <= 0) horizon = default_horizon(spec);
    Verdict v;
    v.horizon = horizon;
    auto d = detail::tracial_decision(spec, v.classes, v.obstructing_class);
    v.outcome = d == detail::TriState::Yes    ? Outcome::TracialOnly
                : d == detail::TriState::No   ? Outcome::Neither
                                              : Outcome::Inconclusive;
    return v;
}

/// Full classification: Strict > TracialOnly > Neither, Inconclusive when
/// the spec has no tail to decide from.
inline Verdict classify(const ActionSpec& spec, long long horizon = 0) {
    if (horizon <= 0) horizon = default_horizon(spec);
    Verdict strict = classify_strict(spec, horizon);
    if (strict.outcome == Outcome::Strict) return strict;
    Verdict tracial = classify_tracial(spec, horizon);
    tracial.horizon = horizon;
    return tracial;
}

/// The near-regular split of a block character: d copies of the regular
/// representation plus a remainder of relative dimension d''/d_block.
struct NearRegularSplit {
    long long regular_copies = 0;        // d
    std::vector<long long> block_mults;  // a_i
    std::vector<long long> remainder_mults;
    Rational remainder_dim;              // d''
    Rational relative_defect;            // d''/d_block
    bool within_epsilon = false;
};

inline NearRegularSplit near_regular_decompose(const ClassFunction& chi, const Rational& d_block,
                                               const Rational& epsilon) {
    const GroupModel& g = chi.group;
    NearRegularSplit split;
    split.block_mults = irreducible_decompose(chi);
    long long d = -1;
    for (unsigned i = 0; i < split.block_mults.size(); ++i) {
        long long q = split.block_mults[i] / g.irreducible_dim(i);
        if (d < 0 || q < d) d = q;
    }
    split.regular_copies = d;
    split.remainder_mults.resize(split.block_mults.size());
    for (unsigned i = 0; i < split.block_mults.size(); ++i) {
        split.remainder_mults[i] = split.block_mults[i] - d * g.irreducible_dim(i);
        if (split.remainder_mults[i] < 0)
            throw inconsistency_error("near-regular remainder is not a character");
    }
    split.remainder_dim = d_block - Rational(d) * Rational(g.order());
    split.relative_defect = split.remainder_dim / d_block;
    split.within_epsilon = split.relative_defect < epsilon;
    return split;
}

/// Smallest m with simplex_gap(block_transfer(n, m)) < epsilon.
struct Rank1Certificate {
    long long m = 0;
    TransferMatrix transfer;
    Rational gap;
};

inline Rank1Certificate rank1_certificate(const ActionSpec& spec, long long n,
                                          const Rational& epsilon, long long horizon = 0) {
    if (horizon <= 0) horizon = std::max<long long>(default_horizon(spec), n + 64);
    TransferMatrix acc = transfer_matrix(spec.level(n));
    for (long long m = n; m <= horizon; ++m) {
        if (m > n) acc = acc * transfer_matrix(spec.level(m));
        Rational gap = simplex_gap(acc);
        if (gap < epsilon) return {m, acc, gap};
    }
    throw input_error("rank1_certificate: horizon exhausted, last gap " +
                      rational_to_string(simplex_gap(acc)));
}

/// Classifies every restriction to a cyclic subgroup and checks that the
/// full verdict implies the same-or-stronger verdict downstairs.
struct SubgroupReport {
    struct Entry {
        unsigned generator;
        unsigned subgroup_order;
        Outcome outcome;
    };
    Outcome full;
    std::vector<Entry> entries;
};

inline SubgroupReport subgroup_consistency(const ActionSpec& spec, long long horizon = 0) {
    if (!spec.group.is_abelian()) throw input_error("subgroup_consistency: abelian groups only");
    SubgroupReport rep;
    rep.full = classify(spec, horizon).outcome;
    std::vector<std::vector<unsigned>> seen;  // element sets of subgroups already reported
    for (unsigned gen = 0; gen < spec.group.order(); ++gen) {
        CyclicSubgroup sub = cyclic_subgroup(spec.group, gen);
        std::vector<unsigned> members = sub.embedding;
        std::sort(members.begin(), members.end());
        if (std::find(seen.begin(), seen.end(), members) != seen.end()) continue;
        seen.push_back(members);
        Outcome o = classify(restrict_to_subgroup(spec, gen), horizon).outcome;
        rep.entries.push_back({gen, sub.subgroup.order(), o});
        bool full_tracial = rep.full == Outcome::Strict || rep.full == Outcome::TracialOnly;
        bool sub_tracial = o == Outcome::Strict || o == Outcome::TracialOnly;
        if (rep.full == Outcome::Strict && o != Outcome::Strict)
            throw inconsistency_error("internal-inconsistency: strict action, non-strict restriction");
        if (full_tracial && !sub_tracial)
            throw inconsistency_error(
                "internal-inconsistency: tracial action, non-tracial restriction");
    }
    return rep;
}

}  // namespace rokhlin
