#pragma once

#include "rokhlin/classifier.hpp"

namespace rokhlin {

enum class SynthMode { Strict, Tracial };

/// Matrix units W^{g,h} between the ranges of the spectral projections;
/// W^{g,h} W^{k,l} = delta(h,k) W^{g,l} and (W^{g,h})* = W^{h,g}.
struct PartialIsometrySystem {
    GroupModel group;
    long long dim = 0;
    SynthMode mode = SynthMode::Strict;
    long long rank = 0;  // common rank (strict) or min rank (tracial)
    std::vector<std::vector<ComplexMatrix>> w;  // w[g][h]

    const ComplexMatrix& at(unsigned g, unsigned h) const { return w[g][h]; }
};

namespace detail {

/// Deterministic orthonormal basis of the range of a projection:
/// Gram-Schmidt over its columns in standard order.
inline std::vector<Eigen::VectorXcd> range_basis(const ComplexMatrix& p, long long rank) {
    std::vector<Eigen::VectorXcd> basis;
    for (Eigen::Index c = 0; c < p.cols() && static_cast<long long>(basis.size()) < rank; ++c) {
        Eigen::VectorXcd v = p.col(c);
        for (const auto& b : basis) v -= b.dot(v) * b;
        double n = v.norm();
        if (n > 1e-8) basis.push_back(v / n);
    }
    if (static_cast<long long>(basis.size()) != rank)
        throw inconsistency_error("projection range basis extraction found wrong rank");
    return basis;
}

}  // namespace detail

/// Builds the partial isometries from orthonormal bases of each
/// projection range; W^{1,g} maps the g-basis to the 1-basis.
inline PartialIsometrySystem build_partial_isometries(const SpectralFamily& fam, SynthMode mode) {
    const GroupModel& g = fam.group;
    std::vector<long long> ranks(g.order());
    long long min_rank = -1;
    for (unsigned a = 0; a < g.order(); ++a) {
        double tr = fam.projections[a].trace().real();
        ranks[a] = static_cast<long long>(std::llround(tr));
        if (std::abs(tr - static_cast<double>(ranks[a])) > 1e-8)
            throw input_error("projection trace is not near an integer rank");
        if (min_rank < 0 || ranks[a] < min_rank) min_rank = ranks[a];
    }
    if (mode == SynthMode::Strict) {
        for (unsigned a = 0; a < g.order(); ++a)
            if (ranks[a] != min_rank)
                throw input_error("rank-mismatch: strict mode needs equal ranks, dual element " +
                                  std::to_string(a) + " has rank " + std::to_string(ranks[a]));
    }
    if (min_rank == 0) throw input_error("empty-block: some spectral projection has rank 0");

    std::vector<std::vector<Eigen::VectorXcd>> bases(g.order());
    for (unsigned a = 0; a < g.order(); ++a)
        bases[a] = detail::range_basis(fam.projections[a], min_rank);

    PartialIsometrySystem sys{g, fam.dim, mode, min_rank, {}};
    std::vector<ComplexMatrix> w1(g.order());  // W^{1,g}
    for (unsigned a = 0; a < g.order(); ++a) {
        ComplexMatrix w = ComplexMatrix::Zero(fam.dim, fam.dim);
        for (long long k = 0; k < min_rank; ++k)
            w += bases[g.identity()][k] * bases[a][k].adjoint();
        w1[a] = std::move(w);
    }
    sys.w.assign(g.order(), std::vector<ComplexMatrix>(g.order()));
    for (unsigned a = 0; a < g.order(); ++a)
        for (unsigned b = 0; b < g.order(); ++b) sys.w[a][b] = w1[a].adjoint() * w1[b];
    return sys;
}

/// Rokhlin projection family Q^k (or e_g) with its exact trace defect.
struct RokhlinFamily {
    GroupModel group;
    long long dim = 0;
    SynthMode mode = SynthMode::Strict;
    std::vector<ComplexMatrix> q;  // indexed by k in G
    Rational trace_defect;         // tau(1 - Q), exact
};

/// Q^k = |G|^-1 sum_{g,h} zeta^k(g^-1 h) W^{g,h}. The 1/|G| prefactor is
/// required for Q^2 = Q in both modes.
inline RokhlinFamily build_rokhlin_family(const PartialIsometrySystem& sys,
                                          const TraceVector& exact_traces) {
    const GroupModel& g = sys.group;
    RokhlinFamily fam{g, sys.dim, sys.mode, {}, Rational(0)};
    fam.q.resize(g.order());
    for (unsigned k = 0; k < g.order(); ++k) {
        ComplexMatrix q = ComplexMatrix::Zero(sys.dim, sys.dim);
        for (unsigned a = 0; a < g.order(); ++a)
            for (unsigned b = 0; b < g.order(); ++b)
                q += std::conj(g.bichar(k, g.mul(g.inv(a), b)).to_complex()) * sys.at(a, b);
        fam.q[k] = q / static_cast<double>(g.order());
    }
    Rational min_trace = exact_traces.t[0];
    for (const auto& t : exact_traces.t) min_trace = std::min(min_trace, t);
    fam.trace_defect = Rational(1) - Rational(g.order()) * min_trace;
    return fam;
}

inline RokhlinFamily build_rokhlin_family(const SpectralFamily& fam, const TraceVector& traces,
                                          SynthMode mode) {
    return build_rokhlin_family(build_partial_isometries(fam, mode), traces);
}

/// The model-action family on a trivial-or-any-remainder model level:
/// e_g projects onto the delta_g vector in each regular summand.
inline RokhlinFamily model_action_family(const GroupModel& g, long long r, long long s) {
    if (r < 1) throw input_error("no-regular-summand: model family needs r >= 1");
    long long d = r * g.order() + s;
    RokhlinFamily fam{g, d, s == 0 ? SynthMode::Strict : SynthMode::Tracial, {}, Rational(0)};
    fam.q.resize(g.order());
    for (unsigned a = 0; a < g.order(); ++a) {
        ComplexMatrix e = ComplexMatrix::Zero(d, d);
        for (long long copy = 0; copy < r; ++copy) {
            long long idx = copy * g.order() + a;
            e(idx, idx) = 1.0;
        }
        fam.q[a] = std::move(e);
    }
    fam.trace_defect = Rational(s, d);
    return fam;
}

/// Left-regular permutation unitaries of the model level (identity on
/// the remainder block), for verifying the model family.
inline std::vector<ComplexMatrix> model_action_unitaries(const GroupModel& g, long long r,
                                                         long long s) {
    long long d = r * g.order() + s;
    std::vector<ComplexMatrix> pi(g.order());
    for (unsigned a = 0; a < g.order(); ++a) {
        ComplexMatrix u = ComplexMatrix::Zero(d, d);
        for (long long copy = 0; copy < r; ++copy)
            for (unsigned h = 0; h < g.order(); ++h)
                u(copy * g.order() + g.mul(a, h), copy * g.order() + h) = 1.0;
        for (long long k = r * g.order(); k < d; ++k) u(k, k) = 1.0;
        pi[a] = std::move(u);
    }
    return pi;
}

/// Murray-von Neumann comparison of projections in a matrix algebra:
/// rank comparison, rank = rounded trace.
enum class MvnOrder { SubEquivalent, Dominates, Equivalent };

inline MvnOrder mvn_compare(const ComplexMatrix& p, const ComplexMatrix& q) {
    auto check = [](const ComplexMatrix& m) {
        if ((m * m - m).norm() > 1e-10 || (m - m.adjoint()).norm() > 1e-10)
            throw input_error("mvn_compare: input is not a projection (tolerance 1e-10)");
    };
    check(p);
    check(q);
    long long rp = std::llround(p.trace().real());
    long long rq = std::llround(q.trace().real());
    if (rp == rq) return MvnOrder::Equivalent;
    return rp < rq ? MvnOrder::SubEquivalent : MvnOrder::Dominates;
}

/// Per-condition defects of a candidate family against the strict or
/// tracial Rokhlin conditions.
struct VerificationReport {
    double projection_defect = 0;     // max over k of ||Q^2-Q||, ||Q-Q*||
    double orthogonality_defect = 0;  // max over k != j of ||Q^k Q^j||
    double sum_defect = 0;            // strict: ||sum Q - 1||
    double equivariance_defect = 0;   // max ||pi(g) Q^h pi(g)* - Q^{gh}||
    double commutator_defect = 0;     // max over F of ||[Q^k, a]||
    double trace_defect = 0;          // tau(1 - Q), float
    bool comparison_ok = true;        // rank(1-Q) <= rank(target)
    double norm_value = 1.0;          // ||ebe|| when b supplied
    bool passed = false;
};

inline VerificationReport verify_family(const RokhlinFamily& fam,
                                        const std::vector<ComplexMatrix>& unitaries,
                                        const std::vector<ComplexMatrix>& commuting_set,
                                        double epsilon, SynthMode mode,
                                        std::optional<long long> comparison_rank = std::nullopt,
                                        const ComplexMatrix* norm_element = nullptr) {
    const GroupModel& g = fam.group;
    VerificationReport rep;
    const long long d = fam.dim;
    for (const auto& q : fam.q) {
        if (q.rows() != d || q.cols() != d) throw input_error("verify_family: dimension mismatch");
        rep.projection_defect = std::max(rep.projection_defect, (q * q - q).norm());
        rep.projection_defect = std::max(rep.projection_defect, (q - q.adjoint()).norm());
    }
    for (unsigned k = 0; k < fam.q.size(); ++k)
        for (unsigned j = 0; j < fam.q.size(); ++j)
            if (k != j)
                rep.orthogonality_defect =
                    std::max(rep.orthogonality_defect, (fam.q[k] * fam.q[j]).norm());
    ComplexMatrix qsum = ComplexMatrix::Zero(d, d);
    for (const auto& q : fam.q) qsum += q;
    if (mode == SynthMode::Strict)
        rep.sum_defect = (qsum - ComplexMatrix::Identity(d, d)).norm();
    for (unsigned a = 0; a < unitaries.size(); ++a) {
        if (unitaries[a].rows() != d) throw input_error("verify_family: dimension mismatch");
        for (unsigned h = 0; h < fam.q.size(); ++h) {
            ComplexMatrix moved = unitaries[a] * fam.q[h] * unitaries[a].adjoint();
            rep.equivariance_defect =
                std::max(rep.equivariance_defect, (moved - fam.q[g.mul(a, h)]).norm());
        }
    }
    for (const auto& a : commuting_set) {
        if (a.rows() != d) throw input_error("verify_family: dimension mismatch");
        for (const auto& q : fam.q)
            rep.commutator_defect = std::max(rep.commutator_defect, (q * a - a * q).norm());
    }
    rep.trace_defect = 1.0 - qsum.trace().real() / static_cast<double>(d);
    if (comparison_rank) {
        long long defect_rank = std::llround((ComplexMatrix::Identity(d, d) - qsum).trace().real());
        rep.comparison_ok = defect_rank <= *comparison_rank;
    }
    if (norm_element) {
        ComplexMatrix ebe = qsum * (*norm_element) * qsum;
        Eigen::JacobiSVD<ComplexMatrix> svd(ebe);
        rep.norm_value = svd.singularValues().size() > 0 ? svd.singularValues()(0) : 0.0;
    }
    bool core = rep.projection_defect < epsilon && rep.orthogonality_defect < epsilon &&
                rep.equivariance_defect < epsilon && rep.commutator_defect < epsilon;
    if (mode == SynthMode::Strict) {
        rep.passed = core && rep.sum_defect < epsilon;
    } else {
        rep.passed = core && rep.trace_defect < epsilon + 1e-12 && rep.comparison_ok &&
                     (norm_element == nullptr || rep.norm_value > 1.0 - epsilon);
    }
    return rep;
}

}  // namespace rokhlin
