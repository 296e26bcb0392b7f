#pragma once

#include <map>
#include <string>

#include "rokhlin/action.hpp"

namespace rokhlin {

/// Unitaries pi(g) for every group element of an abelian level or block,
/// materialized as dense matrices. Mult bodies become diagonal models
/// (m_g copies of the dual character zeta^g along the diagonal).
inline std::vector<ComplexMatrix> materialize_unitaries(const LevelRep& level) {
    const GroupModel& g = level.group;
    if (!g.is_abelian()) throw input_error("unsupported: materialization needs an abelian group");
    std::vector<ComplexMatrix> pi(g.order());
    if (const auto* em = std::get_if<ExplicitMatrices>(&level.body)) {
        for (unsigned a = 0; a < g.order(); ++a) {
            ComplexMatrix m = ComplexMatrix::Identity(level.dim, level.dim);
            auto dig = g.digits(a);
            for (std::size_t f = 0; f < dig.size(); ++f)
                for (unsigned k = 0; k < dig[f]; ++k) m = em->generators[f] * m;
            pi[a] = std::move(m);
        }
        return pi;
    }
    // Regular multiples and model levels take the permutation form: r
    // copies of the left regular representation (plus an identity block
    // of dimension s). Other mult vectors take the diagonal form.
    auto regular_form = [&g](long long r, long long s) {
        long long d = r * static_cast<long long>(g.order()) + s;
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
    };
    const MultVector* mv = std::get_if<MultVector>(&level.body);
    std::vector<long long> mults;
    if (mv) {
        bool uniform = true;
        for (long long m : mv->mults) uniform = uniform && m == mv->mults[0];
        if (uniform) return regular_form(mv->mults[0], 0);
        mults = mv->mults;
    } else if (const auto* ml = std::get_if<ModelLevel>(&level.body)) {
        if (!ml->remainder.empty() && ml->s > 0)
            throw input_error("unsupported: only trivial-remainder model levels materialize");
        return regular_form(ml->r, ml->s);
    } else {
        throw input_error("unsupported: char-values bodies do not materialize");
    }
    for (unsigned a = 0; a < g.order(); ++a) {
        Eigen::VectorXcd diag(level.dim);
        long long pos = 0;
        for (unsigned d = 0; d < g.order(); ++d) {
            std::complex<double> z = g.bichar(d, a).to_complex();
            for (long long k = 0; k < mults[d]; ++k) diag[pos++] = z;
        }
        pi[a] = diag.asDiagonal();
    }
    return pi;
}

inline std::vector<ComplexMatrix> materialize_block(const ActionSpec& spec, long long n,
                                                    long long m,
                                                    long long dim_bound = 4096) {
    std::vector<ComplexMatrix> acc = materialize_unitaries(spec.level(n));
    for (long long i = n + 1; i <= m; ++i) {
        auto next = materialize_unitaries(spec.level(i));
        if (acc[0].rows() * next[0].rows() > dim_bound)
            throw input_error("block dimension exceeds the materialization bound");
        for (unsigned a = 0; a < acc.size(); ++a) {
            ComplexMatrix kron(acc[a].rows() * next[a].rows(), acc[a].cols() * next[a].cols());
            for (Eigen::Index r = 0; r < acc[a].rows(); ++r)
                for (Eigen::Index c = 0; c < acc[a].cols(); ++c)
                    kron.block(r * next[a].rows(), c * next[a].cols(), next[a].rows(),
                               next[a].cols()) = acc[a](r, c) * next[a];
            acc[a] = std::move(kron);
        }
    }
    return acc;
}

/// The family of spectral projections P^g of a level or block:
/// P^g = |G|^-1 sum_h conj(zeta^h(g)) pi(h), the projection onto the
/// zeta^g isotypic component, so rank(P^g) equals the dual multiplicity.
struct SpectralFamily {
    GroupModel group;
    long long dim = 0;
    std::vector<ComplexMatrix> projections;  // indexed by dual element g
};

inline SpectralFamily spectral_projections(const std::vector<ComplexMatrix>& pi,
                                           const GroupModel& g) {
    SpectralFamily fam{g, pi[0].rows(), {}};
    fam.projections.resize(g.order());
    for (unsigned dual = 0; dual < g.order(); ++dual) {
        ComplexMatrix p = ComplexMatrix::Zero(fam.dim, fam.dim);
        for (unsigned h = 0; h < g.order(); ++h)
            p += std::conj(g.bichar(h, dual).to_complex()) * pi[h];
        fam.projections[dual] = p / static_cast<double>(g.order());
    }
    return fam;
}

inline SpectralFamily spectral_projections(const LevelRep& level) {
    return spectral_projections(materialize_unitaries(level), level.group);
}

/// Sum_l conj(zeta^{g^-1}(l)) P^l; reproduces pi(g).
inline ComplexMatrix recover_unitary(const SpectralFamily& fam, unsigned g) {
    ComplexMatrix u = ComplexMatrix::Zero(fam.dim, fam.dim);
    unsigned ginv = fam.group.inv(g);
    for (unsigned l = 0; l < fam.group.order(); ++l)
        u += std::conj(fam.group.bichar(ginv, l).to_complex()) * fam.projections[l];
    return u;
}

/// Exact normalized traces t_g = tau(P^g), computed from the character,
/// never from float matrices.
struct TraceVector {
    GroupModel group;
    std::vector<Rational> t;

    void validate() const {
        Rational sum = 0;
        for (const auto& x : t) {
            if (x < 0) throw inconsistency_error("trace vector entry < 0");
            sum += x;
        }
        if (sum != 1) throw inconsistency_error("trace vector does not sum to 1");
    }
};

inline TraceVector trace_vector(const ClassFunction& chi, const Rational& dim) {
    const GroupModel& g = chi.group;
    if (!g.is_abelian()) throw input_error("trace_vector requires an abelian group");
    TraceVector tv{g, std::vector<Rational>(g.order())};
    for (unsigned dual = 0; dual < g.order(); ++dual) {
        Cyclotomic sum;
        for (unsigned h = 0; h < g.order(); ++h) sum += g.bichar(h, dual).conj() * chi.at(h);
        Cyclotomic val = sum / (Rational(g.order()) * dim);
        if (!val.is_rational()) throw inconsistency_error("trace of spectral projection not rational");
        tv.t[dual] = val.as_rational();
    }
    tv.validate();
    return tv;
}

inline TraceVector trace_vector(const LevelRep& level) {
    if (const auto* mv = std::get_if<MultVector>(&level.body)) {
        TraceVector tv{level.group, {}};
        for (long long m : mv->mults) tv.t.emplace_back(m, level.dim);
        tv.validate();
        return tv;
    }
    return trace_vector(character_of(level), Rational(level.dim));
}

/// Circulant column-stochastic matrix with (h,g)-entry tau(P^{h g^-1}).
struct TransferMatrix {
    GroupModel group;
    std::vector<Rational> t;  // the defining trace vector

    Rational entry(unsigned h, unsigned g) const { return t[group.mul(h, group.inv(g))]; }

    std::vector<Rational> apply(const std::vector<Rational>& s) const {
        std::vector<Rational> out(t.size(), Rational(0));
        for (unsigned h = 0; h < t.size(); ++h)
            for (unsigned g = 0; g < t.size(); ++g) out[h] += entry(h, g) * s[g];
        return out;
    }

    friend TransferMatrix operator*(const TransferMatrix& a, const TransferMatrix& b) {
        if (a.group != b.group) throw input_error("transfer matrix group mismatch");
        TransferMatrix out{a.group, std::vector<Rational>(a.t.size(), Rational(0))};
        // Product of circulants is circulant; column at the identity suffices.
        for (unsigned h = 0; h < a.t.size(); ++h)
            for (unsigned g = 0; g < a.t.size(); ++g)
                out.t[h] += a.entry(h, g) * b.entry(g, a.group.identity());
        return out;
    }

    friend bool operator==(const TransferMatrix& a, const TransferMatrix& b) {
        return a.group == b.group && a.t == b.t;
    }
};

inline TransferMatrix transfer_matrix(const LevelRep& level) {
    return {level.group, trace_vector(level).t};
}

inline TransferMatrix transfer_matrix(const TraceVector& tv) { return {tv.group, tv.t}; }

/// Ordered product T_n ... T_m; functorially equal to the tensored
/// block's transfer matrix.
inline TransferMatrix block_transfer(const ActionSpec& spec, long long n, long long m) {
    TransferMatrix acc = transfer_matrix(spec.level(n));
    for (long long i = n + 1; i <= m; ++i) acc = acc * transfer_matrix(spec.level(i));
    return acc;
}

/// lambda^g = sum_h zeta^g(h) tau(P^h); the Fourier eigenvalues of T.
inline std::vector<Cyclotomic> fourier_eigenvalues(const TransferMatrix& tm) {
    const GroupModel& g = tm.group;
    std::vector<Cyclotomic> lambda(g.order());
    for (unsigned dual = 0; dual < g.order(); ++dual)
        for (unsigned h = 0; h < g.order(); ++h) lambda[dual] += tm.t[h] * g.bichar(dual, h);
    return lambda;
}

/// max |T_{g,h} - 1/|G||; zero iff T has rank 1 iff T = E.
inline Rational simplex_gap(const TransferMatrix& tm) {
    Rational uniform(1, tm.group.order());
    Rational gap = 0;
    for (const auto& x : tm.t) gap = std::max(gap, rational_abs(x - uniform));
    return gap;
}

/// s_n = T_{n+1} s_{n+1}.
inline TraceVector backward_trace(const ActionSpec& spec, long long n, const TraceVector& s_next) {
    TransferMatrix t = transfer_matrix(spec.level(n + 1));
    TraceVector out{spec.group, t.apply(s_next.t)};
    out.validate();
    return out;
}

/// An element of the |G|-fold direct sum picture of the crossed product.
template <typename Component>
struct DirectSummandVector {
    GroupModel group;
    std::vector<Component> components;  // indexed by g
};

/// Dual action as index shift: output component at h = input at h*g.
template <typename Component>
DirectSummandVector<Component> dual_shift(const DirectSummandVector<Component>& v, unsigned g) {
    DirectSummandVector<Component> out{v.group, v.components};
    for (unsigned h = 0; h < v.group.order(); ++h)
        out.components[h] = v.components[v.group.mul(h, g)];
    return out;
}

struct ConnectingMapReport {
    double tensor_identity_defect = 0;   // P_{n,m}^g = sum_l P_{n,m-1}^{g l^-1} (x) P_m^l
    double unitary_transport_defect = 0; // phi(X_{n-1}^g) = X_m^g componentwise
    double summand_image_defect = 0;     // image of I_k is (1 (x) P^{g k^-1})_g
    std::vector<Rational> summand_traces;  // trace components of the image of I_k at k = 1
    bool pass(double tol = 1e-10) const {
        return tensor_identity_defect <= tol && unitary_transport_defect <= tol &&
               summand_image_defect <= tol;
    }
};

namespace detail {
inline ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
    ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index r = 0; r < a.rows(); ++r)
        for (Eigen::Index c = 0; c < a.cols(); ++c)
            out.block(r * b.rows(), c * b.cols(), b.rows(), b.cols()) = a(r, c) * b;
    return out;
}
}  // namespace detail

/// Verifies the direct-system identities of the crossed product on the
/// materialized block [n, m] (requires m > n).
inline ConnectingMapReport connecting_map_checks(const ActionSpec& spec, long long n, long long m) {
    if (m <= n) throw input_error("connecting_map_checks: need m > n");
    const GroupModel& g = spec.group;
    ConnectingMapReport rep;

    auto head = materialize_block(spec, n, m - 1);
    auto last = materialize_unitaries(spec.level(m));
    auto full = materialize_block(spec, n, m);
    SpectralFamily fam_head = spectral_projections(head, g);
    SpectralFamily fam_last = spectral_projections(last, g);
    SpectralFamily fam_full = spectral_projections(full, g);

    // (a) P_{n,m}^g = sum_l P_{n,m-1}^{g l^-1} (x) P_m^l.
    for (unsigned a = 0; a < g.order(); ++a) {
        ComplexMatrix sum = ComplexMatrix::Zero(fam_full.dim, fam_full.dim);
        for (unsigned l = 0; l < g.order(); ++l)
            sum += detail::kron(fam_head.projections[g.mul(a, g.inv(l))], fam_last.projections[l]);
        rep.tensor_identity_defect =
            std::max(rep.tensor_identity_defect, (sum - fam_full.projections[a]).norm());
    }

    // (b) phi(X^g) = X^g where X^g = (zeta^h(g) V^g)_h. With P^g the
    // zeta^g-isotypic projection the connecting map sends y^h to
    // sum_l y^l (x) P^{h^-1 l}.
    for (unsigned a = 0; a < g.order(); ++a) {
        for (unsigned h = 0; h < g.order(); ++h) {
            ComplexMatrix img = ComplexMatrix::Zero(fam_full.dim, fam_full.dim);
            for (unsigned l = 0; l < g.order(); ++l)
                img += g.bichar(l, a).to_complex() *
                       detail::kron(head[a], fam_last.projections[g.mul(g.inv(h), l)]);
            ComplexMatrix expect = g.bichar(h, a).to_complex() * full[a];
            rep.unitary_transport_defect =
                std::max(rep.unitary_transport_defect, (img - expect).norm());
        }
    }

    // (c) image of I_k (at k = identity) is (1 (x) P^{g k^-1})_g with
    // trace components matching the tail trace vector.
    TraceVector tail_tv = trace_vector(character_of(spec.level(m)), Rational(spec.level(m).dim));
    for (unsigned a = 0; a < g.order(); ++a) {
        ComplexMatrix img = detail::kron(ComplexMatrix::Identity(head[0].rows(), head[0].rows()),
                                         fam_last.projections[a]);
        double tr = img.trace().real() / static_cast<double>(img.rows());
        rep.summand_image_defect = std::max(
            rep.summand_image_defect, std::abs(tr - rational_to_double(tail_tv.t[a])));
        rep.summand_traces.push_back(tail_tv.t[a]);
    }
    if (!rep.pass())
        throw inconsistency_error("identity-violation: connecting map defect above 1e-10");
    return rep;
}

}  // namespace rokhlin
