#include <doctest.h>

#include <rokhlin/spectral.hpp>

using namespace rokhlin;

namespace {

LevelRep mult_level(const GroupModel& g, std::vector<long long> mults) {
    long long d = 0;
    for (long long m : mults) d += m;
    return LevelRep{g, d, MultVector{std::move(mults)}};
}

ActionSpec periodic_spec(const GroupModel& g, std::vector<LevelRep> period) {
    ActionSpec spec;
    spec.group = g;
    spec.periodic = std::move(period);
    return spec;
}

LevelRep diag_level(const GroupModel& g, const ComplexMatrix& u) {
    return LevelRep{g, u.rows(), ExplicitMatrices{{u}}};
}

ComplexMatrix diag3(double a, double b, double c) {
    ComplexMatrix u = ComplexMatrix::Zero(3, 3);
    u(0, 0) = a;
    u(1, 1) = b;
    u(2, 2) = c;
    return u;
}

}  // namespace

TEST_CASE("spectral projections of diag(1,1,-1)") {
    auto g = GroupModel::cyclic(2);
    auto fam = spectral_projections(diag_level(g, diag3(1, 1, -1)));
    CHECK((fam.projections[0] - diag3(1, 1, 0)).norm() < 1e-12);
    CHECK((fam.projections[1] - diag3(0, 0, 1)).norm() < 1e-12);
}

TEST_CASE("spectral projections of the regular swap") {
    auto g = GroupModel::cyclic(2);
    auto fam = spectral_projections(mult_level(g, {1, 1}));
    ComplexMatrix p0(2, 2), p1(2, 2);
    p0 << 0.5, 0.5, 0.5, 0.5;
    p1 << 0.5, -0.5, -0.5, 0.5;
    CHECK((fam.projections[0] - p0).norm() < 1e-12);
    CHECK((fam.projections[1] - p1).norm() < 1e-12);
}

TEST_CASE("trivial representation has only the identity projection") {
    auto g = GroupModel::cyclic(3);
    auto fam = spectral_projections(mult_level(g, {4, 0, 0}));
    CHECK((fam.projections[0] - ComplexMatrix::Identity(4, 4)).norm() < 1e-12);
    CHECK(fam.projections[1].norm() < 1e-12);
    CHECK(fam.projections[2].norm() < 1e-12);
}

TEST_CASE("recover_unitary round-trips") {
    auto g = GroupModel::cyclic(2);
    auto fam = spectral_projections(diag_level(g, diag3(1, 1, -1)));
    CHECK((recover_unitary(fam, 0) - ComplexMatrix::Identity(3, 3)).norm() < 1e-12);
    CHECK((recover_unitary(fam, 1) - diag3(1, 1, -1)).norm() < 1e-12);

    auto z3 = GroupModel::cyclic(3);
    ComplexMatrix u = ComplexMatrix::Zero(2, 2);
    u(0, 0) = 1.0;
    u(1, 1) = Cyclotomic::root_of_unity(3, 1).to_complex();
    auto fam3 = spectral_projections(diag_level(z3, u));
    CHECK((recover_unitary(fam3, 1) - u).norm() < 1e-12);
}

TEST_CASE("trace vector from mult vectors and characters agree") {
    auto g = GroupModel::cyclic(2);
    auto level = mult_level(g, {2, 1});
    auto fast = trace_vector(level);
    CHECK(fast.t == std::vector<Rational>{Rational(2, 3), Rational(1, 3)});
    auto exact = trace_vector(character_of(level), Rational(level.dim));
    CHECK(fast.t == exact.t);

    auto reg = trace_vector(mult_level(GroupModel::cyclic(5), {1, 1, 1, 1, 1}));
    for (const auto& t : reg.t) CHECK(t == Rational(1, 5));

    auto triv = trace_vector(mult_level(g, {3, 0}));
    CHECK(triv.t == std::vector<Rational>{Rational(1), Rational(0)});
}

TEST_CASE("transfer matrix entries and products") {
    auto g = GroupModel::cyclic(2);
    auto T = transfer_matrix(mult_level(g, {2, 1}));
    CHECK(T.entry(0, 0) == Rational(2, 3));
    CHECK(T.entry(0, 1) == Rational(1, 3));
    auto T2 = T * T;
    CHECK(T2.entry(0, 0) == Rational(5, 9));
    CHECK(T2.entry(1, 0) == Rational(4, 9));

    auto spec = periodic_spec(g, {mult_level(g, {2, 1})});
    CHECK(block_transfer(spec, 1, 2) == T2);
}

TEST_CASE("fourier eigenvalues of circulants") {
    auto g = GroupModel::cyclic(2);
    auto lam = fourier_eigenvalues(transfer_matrix(mult_level(g, {2, 1})));
    CHECK(lam[0] == Cyclotomic::one());
    CHECK(lam[1] == Cyclotomic(Rational(1, 3)));

    auto reg = fourier_eigenvalues(transfer_matrix(mult_level(g, {1, 1})));
    CHECK(reg[0] == Cyclotomic::one());
    CHECK(reg[1].is_zero());

    // Z/3 trace vector (1/2, 1/2, 0): lambda * conj(lambda) = 1/4.
    auto z3 = GroupModel::cyclic(3);
    TransferMatrix T{z3, {Rational(1, 2), Rational(1, 2), Rational(0)}};
    auto lam3 = fourier_eigenvalues(T);
    CHECK(lam3[1] == (Cyclotomic::one() + Cyclotomic::root_of_unity(3, 1)) * Cyclotomic(Rational(1, 2)));
    CHECK(lam3[1].norm_squared() == Cyclotomic(Rational(1, 4)));
}

TEST_CASE("eigenvalues diagonalize the transfer matrix exactly") {
    // X T X^* with X the character table over |G| must be diagonal with the
    // Fourier eigenvalues; check the equivalent statement T x_g = lambda_g x_g.
    for (auto orders : {std::vector<unsigned>{4}, std::vector<unsigned>{2, 3}}) {
        auto g = GroupModel::abelian(orders);
        std::vector<Rational> t;
        Rational rest(1);
        for (unsigned h = 1; h < g.order(); ++h) {
            t.push_back(Rational(1, 2 + h));
            rest -= Rational(1, 2 + h);
        }
        t.insert(t.begin(), rest);
        TransferMatrix T{g, t};
        auto lam = fourier_eigenvalues(T);
        for (unsigned dual = 0; dual < g.order(); ++dual) {
            for (unsigned row = 0; row < g.order(); ++row) {
                // Eigenvector for lambda^dual has components conj(zeta^dual).
                Cyclotomic lhs;
                for (unsigned col = 0; col < g.order(); ++col)
                    lhs += Cyclotomic(T.entry(row, col)) * g.bichar(dual, col).conj();
                CHECK(lhs == lam[dual] * g.bichar(dual, row).conj());
            }
        }
    }
}

TEST_CASE("simplex gap") {
    auto g = GroupModel::cyclic(2);
    CHECK(simplex_gap(transfer_matrix(mult_level(g, {1, 1}))) == Rational(0));
    CHECK(simplex_gap(transfer_matrix(mult_level(g, {2, 1}))) == Rational(1, 6));
}

TEST_CASE("backward trace propagation") {
    auto g = GroupModel::cyclic(2);
    auto spec = periodic_spec(g, {mult_level(g, {2, 1})});
    auto out = backward_trace(spec, 1, TraceVector{g, {Rational(1), Rational(0)}});
    CHECK(out.t == std::vector<Rational>{Rational(2, 3), Rational(1, 3)});

    TraceVector uniform{g, {Rational(1, 2), Rational(1, 2)}};
    CHECK(backward_trace(spec, 1, uniform).t == uniform.t);

    auto triv = periodic_spec(g, {mult_level(g, {3, 0})});
    TraceVector s{g, {Rational(0), Rational(1)}};
    CHECK(backward_trace(triv, 1, s).t == s.t);
}

TEST_CASE("dual shift group action") {
    auto g = GroupModel::cyclic(3);
    DirectSummandVector<int> v{g, {7, 8, 9}};
    auto w = dual_shift(v, 0);
    CHECK(w.components == v.components);
    auto once = dual_shift(dual_shift(v, 1), 1);
    auto twice = dual_shift(v, 2);
    CHECK(once.components == twice.components);

    auto z2 = GroupModel::cyclic(2);
    DirectSummandVector<int> ab{z2, {1, 2}};
    CHECK(dual_shift(ab, 1).components == std::vector<int>{2, 1});
}

TEST_CASE("connecting map checks pass on regular blocks") {
    auto g = GroupModel::cyclic(2);
    auto spec = periodic_spec(g, {mult_level(g, {1, 1})});
    auto rep = connecting_map_checks(spec, 1, 2);
    CHECK(rep.pass());
    CHECK(rep.tensor_identity_defect < 1e-12);

    // diag(1,1,-1) then regular: summand traces (1/2, 1/2).
    ActionSpec mix;
    mix.group = g;
    mix.prefix = {LevelRep{g, 3, ExplicitMatrices{{diag3(1, 1, -1)}}}, mult_level(g, {1, 1})};
    auto rep2 = connecting_map_checks(mix, 1, 2);
    CHECK(rep2.pass());
    CHECK(rep2.summand_traces == std::vector<Rational>{Rational(1, 2), Rational(1, 2)});
}

TEST_CASE("materialized unitaries represent the group") {
    auto g = GroupModel::abelian({2, 2});
    auto pi = materialize_unitaries(mult_level(g, {1, 1, 1, 1}));
    for (unsigned a = 0; a < 4; ++a)
        for (unsigned b = 0; b < 4; ++b)
            CHECK((pi[a] * pi[b] - pi[g.mul(a, b)]).norm() < 1e-12);
    // Regular multiples come out as permutation matrices.
    for (const auto& u : pi)
        for (long long r = 0; r < u.rows(); ++r)
            for (long long c = 0; c < u.cols(); ++c) {
                double x = std::abs(u(r, c));
                CHECK((x < 1e-12 || std::abs(x - 1.0) < 1e-12));
            }
}
