#include <doctest.h>

#include <rokhlin/synth.hpp>

using namespace rokhlin;

namespace {

LevelRep mult_level(const GroupModel& g, std::vector<long long> mults) {
    long long d = 0;
    for (long long m : mults) d += m;
    return LevelRep{g, d, MultVector{std::move(mults)}};
}

ComplexMatrix diag3(double a, double b, double c) {
    ComplexMatrix u = ComplexMatrix::Zero(3, 3);
    u(0, 0) = a;
    u(1, 1) = b;
    u(2, 2) = c;
    return u;
}

}  // namespace

TEST_CASE("partial isometries of the regular block") {
    auto g = GroupModel::cyclic(2);
    auto fam = spectral_projections(mult_level(g, {1, 1}));
    auto sys = build_partial_isometries(fam, SynthMode::Strict);

    // W^{1,s} is the outer product of (1,1)/sqrt2 and (1,-1)/sqrt2.
    ComplexMatrix expected(2, 2);
    expected << 0.5, -0.5, 0.5, -0.5;
    CHECK((sys.at(0, 1) - expected).norm() < 1e-10);
    CHECK((sys.at(0, 1) * sys.at(0, 1).adjoint() - fam.projections[0]).norm() < 1e-10);
    CHECK((sys.at(0, 1).adjoint() * sys.at(0, 1) - fam.projections[1]).norm() < 1e-10);

    for (unsigned a = 0; a < 2; ++a) {
        CHECK((sys.at(a, a) - fam.projections[a]).norm() < 1e-10);
        for (unsigned b = 0; b < 2; ++b) {
            CHECK((sys.at(a, b).adjoint() - sys.at(b, a)).norm() < 1e-10);
            for (unsigned c = 0; c < 2; ++c)
                for (unsigned d = 0; d < 2; ++d) {
                    auto prod = sys.at(a, b) * sys.at(c, d);
                    if (b == c)
                        CHECK((prod - sys.at(a, d)).norm() < 1e-10);
                    else
                        CHECK(prod.norm() < 1e-10);
                }
        }
    }
}

TEST_CASE("strict synthesis needs equal ranks") {
    auto g = GroupModel::cyclic(2);
    auto fam = spectral_projections(LevelRep{g, 3, ExplicitMatrices{{diag3(1, 1, -1)}}});
    CHECK_THROWS_AS(build_partial_isometries(fam, SynthMode::Strict), input_error);
    auto sys = build_partial_isometries(fam, SynthMode::Tracial);
    // Rank-1 isometry carrying the s-eigenvector e3 into the 1-eigenspace.
    CHECK(std::abs(sys.at(0, 1).norm() - 1.0) < 1e-10);
    CHECK((sys.at(0, 1) * sys.at(0, 1).adjoint() * fam.projections[0] -
           sys.at(0, 1) * sys.at(0, 1).adjoint())
              .norm() < 1e-10);
}

TEST_CASE("rokhlin family of the regular block") {
    auto g = GroupModel::cyclic(2);
    auto level = mult_level(g, {1, 1});
    auto unitaries = materialize_unitaries(level);
    auto fam = spectral_projections(unitaries, g);
    auto rf = build_rokhlin_family(fam, trace_vector(level), SynthMode::Strict);

    CHECK((rf.q[0] - diag3(1, 0, 0).topLeftCorner(2, 2)).norm() < 1e-10);
    CHECK((rf.q[1] - diag3(0, 1, 0).topLeftCorner(2, 2)).norm() < 1e-10);
    CHECK(rf.trace_defect == Rational(0));
    // Exact equivariance: swap Q^1 swap = Q^s.
    CHECK((unitaries[1] * rf.q[0] * unitaries[1].adjoint() - rf.q[1]).norm() < 1e-10);

    auto rep = verify_family(rf, unitaries, {ComplexMatrix::Identity(2, 2)}, 1e-9,
                             SynthMode::Strict);
    CHECK(rep.passed);
    CHECK(rep.sum_defect < 1e-12);
    CHECK(rep.equivariance_defect < 1e-12);
}

TEST_CASE("trivial group family is the identity") {
    auto g = GroupModel::cyclic(1);
    auto level = mult_level(g, {3});
    auto fam = spectral_projections(level);
    auto rf = build_rokhlin_family(fam, trace_vector(level), SynthMode::Strict);
    CHECK((rf.q[0] - ComplexMatrix::Identity(3, 3)).norm() < 1e-12);
    CHECK(rf.trace_defect == Rational(0));
}

TEST_CASE("tracial family of diag(1,1,-1)") {
    auto g = GroupModel::cyclic(2);
    auto level = LevelRep{g, 3, ExplicitMatrices{{diag3(1, 1, -1)}}};
    auto unitaries = materialize_unitaries(level);
    auto fam = spectral_projections(unitaries, g);
    auto tv = trace_vector(level);
    auto rf = build_rokhlin_family(fam, tv, SynthMode::Tracial);
    CHECK(rf.trace_defect == Rational(1, 3));

    auto rep = verify_family(rf, unitaries, {}, Rational(1, 2).convert_to<double>(),
                             SynthMode::Tracial, 1, &fam.projections[0]);
    CHECK(rep.comparison_ok);
    CHECK(std::abs(rep.norm_value - 1.0) < 1e-10);
    CHECK(std::abs(rep.trace_defect - 1.0 / 3.0) < 1e-12);
    CHECK(rep.passed);  // epsilon = 1/2 > 1/3
}

TEST_CASE("model action family") {
    auto z2 = GroupModel::cyclic(2);
    auto fam = model_action_family(z2, 1, 1);
    CHECK(fam.dim == 3);
    CHECK(fam.trace_defect == Rational(1, 3));
    ComplexMatrix sum = fam.q[0] + fam.q[1];
    CHECK((sum * sum - sum).norm() < 1e-12);

    auto z3 = GroupModel::cyclic(3);
    auto pure = model_action_family(z3, 2, 0);
    Rational zero(0);
    CHECK(pure.trace_defect == zero);
    ComplexMatrix total = ComplexMatrix::Zero(6, 6);
    for (const auto& q : pure.q) {
        CHECK(std::abs(q.trace().real() - 2.0) < 1e-12);
        total += q;
    }
    CHECK((total - ComplexMatrix::Identity(6, 6)).norm() < 1e-12);

    // The family is equivariant for the model unitaries: pi(g) e_h pi(g)* = e_{gh}.
    auto pi = model_action_unitaries(z2, 1, 1);
    for (unsigned a = 0; a < 2; ++a)
        for (unsigned h = 0; h < 2; ++h)
            CHECK((pi[a] * fam.q[h] * pi[a].adjoint() - fam.q[z2.mul(a, h)]).norm() < 1e-12);
}

TEST_CASE("murray von neumann comparison") {
    ComplexMatrix p = ComplexMatrix::Zero(3, 3), q = ComplexMatrix::Zero(3, 3);
    p(0, 0) = 1;
    q(0, 0) = q(1, 1) = 1;
    CHECK(mvn_compare(p, q) == MvnOrder::SubEquivalent);
    CHECK(mvn_compare(q, p) == MvnOrder::Dominates);
    ComplexMatrix r = ComplexMatrix::Zero(3, 3);
    r(2, 2) = 1;
    CHECK(mvn_compare(p, r) == MvnOrder::Equivalent);
    ComplexMatrix not_proj = 0.5 * ComplexMatrix::Identity(3, 3);
    CHECK_THROWS_AS(mvn_compare(not_proj, p), input_error);
}
