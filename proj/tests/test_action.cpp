#include <doctest.h>

#include <rokhlin/action.hpp>

using namespace rokhlin;

namespace {

ActionSpec periodic_spec(const GroupModel& g, std::vector<LevelRep> period) {
    ActionSpec spec;
    spec.group = g;
    spec.periodic = std::move(period);
    return spec;
}

LevelRep mult_level(const GroupModel& g, std::vector<long long> mults) {
    long long d = 0;
    for (long long m : mults) d += m;
    return LevelRep{g, d, MultVector{std::move(mults)}};
}

}  // namespace

TEST_CASE("character of a mult vector") {
    auto g = GroupModel::cyclic(2);
    auto chi = character_of(mult_level(g, {1, 1}));
    CHECK(chi.at(0) == Cyclotomic(2));
    CHECK(chi.at(1).is_zero());

    chi = character_of(mult_level(g, {2, 1}));
    CHECK(chi.at(0) == Cyclotomic(3));
    CHECK(chi.at(1) == Cyclotomic::one());
}

TEST_CASE("character of explicit matrices matches the mult vector") {
    auto g = GroupModel::cyclic(3);
    ComplexMatrix u = ComplexMatrix::Zero(2, 2);
    u(0, 0) = 1.0;
    u(1, 1) = std::polar(1.0, 2.0 * 3.14159265358979323846 / 3.0);
    LevelRep level{g, 2, ExplicitMatrices{{u}}};
    auto chi = character_of(level);
    CHECK(chi.at(0) == Cyclotomic(2));
    CHECK(chi.at(1) == Cyclotomic::one() + Cyclotomic::root_of_unity(3, 1));
}

TEST_CASE("trivial representation character is constant") {
    auto g = GroupModel::cyclic(4);
    auto chi = character_of(mult_level(g, {5, 0, 0, 0}));
    for (unsigned h = 0; h < 4; ++h) CHECK(chi.at(h) == Cyclotomic(5));
}

TEST_CASE("level validation") {
    auto g = GroupModel::cyclic(2);
    CHECK_THROWS_AS(validate_level(LevelRep{g, 4, MultVector{{1, 1}}}), input_error);
    CHECK_THROWS_AS(validate_level(LevelRep{g, 2, MultVector{{1, 1, 1}}}), input_error);
    CHECK_THROWS_AS(validate_level(LevelRep{g, 4, ModelLevel{1, 1, {}}}), input_error);
    CHECK_NOTHROW(validate_level(LevelRep{g, 3, ModelLevel{1, 1, {}}}));
    // CharValues modulus bound: |value(h)| <= d.
    CHECK_THROWS_AS(validate_level(LevelRep{g, 2, CharValues{{Cyclotomic(2), Cyclotomic(3)}}}),
                    input_error);
}

TEST_CASE("block character multiplies pointwise") {
    auto g = GroupModel::cyclic(2);
    auto spec = periodic_spec(g, {mult_level(g, {2, 1})});
    auto bc = block_character(spec, 1, 2);
    CHECK(bc.dim == Rational(9));
    CHECK(bc.chi.at(0) == Cyclotomic(9));
    CHECK(bc.chi.at(1) == Cyclotomic::one());

    ActionSpec mix;
    mix.group = g;
    mix.prefix = {mult_level(g, {2, 0}), mult_level(g, {1, 1})};
    auto bc2 = block_character(mix, 1, 2);
    CHECK(bc2.chi.at(0) == Cyclotomic(4));
    CHECK(bc2.chi.at(1).is_zero());
}

TEST_CASE("model action constructors") {
    auto g = GroupModel::cyclic(2);
    auto all_regular = model_action(g, {1, 1, 1}, {0, 0, 0});
    CHECK(all_regular.level(2).dim == 2);
    for (int i = 1; i <= 3; ++i) {
        auto chi = character_of(all_regular.level(i));
        CHECK(chi.at(1).is_zero());
    }

    auto with_rem = model_action(g, IndexPolynomial{{0, 1}}, IndexPolynomial{{1}});
    CHECK(with_rem.level(4).dim == 4 * 2 + 1);

    auto trivial = model_action(g, IndexPolynomial{{0}}, IndexPolynomial{{1}});
    auto chi = character_of(trivial.level(7));
    CHECK(chi.at(0) == Cyclotomic::one());
    CHECK(chi.at(1) == Cyclotomic::one());
}

TEST_CASE("identity telescope preserves the spec") {
    auto g = GroupModel::cyclic(2);
    auto spec = periodic_spec(g, {mult_level(g, {2, 1}), mult_level(g, {1, 1})});
    Telescope id{{1, 2}, 1};
    auto out = apply_telescope(spec, id);
    for (int i = 1; i <= 6; ++i) {
        CHECK(out.level(i).dim == spec.level(i).dim);
        CHECK(character_of(out.level(i)).at(1) == character_of(spec.level(i)).at(1));
    }
}

TEST_CASE("telescope merges blocks by convolution") {
    auto g = GroupModel::cyclic(2);
    ActionSpec spec;
    spec.group = g;
    spec.prefix = {mult_level(g, {2, 0}), mult_level(g, {1, 1})};
    auto merged = apply_telescope(spec, Telescope{{1}, 0});
    CHECK(merged.prefix.size() == 1);
    auto chi = character_of(merged.level(1));
    CHECK(chi.at(0) == Cyclotomic(4));
    CHECK(chi.at(1).is_zero());

    // cuts (1,3,5,...) on a 2-periodic spec give a 1-periodic merged spec.
    auto per = periodic_spec(g, {mult_level(g, {2, 0}), mult_level(g, {1, 1})});
    auto tele = apply_telescope(per, Telescope{{1, 3}, 2});
    CHECK(tele.periodic.size() == 1);
    auto tchi = character_of(tele.level(5));
    CHECK(tchi.at(0) == Cyclotomic(4));
    CHECK(tchi.at(1).is_zero());
}

TEST_CASE("subgroup restriction of mult vectors") {
    auto z4 = GroupModel::cyclic(4);
    auto spec = periodic_spec(z4, {mult_level(z4, {1, 1, 1, 1})});
    auto r = restrict_to_divisor(spec, 2);
    CHECK(r.group.order() == 2);
    const auto& mv = std::get<MultVector>(r.periodic[0].body);
    CHECK(mv.mults == std::vector<long long>{2, 2});

    // Trivial subgroup: characters become constant.
    auto triv = restrict_to_divisor(spec, 1);
    CHECK(triv.group.order() == 1);
    CHECK(character_of(triv.level(1)).at(0) == Cyclotomic(4));
}

TEST_CASE("regular restriction gives index-many regular copies") {
    auto z6 = GroupModel::cyclic(6);
    auto spec = periodic_spec(z6, {mult_level(z6, {1, 1, 1, 1, 1, 1})});
    for (unsigned divisor : {2u, 3u}) {
        auto r = restrict_to_divisor(spec, divisor);
        auto chi = character_of(r.level(1));
        CHECK(chi.at(0) == Cyclotomic(6));
        for (unsigned h = 1; h < divisor; ++h) CHECK(chi.at(h).is_zero());
    }
}

TEST_CASE("spec validation") {
    auto g = GroupModel::cyclic(2);
    ActionSpec finite;
    finite.group = g;
    finite.prefix = {mult_level(g, {1, 1})};
    CHECK_NOTHROW(validate_spec(finite));
    CHECK_THROWS_AS(finite.level(2), input_error);

    ActionSpec both = finite;
    both.periodic = {mult_level(g, {1, 1})};
    both.model_tail = ModelTailRule{IndexPolynomial{{1}}, IndexPolynomial{{0}}};
    CHECK_THROWS_AS(validate_spec(both), input_error);
}
