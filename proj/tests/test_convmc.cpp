#include <gtest/gtest.h>

#include "kdual/adjunction.hpp"
#include "kdual/random_coalgebra.hpp"
#include "seed.hpp"

using namespace kdual;

namespace {

// {A*, 𝐤} for a one-object augmented A is A again, arrow for arrow.
template <Field K>
void expect_double_dual(const Category<K>& a) {
    auto dual = expand(dual_coalgebra(a), true);
    auto conv = convolution_category(dual, ground_category<K>());
    ASSERT_TRUE(validate_category(conv.category).ok);
    const auto& c = conv.category;
    ASSERT_EQ(c.num_objects(), 1u);
    ASSERT_EQ(c.num_arrows(), a.num_arrows());
    // the basis element of dual index i is arrow i of A (units first in both)
    auto to_conv = [&](const Vec<K>& v) {
        Vec<K> r;
        for (auto& [i, k] : v) r.add(*conv.find(0, 0, i, 0), k);
        return r;
    };
    for (std::size_t i = 0; i < a.num_arrows(); ++i) {
        EXPECT_EQ(c.quiver.arrow(*conv.find(0, 0, i, 0)).degree, a.quiver.arrow(i).degree);
        EXPECT_EQ(c.differential[*conv.find(0, 0, i, 0)], to_conv(a.differential[i])) << a.label(i);
        for (std::size_t j = 0; j < a.num_arrows(); ++j)
            EXPECT_EQ(c.compose_basis(*conv.find(0, 0, i, 0), *conv.find(0, 0, j, 0)),
                      to_conv(a.compose_basis(i, j)));
    }
    EXPECT_EQ(c.unit(0), to_conv(a.unit(0)));
    EXPECT_EQ(c.curvature_at(0), to_conv(a.curvature_at(0)));
}

}  // namespace

TEST(Convolution, GroundCoalgebraGivesTarget) {
    auto d = a2_category<F3>();
    auto conv = convolution_category(expand(ground_coalgebra<F3>(), true), d);
    ASSERT_TRUE(validate_category(conv.category).ok);
    EXPECT_EQ(conv.category.num_objects(), 2u);
    EXPECT_EQ(conv.category.num_arrows(), d.num_arrows());
}

TEST(Convolution, ZeroCases) {
    auto d = a2_category<F2>();
    auto from_zero = convolution_category(expand(zero_coalgebra<F2>(), true), d);
    EXPECT_TRUE(from_zero.category.zero);
    auto into_zero = convolution_category(expand(ground_coalgebra<F2>(), true), zero_category<F2>());
    EXPECT_TRUE(into_zero.category.zero);
    EXPECT_TRUE(validate_category(into_zero.category).ok);
}

TEST(Convolution, DoubleDualOfRandomAlgebras) {
    Rng rng(test_seed());
    for (int t = 0; t < 40; ++t) expect_double_dual(random_dg_category<Q>(rng, 4, true, 1));
    for (int t = 0; t < 40; ++t) expect_double_dual(random_curved_category<F3>(rng, 4));
}

TEST(Convolution, RandomInstancesValidate) {
    Rng rng(test_seed() + 1);
    for (int t = 0; t < 60; ++t) {
        bool curved_c = t % 2, counital = t % 3 != 0;
        auto c = expand(random_coalgebra<F3>(rng, 3, curved_c), counital || curved_c);
        auto d = t % 5 == 0 ? random_curved_category<F3>(rng, 3) : random_dg_category<F3>(rng, 3);
        if (d.is_curved() && !c.counital) continue;
        auto conv = convolution_category(c, d);
        auto r = validate_category(conv.category);
        EXPECT_TRUE(r.ok) << r.failure;
    }
}

TEST(Convolution, CurvedTargetNeedsCounit) {
    Rng rng(test_seed() + 2);
    auto d = random_curved_category<F3>(rng, 3);
    while (!d.is_curved()) d = random_curved_category<F3>(rng, 3);
    EXPECT_THROW(convolution_category(expand(primitive_coalgebra<F3>({-1}), false), d), ValidationError);
}

TEST(Interchange, AllThreeCases) {
    Rng rng(test_seed() + 3);
    const InterchangeCase cases[] = {InterchangeCase::counital_outer_uncurved_target,
                                     InterchangeCase::uncurved_inner_and_target, InterchangeCase::both_counital};
    for (auto h : cases) {
        int checked = 0;
        for (int t = 0; checked < 10 && t < 400; ++t) {
            auto c = expand(random_coalgebra<F2>(rng, 2, uniform_int(rng, 0, 1)), uniform_int(rng, 0, 1));
            auto c2 = expand(random_coalgebra<F2>(rng, 2, uniform_int(rng, 0, 1)), uniform_int(rng, 0, 1));
            auto d = uniform_int(rng, 0, 2) == 0 ? random_curved_category<F2>(rng, 2)
                                                  : random_dg_category<F2>(rng, 3, false, 1 + uniform_int(rng, 0, 1));
            if (!interchange_applies(h, c, c2, d)) continue;
            auto r = check_interchange(c, c2, d);
            EXPECT_TRUE(r.ok) << r.failure;
            ++checked;
        }
        EXPECT_EQ(checked, 10);
    }
}

namespace {

// Every degree-1 cochain for every object map, filtered by mc_check.
template <FiniteField K>
std::size_t brute_force_mc_count(const PointedCoalgebra<K>& c, const Category<K>& d) {
    std::size_t count = 0;
    ObjectMaps maps(c.num_objects(), d.num_objects());
    for (std::size_t fi = 0; fi < maps.size(); ++fi) {
        auto f = maps[fi];
        std::vector<std::pair<std::size_t, std::size_t>> coords;
        for (std::size_t i = 0; i < c.dim(); ++i) {
            const Arrow& a = c.reduced.arrow(i);
            for (auto e : d.quiver.slot(f[a.src], f[a.tgt], a.degree + 1)) coords.push_back({i, e});
        }
        std::vector<Vec<K>> basis;
        for (std::size_t k = 0; k < coords.size(); ++k) basis.push_back(Vec<K>::unit(k));
        for_each_combination<K>(basis, {}, [&](const Vec<K>& v) {
            McElement<K> m{f, std::vector<Vec<K>>(c.dim())};
            for (auto& [k, a] : v) m.xi[coords[k].first].add(coords[k].second, a);
            if (mc_check(c, d, m).ok) ++count;
        });
    }
    return count;
}

// x, y with t: x -> x of degree -1, dt = 1_x, t∘t = 0
Category<F2> contractible_at_x() {
    GradedQuiver q({"x", "y"});
    q.add_arrow("1_x", 0, 0, 0);
    q.add_arrow("1_y", 1, 1, 0);
    q.add_arrow("t", 0, 0, -1);
    auto d = make_category<F2>(q);
    d.units = std::vector<Vec<F2>>{Vec<F2>::unit(0), Vec<F2>::unit(1)};
    for (std::size_t a = 0; a < 3; ++a) {
        std::size_t s = q.arrow(a).src, t = q.arrow(a).tgt;
        d.add_composition(a, s, Vec<F2>::unit(a));
        if (a != t) d.add_composition(t, a, Vec<F2>::unit(a));
    }
    d.differential[2] = Vec<F2>::unit(0);
    return d;
}

}  // namespace

TEST(McCheck, ZeroCochainOnUncurvedCoalgebra) {
    auto c = primitive_coalgebra<F2>({-1, -2});
    auto d = dual_numbers<F2>();
    EXPECT_TRUE(mc_check(c, d, McElement<F2>{{0}, std::vector<Vec<F2>>(2)}).ok);
}

TEST(McCheck, ZeroCochainOnCurvedCoalgebraLeavesCurvature) {
    auto c = primitive_coalgebra<F3>({-2}, {F3(2)});
    auto d = ground_category<F3>();
    auto r = mc_check(c, d, McElement<F3>{{0}, {Vec<F3>{}}});
    EXPECT_FALSE(r.ok);
    EXPECT_EQ(r.residual[0], d.unit(0).scaled(F3(2)));
}

TEST(McCheck, WrongDegreeIsAnError) {
    auto c = primitive_coalgebra<F2>({-1});
    auto d = dual_numbers<F2>(1);  // x in degree 1, so ξ(w) = x has degree 1 ≠ |w| + 1
    EXPECT_THROW(mc_check(c, d, McElement<F2>{{0}, {Vec<F2>::unit(1)}}), ValidationError);
}

TEST(McEnumerate, OnePrimitiveIntoDualNumbers) {
    auto c = primitive_coalgebra<F2>({-1});
    auto d = dual_numbers<F2>();
    auto all = mc_enumerate(c, d);
    EXPECT_EQ(all.size(), brute_force_mc_count(c, d));
    EXPECT_EQ(all.size(), 4u);  // ξ(w) ∈ span{1, x} and the equation is empty
}

TEST(McEnumerate, NoReducedPartGivesObjectMaps) {
    auto d = a2_category<F3>();
    GradedQuiver q({"o", "p"});
    auto c = make_coalgebra<F3>(q);
    auto all = mc_enumerate(c, d);
    ASSERT_EQ(all.size(), 4u);
    for (auto& m : all) EXPECT_TRUE(m.xi.empty());
}

TEST(McEnumerate, CurvedCoalgebraDropsObjectMaps) {
    auto d = contractible_at_x();
    ASSERT_TRUE(validate_category(d).ok);
    auto c = primitive_coalgebra<F2>({-2}, {F2(1)});
    auto all = mc_enumerate(c, d);
    ASSERT_EQ(all.size(), 1u);
    EXPECT_EQ(all[0].object_map, std::vector<std::size_t>{0});
    EXPECT_EQ(all[0].xi[0], Vec<F2>::unit(2));
    EXPECT_EQ(brute_force_mc_count(c, d), 1u);
}

TEST(McEnumerate, RefusesInfiniteField) {
    EXPECT_THROW(mc_enumerate(ground_coalgebra<Q>(), ground_category<Q>()), Error);
}

TEST(McEnumerate, MatchesBruteForceOnRandomInstances) {
    Rng rng(test_seed() + 4);
    for (int t = 0; t < 60; ++t) {
        auto c = random_coalgebra<F2>(rng, 3, t % 3 == 0);
        auto d = random_dg_category<F2>(rng, 3);
        EXPECT_EQ(mc_enumerate(c, d).size(), brute_force_mc_count(c, d));
    }
}

TEST(McCategory, GroundCoalgebraGivesTarget) {
    auto d = a2_category<F3>();
    auto m = mc_category(ground_coalgebra<F3>(), d);
    ASSERT_EQ(m.category.num_objects(), 2u);
    ASSERT_EQ(m.category.num_arrows(), d.num_arrows());
    for (std::size_t a = 0; a < d.num_arrows(); ++a)
        EXPECT_EQ(m.category.differential[a].is_zero(), d.differential[a].is_zero());
}

TEST(McCategory, ZeroTarget) {
    Rng rng(test_seed() + 5);
    auto m = mc_category(random_coalgebra<F2>(rng, 3), zero_category<F2>());
    EXPECT_TRUE(m.category.zero);
    EXPECT_EQ(m.objects.size(), 1u);
}

TEST(McCategory, TwistedDifferentialSquaresToZero) {
    Rng rng(test_seed() + 6);
    for (int t = 0; t < 40; ++t) {
        auto c = random_coalgebra<F3>(rng, 3, t % 2 == 0);
        auto d = random_dg_category<F3>(rng, 3);
        auto m = mc_category(c, d, mc_enumerate(c, d), false);
        auto r = validate_category(m.category);
        EXPECT_TRUE(r.ok) << r.failure;
        EXPECT_FALSE(m.category.is_curved());
    }
}

TEST(McCategory, DirectHomComplexMatchesFullCategory) {
    Rng rng(test_seed() + 16);
    std::size_t pairs = 0;
    for (int t = 0; t < 25; ++t) {
        auto c = random_coalgebra<F3>(rng, 3, t % 2 == 0);
        auto d = random_dg_category<F3>(rng, 3);
        auto m = mc_category(c, d, mc_enumerate(c, d), false);
        const std::size_t n = std::min<std::size_t>(m.objects.size(), 3);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) {
                EXPECT_EQ(mc_hom_homology(c, d, m.objects[i], m.objects[j], -2, 2), hom_homology(m.category, i, j, -2, 2));
                ++pairs;
            }
    }
    EXPECT_GT(pairs, 25u);
}

TEST(McCategory, RejectsNonMcObject) {
    auto c = primitive_coalgebra<F3>({-2}, {F3(1)});
    EXPECT_THROW(mc_category(c, ground_category<F3>(), {McElement<F3>{{0}, {Vec<F3>{}}}}), ValidationError);
}

TEST(McEnumerate, TwoStageMatchesTensor) {
    Rng rng(test_seed() + 7);
    for (int t = 0; t < 30; ++t) {
        auto c = random_coalgebra<F2>(rng, 2, t % 4 == 0);
        auto c2 = random_coalgebra<F2>(rng, 2, t % 3 == 0);
        auto d = random_dg_category<F2>(rng, 3, false, 1);
        EXPECT_EQ(mc_enumerate(tensor_coalgebras(c, c2), d).size(), mc_enumerate_two_stage(c, c2, d).size());
    }
}

TEST(InternalHom, Sentinels) {
    auto d = a2_category<F2>();
    auto c = primitive_coalgebra<F2>({-1});
    EXPECT_TRUE(internal_hom(c, zero_category<F2>()).bar.materialize(3).coalgebra.final);
    EXPECT_TRUE(internal_hom(zero_coalgebra<F2>(), d).bar.materialize(3).coalgebra.final);
    EXPECT_TRUE(internal_hom(final_coalgebra<F2>(), d).bar.materialize(3).coalgebra.is_zero());
}

TEST(Convolution, ReducedHasNoUnits) {
    // {C̄, D} for C = one primitive of degree 0 over F2: search degree-0 cycles of End(f) for a two-sided unit
    auto c = expand(primitive_coalgebra<F2>({0}), false);
    auto d = dual_numbers<F2>();
    auto conv = convolution_category(c, d);
    const auto& cat = conv.category;
    ASSERT_FALSE(cat.units.has_value());
    std::vector<Vec<F2>> deg0;
    for (auto a : cat.quiver.slot(0, 0, 0)) deg0.push_back(Vec<F2>::unit(a));
    std::size_t units_found = 0;
    for_each_combination<F2>(deg0, {}, [&](const Vec<F2>& u) {
        if (!cat.d(u).is_zero()) return;
        bool unit = true;
        for (std::size_t a = 0; a < cat.num_arrows() && unit; ++a) {
            Vec<F2> f = Vec<F2>::unit(a);
            unit = cat.compose(u, f) == f && cat.compose(f, u) == f;
        }
        if (unit) ++units_found;
    });
    EXPECT_EQ(units_found, 0u);
}

TEST(Adjunction, ZeroCochainCollapsesGenerators) {
    auto c = primitive_coalgebra<F2>({-1, -1});
    auto d = dual_numbers<F2>();
    auto f = functor_from_mc(c, d, McElement<F2>{{0}, std::vector<Vec<F2>>(2)});
    CobarConstruction<F2> omega(c);
    EXPECT_TRUE(check_cobar_functor(omega, d, f).ok);
    auto m = omega.materialize(3);
    auto F = materialized_functor(m, d, f);
    EXPECT_TRUE(validate_functor(F, m.category, d).ok);
    for (std::size_t a = m.category.num_objects(); a < m.category.num_arrows(); ++a)
        EXPECT_TRUE(F.arrow_map[a].is_zero());
}

TEST(Adjunction, CounitOfA2HitsTheArrow) {
    auto d = a2_category<F3>();
    BarConstruction<F3> bar(d);
    auto bd = bar.materialize(3);
    ASSERT_TRUE(bd.exact);
    McElement<F3> tau{{0, 1}, bar.counit_cochain(bd)};
    ASSERT_TRUE(mc_check(bd.coalgebra, d, tau).ok);
    CobarConstruction<F3> omega(bd.coalgebra);
    auto m = omega.materialize(4);
    auto F = materialized_functor(m, d, functor_from_mc(bd.coalgebra, d, tau));
    EXPECT_TRUE(validate_functor(F, m.category, d).ok);
    auto a = d.quiver.arrow_index("a");
    EXPECT_EQ(F.arrow_map[m.index.at(Word{0})], Vec<F3>::unit(a));
}

TEST(Adjunction, CounitCochainIsMcForRandomSplittings) {
    Rng rng(test_seed() + 8);
    for (int t = 0; t < 30; ++t) {
        auto d = random_dg_category<F3>(rng, 3);
        BarConstruction<F3> bar(d);
        auto bd = bar.materialize(3);
        std::vector<std::size_t> id(d.num_objects());
        for (std::size_t x = 0; x < id.size(); ++x) id[x] = x;
        EXPECT_TRUE(mc_check(bd.coalgebra, d, McElement<F3>{id, bar.counit_cochain(bd)}).ok);
    }
}

TEST(Adjunction, ThreeSetsAgreeOnRandomPairs) {
    Rng rng(test_seed() + 9);
    for (int t = 0; t < 40; ++t) {
        auto c = random_coalgebra<F2>(rng, 3, t % 3 == 0);
        auto d = random_dg_category<F2>(rng, 3);
        auto r = check_adjunction(c, d);
        EXPECT_TRUE(r.ok()) << r.functors << " " << r.mc_elements << " " << r.bar_morphisms << " "
                            << r.transports.failure;
    }
}

TEST(Counit, GroundCategory) {
    auto r = counit_comparison(ground_category<Q>(), -2, 2);
    EXPECT_FALSE(r.weight_graded);
    EXPECT_TRUE(r.match());
    EXPECT_EQ(r.omega_dims.at({0, 0}).at(0), 1u);
}

TEST(Counit, A2Category) {
    auto r = counit_comparison(a2_category<F3>(), -2, 1);
    EXPECT_FALSE(r.weight_graded);
    EXPECT_TRUE(r.match());
    EXPECT_EQ(r.omega_dims.at({0, 1}).at(0), 1u);
    EXPECT_EQ(r.omega_dims.at({1, 0}).at(0), 0u);
}

TEST(Counit, DualNumbersOverF3) {
    auto r = counit_comparison(dual_numbers<F3>(), -1, 1, 6);
    EXPECT_TRUE(r.weight_graded);
    EXPECT_TRUE(r.functor.ok) << r.functor.failure;
    EXPECT_EQ(r.omega_dims.at({0, 0}).at(0), 2u);
    EXPECT_EQ(r.target_dims.at({0, 0}).at(0), 2u);
    EXPECT_TRUE(r.match());
    EXPECT_TRUE(r.nonacyclic_pieces.empty());
}
