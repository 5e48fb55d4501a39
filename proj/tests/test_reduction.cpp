#include <catch2/catch_amalgamated.hpp>

#include <hpoisson/reduction.hpp>

#include "support/fixtures.hpp"
#include "support/oracle.hpp"

using namespace hpoisson;

namespace {

ReductionProblem lifted_problem(const fixtures::QuotientCase& c) {
    auto lift = cotangent_lift(c.hp.cotangent().base(), c.rho, c.b);
    const auto& cc = c.hp.cotangent();
    DeclaredQuotient dq{c.quotient.chart, {}};
    for (const auto& f : c.quotient.base_images) dq.images.push_back(cc.lift(f));
    for (const auto& f : c.quotient.momentum_images) dq.images.push_back(f);
    return {SymplecticQStructure::make(cc, c.hp.pi()), lift.action, lift.moment, dq};
}

ReductionError::Kind kind_of(const std::function<void()>& fn) {
    try {
        fn();
    } catch (const ReductionError& e) {
        return e.kind();
    }
    FAIL("expected ReductionError");
    return ReductionError::Kind::Shape;
}

} // namespace

TEST_CASE("cotangent lift", "[reduction][lift]") {
    CotangentChart cc(Chart::make({{"x", 0}, {"y", 0}}), 1);
    auto b = fixtures::line_algebra();

    auto zero = cotangent_lift(cc.base(), {Derivation::zero(cc.base(), 0)}, b);
    CHECK(zero.moment.images.front().is_zero());
    CHECK(zero.action.rho.front().is_zero());

    auto dy = cotangent_lift(cc.base(), {Derivation::partial(cc.base(), 1)}, b);
    CHECK(dy.moment.images.front() == dy.cc.p(1));
    CHECK(dy.action.rho.front() == hamiltonian_vf(dy.cc.p(1), dy.cc));
    // restricted to base functions the lift is the original vector field
    auto f = mul(dy.cc.x(0), dy.cc.x(1));
    CHECK(apply_derivation(dy.action.rho.front(), f) == dy.cc.x(0));

    // ax+b acting on R: u -> -x d/dx, v -> d/dx
    auto cg = zero_constants(2, 2, 2);
    cg[0][1][1] = 1;
    cg[1][0][1] = -1;
    auto aff = GradedLieAlgebra::make({{"u", 0}, {"v", 0}}, cg);
    HomotopyLieBialgebra ab(aff, 1, std::vector<Polynomial>(2, Polynomial(realize_shifted_dual(aff, 1).chart)));
    auto line = Chart::make({{"x", 0}});
    auto X = Polynomial::coordinate(line, 0);
    std::vector<Derivation> rho{Derivation(line, 0, {-X}), Derivation::partial(line, 0)};
    auto lifted = cotangent_lift(line, rho, ab);
    const auto& lc = lifted.cc;
    CHECK(lifted.moment.images[0] == -mul(lc.x(0), lc.p(0)));
    CHECK(lifted.moment.images[1] == lc.p(0));
    // {mu*u, mu*v} = mu*[u, v] = mu*v, expanded with the word oracle
    CHECK(oracle::bracket(lifted.moment.images[0], lifted.moment.images[1], lc) == lifted.moment.images[1]);
    CHECK(check_equivariance(lifted.moment, lc, ab).passed());

    std::vector<Derivation> wrong{Derivation(line, 0, {X}), Derivation::partial(line, 0)};
    CHECK(kind_of([&] { cotangent_lift(line, wrong, ab); }) == ReductionError::Kind::NotAction);
}

TEST_CASE("Q-morphism of the moment map", "[reduction][qmorphism]") {
    auto c = fixtures::r3_by_z();
    auto P = lifted_problem(c);
    CHECK(check_q_morphism_moment(P.moment, P.S, P.action.b).passed());

    auto bad = fixtures::non_invariant();
    auto Pb = lifted_problem(bad);
    auto rep = check_q_morphism_moment(Pb.moment, Pb.S, Pb.action.b);
    REQUIRE_FALSE(rep.passed());
    CHECK(rep.first_failure()->name == "v");
    // {x p_x p_y, p_x} = -p_x p_y
    const auto& cc = Pb.S.cotangent();
    CHECK(rep.first_failure()->residual == oracle::bracket(bad.hp.pi(), cc.p(0), cc));

    // dhat = 0 and Q(mu*v) = 0
    CotangentChart flat(Chart::make({{"x", 0}}), 1);
    auto S = SymplecticQStructure::make(flat, Polynomial(flat.chart()));
    MomentMap mm{{flat.p(0)}};
    CHECK(check_q_morphism_moment(mm, S, fixtures::line_algebra()).passed());
}

TEST_CASE("action morphism", "[reduction][action]") {
    // abelian g = <v1, v2> with dhat(v1) = v1 v2, acting on R^2 by d/dx, d/dy
    auto g = GradedLieAlgebra::make({{"v1", 0}, {"v2", 0}}, zero_constants(2, 2, 2));
    auto dual = realize_shifted_dual(g, 1);
    auto v1 = Polynomial::coordinate(dual.chart, 0), v2 = Polynomial::coordinate(dual.chart, 1);
    HomotopyLieBialgebra b(g, 1, {mul(v1, v2), Polynomial(dual.chart)});
    REQUIRE(check_bialgebra(b).valid());

    CotangentChart cc(Chart::make({{"x", 0}, {"y", 0}}), 1);
    std::vector<Derivation> rho{Derivation::partial(cc.base(), 0), Derivation::partial(cc.base(), 1)};

    auto zero = HomotopyPoissonStructure::make(cc, Polynomial(cc.chart()));
    auto r0 = check_action_morphism(rho, zero, b);
    CHECK_FALSE(r0.passed());
    CHECK(r0.first_failure()->name == "v1");

    // {pi, p_x} must be p_x p_y: pi = -x p_x p_y
    auto hp = HomotopyPoissonStructure::make(cc, -mul(mul(cc.x(0), cc.p(0)), cc.p(1)));
    CHECK(check_action_morphism(rho, hp, b).passed());

    // pi = 0, dhat with rho^(dhat v) = 0
    auto b0 = HomotopyLieBialgebra(g, 1, {Polynomial(dual.chart), Polynomial(dual.chart)});
    CHECK(check_action_morphism(rho, zero, b0).passed());

    // invariant pi and dhat = 0
    auto c = fixtures::r3_by_z();
    CHECK(check_action_morphism(c.rho, c.hp, c.b).passed());
}

TEST_CASE("linear ideals", "[reduction][ideal]") {
    CotangentChart cc(Chart::make({{"x", 0}, {"y", 0}}), 1);
    LinearIdeal I(cc.chart(), {cc.p(0) + cc.p(1)}, {"v"});
    CHECK(I.contains(cc.p(0) + cc.p(1)));
    CHECK(I.contains(mul(cc.x(0), cc.p(0) + cc.p(1))));
    CHECK_FALSE(I.contains(cc.p(0)));
    CHECK(I.normal_form(cc.p(0)) == -cc.p(1));

    CHECK(kind_of([&] { LinearIdeal(cc.chart(), {mul(cc.x(0), cc.p(1))}, {"v"}); }) == ReductionError::Kind::Regularity);
    CHECK(kind_of([&] { LinearIdeal(cc.chart(), {cc.p(0), Rational(2) * cc.p(0)}, {"v", "w"}); }) ==
          ReductionError::Kind::Regularity);
}

TEST_CASE("reduce: translation examples against restriction and projection", "[reduction][reduce]") {
    for (const auto& c : fixtures::quotient_cases()) {
        INFO(c.name);
        auto P = lifted_problem(c);
        auto R = reduce(P);
        const auto& qcc = c.quotient.chart;
        auto expected = oracle::restrict_project(c.hp.cotangent(), c.hp.pi(), c.killed, qcc);
        CHECK(R.reduced.Q().images() == expected);
        CHECK(commutator(R.reduced.Q(), R.reduced.Q()).is_zero());
        CHECK(bracket_derivation_failures(qcc.bracket(), R.reduced.Q()).empty());
        CHECK(R.action_rank == c.rho.size());
        for (const auto& [name, rep] : R.checks) CHECK(rep.passed());
    }

    auto z = fixtures::r3_by_z();
    auto Rz = reduce(lifted_problem(z));
    const auto& q = z.quotient.chart;
    CHECK(Rz.reduced.hamiltonian() == mul(mul(q.x(0), q.p(0)), q.p(1)));

    auto y = fixtures::r2_by_y();
    CHECK(reduce(lifted_problem(y)).reduced.Q().is_zero());

    auto t = fixtures::trivial_group();
    auto Rt = reduce(lifted_problem(t));
    CHECK(Rt.reduced.hamiltonian() == t.hp.pi().rebased(t.quotient.chart.chart()));
}

TEST_CASE("reduce: failures", "[reduction][reduce]") {
    using K = ReductionError::Kind;
    SECTION("Q-invariance") {
        // x p_x p_y is not invariant under d/dx, yet {pi, p_x} = -p_x p_y lies in (p_x)
        CHECK_NOTHROW(reduce(lifted_problem(fixtures::non_invariant())));
        // {x p_y p_z, p_x} = -p_y p_z does not
        auto c = fixtures::translation_case("bad", {{"x", 0}, {"y", 0}, {"z", 0}},
                                            [](const CotangentChart& cc) { return mul(mul(cc.x(0), cc.p(1)), cc.p(2)); }, 0);
        auto P = lifted_problem(c);
        CHECK(kind_of([&] { reduce(P); }) == K::QInvariance);
    }
    SECTION("non-invariant declared coordinate") {
        auto c = fixtures::r3_by_z();
        auto P = lifted_problem(c);
        P.quotient.images[0] = Polynomial::coordinate(P.S.chart(), "z");
        CHECK(kind_of([&] { reduce(P); }) == K::Invariance);
    }
    SECTION("declared coordinates with the wrong bracket") {
        auto c = fixtures::r3_by_z();
        auto P = lifted_problem(c);
        P.quotient.images[2] = Rational(2) * P.quotient.images[2];
        CHECK(kind_of([&] { reduce(P); }) == K::BracketMismatch);
    }
    SECTION("non-flat bialgebra") {
        auto c = fixtures::r3_by_z();
        auto P = lifted_problem(c);
        // a constant dhat(w) needs |w| + 1 = -1
        auto g = GradedLieAlgebra::make({{"w", -2}}, zero_constants(1, 1, 1));
        auto dual = realize_shifted_dual(g, 1);
        P.action.b = HomotopyLieBialgebra(g, 1, {Polynomial::constant(dual.chart, 1)});
        CHECK(kind_of([&] { reduce(P); }) == K::NotFlat);
    }
    SECTION("regularity") {
        CotangentChart cc(Chart::make({{"x", 0}, {"y", 0}}), 1);
        auto hp = HomotopyPoissonStructure::make(cc, Polynomial(cc.chart()));
        // rotation-like field x d/dy has symbol x p_y, not a coordinate
        std::vector<Derivation> rho{Derivation(cc.base(), 0, {Polynomial(cc.base()), Polynomial::coordinate(cc.base(), 0)})};
        auto lift = cotangent_lift(cc.base(), rho, fixtures::line_algebra());
        ReductionProblem P{SymplecticQStructure::make(cc, hp.pi()), lift.action, lift.moment, identity_quotient(cc)};
        CHECK(kind_of([&] { reduce(P); }) == K::Regularity);
    }
    SECTION("not homological") {
        auto c3 = CotangentChart(Chart::make({{"x", 0}, {"y", 0}, {"z", 0}}), 1);
        auto bent = mul(mul(c3.x(0), c3.p(0)), c3.p(1)) + mul(mul(c3.x(2), c3.p(0)), c3.p(2)) +
                    mul(mul(c3.x(0), c3.p(1)), c3.p(2));
        if (!check_master_equation(c3, bent).holds)
            CHECK(kind_of([&] { SymplecticQStructure::make(c3, bent); }) == K::NotHomological);
    }
}

TEST_CASE("quotient theorem: two paths agree", "[reduction][theorem]") {
    for (const auto& c : fixtures::quotient_cases()) {
        INFO(c.name);
        auto rep = verify_quotient_theorem(c.hp, c.rho, c.b, c.quotient);
        CHECK(rep.agree());
        CHECK(rep.closure.passed());
        CHECK(rep.action_morphism.passed());
        CHECK(rep.pushed == rep.reduced.reduced.hamiltonian());
    }
    auto qp = verify_quotient_theorem(fixtures::qp_mixed().hp, fixtures::qp_mixed().rho, fixtures::qp_mixed().b,
                                      fixtures::qp_mixed().quotient);
    const auto& q = fixtures::qp_mixed().quotient.chart;
    CHECK(qp.pushed == mul(q.x(0), q.p(1)));

    auto bad = fixtures::non_invariant();
    CHECK(kind_of([&] { verify_quotient_theorem(bad.hp, bad.rho, bad.b, bad.quotient); }) ==
          ReductionError::Kind::ActionMorphism);
}
