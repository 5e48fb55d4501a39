// Acceptance checks. `acceptance N` runs criterion N, `acceptance` runs all of them.
// Each criterion prints one PASS/FAIL line; the exit status is 0 iff every criterion run passed.

#include <hpoisson/format.hpp>

#include "support/cli.hpp"
#include "support/fixtures.hpp"
#include "support/generators.hpp"
#include "support/oracle.hpp"

#include <cstdlib>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>

using namespace hpoisson;

namespace {

struct Outcome {
    bool pass = true;
    std::string summary;
};

/// Counts checks and keeps the first few failure descriptions.
struct Tally {
    long checks = 0;
    long failures = 0;
    std::vector<std::string> notes;

    void check(bool ok, const std::string& what) {
        ++checks;
        if (ok) return;
        ++failures;
        if (notes.size() < 3) notes.push_back(what);
    }
    std::string text() const {
        std::string s = std::to_string(checks) + " checks, " + std::to_string(failures) + " failures";
        for (const auto& n : notes) s += "; " + n;
        return s;
    }
};

Rational sign(bool odd) { return odd ? Rational(-1) : Rational(1); }

using Tensor = std::vector<std::vector<std::vector<Rational>>>;

Tensor zero_tensor(std::size_t d) { return Tensor(d, std::vector<std::vector<Rational>>(d, std::vector<Rational>(d, 0))); }

CotangentChart ordinary(std::size_t d) {
    std::vector<Coordinate> cs;
    for (std::size_t i = 0; i < d; ++i) cs.push_back({"x" + std::to_string(i), 0});
    return CotangentChart(Chart::make(cs), 1);
}

Polynomial linear_bivector(const CotangentChart& cc, const Tensor& c) {
    Polynomial pi(cc.chart());
    for (std::size_t i = 0; i < c.size(); ++i)
        for (std::size_t j = i + 1; j < c.size(); ++j)
            for (std::size_t k = 0; k < c.size(); ++k)
                if (c[i][j][k] != 0) pi += c[i][j][k] * mul(mul(cc.x(k), cc.p(i)), cc.p(j));
    return pi;
}

Tensor so3_constants() {
    Tensor c = zero_tensor(3);
    auto set = [&](int i, int j, int k) {
        c[i][j][k] = 1;
        c[j][i][k] = -1;
    };
    set(1, 2, 0);
    set(2, 0, 1);
    set(0, 1, 2);
    return c;
}

/// Terms of f with exactly `ell` momentum factors.
Polynomial fiber_part(const Polynomial& f, const CotangentChart& cc, int ell) {
    Polynomial out(f.chart());
    for (const auto& [e, c] : f.terms()) {
        int k = 0;
        for (std::size_t i = cc.base_size(); i < e.size(); ++i) k += e[i];
        if (k == ell) out.add_term(e, c);
    }
    return out;
}

// 1. graded commutative kernel
Outcome criterion1() {
    Tally t;
    gen::Rng rng(1001);
    for (int trial = 0; trial < 1000; ++trial) {
        auto c = gen::random_chart(rng, 6, -3, 3);
        auto a = gen::random_homogeneous(rng, c, 2, 3);
        auto b = gen::random_homogeneous(rng, c, 2, 3);
        auto d = gen::random_homogeneous(rng, c, 1, 3);
        const int da = a.degree().value_or(0), db = b.degree().value_or(0);
        auto ab = mul(a, b);
        t.check(ab == oracle::mul(a, b), "product differs from the word oracle");
        t.check(ab == sign(is_odd(da * db)) * mul(b, a), "graded commutativity");
        t.check(mul(ab, d) == mul(a, mul(b, d)), "associativity");
        t.check(mul(ab, d) == oracle::mul(oracle::mul(a, b), d), "triple product differs from the oracle");
        t.check(ab.is_homogeneous(da + db), "degree additivity");

        const int deg = gen::uniform(rng, -2, 2);
        std::vector<Polynomial> images;
        for (std::size_t i = 0; i < c->size(); ++i) images.push_back(gen::random_of_degree(rng, c, c->degree(i) + deg));
        Derivation D(c, deg, images);
        auto lhs = apply_derivation(D, ab);
        auto rhs = mul(apply_derivation(D, a), b) + sign(is_odd(deg * da)) * mul(a, apply_derivation(D, b));
        t.check(lhs == rhs, "Leibniz rule");
    }
    return {t.failures == 0, "1000 random triples: " + t.text()};
}

// 2. canonical bracket
Outcome criterion2() {
    Tally t;
    gen::Rng rng(2002);
    for (int n = 1; n <= 3; ++n) {
        for (int trial = 0; trial < 500; ++trial) {
            CotangentChart cc(gen::random_chart(rng, 3, -2, 3, "x"), n);
            const auto& c = cc.chart();
            auto a = gen::random_homogeneous(rng, c, 2, 3);
            auto b = gen::random_homogeneous(rng, c, 2, 3);
            auto d = gen::random_homogeneous(rng, c, 1, 2);
            const int da = a.degree().value_or(0), db = b.degree().value_or(0);
            auto ab = canonical_bracket(a, b, cc);
            t.check(ab == oracle::bracket(a, b, cc), "bracket differs from the expansion oracle");
            t.check(ab == -sign(is_odd((da - n) * (db - n))) * canonical_bracket(b, a, cc), "graded antisymmetry");
            t.check(ab.is_homogeneous(da + db - n), "degree law");
            auto jl = canonical_bracket(a, canonical_bracket(b, d, cc), cc);
            auto jr = canonical_bracket(ab, d, cc) + sign(is_odd((da - n) * (db - n))) * canonical_bracket(b, canonical_bracket(a, d, cc), cc);
            t.check(jl == jr, "graded Jacobi");
            auto left = canonical_bracket(a, mul(b, d), cc);
            t.check(left == mul(ab, d) + sign(is_odd((da - n) * db)) * mul(b, canonical_bracket(a, d, cc)), "derivation in the second slot");
            const int dd = d.degree().value_or(0);
            auto right = canonical_bracket(mul(a, b), d, cc);
            t.check(right == mul(a, canonical_bracket(b, d, cc)) + sign(is_odd(db * (dd - n))) * mul(canonical_bracket(a, d, cc), b),
                    "derivation in the first slot");
        }
    }
    return {t.failures == 0, "1500 random triples over n = 1, 2, 3: " + t.text()};
}

// 3. structures and differentials correspond
Outcome criterion3() {
    Tally t;
    gen::Rng rng(3003);
    int curved = 0, cases = 0;
    for (int n = 1; n <= 2; ++n) {
        for (int trial = 0; trial < 50; ++trial) {
            // the first half of each shift is drawn until pi_0 is nonzero
            Polynomial pi;
            CotangentChart cc;
            for (int attempt = 0; attempt < 200; ++attempt) {
                cc = CotangentChart(gen::random_chart(rng, 4, -1, 3, "x"), n);
                pi = gen::random_split_structure(rng, cc, {0, 1, 2, 3});
                if (trial >= 25 || !component(pi, cc, 0).is_zero()) break;
            }
            ++cases;
            if (!component(pi, cc, 0).is_zero()) ++curved;
            auto hp = HomotopyPoissonStructure::make(cc, pi);
            auto back = from_differential(cc, differential(hp));
            for (int ell = 0; ell <= 3; ++ell)
                t.check(fiber_part(back.pi(), cc, ell) == fiber_part(pi, cc, ell), "component " + std::to_string(ell) + " not recovered");
            t.check(back == hp, "round trip");
        }
    }
    t.check(curved >= 20, "fewer than 20 cases with pi_0 != 0");
    return {t.failures == 0, std::to_string(cases) + " structures, " + std::to_string(curved) + " with pi_0 != 0: " + t.text()};
}

// 4. classical Poisson structures
Outcome criterion4() {
    Tally t;
    gen::Rng rng(4004);
    int trials = 0, poisson = 0;
    for (std::size_t d : {3u, 4u}) {
        auto cc = ordinary(d);
        for (int trial = 0; trial < 200; ++trial) {
            Tensor c = zero_tensor(d);
            for (std::size_t i = 0; i < d; ++i)
                for (std::size_t j = i + 1; j < d; ++j)
                    for (std::size_t k = 0; k < d; ++k)
                        if (gen::uniform(rng, 0, 4) == 0) {
                            c[i][j][k] = gen::uniform(rng, -2, 2);
                            c[j][i][k] = -c[i][j][k];
                        }
            const bool expect = oracle::linear_jacobiator_vanishes(c);
            t.check(check_master_equation(cc, linear_bivector(cc, c)).holds == expect, "verdict differs from the Jacobiator");
            ++trials;
            if (expect) ++poisson;
        }
    }
    auto c3 = ordinary(3);
    t.check(check_master_equation(c3, linear_bivector(c3, so3_constants())).holds, "so(3) fails");

    // every single-constant perturbation of so(3)
    int perturbed = 0, failing = 0, agree = 0;
    std::string survivors;
    for (int i = 0; i < 3; ++i)
        for (int j = i + 1; j < 3; ++j)
            for (int k = 0; k < 3; ++k) {
                Tensor c = so3_constants();
                c[i][j][k] += 1;
                c[j][i][k] -= 1;
                const bool holds = check_master_equation(c3, linear_bivector(c3, c)).holds;
                ++perturbed;
                if (holds == oracle::linear_jacobiator_vanishes(c)) ++agree;
                if (!holds) ++failing;
                else survivors += (survivors.empty() ? "" : ", ") + std::string("c[") + std::to_string(i) + "][" +
                                  std::to_string(j) + "][" + std::to_string(k) + "]";
            }
    t.check(agree == perturbed, "perturbation verdict differs from the Jacobiator");
    std::string s = std::to_string(trials) + " random bivectors (" + std::to_string(poisson) + " Poisson), " + t.text() +
                    "; " + std::to_string(failing) + " of " + std::to_string(perturbed) +
                    " so(3) perturbations fail the master equation";
    const bool all_fail = failing == perturbed;
    if (!all_fail) s += "; still Poisson after perturbing " + survivors + " (the Jacobiator oracle agrees)";
    return {t.failures == 0 && all_fail, s};
}

// 5. master equation by components
Outcome criterion5() {
    Tally t;
    gen::Rng rng(5005);
    int holds = 0;
    for (int trial = 0; trial < 100; ++trial) {
        const int n = 1 + trial % 2;
        CotangentChart cc(gen::random_chart(rng, 3, -1, 3, "x"), n);
        std::vector<Exponents> pool;
        auto by_deg = gen::monomials_by_degree(*cc.chart(), 2);
        for (const auto& e : by_deg[n + 1])
            if (cc.fiber_degree(e) <= 2) pool.push_back(e);
        auto pi = gen::from_monomials(rng, cc.chart(), pool, 4);
        auto rep = check_component_identities(cc, pi);
        auto full = oracle::bracket(pi, pi, cc);
        t.check(rep.identities.size() == 4, "expected four identities");
        std::vector<bool> seen(4, false);
        for (const auto& id : rep.identities) {
            t.check(id.residual == fiber_part(full, cc, id.fiber_degree), id.name + " residual differs from its component");
            if (id.fiber_degree >= 0 && id.fiber_degree < 4) seen[static_cast<std::size_t>(id.fiber_degree)] = true;
        }
        t.check(seen == std::vector<bool>(4, true), "identities do not cover components 0..3");
        t.check(rep.all_hold() == full.is_zero(), "verdict");
        if (full.is_zero()) ++holds;
    }
    return {t.failures == 0, "100 random candidates (" + std::to_string(holds) + " solutions): " + t.text()};
}

GradedLieAlgebra affine() {
    auto c = zero_constants(2, 2, 2);
    c[0][1][1] = 1;
    c[1][0][1] = -1;
    return GradedLieAlgebra::make({{"u", 0}, {"v", 0}}, c);
}

CourantAlgebraData semidirect(bool antisymmetrized) {
    CourantAlgebraData c;
    c.g = affine();
    c.a_names = {"U", "V", "w"};
    c.a_bracket = zero_constants(3, 3, 3);
    c.a_bracket[0][1][1] = 1;
    c.a_bracket[1][0][1] = -1;
    c.a_bracket[0][2][2] = 1;
    if (antisymmetrized) c.a_bracket[2][0][2] = -1;
    c.p = {{1, 0, 0}, {0, 1, 0}};
    return c;
}

// 6. Courant algebras give DGLAs
Outcome criterion6() {
    Tally t;
    auto c = semidirect(false);
    auto out = courant_to_dgla(c);
    auto rep = check_dgla(out.algebra, out.differential);
    t.check(rep.jacobi.holds, "graded Jacobi");
    t.check(rep.square_zero, "differential squares to zero");
    t.check(rep.degree_one, "differential of degree 1");
    t.check(rep.leibniz_failures.empty(), "bracket derivation");
    for (int n = 1; n <= 3; ++n) t.check(check_bialgebra(dgla_bialgebra(out.algebra, out.differential, n)).valid(), "dual bialgebra");

    // lifts of u and v differ from the canonical ones by multiples of the kernel vector w
    int lifts = 0;
    for (int a = -3; a <= 3; ++a)
        for (int b = -3; b <= 3; ++b)
            for (int den = 1; den <= 2; ++den) {
                std::vector<Vector> l{{1, 0, make_rational(a, den)}, {0, 1, make_rational(b, den)}};
                auto other = courant_to_dgla(c, l);
                t.check(other.algebra == out.algebra && other.differential == out.differential, "lift dependence");
                ++lifts;
            }

    bool rejected = false;
    std::string witness;
    try {
        courant_to_dgla(semidirect(true));
    } catch (const CourantError& e) {
        rejected = e.kind() == CourantError::Kind::NotLeftCentral;
        const auto& w = e.witness();
        // witness (kernel vector, element): [[w, U]] must be nonzero in the data
        auto anti = semidirect(true);
        auto ker = courant_kernel(anti);
        bool ok = w.size() == 2 && w[0] < ker.size() && w[1] < anti.a_names.size();
        if (ok) {
            Vector br(anti.a_names.size(), 0);
            for (std::size_t i = 0; i < ker[w[0]].size(); ++i)
                for (std::size_t k = 0; k < br.size(); ++k) br[k] += ker[w[0]][i] * anti.a_bracket[i][w[1]][k];
            ok = !is_zero_vector(br);
            witness = anti.a_names[w[1]];
        }
        t.check(ok, "witness does not exhibit a non-central bracket");
    }
    t.check(rejected, "antisymmetrized fixture accepted");
    return {t.failures == 0, "DGLA of dimension " + std::to_string(out.algebra.dim()) + ", " + std::to_string(lifts) +
                                 " lift choices, antisymmetrized fixture rejected at [[h1, " + witness + "]]: " + t.text()};
}

// Calls fn with every assignment of {-1, 0, 1} to the slots.
void enumerate(std::vector<Rational*> slots, const std::function<void()>& fn, std::size_t at = 0) {
    if (at == slots.size()) {
        fn();
        return;
    }
    for (int v = -1; v <= 1; ++v) {
        *slots[at] = v;
        enumerate(slots, fn, at + 1);
    }
}

MatchedPairData pair_of(const GradedLieAlgebra& g, std::size_t r, const StructureConstants& f, const StructureConstants& R,
                        const StructureConstants& S) {
    MatchedPairData mp{g, {}, f, R, S};
    for (std::size_t i = 0; i < r; ++i) mp.h_names.push_back("h" + std::to_string(i + 1));
    return mp;
}

bool verdict_of(const MatchedPairData& mp) {
    try {
        return is_matched_pair(mp);
    } catch (const Error&) {
        return false; // the action data is not even a Lie algebra action
    }
}

// 7. matched pairs
Outcome criterion7() {
    Tally t;
    int cases = 0, valid = 0;
    auto run = [&](const GradedLieAlgebra& g, std::size_t r, StructureConstants& f, StructureConstants& R, StructureConstants& S,
                   std::vector<Rational*> slots) {
        enumerate(slots, [&] {
            const bool got = verdict_of(pair_of(g, r, f, R, S));
            t.check(got == oracle::matched_pair(g.constants(), f, R, S), "verdict differs from the matched pair oracle");
            ++cases;
            if (got) ++valid;
        });
    };

    // dim g = dim h* = 1
    auto line = GradedLieAlgebra::make({{"x", 0}}, zero_constants(1, 1, 1));
    auto f1 = zero_constants(1, 1, 1), R1 = zero_constants(1, 1, 1), S1 = zero_constants(1, 1, 1);
    run(line, 1, f1, R1, S1, {&R1[0][0][0], &S1[0][0][0]});

    // ax+b acting on a line
    auto aff = affine();
    auto f2 = zero_constants(1, 1, 1), R2 = zero_constants(2, 1, 1), S2 = zero_constants(1, 2, 2);
    run(aff, 1, f2, R2, S2, {&R2[0][0][0], &R2[1][0][0], &S2[0][0][0], &S2[0][0][1], &S2[0][1][0], &S2[0][1][1]});

    // a line acting on h with h* = ax+b
    auto f3 = zero_constants(2, 2, 2);
    f3[0][1][1] = 1;
    f3[1][0][1] = -1;
    auto R3 = zero_constants(1, 2, 2), S3 = zero_constants(2, 1, 1);
    run(line, 2, f3, R3, S3, {&R3[0][0][0], &R3[0][0][1], &R3[0][1][0], &R3[0][1][1], &S3[0][0][0], &S3[1][0][0]});

    t.check(valid > 0 && valid < cases, "enumeration does not exercise both verdicts");
    return {t.failures == 0, std::to_string(cases) + " enumerated cases (" + std::to_string(valid) + " matched pairs): " + t.text()};
}

ReductionProblem lifted_problem(const fixtures::QuotientCase& c) {
    auto lift = cotangent_lift(c.hp.cotangent().base(), c.rho, c.b);
    const auto& cc = c.hp.cotangent();
    DeclaredQuotient dq{c.quotient.chart, {}};
    for (const auto& f : c.quotient.base_images) dq.images.push_back(cc.lift(f));
    for (const auto& f : c.quotient.momentum_images) dq.images.push_back(f);
    return {SymplecticQStructure::make(cc, c.hp.pi()), lift.action, lift.moment, dq};
}

// 8. reduction
Outcome criterion8() {
    Tally t;
    using format::render;

    auto z = fixtures::r3_by_z();
    auto Rz = reduce(lifted_problem(z));
    const auto& q = z.quotient.chart;
    auto expected = oracle::restrict_project(z.hp.cotangent(), z.hp.pi(), z.killed, q);
    const auto& got = Rz.reduced.Q().images();
    t.check(got.size() == expected.size(), "R3/dz: image count");
    for (std::size_t i = 0; i < std::min(got.size(), expected.size()); ++i)
        t.check(render(got[i]) == render(expected[i]), "R3/dz: image of " + (*q.chart())[i].name);
    t.check(Rz.reduced.Q() == hamiltonian_vf(mul(mul(q.x(0), q.p(0)), q.p(1)), q), "R3/dz: not the field of x p_x p_y");

    auto y = fixtures::r2_by_y();
    t.check(reduce(lifted_problem(y)).reduced.Q().is_zero(), "R2/dy: reduced field is not zero");

    int agreeing = 0;
    auto cases = fixtures::quotient_cases();
    for (const auto& c : cases) {
        auto rep = verify_quotient_theorem(c.hp, c.rho, c.b, c.quotient);
        t.check(rep.agree(), c.name + ": quotient paths disagree");
        if (rep.agree()) ++agreeing;
    }

    auto bad = fixtures::non_invariant();
    auto Pb = lifted_problem(bad);
    auto rep = check_q_morphism_moment(Pb.moment, Pb.S, Pb.action.b);
    const auto* fail = rep.first_failure();
    t.check(fail != nullptr, "non-invariant fixture passes the Q-morphism check");
    std::string named = fail ? fail->name : "none";
    t.check(named == "v", "failure names " + named + " instead of v");
    if (fail) {
        const auto& cc = Pb.S.cotangent();
        t.check(fail->residual == oracle::bracket(bad.hp.pi(), cc.p(0), cc), "residual differs from {pi, p_x}");
    }
    return {t.failures == 0, "R3/dz gives " + render(Rz.reduced.hamiltonian()) + ", R2/dy gives 0, " + std::to_string(agreeing) +
                                 "/" + std::to_string(cases.size()) + " quotient fixtures agree, non-invariant fixture fails at " +
                                 named + ": " + t.text()};
}

// 9. command line
Outcome criterion9() {
    Tally t;
    const auto all = cli::all_fixtures();
    for (const auto& p : all) {
        try {
            auto d = format::parse(cli::read(p));
            auto text = format::render(d);
            t.check(format::parse(text) == d && format::render(format::parse(text)) == text, p.filename().string() + " round trip");
        } catch (const std::exception& e) {
            t.check(false, p.filename().string() + ": " + e.what());
        }
    }
    const auto pass = cli::fixtures("pass");
    for (const auto& p : pass) t.check(cli::run("check " + cli::quote(p)).status == 0, p.filename().string() + " does not exit 0");
    const auto fail = cli::fixtures("fail");
    for (const auto& p : fail) {
        auto o = cli::run("check " + cli::quote(p));
        t.check(o.status == 1, p.filename().string() + " does not exit 1");
        auto names = cli::expected_failures(cli::read(p));
        t.check(!names.empty(), p.filename().string() + " has no expect-fail annotation");
        for (const auto& n : names) t.check(o.out.find("FAIL " + n + "\n") != std::string::npos, p.filename().string() + " does not name " + n);
    }

    std::vector<std::string> corpus;
    for (const auto& p : all) corpus.push_back(cli::read(p));
    std::mt19937_64 rng(9009);
    int parsed = 0, rejected = 0;
    for (int i = 0; i < 10000; ++i) {
        auto o = cli::fuzz_one(cli::fuzz_input(rng, corpus));
        t.check(o != cli::FuzzOutcome::Escaped, "fuzz input escaped the parser");
        (o == cli::FuzzOutcome::Parsed ? parsed : rejected)++;
    }
    return {t.failures == 0, std::to_string(all.size()) + " fixtures round-trip, " + std::to_string(pass.size()) + " pass and " +
                                 std::to_string(fail.size()) + " designed-to-fail documents, 10000 fuzz inputs (" +
                                 std::to_string(parsed) + " parsed, " + std::to_string(rejected) + " rejected): " + t.text()};
}

} // namespace

int main(int argc, char** argv) {
    const std::vector<std::function<Outcome()>> criteria = {criterion1, criterion2, criterion3, criterion4, criterion5,
                                                           criterion6, criterion7, criterion8, criterion9};
    std::vector<int> which;
    if (argc > 1) {
        for (int i = 1; i < argc; ++i) {
            int k = std::atoi(argv[i]);
            if (k < 1 || k > 9) {
                std::cerr << "usage: acceptance [1-9 ...]\n";
                return 2;
            }
            which.push_back(k);
        }
    } else {
        for (int k = 1; k <= 9; ++k) which.push_back(k);
    }
    bool ok = true;
    for (int k : which) {
        Outcome o;
        try {
            o = criteria[static_cast<std::size_t>(k - 1)]();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        std::cout << (o.pass ? "PASS" : "FAIL") << " criterion " << k << ": " << o.summary << std::endl;
        ok = ok && o.pass;
    }
    return ok ? 0 : 1;
}
