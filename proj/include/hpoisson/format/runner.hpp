#pragma once

#include "document.hpp"
#include "render.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <thread>
#include <vector>

namespace hpoisson::format {

enum class Verdict { Pass, Fail, Error };

inline std::string to_string(Verdict v) {
    switch (v) {
    case Verdict::Pass: return "PASS";
    case Verdict::Fail: return "FAIL";
    case Verdict::Error: return "ERROR";
    }
    return "ERROR";
}

struct TaskResult {
    std::string task;
    Verdict verdict = Verdict::Error;
    std::string residual; // canonical rendering, "0" when nothing is left over
    std::string details;
    double time_ms = 0;
    bool degree_limit_hit = false;
};

struct RunOptions {
    std::optional<int> max_degree;
    std::optional<std::uint64_t> seed;
    unsigned threads = 0; // 0: hardware concurrency
};

namespace detail {

inline TaskResult verdict(bool ok, std::string residual, std::string details) {
    return {"", ok ? Verdict::Pass : Verdict::Fail, std::move(residual), std::move(details)};
}

inline std::string pair_list(const std::vector<std::pair<std::size_t, std::size_t>>& ps, const Chart& chart) {
    std::string s;
    for (const auto& [i, j] : ps) s += (s.empty() ? "" : ", ") + std::string("(") + chart[i].name + ", " + chart[j].name + ")";
    return s;
}

class TaskRunner {
public:
    TaskRunner(const Document& doc, const RunOptions& opts) : doc_(doc), opts_(opts) {}

    TaskResult operator()(const Task& t) const {
        const auto& k = t.kind;
        if (k == "CHECK-HP") return check_hp(t);
        if (k == "BRACKET") return bracket(t);
        if (k == "DERIVED") return derived(t);
        if (k == "CHECK-BIALG") return check_bialg(t);
        if (k == "COURANT2DGLA") return courant(t);
        if (k == "MATCHED2BIALG") return matched(t);
        if (k == "CHECK-ACTION") return check_action_task(t);
        if (k == "REDUCE") return reduce_task(t);
        if (k == "CHECK-QMOMENT") return qmoment(t);
        if (k == "VERIFY-QUOTIENT") return verify_quotient(t);
        throw Error("unknown task kind " + k);
    }

private:
    const Document& doc_;
    const RunOptions& opts_;

    template <class T>
    const T& get(const std::string& name) const {
        const T* x = doc_.find_as<T>(name);
        if (!x) throw Error("'" + name + "' is not declared with the expected kind");
        return *x;
    }
    const CotangentChart& cotangent_of(const std::string& space) const { return get<CotangentDecl>(space).cc; }

    // d^2 f = 0 for random polynomials f; implied by the master equation.
    std::string seeded_square_check(const CotangentChart& cc, const Polynomial& pi) const {
        std::mt19937_64 rng(*opts_.seed);
        const Derivation D = differential(cc, pi);
        const ChartPtr& chart = cc.chart();
        std::uniform_int_distribution<int> coef(-3, 3);
        std::uniform_int_distribution<std::size_t> pick(0, chart->size() - 1);
        constexpr int samples = 8;
        int bad = 0;
        for (int s = 0; s < samples; ++s) {
            Polynomial f(chart);
            for (int t = 0; t < 3; ++t) {
                Polynomial m = Polynomial::constant(chart, coef(rng));
                for (int r = 0; r < 2; ++r) m = mul(m, Polynomial::coordinate(chart, pick(rng)));
                f += m;
            }
            for (const auto& [d, part] : f.homogeneous_components())
                if (!apply_derivation(D, apply_derivation(D, part)).is_zero()) ++bad;
        }
        return "; seeded check: d^2 f = 0 " + std::string(bad ? "fails" : "holds") + " on " + std::to_string(samples) +
               " random polynomials";
    }

    TaskResult check_hp(const Task& t) const {
        const auto& hp = get<HomotopyPoissonDecl>(t.args[0]);
        const auto& cc = cotangent_of(hp.space);
        auto res = check_master_equation(cc, hp.pi);
        std::string details = res.holds ? "{pi, pi} = 0; class " + hpoisson::to_string(classify(cc, hp.pi))
                                        : "{pi, pi} does not vanish";
        if (res.holds && opts_.seed && cc.chart()->size() > 0) details += seeded_square_check(cc, hp.pi);
        return verdict(res.holds, render(res.residual), details);
    }

    TaskResult bracket(const Task& t) const {
        const auto& a = get<PolyDecl>(t.args[0]);
        const auto& b = get<PolyDecl>(t.args[1]);
        Polynomial v = canonical_bracket(a.value, b.value, cotangent_of(a.space));
        return verdict(true, render(v), "{" + a.name + ", " + b.name + "}");
    }

    TaskResult derived(const Task& t) const {
        const auto& hp = get<HomotopyPoissonDecl>(t.args[0]);
        std::vector<Polynomial> fs;
        for (std::size_t i = 2; i < t.args.size(); ++i) fs.push_back(get<PolyDecl>(t.args[i]).value);
        Polynomial v = derived_bracket(cotangent_of(hp.space), hp.pi, fs);
        return verdict(true, render(v), "derived bracket of arity " + t.args[1]);
    }

    TaskResult check_bialg(const Task& t) const {
        const auto& b = get<BialgebraDecl>(t.args[0]).bialgebra;
        auto r = check_bialgebra(b);
        std::string d;
        auto add = [&](bool ok, const std::string& what) {
            if (!ok) d += (d.empty() ? "" : "; ") + what;
        };
        add(r.jacobi, "bracket fails graded Jacobi");
        add(r.degree_one, "differential is not of degree 1");
        add(r.square_zero, "differential does not square to zero");
        add(r.leibniz_failures.empty(), "not a bracket derivation at " + pair_list(r.leibniz_failures, *b.chart()));
        return verdict(r.valid(), r.square_zero ? "0" : render(r.square), d.empty() ? "homotopy Lie bialgebra" : d);
    }

    TaskResult courant(const Task& t) const {
        const auto& c = get<CourantDecl>(t.args[0]).data;
        try {
            CourantDGLA D = courant_to_dgla(c);
            auto r = check_dgla(D.algebra, D.differential);
            std::string d = "DGLA of dimension " + std::to_string(D.algebra.dim()) + " with kernel of dimension " +
                            std::to_string(D.kernel_basis.size());
            if (!r.jacobi.holds) d += "; graded Jacobi fails";
            if (!r.degree_one) d += "; differential is not of degree 1";
            if (!r.square_zero) d += "; differential does not square to zero";
            if (!r.leibniz_failures.empty()) d += "; not a bracket derivation";
            std::vector<std::string> names;
            for (const auto& b : D.algebra.basis()) names.push_back(b.name);
            return verdict(r.valid(), r.jacobi.holds ? "0" : render(r.jacobi.residual, names), d);
        } catch (const CourantError& e) {
            std::string w;
            for (auto i : e.witness()) w += (w.empty() ? "" : ", ") + std::to_string(i);
            return verdict(false, "0", std::string(e.what()) + " (witness " + w + ")");
        }
    }

    TaskResult matched(const Task& t) const {
        const auto& m = get<MatchedPairDecl>(t.args[0]).data;
        try {
            auto r = matched_pair_to_bialgebra(m);
            const bool ok = r.report.valid();
            return verdict(ok, r.report.square_zero ? "0" : render(r.report.square),
                           ok ? "matched pair" : "the double is not a homotopy Lie bialgebra");
        } catch (const Error& e) {
            return verdict(false, "0", e.what());
        }
    }

    TaskResult check_action_task(const Task& t) const {
        const auto& a = get<ActionDecl>(t.args[0]);
        try {
            check_action({get<BialgebraDecl>(a.by).bialgebra, a.rho});
            return verdict(true, "0", "infinitesimal action");
        } catch (const ReductionError& e) {
            return verdict(false, "0", e.what());
        }
    }

    struct Setup {
        const CotangentChart* cc;
        const Polynomial* pi;
        const ActionDecl* action;
        const HomotopyLieBialgebra* b;
        const CotangentChart* quotient;
        const ReductionDecl* decl;
        bool base_action;
    };

    Setup setup(const std::string& name) const {
        const auto& r = get<ReductionDecl>(name);
        const auto& hp = get<HomotopyPoissonDecl>(r.structure);
        const auto& cd = get<CotangentDecl>(hp.space);
        const auto& a = get<ActionDecl>(r.action);
        return {&cd.cc, &hp.pi, &a, &get<BialgebraDecl>(a.by).bialgebra, &cotangent_of(r.quotient), &r, a.space == cd.base};
    }

    ReductionProblem problem(const Setup& s) const {
        auto S = SymplecticQStructure::make(*s.cc, *s.pi);
        DeclaredQuotient q{*s.quotient, s.decl->images};
        if (s.base_action) {
            auto lift = cotangent_lift(s.cc->base(), s.action->rho, *s.b);
            MomentMap mm = s.decl->moment ? MomentMap{get<MomentDecl>(*s.decl->moment).images} : lift.moment;
            return {std::move(S), std::move(lift.action), std::move(mm), std::move(q)};
        }
        if (!s.decl->moment) throw Error("an action on the total space needs a moment map");
        return {std::move(S), InfinitesimalAction{*s.b, s.action->rho}, MomentMap{get<MomentDecl>(*s.decl->moment).images},
                std::move(q)};
    }

    TaskResult reduce_task(const Task& t) const {
        const Setup s = setup(t.args[0]);
        try {
            auto P = problem(s);
            auto R = hpoisson::reduce(P);
            const Polynomial& H = R.reduced.hamiltonian();
            std::string d = "reduced by an action of rank " + std::to_string(R.action_rank);
            if (s.decl->expect && !(H == *s.decl->expect)) {
                Polynomial diff = H - s.decl->expect->rebased(H.chart());
                return verdict(false, render(diff), d + "; reduced structure " + render(H) + " differs from the expected one");
            }
            return verdict(true, render(H), d);
        } catch (const ReductionError& e) {
            return verdict(false, "0", e.what());
        }
    }

    TaskResult qmoment(const Task& t) const {
        const Setup s = setup(t.args[0]);
        auto P = problem(s);
        auto rep = check_q_morphism_moment(P.moment, P.S, P.action.b);
        if (const auto* bad = rep.first_failure())
            return verdict(false, render(bad->residual), "moment map is not a Q-morphism at " + bad->name);
        return verdict(true, "0", "moment map is a Q-morphism");
    }

    TaskResult verify_quotient(const Task& t) const {
        const Setup s = setup(t.args[0]);
        if (!s.base_action) throw Error("VERIFY-QUOTIENT needs an action on the base");
        const CotangentChart& cc = *s.cc;
        QuotientDeclaration q{*s.quotient, {}, {}};
        const std::size_t m = s.quotient->base_size();
        for (std::size_t i = 0; i < s.decl->images.size(); ++i) {
            const Polynomial& f = s.decl->images[i];
            if (i < m) {
                if (!cc.is_base_function(f)) throw Error("base coordinate images must not contain momenta");
                q.base_images.push_back(cc.to_base(f));
            } else {
                q.momentum_images.push_back(f);
            }
        }
        try {
            auto hp = HomotopyPoissonStructure::make(cc, *s.pi);
            auto rep = verify_quotient_theorem(hp, s.action->rho, *s.b, q);
            if (rep.agree()) return verdict(true, render(rep.pushed), "both quotient paths agree");
            return verdict(false, render(rep.pushed),
                           "quotient paths differ in component " + std::to_string(*rep.differing_component));
        } catch (const ReductionError& e) {
            return verdict(false, "0", e.what());
        }
    }
};

inline TaskResult run_one(const Document& doc, const Task& t, const RunOptions& opts) {
    const auto start = std::chrono::steady_clock::now();
    TaskResult r;
    {
        DegreeGuard guard(opts.max_degree.value_or(-1));
        try {
            r = TaskRunner(doc, opts)(t);
        } catch (const DegreeLimitExceeded& e) {
            r = {"", Verdict::Error, "", e.what()};
            r.degree_limit_hit = true;
        } catch (const std::exception& e) {
            r = {"", Verdict::Error, "", e.what()};
        }
    }
    r.task = t.name;
    r.time_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
    return r;
}

} // namespace detail

/// Runs the selected tasks (all when `only` is empty) concurrently; results follow document order.
inline std::vector<TaskResult> run(const Document& doc, const RunOptions& opts = {},
                                   const std::optional<std::string>& only = std::nullopt) {
    std::vector<const Task*> tasks;
    for (const auto& t : doc.tasks)
        if (!only || t.name == *only) tasks.push_back(&t);
    std::vector<TaskResult> out(tasks.size());
    unsigned workers = opts.threads ? opts.threads : std::max(1u, std::thread::hardware_concurrency());
    workers = std::min<unsigned>(workers, static_cast<unsigned>(tasks.size()));
    std::atomic<std::size_t> next{0};
    auto work = [&] {
        for (std::size_t i = next++; i < tasks.size(); i = next++) out[i] = detail::run_one(doc, *tasks[i], opts);
    };
    std::vector<std::thread> pool;
    for (unsigned w = 1; w < workers; ++w) pool.emplace_back(work);
    if (workers > 0) work();
    for (auto& th : pool) th.join();
    return out;
}

inline bool all_passed(const std::vector<TaskResult>& rs) {
    return std::all_of(rs.begin(), rs.end(), [](const TaskResult& r) { return r.verdict == Verdict::Pass; });
}

/// Human-readable report; timing is left out so that identical input gives identical text.
inline std::string report(const std::vector<TaskResult>& rs) {
    std::string out;
    for (const auto& r : rs) {
        out += to_string(r.verdict) + " " + r.task + "\n";
        if (!r.residual.empty()) out += "  residual: " + r.residual + "\n";
        if (!r.details.empty()) out += "  details: " + r.details + "\n";
    }
    if (!rs.empty()) {
        std::size_t pass = 0, fail = 0, err = 0;
        for (const auto& r : rs) (r.verdict == Verdict::Pass ? pass : r.verdict == Verdict::Fail ? fail : err)++;
        out += std::to_string(rs.size()) + (rs.size() == 1 ? " task: " : " tasks: ") + std::to_string(pass) + " passed, " + std::to_string(fail) +
               " failed, " + std::to_string(err) + " errors\n";
    }
    return out;
}

} // namespace hpoisson::format
