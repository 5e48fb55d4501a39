#pragma once

// Moment-map reduction of symplectic Q-manifolds presented as T*[n]M with a
// Hamiltonian homological vector field, at the zero level of the moment map.
//
// The ideal I generated by the moment map images must become a set of
// coordinates after a linear change of coordinates; membership in I is then
// decided by substitution. The quotient is declared by the caller (a cotangent
// chart plus images of its coordinates) and verified here.

#include "lie_structures.hpp"
#include "linalg.hpp"

#include <algorithm>
#include <cstddef>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace hpoisson {

class ReductionError : public Error {
public:
    enum class Kind {
        Shape,
        NotAction,
        NotFlat,
        Equivariance,
        Regularity,
        NotFree,
        Coisotropy,
        QInvariance,
        Invariance,
        Normalizer,
        BracketMismatch,
        NotExpressible,
        Dependent,
        NotHomological,
        NotHamiltonian,
        ActionMorphism,
    };
    ReductionError(Kind kind, const std::string& msg) : Error(msg), kind_(kind) {}
    Kind kind() const noexcept { return kind_; }

private:
    Kind kind_;
};

struct CheckEntry {
    std::string name;
    Polynomial residual;
    bool passed() const { return residual.is_zero(); }
};

struct CheckReport {
    std::vector<CheckEntry> entries;
    bool passed() const {
        return std::all_of(entries.begin(), entries.end(), [](const CheckEntry& e) { return e.passed(); });
    }
    const CheckEntry* first_failure() const {
        for (const auto& e : entries)
            if (!e.passed()) return &e;
        return nullptr;
    }
};

/// T*[n]M with Q = {H, .} for a degree n+1 Hamiltonian H.
class SymplecticQStructure {
public:
    SymplecticQStructure() = default;

    static SymplecticQStructure make(CotangentChart cc, Polynomial H) {
        if (!same_chart(H.chart(), cc.chart())) throw ChartMismatch("symplectic Q-structure");
        if (!H.is_homogeneous(cc.shift() + 1))
            throw DegreeError("Hamiltonian must be homogeneous of degree " + std::to_string(cc.shift() + 1));
        SymplecticQStructure s;
        s.Q_ = differential(cc, H);
        if (!commutator(s.Q_, s.Q_).is_zero())
            throw ReductionError(ReductionError::Kind::NotHomological, "Q does not square to zero");
        s.cc_ = std::move(cc);
        s.H_ = std::move(H);
        return s;
    }

    const CotangentChart& cotangent() const { return cc_; }
    const ChartPtr& chart() const { return cc_.chart(); }
    const Polynomial& hamiltonian() const { return H_; }
    const Derivation& Q() const { return Q_; }

private:
    CotangentChart cc_;
    Polynomial H_;
    Derivation Q_;
};

/// rho[i] is the vector field of basis element i of the bialgebra's Lie algebra.
struct InfinitesimalAction {
    HomotopyLieBialgebra b;
    std::vector<Derivation> rho;
};

/// images[i] = mu*(e_i), of degree |e_i| + n.
struct MomentMap {
    std::vector<Polynomial> images;
};

namespace detail {

inline std::string basis_name(const HomotopyLieBialgebra& b, std::size_t i) { return b.algebra().name(i); }

} // namespace detail

/// rho([v, w]) = [rho(v), rho(w)] on basis pairs; throws naming the first failing pair.
inline void check_action(const InfinitesimalAction& a) {
    const auto& g = a.b.algebra();
    if (a.rho.size() != g.dim()) throw ReductionError(ReductionError::Kind::Shape, "action needs one vector field per basis element");
    for (std::size_t i = 0; i < g.dim(); ++i) {
        if (a.rho[i].degree() != g.degree(i))
            throw ReductionError(ReductionError::Kind::NotAction,
                                 "vector field of " + g.name(i) + " has degree " + std::to_string(a.rho[i].degree()));
        if (!same_chart(a.rho[i].chart(), a.rho[0].chart())) throw ChartMismatch("action");
    }
    for (std::size_t i = 0; i < g.dim(); ++i)
        for (std::size_t j = 0; j < g.dim(); ++j) {
            Derivation lhs = Derivation::zero(a.rho[0].chart(), g.degree(i) + g.degree(j));
            for (std::size_t k = 0; k < g.dim(); ++k)
                if (g.constant(i, j, k) != 0) lhs = lhs + g.constant(i, j, k) * a.rho[k];
            if (!(lhs == commutator(a.rho[i], a.rho[j])))
                throw ReductionError(ReductionError::Kind::NotAction, "rho is not bracket compatible on (" + g.name(i) +
                                                                          ", " + g.name(j) + ")");
        }
}

/// The function sum_i X(x_i) p_i on T*[1]M of a vector field X on M.
inline Polynomial symbol(const CotangentChart& cc, const Derivation& X) {
    if (!same_chart(X.chart(), cc.base())) throw ChartMismatch("symbol");
    Polynomial out(cc.chart());
    for (std::size_t i = 0; i < cc.base_size(); ++i)
        if (!X.image(i).is_zero()) out += mul(cc.lift(X.image(i)), cc.p(i));
    return out;
}

struct CotangentLift {
    CotangentChart cc;
    InfinitesimalAction action; // rho~(v) = {mu*(v), .}
    MomentMap moment;           // mu*(v) = symbol of rho(v)
};

inline CotangentLift cotangent_lift(const ChartPtr& base, const std::vector<Derivation>& rho, const HomotopyLieBialgebra& b) {
    if (b.shift() != 1) throw Error("cotangent lift needs a bialgebra of degree 1");
    for (const auto& X : rho)
        if (!same_chart(X.chart(), base)) throw ChartMismatch("cotangent lift");
    if (!rho.empty()) check_action({b, rho});
    CotangentChart cc(base, 1);
    CotangentLift out{cc, {b, {}}, {}};
    for (const auto& X : rho) {
        Polynomial mu = symbol(cc, X);
        out.moment.images.push_back(mu);
        Derivation lifted = hamiltonian_vf(mu, cc);
        if (mu.is_zero()) lifted = Derivation::zero(cc.chart(), X.degree());
        out.action.rho.push_back(std::move(lifted));
    }
    return out;
}

namespace detail {

/// mu* extended multiplicatively from the shifted dual chart.
inline Polynomial moment_pullback(const HomotopyLieBialgebra& b, const MomentMap& mm, const ChartPtr& target,
                                  const Polynomial& f) {
    return pullback(b.chart(), target, mm.images, f);
}

inline void check_moment_shape(const MomentMap& mm, const HomotopyLieBialgebra& b, const CotangentChart& cc) {
    const auto& g = b.algebra();
    if (mm.images.size() != g.dim())
        throw ReductionError(ReductionError::Kind::Shape, "moment map needs one image per basis element");
    if (b.shift() != cc.shift())
        throw ReductionError(ReductionError::Kind::Shape, "bialgebra degree " + std::to_string(b.shift()) +
                                                              " differs from the symplectic degree " +
                                                              std::to_string(cc.shift()));
    for (std::size_t i = 0; i < g.dim(); ++i) {
        if (!same_chart(mm.images[i].chart(), cc.chart())) throw ChartMismatch("moment map");
        if (!mm.images[i].is_homogeneous(g.degree(i) + cc.shift()))
            throw DegreeError("moment map image of " + g.name(i) + " must have degree " +
                              std::to_string(g.degree(i) + cc.shift()));
    }
}

} // namespace detail

/// {mu*v, mu*w} - mu*[v, w] on basis pairs.
inline CheckReport check_equivariance(const MomentMap& mm, const CotangentChart& cc, const HomotopyLieBialgebra& b) {
    detail::check_moment_shape(mm, b, cc);
    const auto& g = b.algebra();
    CheckReport r;
    for (std::size_t i = 0; i < g.dim(); ++i)
        for (std::size_t j = 0; j < g.dim(); ++j) {
            Polynomial res = canonical_bracket(mm.images[i], mm.images[j], cc);
            for (std::size_t k = 0; k < g.dim(); ++k)
                if (g.constant(i, j, k) != 0) res -= g.constant(i, j, k) * mm.images[k];
            r.entries.push_back({"(" + g.name(i) + ", " + g.name(j) + ")", std::move(res)});
        }
    return r;
}

/// Q_S(mu*v) - mu*(dhat v) for every basis element v.
inline CheckReport check_q_morphism_moment(const MomentMap& mm, const SymplecticQStructure& S, const HomotopyLieBialgebra& b) {
    detail::check_moment_shape(mm, b, S.cotangent());
    CheckReport r;
    for (std::size_t i = 0; i < b.algebra().dim(); ++i) {
        Polynomial res = apply_derivation(S.Q(), mm.images[i]) -
                         detail::moment_pullback(b, mm, S.chart(), b.dhat().image(i));
        r.entries.push_back({detail::basis_name(b, i), std::move(res)});
    }
    return r;
}

/// rho^(dhat v) - [pi, rho^(v)] for every basis element v, where rho^ sends v to the symbol of rho(v).
inline CheckReport check_action_morphism(const std::vector<Derivation>& rho, const HomotopyPoissonStructure& hp,
                                         const HomotopyLieBialgebra& b) {
    const CotangentChart& cc = hp.cotangent();
    if (cc.shift() != 1 || b.shift() != 1) throw Error("action morphism check needs degree 1 data");
    if (rho.size() != b.algebra().dim()) throw Error("action needs one vector field per basis element");
    std::vector<Polynomial> symbols;
    for (const auto& X : rho) symbols.push_back(symbol(cc, X));
    CheckReport r;
    for (std::size_t i = 0; i < b.algebra().dim(); ++i) {
        Polynomial lhs = pullback(b.chart(), cc.chart(), symbols, b.dhat().image(i));
        Polynomial res = lhs - canonical_bracket(hp.pi(), symbols[i], cc);
        r.entries.push_back({detail::basis_name(b, i), std::move(res)});
    }
    return r;
}

/// Normal form modulo an ideal generated by linear combinations of coordinates.
class LinearIdeal {
public:
    LinearIdeal() = default;

    /// Throws a Regularity error unless every generator is a linear form in the coordinates and
    /// the generators are linearly independent.
    LinearIdeal(ChartPtr chart, const std::vector<Polynomial>& generators, const std::vector<std::string>& labels)
        : chart_(std::move(chart)), generators_(generators) {
        using K = ReductionError::Kind;
        const std::size_t n = chart_->size();
        Matrix m;
        for (std::size_t g = 0; g < generators.size(); ++g) {
            Vector row(n, 0);
            for (const auto& [e, c] : generators[g].terms()) {
                int idx = -1, count = 0;
                for (std::size_t i = 0; i < n; ++i) {
                    count += e[i];
                    if (e[i] == 1) idx = static_cast<int>(i);
                }
                if (count != 1)
                    throw ReductionError(K::Regularity, "moment map image of " + labels[g] +
                                                            " is not linear in the chart coordinates");
                row[static_cast<std::size_t>(idx)] = c;
            }
            if (is_zero_vector(row))
                throw ReductionError(K::Regularity, "moment map image of " + labels[g] + " vanishes");
            m.push_back(std::move(row));
        }
        auto re = row_reduce(m, n);
        if (re.rank() != generators.size())
            throw ReductionError(K::Regularity, "moment map images are linearly dependent");
        // y_pivot = -(sum over free columns) modulo I
        images_.clear();
        for (std::size_t i = 0; i < n; ++i) images_.push_back(Polynomial::coordinate(chart_, i));
        for (std::size_t r = 0; r < re.pivots.size(); ++r) {
            const std::size_t piv = re.pivots[r];
            Polynomial img(chart_);
            for (std::size_t c = 0; c < n; ++c)
                if (c != piv && re.reduced[r][c] != 0) img -= Polynomial::coordinate(chart_, c, re.reduced[r][c]);
            images_[piv] = std::move(img);
            eliminated_.push_back(piv);
        }
    }

    const std::vector<Polynomial>& generators() const { return generators_; }
    const std::vector<std::size_t>& eliminated() const { return eliminated_; }

    Polynomial normal_form(const Polynomial& f) const {
        if (eliminated_.empty()) return f;
        return pullback(chart_, images_, f);
    }
    bool contains(const Polynomial& f) const { return normal_form(f).is_zero(); }

private:
    ChartPtr chart_;
    std::vector<Polynomial> generators_;
    std::vector<Polynomial> images_;
    std::vector<std::size_t> eliminated_;
};

namespace detail {

/// Calls fn on every normal-form exponent vector of the chart with the given
/// total degree and between 0 and max_factors factors.
inline void for_each_monomial(const Chart& chart, int degree, int max_factors,
                              const std::function<void(const Exponents&)>& fn) {
    const std::size_t n = chart.size();
    Exponents e(n, 0);
    std::function<void(std::size_t, int, int)> rec = [&](std::size_t i, int deg, int left) {
        if (i == n) {
            if (deg == degree) fn(e);
            return;
        }
        const int cap = chart.odd(i) ? std::min(1, left) : left;
        for (int k = 0; k <= cap; ++k) {
            e[i] = k;
            rec(i + 1, deg + k * chart.degree(i), left - k);
        }
        e[i] = 0;
    };
    rec(0, 0, max_factors);
}

} // namespace detail

/// Expresses target as P(images) modulo an ideal, with P a polynomial on `quotient`.
/// Returns nullopt when no P of factor count <= max_factors exists; throws Dependent when P is not unique.
inline std::optional<Polynomial> express_in(const ChartPtr& quotient, const std::vector<Polynomial>& images,
                                            const Polynomial& target, int degree, int max_factors,
                                            const std::function<Polynomial(const Polynomial&)>& normal_form) {
    std::vector<Exponents> monos;
    std::vector<Polynomial> pulled;
    const ChartPtr& source = target.chart();
    detail::for_each_monomial(*quotient, degree, max_factors, [&](const Exponents& e) {
        monos.push_back(e);
        pulled.push_back(normal_form(pullback(quotient, source, images, Polynomial::monomial(quotient, e))));
    });
    Polynomial t = normal_form(target);
    // rows: source monomials appearing anywhere
    std::map<Exponents, std::size_t> row_of;
    auto row = [&](const Exponents& e) { return row_of.try_emplace(e, row_of.size()).first->second; };
    for (const auto& p : pulled)
        for (const auto& [e, c] : p.terms()) row(e);
    for (const auto& [e, c] : t.terms()) row(e);
    Matrix m = zero_matrix(row_of.size(), monos.size());
    Vector rhs(row_of.size(), 0);
    for (std::size_t j = 0; j < pulled.size(); ++j)
        for (const auto& [e, c] : pulled[j].terms()) m[row_of[e]][j] = c;
    for (const auto& [e, c] : t.terms()) rhs[row_of[e]] = c;
    auto x = solve(m, monos.size(), rhs);
    if (!x) return std::nullopt;
    if (rank(m, monos.size()) != monos.size())
        throw ReductionError(ReductionError::Kind::Dependent,
                             "declared quotient coordinates are algebraically dependent in degree " +
                                 std::to_string(degree));
    Polynomial out(quotient);
    for (std::size_t j = 0; j < monos.size(); ++j)
        if ((*x)[j] != 0) out.add_term(monos[j], (*x)[j]);
    return out;
}

/// A quotient chart T*[n]M' with the image of each of its coordinates (base, then momenta) on S.
struct DeclaredQuotient {
    CotangentChart chart;
    std::vector<Polynomial> images;
};

inline DeclaredQuotient identity_quotient(const CotangentChart& cc) {
    DeclaredQuotient q{cc, {}};
    for (std::size_t i = 0; i < cc.chart()->size(); ++i) q.images.push_back(Polynomial::coordinate(cc.chart(), i));
    return q;
}

struct ReductionProblem {
    SymplecticQStructure S;
    InfinitesimalAction action; // vector fields on S
    MomentMap moment;
    DeclaredQuotient quotient;
};

struct ReducedStructure {
    SymplecticQStructure reduced;
    std::vector<Polynomial> generators;
    std::size_t action_rank = 0;
    /// Named check reports in the order they were run.
    std::vector<std::pair<std::string, CheckReport>> checks;
};

/// Rank of the action's coefficient matrix, evaluated where the degree 0
/// coordinates take fixed generic rational values and all others vanish.
inline std::size_t action_rank(const std::vector<Derivation>& rho) {
    if (rho.empty()) return 0;
    const ChartPtr& chart = rho.front().chart();
    const std::size_t n = chart->size();
    std::size_t best = 0;
    for (int trial = 0; trial < 4 && best < rho.size(); ++trial) {
        Vector point(n, 0);
        for (std::size_t i = 0; i < n; ++i)
            if (chart->degree(i) == 0)
                point[i] = make_rational(static_cast<long>(3 + 7 * i + 11 * static_cast<std::size_t>(trial) * (i + 1)), 5 + trial);
        Matrix m;
        for (const auto& X : rho) {
            Vector row(n, 0);
            for (std::size_t i = 0; i < n; ++i)
                for (const auto& [e, c] : X.image(i).terms()) {
                    Rational term = c;
                    for (std::size_t j = 0; j < n; ++j)
                        for (int k = 0; k < e[j]; ++k) term *= point[j];
                    row[i] += term;
                }
            m.push_back(std::move(row));
        }
        best = std::max(best, rank(m, n));
    }
    return best;
}

namespace detail {

inline void require(const std::string& what, const CheckReport& r, ReductionError::Kind kind,
                    std::vector<std::pair<std::string, CheckReport>>& log) {
    log.emplace_back(what, r);
    if (const auto* bad = r.first_failure()) throw ReductionError(kind, what + " fails at " + bad->name);
}

} // namespace detail

inline ReducedStructure reduce(const ReductionProblem& P) {
    using K = ReductionError::Kind;
    const CotangentChart& cc = P.S.cotangent();
    const ChartPtr& chart = cc.chart();
    const HomotopyLieBialgebra& b = P.action.b;
    const auto& g = b.algebra();
    ReducedStructure out;

    if (!b.flat()) throw ReductionError(K::NotFlat, "the bialgebra differential has a constant part");
    if (!P.action.rho.empty()) {
        for (const auto& X : P.action.rho)
            if (!same_chart(X.chart(), chart)) throw ChartMismatch("action on S");
        check_action(P.action);
    } else if (g.dim() != 0) {
        throw ReductionError(K::Shape, "action needs one vector field per basis element");
    }
    detail::require("equivariance", check_equivariance(P.moment, cc, b), K::Equivariance, out.checks);

    std::vector<std::string> labels;
    for (std::size_t i = 0; i < g.dim(); ++i) labels.push_back(g.name(i));
    LinearIdeal I(chart, P.moment.images, labels);
    out.generators = P.moment.images;

    out.action_rank = action_rank(P.action.rho);
    if (out.action_rank < g.dim())
        throw ReductionError(K::NotFree, "action is not free: rank " + std::to_string(out.action_rank) + " < " +
                                             std::to_string(g.dim()));

    auto nf = [&](const Polynomial& f) { return I.normal_form(f); };

    CheckReport cois;
    for (std::size_t i = 0; i < g.dim(); ++i)
        for (std::size_t j = 0; j < g.dim(); ++j)
            cois.entries.push_back({"(" + g.name(i) + ", " + g.name(j) + ")",
                                    nf(canonical_bracket(P.moment.images[i], P.moment.images[j], cc))});
    detail::require("coisotropy", cois, K::Coisotropy, out.checks);

    CheckReport qinv;
    for (std::size_t i = 0; i < g.dim(); ++i)
        qinv.entries.push_back({g.name(i), nf(apply_derivation(P.S.Q(), P.moment.images[i]))});
    detail::require("Q-invariance of the ideal", qinv, K::QInvariance, out.checks);

    const CotangentChart& qcc = P.quotient.chart;
    const ChartPtr& qchart = qcc.chart();
    const auto& F = P.quotient.images;
    if (qcc.shift() != cc.shift())
        throw ReductionError(K::Shape, "quotient chart has a different symplectic degree");
    if (F.size() != qchart->size())
        throw ReductionError(K::Shape, "quotient needs one image per quotient coordinate");
    for (std::size_t k = 0; k < F.size(); ++k) {
        if (!same_chart(F[k].chart(), chart)) throw ChartMismatch("quotient image");
        if (!F[k].is_homogeneous(qchart->degree(k)))
            throw DegreeError("image of quotient coordinate " + (*qchart)[k].name + " has the wrong degree");
    }

    CheckReport inv, norm;
    for (std::size_t k = 0; k < F.size(); ++k)
        for (std::size_t i = 0; i < g.dim(); ++i) {
            const std::string label = (*qchart)[k].name + " under " + g.name(i);
            inv.entries.push_back({label, nf(apply_derivation(P.action.rho[i], F[k]))});
            norm.entries.push_back({label, nf(canonical_bracket(F[k], P.moment.images[i], cc))});
        }
    detail::require("invariance", inv, K::Invariance, out.checks);
    detail::require("normalizer", norm, K::Normalizer, out.checks);

    // the declared coordinates carry the reduced bracket
    CheckReport brackets;
    for (std::size_t a = 0; a < F.size(); ++a)
        for (std::size_t c = 0; c < F.size(); ++c) {
            Polynomial expected = pullback(qchart, chart, F, qcc.bracket().on_coordinates(a, c));
            brackets.entries.push_back({"{" + (*qchart)[a].name + ", " + (*qchart)[c].name + "}",
                                        nf(canonical_bracket(F[a], F[c], cc) - expected)});
        }
    detail::require("quotient bracket", brackets, K::BracketMismatch, out.checks);

    std::vector<Polynomial> q_images;
    for (std::size_t k = 0; k < F.size(); ++k) {
        Polynomial target = nf(apply_derivation(P.S.Q(), F[k]));
        const int bound = std::max(1, target.polynomial_degree());
        auto expr = express_in(qchart, F, target, qchart->degree(k) + 1, bound, nf);
        if (!expr)
            throw ReductionError(K::NotExpressible, "Q(" + (*qchart)[k].name +
                                                        ") is not a polynomial in the declared quotient coordinates");
        q_images.push_back(std::move(*expr));
    }
    Derivation Qred(qchart, 1, std::move(q_images));
    if (!commutator(Qred, Qred).is_zero()) throw ReductionError(K::NotHomological, "reduced Q does not square to zero");
    auto bad = bracket_derivation_failures(qcc.bracket(), Qred);
    if (!bad.empty())
        throw ReductionError(K::NotHamiltonian, "reduced Q is not a derivation of the bracket on {" +
                                                    (*qchart)[bad.front().first].name + ", " +
                                                    (*qchart)[bad.front().second].name + "}");
    Polynomial Hred;
    try {
        Hred = from_differential(qcc, Qred).pi();
    } catch (const CorrespondenceError& e) {
        throw ReductionError(K::NotHamiltonian, std::string("reduced Q is not Hamiltonian: ") + e.what());
    }
    out.reduced = SymplecticQStructure::make(qcc, std::move(Hred));
    return out;
}

/// Base-level quotient declaration for the cotangent pipeline: images on M of
/// the base coordinates of M', and images on T*[1]M of its momenta.
struct QuotientDeclaration {
    CotangentChart chart; // T*[1]M'
    std::vector<Polynomial> base_images;
    std::vector<Polynomial> momentum_images;
};

struct QuotientTheoremReport {
    ReducedStructure reduced;
    Polynomial pushed;               // pi pushed through the quotient map, on T*[1]M'
    CheckReport action_morphism;
    CheckReport closure;             // brackets of invariants are invariant
    std::optional<int> differing_component;
    bool agree() const { return !differing_component.has_value(); }
};

/// Runs cotangent_lift then reduce, independently pushes pi through the declared
/// quotient map using the multibrackets of invariants, and compares the results.
inline QuotientTheoremReport verify_quotient_theorem(const HomotopyPoissonStructure& hp, const std::vector<Derivation>& rho,
                                                     const HomotopyLieBialgebra& b, const QuotientDeclaration& q) {
    using K = ReductionError::Kind;
    const CotangentChart& cc = hp.cotangent();
    const ChartPtr& base = cc.base();
    QuotientTheoremReport rep;

    rep.action_morphism = check_action_morphism(rho, hp, b);
    if (const auto* bad = rep.action_morphism.first_failure())
        throw ReductionError(K::ActionMorphism, "action is not a morphism of differential algebras at " + bad->name);

    const CotangentChart& qcc = q.chart;
    const ChartPtr& qbase = qcc.base();
    if (q.base_images.size() != qbase->size() || q.momentum_images.size() != qbase->size())
        throw ReductionError(K::Shape, "quotient declaration needs images for every quotient coordinate");

    // Invariants are closed under the multibrackets.
    const int bound = hp.finite_type_bound();
    std::vector<Polynomial> brackets_by_tuple;
    for (int ell = 0; ell <= bound; ++ell) {
        detail::for_each_tuple(qbase->size(), ell, [&](const std::vector<std::size_t>& J) {
            std::vector<Polynomial> args;
            std::string label = "beta_" + std::to_string(ell) + "(";
            for (std::size_t t = 0; t < J.size(); ++t) {
                args.push_back(q.base_images[J[t]]);
                label += (t ? ", " : "") + (*qbase)[J[t]].name;
            }
            label += ")";
            Polynomial value = derived_bracket(hp, args);
            for (std::size_t i = 0; i < rho.size(); ++i)
                rep.closure.entries.push_back({label + " under " + b.algebra().name(i), apply_derivation(rho[i], value)});
        });
    }
    if (const auto* bad = rep.closure.first_failure())
        throw ReductionError(K::Invariance, "multibracket of invariants is not invariant: " + bad->name);

    auto identity = [](const Polynomial& f) { return f; };
    Polynomial pushed(qcc.chart());
    for (int ell = 0; ell <= bound; ++ell) {
        pushed += multivector_from_brackets(qcc, ell, [&](const std::vector<std::size_t>& J) {
            std::vector<Polynomial> args;
            int deg = cc.shift() + 1 - ell * cc.shift();
            for (auto j : J) {
                args.push_back(q.base_images[j]);
                deg += qbase->degree(j);
            }
            Polynomial value = derived_bracket(hp, args);
            const int factors = std::max(1, value.polynomial_degree());
            auto expr = express_in(qbase, q.base_images, value, deg, factors, identity);
            if (!expr) throw ReductionError(K::NotExpressible, "a multibracket of invariants is not a polynomial in them");
            return qcc.lift(*expr);
        });
    }
    rep.pushed = pushed;

    CotangentLift lift = cotangent_lift(base, rho, b);
    DeclaredQuotient dq{qcc, {}};
    for (const auto& f : q.base_images) dq.images.push_back(cc.lift(f));
    for (const auto& f : q.momentum_images) dq.images.push_back(f);
    ReductionProblem P{SymplecticQStructure::make(cc, hp.pi()), lift.action, lift.moment, dq};
    rep.reduced = reduce(P);

    const Polynomial& Hred = rep.reduced.reduced.hamiltonian();
    for (const auto& [ell, part] : decompose(Hred - pushed, qcc)) {
        rep.differing_component = ell;
        break;
    }
    return rep;
}

} // namespace hpoisson
