#pragma once

// Homotopy Poisson structures of degree n: a degree n+1 function pi on T*[n]M
// with {pi, pi} = 0. The multibrackets are always obtained from pi through the
// derived bracket, so every sign is inherited from the canonical bracket.

#include "shifted_cotangent.hpp"

#include <algorithm>
#include <cstddef>
#include <functional>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <vector>

namespace hpoisson {

struct MasterEquationResult {
    bool holds = false;
    Polynomial residual;
};

namespace detail {

inline void require_structure_degree(const CotangentChart& cc, const Polynomial& pi) {
    if (!same_chart(pi.chart(), cc.chart())) throw ChartMismatch("homotopy Poisson structure");
    if (!pi.is_homogeneous())
        throw DegreeError("pi must be homogeneous of total degree " + std::to_string(cc.shift() + 1));
    if (!pi.is_homogeneous(cc.shift() + 1))
        throw DegreeError("pi has total degree " + std::to_string(*pi.degree()) + ", expected " +
                          std::to_string(cc.shift() + 1));
}

inline Rational factorial(int k) {
    Rational r = 1;
    for (int i = 2; i <= k; ++i) r *= i;
    return r;
}

/// Calls fn on every tuple in {0..dim-1}^len.
inline void for_each_tuple(std::size_t dim, int len, const std::function<void(const std::vector<std::size_t>&)>& fn) {
    std::vector<std::size_t> t(static_cast<std::size_t>(len), 0);
    if (len == 0) {
        fn(t);
        return;
    }
    if (dim == 0) return;
    while (true) {
        fn(t);
        int k = len - 1;
        while (k >= 0 && ++t[static_cast<std::size_t>(k)] == dim) t[static_cast<std::size_t>(k--)] = 0;
        if (k < 0) return;
    }
}

/// Calls fn on every nondecreasing tuple in {0..dim-1}^len.
inline void for_each_multiset(std::size_t dim, int len, const std::function<void(const std::vector<std::size_t>&)>& fn) {
    for_each_tuple(dim, len, [&](const std::vector<std::size_t>& t) {
        if (std::is_sorted(t.begin(), t.end())) fn(t);
    });
}

} // namespace detail

inline MasterEquationResult check_master_equation(const CotangentChart& cc, const Polynomial& pi) {
    detail::require_structure_degree(cc, pi);
    Polynomial r = canonical_bracket(pi, pi, cc);
    bool ok = r.is_zero();
    return {ok, std::move(r)};
}

class HomotopyPoissonStructure {
public:
    HomotopyPoissonStructure() = default;

    /// Validates degree and the master equation.
    static HomotopyPoissonStructure make(CotangentChart cc, Polynomial pi) {
        auto res = check_master_equation(cc, pi);
        if (!res.holds) throw Error("pi does not satisfy the master equation {pi, pi} = 0");
        return HomotopyPoissonStructure(std::move(cc), std::move(pi));
    }

    const CotangentChart& cotangent() const { return cc_; }
    const Polynomial& pi() const { return pi_; }
    int shift() const { return cc_.shift(); }

    Polynomial component(int ell) const { return hpoisson::component(pi_, cc_, ell); }

    /// Largest ell with a nonzero ell-component; -1 for pi = 0.
    int finite_type_bound() const {
        int b = -1;
        for (const auto& [e, c] : pi_.terms()) b = std::max(b, cc_.fiber_degree(e));
        return b;
    }

    friend bool operator==(const HomotopyPoissonStructure& a, const HomotopyPoissonStructure& b) {
        return a.cc_ == b.cc_ && a.pi_ == b.pi_;
    }

private:
    HomotopyPoissonStructure(CotangentChart cc, Polynomial pi) : cc_(std::move(cc)), pi_(std::move(pi)) {}

    CotangentChart cc_;
    Polynomial pi_;
};

/// beta_ell(f_1..f_ell) = {..{pi_ell, f_1}, ..}, f_ell} on base functions.
/// With no arguments returns the constant component pi_0.
inline Polynomial derived_bracket(const CotangentChart& cc, const Polynomial& pi, std::span<const Polynomial> fs) {
    if (!same_chart(pi.chart(), cc.chart())) throw ChartMismatch("derived_bracket");
    std::vector<Polynomial> lifted;
    lifted.reserve(fs.size());
    for (const auto& f : fs) {
        if (same_chart(f.chart(), cc.base())) {
            lifted.push_back(cc.lift(f));
        } else if (same_chart(f.chart(), cc.chart())) {
            if (!cc.is_base_function(f)) throw Error("derived bracket arguments must not contain momenta");
            lifted.push_back(f);
        } else {
            throw ChartMismatch("derived_bracket argument");
        }
    }
    Polynomial acc = component(pi, cc, static_cast<int>(fs.size()));
    for (const auto& f : lifted) {
        if (acc.is_zero()) break;
        acc = canonical_bracket(acc, f, cc);
    }
    return cc.to_base(acc);
}

inline Polynomial derived_bracket(const HomotopyPoissonStructure& hp, std::span<const Polynomial> fs) {
    return derived_bracket(hp.cotangent(), hp.pi(), fs);
}

/// Evaluator for the family of multibrackets of a structure.
class BracketFamily {
public:
    explicit BracketFamily(HomotopyPoissonStructure hp) : hp_(std::move(hp)) {}

    int max_arity() const { return hp_.finite_type_bound(); }
    Polynomial operator()(std::span<const Polynomial> fs) const { return derived_bracket(hp_, fs); }
    const HomotopyPoissonStructure& structure() const { return hp_; }

private:
    HomotopyPoissonStructure hp_;
};

/// d_pi = {pi, .}, a degree-1 derivation of the canonical bracket.
inline Derivation differential(const CotangentChart& cc, const Polynomial& pi) {
    detail::require_structure_degree(cc, pi);
    if (pi.is_zero()) return Derivation::zero(cc.chart(), 1);
    return hamiltonian_vf(pi, cc);
}

inline Derivation differential(const HomotopyPoissonStructure& hp) { return differential(hp.cotangent(), hp.pi()); }

class CorrespondenceError : public Error {
public:
    enum class Kind { Degree, NotSquareZero, NotBracketDerivation, NotHamiltonian };

    CorrespondenceError(Kind kind, const std::string& msg) : Error(msg), kind_(kind) {}
    Kind kind() const noexcept { return kind_; }

private:
    Kind kind_;
};

/// Coordinate pairs (a, b) on which D{y_a, y_b} != {D y_a, y_b} + (-1)^{|D|(|y_a|-n)} {y_a, D y_b}.
inline std::vector<std::pair<std::size_t, std::size_t>> bracket_derivation_failures(const BiderivationBracket& br,
                                                                                   const Derivation& D) {
    std::vector<std::pair<std::size_t, std::size_t>> bad;
    const ChartPtr& chart = br.chart();
    const std::size_t n = chart->size();
    for (std::size_t a = 0; a < n; ++a) {
        Polynomial ya = Polynomial::coordinate(chart, a);
        for (std::size_t b = 0; b < n; ++b) {
            Polynomial yb = Polynomial::coordinate(chart, b);
            Polynomial lhs = apply_derivation(D, br.on_coordinates(a, b));
            Polynomial rhs = br(D.image(a), yb);
            Polynomial second = br(ya, D.image(b));
            if (is_odd(D.degree()) && is_odd(chart->degree(a) - br.shift())) rhs -= second;
            else rhs += second;
            if (!(lhs == rhs)) bad.emplace_back(a, b);
        }
    }
    return bad;
}

/// Recovers the ell-vector component with the given derived brackets on base coordinates:
/// pi_ell = (1/ell!) sum_J beta(x_j1..x_jell) p_jell ... p_j1.
inline Polynomial multivector_from_brackets(
    const CotangentChart& cc, int ell,
    const std::function<Polynomial(const std::vector<std::size_t>&)>& bracket_on_tuple) {
    Polynomial out(cc.chart());
    const Rational scale = Rational(1) / detail::factorial(ell);
    detail::for_each_tuple(cc.base_size(), ell, [&](const std::vector<std::size_t>& J) {
        Polynomial term = bracket_on_tuple(J);
        if (term.is_zero()) return;
        for (auto it = J.rbegin(); it != J.rend(); ++it) term = mul(term, cc.p(*it));
        out += term;
    });
    out *= scale;
    return out;
}

/// Inverse of pi -> d_pi on valid differentials.
inline HomotopyPoissonStructure from_differential(const CotangentChart& cc, const Derivation& delta) {
    using K = CorrespondenceError::Kind;
    if (!same_chart(delta.chart(), cc.chart())) throw ChartMismatch("from_differential");
    if (delta.degree() != 1)
        throw CorrespondenceError(K::Degree, "differential has degree " + std::to_string(delta.degree()) + ", expected 1");
    if (!commutator(delta, delta).is_zero())
        throw CorrespondenceError(K::NotSquareZero, "differential does not square to zero");
    auto bad = bracket_derivation_failures(cc.bracket(), delta);
    if (!bad.empty()) {
        const auto& chart = *cc.chart();
        throw CorrespondenceError(K::NotBracketDerivation, "differential is not a derivation of the bracket on {" +
                                                               chart[bad.front().first].name + ", " +
                                                               chart[bad.front().second].name + "}");
    }

    const ChartPtr& total = cc.chart();
    int max_shift = 0;
    for (std::size_t i = 0; i < total->size(); ++i) {
        const int own = cc.is_momentum(i) ? 1 : 0;
        for (const auto& [e, c] : delta.image(i).terms()) max_shift = std::max(max_shift, cc.fiber_degree(e) - own + 1);
    }

    // delta_ell raises momentum word length by ell - 1.
    auto delta_part = [&](int ell) {
        std::vector<Polynomial> images;
        for (std::size_t i = 0; i < total->size(); ++i) {
            const int own = cc.is_momentum(i) ? 1 : 0;
            images.push_back(component(delta.image(i), cc, own + ell - 1));
        }
        return Derivation(total, 1, std::move(images));
    };

    Polynomial pi(total);
    for (int ell = 1; ell <= max_shift; ++ell) {
        Derivation d_ell = delta_part(ell);
        pi += multivector_from_brackets(cc, ell, [&](const std::vector<std::size_t>& J) {
            Polynomial acc = d_ell.image(J.front());
            for (std::size_t k = 1; k < J.size() && !acc.is_zero(); ++k) acc = canonical_bracket(acc, cc.x(J[k]), cc);
            return acc;
        });
    }
    // pi_0 = -1/(n+1) delta_0(eps); for n = 1 this is -1/2 delta_0(eps).
    Polynomial eps = euler_function(cc);
    Polynomial lowered = component(apply_derivation(delta, eps), cc, 0);
    pi += lowered * make_rational(-1, cc.shift() + 1);

    if (!(differential(cc, pi) == delta))
        throw CorrespondenceError(K::NotHamiltonian, "differential is not Hamiltonian on this chart");
    return HomotopyPoissonStructure::make(cc, std::move(pi));
}

/// True iff psi^* intertwines the multibrackets on all coordinate tuples.
/// images[i] is the pullback (a function on the base of hp) of base coordinate i of hp_target.
inline bool is_related(std::span<const Polynomial> images, const HomotopyPoissonStructure& hp,
                       const HomotopyPoissonStructure& hp_target) {
    const ChartPtr& source_base = hp.cotangent().base();
    const ChartPtr& target_base = hp_target.cotangent().base();
    if (images.size() != target_base->size()) throw Error("relatedness map needs one image per target coordinate");
    if (hp.shift() != hp_target.shift()) throw Error("structures have different shift degrees");
    for (std::size_t i = 0; i < images.size(); ++i) {
        if (!same_chart(images[i].chart(), source_base)) throw ChartMismatch("relatedness map image");
        if (!images[i].is_homogeneous((*target_base)[i].degree))
            throw DegreeError("image of '" + (*target_base)[i].name + "' has the wrong degree");
    }
    auto pull = [&](const Polynomial& g) { return pullback(target_base, source_base, images, g); };
    const int bound = std::max(hp.finite_type_bound(), hp_target.finite_type_bound());
    bool ok = true;
    for (int ell = 0; ell <= bound && ok; ++ell) {
        detail::for_each_multiset(target_base->size(), ell, [&](const std::vector<std::size_t>& J) {
            if (!ok) return;
            std::vector<Polynomial> targets, sources;
            for (auto j : J) {
                targets.push_back(Polynomial::coordinate(target_base, j));
                sources.push_back(images[j]);
            }
            if (!(pull(derived_bracket(hp_target, targets)) == derived_bracket(hp, sources))) ok = false;
        });
    }
    return ok;
}

enum class Classification { Zero, Q, Poisson, QP, FlatGeneral, CurvedGeneral };

inline std::string to_string(Classification c) {
    switch (c) {
    case Classification::Zero: return "zero";
    case Classification::Q: return "Q";
    case Classification::Poisson: return "Poisson";
    case Classification::QP: return "QP";
    case Classification::FlatGeneral: return "flat-general";
    case Classification::CurvedGeneral: return "curved-general";
    }
    return "unknown";
}

inline Classification classify(const HomotopyPoissonStructure& hp) {
    std::set<int> present;
    for (const auto& [ell, part] : decompose(hp.pi(), hp.cotangent())) present.insert(ell);
    if (present.empty()) return Classification::Zero;
    if (present == std::set<int>{1}) return Classification::Q;
    if (present == std::set<int>{2}) return Classification::Poisson;
    if (present == std::set<int>{1, 2}) return Classification::QP;
    if (present.count(0)) return Classification::CurvedGeneral;
    return Classification::FlatGeneral;
}

/// Checks the master equation first; the input need not be a validated structure.
inline Classification classify(const CotangentChart& cc, const Polynomial& pi) {
    return classify(HomotopyPoissonStructure::make(cc, pi));
}

struct ComponentIdentity {
    std::string name;
    int fiber_degree = 0;
    Polynomial residual;
    bool holds() const { return residual.is_zero(); }
};

struct ComponentReport {
    std::vector<ComponentIdentity> identities;
    bool all_hold() const {
        return std::all_of(identities.begin(), identities.end(), [](const auto& i) { return i.holds(); });
    }
};

/// For pi = pi_0 + pi_1 + pi_2 splits {pi, pi} into its four momentum-degree pieces.
inline ComponentReport check_component_identities(const CotangentChart& cc, const Polynomial& pi) {
    detail::require_structure_degree(cc, pi);
    for (const auto& [ell, part] : decompose(pi, cc))
        if (ell > 2) throw Error("component identities apply only to structures with components of arity <= 2");
    auto pi0 = component(pi, cc, 0);
    auto pi1 = component(pi, cc, 1);
    auto pi2 = component(pi, cc, 2);
    auto br = [&](const Polynomial& a, const Polynomial& b) { return canonical_bracket(a, b, cc); };
    ComponentReport r;
    r.identities.push_back({"pi2 is a Poisson bivector", 3, br(pi2, pi2)});
    r.identities.push_back({"pi1 is a Poisson vector field", 2, br(pi1, pi2) + br(pi2, pi1)});
    r.identities.push_back({"(pi1)^2 is the Hamiltonian vector field of pi0", 1, br(pi1, pi1) + br(pi0, pi2) + br(pi2, pi0)});
    r.identities.push_back({"pi0 is pi1-invariant", 0, br(pi0, pi1) + br(pi1, pi0)});
    return r;
}

} // namespace hpoisson
