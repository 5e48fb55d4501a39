#pragma once

// Shifted cotangent charts T*[n]M, the canonical degree -n bracket and the
// objects built from it (Hamiltonian vector fields, Euler field, multivector
// decomposition by momentum word length).

#include "graded_algebra.hpp"

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace hpoisson {

/// A biderivation of degree -shift determined by its values on coordinate pairs.
///
/// {a, .} is extended as a left derivation of degree |a| - shift and {., c} as a
/// right derivation of degree |c| - shift:
///   {a, bc} = {a,b} c + (-1)^{(|a|-shift)|b|} b {a,c}
///   {ab, c} = a {b,c} + (-1)^{|b|(|c|-shift)} {a,c} b
class BiderivationBracket {
public:
    BiderivationBracket() = default;

    /// table[i][j] = {y_i, y_j}; missing entries (zero polynomials) are allowed.
    BiderivationBracket(ChartPtr chart, int shift, std::vector<std::vector<Polynomial>> table)
        : chart_(std::move(chart)), shift_(shift), table_(std::move(table)) {
        const std::size_t n = chart_->size();
        if (table_.size() != n) throw Error("bracket table has wrong size");
        for (std::size_t i = 0; i < n; ++i) {
            if (table_[i].size() != n) throw Error("bracket table has wrong size");
            for (std::size_t j = 0; j < n; ++j) {
                const auto& v = table_[i][j];
                if (!same_chart(v.chart(), chart_)) throw ChartMismatch("bracket table");
                if (!v.is_homogeneous(chart_->degree(i) + chart_->degree(j) - shift_))
                    throw DegreeError("bracket {" + (*chart_)[i].name + ", " + (*chart_)[j].name +
                                      "} has the wrong degree");
            }
        }
    }

    const ChartPtr& chart() const { return chart_; }
    int shift() const { return shift_; }
    const Polynomial& on_coordinates(std::size_t i, std::size_t j) const { return table_[i][j]; }

    /// Hamiltonian derivation {h, .} of a homogeneous h.
    Derivation hamiltonian(const Polynomial& h) const {
        if (!same_chart(h.chart(), chart_)) throw ChartMismatch("hamiltonian");
        auto deg = h.degree();
        if (!deg) {
            if (h.is_zero()) return Derivation::zero(chart_, -shift_);
            throw DegreeError("hamiltonian needs a homogeneous function");
        }
        const std::size_t n = chart_->size();
        std::vector<Polynomial> images;
        images.reserve(n);
        for (std::size_t b = 0; b < n; ++b) images.push_back(bracket_with_coordinate(h, b));
        return Derivation(chart_, *deg - shift_, std::move(images));
    }

    /// {a, b}, bilinear in both arguments.
    Polynomial operator()(const Polynomial& a, const Polynomial& b) const {
        if (!same_chart(a.chart(), chart_) || !same_chart(b.chart(), chart_)) throw ChartMismatch("bracket");
        Polynomial out(chart_);
        if (a.is_zero() || b.is_zero()) return out;
        for (const auto& [deg, part] : a.homogeneous_components()) out += apply_derivation(hamiltonian(part), b);
        return out;
    }

private:
    // {f, y_b} via the right Leibniz rule on f.
    Polynomial bracket_with_coordinate(const Polynomial& f, std::size_t b) const {
        const Chart& chart = *chart_;
        const std::size_t n = chart.size();
        const bool odd_right = is_odd(chart.degree(b) - shift_);
        Polynomial out(chart_);
        for (const auto& [e, c] : f.terms()) {
            for (std::size_t i = 0; i < n; ++i) {
                if (e[i] == 0) continue;
                const Polynomial& val = table_[i][b];
                if (val.is_zero()) continue;
                int suffix_degree = 0;
                for (std::size_t j = i + 1; j < n; ++j) suffix_degree += e[j] * chart.degree(j);
                Exponents pre(n, 0), suf(n, 0);
                for (std::size_t j = 0; j < i; ++j) pre[j] = e[j];
                pre[i] = e[i] - 1;
                for (std::size_t j = i + 1; j < n; ++j) suf[j] = e[j];
                Rational coef = c * e[i];
                if (odd_right && is_odd(suffix_degree)) coef = -coef;
                out += mul(mul(Polynomial::monomial(chart_, pre, coef), val), Polynomial::monomial(chart_, suf));
            }
        }
        return out;
    }

    ChartPtr chart_;
    int shift_ = 0;
    std::vector<std::vector<Polynomial>> table_;
};

/// T*[n]M: base coordinates followed by one momentum per base coordinate.
class CotangentChart {
public:
    CotangentChart() = default;

    CotangentChart(ChartPtr base, int n) : base_(std::move(base)), shift_(n) {
        if (n < 1) throw Error("cotangent shift must be at least 1 (got " + std::to_string(n) + ")");
        std::vector<Coordinate> coords = base_->coordinates();
        for (const auto& c : base_->coordinates()) {
            std::string name = momentum_name(c.name);
            if (base_->find(name))
                throw Error("momentum name '" + name + "' collides with a base coordinate");
            coords.push_back({name, n - c.degree});
        }
        total_ = Chart::make(std::move(coords));

        const std::size_t m = base_->size();
        std::vector<std::vector<Polynomial>> table(2 * m, std::vector<Polynomial>(2 * m, Polynomial(total_)));
        for (std::size_t i = 0; i < m; ++i) {
            // {p_i, x_i} = 1; {x_i, p_i} follows from graded antisymmetry.
            table[m + i][i] = Polynomial::constant(total_, 1);
            const bool plus = is_odd(base_->degree(i) * (n + 1));
            table[i][m + i] = Polynomial::constant(total_, plus ? 1 : -1);
        }
        bracket_ = BiderivationBracket(total_, n, std::move(table));
    }

    static std::string momentum_name(const std::string& base_name) { return "p_" + base_name; }

    const ChartPtr& base() const { return base_; }
    const ChartPtr& chart() const { return total_; }
    int shift() const { return shift_; }
    std::size_t base_size() const { return base_->size(); }
    std::size_t momentum_index(std::size_t base_index) const { return base_->size() + base_index; }
    bool is_momentum(std::size_t index) const { return index >= base_->size(); }
    const BiderivationBracket& bracket() const { return bracket_; }

    Polynomial x(std::size_t i) const { return Polynomial::coordinate(total_, i); }
    Polynomial p(std::size_t i) const { return Polynomial::coordinate(total_, momentum_index(i)); }
    Polynomial coordinate(const std::string& name) const { return Polynomial::coordinate(total_, name); }

    int fiber_degree(const Exponents& e) const {
        int f = 0;
        for (std::size_t i = base_->size(); i < e.size(); ++i) f += e[i];
        return f;
    }

    /// Embeds a base-chart polynomial into the total chart.
    Polynomial lift(const Polynomial& f) const {
        if (!same_chart(f.chart(), base_)) throw ChartMismatch("lift to cotangent chart");
        Polynomial out(total_);
        for (const auto& [e, c] : f.terms()) {
            Exponents t(total_->size(), 0);
            std::copy(e.begin(), e.end(), t.begin());
            out.add_term(t, c);
        }
        return out;
    }

    /// Restricts a momentum-free polynomial back to the base chart.
    Polynomial to_base(const Polynomial& f) const {
        if (!same_chart(f.chart(), total_)) throw ChartMismatch("restriction to base chart");
        Polynomial out(base_);
        for (const auto& [e, c] : f.terms()) {
            if (fiber_degree(e) != 0) throw Error("function depends on momenta");
            out.add_term(Exponents(e.begin(), e.begin() + static_cast<std::ptrdiff_t>(base_->size())), c);
        }
        return out;
    }

    bool is_base_function(const Polynomial& f) const {
        for (const auto& [e, c] : f.terms())
            if (fiber_degree(e) != 0) return false;
        return true;
    }

    friend bool operator==(const CotangentChart& a, const CotangentChart& b) {
        return a.shift_ == b.shift_ && same_chart(a.base_, b.base_);
    }

private:
    ChartPtr base_;
    int shift_ = 1;
    ChartPtr total_;
    BiderivationBracket bracket_;
};

inline CotangentChart build_cotangent(const ChartPtr& base, int n) { return CotangentChart(base, n); }

inline Polynomial canonical_bracket(const Polynomial& a, const Polynomial& b, const CotangentChart& cc) {
    return cc.bracket()(a, b);
}

/// The Schouten bracket of multivector fields: the canonical bracket on T*[1]M.
inline Polynomial schouten(const Polynomial& a, const Polynomial& b, const CotangentChart& cc) {
    if (cc.shift() != 1) throw Error("schouten bracket requires shift 1 (got " + std::to_string(cc.shift()) + ")");
    return canonical_bracket(a, b, cc);
}

/// Degree-0 derivation with x_i -> |x_i| x_i.
inline Derivation euler_field(const ChartPtr& chart) {
    std::vector<Polynomial> images;
    for (std::size_t i = 0; i < chart->size(); ++i)
        images.push_back(Polynomial::coordinate(chart, i, Rational(chart->degree(i))));
    return Derivation(chart, 0, std::move(images));
}

/// The fiber-linear function sum_i |x_i| x_i p_i whose Hamiltonian field acts on base functions as the Euler field.
inline Polynomial euler_function(const CotangentChart& cc) {
    Polynomial out(cc.chart());
    for (std::size_t i = 0; i < cc.base_size(); ++i)
        out += mul(Polynomial::coordinate(cc.chart(), i, Rational(cc.base()->degree(i))), cc.p(i));
    return out;
}

inline Derivation hamiltonian_vf(const Polynomial& h, const CotangentChart& cc) {
    if (!same_chart(h.chart(), cc.chart())) throw ChartMismatch("hamiltonian_vf");
    return cc.bracket().hamiltonian(h);
}

/// Terms of v grouped by momentum word length (with multiplicity).
inline std::vector<std::pair<int, Polynomial>> decompose(const Polynomial& v, const CotangentChart& cc) {
    if (!same_chart(v.chart(), cc.chart())) throw ChartMismatch("decompose");
    std::map<int, Polynomial> parts;
    for (const auto& [e, c] : v.terms()) {
        auto [it, inserted] = parts.try_emplace(cc.fiber_degree(e), cc.chart());
        it->second.add_term(e, c);
    }
    return {parts.begin(), parts.end()};
}

/// The fiber-degree-ell component of v (zero when absent).
inline Polynomial component(const Polynomial& v, const CotangentChart& cc, int ell) {
    Polynomial out(cc.chart());
    for (const auto& [e, c] : v.terms())
        if (cc.fiber_degree(e) == ell) out.add_term(e, c);
    return out;
}

} // namespace hpoisson
