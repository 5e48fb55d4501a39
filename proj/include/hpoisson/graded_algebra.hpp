#pragma once

// Exact kernel for Z-graded commutative polynomial algebras.
//
// A chart is an ordered list of coordinates with integer degrees. Polynomials
// are stored in normal form: every monomial lists its factors in chart order,
// odd coordinates occur at most once, and the Koszul sign produced by sorting
// is folded into the rational coefficient. Two polynomials are equal iff their
// term maps are equal.

#include "error.hpp"

#include <gmpxx.h>

#include <algorithm>
#include <cstddef>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

namespace hpoisson {

using Rational = mpq_class;

inline Rational make_rational(long num, long den) {
    Rational q(num, den);
    q.canonicalize();
    return q;
}

inline bool is_odd(int degree) { return (degree % 2) != 0; }

struct Coordinate {
    std::string name;
    int degree = 0;

    bool odd() const { return is_odd(degree); }
    friend bool operator==(const Coordinate&, const Coordinate&) = default;
};

class Chart;
using ChartPtr = std::shared_ptr<const Chart>;

class Chart {
public:
    static ChartPtr make(std::vector<Coordinate> coords) {
        return std::shared_ptr<const Chart>(new Chart(std::move(coords)));
    }

    std::size_t size() const { return coords_.size(); }
    const Coordinate& operator[](std::size_t i) const { return coords_[i]; }
    const std::vector<Coordinate>& coordinates() const { return coords_; }
    int degree(std::size_t i) const { return coords_[i].degree; }
    bool odd(std::size_t i) const { return coords_[i].odd(); }

    std::optional<std::size_t> find(const std::string& name) const {
        auto it = index_.find(name);
        if (it == index_.end()) return std::nullopt;
        return it->second;
    }

    std::size_t index_of(const std::string& name) const {
        auto idx = find(name);
        if (!idx) throw Error("unknown coordinate '" + name + "'");
        return *idx;
    }

    friend bool operator==(const Chart& a, const Chart& b) { return a.coords_ == b.coords_; }

private:
    explicit Chart(std::vector<Coordinate> coords) : coords_(std::move(coords)) {
        for (std::size_t i = 0; i < coords_.size(); ++i) {
            if (!index_.emplace(coords_[i].name, i).second)
                throw Error("duplicate coordinate '" + coords_[i].name + "' in chart");
        }
    }

    std::vector<Coordinate> coords_;
    std::unordered_map<std::string, std::size_t> index_;
};

inline bool same_chart(const ChartPtr& a, const ChartPtr& b) {
    return a == b || (a && b && *a == *b);
}

/// Exponent vector indexed by chart position.
using Exponents = std::vector<int>;

namespace detail {

inline thread_local int degree_limit = -1;

inline int factor_count(const Exponents& e) {
    int s = 0;
    for (int x : e) s += x;
    return s;
}

} // namespace detail

/// While alive, any product whose factor count exceeds `limit` throws DegreeLimitExceeded.
class DegreeGuard {
public:
    explicit DegreeGuard(int limit) : saved_(detail::degree_limit) { detail::degree_limit = limit; }
    ~DegreeGuard() { detail::degree_limit = saved_; }
    DegreeGuard(const DegreeGuard&) = delete;
    DegreeGuard& operator=(const DegreeGuard&) = delete;

private:
    int saved_;
};

inline int monomial_degree(const Chart& chart, const Exponents& e) {
    int d = 0;
    for (std::size_t i = 0; i < e.size(); ++i) d += e[i] * chart.degree(i);
    return d;
}

/// Sign and exponents of the normal-form product of two normal-form monomials.
/// Returns 0 when an odd coordinate would appear twice.
inline int multiply_monomials(const Chart& chart, const Exponents& a, const Exponents& b, Exponents& out) {
    const std::size_t n = chart.size();
    out.assign(n, 0);
    int odd_in_a_above = 0;
    for (std::size_t i = 0; i < n; ++i)
        if (a[i] != 0 && chart.odd(i)) ++odd_in_a_above;
    // Walk b's factors in chart order; each odd factor of b at index i must be
    // carried left past the odd factors of a that sit at indices > i.
    int swaps = 0;
    for (std::size_t i = 0; i < n; ++i) {
        if (chart.odd(i)) {
            if (a[i] != 0) --odd_in_a_above;
            if (b[i] != 0) {
                if (a[i] != 0) return 0;
                swaps += odd_in_a_above;
            }
        }
        out[i] = a[i] + b[i];
    }
    return (swaps % 2 == 0) ? 1 : -1;
}

class Polynomial {
public:
    using TermMap = std::map<Exponents, Rational>;

    Polynomial() = default;
    explicit Polynomial(ChartPtr chart) : chart_(std::move(chart)) {}

    static Polynomial zero(ChartPtr chart) { return Polynomial(std::move(chart)); }

    static Polynomial constant(ChartPtr chart, const Rational& c) {
        Polynomial p(std::move(chart));
        p.add_term(Exponents(p.chart_->size(), 0), c);
        return p;
    }

    static Polynomial coordinate(ChartPtr chart, std::size_t index, const Rational& c = 1) {
        Polynomial p(std::move(chart));
        Exponents e(p.chart_->size(), 0);
        e[index] = 1;
        p.add_term(e, c);
        return p;
    }

    static Polynomial coordinate(ChartPtr chart, const std::string& name) {
        auto idx = chart->index_of(name);
        return coordinate(std::move(chart), idx);
    }

    /// Single monomial; exponents of odd coordinates above 1 give zero.
    static Polynomial monomial(ChartPtr chart, Exponents e, const Rational& c = 1) {
        Polynomial p(std::move(chart));
        if (e.size() != p.chart_->size()) throw Error("exponent vector does not match chart");
        for (std::size_t i = 0; i < e.size(); ++i) {
            if (e[i] < 0) throw Error("negative exponent");
            if (e[i] > 1 && p.chart_->odd(i)) return p;
        }
        p.add_term(e, c);
        return p;
    }

    const ChartPtr& chart() const { return chart_; }
    const TermMap& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }
    std::size_t term_count() const { return terms_.size(); }

    /// Degree of a homogeneous polynomial; nullopt for zero or inhomogeneous input.
    std::optional<int> degree() const {
        std::optional<int> d;
        for (const auto& [e, c] : terms_) {
            int md = monomial_degree(*chart_, e);
            if (d && *d != md) return std::nullopt;
            d = md;
        }
        return d;
    }

    /// Zero counts as homogeneous of every degree.
    bool is_homogeneous() const { return is_zero() || degree().has_value(); }
    bool is_homogeneous(int d) const { return is_zero() || degree() == d; }

    /// Maximum number of factors in any term.
    int polynomial_degree() const {
        int d = 0;
        for (const auto& [e, c] : terms_) d = std::max(d, detail::factor_count(e));
        return d;
    }

    Rational constant_term() const {
        auto it = terms_.find(Exponents(chart_->size(), 0));
        return it == terms_.end() ? Rational(0) : it->second;
    }

    std::map<int, Polynomial> homogeneous_components() const {
        std::map<int, Polynomial> out;
        for (const auto& [e, c] : terms_) {
            auto [it, inserted] = out.try_emplace(monomial_degree(*chart_, e), chart_);
            it->second.terms_.emplace(e, c);
        }
        return out;
    }

    /// Adds c * monomial(e); the caller guarantees e is a valid normal-form exponent vector.
    void add_term(const Exponents& e, const Rational& c) {
        if (c == 0) return;
        auto [it, inserted] = terms_.try_emplace(e, c);
        if (inserted) {
            it->second.canonicalize();
        } else {
            it->second += c;
            if (it->second == 0) terms_.erase(it);
        }
    }

    Polynomial& operator+=(const Polynomial& o) {
        check_chart(o, "addition");
        for (const auto& [e, c] : o.terms_) add_term(e, c);
        return *this;
    }

    Polynomial& operator-=(const Polynomial& o) {
        check_chart(o, "subtraction");
        for (const auto& [e, c] : o.terms_) add_term(e, -c);
        return *this;
    }

    Polynomial& operator*=(const Rational& s) {
        if (s == 0) {
            terms_.clear();
        } else {
            for (auto& [e, c] : terms_) c *= s;
        }
        return *this;
    }

    friend Polynomial operator+(Polynomial a, const Polynomial& b) { return a += b; }
    friend Polynomial operator-(Polynomial a, const Polynomial& b) { return a -= b; }
    friend Polynomial operator-(Polynomial a) { return a *= Rational(-1); }
    friend Polynomial operator*(Polynomial a, const Rational& s) { return a *= s; }
    friend Polynomial operator*(const Rational& s, Polynomial a) { return a *= s; }

    friend Polynomial operator*(const Polynomial& a, const Polynomial& b);

    friend bool operator==(const Polynomial& a, const Polynomial& b) {
        return same_chart(a.chart_, b.chart_) && a.terms_ == b.terms_;
    }

    /// Same terms, reinterpreted on an equal chart object.
    Polynomial rebased(ChartPtr chart) const {
        if (!same_chart(chart, chart_)) throw ChartMismatch("rebase");
        Polynomial p(std::move(chart));
        p.terms_ = terms_;
        return p;
    }

    void check_chart(const Polynomial& o, const char* where) const {
        if (!same_chart(chart_, o.chart_)) throw ChartMismatch(where);
    }

private:
    ChartPtr chart_;
    TermMap terms_;
};

/// Graded-commutative product in normal form.
inline Polynomial mul(const Polynomial& a, const Polynomial& b) {
    a.check_chart(b, "mul");
    Polynomial out(a.chart());
    const Chart& chart = *a.chart();
    Exponents prod;
    for (const auto& [ea, ca] : a.terms()) {
        for (const auto& [eb, cb] : b.terms()) {
            int sign = multiply_monomials(chart, ea, eb, prod);
            if (sign == 0) continue;
            if (detail::degree_limit >= 0) {
                int d = detail::factor_count(prod);
                if (d > detail::degree_limit) throw DegreeLimitExceeded(d, detail::degree_limit);
            }
            Rational c = ca * cb;
            if (sign < 0) c = -c;
            out.add_term(prod, c);
        }
    }
    return out;
}

inline Polynomial operator*(const Polynomial& a, const Polynomial& b) { return mul(a, b); }

/// Graded derivation given by its images on coordinates.
class Derivation {
public:
    Derivation() = default;

    /// Each image must be homogeneous of degree (coordinate degree + `degree`).
    Derivation(ChartPtr chart, int degree, std::vector<Polynomial> images)
        : chart_(std::move(chart)), degree_(degree), images_(std::move(images)) {
        if (images_.size() != chart_->size())
            throw Error("derivation needs one image per coordinate");
        for (std::size_t i = 0; i < images_.size(); ++i) {
            if (!same_chart(images_[i].chart(), chart_)) throw ChartMismatch("derivation image");
            if (!images_[i].is_homogeneous(chart_->degree(i) + degree_))
                throw DegreeError("image of '" + (*chart_)[i].name + "' is not of degree " +
                                  std::to_string(chart_->degree(i) + degree_));
        }
    }

    static Derivation zero(ChartPtr chart, int degree) {
        std::vector<Polynomial> images(chart->size(), Polynomial(chart));
        return Derivation(chart, degree, std::move(images));
    }

    /// The partial derivative d/d(coordinate index) acting from the left.
    static Derivation partial(ChartPtr chart, std::size_t index) {
        std::vector<Polynomial> images(chart->size(), Polynomial(chart));
        images[index] = Polynomial::constant(chart, 1);
        int deg = -chart->degree(index);
        return Derivation(chart, deg, std::move(images));
    }

    const ChartPtr& chart() const { return chart_; }
    int degree() const { return degree_; }
    const std::vector<Polynomial>& images() const { return images_; }
    const Polynomial& image(std::size_t i) const { return images_[i]; }

    bool is_zero() const {
        return std::all_of(images_.begin(), images_.end(), [](const Polynomial& p) { return p.is_zero(); });
    }

    friend bool operator==(const Derivation& a, const Derivation& b) {
        return same_chart(a.chart_, b.chart_) && a.degree_ == b.degree_ && a.images_ == b.images_;
    }

private:
    ChartPtr chart_;
    int degree_ = 0;
    std::vector<Polynomial> images_;
};

/// Extends D from coordinates by D(uv) = D(u)v + (-1)^{|D||u|} u D(v).
inline Polynomial apply_derivation(const Derivation& D, const Polynomial& f) {
    if (!same_chart(D.chart(), f.chart())) throw ChartMismatch("apply_derivation");
    const ChartPtr& cp = f.chart();
    const Chart& chart = *cp;
    const std::size_t n = chart.size();
    const bool odd_d = is_odd(D.degree());
    Polynomial out(cp);
    for (const auto& [e, c] : f.terms()) {
        int prefix_degree = 0;
        for (std::size_t i = 0; i < n; ++i) {
            if (e[i] == 0) continue;
            const Polynomial& img = D.image(i);
            if (!img.is_zero()) {
                Exponents pre(n, 0), suf(n, 0);
                for (std::size_t j = 0; j < i; ++j) pre[j] = e[j];
                pre[i] = e[i] - 1;
                for (std::size_t j = i + 1; j < n; ++j) suf[j] = e[j];
                Rational coef = c * e[i];
                if (odd_d && is_odd(prefix_degree)) coef = -coef;
                Polynomial term = mul(mul(Polynomial::monomial(cp, pre, coef), img),
                                      Polynomial::monomial(cp, suf));
                out += term;
            }
            prefix_degree += e[i] * chart.degree(i);
        }
    }
    return out;
}

/// [D1, D2] = D1 D2 - (-1)^{|D1||D2|} D2 D1.
inline Derivation commutator(const Derivation& a, const Derivation& b) {
    if (!same_chart(a.chart(), b.chart())) throw ChartMismatch("commutator");
    const bool minus = !(is_odd(a.degree()) && is_odd(b.degree()));
    std::vector<Polynomial> images;
    images.reserve(a.chart()->size());
    for (std::size_t i = 0; i < a.chart()->size(); ++i) {
        Polynomial ab = apply_derivation(a, b.image(i));
        Polynomial ba = apply_derivation(b, a.image(i));
        images.push_back(minus ? ab - ba : ab + ba);
    }
    return Derivation(a.chart(), a.degree() + b.degree(), std::move(images));
}

inline Derivation operator+(const Derivation& a, const Derivation& b) {
    if (!same_chart(a.chart(), b.chart())) throw ChartMismatch("derivation sum");
    if (a.degree() != b.degree()) throw DegreeError("cannot add derivations of different degree");
    std::vector<Polynomial> images;
    for (std::size_t i = 0; i < a.images().size(); ++i) images.push_back(a.image(i) + b.image(i));
    return Derivation(a.chart(), a.degree(), std::move(images));
}

inline Derivation operator*(const Rational& s, const Derivation& d) {
    std::vector<Polynomial> images;
    for (const auto& p : d.images()) images.push_back(s * p);
    return Derivation(d.chart(), d.degree(), std::move(images));
}

/// Degree-0 algebra morphism from `source` to the chart of `images`, applied to f.
/// images[i] is the image of source coordinate i.
inline Polynomial pullback(const ChartPtr& source, std::span<const Polynomial> images, const Polynomial& f) {
    if (!same_chart(f.chart(), source)) throw ChartMismatch("pullback");
    if (images.size() != source->size())
        throw Error("pullback needs an image for every coordinate of the source chart (" +
                    std::to_string(images.size()) + " given, " + std::to_string(source->size()) + " needed)");
    if (images.empty()) {
        throw Error("pullback into an empty image list needs a target chart");
    }
    const ChartPtr& target = images[0].chart();
    for (std::size_t i = 0; i < images.size(); ++i) {
        if (!same_chart(images[i].chart(), target)) throw ChartMismatch("pullback images");
        if (!images[i].is_homogeneous((*source)[i].degree))
            throw DegreeError("image of '" + (*source)[i].name + "' must be homogeneous of degree " +
                              std::to_string((*source)[i].degree));
    }
    std::vector<std::vector<Polynomial>> powers(images.size());
    auto power = [&](std::size_t i, int k) -> const Polynomial& {
        auto& cache = powers[i];
        if (cache.empty()) cache.push_back(Polynomial::constant(target, 1));
        while (static_cast<int>(cache.size()) <= k) cache.push_back(mul(cache.back(), images[i]));
        return cache[k];
    };
    Polynomial out(target);
    for (const auto& [e, c] : f.terms()) {
        Polynomial term = Polynomial::constant(target, c);
        for (std::size_t i = 0; i < e.size(); ++i)
            if (e[i] != 0) term = mul(term, power(i, e[i]));
        out += term;
    }
    return out;
}

/// Pullback with an explicit target chart, so that an empty source chart is allowed.
inline Polynomial pullback(const ChartPtr& source, const ChartPtr& target, std::span<const Polynomial> images,
                           const Polynomial& f) {
    if (source->size() == 0) {
        if (!same_chart(f.chart(), source)) throw ChartMismatch("pullback");
        return Polynomial::constant(target, f.constant_term());
    }
    return pullback(source, images, f);
}

} // namespace hpoisson
