#pragma once

#include "document.hpp"

#include <algorithm>
#include <sstream>
#include <string>
#include <vector>

namespace hpoisson::format {

/// Terms in canonical order: fewer factors first, then by chart position of the leading factor.
inline std::vector<std::pair<Exponents, Rational>> canonical_terms(const Polynomial& f) {
    std::vector<std::pair<Exponents, Rational>> terms(f.terms().begin(), f.terms().end());
    std::sort(terms.begin(), terms.end(), [](const auto& a, const auto& b) {
        const int da = hpoisson::detail::factor_count(a.first), db = hpoisson::detail::factor_count(b.first);
        if (da != db) return da < db;
        return a.first > b.first;
    });
    return terms;
}

inline std::string render(const Rational& r) { return r.get_str(); }

inline std::string render(const Polynomial& f) {
    if (f.is_zero()) return "0";
    const Chart& chart = *f.chart();
    std::string out;
    bool first = true;
    for (const auto& [e, c] : canonical_terms(f)) {
        const bool neg = sgn(c) < 0;
        if (first) out += neg ? "-" : "";
        else out += neg ? " - " : " + ";
        first = false;
        const Rational a = neg ? Rational(-c) : c;
        std::string mono;
        for (std::size_t i = 0; i < e.size(); ++i) {
            if (e[i] == 0) continue;
            if (!mono.empty()) mono += "*";
            mono += chart[i].name;
            if (e[i] > 1) mono += "^" + std::to_string(e[i]);
        }
        if (mono.empty()) out += render(a);
        else if (a == 1) out += mono;
        else out += render(a) + "*" + mono;
    }
    return out;
}

/// A vector rendered as a linear combination of the given names.
inline std::string render(const Vector& v, const std::vector<std::string>& names) {
    std::vector<Coordinate> coords;
    for (const auto& n : names) coords.push_back({n, 0});
    ChartPtr chart = Chart::make(std::move(coords));
    Polynomial f(chart);
    for (std::size_t i = 0; i < v.size(); ++i)
        if (v[i] != 0) f += Polynomial::coordinate(chart, i, v[i]);
    return render(f);
}

/// Nonzero images of a derivation, one `coord -> image` pair per line.
inline std::string render(const Derivation& d) {
    std::string out;
    for (std::size_t i = 0; i < d.images().size(); ++i) {
        if (d.image(i).is_zero()) continue;
        if (!out.empty()) out += "; ";
        out += (*d.chart())[i].name + " -> " + render(d.image(i));
    }
    return out.empty() ? "0" : out;
}

namespace detail {

inline std::vector<std::string> names_of(const GradedLieAlgebra& g) {
    std::vector<std::string> out;
    for (const auto& b : g.basis()) out.push_back(b.name);
    return out;
}

struct Renderer {
    std::ostringstream os;

    void operator()(const ChartDecl& d) {
        os << "chart " << d.name << " {\n";
        for (const auto& c : d.chart->coordinates()) os << "  coord " << c.name << " : " << c.degree << ";\n";
        os << "}\n";
    }
    void operator()(const CotangentDecl& d) { os << "cotangent " << d.name << " = T*[" << d.cc.shift() << "] " << d.base << ";\n"; }
    void operator()(const PolyDecl& d) { os << "poly " << d.name << " on " << d.space << " = " << render(d.value) << ";\n"; }
    void operator()(const HomotopyPoissonDecl& d) {
        os << "homotopy-poisson " << d.name << " on " << d.space << " {\n  pi = " << render(d.pi) << ";\n}\n";
    }
    void operator()(const LieDecl& d) {
        const auto& g = d.algebra;
        const auto names = names_of(g);
        os << "lie-algebra " << d.name << " {\n";
        for (const auto& b : g.basis()) os << "  basis " << b.name << " : " << b.degree << ";\n";
        for (std::size_t i = 0; i < g.dim(); ++i)
            for (std::size_t j = i; j < g.dim(); ++j) {
                const Vector& v = g.constants()[i][j];
                if (!is_zero_vector(v)) os << "  bracket [" << names[i] << ", " << names[j] << "] = " << render(v, names) << ";\n";
            }
        os << "}\n";
    }
    void operator()(const BialgebraDecl& d) {
        const auto& b = d.bialgebra;
        os << "bialgebra " << d.name << " over " << d.over << " shift " << b.shift() << " {\n";
        for (std::size_t i = 0; i < b.algebra().dim(); ++i)
            if (!b.dhat().image(i).is_zero()) os << "  d " << b.algebra().name(i) << " = " << render(b.dhat().image(i)) << ";\n";
        os << "}\n";
    }
    void operator()(const CourantDecl& d) {
        const auto& c = d.data;
        const auto gnames = names_of(c.g);
        const std::size_t r = c.a_names.size();
        os << "courant " << d.name << " over " << d.over << " {\n";
        for (const auto& a : c.a_names) os << "  element " << a << ";\n";
        for (std::size_t i = 0; i < r; ++i)
            for (std::size_t j = 0; j < r; ++j)
                if (!is_zero_vector(c.a_bracket[i][j]))
                    os << "  bracket [[" << c.a_names[i] << ", " << c.a_names[j] << "]] = " << render(c.a_bracket[i][j], c.a_names)
                       << ";\n";
        for (std::size_t j = 0; j < r; ++j) {
            Vector col(c.g.dim(), 0);
            for (std::size_t i = 0; i < c.g.dim(); ++i) col[i] = c.p[i][j];
            if (!is_zero_vector(col)) os << "  p " << c.a_names[j] << " = " << render(col, gnames) << ";\n";
        }
        os << "}\n";
    }
    void operator()(const MatchedPairDecl& d) {
        const auto& m = d.data;
        const auto gnames = names_of(m.g);
        const auto& h = m.h_names;
        os << "matched-pair " << d.name << " over " << d.over << " {\n";
        for (const auto& n : h) os << "  h " << n << ";\n";
        for (std::size_t i = 0; i < h.size(); ++i)
            for (std::size_t j = i + 1; j < h.size(); ++j)
                if (!is_zero_vector(m.h_dual_bracket[i][j]))
                    os << "  dual-bracket [" << h[i] << ", " << h[j] << "] = " << render(m.h_dual_bracket[i][j], h) << ";\n";
        for (std::size_t a = 0; a < gnames.size(); ++a)
            for (std::size_t i = 0; i < h.size(); ++i)
                if (!is_zero_vector(m.g_on_h[a][i]))
                    os << "  act " << gnames[a] << " . " << h[i] << " = " << render(m.g_on_h[a][i], h) << ";\n";
        for (std::size_t i = 0; i < h.size(); ++i)
            for (std::size_t a = 0; a < gnames.size(); ++a)
                if (!is_zero_vector(m.hdual_on_gdual[i][a]))
                    os << "  coact " << h[i] << " . " << gnames[a] << " = " << render(m.hdual_on_gdual[i][a], gnames) << ";\n";
        os << "}\n";
    }
    void operator()(const ActionDecl& d) {
        os << "action " << d.name << " on " << d.space << " by " << d.by << " {\n";
        for (std::size_t i = 0; i < d.rho.size(); ++i) {
            const auto& X = d.rho[i];
            for (std::size_t k = 0; k < X.images().size(); ++k)
                if (!X.image(k).is_zero())
                    os << "  " << basis[i] << "(" << (*X.chart())[k].name << ") = " << render(X.image(k)) << ";\n";
        }
        os << "}\n";
    }
    void operator()(const MomentDecl& d) {
        os << "moment-map " << d.name << " on " << d.space << " by " << d.by << " {\n";
        for (std::size_t i = 0; i < d.images.size(); ++i)
            if (!d.images[i].is_zero()) os << "  " << basis[i] << " = " << render(d.images[i]) << ";\n";
        os << "}\n";
    }
    void operator()(const ReductionDecl& d) {
        os << "reduction " << d.name << " {\n";
        os << "  structure " << d.structure << ";\n";
        os << "  action " << d.action << ";\n";
        if (d.moment) os << "  moment-map " << *d.moment << ";\n";
        os << "  quotient " << d.quotient << ";\n";
        for (std::size_t i = 0; i < d.images.size(); ++i)
            os << "  image " << quotient_names[i] << " = " << render(d.images[i]) << ";\n";
        if (d.expect) os << "  expect = " << render(*d.expect) << ";\n";
        os << "}\n";
    }

    std::vector<std::string> basis;          // for actions and moment maps
    std::vector<std::string> quotient_names; // for reductions
};

} // namespace detail

/// Canonical text of a document; parse(render(d)) == d.
inline std::string render(const Document& doc) {
    detail::Renderer r;
    bool first = true;
    for (const auto& decl : doc.declarations) {
        if (!first) r.os << "\n";
        first = false;
        const std::string* by = nullptr;
        if (auto* a = std::get_if<ActionDecl>(&decl)) by = &a->by;
        if (auto* m = std::get_if<MomentDecl>(&decl)) by = &m->by;
        if (by) {
            auto* b = doc.find_as<BialgebraDecl>(*by);
            r.basis = b ? detail::names_of(b->bialgebra.algebra()) : std::vector<std::string>{};
        }
        if (auto* red = std::get_if<ReductionDecl>(&decl)) {
            r.quotient_names.clear();
            if (auto* q = doc.find_as<CotangentDecl>(red->quotient))
                for (const auto& c : q->cc.chart()->coordinates()) r.quotient_names.push_back(c.name);
        }
        std::visit(r, decl);
    }
    if (!doc.tasks.empty() && !doc.declarations.empty()) r.os << "\n";
    for (const auto& t : doc.tasks) {
        r.os << "task " << t.kind;
        for (const auto& a : t.args) r.os << " " << a;
        if (t.name != default_task_name(t.kind, t.args)) r.os << " as " << t.name;
        r.os << ";\n";
    }
    return r.os.str();
}

} // namespace hpoisson::format
