#pragma once

#include "document.hpp"
#include "lexer.hpp"

#include <algorithm>
#include <charconv>
#include <functional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace hpoisson::format {

namespace detail {

inline constexpr int max_nesting = 200;
inline constexpr int max_exponent = 32;
inline constexpr int max_parse_degree = 64;
inline constexpr std::size_t max_terms = 100000;

class Parser {
public:
    explicit Parser(std::string_view src) : toks_(tokenize(src)) {}

    Document run() {
        while (peek().kind != Tok::End) {
            const Token& t = peek();
            if (t.kind != Tok::Ident) fail(t, "expected a declaration or task");
            const std::string& w = t.text;
            if (w == "chart") chart();
            else if (w == "cotangent") cotangent();
            else if (w == "poly") poly();
            else if (w == "homotopy-poisson") homotopy_poisson();
            else if (w == "lie-algebra") lie_algebra();
            else if (w == "bialgebra") bialgebra();
            else if (w == "courant") courant();
            else if (w == "matched-pair") matched_pair();
            else if (w == "action") action();
            else if (w == "moment-map") moment_map();
            else if (w == "reduction") reduction();
            else if (w == "task") task();
            else fail(t, "unknown declaration '" + w + "'");
        }
        return std::move(doc_);
    }

    Polynomial expression_only(const ChartPtr& chart) {
        Polynomial f = polynomial(chart);
        if (peek().kind != Tok::End) fail(peek(), "unexpected " + describe(peek()) + " after expression");
        return f;
    }

private:
    std::vector<Token> toks_;
    std::size_t pos_ = 0;
    Document doc_;
    int depth_ = 0;

    // --- token helpers ---------------------------------------------------

    const Token& peek(std::size_t k = 0) const { return toks_[std::min(pos_ + k, toks_.size() - 1)]; }
    const Token& next() {
        const Token& t = peek();
        if (pos_ < toks_.size() - 1) ++pos_;
        return t;
    }
    [[noreturn]] static void fail(const Token& t, const std::string& msg) { throw ParseError(t.loc, msg); }
    static std::string describe(const Token& t) {
        if (t.kind == Tok::End) return "end of input";
        return "'" + t.text + "'";
    }

    bool at_punct(char c) const { return peek().kind == Tok::Punct && peek().text[0] == c; }
    bool at_word(std::string_view w) const { return peek().kind == Tok::Ident && peek().text == w; }

    void expect_punct(char c) {
        if (!at_punct(c)) fail(peek(), std::string("expected '") + c + "', found " + describe(peek()));
        next();
    }
    void expect_word(std::string_view w) {
        if (!at_word(w)) fail(peek(), "expected '" + std::string(w) + "', found " + describe(peek()));
        next();
    }
    const Token& ident() {
        if (peek().kind != Tok::Ident) fail(peek(), "expected a name, found " + describe(peek()));
        return next();
    }
    long integer() {
        bool neg = false;
        if (at_punct('-')) {
            next();
            neg = true;
        }
        if (peek().kind != Tok::Int) fail(peek(), "expected an integer, found " + describe(peek()));
        const Token& t = next();
        long v = 0;
        std::from_chars(t.text.data(), t.text.data() + t.text.size(), v);
        return neg ? -v : v;
    }

    /// Name for a new declaration; rejects redeclaration.
    const Token& fresh_name() {
        const Token& t = ident();
        if (t.text == "as") fail(t, "'as' is reserved");
        if (doc_.find(t.text)) fail(t, "'" + t.text + "' is already declared");
        return t;
    }

    template <class T>
    const T& lookup(const Token& t, const char* what) const {
        const Declaration* d = doc_.find(t.text);
        if (!d) fail(t, "undeclared name '" + t.text + "'");
        const T* x = std::get_if<T>(d);
        if (!x) fail(t, "'" + t.text + "' is not a " + what);
        return *x;
    }

    ChartPtr space(const Token& t) const {
        ChartPtr c = doc_.space_chart(t.text);
        if (!c) {
            if (!doc_.find(t.text)) fail(t, "undeclared name '" + t.text + "'");
            fail(t, "'" + t.text + "' is not a chart or cotangent space");
        }
        return c;
    }

    // Library validation failures inside a declaration become located parse errors.
    template <class F>
    auto guarded(const Token& at, F&& f) -> decltype(f()) {
        try {
            return f();
        } catch (const ParseError&) {
            throw;
        } catch (const Error& e) {
            fail(at, e.what());
        }
    }

    // --- expressions -----------------------------------------------------

    struct Depth {
        Parser& p;
        explicit Depth(Parser& q) : p(q) {
            if (++p.depth_ > max_nesting) fail(p.peek(), "expression nested too deeply");
        }
        ~Depth() { --p.depth_; }
    };

    void check_size(const Polynomial& f, const Token& at) const {
        if (f.term_count() > max_terms) fail(at, "expression too large");
    }

    Polynomial expr(const ChartPtr& chart) {
        Depth guard(*this);
        Polynomial acc = term(chart);
        while (at_punct('+') || at_punct('-')) {
            const Token& op = next();
            Polynomial t = term(chart);
            if (op.text == "+") acc += t;
            else acc -= t;
            check_size(acc, op);
        }
        return acc;
    }

    Polynomial term(const ChartPtr& chart) {
        Polynomial acc = factor(chart);
        while (at_punct('*')) {
            const Token& op = next();
            Polynomial f = factor(chart);
            acc = mul(acc, f);
            check_size(acc, op);
        }
        return acc;
    }

    Polynomial factor(const ChartPtr& chart) {
        Depth guard(*this);
        if (at_punct('-')) {
            next();
            Polynomial f = factor(chart);
            f *= Rational(-1);
            return f;
        }
        const Token& start = peek();
        Polynomial base = primary(chart);
        if (at_punct('^')) {
            next();
            const Token& et = peek();
            if (et.kind != Tok::Int) fail(et, "expected an exponent, found " + describe(et));
            long e = integer();
            if (e > max_exponent) fail(et, "exponent larger than " + std::to_string(max_exponent));
            Polynomial out = Polynomial::constant(chart, 1);
            for (long i = 0; i < e; ++i) {
                out = mul(out, base);
                check_size(out, start);
            }
            return out;
        }
        return base;
    }

    Polynomial primary(const ChartPtr& chart) {
        const Token& t = peek();
        if (t.kind == Tok::Int) {
            long num = integer();
            long den = 1;
            if (at_punct('/')) {
                next();
                const Token& dt = peek();
                if (dt.kind != Tok::Int) fail(dt, "expected a denominator, found " + describe(dt));
                den = integer();
                if (den == 0) fail(dt, "zero denominator");
            }
            return Polynomial::constant(chart, make_rational(num, den));
        }
        if (t.kind == Tok::Ident) {
            next();
            auto idx = chart->find(t.text);
            if (!idx) fail(t, "unknown coordinate '" + t.text + "'");
            return Polynomial::coordinate(chart, *idx);
        }
        if (at_punct('(')) {
            next();
            Polynomial e = expr(chart);
            expect_punct(')');
            return e;
        }
        fail(t, "expected an expression, found " + describe(t));
    }

    /// An expression guarded against runaway degree.
    Polynomial polynomial(const ChartPtr& chart) {
        const Token& at = peek();
        const int lim = hpoisson::detail::degree_limit;
        DegreeGuard dg(lim < 0 ? max_parse_degree : std::min(lim, max_parse_degree));
        try {
            return expr(chart);
        } catch (const DegreeLimitExceeded&) {
            fail(at, "expression degree too large");
        }
    }

    /// A linear combination of the given names.
    Vector linear(const std::vector<std::string>& names) {
        std::vector<Coordinate> coords;
        for (const auto& n : names) coords.push_back({n, 0});
        ChartPtr chart = Chart::make(std::move(coords));
        const Token& at = peek();
        Polynomial f = polynomial(chart);
        Vector v(names.size(), 0);
        for (const auto& [e, c] : f.terms()) {
            auto it = std::find(e.begin(), e.end(), 1);
            if (hpoisson::detail::factor_count(e) != 1) fail(at, "expected a linear combination of basis elements");
            v[static_cast<std::size_t>(it - e.begin())] = c;
        }
        return v;
    }

    std::size_t index_in(const std::vector<std::string>& names, const Token& t, const char* what) const {
        auto it = std::find(names.begin(), names.end(), t.text);
        if (it == names.end()) fail(t, "'" + t.text + "' is not " + what);
        return static_cast<std::size_t>(it - names.begin());
    }

    static std::vector<std::string> basis_names(const GradedLieAlgebra& g) {
        std::vector<std::string> out;
        for (const auto& b : g.basis()) out.push_back(b.name);
        return out;
    }

    void once(std::set<std::string>& seen, const Token& at, const std::string& key) {
        if (!seen.insert(key).second) fail(at, "'" + key + "' is given twice");
    }

    // --- declarations ----------------------------------------------------

    void chart() {
        const Token& kw = next();
        const Token& name = fresh_name();
        expect_punct('{');
        std::vector<Coordinate> coords;
        std::set<std::string> seen;
        while (!at_punct('}')) {
            expect_word("coord");
            const Token& c = ident();
            once(seen, c, c.text);
            expect_punct(':');
            long d = integer();
            if (d < -1000 || d > 1000) fail(c, "degree out of range");
            expect_punct(';');
            coords.push_back({c.text, static_cast<int>(d)});
        }
        expect_punct('}');
        doc_.declarations.push_back(ChartDecl{name.text, guarded(kw, [&] { return Chart::make(coords); })});
    }

    void cotangent() {
        next();
        const Token& name = fresh_name();
        expect_punct('=');
        expect_word("T");
        expect_punct('*');
        expect_punct('[');
        const Token& nt = peek();
        long n = integer();
        if (n > 1000) fail(nt, "shift out of range");
        expect_punct(']');
        const Token& base = ident();
        const auto& cd = lookup<ChartDecl>(base, "chart");
        expect_punct(';');
        CotangentChart cc = guarded(nt, [&] { return CotangentChart(cd.chart, static_cast<int>(n)); });
        doc_.declarations.push_back(CotangentDecl{name.text, base.text, std::move(cc)});
    }

    void poly() {
        next();
        const Token& name = fresh_name();
        expect_word("on");
        const Token& sp = ident();
        ChartPtr chart = space(sp);
        expect_punct('=');
        Polynomial f = polynomial(chart);
        expect_punct(';');
        doc_.declarations.push_back(PolyDecl{name.text, sp.text, std::move(f)});
    }

    void homotopy_poisson() {
        next();
        const Token& name = fresh_name();
        expect_word("on");
        const Token& sp = ident();
        const auto& cd = lookup<CotangentDecl>(sp, "cotangent space");
        expect_punct('{');
        expect_word("pi");
        expect_punct('=');
        Polynomial pi = polynomial(cd.cc.chart());
        expect_punct(';');
        expect_punct('}');
        doc_.declarations.push_back(HomotopyPoissonDecl{name.text, sp.text, std::move(pi)});
    }

    void lie_algebra() {
        const Token& kw = next();
        const Token& name = fresh_name();
        expect_punct('{');
        std::vector<BasisElement> basis;
        std::vector<std::string> names;
        while (at_word("basis")) {
            next();
            const Token& b = ident();
            if (std::find(names.begin(), names.end(), b.text) != names.end()) fail(b, "'" + b.text + "' is given twice");
            expect_punct(':');
            long d = integer();
            if (d < -1000 || d > 1000) fail(b, "degree out of range");
            expect_punct(';');
            basis.push_back({b.text, static_cast<int>(d)});
            names.push_back(b.text);
        }
        const std::size_t dim = basis.size();
        StructureConstants c = zero_constants(dim, dim, dim);
        std::set<std::string> seen;
        while (at_word("bracket")) {
            next();
            expect_punct('[');
            const Token& a = ident();
            std::size_t i = index_in(names, a, "a basis element");
            expect_punct(',');
            const Token& b = ident();
            std::size_t j = index_in(names, b, "a basis element");
            expect_punct(']');
            once(seen, a, "[" + names[std::min(i, j)] + ", " + names[std::max(i, j)] + "]");
            expect_punct('=');
            Vector v = linear(names);
            expect_punct(';');
            // graded antisymmetry fills the mirror entry
            const Rational s = is_odd(basis[i].degree * basis[j].degree) ? 1 : -1;
            if (i == j && s == -1 && !is_zero_vector(v)) fail(a, "self-bracket of an even element must vanish");
            for (std::size_t k = 0; k < dim; ++k) {
                c[i][j][k] = v[k];
                c[j][i][k] = s * v[k];
            }
        }
        expect_punct('}');
        auto g = guarded(kw, [&] { return GradedLieAlgebra::make(basis, c); });
        doc_.declarations.push_back(LieDecl{name.text, std::move(g)});
    }

    void bialgebra() {
        const Token& kw = next();
        const Token& name = fresh_name();
        expect_word("over");
        const Token& over = ident();
        const GradedLieAlgebra& g = lookup<LieDecl>(over, "lie algebra").algebra;
        expect_word("shift");
        const Token& nt = peek();
        long n = integer();
        if (n < 1 || n > 1000) fail(nt, "shift must be between 1 and 1000");
        ChartPtr dual = realize_shifted_dual(g, static_cast<int>(n)).chart;
        expect_punct('{');
        std::vector<Polynomial> images(g.dim(), Polynomial(dual));
        std::set<std::string> seen;
        const auto names = basis_names(g);
        while (!at_punct('}')) {
            expect_word("d");
            const Token& e = ident();
            std::size_t i = index_in(names, e, "a basis element");
            once(seen, e, e.text);
            expect_punct('=');
            images[i] = polynomial(dual);
            expect_punct(';');
        }
        expect_punct('}');
        auto b = guarded(kw, [&] { return HomotopyLieBialgebra(g, static_cast<int>(n), images); });
        doc_.declarations.push_back(BialgebraDecl{name.text, over.text, std::move(b)});
    }

    void courant() {
        next();
        const Token& name = fresh_name();
        expect_word("over");
        const Token& over = ident();
        const GradedLieAlgebra& g = lookup<LieDecl>(over, "lie algebra").algebra;
        for (std::size_t i = 0; i < g.dim(); ++i)
            if (g.degree(i) != 0) fail(over, "a Courant algebra needs an ordinary Lie algebra");
        expect_punct('{');
        std::vector<std::string> names;
        while (at_word("element")) {
            next();
            const Token& e = ident();
            if (std::find(names.begin(), names.end(), e.text) != names.end()) fail(e, "'" + e.text + "' is given twice");
            expect_punct(';');
            names.push_back(e.text);
        }
        const std::size_t r = names.size();
        CourantAlgebraData data{g, names, zero_constants(r, r, r), zero_matrix(g.dim(), r)};
        std::set<std::string> seen;
        const auto gnames = basis_names(g);
        while (!at_punct('}')) {
            if (at_word("bracket")) {
                next();
                expect_punct('[');
                expect_punct('[');
                const Token& a = ident();
                std::size_t i = index_in(names, a, "an element");
                expect_punct(',');
                const Token& b = ident();
                std::size_t j = index_in(names, b, "an element");
                expect_punct(']');
                expect_punct(']');
                once(seen, a, "[[" + a.text + ", " + b.text + "]]");
                expect_punct('=');
                Vector v = linear(names);
                expect_punct(';');
                for (std::size_t k = 0; k < r; ++k) data.a_bracket[i][j][k] = v[k];
            } else if (at_word("p")) {
                next();
                const Token& a = ident();
                std::size_t j = index_in(names, a, "an element");
                once(seen, a, "p " + a.text);
                expect_punct('=');
                Vector v = linear(gnames);
                expect_punct(';');
                for (std::size_t i = 0; i < g.dim(); ++i) data.p[i][j] = v[i];
            } else {
                fail(peek(), "expected 'bracket', 'p' or '}', found " + describe(peek()));
            }
        }
        expect_punct('}');
        doc_.declarations.push_back(CourantDecl{name.text, over.text, std::move(data)});
    }

    void matched_pair() {
        next();
        const Token& name = fresh_name();
        expect_word("over");
        const Token& over = ident();
        const GradedLieAlgebra& g = lookup<LieDecl>(over, "lie algebra").algebra;
        for (std::size_t i = 0; i < g.dim(); ++i)
            if (g.degree(i) != 0) fail(over, "a matched pair needs an ordinary Lie algebra");
        expect_punct('{');
        std::vector<std::string> names;
        while (at_word("h")) {
            next();
            const Token& e = ident();
            if (std::find(names.begin(), names.end(), e.text) != names.end()) fail(e, "'" + e.text + "' is given twice");
            expect_punct(';');
            names.push_back(e.text);
        }
        const std::size_t r = names.size(), m = g.dim();
        MatchedPairData data{g, names, zero_constants(r, r, r), zero_constants(m, r, r), zero_constants(r, m, m)};
        std::set<std::string> seen;
        const auto gnames = basis_names(g);
        while (!at_punct('}')) {
            if (at_word("dual-bracket")) {
                next();
                expect_punct('[');
                const Token& a = ident();
                std::size_t i = index_in(names, a, "an element of h");
                expect_punct(',');
                const Token& b = ident();
                std::size_t j = index_in(names, b, "an element of h");
                expect_punct(']');
                if (i == j) fail(a, "self-bracket of an even element must vanish");
                once(seen, a, "[" + names[std::min(i, j)] + ", " + names[std::max(i, j)] + "]");
                expect_punct('=');
                Vector v = linear(names);
                expect_punct(';');
                for (std::size_t k = 0; k < r; ++k) {
                    data.h_dual_bracket[i][j][k] = v[k];
                    data.h_dual_bracket[j][i][k] = -v[k];
                }
            } else if (at_word("act")) {
                next();
                const Token& a = ident();
                std::size_t ia = index_in(gnames, a, "a basis element of the algebra");
                expect_punct('.');
                const Token& b = ident();
                std::size_t ib = index_in(names, b, "an element of h");
                once(seen, a, "act " + a.text + " . " + b.text);
                expect_punct('=');
                Vector v = linear(names);
                expect_punct(';');
                for (std::size_t k = 0; k < r; ++k) data.g_on_h[ia][ib][k] = v[k];
            } else if (at_word("coact")) {
                next();
                const Token& a = ident();
                std::size_t ia = index_in(names, a, "an element of h");
                expect_punct('.');
                const Token& b = ident();
                std::size_t ib = index_in(gnames, b, "a basis element of the algebra");
                once(seen, a, "coact " + a.text + " . " + b.text);
                expect_punct('=');
                Vector v = linear(gnames);
                expect_punct(';');
                for (std::size_t k = 0; k < m; ++k) data.hdual_on_gdual[ia][ib][k] = v[k];
            } else {
                fail(peek(), "expected 'dual-bracket', 'act', 'coact' or '}', found " + describe(peek()));
            }
        }
        expect_punct('}');
        doc_.declarations.push_back(MatchedPairDecl{name.text, over.text, std::move(data)});
    }

    void action() {
        const Token& kw = next();
        const Token& name = fresh_name();
        expect_word("on");
        const Token& sp = ident();
        ChartPtr chart = space(sp);
        expect_word("by");
        const Token& by = ident();
        const auto& b = lookup<BialgebraDecl>(by, "bialgebra").bialgebra;
        const auto& g = b.algebra();
        const auto names = basis_names(g);
        expect_punct('{');
        std::vector<std::vector<Polynomial>> images(g.dim(), std::vector<Polynomial>(chart->size(), Polynomial(chart)));
        std::set<std::string> seen;
        while (!at_punct('}')) {
            const Token& e = ident();
            std::size_t i = index_in(names, e, "a basis element");
            expect_punct('(');
            const Token& c = ident();
            auto ci = chart->find(c.text);
            if (!ci) fail(c, "unknown coordinate '" + c.text + "'");
            expect_punct(')');
            once(seen, e, e.text + "(" + c.text + ")");
            expect_punct('=');
            images[i][*ci] = polynomial(chart);
            expect_punct(';');
        }
        expect_punct('}');
        std::vector<Derivation> rho;
        for (std::size_t i = 0; i < g.dim(); ++i)
            rho.push_back(guarded(kw, [&] { return Derivation(chart, g.degree(i), images[i]); }));
        doc_.declarations.push_back(ActionDecl{name.text, sp.text, by.text, std::move(rho)});
    }

    void moment_map() {
        next();
        const Token& name = fresh_name();
        expect_word("on");
        const Token& sp = ident();
        const auto& cd = lookup<CotangentDecl>(sp, "cotangent space");
        expect_word("by");
        const Token& by = ident();
        const auto& g = lookup<BialgebraDecl>(by, "bialgebra").bialgebra.algebra();
        const auto names = basis_names(g);
        expect_punct('{');
        std::vector<Polynomial> images(g.dim(), Polynomial(cd.cc.chart()));
        std::set<std::string> seen;
        while (!at_punct('}')) {
            const Token& e = ident();
            std::size_t i = index_in(names, e, "a basis element");
            once(seen, e, e.text);
            expect_punct('=');
            images[i] = polynomial(cd.cc.chart());
            expect_punct(';');
        }
        expect_punct('}');
        doc_.declarations.push_back(MomentDecl{name.text, sp.text, by.text, std::move(images)});
    }

    void reduction() {
        const Token& kw = next();
        const Token& name = fresh_name();
        expect_punct('{');
        ReductionDecl r;
        r.name = name.text;

        expect_word("structure");
        const Token& st = ident();
        const auto& hp = lookup<HomotopyPoissonDecl>(st, "homotopy-poisson structure");
        const auto& cd = lookup<CotangentDecl>(Token{Tok::Ident, hp.space, st.loc}, "cotangent space");
        expect_punct(';');
        r.structure = st.text;

        expect_word("action");
        const Token& at = ident();
        const auto& act = lookup<ActionDecl>(at, "action");
        if (act.space != hp.space && act.space != cd.base) fail(at, "action must be on the structure's space or its base");
        expect_punct(';');
        r.action = at.text;

        if (at_word("moment-map")) {
            next();
            const Token& mt = ident();
            const auto& mm = lookup<MomentDecl>(mt, "moment map");
            if (mm.space != hp.space) fail(mt, "moment map must be on the structure's space");
            if (mm.by != act.by) fail(mt, "moment map and action use different bialgebras");
            expect_punct(';');
            r.moment = mt.text;
        }

        expect_word("quotient");
        const Token& qt = ident();
        const auto& qd = lookup<CotangentDecl>(qt, "cotangent space");
        expect_punct(';');
        r.quotient = qt.text;

        const ChartPtr& src = cd.cc.chart();
        const ChartPtr& qchart = qd.cc.chart();
        std::vector<std::optional<Polynomial>> images(qchart->size());
        while (at_word("image")) {
            next();
            const Token& c = ident();
            auto ci = qchart->find(c.text);
            if (!ci) fail(c, "unknown coordinate '" + c.text + "' of the quotient");
            if (images[*ci]) fail(c, "'" + c.text + "' is given twice");
            expect_punct('=');
            images[*ci] = polynomial(src);
            expect_punct(';');
        }
        if (at_word("expect")) {
            next();
            expect_punct('=');
            r.expect = polynomial(qchart);
            expect_punct(';');
        }
        const Token& close = peek();
        expect_punct('}');
        for (std::size_t i = 0; i < images.size(); ++i) {
            if (!images[i]) fail(close, "no image given for quotient coordinate '" + (*qchart)[i].name + "'");
            r.images.push_back(std::move(*images[i]));
        }
        (void)kw;
        doc_.declarations.push_back(std::move(r));
    }

    void task() {
        next();
        const Token& kind = ident();
        if (std::find(task_kinds.begin(), task_kinds.end(), kind.text) == task_kinds.end())
            fail(kind, "unknown task kind '" + kind.text + "'");
        Task t{kind.text, {}, {}};
        while (!at_punct(';') && !at_word("as")) {
            const Token& a = peek();
            if (a.kind != Tok::Ident && a.kind != Tok::Int) fail(a, "expected a task argument, found " + describe(a));
            t.args.push_back(next().text);
        }
        t.name = default_task_name(t.kind, t.args);
        if (at_word("as")) {
            next();
            t.name = ident().text;
        }
        expect_punct(';');
        validate(kind, t);
        for (const auto& other : doc_.tasks)
            if (other.name == t.name) fail(kind, "a task named '" + t.name + "' already exists");
        doc_.tasks.push_back(std::move(t));
    }

    // Argument shapes and reference kinds for each task.
    void validate(const Token& at, const Task& t) const {
        auto arg = [&](std::size_t i) { return Token{Tok::Ident, t.args[i], at.loc}; };
        auto arity = [&](std::size_t n) {
            if (t.args.size() != n)
                fail(at, t.kind + " takes " + std::to_string(n) + " argument" + (n == 1 ? "" : "s"));
        };
        if (t.kind == "CHECK-HP") {
            arity(1);
            lookup<HomotopyPoissonDecl>(arg(0), "homotopy-poisson structure");
        } else if (t.kind == "BRACKET") {
            arity(2);
            const auto& a = lookup<PolyDecl>(arg(0), "polynomial");
            const auto& b = lookup<PolyDecl>(arg(1), "polynomial");
            lookup<CotangentDecl>(Token{Tok::Ident, a.space, at.loc}, "cotangent space");
            if (a.space != b.space) fail(at, "BRACKET arguments live on different spaces");
        } else if (t.kind == "DERIVED") {
            if (t.args.size() < 2) fail(at, "DERIVED takes a structure, an arity and that many polynomials");
            const auto& hp = lookup<HomotopyPoissonDecl>(arg(0), "homotopy-poisson structure");
            const std::string& ls = t.args[1];
            if (ls.empty() || !std::all_of(ls.begin(), ls.end(), ::isdigit)) fail(at, "DERIVED arity must be an integer");
            if (ls.size() > 3 || std::stoul(ls) != t.args.size() - 2)
                fail(at, "DERIVED arity does not match the number of polynomials");
            const auto& cd = lookup<CotangentDecl>(Token{Tok::Ident, hp.space, at.loc}, "cotangent space");
            for (std::size_t i = 2; i < t.args.size(); ++i) {
                const auto& f = lookup<PolyDecl>(arg(i), "polynomial");
                if (f.space != cd.base) fail(at, "'" + f.name + "' is not a function on the base of '" + hp.space + "'");
            }
        } else if (t.kind == "CHECK-BIALG") {
            arity(1);
            lookup<BialgebraDecl>(arg(0), "bialgebra");
        } else if (t.kind == "COURANT2DGLA") {
            arity(1);
            lookup<CourantDecl>(arg(0), "courant algebra");
        } else if (t.kind == "MATCHED2BIALG") {
            arity(1);
            lookup<MatchedPairDecl>(arg(0), "matched pair");
        } else if (t.kind == "CHECK-ACTION") {
            arity(1);
            lookup<ActionDecl>(arg(0), "action");
        } else {
            arity(1);
            lookup<ReductionDecl>(arg(0), "reduction");
        }
    }
};

} // namespace detail

/// Parses a document; throws ParseError with a location on any lexical, syntactic or reference error.
inline Document parse(std::string_view text) { return detail::Parser(text).run(); }

/// Parses a standalone polynomial expression on a given chart.
inline Polynomial parse_polynomial(std::string_view text, const ChartPtr& chart) {
    return detail::Parser(text).expression_only(chart);
}

} // namespace hpoisson::format
