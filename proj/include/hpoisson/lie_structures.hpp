#pragma once

// Graded Lie algebras given by structure constants, homotopy Lie bialgebras as
// differentials on the shifted dual, Courant algebras and matched pairs.

#include "homotopy_poisson.hpp"
#include "linalg.hpp"

#include <array>
#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace hpoisson {

/// c[i][j][k] is the coefficient of e_k in [e_i, e_j].
using StructureConstants = std::vector<std::vector<std::vector<Rational>>>;

inline StructureConstants zero_constants(std::size_t a, std::size_t b, std::size_t c) {
    return StructureConstants(a, std::vector<std::vector<Rational>>(b, std::vector<Rational>(c, 0)));
}

struct BasisElement {
    std::string name;
    int degree = 0;
    friend bool operator==(const BasisElement&, const BasisElement&) = default;
};

class GradedLieAlgebra {
public:
    GradedLieAlgebra() = default;

    /// Validates sizes, degree compatibility and graded antisymmetry (not Jacobi).
    static GradedLieAlgebra make(std::vector<BasisElement> basis, StructureConstants c) {
        const std::size_t d = basis.size();
        for (std::size_t i = 0; i < d; ++i)
            for (std::size_t j = i + 1; j < d; ++j)
                if (basis[i].name == basis[j].name) throw Error("duplicate basis element '" + basis[i].name + "'");
        if (c.size() != d) throw Error("structure constants have wrong size");
        for (std::size_t i = 0; i < d; ++i) {
            if (c[i].size() != d) throw Error("structure constants have wrong size");
            for (std::size_t j = 0; j < d; ++j) {
                if (c[i][j].size() != d) throw Error("structure constants have wrong size");
                for (std::size_t k = 0; k < d; ++k) {
                    if (c[i][j][k] != 0 && basis[k].degree != basis[i].degree + basis[j].degree)
                        throw DegreeError("[" + basis[i].name + ", " + basis[j].name + "] has a component along " +
                                          basis[k].name + " of the wrong degree");
                    const Rational s = is_odd(basis[i].degree * basis[j].degree) ? 1 : -1;
                    if (c[i][j][k] != s * c[j][i][k])
                        throw Error("bracket is not graded antisymmetric on (" + basis[i].name + ", " +
                                    basis[j].name + ")");
                }
            }
        }
        GradedLieAlgebra g;
        g.basis_ = std::move(basis);
        g.c_ = std::move(c);
        return g;
    }

    std::size_t dim() const { return basis_.size(); }
    const std::vector<BasisElement>& basis() const { return basis_; }
    const std::string& name(std::size_t i) const { return basis_[i].name; }
    int degree(std::size_t i) const { return basis_[i].degree; }
    const StructureConstants& constants() const { return c_; }
    const Rational& constant(std::size_t i, std::size_t j, std::size_t k) const { return c_[i][j][k]; }

    std::optional<std::size_t> find(const std::string& name) const {
        for (std::size_t i = 0; i < basis_.size(); ++i)
            if (basis_[i].name == name) return i;
        return std::nullopt;
    }

    /// Bracket of two coefficient vectors, expanded bilinearly over the basis.
    Vector bracket(const Vector& x, const Vector& y) const {
        Vector out(dim(), 0);
        for (std::size_t i = 0; i < dim(); ++i) {
            if (x[i] == 0) continue;
            for (std::size_t j = 0; j < dim(); ++j) {
                if (y[j] == 0) continue;
                for (std::size_t k = 0; k < dim(); ++k) out[k] += x[i] * y[j] * c_[i][j][k];
            }
        }
        return out;
    }

    Vector unit(std::size_t i) const {
        Vector v(dim(), 0);
        v[i] = 1;
        return v;
    }

    friend bool operator==(const GradedLieAlgebra&, const GradedLieAlgebra&) = default;

private:
    std::vector<BasisElement> basis_;
    StructureConstants c_;
};

struct JacobiReport {
    bool holds = true;
    /// First failing basis triple (i, j, k) in lexicographic order.
    std::optional<std::array<std::size_t, 3>> worst_triple;
    Vector residual;
};

/// [e_i,[e_j,e_k]] - [[e_i,e_j],e_k] - (-1)^{|e_i||e_j|} [e_j,[e_i,e_k]] on every basis triple.
inline JacobiReport check_graded_jacobi(const GradedLieAlgebra& g) {
    JacobiReport r;
    const std::size_t d = g.dim();
    for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = 0; j < d; ++j)
            for (std::size_t k = 0; k < d; ++k) {
                Vector ei = g.unit(i), ej = g.unit(j), ek = g.unit(k);
                Vector lhs = g.bracket(ei, g.bracket(ej, ek));
                Vector a = g.bracket(g.bracket(ei, ej), ek);
                Vector b = g.bracket(ej, g.bracket(ei, ek));
                const Rational s = is_odd(g.degree(i) * g.degree(j)) ? -1 : 1;
                for (std::size_t t = 0; t < d; ++t) lhs[t] -= a[t] + s * b[t];
                if (!is_zero_vector(lhs)) {
                    r.holds = false;
                    r.worst_triple = std::array<std::size_t, 3>{i, j, k};
                    r.residual = std::move(lhs);
                    return r;
                }
            }
    return r;
}

/// Functions on g*[n]: one coordinate per basis element, of degree |e_i| + n,
/// with the degree -n biderivation extending {e_i, e_j} = sum_k c_ij^k e_k.
struct ShiftedDual {
    ChartPtr chart;
    int shift = 1;
    BiderivationBracket bracket;
};

inline ShiftedDual realize_shifted_dual(const GradedLieAlgebra& g, int n) {
    std::vector<Coordinate> coords;
    for (const auto& b : g.basis()) coords.push_back({b.name, b.degree + n});
    ChartPtr chart = Chart::make(std::move(coords));
    const std::size_t d = g.dim();
    std::vector<std::vector<Polynomial>> table(d, std::vector<Polynomial>(d, Polynomial(chart)));
    for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = 0; j < d; ++j)
            for (std::size_t k = 0; k < d; ++k)
                if (g.constant(i, j, k) != 0) table[i][j] += Polynomial::coordinate(chart, k, g.constant(i, j, k));
    return {chart, n, BiderivationBracket(chart, n, std::move(table))};
}

class HomotopyLieBialgebra {
public:
    HomotopyLieBialgebra() = default;

    /// dhat_images[i] is dhat(e_i) on the shifted dual chart.
    HomotopyLieBialgebra(GradedLieAlgebra g, int n, std::vector<Polynomial> dhat_images)
        : g_(std::move(g)), dual_(realize_shifted_dual(g_, n)) {
        if (n < 1) throw Error("bialgebra shift must be at least 1");
        if (dhat_images.size() != g_.dim()) throw Error("dhat needs one image per basis element");
        std::vector<Polynomial> images;
        for (auto& p : dhat_images) images.push_back(p.rebased(dual_.chart));
        dhat_ = Derivation(dual_.chart, 1, std::move(images));
    }

    const GradedLieAlgebra& algebra() const { return g_; }
    int shift() const { return dual_.shift; }
    const ShiftedDual& dual() const { return dual_; }
    const ChartPtr& chart() const { return dual_.chart; }
    const Derivation& dhat() const { return dhat_; }

    /// The constant part of dhat (dhat(e_i) of polynomial degree 0), which obstructs flatness.
    bool flat() const {
        for (std::size_t i = 0; i < g_.dim(); ++i)
            if (dhat_.image(i).constant_term() != 0) return false;
        return true;
    }

private:
    GradedLieAlgebra g_;
    ShiftedDual dual_;
    Derivation dhat_;
};

struct BialgebraReport {
    bool jacobi = true;
    bool degree_one = true;
    bool square_zero = true;
    Derivation square;
    /// Coordinate pairs on which dhat fails to be a derivation of the bracket.
    std::vector<std::pair<std::size_t, std::size_t>> leibniz_failures;
    bool valid() const { return jacobi && degree_one && square_zero && leibniz_failures.empty(); }
};

inline BialgebraReport check_bialgebra(const HomotopyLieBialgebra& b) {
    BialgebraReport r;
    r.jacobi = check_graded_jacobi(b.algebra()).holds;
    r.degree_one = b.dhat().degree() == 1;
    r.square = commutator(b.dhat(), b.dhat());
    r.square_zero = r.square.is_zero();
    r.leibniz_failures = bracket_derivation_failures(b.dual().bracket, b.dhat());
    return r;
}

/// A linear differential d on g (d e_i = sum_k d[i][k] e_k), degree +1.
using LinearDifferential = Matrix;

/// The bialgebra of any degree n attached to a differential graded Lie algebra: dhat is the linear extension of d.
inline HomotopyLieBialgebra dgla_bialgebra(const GradedLieAlgebra& g, const LinearDifferential& d, int n) {
    ShiftedDual dual = realize_shifted_dual(g, n);
    std::vector<Polynomial> images;
    for (std::size_t i = 0; i < g.dim(); ++i) {
        Polynomial img(dual.chart);
        for (std::size_t k = 0; k < g.dim(); ++k)
            if (d[i][k] != 0) img += Polynomial::coordinate(dual.chart, k, d[i][k]);
        images.push_back(std::move(img));
    }
    return HomotopyLieBialgebra(g, n, std::move(images));
}

struct DglaReport {
    JacobiReport jacobi;
    bool degree_one = true;
    bool square_zero = true;
    std::vector<std::pair<std::size_t, std::size_t>> leibniz_failures;
    bool valid() const { return jacobi.holds && degree_one && square_zero && leibniz_failures.empty(); }
};

/// Exhaustive basis checks: Jacobi, |d| = 1, d^2 = 0, d[x,y] = [dx,y] + (-1)^{|x|}[x,dy].
inline DglaReport check_dgla(const GradedLieAlgebra& g, const LinearDifferential& d) {
    DglaReport r;
    r.jacobi = check_graded_jacobi(g);
    const std::size_t dim = g.dim();
    auto apply_d = [&](const Vector& v) {
        Vector out(dim, 0);
        for (std::size_t i = 0; i < dim; ++i)
            if (v[i] != 0)
                for (std::size_t k = 0; k < dim; ++k) out[k] += v[i] * d[i][k];
        return out;
    };
    for (std::size_t i = 0; i < dim; ++i) {
        for (std::size_t k = 0; k < dim; ++k)
            if (d[i][k] != 0 && g.degree(k) != g.degree(i) + 1) r.degree_one = false;
        if (!is_zero_vector(apply_d(apply_d(g.unit(i))))) r.square_zero = false;
    }
    for (std::size_t i = 0; i < dim; ++i)
        for (std::size_t j = 0; j < dim; ++j) {
            Vector ei = g.unit(i), ej = g.unit(j);
            Vector lhs = apply_d(g.bracket(ei, ej));
            Vector a = g.bracket(apply_d(ei), ej);
            Vector b = g.bracket(ei, apply_d(ej));
            const Rational s = is_odd(g.degree(i)) ? -1 : 1;
            for (std::size_t t = 0; t < dim; ++t) lhs[t] -= a[t] + s * b[t];
            if (!is_zero_vector(lhs)) r.leibniz_failures.emplace_back(i, j);
        }
    return r;
}

// ---------------------------------------------------------------------------
// Courant algebras

/// A Courant algebra over an ordinary Lie algebra g: a space a with a bilinear
/// bracket [[.,.]] and a linear map p: a -> g.
struct CourantAlgebraData {
    GradedLieAlgebra g;
    std::vector<std::string> a_names;
    StructureConstants a_bracket; // a_bracket[i][j][k]: coefficient of a_k in [[a_i, a_j]]
    Matrix p;                     // dim g x dim a; column j is p(a_j)
};

class CourantError : public Error {
public:
    enum class Kind { Shape, Leibniz, Homomorphism, NotSurjective, NotLeftCentral };
    CourantError(Kind kind, const std::string& msg, std::vector<std::size_t> witness = {})
        : Error(msg), kind_(kind), witness_(std::move(witness)) {}
    Kind kind() const noexcept { return kind_; }
    /// Offending indices: basis triple, pair, g basis index, or (kernel vector, a basis index).
    const std::vector<std::size_t>& witness() const noexcept { return witness_; }

private:
    Kind kind_;
    std::vector<std::size_t> witness_;
};

namespace detail {

inline Vector courant_bracket(const CourantAlgebraData& c, const Vector& x, const Vector& y) {
    const std::size_t r = c.a_names.size();
    Vector out(r, 0);
    for (std::size_t i = 0; i < r; ++i) {
        if (x[i] == 0) continue;
        for (std::size_t j = 0; j < r; ++j) {
            if (y[j] == 0) continue;
            for (std::size_t k = 0; k < r; ++k) out[k] += x[i] * y[j] * c.a_bracket[i][j][k];
        }
    }
    return out;
}

inline Vector unit(std::size_t dim, std::size_t i) {
    Vector v(dim, 0);
    v[i] = 1;
    return v;
}

inline Vector add(Vector a, const Vector& b, const Rational& s = 1) {
    for (std::size_t i = 0; i < a.size(); ++i) a[i] += s * b[i];
    return a;
}

} // namespace detail

/// Loday identity [[a1,[[a2,a3]]]] = [[[[a1,a2]],a3]] + [[a2,[[a1,a3]]]] and p([[a1,a2]]) = [p a1, p a2].
inline void check_courant_axioms(const CourantAlgebraData& c) {
    using K = CourantError::Kind;
    const std::size_t r = c.a_names.size(), m = c.g.dim();
    if (c.a_bracket.size() != r || c.p.size() != m) throw CourantError(K::Shape, "Courant data has inconsistent sizes");
    for (const auto& row : c.a_bracket) {
        if (row.size() != r) throw CourantError(K::Shape, "Courant data has inconsistent sizes");
        for (const auto& v : row)
            if (v.size() != r) throw CourantError(K::Shape, "Courant data has inconsistent sizes");
    }
    for (const auto& row : c.p)
        if (row.size() != r) throw CourantError(K::Shape, "Courant data has inconsistent sizes");
    for (const auto& b : c.g.basis())
        if (b.degree != 0) throw CourantError(K::Shape, "Courant algebras are over ordinary Lie algebras");

    auto br = [&](const Vector& x, const Vector& y) { return detail::courant_bracket(c, x, y); };
    for (std::size_t i = 0; i < r; ++i)
        for (std::size_t j = 0; j < r; ++j)
            for (std::size_t k = 0; k < r; ++k) {
                Vector a1 = detail::unit(r, i), a2 = detail::unit(r, j), a3 = detail::unit(r, k);
                Vector lhs = br(a1, br(a2, a3));
                Vector rhs = detail::add(br(br(a1, a2), a3), br(a2, br(a1, a3)));
                if (lhs != rhs)
                    throw CourantError(K::Leibniz, "Leibniz identity fails on (" + c.a_names[i] + ", " + c.a_names[j] +
                                                       ", " + c.a_names[k] + ")",
                                       {i, j, k});
            }
    for (std::size_t i = 0; i < r; ++i)
        for (std::size_t j = 0; j < r; ++j) {
            Vector lhs = matvec(c.p, br(detail::unit(r, i), detail::unit(r, j)));
            Vector rhs = c.g.bracket(matvec(c.p, detail::unit(r, i)), matvec(c.p, detail::unit(r, j)));
            if (lhs != rhs)
                throw CourantError(K::Homomorphism, "p is not a homomorphism on (" + c.a_names[i] + ", " +
                                                        c.a_names[j] + ")",
                                   {i, j});
        }
}

/// Basis of ker p, in coordinates of a.
inline std::vector<Vector> courant_kernel(const CourantAlgebraData& c) { return kernel(c.p, c.a_names.size()); }

/// One lift b_i in a of each g basis element: the solution of p b = g_i with free variables zero.
inline std::vector<Vector> canonical_lifts(const CourantAlgebraData& c) {
    std::vector<Vector> lifts;
    for (std::size_t i = 0; i < c.g.dim(); ++i) {
        auto b = solve(c.p, c.a_names.size(), detail::unit(c.g.dim(), i));
        if (!b)
            throw CourantError(CourantError::Kind::NotSurjective,
                               "p is not surjective: " + c.g.name(i) + " has no preimage", {i});
        lifts.push_back(std::move(*b));
    }
    return lifts;
}

/// [[h, a]] = 0 for every kernel basis vector h and every basis element a.
inline void check_left_central(const CourantAlgebraData& c, const std::vector<Vector>& ker) {
    const std::size_t r = c.a_names.size();
    for (std::size_t s = 0; s < ker.size(); ++s)
        for (std::size_t j = 0; j < r; ++j)
            if (!is_zero_vector(detail::courant_bracket(c, ker[s], detail::unit(r, j))))
                throw CourantError(CourantError::Kind::NotLeftCentral,
                                   "not left-central: [[h" + std::to_string(s + 1) + ", " + c.a_names[j] + "]] != 0",
                                   {s, j});
}

struct CourantDGLA {
    GradedLieAlgebra algebra; // basis: h (degree -2), then a (degree -1), then g (degree 0)
    LinearDifferential differential;
    std::vector<Vector> kernel_basis;
    std::vector<Vector> lifts;
};

/// g~ = h[2] + a[1] + g with h = ker p, bracket
///   [(h1,a1,g1),(h2,a2,g2)] = ([[b1,h2]] + [[a1,a2]] + [[a2,a1]] - [[b2,h1]], [[b1,a2]] - [[b2,a1]], [g1,g2])
/// where b_i lifts g_i, and differential h -> a -> g from the exact sequence.
/// `lifts` overrides the canonical lift choice (each must satisfy p b_i = g_i).
inline CourantDGLA courant_to_dgla(const CourantAlgebraData& c, std::optional<std::vector<Vector>> lifts = std::nullopt) {
    check_courant_axioms(c);
    const std::size_t r = c.a_names.size(), m = c.g.dim();
    std::vector<Vector> canon = canonical_lifts(c);
    if (lifts) {
        if (lifts->size() != m) throw Error("one lift per g basis element is required");
        for (std::size_t i = 0; i < m; ++i)
            if (matvec(c.p, (*lifts)[i]) != detail::unit(m, i)) throw Error("lift of " + c.g.name(i) + " is not a preimage");
    } else {
        lifts = std::move(canon);
    }
    std::vector<Vector> ker = courant_kernel(c);
    check_left_central(c, ker);
    const std::size_t q = ker.size();
    const Matrix kmat = from_columns(ker, r);

    auto br = [&](const Vector& x, const Vector& y) { return detail::courant_bracket(c, x, y); };
    auto to_h = [&](const Vector& v) {
        auto coords = solve(kmat, q, v);
        if (!coords) throw Error("internal: element expected in ker p");
        return *coords;
    };
    auto lift = [&](const Vector& gv) {
        Vector b(r, 0);
        for (std::size_t i = 0; i < m; ++i)
            if (gv[i] != 0) b = detail::add(b, (*lifts)[i], gv[i]);
        return b;
    };

    const std::size_t dim = q + r + m;
    struct Parts {
        Vector h, a, g;
    };
    auto split = [&](const Vector& x) {
        Parts s{Vector(x.begin(), x.begin() + q), Vector(x.begin() + q, x.begin() + q + r),
                Vector(x.begin() + q + r, x.end())};
        return s;
    };
    auto eq3 = [&](const Vector& x, const Vector& y) {
        Parts X = split(x), Y = split(y);
        Vector h1 = matvec(kmat, X.h), h2 = matvec(kmat, Y.h);
        Vector b1 = lift(X.g), b2 = lift(Y.g);
        Vector hpart = detail::add(detail::add(detail::add(br(b1, h2), br(X.a, Y.a)), br(Y.a, X.a)), br(b2, h1), -1);
        Vector apart = detail::add(br(b1, Y.a), br(b2, X.a), -1);
        Vector gpart = c.g.bracket(X.g, Y.g);
        Vector out = to_h(hpart);
        out.insert(out.end(), apart.begin(), apart.end());
        out.insert(out.end(), gpart.begin(), gpart.end());
        return out;
    };

    std::vector<BasisElement> basis;
    for (std::size_t s = 0; s < q; ++s) basis.push_back({"h" + std::to_string(s + 1), -2});
    for (const auto& n : c.a_names) basis.push_back({n, -1});
    for (const auto& b : c.g.basis()) basis.push_back({b.name, 0});
    StructureConstants tilde = zero_constants(dim, dim, dim);
    for (std::size_t i = 0; i < dim; ++i)
        for (std::size_t j = 0; j < dim; ++j) tilde[i][j] = eq3(detail::unit(dim, i), detail::unit(dim, j));

    LinearDifferential d = zero_matrix(dim, dim);
    for (std::size_t s = 0; s < q; ++s)
        for (std::size_t k = 0; k < r; ++k) d[s][q + k] = ker[s][k];
    for (std::size_t j = 0; j < r; ++j)
        for (std::size_t i = 0; i < m; ++i) d[q + j][q + r + i] = c.p[i][j];

    return {GradedLieAlgebra::make(std::move(basis), std::move(tilde)), std::move(d), std::move(ker), std::move(*lifts)};
}

// ---------------------------------------------------------------------------
// Matched pairs

/// An ordinary Lie algebra g, a space h whose dual carries a Lie bracket, an
/// action of g on h and an action of h* on g*.
struct MatchedPairData {
    GradedLieAlgebra g;
    std::vector<std::string> h_names;
    StructureConstants h_dual_bracket; // [xi^i, xi^j] = sum_k f[i][j][k] xi^k
    StructureConstants g_on_h;         // g_a . h_i = sum_j R[a][i][j] h_j
    StructureConstants hdual_on_gdual; // xi^i . gamma^a = sum_b S[i][a][b] gamma^b
};

struct MatchedPairResult {
    GradedLieAlgebra g_tilde; // h[1] + g
    HomotopyLieBialgebra bialgebra;
    BialgebraReport report;
};

/// g~ = h[1] + g with [g_a, h_i] = g_a . h_i.
inline GradedLieAlgebra matched_pair_algebra(const MatchedPairData& mp) {
    const std::size_t r = mp.h_names.size(), m = mp.g.dim();
    for (const auto& b : mp.g.basis())
        if (b.degree != 0) throw Error("matched pairs are built from ordinary Lie algebras");
    if (mp.h_dual_bracket.size() != r || mp.g_on_h.size() != m || mp.hdual_on_gdual.size() != r)
        throw Error("matched pair data has inconsistent sizes");
    const std::size_t dim = r + m;
    std::vector<BasisElement> basis;
    for (const auto& n : mp.h_names) basis.push_back({n, -1});
    for (const auto& b : mp.g.basis()) basis.push_back(b);
    StructureConstants c = zero_constants(dim, dim, dim);
    for (std::size_t a = 0; a < m; ++a)
        for (std::size_t b = 0; b < m; ++b)
            for (std::size_t k = 0; k < m; ++k) c[r + a][r + b][r + k] = mp.g.constant(a, b, k);
    for (std::size_t a = 0; a < m; ++a)
        for (std::size_t i = 0; i < r; ++i)
            for (std::size_t j = 0; j < r; ++j) {
                c[r + a][i][j] = mp.g_on_h[a][i][j];
                c[i][r + a][j] = -mp.g_on_h[a][i][j];
            }
    auto g = GradedLieAlgebra::make(std::move(basis), std::move(c));
    auto jac = check_graded_jacobi(g);
    if (!jac.holds) throw Error("the action of g on h is not a Lie algebra action");
    return g;
}

/// The quadratic degree 2 differential on S(g~[-2]):
///   dhat(h_k) = -1/2 sum f[i][j][k] h_i h_j,   dhat(g_b) = -sum S[i][a][b] h_i g_a.
inline MatchedPairResult matched_pair_to_bialgebra(const MatchedPairData& mp) {
    GradedLieAlgebra gt = matched_pair_algebra(mp);
    const std::size_t r = mp.h_names.size(), m = mp.g.dim();
    ShiftedDual dual = realize_shifted_dual(gt, 2);
    auto y = [&](std::size_t i) { return Polynomial::coordinate(dual.chart, i); };
    std::vector<Polynomial> images(r + m, Polynomial(dual.chart));
    const Rational half = make_rational(1, 2);
    for (std::size_t k = 0; k < r; ++k)
        for (std::size_t i = 0; i < r; ++i)
            for (std::size_t j = 0; j < r; ++j)
                if (mp.h_dual_bracket[i][j][k] != 0) images[k] -= mul(y(i), y(j)) * (half * mp.h_dual_bracket[i][j][k]);
    for (std::size_t b = 0; b < m; ++b)
        for (std::size_t i = 0; i < r; ++i)
            for (std::size_t a = 0; a < m; ++a)
                if (mp.hdual_on_gdual[i][a][b] != 0) images[r + b] -= mul(y(i), y(r + a)) * mp.hdual_on_gdual[i][a][b];
    HomotopyLieBialgebra bialg(gt, 2, std::move(images));
    BialgebraReport rep = check_bialgebra(bialg);
    return {std::move(gt), std::move(bialg), std::move(rep)};
}

inline bool is_matched_pair(const MatchedPairData& mp) { return matched_pair_to_bialgebra(mp).report.valid(); }

} // namespace hpoisson
