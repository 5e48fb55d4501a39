#pragma once

// Reduction fixtures shared by the unit tests and the acceptance binary.

#include <hpoisson/reduction.hpp>

#include <string>
#include <vector>

namespace fixtures {

using namespace hpoisson;

struct QuotientCase {
    std::string name;
    HomotopyPoissonStructure hp;
    std::vector<Derivation> rho;
    HomotopyLieBialgebra b;
    QuotientDeclaration quotient;
    std::vector<std::size_t> killed; // translated base coordinates
};

inline HomotopyLieBialgebra line_algebra(const std::string& name = "v") {
    auto g = GradedLieAlgebra::make({{name, 0}}, zero_constants(1, 1, 1));
    return HomotopyLieBialgebra(g, 1, {Polynomial(realize_shifted_dual(g, 1).chart)});
}

inline HomotopyLieBialgebra trivial_algebra() { return HomotopyLieBialgebra(GradedLieAlgebra::make({}, {}), 1, {}); }

/// Quotient of T*[1]M by translations along `killed`: the surviving coordinates map to themselves.
inline QuotientDeclaration translation_quotient(const CotangentChart& cc, const std::vector<std::size_t>& killed) {
    std::vector<Coordinate> keep;
    std::vector<std::size_t> idx;
    for (std::size_t i = 0; i < cc.base_size(); ++i)
        if (std::find(killed.begin(), killed.end(), i) == killed.end()) {
            keep.push_back((*cc.base())[i]);
            idx.push_back(i);
        }
    QuotientDeclaration q{CotangentChart(Chart::make(keep), cc.shift()), {}, {}};
    for (auto i : idx) {
        q.base_images.push_back(Polynomial::coordinate(cc.base(), i));
        q.momentum_images.push_back(cc.p(i));
    }
    return q;
}

inline QuotientCase translation_case(const std::string& name, const std::vector<Coordinate>& base_coords,
                                     const std::function<Polynomial(const CotangentChart&)>& make_pi, std::size_t killed) {
    CotangentChart cc(Chart::make(base_coords), 1);
    auto hp = HomotopyPoissonStructure::make(cc, make_pi(cc));
    std::vector<Derivation> rho{Derivation::partial(cc.base(), killed)};
    return {name, hp, rho, line_algebra(), translation_quotient(cc, {killed}), {killed}};
}

/// T*[1]R^3 by d/dz with pi = x p_x p_y.
inline QuotientCase r3_by_z() {
    return translation_case("R3/dz", {{"x", 0}, {"y", 0}, {"z", 0}},
                            [](const CotangentChart& cc) { return mul(mul(cc.x(0), cc.p(0)), cc.p(1)); }, 2);
}

/// T*[1]R^2 by d/dy with pi = x p_x p_y.
inline QuotientCase r2_by_y() {
    return translation_case("R2/dy", {{"x", 0}, {"y", 0}},
                            [](const CotangentChart& cc) { return mul(mul(cc.x(0), cc.p(0)), cc.p(1)); }, 1);
}

/// QP structure theta p_x + p_x p_y on {theta:1, x, y}, by d/dy.
inline QuotientCase qp_mixed() {
    return translation_case("QP mixed", {{"theta", 1}, {"x", 0}, {"y", 0}},
                            [](const CotangentChart& cc) { return mul(cc.x(0), cc.p(1)) + mul(cc.p(1), cc.p(2)); }, 2);
}

/// Q structure theta x p_x (pi_2 = 0), by d/dy.
inline QuotientCase q_only() {
    return translation_case("Q only", {{"theta", 1}, {"x", 0}, {"y", 0}},
                            [](const CotangentChart& cc) { return mul(mul(cc.x(0), cc.x(1)), cc.p(1)); }, 2);
}

/// Trivial group acting on T*[1]R^2 with pi = x p_x p_y.
inline QuotientCase trivial_group() {
    CotangentChart cc(Chart::make({{"x", 0}, {"y", 0}}), 1);
    auto hp = HomotopyPoissonStructure::make(cc, mul(mul(cc.x(0), cc.p(0)), cc.p(1)));
    return {"trivial", hp, {}, trivial_algebra(), translation_quotient(cc, {}), {}};
}

inline std::vector<QuotientCase> quotient_cases() { return {trivial_group(), r3_by_z(), r2_by_y(), qp_mixed(), q_only()}; }

/// pi = x p_x p_y with the translation d/dx, which does not preserve pi.
inline QuotientCase non_invariant() {
    CotangentChart cc(Chart::make({{"x", 0}, {"y", 0}}), 1);
    auto hp = HomotopyPoissonStructure::make(cc, mul(mul(cc.x(0), cc.p(0)), cc.p(1)));
    return {"non-invariant", hp, {Derivation::partial(cc.base(), 0)}, line_algebra(), translation_quotient(cc, {0}), {0}};
}

} // namespace fixtures
