#pragma once

#include "../lie_structures.hpp"
#include "../reduction.hpp"

#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace hpoisson::format {

struct ChartDecl {
    std::string name;
    ChartPtr chart;
    friend bool operator==(const ChartDecl& a, const ChartDecl& b) { return a.name == b.name && same_chart(a.chart, b.chart); }
};

struct CotangentDecl {
    std::string name;
    std::string base;
    CotangentChart cc;
    friend bool operator==(const CotangentDecl& a, const CotangentDecl& b) {
        return a.name == b.name && a.base == b.base && a.cc == b.cc;
    }
};

/// A named polynomial on a chart or on the total chart of a cotangent space.
struct PolyDecl {
    std::string name;
    std::string space;
    Polynomial value;
    friend bool operator==(const PolyDecl&, const PolyDecl&) = default;
};

struct HomotopyPoissonDecl {
    std::string name;
    std::string space; // a cotangent declaration
    Polynomial pi;
    friend bool operator==(const HomotopyPoissonDecl&, const HomotopyPoissonDecl&) = default;
};

struct LieDecl {
    std::string name;
    GradedLieAlgebra algebra;
    friend bool operator==(const LieDecl&, const LieDecl&) = default;
};

struct BialgebraDecl {
    std::string name;
    std::string over;
    HomotopyLieBialgebra bialgebra;
    friend bool operator==(const BialgebraDecl& a, const BialgebraDecl& b) {
        return a.name == b.name && a.over == b.over && a.bialgebra.algebra() == b.bialgebra.algebra() &&
               a.bialgebra.shift() == b.bialgebra.shift() && a.bialgebra.dhat() == b.bialgebra.dhat();
    }
};

struct CourantDecl {
    std::string name;
    std::string over;
    CourantAlgebraData data;
    friend bool operator==(const CourantDecl& a, const CourantDecl& b) {
        return a.name == b.name && a.over == b.over && a.data.g == b.data.g && a.data.a_names == b.data.a_names &&
               a.data.a_bracket == b.data.a_bracket && a.data.p == b.data.p;
    }
};

struct MatchedPairDecl {
    std::string name;
    std::string over;
    MatchedPairData data;
    friend bool operator==(const MatchedPairDecl& a, const MatchedPairDecl& b) {
        return a.name == b.name && a.over == b.over && a.data.g == b.data.g && a.data.h_names == b.data.h_names &&
               a.data.h_dual_bracket == b.data.h_dual_bracket && a.data.g_on_h == b.data.g_on_h &&
               a.data.hdual_on_gdual == b.data.hdual_on_gdual;
    }
};

/// One vector field per basis element of the acting bialgebra's algebra.
struct ActionDecl {
    std::string name;
    std::string space;
    std::string by;
    std::vector<Derivation> rho;
    friend bool operator==(const ActionDecl&, const ActionDecl&) = default;
};

struct MomentDecl {
    std::string name;
    std::string space;
    std::string by;
    std::vector<Polynomial> images;
    friend bool operator==(const MomentDecl&, const MomentDecl&) = default;
};

struct ReductionDecl {
    std::string name;
    std::string structure;
    std::string action;
    std::optional<std::string> moment; // absent: use the cotangent lift of a base action
    std::string quotient;
    std::vector<Polynomial> images;    // one per coordinate of the quotient's total chart
    std::optional<Polynomial> expect;  // expected reduced structure on the quotient
    friend bool operator==(const ReductionDecl&, const ReductionDecl&) = default;
};

using Declaration = std::variant<ChartDecl, CotangentDecl, PolyDecl, HomotopyPoissonDecl, LieDecl, BialgebraDecl,
                                 CourantDecl, MatchedPairDecl, ActionDecl, MomentDecl, ReductionDecl>;

inline const std::string& declaration_name(const Declaration& d) {
    return std::visit([](const auto& x) -> const std::string& { return x.name; }, d);
}

inline constexpr std::array<std::string_view, 10> task_kinds = {
    "CHECK-HP", "BRACKET", "DERIVED", "CHECK-BIALG", "COURANT2DGLA", "MATCHED2BIALG",
    "REDUCE",   "VERIFY-QUOTIENT", "CHECK-QMOMENT", "CHECK-ACTION",
};

struct Task {
    std::string kind;
    std::vector<std::string> args;
    std::string name;
    friend bool operator==(const Task&, const Task&) = default;
};

inline std::string default_task_name(const std::string& kind, const std::vector<std::string>& args) {
    std::string s = kind;
    for (const auto& a : args) s += " " + a;
    return s;
}

struct Document {
    std::vector<Declaration> declarations;
    std::vector<Task> tasks;

    const Declaration* find(const std::string& name) const {
        for (const auto& d : declarations)
            if (declaration_name(d) == name) return &d;
        return nullptr;
    }
    template <class T>
    const T* find_as(const std::string& name) const {
        const Declaration* d = find(name);
        return d ? std::get_if<T>(d) : nullptr;
    }

    /// Chart named by a chart or cotangent declaration (the total chart for the latter).
    ChartPtr space_chart(const std::string& name) const {
        if (auto* c = find_as<ChartDecl>(name)) return c->chart;
        if (auto* c = find_as<CotangentDecl>(name)) return c->cc.chart();
        return nullptr;
    }

    friend bool operator==(const Document&, const Document&) = default;
};

} // namespace hpoisson::format
