#pragma once

#include "../error.hpp"

#include <array>
#include <cctype>
#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace hpoisson::format {

struct Location {
    int line = 1;
    int column = 1;
};

/// Lexical, syntactic or reference error, with the position it was detected at.
class ParseError : public Error {
public:
    ParseError(Location loc, const std::string& msg)
        : Error("line " + std::to_string(loc.line) + ", column " + std::to_string(loc.column) + ": " + msg), loc_(loc) {}
    Location location() const noexcept { return loc_; }

private:
    Location loc_;
};

enum class Tok { Ident, Int, Punct, End };

struct Token {
    Tok kind = Tok::End;
    std::string text;
    Location loc;
};

/// Words that contain '-' and are lexed as a single identifier.
inline constexpr std::array<std::string_view, 10> hyphenated_words = {
    "homotopy-poisson", "lie-algebra", "moment-map",      "matched-pair",  "dual-bracket",
    "CHECK-HP",         "CHECK-BIALG", "VERIFY-QUOTIENT", "CHECK-QMOMENT", "CHECK-ACTION",
};

inline bool is_ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
inline bool is_ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }

inline std::vector<Token> tokenize(std::string_view src) {
    std::vector<Token> out;
    std::size_t i = 0;
    Location loc;
    auto advance = [&](std::size_t k) {
        for (std::size_t t = 0; t < k; ++t) {
            if (src[i] == '\n') {
                ++loc.line;
                loc.column = 1;
            } else {
                ++loc.column;
            }
            ++i;
        }
    };
    while (i < src.size()) {
        const char c = src[i];
        if (c == '#') {
            while (i < src.size() && src[i] != '\n') advance(1);
            continue;
        }
        if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
            advance(1);
            continue;
        }
        const Location start = loc;
        if (is_ident_start(c)) {
            std::size_t j = i;
            while (j < src.size() && is_ident_char(src[j])) ++j;
            // extend over hyphenated keywords
            for (auto word : hyphenated_words) {
                if (src.substr(i, word.size()) == word &&
                    (i + word.size() == src.size() || !is_ident_char(src[i + word.size()])) && word.size() > j - i) {
                    j = i + word.size();
                    break;
                }
            }
            out.push_back({Tok::Ident, std::string(src.substr(i, j - i)), start});
            advance(j - i);
            continue;
        }
        if (std::isdigit(static_cast<unsigned char>(c))) {
            std::size_t j = i;
            while (j < src.size() && std::isdigit(static_cast<unsigned char>(src[j]))) ++j;
            if (j - i > 18) throw ParseError(start, "integer literal too long");
            out.push_back({Tok::Int, std::string(src.substr(i, j - i)), start});
            advance(j - i);
            continue;
        }
        static constexpr std::string_view punct = "{}()[];:=+-*/^,.";
        if (punct.find(c) != std::string_view::npos) {
            out.push_back({Tok::Punct, std::string(1, c), start});
            advance(1);
            continue;
        }
        std::string shown = std::isprint(static_cast<unsigned char>(c)) ? std::string(1, c)
                                                                         : "byte " + std::to_string(static_cast<unsigned char>(c));
        throw ParseError(start, "unexpected character '" + shown + "'");
    }
    out.push_back({Tok::End, "", loc});
    return out;
}

} // namespace hpoisson::format
