#include "ocl_lexer.hpp"

#include <cctype>

#include "mcdc/error.hpp"

namespace mcdc::ocl::detail {

namespace {

bool ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }
bool digit(char c) { return std::isdigit(static_cast<unsigned char>(c)) != 0; }

}  // namespace

std::vector<Token> tokenize(std::string_view text) {
    std::vector<Token> out;
    std::size_t i = 0;
    std::size_t line = 1;
    std::size_t col = 1;

    auto advance = [&](std::size_t n) {
        for (std::size_t k = 0; k < n && i < text.size(); ++k, ++i) {
            if (text[i] == '\n') {
                ++line;
                col = 1;
            } else {
                ++col;
            }
        }
    };
    auto peek = [&](std::size_t off) { return i + off < text.size() ? text[i + off] : '\0'; };

    while (i < text.size()) {
        char c = text[i];
        if (std::isspace(static_cast<unsigned char>(c))) {
            advance(1);
            continue;
        }
        if (c == '-' && peek(1) == '-') {
            while (i < text.size() && text[i] != '\n') advance(1);
            continue;
        }
        Token tok;
        tok.line = line;
        tok.column = col;
        std::size_t start = i;

        if (ident_start(c)) {
            while (i < text.size() && ident_char(text[i])) advance(1);
            tok.kind = Tok::Ident;
            tok.text = std::string(text.substr(start, i - start));
        } else if (digit(c)) {
            while (digit(peek(0))) advance(1);
            tok.kind = Tok::Integer;
            if (peek(0) == '.' && digit(peek(1))) {
                tok.kind = Tok::Real;
                advance(1);
                while (digit(peek(0))) advance(1);
            }
            if ((peek(0) == 'e' || peek(0) == 'E') &&
                (digit(peek(1)) || ((peek(1) == '+' || peek(1) == '-') && digit(peek(2))))) {
                tok.kind = Tok::Real;
                advance(2);
                while (digit(peek(0))) advance(1);
            }
            tok.text = std::string(text.substr(start, i - start));
        } else if (c == '#' && ident_start(peek(1))) {
            advance(1);
            while (i < text.size() && ident_char(text[i])) advance(1);
            tok.kind = Tok::EnumLiteral;
            tok.text = std::string(text.substr(start + 1, i - start - 1));
        } else if (c == '\'') {
            advance(1);
            while (i < text.size() && text[i] != '\'') advance(1);
            if (i >= text.size()) throw ParseError("unterminated string literal", tok.line, tok.column);
            advance(1);
            tok.kind = Tok::String;
            tok.text = std::string(text.substr(start + 1, i - start - 2));
        } else {
            auto two = std::string_view(text.substr(i, 2));
            struct Op {
                std::string_view s;
                Tok k;
            };
            static constexpr Op ops[] = {
                {"->", Tok::Arrow}, {"<>", Tok::Ne}, {"<=", Tok::Le}, {">=", Tok::Ge}, {"::", Tok::ColonColon},
                {"(", Tok::LParen}, {")", Tok::RParen}, {".", Tok::Dot},  {",", Tok::Comma}, {"|", Tok::Bar},
                {":", Tok::Colon},  {"=", Tok::Eq},     {"<", Tok::Lt},   {">", Tok::Gt},    {"+", Tok::Plus},
                {"-", Tok::Minus},  {"*", Tok::Star},   {"/", Tok::Slash},
            };
            bool matched = false;
            for (const auto& op : ops) {
                if (op.s.size() == 2 ? two == op.s : c == op.s[0]) {
                    tok.kind = op.k;
                    tok.text = std::string(op.s);
                    advance(op.s.size());
                    matched = true;
                    break;
                }
            }
            if (!matched) throw ParseError(std::string("unexpected character '") + c + "'", line, col);
        }
        out.push_back(std::move(tok));
    }
    Token end;
    end.kind = Tok::End;
    end.line = line;
    end.column = col;
    out.push_back(end);
    return out;
}

}  // namespace mcdc::ocl::detail
