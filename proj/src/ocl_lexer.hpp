#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace mcdc::ocl::detail {

enum class Tok {
    Ident,
    Integer,
    Real,
    EnumLiteral,  // #Name
    String,       // '...'
    LParen,
    RParen,
    Dot,
    Arrow,
    Comma,
    Bar,
    Colon,
    ColonColon,
    Eq,
    Ne,
    Lt,
    Le,
    Gt,
    Ge,
    Plus,
    Minus,
    Star,
    Slash,
    End,
};

struct Token {
    Tok kind = Tok::End;
    std::string text;
    std::size_t line = 1;
    std::size_t column = 1;
};

/// Splits OCL source into tokens; `--` starts a comment running to end of line.
std::vector<Token> tokenize(std::string_view text);

}  // namespace mcdc::ocl::detail
