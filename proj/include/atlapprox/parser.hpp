#pragma once

// Recursive-descent parser for the concrete formula syntax.
//
//   formula  ::= or ( "->" formula )?
//   or       ::= and ( "|" and )*
//   and      ::= unary ( "&" unary )*
//   unary    ::= "!" unary | "K" name unary | ("E"|"C") group unary
//              | ("mu"|"nu") name "." unary
//              | "<<" names? ( ">>" | ">>_IR" ) path
//              | "<" names? ">" ( "*" | "~" )? unary
//              | "true" | "false" | name | "(" formula ")"
//   path     ::= ("X"|"G"|"F") unary | unary "U" unary | "(" path ")"
//   group    ::= "{" names? "}" | name
//   names    ::= name ( "," name )*
//
// A name bound by an enclosing mu/nu (or listed as free) is a variable,
// any other name an atom.

#include <algorithm>
#include <cctype>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "errors.hpp"
#include "formula.hpp"

namespace atlapprox
{
  namespace detail
  {
    enum class Tok
    {
      name,
      lparen, rparen, lbrace, rbrace, comma, dot,
      bang, amp, bar, arrow,
      lstrat, rstrat, rstrat_ir,  // << >> >>_IR
      langle, rangle, star, tilde,
      end,
    };

    struct Token
    {
      Tok kind;
      std::string text;
      std::size_t line, column;
    };

    inline std::vector<Token> lex(std::string_view src)
    {
      std::vector<Token> out;
      std::size_t i = 0, line = 1, col = 1;
      auto advance = [&](std::size_t n) {
        for (std::size_t k = 0; k < n; ++k, ++i)
          {
            if (src[i] == '\n')
              ++line, col = 1;
            else
              ++col;
          }
      };
      auto is_name = [](char c) {
        return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
      };
      while (i < src.size())
        {
          const char c = src[i];
          if (std::isspace(static_cast<unsigned char>(c)))
            {
              advance(1);
              continue;
            }
          const std::size_t l = line, k = col;
          auto emit = [&](Tok t, std::size_t n) {
            out.push_back({t, std::string(src.substr(i, n)), l, k});
            advance(n);
          };
          if (is_name(c))
            {
              std::size_t j = i;
              while (j < src.size() && is_name(src[j]))
                ++j;
              emit(Tok::name, j - i);
              continue;
            }
          auto starts = [&](std::string_view s) { return src.substr(i, s.size()) == s; };
          if (starts(">>_IR"))
            emit(Tok::rstrat_ir, 5);
          else if (starts("<<"))
            emit(Tok::lstrat, 2);
          else if (starts(">>"))
            emit(Tok::rstrat, 2);
          else if (starts("->"))
            emit(Tok::arrow, 2);
          else
            switch (c)
              {
              case '(': emit(Tok::lparen, 1); break;
              case ')': emit(Tok::rparen, 1); break;
              case '{': emit(Tok::lbrace, 1); break;
              case '}': emit(Tok::rbrace, 1); break;
              case ',': emit(Tok::comma, 1); break;
              case '.': emit(Tok::dot, 1); break;
              case '!': emit(Tok::bang, 1); break;
              case '&': emit(Tok::amp, 1); break;
              case '|': emit(Tok::bar, 1); break;
              case '<': emit(Tok::langle, 1); break;
              case '>': emit(Tok::rangle, 1); break;
              case '*': emit(Tok::star, 1); break;
              case '~': emit(Tok::tilde, 1); break;
              default:
                throw ParseError(std::string("unexpected character '") + c + "'", l, k);
              }
        }
      out.push_back({Tok::end, "", line, col});
      return out;
    }

    inline bool is_keyword(const std::string& s)
    {
      static const std::set<std::string> kw = {"X", "G", "F", "U", "K", "E", "C",
                                                "mu", "nu", "true", "false"};
      return kw.contains(s);
    }

    class Parser
    {
    public:
      Parser(std::string_view src, const std::set<std::string>& free)
        : toks_(lex(src)), scope_(free.begin(), free.end())
      {
      }

      Formula parse_all()
      {
        Formula g = formula();
        if (peek().kind != Tok::end)
          fail("unexpected '" + peek().text + "'");
        return g;
      }

    private:
      const Token& peek() const { return toks_[pos_]; }
      bool at_name(std::string_view s) const
      {
        return peek().kind == Tok::name && peek().text == s;
      }
      const Token& take() { return toks_[pos_++]; }

      [[noreturn]] void fail(const std::string& what) const
      {
        throw ParseError(what, peek().line, peek().column);
      }

      void expect(Tok t, const char* what)
      {
        if (peek().kind != t)
          fail(std::string("expected ") + what
               + (peek().kind == Tok::end ? " at end of input" : " before '" + peek().text + "'"));
        ++pos_;
      }

      std::string name(const char* what)
      {
        if (peek().kind != Tok::name || is_keyword(peek().text))
          fail(std::string("expected ") + what);
        return take().text;
      }

      std::vector<std::string> names()
      {
        std::vector<std::string> out;
        if (peek().kind != Tok::name)
          return out;
        out.push_back(name("agent name"));
        while (peek().kind == Tok::comma)
          {
            ++pos_;
            out.push_back(name("agent name"));
          }
        return out;
      }

      Formula formula()
      {
        Formula a = disjunction();
        if (peek().kind == Tok::arrow)
          {
            ++pos_;
            return f::implies(std::move(a), formula());
          }
        return a;
      }

      Formula disjunction()
      {
        Formula a = conjunction();
        while (peek().kind == Tok::bar)
          {
            ++pos_;
            a = f::or_(std::move(a), conjunction());
          }
        return a;
      }

      Formula conjunction()
      {
        Formula a = unary();
        while (peek().kind == Tok::amp)
          {
            ++pos_;
            a = f::and_(std::move(a), unary());
          }
        return a;
      }

      Formula unary()
      {
        const Token& t = peek();
        switch (t.kind)
          {
          case Tok::bang:
            ++pos_;
            return f::not_(unary());
          case Tok::lparen:
            {
              ++pos_;
              Formula g = formula();
              expect(Tok::rparen, "')'");
              return g;
            }
          case Tok::lstrat:
            {
              ++pos_;
              auto c = names();
              Semantics s = Semantics::ir;
              if (peek().kind == Tok::rstrat_ir)
                s = Semantics::IR;
              else if (peek().kind != Tok::rstrat)
                fail("expected '>>' closing the coalition");
              ++pos_;
              return path(std::move(c), s);
            }
          case Tok::langle:
            {
              ++pos_;
              auto c = names();
              expect(Tok::rangle, "'>'");
              if (peek().kind == Tok::star || peek().kind == Tok::tilde)
                {
                  auto n = take().kind == Tok::star ? Neighborhood::C : Neighborhood::E;
                  return f::steadfast(std::move(c), unary(), n);
                }
              return f::diamond(std::move(c), unary());
            }
          case Tok::name:
            break;
          default:
            fail(t.kind == Tok::end ? "unexpected end of input"
                                    : "unexpected '" + t.text + "'");
          }

        const std::string& w = t.text;
        if (w == "true" || w == "false")
          {
            ++pos_;
            return w == "true" ? f::top() : f::bottom();
          }
        if (w == "K")
          {
            ++pos_;
            std::string a = name("agent after K");
            return f::know(std::move(a), unary());
          }
        if (w == "E" || w == "C")
          {
            ++pos_;
            std::vector<std::string> c;
            if (peek().kind == Tok::lbrace)
              {
                ++pos_;
                c = names();
                expect(Tok::rbrace, "'}'");
              }
            else
              c.push_back(name(w == "E" ? "agent group after E" : "agent group after C"));
            Formula body = unary();
            return w == "E" ? f::everybody(std::move(c), std::move(body))
                            : f::common(std::move(c), std::move(body));
          }
        if (w == "mu" || w == "nu")
          {
            const bool least = w == "mu";
            ++pos_;
            std::string z = name("fixpoint variable");
            expect(Tok::dot, "'.' after the fixpoint variable");
            scope_.push_back(z);
            Formula body = unary();
            scope_.pop_back();
            return least ? f::mu(std::move(z), std::move(body)) : f::nu(std::move(z), std::move(body));
          }
        if (w == "X" || w == "G" || w == "F" || w == "U")
          fail("temporal operator '" + w + "' outside a strategic modality");
        ++pos_;
        if (std::find(scope_.rbegin(), scope_.rend(), w) != scope_.rend())
          return f::var(w);
        return f::atom(w);
      }

      Formula path(std::vector<std::string> c, Semantics s)
      {
        if (auto g = try_path(c, s))
          return *g;
        fail("expected a temporal goal (X, G, F or U)");
      }

      // Returns nullopt (with the position restored) when the input at
      // this point is not a path formula.
      std::optional<Formula> try_path(const std::vector<std::string>& c, Semantics s)
      {
        const std::size_t start = pos_;
        if (at_name("X") || at_name("G") || at_name("F"))
          {
            const std::string w = take().text;
            Temporal t = w == "X" ? Temporal::next : w == "G" ? Temporal::always
                                                                : Temporal::eventually;
            return f::strategic(c, t, unary(), s);
          }
        if (peek().kind == Tok::lparen)
          {
            ++pos_;
            try
              {
                if (auto g = try_path(c, s); g && peek().kind == Tok::rparen)
                  {
                    ++pos_;
                    return g;
                  }
              }
            catch (const ParseError&)
              {
              }
            pos_ = start;
          }
        try
          {
            Formula psi = unary();
            if (at_name("U"))
              {
                ++pos_;
                return f::until(c, std::move(psi), unary(), s);
              }
          }
        catch (const ParseError&)
          {
          }
        pos_ = start;
        return std::nullopt;
      }

      std::vector<Token> toks_;
      std::size_t pos_ = 0;
      std::vector<std::string> scope_;
    };
  }

  /// Parses `text`.  Names in `free_vars` are read as free fixpoint
  /// variables wherever they are not rebound.
  inline Formula parse(std::string_view text, const std::set<std::string>& free_vars = {})
  {
    return detail::Parser(text, free_vars).parse_all();
  }
}
