#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace atlapprox
{
  /// Base class of every error raised by the library.
  class Error : public std::runtime_error
  {
  public:
    using std::runtime_error::runtime_error;
  };

  /// Unknown agent/state/atom names and malformed model input.
  class ModelError : public Error
  {
  public:
    using Error::Error;
  };

  /// Formula text that does not follow the grammar.
  class ParseError : public Error
  {
  public:
    ParseError(const std::string& what, std::size_t line, std::size_t column)
      : Error(std::to_string(line) + ":" + std::to_string(column) + ": " + what),
        line_(line), column_(column)
    {
    }

    std::size_t line() const noexcept { return line_; }
    std::size_t column() const noexcept { return column_; }

  private:
    std::size_t line_;
    std::size_t column_;
  };

  /// A formula outside the fragment an operation accepts.
  class FormulaError : public Error
  {
  public:
    using Error::Error;
  };

  /// A strategy or assignment search would exceed its configured ceiling.
  /// This is an outcome, never silently turned into a verdict.
  class BudgetExceeded : public Error
  {
  public:
    BudgetExceeded(const std::string& what, double required, std::size_t budget)
      : Error("search budget exceeded: " + what + " needs "
              + std::to_string(required) + " candidates, budget is "
              + std::to_string(budget)),
        required_(required), budget_(budget)
    {
    }

    double required() const noexcept { return required_; }
    std::size_t budget() const noexcept { return budget_; }

  private:
    double required_;
    std::size_t budget_;
  };
}
