#pragma once

#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "spencer/equations.hpp"
#include "spencer/symbolic_system.hpp"

namespace spencer {

/// Positioned parse failure; line and column are 1-based, columns count
/// code points.
class ParseError : public std::runtime_error {
public:
    ParseError(int line, int column, std::string token, const std::string& message);
    int line() const { return line_; }
    int column() const { return column_; }
    const std::string& token() const { return token_; }
    const std::string& message() const { return message_; }

private:
    int line_;
    int column_;
    std::string token_;
    std::string message_;
};

/// .spd text:
///   vars x y
///   unknowns u v
///   eq 1/2 u_xx - v_xy = 0
/// Variable names must be prefix-free so derivative subscripts decode uniquely.
EquationSet parse(std::string_view text);
EquationSet parse_file(const std::string& path);

/// Canonical text; parse(pretty_print(e)) == e.
std::string pretty_print(const EquationSet& eqs);
std::string term_string(const EquationSet& eqs, const Term& t);
std::string equation_string(const EquationSet& eqs, const Equation& e);

enum class SubspaceMode { Covectors, Vectors };

struct SubspaceSpec {
    SubspaceMode mode = SubspaceMode::Covectors;
    std::vector<std::vector<Rational>> rows;  // coordinates in declared variable order
};

/// "dx, dy + 2dz" (covectors) or "@x - @y", "∂x" (vectors).
SubspaceSpec parse_subspace(std::string_view text, const std::vector<std::string>& vars, SubspaceMode mode);

/// Throws std::invalid_argument when the rows are dependent or zero.
RSubspace to_subspace(const SubspaceSpec& spec, int n);

/// V* from a covector spec, or ann(W) from a vector spec.
RSubspace vstar_from(const SubspaceSpec& spec, int n);

std::string covector_string(const std::vector<Rational>& v, const std::vector<std::string>& vars);
std::string covector_string(const std::vector<Gaussian>& v, const std::vector<std::string>& vars);
std::string vector_string(const std::vector<Rational>& v, const std::vector<std::string>& vars);

}  // namespace spencer
