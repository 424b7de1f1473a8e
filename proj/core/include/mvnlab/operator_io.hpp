#pragma once

#include <optional>
#include <string>

#include "mvnlab/block_operator.hpp"

// Line-oriented UTF-8 text format for algebras and block operators.
//
//     algebra: shapes=[2,3] weights_prefix=[0.3,0.2] tail_ratio=0.5
//     block 0:
//       1+0i 0+0i
//       0+0i 1+0i
//     ...
//     tail: kind=scalar formula=0.25*exp{-0.5*k}
//
// Finite algebras omit `tail_ratio` and the `tail:` line.  A file may stop
// after the `algebra:` line to describe just the algebra.  Blank lines and
// `#` comments are ignored.  Values are parsed as doubles; serialization uses
// shortest round-tripping decimals, but bit-exact round-trip of arbitrary
// externally written decimals is not promised.

namespace mvnlab {

struct ParsedOperatorFile {
    AlgebraPtr algebra;
    // Present when the file carries block data; absent for algebra-only files.
    std::optional<BlockOperator> op;
};

ParsedOperatorFile parse_operator_text(const std::string& text);
ParsedOperatorFile parse_operator_file(const std::string& path);

std::string serialize_algebra(const FiniteBlockAlgebra& alg);
std::string serialize_operator(const BlockOperator& x);
void write_operator_file(const std::string& path, const BlockOperator& x);

// Complex literal: `3`, `-2.5`, `i`, `-2i`, `3+2i`, `1e-3-0.5i`.
Complex parse_complex_literal(const std::string& token, int line = 0, int column = 0);
std::string format_complex_literal(Complex z);

// Scalar tail formulas: sums of products over literals, `k`, `k^d`, and
// `exp{...}`; complex coefficients are parenthesized, e.g. `(0+1i)*k`.
TailFormula parse_formula(const std::string& text, int line = 0, int column_offset = 0);
std::string serialize_formula(const TailFormula& f);

// Shortest decimal that round-trips the double (to_chars); nan/inf spelled out.
std::string format_double(double v);

} // namespace mvnlab
