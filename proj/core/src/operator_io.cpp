#include "mvnlab/operator_io.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <cstring>
#include <fstream>
#include <sstream>
#include <vector>

#include "mvnlab/errors.hpp"

namespace mvnlab {

std::string format_double(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

namespace {

bool parse_double_full(const std::string& s, double& out) {
    if (s.empty()) return false;
    const char* b = s.data();
    const char* e = s.data() + s.size();
    // from_chars rejects a leading '+'.
    if (*b == '+') ++b;
    if (s == "nan") { out = std::numeric_limits<double>::quiet_NaN(); return true; }
    if (s == "inf" || s == "+inf") { out = std::numeric_limits<double>::infinity(); return true; }
    if (s == "-inf") { out = -std::numeric_limits<double>::infinity(); return true; }
    const auto res = std::from_chars(b, e, out);
    return res.ec == std::errc() && res.ptr == e;
}

// Index of the sign that separates the real and imaginary halves of `a+bi`,
// or npos.  Signs at position 0 or directly after an exponent marker bind to
// the number instead.
std::size_t split_sign_pos(const std::string& t) {
    std::size_t pos = std::string::npos;
    for (std::size_t i = 1; i < t.size(); ++i) {
        if ((t[i] == '+' || t[i] == '-') && t[i - 1] != 'e' && t[i - 1] != 'E') pos = i;
    }
    return pos;
}

} // namespace

Complex parse_complex_literal(const std::string& token, int line, int column) {
    const auto fail = [&](const std::string& why) -> Complex {
        throw ParseError("bad complex literal '" + token + "': " + why, line, column);
    };
    if (token.empty()) return fail("empty");
    if (token.back() == 'i') {
        const std::string body = token.substr(0, token.size() - 1);
        const std::size_t pos = split_sign_pos(body);
        if (pos == std::string::npos) {
            // Pure imaginary: i, -i, 2.5i ...
            double im = 0.0;
            if (body.empty() || body == "+") im = 1.0;
            else if (body == "-") im = -1.0;
            else if (!parse_double_full(body, im)) return fail("imaginary part");
            return Complex(0.0, im);
        }
        double re = 0.0, im = 0.0;
        if (!parse_double_full(body.substr(0, pos), re)) return fail("real part");
        const std::string imag = body.substr(pos);
        if (imag == "+") im = 1.0;
        else if (imag == "-") im = -1.0;
        else if (!parse_double_full(imag, im)) return fail("imaginary part");
        return Complex(re, im);
    }
    double re = 0.0;
    if (split_sign_pos(token) != std::string::npos || !parse_double_full(token, re))
        return fail("expected a real number or a+bi");
    return Complex(re, 0.0);
}

std::string format_complex_literal(Complex z) {
    std::string out = format_double(z.real());
    out += (std::signbit(z.imag()) && !std::isnan(z.imag())) ? '-' : '+';
    out += format_double(std::abs(z.imag()));
    out += 'i';
    return out;
}

// ---------------------------------------------------------------------------
// Formula text <-> TailFormula.  The parser is a tiny expression evaluator
// over TailFormula values, so grammar closure (and GrammarOverflow) come from
// the formula arithmetic itself.

namespace {

class FormulaParser {
public:
    FormulaParser(const std::string& s, int line, int col_offset)
        : s_(s), line_(line), col_(col_offset) {}

    TailFormula parse() {
        TailFormula f = expression();
        skip_ws();
        if (pos_ != s_.size()) fail("trailing input");
        return f;
    }

private:
    const std::string& s_;
    std::size_t pos_ = 0;
    int line_;
    int col_;

    [[noreturn]] void fail(const std::string& why) const {
        throw ParseError("formula: " + why, line_, col_ + static_cast<int>(pos_) + 1);
    }

    void skip_ws() {
        while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    }

    bool eat(char c) {
        skip_ws();
        if (pos_ < s_.size() && s_[pos_] == c) { ++pos_; return true; }
        return false;
    }

    bool eat_word(const char* w) {
        skip_ws();
        const std::size_t n = std::strlen(w);
        if (s_.compare(pos_, n, w) == 0) { pos_ += n; return true; }
        return false;
    }

    TailFormula expression() {
        skip_ws();
        bool neg = false;
        if (eat('-')) neg = true;
        else (void)eat('+');
        TailFormula acc = term();
        if (neg) acc = -acc;
        while (true) {
            skip_ws();
            if (eat('+')) acc = acc + term();
            else if (eat('-')) acc = acc - term();
            else break;
        }
        return acc;
    }

    TailFormula term() {
        TailFormula acc = factor();
        while (eat('*')) acc = acc * factor();
        return acc;
    }

    TailFormula factor() {
        skip_ws();
        if (pos_ >= s_.size()) fail("unexpected end of formula");
        if (eat_word("exp{")) {
            TailFormula inner = expression();
            if (!eat('}')) fail("expected '}'");
            return TailFormula::exp_of(inner);
        }
        if (eat('(')) {
            // Parenthesized complex literal, e.g. (3-0.5i).
            const std::size_t start = pos_;
            while (pos_ < s_.size() && s_[pos_] != ')') ++pos_;
            if (pos_ >= s_.size()) fail("expected ')'");
            const std::string body = s_.substr(start, pos_ - start);
            ++pos_;
            return TailFormula::constant(
                parse_complex_literal(body, line_, col_ + static_cast<int>(start) + 1));
        }
        if (s_[pos_] == 'k') {
            ++pos_;
            int power = 1;
            if (eat('^')) {
                skip_ws();
                const std::size_t start = pos_;
                while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
                if (start == pos_) fail("expected an integer exponent");
                power = std::stoi(s_.substr(start, pos_ - start));
            }
            return TailFormula::monomial(Complex(1.0, 0.0), power);
        }
        // Numeric literal, possibly with trailing 'i'.
        const std::size_t start = pos_;
        while (pos_ < s_.size()) {
            const char c = s_[pos_];
            if (std::isdigit(static_cast<unsigned char>(c)) || c == '.' || c == 'e' || c == 'E' ||
                c == 'i' || ((c == '+' || c == '-') && (s_[pos_ - 1] == 'e' || s_[pos_ - 1] == 'E')))
                ++pos_;
            else
                break;
        }
        if (start == pos_) fail(std::string("unexpected character '") + s_[pos_] + "'");
        return TailFormula::constant(
            parse_complex_literal(s_.substr(start, pos_ - start), line_, col_ + static_cast<int>(start) + 1));
    }
};

std::string serialize_term(const TailTerm& t) {
    std::string out;
    if (t.coeff.imag() == 0.0)
        out = format_double(t.coeff.real());
    else
        out = "(" + format_complex_literal(t.coeff) + ")";
    if (t.power == 1) out += "*k";
    else if (t.power > 1) out += "*k^" + std::to_string(t.power);
    if (t.rate != Complex(0.0, 0.0)) {
        out += "*exp{";
        out += (t.rate.imag() == 0.0) ? format_double(t.rate.real())
                                      : "(" + format_complex_literal(t.rate) + ")";
        out += "*k}";
    }
    return out;
}

std::string serialize_term_sum(const std::vector<TailTerm>& terms) {
    if (terms.empty()) return "0";
    std::string out;
    for (std::size_t i = 0; i < terms.size(); ++i) {
        std::string piece = serialize_term(terms[i]);
        if (i == 0) {
            out = std::move(piece);
        } else if (piece.front() == '-') {
            out += " - ";
            out += piece.substr(1);
        } else {
            out += " + ";
            out += piece;
        }
    }
    return out;
}

} // namespace

TailFormula parse_formula(const std::string& text, int line, int column_offset) {
    return FormulaParser(text, line, column_offset).parse();
}

std::string serialize_formula(const TailFormula& f) {
    if (f.is_exp_wrapped()) return "exp{" + serialize_term_sum(f.terms()) + "}";
    return serialize_term_sum(f.terms());
}

// ---------------------------------------------------------------------------
// Operator files.

namespace {

std::string bracket_list_double(const std::vector<double>& xs) {
    std::string out = "[";
    for (std::size_t i = 0; i < xs.size(); ++i) {
        if (i) out += ",";
        out += format_double(xs[i]);
    }
    return out + "]";
}

std::string bracket_list_int(const std::vector<int>& xs) {
    std::string out = "[";
    for (std::size_t i = 0; i < xs.size(); ++i) {
        if (i) out += ",";
        out += std::to_string(xs[i]);
    }
    return out + "]";
}

struct Line {
    std::string text;
    int number = 0;
};

std::vector<Line> significant_lines(const std::string& text) {
    std::vector<Line> lines;
    std::istringstream in(text);
    std::string raw;
    int number = 0;
    while (std::getline(in, raw)) {
        ++number;
        const std::size_t hash = raw.find('#');
        std::string body = (hash == std::string::npos) ? raw : raw.substr(0, hash);
        const auto first = body.find_first_not_of(" \t\r");
        if (first == std::string::npos) continue;
        const auto last = body.find_last_not_of(" \t\r");
        lines.push_back({body.substr(first, last - first + 1), number});
    }
    return lines;
}

std::vector<std::string> split_ws(const std::string& s) {
    std::vector<std::string> out;
    std::istringstream in(s);
    std::string tok;
    while (in >> tok) out.push_back(tok);
    return out;
}

// key=value fields of the algebra line; bracketed values keep their brackets.
std::vector<std::pair<std::string, std::string>> parse_fields(const std::string& s, int line) {
    std::vector<std::pair<std::string, std::string>> out;
    std::size_t i = 0;
    while (i < s.size()) {
        while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
        if (i >= s.size()) break;
        const std::size_t eq = s.find('=', i);
        if (eq == std::string::npos)
            throw ParseError("expected key=value", line, static_cast<int>(i) + 1);
        const std::string key = s.substr(i, eq - i);
        std::size_t j = eq + 1;
        std::string value;
        if (j < s.size() && s[j] == '[') {
            const std::size_t close = s.find(']', j);
            if (close == std::string::npos)
                throw ParseError("unterminated '['", line, static_cast<int>(j) + 1);
            value = s.substr(j, close - j + 1);
            j = close + 1;
        } else {
            while (j < s.size() && !std::isspace(static_cast<unsigned char>(s[j]))) ++j;
            value = s.substr(eq + 1, j - (eq + 1));
        }
        out.emplace_back(key, value);
        i = j;
    }
    return out;
}

std::vector<std::string> split_list(const std::string& bracketed, int line) {
    if (bracketed.size() < 2 || bracketed.front() != '[' || bracketed.back() != ']')
        throw ParseError("expected a [..] list, got '" + bracketed + "'", line);
    std::vector<std::string> items;
    std::string body = bracketed.substr(1, bracketed.size() - 2);
    std::size_t start = 0;
    while (start <= body.size()) {
        std::size_t comma = body.find(',', start);
        if (comma == std::string::npos) comma = body.size();
        std::string item = body.substr(start, comma - start);
        const auto a = item.find_first_not_of(" \t");
        if (a != std::string::npos) {
            const auto b = item.find_last_not_of(" \t");
            items.push_back(item.substr(a, b - a + 1));
        }
        start = comma + 1;
    }
    return items;
}

AlgebraPtr parse_algebra_line(const std::string& rest, int line) {
    std::vector<int> shape;
    std::vector<double> weights;
    std::optional<double> ratio;
    for (const auto& [key, value] : parse_fields(rest, line)) {
        if (key == "shapes") {
            for (const auto& item : split_list(value, line)) {
                int d = 0;
                const auto res = std::from_chars(item.data(), item.data() + item.size(), d);
                if (res.ec != std::errc() || res.ptr != item.data() + item.size())
                    throw ParseError("bad block dimension '" + item + "'", line);
                shape.push_back(d);
            }
        } else if (key == "weights_prefix") {
            for (const auto& item : split_list(value, line)) {
                double w = 0.0;
                if (!parse_double_full(item, w))
                    throw ParseError("bad weight '" + item + "'", line);
                weights.push_back(w);
            }
        } else if (key == "tail_ratio") {
            double r = 0.0;
            if (!parse_double_full(value, r))
                throw ParseError("bad tail_ratio '" + value + "'", line);
            ratio = r;
        } else {
            throw ParseError("unknown algebra field '" + key + "'", line);
        }
    }
    if (shape.empty()) throw ParseError("algebra line needs shapes=[..]", line);
    if (weights.empty()) throw ParseError("algebra line needs weights_prefix=[..]", line);
    return ratio ? FiniteBlockAlgebra::make_with_tail(shape, weights, *ratio)
                 : FiniteBlockAlgebra::make(shape, weights);
}

} // namespace

ParsedOperatorFile parse_operator_text(const std::string& text) {
    const auto lines = significant_lines(text);
    if (lines.empty()) throw ParseError("empty operator file", 1);

    std::size_t idx = 0;
    const auto& first = lines[idx];
    if (first.text.rfind("algebra:", 0) != 0)
        throw ParseError("expected 'algebra:' header", first.number);
    AlgebraPtr alg = parse_algebra_line(first.text.substr(8), first.number);
    ++idx;

    std::vector<linops::CMatrix> blocks;
    TailFormula tail = TailFormula::zero();
    bool saw_block = false, saw_tail = false;

    while (idx < lines.size()) {
        const auto& [body, number] = lines[idx];
        if (body.rfind("block", 0) == 0) {
            if (saw_tail) throw ParseError("block after tail line", number);
            std::string head = body.substr(5);
            if (head.empty() || head.back() != ':')
                throw ParseError("block header must end with ':'", number);
            head.pop_back();
            int k = -1;
            {
                const auto toks = split_ws(head);
                if (toks.size() != 1 ||
                    std::from_chars(toks[0].data(), toks[0].data() + toks[0].size(), k).ec !=
                        std::errc())
                    throw ParseError("bad block index '" + head + "'", number);
            }
            if (k != static_cast<int>(blocks.size()))
                throw ParseError("block indices must be consecutive from 0; got " +
                                     std::to_string(k),
                                 number);
            const int dim = alg->block_dim(k);
            linops::CMatrix m(dim, dim);
            ++idx;
            for (int r = 0; r < dim; ++r, ++idx) {
                if (idx >= lines.size())
                    throw ParseError("block " + std::to_string(k) + " is missing row " +
                                         std::to_string(r),
                                     lines.back().number);
                const auto toks = split_ws(lines[idx].text);
                if (static_cast<int>(toks.size()) != dim)
                    throw DimensionMismatch("block " + std::to_string(k) + " row " +
                                            std::to_string(r) + ": expected " +
                                            std::to_string(dim) + " entries, got " +
                                            std::to_string(toks.size()));
                for (int c = 0; c < dim; ++c)
                    m(r, c) = parse_complex_literal(toks[static_cast<std::size_t>(c)],
                                                    lines[idx].number, c + 1);
            }
            blocks.push_back(std::move(m));
            saw_block = true;
            continue;
        }
        if (body.rfind("tail:", 0) == 0) {
            if (saw_tail) throw ParseError("duplicate tail line", number);
            saw_tail = true;
            std::string rest = body.substr(5);
            const auto kind_pos = rest.find("kind=");
            if (kind_pos == std::string::npos) throw ParseError("tail line needs kind=", number);
            std::string after = rest.substr(kind_pos + 5);
            if (after.rfind("zero", 0) == 0) {
                tail = TailFormula::zero();
            } else if (after.rfind("scalar", 0) == 0) {
                const auto f_pos = rest.find("formula=");
                if (f_pos == std::string::npos)
                    throw ParseError("scalar tail needs formula=", number);
                tail = parse_formula(rest.substr(f_pos + 8), number,
                                     static_cast<int>(f_pos) + 8 + 5);
            } else {
                throw ParseError("unknown tail kind in '" + rest + "'", number);
            }
            ++idx;
            continue;
        }
        throw ParseError("unrecognized line '" + body + "'", number);
    }

    ParsedOperatorFile out;
    out.algebra = alg;
    if (saw_block || saw_tail) {
        if (!alg->has_tail() && saw_tail && !tail.is_zero())
            throw ParseError("finite algebra cannot carry a scalar tail", lines.back().number);
        out.op = BlockOperator::from_blocks(alg, std::move(blocks), tail);
    }
    return out;
}

ParsedOperatorFile parse_operator_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot open operator file '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_operator_text(buf.str());
}

std::string serialize_algebra(const FiniteBlockAlgebra& alg) {
    std::string out = "algebra: shapes=" + bracket_list_int(alg.shape_prefix()) +
                      " weights_prefix=" + bracket_list_double(alg.weight_prefix());
    if (alg.has_tail()) out += " tail_ratio=" + format_double(alg.tail_ratio());
    out += "\n";
    return out;
}

std::string serialize_operator(const BlockOperator& x) {
    std::string out = serialize_algebra(*x.algebra());
    for (std::int64_t k = 0; k < x.prefix_count(); ++k) {
        out += "block " + std::to_string(k) + ":\n";
        const linops::CMatrix m = x.block(k);
        for (Eigen::Index r = 0; r < m.rows(); ++r) {
            out += " ";
            for (Eigen::Index c = 0; c < m.cols(); ++c) {
                out += " ";
                out += format_complex_literal(m(r, c));
            }
            out += "\n";
        }
    }
    if (x.algebra()->has_tail()) {
        out += x.tail().is_zero() ? "tail: kind=zero\n"
                                  : "tail: kind=scalar formula=" + serialize_formula(x.tail()) +
                                        "\n";
    }
    return out;
}

void write_operator_file(const std::string& path, const BlockOperator& x) {
    std::ofstream outf(path, std::ios::binary | std::ios::trunc);
    if (!outf) throw ConfigError("cannot open '" + path + "' for writing");
    outf << serialize_operator(x);
    if (!outf) throw ConfigError("failed writing '" + path + "'");
}

} // namespace mvnlab
