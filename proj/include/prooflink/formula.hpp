#pragma once

#include <cctype>
#include <cstddef>
#include <map>
#include <memory>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace prooflink {

enum class Polarity { Negative, Positive };

[[nodiscard]] constexpr Polarity flip(Polarity p) noexcept {
    return p == Polarity::Negative ? Polarity::Positive : Polarity::Negative;
}

[[nodiscard]] constexpr std::string_view to_string(Polarity p) noexcept {
    return p == Polarity::Negative ? "ant" : "suc";
}

/// Atom, left/right (Over), left\right (Under) or left*right (Prod).
enum class Connective { Atom, Over, Under, Prod };

/// Immutable binary formula tree. Copies share structure.
class Formula {
    struct Node {
        Connective kind;
        std::string name;
        std::shared_ptr<const Node> left, right;
        std::size_t size;
    };

    std::shared_ptr<const Node> node_;

    explicit Formula(std::shared_ptr<const Node> n) : node_(std::move(n)) {}

    static Formula binary(Connective c, const Formula& l, const Formula& r) {
        return Formula(std::make_shared<const Node>(
            Node{c, {}, l.node_, r.node_, 1 + l.size() + r.size()}));
    }

public:
    [[nodiscard]] static bool valid_atom_name(std::string_view name) noexcept {
        if (name.empty() || !std::islower(static_cast<unsigned char>(name.front()))) return false;
        for (char ch : name) {
            auto u = static_cast<unsigned char>(ch);
            if (!(std::islower(u) || std::isdigit(u) || ch == '_')) return false;
        }
        return true;
    }

    static Formula atom(std::string name) {
        if (!valid_atom_name(name)) throw std::invalid_argument("invalid atom name '" + name + "'");
        return Formula(std::make_shared<const Node>(Node{Connective::Atom, std::move(name), {}, {}, 1}));
    }
    static Formula over(const Formula& l, const Formula& r) { return binary(Connective::Over, l, r); }
    static Formula under(const Formula& l, const Formula& r) { return binary(Connective::Under, l, r); }
    static Formula prod(const Formula& l, const Formula& r) { return binary(Connective::Prod, l, r); }

    [[nodiscard]] Connective kind() const noexcept { return node_->kind; }
    [[nodiscard]] bool is_atom() const noexcept { return node_->kind == Connective::Atom; }
    [[nodiscard]] const std::string& name() const noexcept { return node_->name; }
    [[nodiscard]] Formula left() const { return Formula(node_->left); }
    [[nodiscard]] Formula right() const { return Formula(node_->right); }
    [[nodiscard]] std::size_t size() const noexcept { return node_->size; }

    friend bool operator==(const Formula& a, const Formula& b) {
        if (a.node_ == b.node_) return true;
        if (a.kind() != b.kind() || a.size() != b.size()) return false;
        if (a.is_atom()) return a.name() == b.name();
        return a.left() == b.left() && a.right() == b.right();
    }
};

struct Sequent {
    std::vector<Formula> antecedent;
    Formula succedent;

    friend bool operator==(const Sequent&, const Sequent&) = default;
};

/// Polarity of a premiss given the polarity of its link's conclusion.
/// The divisor of / and \ flips, everything else keeps the conclusion's polarity.
[[nodiscard]] inline Polarity left_polarity(Connective c, Polarity conclusion) noexcept {
    return c == Connective::Under ? flip(conclusion) : conclusion;
}
[[nodiscard]] inline Polarity right_polarity(Connective c, Polarity conclusion) noexcept {
    return c == Connective::Over ? flip(conclusion) : conclusion;
}

class ParseError : public std::runtime_error {
public:
    ParseError(std::string message, std::size_t position)
        : std::runtime_error(message + " at position " + std::to_string(position)),
          message_(std::move(message)), position_(position) {}

    [[nodiscard]] std::size_t position() const noexcept { return position_; }
    [[nodiscard]] const std::string& message() const noexcept { return message_; }

    /// Same error, relocated into an enclosing text that starts `offset` characters earlier.
    [[nodiscard]] ParseError shifted(std::size_t offset) const { return {message_, position_ + offset}; }

private:
    std::string message_;
    std::size_t position_;
};

namespace detail {

class FormulaParser {
public:
    explicit FormulaParser(std::string_view text) : text_(text) {}

    Formula formula() {
        Formula head = prod();
        skip_ws();
        if (peek() == '/') {
            while (peek() == '/') {
                ++pos_;
                head = Formula::over(head, prod());
                skip_ws();
            }
            if (peek() == '\\') fail("'\\' after '/' requires parentheses");
            return head;
        }
        if (peek() == '\\') {
            ++pos_;
            return Formula::under(head, under_chain());
        }
        return head;
    }

    [[nodiscard]] bool at_end() {
        skip_ws();
        return pos_ >= text_.size();
    }
    char peek() {
        skip_ws();
        return pos_ < text_.size() ? text_[pos_] : '\0';
    }
    [[noreturn]] void fail(const std::string& msg) const { throw ParseError(msg, pos_); }

private:
    // prod ["\" under_chain]; a following '/' is a mixing error.
    Formula under_chain() {
        Formula head = prod();
        skip_ws();
        if (peek() == '/') fail("'/' after '\\' requires parentheses");
        if (peek() == '\\') {
            ++pos_;
            return Formula::under(head, under_chain());
        }
        return head;
    }

    Formula prod() {
        Formula head = primary();
        while (peek() == '*') {
            ++pos_;
            head = Formula::prod(head, primary());
        }
        return head;
    }

    Formula primary() {
        char c = peek();
        if (c == '(') {
            ++pos_;
            Formula inner = formula();
            if (peek() != ')') fail("expected ')'");
            ++pos_;
            return inner;
        }
        if (std::islower(static_cast<unsigned char>(c))) {
            std::size_t start = pos_;
            while (pos_ < text_.size()) {
                auto u = static_cast<unsigned char>(text_[pos_]);
                if (!(std::islower(u) || std::isdigit(u) || text_[pos_] == '_')) break;
                ++pos_;
            }
            return Formula::atom(std::string(text_.substr(start, pos_ - start)));
        }
        if (c == '\0') fail("unexpected end of input, expected a formula");
        fail(std::string("unexpected character '") + c + "', expected a formula");
    }

    void skip_ws() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    }

    std::string_view text_;
    std::size_t pos_ = 0;
};

inline int precedence_rank(Connective c) noexcept {
    return c == Connective::Atom ? 0 : c == Connective::Prod ? 1 : 2;
}

inline void print(const Formula& f, std::string& out);

inline void print_operand(const Formula& f, bool parens, std::string& out) {
    if (parens) out += '(';
    print(f, out);
    if (parens) out += ')';
}

inline void print(const Formula& f, std::string& out) {
    switch (f.kind()) {
    case Connective::Atom:
        out += f.name();
        return;
    case Connective::Prod:
        print_operand(f.left(), precedence_rank(f.left().kind()) > 1, out);
        out += '*';
        print_operand(f.right(), precedence_rank(f.right().kind()) >= 1, out);
        return;
    case Connective::Over:
        print_operand(f.left(), f.left().kind() == Connective::Under, out);
        out += '/';
        print_operand(f.right(), precedence_rank(f.right().kind()) == 2, out);
        return;
    case Connective::Under:
        print_operand(f.left(), precedence_rank(f.left().kind()) == 2, out);
        out += '\\';
        print_operand(f.right(), f.right().kind() == Connective::Over, out);
        return;
    }
}

} // namespace detail

/// Parses a formula; '/' is left-associative, '\' right-associative, '*' binds tightest.
[[nodiscard]] inline Formula parse_formula(std::string_view text) {
    detail::FormulaParser p(text);
    if (p.at_end()) throw ParseError("empty formula", 0);
    Formula f = p.formula();
    if (!p.at_end()) p.fail(std::string("unexpected character '") + p.peek() + "'");
    return f;
}

/// Parses "A1, ..., An |- C". The antecedent may be empty.
[[nodiscard]] inline Sequent parse_sequent(std::string_view text) {
    auto turnstile = text.find("|-");
    if (turnstile == std::string_view::npos) throw ParseError("missing turnstile '|-'", text.size());
    if (text.find("|-", turnstile + 2) != std::string_view::npos)
        throw ParseError("duplicate turnstile '|-'", text.find("|-", turnstile + 2));

    std::vector<Formula> antecedent;
    std::string_view lhs = text.substr(0, turnstile);
    std::size_t depth = 0, start = 0;
    bool any = false;
    for (std::size_t i = 0; i <= lhs.size(); ++i) {
        if (i < lhs.size() && lhs[i] == '(') ++depth;
        if (i < lhs.size() && lhs[i] == ')' && depth > 0) --depth;
        if (i == lhs.size() || (lhs[i] == ',' && depth == 0)) {
            std::string_view piece = lhs.substr(start, i - start);
            bool blank = piece.find_first_not_of(" \t\r\n") == std::string_view::npos;
            if (blank && (any || i < lhs.size())) throw ParseError("empty antecedent formula", start);
            if (!blank) {
                try {
                    antecedent.push_back(parse_formula(piece));
                } catch (const ParseError& e) {
                    throw e.shifted(start);
                }
                any = true;
            }
            start = i + 1;
        }
    }

    std::string_view rhs = text.substr(turnstile + 2);
    if (rhs.find_first_not_of(" \t\r\n") == std::string_view::npos)
        throw ParseError("empty succedent", text.size());
    try {
        return Sequent{std::move(antecedent), parse_formula(rhs)};
    } catch (const ParseError& e) {
        throw e.shifted(turnstile + 2);
    }
}

[[nodiscard]] inline std::string to_string(const Formula& f) {
    std::string out;
    detail::print(f, out);
    return out;
}

[[nodiscard]] inline std::string to_string(const Sequent& s) {
    std::string out;
    for (std::size_t i = 0; i < s.antecedent.size(); ++i) {
        if (i) out += ", ";
        out += to_string(s.antecedent[i]);
    }
    if (!s.antecedent.empty()) out += ' ';
    out += "|- ";
    out += to_string(s.succedent);
    return out;
}

struct AtomCount {
    std::size_t negative = 0;
    std::size_t positive = 0;
    friend bool operator==(const AtomCount&, const AtomCount&) = default;
};

using AtomMultiset = std::map<std::string, AtomCount>;

namespace detail {
inline void count_atoms(const Formula& f, Polarity pol, AtomMultiset& out) {
    if (f.is_atom()) {
        auto& c = out[f.name()];
        (pol == Polarity::Negative ? c.negative : c.positive) += 1;
        return;
    }
    count_atoms(f.left(), left_polarity(f.kind(), pol), out);
    count_atoms(f.right(), right_polarity(f.kind(), pol), out);
}
} // namespace detail

/// Per-atom (negative, positive) occurrence counts after unfolding.
[[nodiscard]] inline AtomMultiset atom_multiset(const Sequent& s) {
    AtomMultiset out;
    for (const auto& f : s.antecedent) detail::count_atoms(f, Polarity::Negative, out);
    detail::count_atoms(s.succedent, Polarity::Positive, out);
    return out;
}

[[nodiscard]] inline bool balanced(const AtomMultiset& m) noexcept {
    for (const auto& [name, c] : m)
        if (c.negative != c.positive) return false;
    return true;
}

} // namespace prooflink
