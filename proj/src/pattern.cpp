#include "limecep/pattern.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <sstream>

#include "limecep/errors.hpp"

namespace limecep {

std::string to_string(SelectionPolicy policy) {
    return policy == SelectionPolicy::Stnm ? "stnm" : "stam";
}

SelectionPolicy policy_from_string(const std::string& text) {
    std::string lowered;
    for (char c : text) lowered.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
    if (lowered == "stnm") return SelectionPolicy::Stnm;
    if (lowered == "stam") return SelectionPolicy::Stam;
    throw ConfigError("unknown selection policy: " + text);
}

bool PatternSpec::has_type(const std::string& type) const {
    return element_index(type).has_value();
}

std::optional<std::size_t> PatternSpec::element_index(const std::string& type) const {
    for (std::size_t i = 0; i < elements.size(); ++i)
        if (elements[i].type == type) return i;
    return std::nullopt;
}

const PatternElement* PatternSpec::element_for_alias(const std::string& alias) const {
    for (const auto& el : elements)
        if (el.alias == alias) return &el;
    return nullptr;
}

namespace {

struct Token {
    enum class Kind { Ident, Number, String, Punct, End };
    Kind kind = Kind::End;
    std::string text;
    double number = 0.0;
    std::size_t pos = 0;
};

class Lexer {
  public:
    explicit Lexer(const std::string& text) : text_(text) { advance(); }

    const Token& peek() const { return current_; }

    Token next() {
        Token t = current_;
        advance();
        return t;
    }

    std::size_t pos() const { return current_.pos; }

  private:
    void advance() {
        while (i_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[i_]))) ++i_;
        current_ = Token{};
        current_.pos = i_;
        if (i_ >= text_.size()) {
            current_.kind = Token::Kind::End;
            return;
        }
        char c = text_[i_];
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            std::size_t start = i_;
            while (i_ < text_.size() &&
                   (std::isalnum(static_cast<unsigned char>(text_[i_])) || text_[i_] == '_'))
                ++i_;
            current_.kind = Token::Kind::Ident;
            current_.text = text_.substr(start, i_ - start);
            return;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) ||
            (c == '-' && i_ + 1 < text_.size() &&
             std::isdigit(static_cast<unsigned char>(text_[i_ + 1])))) {
            std::size_t start = i_;
            if (text_[i_] == '-') ++i_;
            while (i_ < text_.size() &&
                   (std::isdigit(static_cast<unsigned char>(text_[i_])) || text_[i_] == '.'))
                ++i_;
            current_.kind = Token::Kind::Number;
            current_.text = text_.substr(start, i_ - start);
            current_.number = std::stod(current_.text);
            return;
        }
        if (c == '\'' || c == '"') {
            char quote = c;
            std::size_t start = ++i_;
            while (i_ < text_.size() && text_[i_] != quote) ++i_;
            if (i_ >= text_.size()) throw ParseError("unterminated string literal", start - 1);
            current_.kind = Token::Kind::String;
            current_.text = text_.substr(start, i_ - start);
            ++i_;
            return;
        }
        // Multi-character comparison operators.
        static const char* two_char[] = {"<=", ">=", "==", "!=", "<>"};
        for (const char* op : two_char) {
            if (text_.compare(i_, 2, op) == 0) {
                current_.kind = Token::Kind::Punct;
                current_.text = op;
                i_ += 2;
                return;
            }
        }
        current_.kind = Token::Kind::Punct;
        current_.text = std::string(1, c);
        ++i_;
    }

    const std::string& text_;
    std::size_t i_ = 0;
    Token current_;
};

std::string lower(const std::string& s) {
    std::string out;
    for (char c : s) out.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
    return out;
}

bool is_keyword(const Token& t, const char* kw) {
    return t.kind == Token::Kind::Ident && lower(t.text) == kw;
}

void expect_keyword(Lexer& lex, const char* kw) {
    Token t = lex.next();
    if (!is_keyword(t, kw)) throw ParseError(std::string("expected keyword '") + kw + "'", t.pos);
}

void expect_punct(Lexer& lex, const char* p) {
    Token t = lex.next();
    if (t.kind != Token::Kind::Punct || t.text != p)
        throw ParseError(std::string("expected '") + p + "'", t.pos);
}

// Consumes trailing '+' / '[]' Kleene marks after a name token.
bool consume_kleene_marks(Lexer& lex) {
    bool marked = false;
    while (lex.peek().kind == Token::Kind::Punct && (lex.peek().text == "+" || lex.peek().text == "[")) {
        if (lex.peek().text == "+") {
            lex.next();
            marked = true;
        } else {
            // Only an empty '[]' marks Kleene here; '[i]' belongs to predicates.
            Token open = lex.next();
            Token t = lex.next();
            if (t.kind != Token::Kind::Punct || t.text != "]")
                throw ParseError("expected ']' after '['", open.pos);
            marked = true;
        }
    }
    return marked;
}

CmpOp parse_op(const Token& t) {
    if (t.kind != Token::Kind::Punct) throw ParseError("expected comparison operator", t.pos);
    if (t.text == "<") return CmpOp::Lt;
    if (t.text == "<=") return CmpOp::Le;
    if (t.text == ">") return CmpOp::Gt;
    if (t.text == ">=") return CmpOp::Ge;
    if (t.text == "=" || t.text == "==") return CmpOp::Eq;
    if (t.text == "!=" || t.text == "<>") return CmpOp::Ne;
    throw ParseError("unknown comparison operator '" + t.text + "'", t.pos);
}

Operand parse_operand(Lexer& lex) {
    Token t = lex.next();
    Operand op;
    if (t.kind == Token::Kind::Number) {
        op.kind = Operand::Kind::Literal;
        op.literal = t.number;
        return op;
    }
    if (t.kind == Token::Kind::String) {
        op.kind = Operand::Kind::Literal;
        op.literal = t.text;
        return op;
    }
    if (t.kind != Token::Kind::Ident) throw ParseError("expected operand", t.pos);

    std::string name = t.text;
    std::string lowered = lower(name);
    if (lowered == "true" || lowered == "false") {
        op.kind = Operand::Kind::Literal;
        op.literal = lowered == "true" ? 1.0 : 0.0;
        return op;
    }

    Operand::Index index = Operand::Index::None;
    if (lex.peek().kind == Token::Kind::Punct && lex.peek().text == "[") {
        Token open = lex.next();
        Token idx = lex.next();
        if (idx.kind != Token::Kind::Ident || idx.text != "i")
            throw ParseError("iteration index must be 'i' or 'i+1'", open.pos);
        if (lex.peek().kind == Token::Kind::Punct && lex.peek().text == "+") {
            lex.next();
            Token one = lex.next();
            if (one.kind != Token::Kind::Number || one.text != "1")
                throw ParseError("iteration index must be 'i' or 'i+1'", one.pos);
            index = Operand::Index::IPlusOne;
        } else {
            index = Operand::Index::I;
        }
        expect_punct(lex, "]");
    }

    if (lex.peek().kind == Token::Kind::Punct && lex.peek().text == ".") {
        lex.next();
        Token attr = lex.next();
        if (attr.kind != Token::Kind::Ident) throw ParseError("expected attribute name after '.'", attr.pos);
        op.kind = Operand::Kind::Attribute;
        op.alias = name;
        op.attr = attr.text;
        op.index = index;
        return op;
    }
    if (index != Operand::Index::None)
        throw ParseError("indexed reference requires an attribute ('" + name + "[i].attr')", t.pos);

    op.kind = Operand::Kind::NamedConstant;
    op.name = name;
    return op;
}

Timestamp unit_to_ms(const std::string& unit, std::size_t pos) {
    std::string u = lower(unit);
    if (u == "ms" || u == "millisecond" || u == "milliseconds") return 1;
    if (u == "s" || u == "sec" || u == "secs" || u == "second" || u == "seconds") return 1000;
    if (u == "min" || u == "mins" || u == "minute" || u == "minutes") return 60'000;
    if (u == "h" || u == "hour" || u == "hours") return 3'600'000;
    throw ParseError("unknown time unit '" + unit + "'", pos);
}

}  // namespace

PatternSpec parse_pattern(const std::string& text, const std::string& pattern_id) {
    Lexer lex(text);
    PatternSpec pattern;
    pattern.id = pattern_id;

    expect_keyword(lex, "pattern");
    expect_keyword(lex, "seq");
    expect_punct(lex, "(");

    while (true) {
        Token t = lex.peek();
        if (t.kind == Token::Kind::Punct && t.text == "!")
            throw ParseError("negated pattern elements are not supported", t.pos);
        Token type_tok = lex.next();
        if (type_tok.kind != Token::Kind::Ident)
            throw ParseError("expected event-type name", type_tok.pos);
        PatternElement element;
        element.type = type_tok.text;
        element.kleene = consume_kleene_marks(lex);
        Token alias_tok = lex.next();
        if (alias_tok.kind != Token::Kind::Ident)
            throw ParseError("expected alias after event type", alias_tok.pos);
        element.alias = alias_tok.text;
        element.kleene = consume_kleene_marks(lex) || element.kleene;
        pattern.elements.push_back(std::move(element));

        Token sep = lex.next();
        if (sep.kind == Token::Kind::Punct && sep.text == ",") continue;
        if (sep.kind == Token::Kind::Punct && sep.text == ")") break;
        throw ParseError("expected ',' or ')' in element list", sep.pos);
    }

    if (pattern.elements.size() < 2)
        throw ParseError("a pattern needs at least two elements", lex.pos());
    if (pattern.elements.back().kleene)
        throw ParseError("a Kleene element cannot close a pattern", lex.pos());
    for (std::size_t i = 0; i < pattern.elements.size(); ++i) {
        for (std::size_t j = i + 1; j < pattern.elements.size(); ++j) {
            if (pattern.elements[i].type == pattern.elements[j].type)
                throw ParseError("duplicate event type '" + pattern.elements[i].type + "'", 0);
            if (pattern.elements[i].alias == pattern.elements[j].alias)
                throw ParseError("duplicate alias '" + pattern.elements[i].alias + "'", 0);
        }
    }

    if (is_keyword(lex.peek(), "where")) {
        lex.next();
        while (true) {
            std::size_t pred_pos = lex.pos();
            Predicate pred;
            pred.lhs = parse_operand(lex);
            pred.op = parse_op(lex.next());
            pred.rhs = parse_operand(lex);

            auto check_alias = [&](const Operand& operand) {
                if (operand.kind != Operand::Kind::Attribute) return;
                const PatternElement* el = pattern.element_for_alias(operand.alias);
                if (el == nullptr)
                    throw ParseError("unknown alias '" + operand.alias + "' in WHERE", pred_pos);
                if (operand.index != Operand::Index::None && !el->kleene)
                    throw ParseError("iteration predicate on non-Kleene element '" + operand.alias + "'",
                                     pred_pos);
            };
            check_alias(pred.lhs);
            check_alias(pred.rhs);

            bool lhs_ref = pred.lhs.kind == Operand::Kind::Attribute;
            bool rhs_ref = pred.rhs.kind == Operand::Kind::Attribute;
            bool lhs_idx = lhs_ref && pred.lhs.index != Operand::Index::None;
            bool rhs_idx = rhs_ref && pred.rhs.index != Operand::Index::None;
            if (lhs_idx || rhs_idx) {
                if (!lhs_idx || !rhs_idx || pred.lhs.alias != pred.rhs.alias ||
                    pred.lhs.index == pred.rhs.index)
                    throw ParseError("iteration predicate must pair x[i] with x[i+1] on one alias",
                                     pred_pos);
                pred.kind = Predicate::Kind::IterationAdjacent;
            } else if (lhs_ref && rhs_ref) {
                pred.kind = Predicate::Kind::CrossElement;
            } else if (lhs_ref || rhs_ref) {
                pred.kind = Predicate::Kind::Constant;
            } else {
                throw ParseError("predicate must reference at least one alias", pred_pos);
            }
            pattern.predicates.push_back(std::move(pred));

            if (is_keyword(lex.peek(), "and")) {
                lex.next();
                continue;
            }
            break;
        }
    }

    expect_keyword(lex, "within");
    Token amount = lex.next();
    if (amount.kind != Token::Kind::Number)
        throw ParseError("expected window length after WITHIN", amount.pos);
    Token unit = lex.next();
    if (unit.kind != Token::Kind::Ident) throw ParseError("expected time unit", unit.pos);
    double ms = amount.number * static_cast<double>(unit_to_ms(unit.text, unit.pos));
    if (!(ms > 0)) throw ParseError("window must be positive", amount.pos);
    pattern.window_ms = static_cast<Timestamp>(std::llround(ms));

    Token tail = lex.next();
    if (tail.kind != Token::Kind::End) throw ParseError("trailing input after WITHIN clause", tail.pos);
    return pattern;
}

namespace {

std::string render_operand(const Operand& op) {
    switch (op.kind) {
        case Operand::Kind::Attribute: {
            std::string idx = op.index == Operand::Index::None ? ""
                              : op.index == Operand::Index::I  ? "[i]"
                                                               : "[i+1]";
            return op.alias + idx + "." + op.attr;
        }
        case Operand::Kind::NamedConstant:
            return op.name;
        case Operand::Kind::Literal:
            if (std::holds_alternative<std::string>(op.literal))
                return "'" + std::get<std::string>(op.literal) + "'";
            {
                std::ostringstream os;
                os << std::get<double>(op.literal);
                return os.str();
            }
    }
    return "";
}

const char* render_op(CmpOp op) {
    switch (op) {
        case CmpOp::Lt: return "<";
        case CmpOp::Le: return "<=";
        case CmpOp::Gt: return ">";
        case CmpOp::Ge: return ">=";
        case CmpOp::Eq: return "==";
        case CmpOp::Ne: return "!=";
    }
    return "==";
}

}  // namespace

std::string render_pattern(const PatternSpec& pattern) {
    std::ostringstream os;
    os << "PATTERN SEQ(";
    for (std::size_t i = 0; i < pattern.elements.size(); ++i) {
        const auto& el = pattern.elements[i];
        if (i) os << ", ";
        os << el.type << " " << el.alias;
        if (el.kleene) os << "[]+";
    }
    os << ")";
    if (!pattern.predicates.empty()) {
        os << " WHERE ";
        for (std::size_t i = 0; i < pattern.predicates.size(); ++i) {
            if (i) os << " AND ";
            const auto& p = pattern.predicates[i];
            os << render_operand(p.lhs) << " " << render_op(p.op) << " " << render_operand(p.rhs);
        }
    }
    os << " WITHIN " << pattern.window_ms << " ms";
    return os.str();
}

bool compare_values(const Value& lhs, CmpOp op, const Value& rhs) {
    // Mixed numeric/string comparisons have no defined order; they evaluate false
    // except for inequality.
    if (lhs.index() != rhs.index()) return op == CmpOp::Ne;
    int cmp;
    if (std::holds_alternative<double>(lhs)) {
        double a = std::get<double>(lhs), b = std::get<double>(rhs);
        cmp = a < b ? -1 : (a > b ? 1 : 0);
    } else {
        cmp = std::get<std::string>(lhs).compare(std::get<std::string>(rhs));
        cmp = cmp < 0 ? -1 : (cmp > 0 ? 1 : 0);
    }
    switch (op) {
        case CmpOp::Lt: return cmp < 0;
        case CmpOp::Le: return cmp <= 0;
        case CmpOp::Gt: return cmp > 0;
        case CmpOp::Ge: return cmp >= 0;
        case CmpOp::Eq: return cmp == 0;
        case CmpOp::Ne: return cmp != 0;
    }
    return false;
}

namespace {

Value attribute_value(const Event& e, const std::string& attr) {
    auto it = e.payload.find(attr);
    if (it == e.payload.end())
        throw MalformedEventError("event " + e.type + "/" + e.id + " lacks attribute '" + attr + "'");
    return it->second;
}

Value resolve_scalar(const Operand& op, const Event& bound) {
    switch (op.kind) {
        case Operand::Kind::Attribute: return attribute_value(bound, op.attr);
        case Operand::Kind::Literal: return op.literal;
        case Operand::Kind::NamedConstant:
            throw ConfigError("unresolved named constant '" + op.name + "'");
    }
    return 0.0;
}

}  // namespace

bool eval_predicate(const Predicate& pred, const Bindings& bindings) {
    auto events_for = [&](const std::string& alias) -> const std::vector<Event>& {
        auto it = bindings.find(alias);
        if (it == bindings.end())
            throw ConfigError("alias '" + alias + "' is not bound");
        return it->second;
    };

    if (pred.kind == Predicate::Kind::IterationAdjacent) {
        const auto& list = events_for(pred.lhs.alias);
        const Operand& at_i = pred.lhs.index == Operand::Index::I ? pred.lhs : pred.rhs;
        const Operand& at_next = pred.lhs.index == Operand::Index::IPlusOne ? pred.lhs : pred.rhs;
        bool next_on_lhs = pred.lhs.index == Operand::Index::IPlusOne;
        for (std::size_t i = 0; i + 1 < list.size(); ++i) {
            Value vi = attribute_value(list[i], at_i.attr);
            Value vn = attribute_value(list[i + 1], at_next.attr);
            bool ok = next_on_lhs ? compare_values(vn, pred.op, vi) : compare_values(vi, pred.op, vn);
            if (!ok) return false;
        }
        return true;
    }

    // Unindexed references to a Kleene alias quantify over every bound event.
    auto each = [&](const Operand& op, auto&& fn) {
        if (op.kind == Operand::Kind::Attribute) {
            for (const Event& e : events_for(op.alias))
                if (!fn(resolve_scalar(op, e))) return false;
            return true;
        }
        return fn(resolve_scalar(op, Event{}));
    };

    return each(pred.lhs, [&](const Value& lv) {
        return each(pred.rhs, [&](const Value& rv) { return compare_values(lv, pred.op, rv); });
    });
}

bool eval_all_predicates(const PatternSpec& pattern, const Bindings& bindings) {
    for (const auto& pred : pattern.predicates)
        if (!eval_predicate(pred, bindings)) return false;
    return true;
}

}  // namespace limecep
