#include <cctype>
#include <charconv>
#include <cstdlib>

#include "momentforge/polynomial.hpp"

namespace momentforge {
namespace {

class Parser {
public:
    Parser(const std::string& text, const std::vector<std::string>& vars) : text_(text), vars_(vars) {}

    Polynomial run() {
        Polynomial p = expr();
        skip_ws();
        if (pos_ != text_.size()) fail("unexpected trailing input");
        return p;
    }

private:
    [[noreturn]] void fail(const std::string& msg) const { throw ParseError(msg, pos_); }

    void skip_ws() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    }

    bool eat(char c) {
        skip_ws();
        if (pos_ < text_.size() && text_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    char peek() {
        skip_ws();
        return pos_ < text_.size() ? text_[pos_] : '\0';
    }

    Polynomial expr() {
        bool neg = false;
        skip_ws();
        if (eat('+')) {
        } else if (eat('-')) {
            neg = true;
        }
        Polynomial acc = term();
        if (neg) acc = -acc;
        for (;;) {
            if (eat('+'))
                acc = acc + term();
            else if (eat('-'))
                acc = acc - term();
            else
                break;
        }
        return acc;
    }

    Polynomial term() {
        Polynomial acc = factor();
        while (eat('*')) acc = acc * factor();
        return acc;
    }

    int parse_uint() {
        skip_ws();
        size_t start = pos_;
        while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
        if (pos_ == start) fail("expected exponent");
        int v = 0;
        std::from_chars(text_.data() + start, text_.data() + pos_, v);
        return v;
    }

    Polynomial factor() {
        skip_ws();
        if (pos_ >= text_.size()) fail("expected factor");
        char c = text_[pos_];
        if (c == '(') {
            ++pos_;
            Polynomial inner = expr();
            if (!eat(')')) fail("expected ')'");
            if (eat('^')) return inner.pow(parse_uint());
            return inner;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            Polynomial v = variable();
            if (eat('^')) return v.pow(parse_uint());
            return v;
        }
        fail("expected factor");
    }

    Polynomial number() {
        size_t start = pos_;
        while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
        if (pos_ < text_.size() && text_[pos_] == '.') {
            ++pos_;
            while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
        }
        if (pos_ < text_.size() && (text_[pos_] == 'e' || text_[pos_] == 'E')) {
            size_t mark = pos_++;
            if (pos_ < text_.size() && (text_[pos_] == '+' || text_[pos_] == '-')) ++pos_;
            if (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
                while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
            } else {
                pos_ = mark;  // 'e' belonged to something else; not our exponent
            }
        }
        if (pos_ == start) fail("expected number");
        double v = std::strtod(text_.substr(start, pos_ - start).c_str(), nullptr);
        return Polynomial::constant(static_cast<int>(vars_.size()), v);
    }

    Polynomial variable() {
        size_t start = pos_;
        while (pos_ < text_.size() &&
               (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_'))
            ++pos_;
        std::string name = text_.substr(start, pos_ - start);
        for (size_t i = 0; i < vars_.size(); ++i)
            if (vars_[i] == name) return Polynomial::variable(static_cast<int>(vars_.size()), static_cast<int>(i));
        pos_ = start;
        fail("unknown variable '" + name + "'");
    }

    const std::string& text_;
    const std::vector<std::string>& vars_;
    size_t pos_ = 0;
};

}  // namespace

Polynomial parse_poly(const std::string& text, const std::vector<std::string>& vars) {
    return Parser(text, vars).run();
}

}  // namespace momentforge
