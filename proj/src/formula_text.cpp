#include "regbis/formula_text.hpp"

#include "regbis/errors.hpp"

namespace regbis::fmt {

namespace {

struct SExpr {
    bool is_atom = false;
    std::string atom;
    std::vector<SExpr> kids;
};

struct Parser {
    const std::string& text;
    size_t pos = 0;

    void skip_ws() {
        while (pos < text.size()) {
            if (isspace(static_cast<unsigned char>(text[pos]))) {
                ++pos;
            } else if (text[pos] == ';') {
                while (pos < text.size() && text[pos] != '\n') ++pos;
            } else {
                break;
            }
        }
    }
    [[noreturn]] void fail(const std::string& what) {
        throw invalid_input_error("formula syntax at offset " + std::to_string(pos) + ": " + what);
    }
    SExpr parse() {
        skip_ws();
        if (pos >= text.size()) fail("unexpected end of input");
        if (text[pos] == '(') {
            ++pos;
            SExpr e;
            for (;;) {
                skip_ws();
                if (pos >= text.size()) fail("missing ')'");
                if (text[pos] == ')') {
                    ++pos;
                    return e;
                }
                e.kids.push_back(parse());
            }
        }
        if (text[pos] == ')') fail("unexpected ')'");
        SExpr e;
        e.is_atom = true;
        while (pos < text.size() && !isspace(static_cast<unsigned char>(text[pos])) &&
               text[pos] != '(' && text[pos] != ')')
            e.atom += text[pos++];
        return e;
    }
};

fo::FormulaPtr build(const SExpr& e) {
    if (e.is_atom) throw invalid_input_error("bare symbol where a formula was expected: " + e.atom);
    if (e.kids.empty()) throw invalid_input_error("empty formula ()");
    if (!e.kids[0].is_atom) throw invalid_input_error("formula head must be a symbol");
    const std::string& head = e.kids[0].atom;
    auto args_from = [&](size_t start) {
        std::vector<fo::FormulaPtr> out;
        for (size_t i = start; i < e.kids.size(); ++i) out.push_back(build(e.kids[i]));
        return out;
    };
    if (head == "and") return fo::land(args_from(1));
    if (head == "or") return fo::lor(args_from(1));
    if (head == "not") {
        if (e.kids.size() != 2) throw invalid_input_error("not takes one argument");
        return fo::lnot(build(e.kids[1]));
    }
    if (head == "implies") {
        if (e.kids.size() != 3) throw invalid_input_error("implies takes two arguments");
        return fo::implies(build(e.kids[1]), build(e.kids[2]));
    }
    if (head == "iff") {
        if (e.kids.size() != 3) throw invalid_input_error("iff takes two arguments");
        return fo::iff(build(e.kids[1]), build(e.kids[2]));
    }
    if (head == "forall" || head == "exists") {
        if (e.kids.size() != 3 || e.kids[1].is_atom || e.kids[1].kids.size() != 2 ||
            !e.kids[1].kids[0].is_atom || !e.kids[1].kids[1].is_atom)
            throw invalid_input_error(head + " takes ((var sort) body)");
        const std::string& var = e.kids[1].kids[0].atom;
        const std::string& sort = e.kids[1].kids[1].atom;
        auto body = build(e.kids[2]);
        return head == "forall" ? fo::forall(var, sort, body) : fo::exists(var, sort, body);
    }
    // Atom: relation applied to variables.
    std::vector<std::string> vars;
    for (size_t i = 1; i < e.kids.size(); ++i) {
        if (!e.kids[i].is_atom) throw invalid_input_error("atom arguments must be variables");
        vars.push_back(e.kids[i].atom);
    }
    return fo::atom(head, vars);
}

}  // namespace

fo::FormulaPtr parse_formula(const std::string& text) {
    Parser p{text};
    SExpr e = p.parse();
    p.skip_ws();
    if (p.pos != text.size()) p.fail("trailing input after the formula");
    return build(e);
}

}  // namespace regbis::fmt
