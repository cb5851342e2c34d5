#include "aasrdl/parser.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <set>
#include <unordered_set>

namespace aasrdl {

std::string ParseDiagnostic::to_string() const
{
    return code + " " + span.to_string() + " " + (severity == Severity::Warning ? "warning: " : "") + message;
}

namespace {

enum class Tok : std::uint8_t { Ident, Int, Float, Punct, End, Bad };

struct Token {
    Tok kind = Tok::End;
    std::string text;
    std::uint32_t line = 1, col = 1, end_line = 1, end_col = 1;
};

const std::unordered_set<std::string> kKeywords = {
    "model", "datadict", "var", "input", "const", "module", "in", "out", "task", "mode", "init", "guard",
    "procedure", "period", "transition", "priority", "to", "when", "do", "call", "if", "else", "true", "false",
    "sqrt", "abs", "min", "max", "bool", "int32", "float32", "float64"};

const std::unordered_set<std::string> kTemporal = {"X", "F", "G", "U"};

std::vector<Token> lex(std::string_view src)
{
    static const char* const kPuncts[] = {"==", "!=", "<=", ">=", "&&", "||", "->", "(", ")", "{", "}", ";", ":",
                                          ",", "=", "<", ">", "+", "-", "*", "/", "%", "!"};
    std::vector<Token> out;
    std::uint32_t line = 1, col = 1;
    std::size_t i = 0;
    auto advance = [&](std::size_t n) {
        for (std::size_t k = 0; k < n; ++k, ++i) {
            if (src[i] == '\n') {
                ++line;
                col = 1;
            } else {
                ++col;
            }
        }
    };
    while (i < src.size()) {
        char c = src[i];
        if (std::isspace(static_cast<unsigned char>(c))) {
            advance(1);
            continue;
        }
        if (c == '/' && i + 1 < src.size() && src[i + 1] == '/') {
            while (i < src.size() && src[i] != '\n') advance(1);
            continue;
        }
        Token t;
        t.line = line;
        t.col = col;
        std::size_t start = i;
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            std::size_t j = i + 1;
            while (j < src.size() &&
                   (std::isalnum(static_cast<unsigned char>(src[j])) || src[j] == '_' || src[j] == '.'))
                ++j;
            t.kind = Tok::Ident;
            advance(j - i);
        } else if (std::isdigit(static_cast<unsigned char>(c))) {
            std::size_t j = i;
            bool is_float = false;
            while (j < src.size() && std::isdigit(static_cast<unsigned char>(src[j]))) ++j;
            if (j < src.size() && src[j] == '.') {
                is_float = true;
                ++j;
                while (j < src.size() && std::isdigit(static_cast<unsigned char>(src[j]))) ++j;
            }
            if (j < src.size() && (src[j] == 'e' || src[j] == 'E')) {
                std::size_t k = j + 1;
                if (k < src.size() && (src[k] == '+' || src[k] == '-')) ++k;
                if (k < src.size() && std::isdigit(static_cast<unsigned char>(src[k]))) {
                    is_float = true;
                    while (k < src.size() && std::isdigit(static_cast<unsigned char>(src[k]))) ++k;
                    j = k;
                }
            }
            t.kind = is_float ? Tok::Float : Tok::Int;
            advance(j - i);
        } else {
            t.kind = Tok::Bad;
            for (const char* p : kPuncts) {
                std::string_view ps(p);
                if (src.substr(i, ps.size()) == ps) {
                    t.kind = Tok::Punct;
                    advance(ps.size());
                    break;
                }
            }
            if (t.kind == Tok::Bad) {
                // Consume one UTF-8 sequence so the diagnostic shows the whole character.
                std::size_t n = 1;
                while (i + n < src.size() && (static_cast<unsigned char>(src[i + n]) & 0xC0) == 0x80) ++n;
                advance(n);
            }
        }
        t.text = std::string(src.substr(start, i - start));
        t.end_line = line;
        t.end_col = col;
        out.push_back(std::move(t));
    }
    Token end;
    end.kind = Tok::End;
    end.line = end.end_line = line;
    end.col = end.end_col = col;
    out.push_back(end);
    return out;
}

struct SyntaxError {
    ParseDiagnostic diag;
    std::size_t pos;
};

constexpr int kMaxDepth = 200;

class Parser {
public:
    Parser(std::string_view text, std::string file, bool temporal)
        : toks_(lex(text)), file_(std::make_shared<const std::string>(std::move(file))), temporal_(temporal)
    {
    }

    std::vector<ParseDiagnostic>& diagnostics() { return diags_; }

    std::optional<Model> model();
    std::optional<LtlFormula> formula(const DataDict& dict);
    std::optional<ExprPtr> standalone_expr(const DataDict& dict);

private:
    // -- token helpers ------------------------------------------------------
    const Token& peek(std::size_t k = 0) const { return toks_[std::min(pos_ + k, toks_.size() - 1)]; }
    Token take()
    {
        Token t = peek();
        if (pos_ < toks_.size() - 1) ++pos_;
        return t;
    }
    bool is_punct(const Token& t, std::string_view p) const { return t.kind == Tok::Punct && t.text == p; }
    bool is_kw(const Token& t, std::string_view k) const { return t.kind == Tok::Ident && t.text == k; }
    bool reserved(const std::string& s) const { return kKeywords.count(s) || (temporal_ && kTemporal.count(s)); }

    SourceSpan span_of(const Token& t) const { return {file_, t.line, t.col, t.end_line, t.end_col}; }
    SourceSpan span_from(const Token& first) const
    {
        const Token& last = toks_[pos_ > 0 ? pos_ - 1 : 0];
        return {file_, first.line, first.col, last.end_line, last.end_col};
    }

    std::string describe(const Token& t) const
    {
        if (t.kind == Tok::End) return "end of input";
        return "'" + t.text + "'";
    }

    [[noreturn]] void fail(const Token& t, std::string msg, std::string code = "P001") const
    {
        if (t.kind == Tok::Bad && code == "P001") {
            msg = "unexpected character '" + t.text + "'";
            code = "P013";
        }
        throw SyntaxError{ParseDiagnostic{span_of(t), Severity::Error, std::move(msg), std::move(code)}, pos_};
    }

    void expect_punct(std::string_view p)
    {
        if (!is_punct(peek(), p)) fail(peek(), "expected '" + std::string(p) + "', found " + describe(peek()));
        take();
    }
    void expect_kw(std::string_view k)
    {
        if (!is_kw(peek(), k)) fail(peek(), "expected '" + std::string(k) + "', found " + describe(peek()));
        take();
    }
    Token expect_ident(std::string_view what)
    {
        const Token& t = peek();
        if (t.kind != Tok::Ident || reserved(t.text))
            fail(t, "expected " + std::string(what) + ", found " + describe(t));
        return take();
    }
    std::int64_t expect_int(std::string_view what)
    {
        const Token& t = peek();
        if (t.kind != Tok::Int) fail(t, "expected " + std::string(what) + ", found " + describe(t));
        auto v = parse_value(t.text, Type::Int32);
        if (!v) fail(t, "integer literal out of range: " + t.text, "P006");
        take();
        return v->as_int32();
    }

    void report(ParseDiagnostic d) { diags_.push_back(std::move(d)); }
    void report(const SourceSpan& s, std::string msg, std::string code)
    {
        diags_.push_back({s, Severity::Error, std::move(msg), std::move(code)});
    }

    // -- expressions --------------------------------------------------------
    ExprPtr expr() { return or_expr(); }
    ExprPtr or_expr();
    ExprPtr and_expr();
    ExprPtr equality();
    ExprPtr relational();
    ExprPtr additive();
    ExprPtr multiplicative();
    ExprPtr unary_expr();
    ExprPtr primary();
    ExprPtr resolve(const Token& t);

    struct DepthGuard {
        Parser& p;
        explicit DepthGuard(Parser& parser) : p(parser)
        {
            if (++p.depth_ > kMaxDepth) p.fail(p.peek(), "nesting too deep");
        }
        ~DepthGuard() { --p.depth_; }
    };

    // -- model structure ----------------------------------------------------
    Value literal_for(Type t);
    void datadict(DataDict& dd);
    ModuleDef module();
    Mode mode(bool& is_init);
    Block block();
    std::optional<Stmt> statement();
    Stmt if_statement();
    void skip_statement();
    void skip_to_item();
    std::vector<std::string> id_list();
    void semantic_checks(const Model& m, const std::vector<SourceSpan>& init_spans);

    // -- temporal -----------------------------------------------------------
    LtlFormula ltl_implies();
    LtlFormula ltl_or();
    LtlFormula ltl_and();
    LtlFormula ltl_until();
    LtlFormula ltl_unary();
    LtlFormula ltl_primary();

    std::vector<Token> toks_;
    std::size_t pos_ = 0;
    std::shared_ptr<const std::string> file_;
    bool temporal_ = false;
    const DataDict* dict_ = nullptr;
    int depth_ = 0;
    std::vector<ParseDiagnostic> diags_;
};

// ---------------------------------------------------------------------------
// Expressions

ExprPtr Parser::resolve(const Token& t)
{
    SourceSpan s = span_of(t);
    if (dict_) {
        if (auto slot = dict_->find_var(t.text)) return expr::var(t.text, *slot, dict_->vars[*slot].type, s);
        if (const auto* c = dict_->find_const(t.text)) return expr::constant(t.text, c->value, s);
    }
    return expr::var(t.text, -1, std::nullopt, s);
}

ExprPtr Parser::or_expr()
{
    Token first = peek();
    ExprPtr lhs = and_expr();
    while (is_punct(peek(), "||")) {
        take();
        lhs = expr::binary(BinaryOp::Or, lhs, and_expr(), span_from(first));
    }
    return lhs;
}

ExprPtr Parser::and_expr()
{
    Token first = peek();
    ExprPtr lhs = equality();
    while (is_punct(peek(), "&&")) {
        take();
        lhs = expr::binary(BinaryOp::And, lhs, equality(), span_from(first));
    }
    return lhs;
}

ExprPtr Parser::equality()
{
    Token first = peek();
    ExprPtr lhs = relational();
    while (is_punct(peek(), "==") || is_punct(peek(), "!=")) {
        BinaryOp op = take().text == "==" ? BinaryOp::Eq : BinaryOp::Ne;
        lhs = expr::binary(op, lhs, relational(), span_from(first));
    }
    return lhs;
}

ExprPtr Parser::relational()
{
    Token first = peek();
    ExprPtr lhs = additive();
    for (;;) {
        const Token& t = peek();
        BinaryOp op;
        if (is_punct(t, "<"))
            op = BinaryOp::Lt;
        else if (is_punct(t, "<="))
            op = BinaryOp::Le;
        else if (is_punct(t, ">"))
            op = BinaryOp::Gt;
        else if (is_punct(t, ">="))
            op = BinaryOp::Ge;
        else
            return lhs;
        take();
        lhs = expr::binary(op, lhs, additive(), span_from(first));
    }
}

ExprPtr Parser::additive()
{
    Token first = peek();
    ExprPtr lhs = multiplicative();
    while (is_punct(peek(), "+") || is_punct(peek(), "-")) {
        BinaryOp op = take().text == "+" ? BinaryOp::Add : BinaryOp::Sub;
        lhs = expr::binary(op, lhs, multiplicative(), span_from(first));
    }
    return lhs;
}

ExprPtr Parser::multiplicative()
{
    Token first = peek();
    ExprPtr lhs = unary_expr();
    for (;;) {
        BinaryOp op;
        if (is_punct(peek(), "*"))
            op = BinaryOp::Mul;
        else if (is_punct(peek(), "/"))
            op = BinaryOp::Div;
        else if (is_punct(peek(), "%"))
            op = BinaryOp::Mod;
        else
            return lhs;
        take();
        lhs = expr::binary(op, lhs, unary_expr(), span_from(first));
    }
}

ExprPtr Parser::unary_expr()
{
    DepthGuard guard(*this);
    Token first = peek();
    if (is_punct(first, "-")) {
        take();
        ExprPtr operand = unary_expr();
        return expr::unary(UnaryOp::Neg, operand, span_from(first));
    }
    if (is_punct(first, "!")) {
        take();
        ExprPtr operand = unary_expr();
        return expr::unary(UnaryOp::Not, operand, span_from(first));
    }
    return primary();
}

ExprPtr Parser::primary()
{
    DepthGuard guard(*this);
    const Token t = peek();
    switch (t.kind) {
    case Tok::Int: {
        auto v = parse_value(t.text, Type::Int32);
        if (!v) fail(t, "integer literal out of int32 range: " + t.text, "P006");
        take();
        return expr::literal(*v, span_of(t));
    }
    case Tok::Float: {
        auto v = parse_value(t.text, Type::Float64);
        if (!v) fail(t, "invalid floating literal: " + t.text, "P006");
        take();
        return expr::literal(*v, span_of(t));
    }
    case Tok::Ident: {
        if (t.text == "true" || t.text == "false") {
            take();
            return expr::boolean(t.text == "true", span_of(t));
        }
        if (t.text == "sqrt" || t.text == "abs") {
            take();
            expect_punct("(");
            ExprPtr operand = expr();
            expect_punct(")");
            return expr::unary(t.text == "sqrt" ? UnaryOp::Sqrt : UnaryOp::Abs, operand, span_from(t));
        }
        if (reserved(t.text)) fail(t, "expected expression, found keyword '" + t.text + "'");
        take();
        return resolve(t);
    }
    case Tok::Punct:
        if (t.text == "(") {
            take();
            ExprPtr inner = expr();
            expect_punct(")");
            return inner;
        }
        break;
    default: break;
    }
    fail(t, "expected expression, found " + describe(t));
}

// ---------------------------------------------------------------------------
// Model structure

Value Parser::literal_for(Type type)
{
    Token first = peek();
    bool neg = false;
    if (is_punct(first, "-")) {
        neg = true;
        take();
    }
    const Token t = peek();
    std::string text = (neg ? "-" : "") + t.text;
    if (type == Type::Bool) {
        if (!neg && (is_kw(t, "true") || is_kw(t, "false"))) {
            take();
            return Value::boolean(t.text == "true");
        }
        fail(t, "expected bool literal, found " + describe(t), t.kind == Tok::Int || t.kind == Tok::Float ? "P006" : "P001");
    }
    if (t.kind != Tok::Int && t.kind != Tok::Float)
        fail(t, "expected numeric literal, found " + describe(t));
    if (type == Type::Int32 && t.kind == Tok::Float)
        fail(t, "expected int32 literal, found " + text, "P006");
    auto v = parse_value(text, type);
    if (!v) fail(t, "literal " + text + " is not representable as " + std::string(type_name(type)), "P006");
    take();
    return *v;
}

void Parser::datadict(DataDict& dd)
{
    expect_kw("datadict");
    expect_punct("{");
    while (!is_punct(peek(), "}") && peek().kind != Tok::End) {
        try {
            Token first = peek();
            if (is_kw(first, "const")) {
                take();
                Token name = expect_ident("constant name");
                expect_punct(":");
                Token ty = peek();
                auto type = ty.kind == Tok::Ident ? type_from_name(ty.text) : std::nullopt;
                if (!type) fail(ty, "unknown type name " + describe(ty), "P002");
                take();
                expect_punct("=");
                Value v = literal_for(*type);
                expect_punct(";");
                dd.constants.push_back({name.text, v, span_from(first)});
            } else if (is_kw(first, "var") || is_kw(first, "input")) {
                take();
                VarDecl d;
                d.kind = first.text == "input" ? VarKind::Input : VarKind::Internal;
                d.name = expect_ident("variable name").text;
                expect_punct(":");
                Token ty = peek();
                auto type = ty.kind == Tok::Ident ? type_from_name(ty.text) : std::nullopt;
                if (!type) fail(ty, "unknown type name " + describe(ty), "P002");
                take();
                d.type = *type;
                if (is_kw(peek(), "init")) {
                    take();
                    d.init = literal_for(d.type);
                }
                if (is_kw(peek(), "min")) {
                    take();
                    d.min = literal_for(d.type);
                    expect_kw("max");
                    d.max = literal_for(d.type);
                }
                expect_punct(";");
                d.span = span_from(first);
                if (d.min && d.max) {
                    if (d.type == Type::Bool)
                        report(d.span, "bounds are not allowed on bool variable '" + d.name + "'", "P007");
                    else if (d.min->to_double() > d.max->to_double())
                        report(d.span, "min exceeds max for '" + d.name + "'", "P007");
                    else if (d.init && !d.in_bounds(*d.init))
                        report(d.span, "init value of '" + d.name + "' outside [min, max]", "P007");
                }
                dd.vars.push_back(std::move(d));
            } else {
                fail(first, "expected 'var', 'input' or 'const', found " + describe(first));
            }
        } catch (const SyntaxError& e) {
            report(e.diag);
            skip_statement();
        }
    }
    expect_punct("}");
}

std::vector<std::string> Parser::id_list()
{
    std::vector<std::string> ids;
    expect_punct("{");
    if (!is_punct(peek(), "}")) {
        ids.push_back(expect_ident("identifier").text);
        while (is_punct(peek(), ",")) {
            take();
            ids.push_back(expect_ident("identifier").text);
        }
    }
    expect_punct("}");
    return ids;
}

void Parser::skip_statement()
{
    int depth = 0;
    while (peek().kind != Tok::End) {
        const Token& t = peek();
        if (is_punct(t, "{")) {
            ++depth;
        } else if (is_punct(t, "}")) {
            if (depth == 0) return;
            --depth;
        } else if (is_punct(t, ";") && depth == 0) {
            take();
            return;
        }
        take();
    }
}

void Parser::skip_to_item()
{
    while (peek().kind != Tok::End && !is_kw(peek(), "module") && !is_kw(peek(), "mode")) take();
}

Block Parser::block()
{
    expect_punct("{");
    Block b;
    while (!is_punct(peek(), "}")) {
        if (peek().kind == Tok::End) fail(peek(), "expected '}', found end of input");
        if (auto s = statement()) b.push_back(std::move(*s));
    }
    take();
    return b;
}

Stmt Parser::if_statement()
{
    DepthGuard guard(*this);
    Token first = take(); // if
    expect_punct("(");
    ExprPtr cond = expr();
    expect_punct(")");
    If node{cond, block(), {}};
    if (is_kw(peek(), "else")) {
        take();
        if (is_kw(peek(), "if"))
            node.else_block.push_back(if_statement());
        else
            node.else_block = block();
    }
    return Stmt{std::move(node), span_from(first)};
}

std::optional<Stmt> Parser::statement()
{
    try {
        Token first = peek();
        if (is_kw(first, "if")) return if_statement();
        if (is_kw(first, "call")) {
            take();
            Token name = expect_ident("module name");
            expect_punct(";");
            return Stmt{Call{name.text}, span_from(first)};
        }
        Token target = expect_ident("statement");
        expect_punct("=");
        ExprPtr value = expr();
        expect_punct(";");
        int slot = -1;
        if (dict_)
            if (auto s = dict_->find_var(target.text)) slot = *s;
        return Stmt{Assign{target.text, slot, value}, span_from(first)};
    } catch (const SyntaxError& e) {
        report(e.diag);
        skip_statement();
        return std::nullopt;
    }
}

ModuleDef Parser::module()
{
    Token first = take(); // module
    ModuleDef m;
    m.name = expect_ident("module name").text;
    expect_punct("{");
    expect_kw("in");
    m.inputs = id_list();
    expect_kw("out");
    m.outputs = id_list();
    expect_kw("task");
    m.task = block();
    expect_punct("}");
    m.span = span_from(first);
    return m;
}

Mode Parser::mode(bool& is_init)
{
    Token first = take(); // mode
    Mode m;
    m.name = expect_ident("mode name").text;
    is_init = false;
    if (is_kw(peek(), "init")) {
        take();
        is_init = true;
    }
    expect_punct("{");
    expect_kw("guard");
    m.guard = expr();
    expect_punct(";");
    while (!is_punct(peek(), "}")) {
        Token item = peek();
        if (is_kw(item, "procedure")) {
            take();
            expect_kw("period");
            Token pt = peek();
            std::int64_t period = expect_int("period");
            if (period < 1) report(span_of(pt), "procedure period must be at least 1", "P012");
            Block body = block();
            m.procedures.push_back({period, std::move(body), span_from(item)});
        } else if (is_kw(item, "transition")) {
            take();
            expect_kw("priority");
            Token pt = peek();
            std::int64_t prio = expect_int("priority");
            if (prio < 1) report(span_of(pt), "transition priority must be at least 1", "P012");
            expect_kw("to");
            std::string target = expect_ident("target mode").text;
            expect_kw("when");
            ExprPtr cond = expr();
            Block action;
            if (is_kw(peek(), "do")) {
                take();
                action = block();
            }
            expect_punct(";");
            m.transitions.push_back({prio, std::move(target), cond, std::move(action), span_from(item)});
        } else {
            fail(item, "expected 'procedure', 'transition' or '}', found " + describe(item));
        }
    }
    take();
    m.span = span_from(first);
    return m;
}

std::optional<Model> Parser::model()
{
    Model m;
    std::vector<SourceSpan> init_spans;
    try {
        if (!is_kw(peek(), "model")) fail(peek(), "expected 'model'");
        take();
        m.name = expect_ident("model name").text;
        datadict(m.datadict);
        dict_ = &m.datadict;
    } catch (const SyntaxError& e) {
        report(e.diag);
        return std::nullopt;
    }
    while (peek().kind != Tok::End) {
        try {
            if (is_kw(peek(), "module")) {
                if (!m.modes.empty()) fail(peek(), "modules must precede modes");
                m.modules.push_back(module());
            } else if (is_kw(peek(), "mode")) {
                bool is_init = false;
                Mode md = mode(is_init);
                if (is_init) {
                    init_spans.push_back(md.span);
                    if (m.initial_mode.empty()) m.initial_mode = md.name;
                }
                m.modes.push_back(std::move(md));
            } else {
                fail(peek(), "expected 'module' or 'mode', found " + describe(peek()));
            }
        } catch (const SyntaxError& e) {
            report(e.diag);
            if (peek().kind != Tok::End) take();
            skip_to_item();
        }
    }
    if (m.modes.empty() && diags_.empty()) report(span_of(peek()), "expected 'mode'", "P001");
    semantic_checks(m, init_spans);
    bool has_error = std::any_of(diags_.begin(), diags_.end(), [](const auto& d) { return d.severity == Severity::Error; });
    if (has_error) return std::nullopt;
    return m;
}

void Parser::semantic_checks(const Model& m, const std::vector<SourceSpan>& init_spans)
{
    std::set<std::string> data_names;
    for (const auto& c : m.datadict.constants)
        if (!data_names.insert(c.name).second) report(c.span, "duplicate name '" + c.name + "'", "P003");
    for (const auto& v : m.datadict.vars)
        if (!data_names.insert(v.name).second) report(v.span, "duplicate name '" + v.name + "'", "P003");
    std::set<std::string> module_names;
    for (const auto& mod : m.modules)
        if (!module_names.insert(mod.name).second) report(mod.span, "duplicate module '" + mod.name + "'", "P003");
    std::set<std::string> mode_names;
    for (const auto& md : m.modes)
        if (!mode_names.insert(md.name).second) report(md.span, "duplicate mode '" + md.name + "'", "P003");

    if (!m.modes.empty()) {
        if (init_spans.empty())
            report(m.modes.front().span, "missing initial mode", "P005");
        else
            for (std::size_t i = 1; i < init_spans.size(); ++i)
                report(init_spans[i], "multiple initial modes", "P004");
    }

    auto check_calls = [&](const Block& b) {
        for_each_stmt(b, [&](const Stmt& s) {
            if (const auto* c = s.as<Call>())
                if (!module_names.count(c->module))
                    report(s.span, "call to undeclared module '" + c->module + "'", "P009");
        });
    };
    for (const auto& md : m.modes) {
        std::set<std::int64_t> prios;
        for (const auto& t : md.transitions) {
            if (!mode_names.count(t.target)) report(t.span, "unknown target mode '" + t.target + "'", "P008");
            if (!prios.insert(t.priority).second)
                report(t.span, "duplicate transition priority " + std::to_string(t.priority) + " in mode '" + md.name + "'",
                       "P011");
            check_calls(t.action);
        }
        for (const auto& p : md.procedures) check_calls(p.body);
    }
    for (const auto& mod : m.modules) check_calls(mod.task);

    // Module call graph must be acyclic.
    std::map<std::string, std::vector<std::string>> callees;
    for (const auto& mod : m.modules)
        for_each_stmt(mod.task, [&](const Stmt& s) {
            if (const auto* c = s.as<Call>()) callees[mod.name].push_back(c->module);
        });
    std::map<std::string, int> color;
    std::function<bool(const std::string&)> cyclic = [&](const std::string& n) {
        color[n] = 1;
        for (const auto& c : callees[n]) {
            if (color[c] == 1) return true;
            if (color[c] == 0 && cyclic(c)) return true;
        }
        color[n] = 2;
        return false;
    };
    for (const auto& mod : m.modules) {
        color.clear();
        if (cyclic(mod.name)) report(mod.span, "recursive call involving module '" + mod.name + "'", "P010");
    }
}

// ---------------------------------------------------------------------------
// Temporal formulas

LtlFormula Parser::ltl_implies()
{
    LtlFormula lhs = ltl_or();
    if (is_punct(peek(), "->")) {
        take();
        return ltl::implies(lhs, ltl_implies());
    }
    return lhs;
}

LtlFormula Parser::ltl_or()
{
    LtlFormula lhs = ltl_and();
    while (is_punct(peek(), "||")) {
        take();
        lhs = ltl::disjunction(lhs, ltl_and());
    }
    return lhs;
}

LtlFormula Parser::ltl_and()
{
    LtlFormula lhs = ltl_until();
    while (is_punct(peek(), "&&")) {
        take();
        lhs = ltl::conjunction(lhs, ltl_until());
    }
    return lhs;
}

LtlFormula Parser::ltl_until()
{
    LtlFormula lhs = ltl_unary();
    if (is_kw(peek(), "U")) {
        take();
        return ltl::until(lhs, ltl_until());
    }
    return lhs;
}

LtlFormula Parser::ltl_unary()
{
    DepthGuard guard(*this);
    const Token& t = peek();
    if (is_punct(t, "!")) {
        take();
        return ltl::negation(ltl_unary());
    }
    if (is_kw(t, "X")) {
        take();
        return ltl::next(ltl_unary());
    }
    if (is_kw(t, "F")) {
        take();
        return ltl::eventually(ltl_unary());
    }
    if (is_kw(t, "G")) {
        take();
        return ltl::always(ltl_unary());
    }
    return ltl_primary();
}

LtlFormula Parser::ltl_primary()
{
    DepthGuard guard(*this);
    const std::size_t start = pos_;
    const Token first = peek();
    // An atom is an expression without top-level && / ||; parenthesized
    // subterms that fail as expressions are retried as formulas.
    std::optional<SyntaxError> atom_error;
    try {
        ExprPtr e = equality();
        bool unknown = false;
        for_each_var(*e, [&](const VarRef& v, const SourceSpan& s) {
            if (v.slot < 0 && !unknown) {
                unknown = true;
                throw SyntaxError{{s, Severity::Error, "unknown variable '" + v.name + "' in atom", "P021"}, pos_};
            }
        });
        if (e->type != Type::Bool) {
            std::string actual = e->type ? std::string(type_name(*e->type)) : "ill-typed";
            throw SyntaxError{{e->span, Severity::Error, "atom is not boolean (found " + actual + ")", "P022"}, pos_};
        }
        return ltl::atom(e);
    } catch (const SyntaxError& e) {
        if (e.diag.code != "P001" && e.diag.code != "P013") throw;
        atom_error = e;
    }
    pos_ = start;
    if (!is_punct(first, "(")) throw *atom_error;
    try {
        take();
        LtlFormula inner = ltl_implies();
        expect_punct(")");
        return inner;
    } catch (const SyntaxError& e) {
        throw e.pos >= atom_error->pos ? e : *atom_error;
    }
}

std::optional<LtlFormula> Parser::formula(const DataDict& dict)
{
    dict_ = &dict;
    try {
        if (peek().kind == Tok::End) fail(peek(), "expected formula");
        LtlFormula f = ltl_implies();
        if (peek().kind != Tok::End) fail(peek(), "unexpected " + describe(peek()) + " after formula");
        return f;
    } catch (const SyntaxError& e) {
        report(e.diag);
        return std::nullopt;
    }
}

std::optional<ExprPtr> Parser::standalone_expr(const DataDict& dict)
{
    dict_ = &dict;
    try {
        ExprPtr e = expr();
        if (peek().kind != Tok::End) fail(peek(), "unexpected " + describe(peek()) + " after expression");
        return e;
    } catch (const SyntaxError& e) {
        report(e.diag);
        return std::nullopt;
    }
}

} // namespace

ParseResult<Model> parse_model(std::string_view text, std::string file)
{
    Parser p(text, std::move(file), false);
    ParseResult<Model> r;
    r.value = p.model();
    r.diagnostics = std::move(p.diagnostics());
    return r;
}

ParseResult<LtlFormula> parse_ltl(std::string_view text, const DataDict& dict, std::string file)
{
    Parser p(text, std::move(file), true);
    ParseResult<LtlFormula> r;
    r.value = p.formula(dict);
    r.diagnostics = std::move(p.diagnostics());
    return r;
}

ParseResult<ExprPtr> parse_expr(std::string_view text, const DataDict& dict, std::string file)
{
    Parser p(text, std::move(file), false);
    ParseResult<ExprPtr> r;
    r.value = p.standalone_expr(dict);
    r.diagnostics = std::move(p.diagnostics());
    return r;
}

} // namespace aasrdl
