#include "ccsp/dsl.hpp"

#include <algorithm>
#include <cctype>
#include <functional>
#include <map>
#include <memory>
#include <set>
#include <variant>

namespace ccsp::dsl {

namespace {

// ---------------------------------------------------------------------------
// Lexer
// ---------------------------------------------------------------------------

enum class Tok {
    Ident, Int,
    KwSet, KwTx, KwSkip, KwThrow, KwYield, KwSkipp, KwThroww, KwYieldd,
    Semi, Percent, Interrupt, ChoiceOp, Par, SyncOpen, SyncClose,
    LParen, RParen, LBrace, RBrace, Comma, Dot, Question, Bang, Colon, At,
    Equals, End,
};

struct Token {
    Tok kind = Tok::End;
    std::string text;
    std::int64_t value = 0;
    int line = 1;
    int col = 1;
};

const char* tok_name(Tok t) {
    switch (t) {
    case Tok::Ident: return "identifier";
    case Tok::Int: return "integer";
    case Tok::KwSet: return "'set'";
    case Tok::KwTx: return "'tx'";
    case Tok::KwSkip: return "'SKIP'";
    case Tok::KwThrow: return "'THROW'";
    case Tok::KwYield: return "'YIELD'";
    case Tok::KwSkipp: return "'SKIPP'";
    case Tok::KwThroww: return "'THROWW'";
    case Tok::KwYieldd: return "'YIELDD'";
    case Tok::Semi: return "';'";
    case Tok::Percent: return "'%'";
    case Tok::Interrupt: return "'|>'";
    case Tok::ChoiceOp: return "'[]'";
    case Tok::Par: return "'||'";
    case Tok::SyncOpen: return "'|['";
    case Tok::SyncClose: return "']|'";
    case Tok::LParen: return "'('";
    case Tok::RParen: return "')'";
    case Tok::LBrace: return "'{'";
    case Tok::RBrace: return "'}'";
    case Tok::Comma: return "','";
    case Tok::Dot: return "'.'";
    case Tok::Question: return "'?'";
    case Tok::Bang: return "'!'";
    case Tok::Colon: return "':'";
    case Tok::At: return "'@'";
    case Tok::Equals: return "'='";
    case Tok::End: return "end of input";
    }
    return "?";
}

struct Lexer {
    const std::string& src;
    std::size_t pos = 0;
    int line = 1;
    int col = 1;
    std::vector<Diagnostic>& diags;
    bool failed = false;

    char peek() const { return pos < src.size() ? src[pos] : '\0'; }
    char peek2() const { return pos + 1 < src.size() ? src[pos + 1] : '\0'; }

    void advance() {
        if (pos >= src.size()) return;
        if (src[pos] == '\n') {
            ++line;
            col = 1;
        } else {
            ++col;
        }
        ++pos;
    }

    void skip_trivia() {
        for (;;) {
            char c = peek();
            if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
                advance();
            } else if (c == '-' && peek2() == '-') {
                while (peek() != '\n' && peek() != '\0') advance();
            } else {
                break;
            }
        }
    }

    Token error_token(const std::string& msg) {
        if (!failed)
            diags.push_back({Severity::Error, line, col, msg});
        failed = true;
        return Token{Tok::End, "", 0, line, col};
    }

    Token next() {
        skip_trivia();
        Token t;
        t.line = line;
        t.col = col;
        char c = peek();
        if (c == '\0') {
            t.kind = Tok::End;
            return t;
        }
        if (std::isalpha(static_cast<unsigned char>(c))) {
            std::string word;
            while (std::isalnum(static_cast<unsigned char>(peek())) || peek() == '_') {
                word += peek();
                advance();
            }
            t.text = word;
            if (word == "set") t.kind = Tok::KwSet;
            else if (word == "tx") t.kind = Tok::KwTx;
            else if (word == "SKIP") t.kind = Tok::KwSkip;
            else if (word == "THROW") t.kind = Tok::KwThrow;
            else if (word == "YIELD") t.kind = Tok::KwYield;
            else if (word == "SKIPP") t.kind = Tok::KwSkipp;
            else if (word == "THROWW") t.kind = Tok::KwThroww;
            else if (word == "YIELDD") t.kind = Tok::KwYieldd;
            else t.kind = Tok::Ident;
            return t;
        }
        if (std::isdigit(static_cast<unsigned char>(c))) {
            std::string digits;
            while (std::isdigit(static_cast<unsigned char>(peek()))) {
                digits += peek();
                advance();
            }
            t.kind = Tok::Int;
            t.text = digits;
            try {
                t.value = std::stoll(digits);
            } catch (const std::exception&) {
                return error_token("integer literal out of range: " + digits);
            }
            return t;
        }
        switch (c) {
        case ';': advance(); t.kind = Tok::Semi; return t;
        case '%': advance(); t.kind = Tok::Percent; return t;
        case '(': advance(); t.kind = Tok::LParen; return t;
        case ')': advance(); t.kind = Tok::RParen; return t;
        case '{': advance(); t.kind = Tok::LBrace; return t;
        case '}': advance(); t.kind = Tok::RBrace; return t;
        case ',': advance(); t.kind = Tok::Comma; return t;
        case '.': advance(); t.kind = Tok::Dot; return t;
        case '?': advance(); t.kind = Tok::Question; return t;
        case '!': advance(); t.kind = Tok::Bang; return t;
        case ':': advance(); t.kind = Tok::Colon; return t;
        case '@': advance(); t.kind = Tok::At; return t;
        case '=': advance(); t.kind = Tok::Equals; return t;
        case '[':
            if (peek2() == ']') {
                advance(); advance();
                t.kind = Tok::ChoiceOp;
                return t;
            }
            return error_token("stray '['; external choice is spelled '[]'");
        case ']':
            if (peek2() == '|') {
                advance(); advance();
                t.kind = Tok::SyncClose;
                return t;
            }
            return error_token("stray ']'");
        case '|':
            if (peek2() == '|') {
                advance(); advance();
                t.kind = Tok::Par;
                return t;
            }
            if (peek2() == '[') {
                advance(); advance();
                t.kind = Tok::SyncOpen;
                return t;
            }
            if (peek2() == '>') {
                advance(); advance();
                t.kind = Tok::Interrupt;
                return t;
            }
            return error_token("stray '|'; expected '||', '|[' or '|>'");
        default:
            return error_token(std::string("unexpected character '") + c + "'");
        }
    }
};

// ---------------------------------------------------------------------------
// Surface syntax
// ---------------------------------------------------------------------------

struct SExpr;
using SPtr = std::shared_ptr<SExpr>;

enum class SOp { Seq, Choice, Interleave, SyncPar, Interrupt, Pair };

struct SExpr {
    enum class Kind {
        Skip, Throw, Yield, Skipp, Throww, Yieldd,
        Bare,        // name
        CallForm,    // name(args)
        EventForm,   // chan.a1.a2 (also the c?Value sugar)
        OutputForm,  // chan!a
        InputForm,   // chan?x:S (open binder)
        ClosedInput, // (chan?x:S), binder closed by parentheses
        Binary,
        Tx,
        IndexedChoice, // [] x : S @ body
    };
    Kind kind;
    int line = 0, col = 0;
    std::string name;  // channel or call target
    std::string set_name;
    std::string var;
    std::vector<Atom> atoms;  // payload / call arguments
    SOp op = SOp::Seq;
    SyncSet sync;
    SPtr left, right, body;
};

SPtr snode(SExpr::Kind k, const Token& at) {
    auto e = std::make_shared<SExpr>();
    e->kind = k;
    e->line = at.line;
    e->col = at.col;
    return e;
}

struct SetDecl {
    std::string name;
    std::vector<Atom> atoms;
    int line = 0, col = 0;
};

struct DefDecl {
    std::string name;
    std::vector<std::string> params;
    SPtr body;
    int line = 0, col = 0;
};

struct SourceUnit {
    std::vector<SetDecl> sets;
    std::vector<DefDecl> defs;
};

// ---------------------------------------------------------------------------
// Parser (recursive descent; the first syntax error stops the parse)
// ---------------------------------------------------------------------------

struct Parser {
    Lexer lexer;
    Token tok;
    std::vector<Diagnostic>& diags;
    bool failed = false;

    Parser(const std::string& src, std::vector<Diagnostic>& d)
        : lexer{src, 0, 1, 1, d}, diags(d) {
        tok = lexer.next();
    }

    void bump() { tok = lexer.next(); }

    bool at(Tok k) const { return tok.kind == k; }

    void fail(const std::string& msg) {
        if (!failed && !lexer.failed)
            diags.push_back({Severity::Error, tok.line, tok.col, msg});
        failed = true;
    }

    bool expect(Tok k, const std::string& what) {
        if (bad()) return false;
        if (at(k)) {
            bump();
            return true;
        }
        fail("expected " + std::string(tok_name(k)) + " " + what + ", found " +
             tok_name(tok.kind));
        return false;
    }

    bool bad() const { return failed || lexer.failed; }

    std::optional<Atom> parse_atom() {
        if (at(Tok::Ident)) {
            Atom a = Atom::ident(tok.text);
            bump();
            return a;
        }
        if (at(Tok::Int)) {
            Atom a = Atom::integer(tok.value);
            bump();
            return a;
        }
        fail("expected an identifier or integer, found " +
             std::string(tok_name(tok.kind)));
        return std::nullopt;
    }

    SourceUnit parse_unit() {
        SourceUnit unit;
        while (!at(Tok::End) && !bad()) {
            if (at(Tok::KwSet)) {
                Token kw = tok;
                bump();
                SetDecl decl;
                decl.line = kw.line;
                decl.col = kw.col;
                if (!at(Tok::Ident)) {
                    fail("expected a set name after 'set'");
                    break;
                }
                decl.name = tok.text;
                bump();
                if (!expect(Tok::Equals, "in set declaration")) break;
                if (!expect(Tok::LBrace, "to open the set")) break;
                if (!at(Tok::RBrace)) {
                    for (;;) {
                        auto a = parse_atom();
                        if (!a) break;
                        decl.atoms.push_back(*a);
                        if (at(Tok::Comma)) {
                            bump();
                            continue;
                        }
                        break;
                    }
                }
                if (bad()) break;
                if (!expect(Tok::RBrace, "to close the set")) break;
                unit.sets.push_back(std::move(decl));
                continue;
            }
            if (at(Tok::Ident)) {
                DefDecl def;
                def.name = tok.text;
                def.line = tok.line;
                def.col = tok.col;
                bump();
                if (at(Tok::LParen)) {
                    bump();
                    for (;;) {
                        if (!at(Tok::Ident)) {
                            fail("expected a parameter name");
                            break;
                        }
                        def.params.push_back(tok.text);
                        bump();
                        if (at(Tok::Comma)) {
                            bump();
                            continue;
                        }
                        break;
                    }
                    if (bad()) break;
                    if (!expect(Tok::RParen, "to close the parameter list")) break;
                }
                if (!expect(Tok::Equals, "in definition")) break;
                def.body = parse_proc();
                if (bad()) break;
                unit.defs.push_back(std::move(def));
                continue;
            }
            fail("expected 'set' or a definition name, found " +
                 std::string(tok_name(tok.kind)));
        }
        return unit;
    }

    // proc := choice ( ('||' | '|[ chans ]|') choice )*
    SPtr parse_proc() {
        SPtr left = parse_choice();
        while (!bad() && (at(Tok::Par) || at(Tok::SyncOpen))) {
            Token op = tok;
            SPtr node = snode(SExpr::Kind::Binary, op);
            if (at(Tok::Par)) {
                bump();
                node->op = SOp::Interleave;
            } else {
                bump();
                node->op = SOp::SyncPar;
                for (;;) {
                    if (!at(Tok::Ident)) {
                        fail("expected a channel name in the synchronization set");
                        return left;
                    }
                    node->sync.channels.insert(tok.text);
                    bump();
                    if (at(Tok::Comma)) {
                        bump();
                        continue;
                    }
                    break;
                }
                if (!expect(Tok::SyncClose, "to close the synchronization set"))
                    return left;
            }
            node->left = left;
            node->right = parse_choice();
            left = node;
        }
        return left;
    }

    // choice := indexed-choice | interrupt ('[]' interrupt)*
    SPtr parse_choice() {
        if (at(Tok::ChoiceOp)) {
            // Prefix position: [] x : S @ body; the body extends to the next
            // closing delimiter.
            Token op = tok;
            bump();
            SPtr node = snode(SExpr::Kind::IndexedChoice, op);
            if (!at(Tok::Ident)) {
                fail("expected a bound variable after '[]'");
                return node;
            }
            node->var = tok.text;
            bump();
            if (!expect(Tok::Colon, "after the bound variable")) return node;
            if (!at(Tok::Ident)) {
                fail("expected a set name after ':'");
                return node;
            }
            node->set_name = tok.text;
            bump();
            if (!expect(Tok::At, "before the indexed-choice body")) return node;
            node->body = parse_proc();
            return node;
        }
        SPtr left = parse_interrupt();
        while (!bad() && at(Tok::ChoiceOp)) {
            Token op = tok;
            bump();
            SPtr node = snode(SExpr::Kind::Binary, op);
            node->op = SOp::Choice;
            node->left = left;
            node->right = parse_interrupt();
            left = node;
        }
        return left;
    }

    SPtr parse_interrupt() {
        SPtr left = parse_seq();
        while (!bad() && at(Tok::Interrupt)) {
            Token op = tok;
            bump();
            SPtr node = snode(SExpr::Kind::Binary, op);
            node->op = SOp::Interrupt;
            node->left = left;
            node->right = parse_seq();
            left = node;
        }
        return left;
    }

    // seq := pair (';' seq)?   (right associative, binder friendly)
    SPtr parse_seq() {
        SPtr left = parse_pair();
        if (!bad() && at(Tok::Semi)) {
            Token op = tok;
            bump();
            SPtr node = snode(SExpr::Kind::Binary, op);
            node->op = SOp::Seq;
            node->left = left;
            node->right = parse_seq();
            return node;
        }
        return left;
    }

    // pair := primary ('%' primary)?   (non-associative)
    SPtr parse_pair() {
        SPtr left = parse_primary();
        if (!bad() && at(Tok::Percent)) {
            Token op = tok;
            bump();
            SPtr node = snode(SExpr::Kind::Binary, op);
            node->op = SOp::Pair;
            node->left = left;
            node->right = parse_primary();
            if (at(Tok::Percent))
                fail("'%' is not associative; parenthesize nested compensation pairs");
            return node;
        }
        return left;
    }

    SPtr parse_primary() {
        switch (tok.kind) {
        case Tok::KwSkip: { SPtr n = snode(SExpr::Kind::Skip, tok); bump(); return n; }
        case Tok::KwThrow: { SPtr n = snode(SExpr::Kind::Throw, tok); bump(); return n; }
        case Tok::KwYield: { SPtr n = snode(SExpr::Kind::Yield, tok); bump(); return n; }
        case Tok::KwSkipp: { SPtr n = snode(SExpr::Kind::Skipp, tok); bump(); return n; }
        case Tok::KwThroww: { SPtr n = snode(SExpr::Kind::Throww, tok); bump(); return n; }
        case Tok::KwYieldd: { SPtr n = snode(SExpr::Kind::Yieldd, tok); bump(); return n; }
        case Tok::LParen: {
            bump();
            SPtr inner = parse_proc();
            expect(Tok::RParen, "to close '('");
            // Parentheses close a plain input binder; an input-bound
            // compensation pair keeps its binder open for the continuation.
            if (inner && inner->kind == SExpr::Kind::InputForm)
                inner->kind = SExpr::Kind::ClosedInput;
            return inner;
        }
        case Tok::KwTx: {
            Token kw = tok;
            bump();
            SPtr node = snode(SExpr::Kind::Tx, kw);
            if (!expect(Tok::LBrace, "after 'tx'")) return node;
            node->body = parse_proc();
            expect(Tok::RBrace, "to close 'tx{'");
            return node;
        }
        case Tok::Ident: {
            Token name = tok;
            bump();
            if (at(Tok::LParen)) {
                bump();
                SPtr node = snode(SExpr::Kind::CallForm, name);
                node->name = name.text;
                for (;;) {
                    auto a = parse_atom();
                    if (!a) break;
                    node->atoms.push_back(*a);
                    if (at(Tok::Comma)) {
                        bump();
                        continue;
                    }
                    break;
                }
                expect(Tok::RParen, "to close the argument list");
                return node;
            }
            if (at(Tok::Dot)) {
                SPtr node = snode(SExpr::Kind::EventForm, name);
                node->name = name.text;
                while (at(Tok::Dot)) {
                    bump();
                    auto a = parse_atom();
                    if (!a) break;
                    node->atoms.push_back(*a);
                }
                return node;
            }
            if (at(Tok::Bang)) {
                bump();
                SPtr node = snode(SExpr::Kind::OutputForm, name);
                node->name = name.text;
                auto a = parse_atom();
                if (a) node->atoms.push_back(*a);
                return node;
            }
            if (at(Tok::Question)) {
                bump();
                if (at(Tok::Int)) {
                    // c?5 is input of a literal value; sugar for the event c.5.
                    SPtr node = snode(SExpr::Kind::EventForm, name);
                    node->name = name.text;
                    node->atoms.push_back(Atom::integer(tok.value));
                    bump();
                    return node;
                }
                if (!at(Tok::Ident)) {
                    fail("expected a variable or value after '?'");
                    return snode(SExpr::Kind::Skip, name);
                }
                Token second = tok;
                bump();
                if (at(Tok::Colon)) {
                    bump();
                    SPtr node = snode(SExpr::Kind::InputForm, name);
                    node->name = name.text;
                    node->var = second.text;
                    if (!at(Tok::Ident)) {
                        fail("expected a set name after ':'");
                        return node;
                    }
                    node->set_name = tok.text;
                    bump();
                    return node;
                }
                // c?Name without a set annotation: sugar for the event c.Name.
                SPtr node = snode(SExpr::Kind::EventForm, name);
                node->name = name.text;
                node->atoms.push_back(Atom::ident(second.text));
                return node;
            }
            SPtr node = snode(SExpr::Kind::Bare, name);
            node->name = name.text;
            return node;
        }
        default:
            fail("expected a process, found " + std::string(tok_name(tok.kind)));
            return snode(SExpr::Kind::Skip, tok);
        }
    }
};

// ---------------------------------------------------------------------------
// Elaboration: sort inference, binder scoping, model checks
// ---------------------------------------------------------------------------

struct DefInfo {
    bool compensable = false;
    std::size_t arity = 0;
};

using Either = std::variant<StandardPtr, CompensablePtr>;

struct Elaborator {
    const std::map<std::string, std::vector<Atom>>& sets;
    const std::map<std::string, DefInfo>& def_info;
    const std::set<std::string>& known_defs;
    std::vector<Diagnostic>& diags;
    std::set<std::string> bound;

    void error(const SExpr& e, std::string msg) {
        diags.push_back({Severity::Error, e.line, e.col, std::move(msg)});
    }

    Arg mark(const Atom& a) {
        if (a.is_ident() && bound.count(a.name())) return VarRef{a.name()};
        return a;
    }

    std::vector<Arg> mark_all(const std::vector<Atom>& atoms) {
        std::vector<Arg> args;
        args.reserve(atoms.size());
        for (const Atom& a : atoms) args.push_back(mark(a));
        return args;
    }

    void check_set(const SExpr& e, const std::string& name) {
        auto it = sets.find(name);
        if (it == sets.end())
            error(e, "unknown set " + name);
        else if (it->second.empty())
            error(e, "set " + name + " is empty");
    }

    static StandardPtr recovery() { return mk::skip(); }

    CompensablePtr lift(Either v) {
        if (auto* s = std::get_if<StandardPtr>(&v)) return mk::pair(*s, mk::skip());
        return std::get<CompensablePtr>(v);
    }

    StandardPtr require_standard(const SExpr& at, Either v, const char* what) {
        if (auto* s = std::get_if<StandardPtr>(&v)) return *s;
        error(at, std::string(what) + " must be a standard process");
        return recovery();
    }

    Either elaborate(const SPtr& e) {
        if (!e) return recovery();
        switch (e->kind) {
        case SExpr::Kind::Skip: return mk::skip();
        case SExpr::Kind::Throw: return mk::thrw();
        case SExpr::Kind::Yield: return mk::yield();
        case SExpr::Kind::Skipp: return mk::skipp();
        case SExpr::Kind::Throww: return mk::throww();
        case SExpr::Kind::Yieldd: return mk::yieldd();
        case SExpr::Kind::EventForm:
            return mk::ev(e->name, mark_all(e->atoms));
        case SExpr::Kind::OutputForm:
            return mk::output(e->name, mark(e->atoms.at(0)));
        case SExpr::Kind::Bare:
            if (known_defs.count(e->name)) return make_call(*e, {});
            return mk::ev(e->name, {});
        case SExpr::Kind::CallForm:
            if (!known_defs.count(e->name)) {
                error(*e, "undefined name " + e->name);
                return recovery();
            }
            return make_call(*e, mark_all(e->atoms));
        case SExpr::Kind::InputForm:
        case SExpr::Kind::ClosedInput:
            return elaborate_input(e, nullptr);
        case SExpr::Kind::Tx:
            return mk::block(lift(elaborate(e->body)));
        case SExpr::Kind::IndexedChoice: {
            check_set(*e, e->set_name);
            const bool was_bound = bound.count(e->var) != 0;
            bound.insert(e->var);
            Either body = elaborate(e->body);
            if (!was_bound) bound.erase(e->var);
            if (auto* s = std::get_if<StandardPtr>(&body))
                return mk::ichoice(e->var, e->set_name, *s);
            error(*e, "indexed choice over a compensable process is not supported; "
                      "use an input-bound compensation pair instead");
            return recovery();
        }
        case SExpr::Kind::Binary:
            return elaborate_binary(e);
        }
        return recovery();
    }

    Either make_call(const SExpr& e, std::vector<Arg> args) {
        const DefInfo& info = def_info.at(e.name);
        if (info.arity != args.size()) {
            error(e, "arity mismatch calling " + e.name + ": expected " +
                         std::to_string(info.arity) + " argument(s), got " +
                         std::to_string(args.size()));
        }
        if (info.compensable) return mk::ccall(e.name, std::move(args));
        return mk::call(e.name, std::move(args));
    }

    // A plain input prefix; `continuation` is the expression to its right in
    // a sequence, or null when the input stands alone.
    Either elaborate_input(const SPtr& e, const SPtr& continuation) {
        check_set(*e, e->set_name);
        if (!continuation)
            return mk::input(e->name, e->set_name, e->var, mk::skip());
        const bool was_bound = bound.count(e->var) != 0;
        bound.insert(e->var);
        Either rest = elaborate(continuation);
        if (!was_bound) bound.erase(e->var);
        if (auto* s = std::get_if<StandardPtr>(&rest))
            return mk::input(e->name, e->set_name, e->var, *s);
        // Compensable continuation: the input event carries an empty
        // compensation.
        return mk::cinput(e->name, e->set_name, e->var, mk::skip(),
                          std::get<CompensablePtr>(rest));
    }

    // (c?x:S % comp) with an optional ';' continuation; the binder scopes
    // over both.
    Either elaborate_input_pair(const SPtr& pair, const SPtr& continuation) {
        const SPtr& input = pair->left;
        check_set(*input, input->set_name);
        const bool was_bound = bound.count(input->var) != 0;
        bound.insert(input->var);
        StandardPtr comp =
            require_standard(*pair, elaborate(pair->right), "a compensation");
        CompensablePtr cont = continuation ? lift(elaborate(continuation)) : mk::skipp();
        if (!was_bound) bound.erase(input->var);
        return mk::cinput(input->name, input->set_name, input->var, comp, cont);
    }

    Either elaborate_binary(const SPtr& e) {
        switch (e->op) {
        case SOp::Pair: {
            if (e->left && e->left->kind == SExpr::Kind::InputForm)
                return elaborate_input_pair(e, nullptr);
            StandardPtr f =
                require_standard(*e, elaborate(e->left), "a compensation pair operand");
            StandardPtr c =
                require_standard(*e, elaborate(e->right), "a compensation pair operand");
            return mk::pair(std::move(f), std::move(c));
        }
        case SOp::Seq: {
            if (e->left && e->left->kind == SExpr::Kind::InputForm)
                return elaborate_input(e->left, e->right);
            if (e->left && e->left->kind == SExpr::Kind::Binary &&
                e->left->op == SOp::Pair && e->left->left &&
                e->left->left->kind == SExpr::Kind::InputForm)
                return elaborate_input_pair(e->left, e->right);
            Either l = elaborate(e->left);
            Either r = elaborate(e->right);
            if (std::holds_alternative<StandardPtr>(l) &&
                std::holds_alternative<StandardPtr>(r))
                return mk::seq(std::get<StandardPtr>(l), std::get<StandardPtr>(r));
            return mk::cseq(lift(std::move(l)), lift(std::move(r)));
        }
        case SOp::Choice: {
            Either l = elaborate(e->left);
            Either r = elaborate(e->right);
            if (std::holds_alternative<StandardPtr>(l) &&
                std::holds_alternative<StandardPtr>(r))
                return mk::choice(std::get<StandardPtr>(l), std::get<StandardPtr>(r));
            return mk::cchoice(lift(std::move(l)), lift(std::move(r)));
        }
        case SOp::Interleave: {
            Either l = elaborate(e->left);
            Either r = elaborate(e->right);
            if (std::holds_alternative<StandardPtr>(l) &&
                std::holds_alternative<StandardPtr>(r))
                return mk::par(std::get<StandardPtr>(l), SyncSet{},
                               std::get<StandardPtr>(r));
            return mk::cpar(lift(std::move(l)), lift(std::move(r)));
        }
        case SOp::SyncPar: {
            Either l = elaborate(e->left);
            Either r = elaborate(e->right);
            if (std::holds_alternative<StandardPtr>(l) &&
                std::holds_alternative<StandardPtr>(r))
                return mk::par(std::get<StandardPtr>(l), e->sync,
                               std::get<StandardPtr>(r));
            error(*e, "synchronized parallel composition requires standard operands; "
                      "compensable processes compose with '||'");
            return recovery();
        }
        case SOp::Interrupt: {
            StandardPtr body =
                require_standard(*e, elaborate(e->left), "an interrupt handler operand");
            StandardPtr handler =
                require_standard(*e, elaborate(e->right), "an interrupt handler operand");
            return mk::interrupt(std::move(body), std::move(handler));
        }
        }
        return recovery();
    }
};

// Names referenced by a surface expression that resolve to definitions.
void collect_call_names(const SPtr& e, const std::set<std::string>& known,
                        std::set<std::string>& out) {
    if (!e) return;
    if ((e->kind == SExpr::Kind::Bare || e->kind == SExpr::Kind::CallForm) &&
        known.count(e->name))
        out.insert(e->name);
    collect_call_names(e->left, known, out);
    collect_call_names(e->right, known, out);
    collect_call_names(e->body, known, out);
}

} // namespace

ParseResult parse_model(const std::string& text) {
    ParseResult result;
    Parser parser(text, result.diagnostics);
    SourceUnit unit = parser.parse_unit();
    if (has_errors(result.diagnostics)) return result;

    Model model;
    std::set<std::string> known_defs;

    for (const SetDecl& s : unit.sets) {
        if (model.value_sets.count(s.name)) {
            result.diagnostics.push_back(
                {Severity::Error, s.line, s.col, "duplicate set " + s.name});
            continue;
        }
        std::vector<Atom> atoms = s.atoms;
        std::sort(atoms.begin(), atoms.end());
        atoms.erase(std::unique(atoms.begin(), atoms.end(),
                                [](const Atom& a, const Atom& b) { return a == b; }),
                    atoms.end());
        model.value_sets[s.name] = std::move(atoms);
    }

    std::map<std::string, const DefDecl*> decl_by_name;
    for (const DefDecl& d : unit.defs) {
        if (decl_by_name.count(d.name)) {
            result.diagnostics.push_back(
                {Severity::Error, d.line, d.col, "duplicate definition " + d.name});
            continue;
        }
        decl_by_name[d.name] = &d;
        known_defs.insert(d.name);
    }
    if (has_errors(result.diagnostics)) return result;

    // A definition body that is a single bare name must alias a process.
    for (const auto& [name, decl] : decl_by_name) {
        if (decl->body && decl->body->kind == SExpr::Kind::Bare &&
            !known_defs.count(decl->body->name)) {
            result.diagnostics.push_back({Severity::Error, decl->body->line,
                                          decl->body->col,
                                          "undefined name " + decl->body->name});
        }
    }
    if (has_errors(result.diagnostics)) return result;

    // Topological order over the call graph; cycles are rejected at load.
    std::map<std::string, std::set<std::string>> calls;
    for (const auto& [name, decl] : decl_by_name)
        collect_call_names(decl->body, known_defs, calls[name]);

    std::vector<std::string> order;
    std::map<std::string, int> colour;
    bool cyclic = false;
    std::function<void(const std::string&, std::vector<std::string>&)> visit =
        [&](const std::string& n, std::vector<std::string>& stack) {
            if (cyclic) return;
            colour[n] = 1;
            stack.push_back(n);
            for (const std::string& m : calls[n]) {
                if (colour[m] == 1) {
                    std::string cycle = m;
                    for (auto it = stack.rbegin(); it != stack.rend(); ++it) {
                        cycle = *it + " -> " + cycle;
                        if (*it == m) break;
                    }
                    const DefDecl* decl = decl_by_name[n];
                    result.diagnostics.push_back({Severity::Error, decl->line, decl->col,
                                                  "cyclic call graph: " + cycle});
                    cyclic = true;
                    return;
                }
                if (colour[m] == 0) visit(m, stack);
                if (cyclic) return;
            }
            stack.pop_back();
            colour[n] = 2;
            order.push_back(n);
        };
    for (const auto& [name, _] : decl_by_name) {
        if (colour[name] == 0) {
            std::vector<std::string> stack;
            visit(name, stack);
        }
        if (cyclic) break;
    }
    if (has_errors(result.diagnostics)) return result;

    // Elaborate callees before callers so call sorts and arities are known.
    std::map<std::string, DefInfo> def_info;
    for (const std::string& name : order) {
        const DefDecl& decl = *decl_by_name[name];
        Elaborator elab{model.value_sets, def_info, known_defs, result.diagnostics, {}};
        for (const std::string& p : decl.params) elab.bound.insert(p);
        Either body = elab.elaborate(decl.body);
        DefInfo info;
        info.arity = decl.params.size();
        if (auto* s = std::get_if<StandardPtr>(&body)) {
            info.compensable = false;
            model.standard_defs[name] = StandardDef{decl.params, *s};
        } else {
            info.compensable = true;
            model.compensable_defs[name] =
                CompensableDef{decl.params, std::get<CompensablePtr>(body)};
        }
        def_info[name] = info;
    }
    if (has_errors(result.diagnostics)) return result;

    result.model = std::move(model);
    return result;
}

} // namespace ccsp::dsl
