#include "dg/dsl.hpp"

#include <algorithm>
#include <cctype>

namespace dg {
namespace dsl {

bool Document::has(const std::string& name) const {
    return zigzags.count(name) || graphs.count(name) || extendeds.count(name) ||
           normalizeds.count(name) || instances.count(name);
}

namespace {

struct Token {
    enum Kind { Ident, Number, Punct, End } kind = End;
    std::string text;
    int line = 1, col = 1;
};

class Lexer {
public:
    explicit Lexer(const std::string& text) : text_(text) { advance(); }

    const Token& peek() const { return tok_; }
    Token take() {
        Token t = tok_;
        advance();
        return t;
    }

private:
    void advance() {
        while (pos_ < text_.size()) {
            char c = text_[pos_];
            if (c == '#') {
                while (pos_ < text_.size() && text_[pos_] != '\n') ++pos_;
            } else if (c == '\n') {
                ++pos_;
                ++line_;
                col_ = 1;
            } else if (std::isspace(static_cast<unsigned char>(c))) {
                ++pos_;
                ++col_;
            } else {
                break;
            }
        }
        tok_ = Token{Token::End, "", line_, col_};
        if (pos_ >= text_.size()) return;
        char c = text_[pos_];
        // identifiers start with a letter so that the run shorthand's '_' in
        // (w)_k stays a separate token
        if (std::isalpha(static_cast<unsigned char>(c))) {
            std::size_t start = pos_;
            while (pos_ < text_.size() && (std::isalnum(static_cast<unsigned char>(text_[pos_])) ||
                                           text_[pos_] == '_'))
                take_char();
            tok_.kind = Token::Ident;
            tok_.text = text_.substr(start, pos_ - start);
        } else if (std::isdigit(static_cast<unsigned char>(c)) ||
                   (c == '-' && pos_ + 1 < text_.size() &&
                    std::isdigit(static_cast<unsigned char>(text_[pos_ + 1])) &&
                    prev_ != Token::Ident && prev_ != Token::Number)) {
            std::size_t start = pos_;
            if (c == '-') take_char();
            while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_])))
                take_char();
            if (pos_ < text_.size() && text_[pos_] == '/' && pos_ + 1 < text_.size() &&
                std::isdigit(static_cast<unsigned char>(text_[pos_ + 1]))) {
                take_char();
                while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_])))
                    take_char();
            }
            tok_.kind = Token::Number;
            tok_.text = text_.substr(start, pos_ - start);
        } else if (c == '[' && pos_ + 1 < text_.size() && text_[pos_ + 1] == '[') {
            take_char();
            take_char();
            tok_.kind = Token::Punct;
            tok_.text = "[[";
        } else if (c == ']' && pos_ + 1 < text_.size() && text_[pos_ + 1] == ']') {
            take_char();
            take_char();
            tok_.kind = Token::Punct;
            tok_.text = "]]";
        } else {
            take_char();
            tok_.kind = Token::Punct;
            tok_.text = std::string(1, c);
        }
        prev_ = tok_.kind;
    }

    void take_char() {
        ++pos_;
        ++col_;
    }

    const std::string& text_;
    std::size_t pos_ = 0;
    int line_ = 1, col_ = 1;
    Token tok_;
    Token::Kind prev_ = Token::End;
};

[[noreturn]] void syntax_error(const Token& t, const std::string& expected) {
    fail(ErrorCode::SyntaxError, "line " + std::to_string(t.line) + ", col " +
                                     std::to_string(t.col) + ": expected " + expected + ", got '" +
                                     (t.kind == Token::End ? "<eof>" : t.text) + "'");
}

class Parser {
public:
    explicit Parser(const std::string& text) : lex_(text) {}

    Document run() {
        Document doc;
        while (lex_.peek().kind != Token::End) {
            Token kw = expect_ident("item keyword");
            std::string name = expect_ident("item name").text;
            if (doc.has(name))
                fail(ErrorCode::DuplicateName, "duplicate item name '" + name + "'");
            if (kw.text == "zigzag") {
                expect_punct("=");
                doc.zigzags[name] = parse_zigzag();
                doc.order.emplace_back(ItemKind::Zigzag, name);
            } else if (kw.text == "graph") {
                parse_graph(doc, name);
                doc.order.emplace_back(ItemKind::Graph, name);
            } else if (kw.text == "extended") {
                parse_extended(doc, name);
                doc.order.emplace_back(ItemKind::Extended, name);
            } else if (kw.text == "normalized") {
                parse_normalized(doc, name);
                doc.order.emplace_back(ItemKind::Normalized, name);
            } else if (kw.text == "instance") {
                parse_instance(doc, name);
                doc.order.emplace_back(ItemKind::Instance, name);
            } else {
                syntax_error(kw, "one of zigzag/graph/extended/normalized/instance");
            }
        }
        return doc;
    }

private:
    Token expect_ident(const std::string& what) {
        if (lex_.peek().kind != Token::Ident) syntax_error(lex_.peek(), what);
        return lex_.take();
    }
    Token expect_number(const std::string& what) {
        if (lex_.peek().kind != Token::Number) syntax_error(lex_.peek(), what);
        return lex_.take();
    }
    void expect_punct(const std::string& p) {
        if (lex_.peek().kind != Token::Punct || lex_.peek().text != p)
            syntax_error(lex_.peek(), "'" + p + "'");
        lex_.take();
    }
    bool accept_punct(const std::string& p) {
        if (lex_.peek().kind == Token::Punct && lex_.peek().text == p) {
            lex_.take();
            return true;
        }
        return false;
    }
    int expect_int(const std::string& what) {
        Token t = expect_number(what);
        Rational r = parse_rational(t.text);
        if (r.den != 1) syntax_error(t, "an integer");
        return static_cast<int>(r.num);
    }

    Zigzag parse_zigzag() {
        expect_punct("[[");
        Zigzag z;
        if (!accept_punct("]]")) {
            for (;;) {
                if (accept_punct("(")) {
                    int w = expect_int("a weight");
                    expect_punct(")");
                    expect_punct("_");
                    int k = expect_int("a repeat count");
                    if (k < 1) fail(ErrorCode::SyntaxError, "repeat count must be positive");
                    z.weights.insert(z.weights.end(), static_cast<std::size_t>(k), w);
                } else {
                    z.weights.push_back(expect_int("a weight"));
                }
                if (accept_punct("]]")) break;
                expect_punct(",");
            }
        }
        if (z.weights.empty()) fail(ErrorCode::SyntaxError, "empty zigzag");
        return z;
    }

    Role parse_role(const Token& t) {
        if (t.text == "section") return Role::Section;
        if (t.text == "fiber0") return Role::FiberZero;
        if (t.text == "boundary") return Role::Boundary;
        if (t.text == "feather") return Role::Feather;
        syntax_error(t, "a role (section/fiber0/boundary/feather)");
    }

    void parse_graph(Document& doc, const std::string& name) {
        expect_punct("{");
        WeightedGraph g;
        auto& names = doc.vertex_names[name];
        while (lex_.peek().kind == Token::Ident && lex_.peek().text != "edges") {
            std::string vname = lex_.take().text;
            if (names.count(vname))
                fail(ErrorCode::DuplicateName, "duplicate vertex '" + vname + "'");
            int weight = 0, genus = 0;
            Role role = Role::Boundary;
            while (lex_.peek().kind == Token::Ident) {
                Token attr = lex_.take();
                expect_punct("=");
                if (attr.text == "w")
                    weight = expect_int("a weight");
                else if (attr.text == "genus")
                    genus = expect_int("a genus");
                else if (attr.text == "role")
                    role = parse_role(expect_ident("a role"));
                else
                    syntax_error(attr, "w/role/genus");
            }
            names[vname] = g.add_vertex(weight, role, genus, vname);
            expect_punct(";");
        }
        if (lex_.peek().kind == Token::Ident && lex_.peek().text == "edges") {
            lex_.take();
            expect_punct(":");
            for (;;) {
                Token a = expect_ident("a vertex name");
                expect_punct("-");
                Token b = expect_ident("a vertex name");
                g.add_edge(resolve(names, a), resolve(names, b));
                if (!accept_punct(",")) break;
            }
            accept_punct(";");
        }
        expect_punct("}");
        doc.graphs[name] = std::move(g);
    }

    VertexId resolve(const std::map<std::string, VertexId>& names, const Token& t) {
        auto it = names.find(t.text);
        if (it == names.end())
            fail(ErrorCode::UnknownReference, "unknown vertex '" + t.text + "' at line " +
                                                  std::to_string(t.line));
        return it->second;
    }

    void parse_extended(Document& doc, const std::string& name) {
        expect_punct("{");
        Token kw = expect_ident("boundary");
        if (kw.text != "boundary") syntax_error(kw, "boundary");
        expect_punct("=");
        Token gname = expect_ident("a graph name");
        auto git = doc.graphs.find(gname.text);
        if (git == doc.graphs.end())
            fail(ErrorCode::UnknownReference, "unknown graph '" + gname.text + "'");
        expect_punct(";");
        WeightedGraph g = git->second;
        auto names = doc.vertex_names[gname.text]; // copy; feathers extend it
        while (lex_.peek().kind == Token::Ident && lex_.peek().text == "fiber") {
            lex_.take();
            expect_punct("(");
            Token root = expect_ident("a vertex name");
            resolve(names, root); // must exist; fibers are rebuilt from the shape
            expect_punct(")");
            expect_punct("+");
            expect_punct("=");
            Token fkw = expect_ident("feather");
            if (fkw.text != "feather") syntax_error(fkw, "feather");
            Token fname = expect_ident("a feather name");
            if (names.count(fname.text))
                fail(ErrorCode::DuplicateName, "duplicate vertex '" + fname.text + "'");
            Token wkw = expect_ident("w");
            if (wkw.text != "w") syntax_error(wkw, "w");
            expect_punct("=");
            int w = expect_int("a weight");
            Token on = expect_ident("on");
            if (on.text != "on") syntax_error(on, "on");
            Token carrier = expect_ident("a vertex name");
            VertexId cid = resolve(names, carrier);
            names[fname.text] = g.add_vertex(w, Role::Feather, 0, fname.text);
            g.add_edge(cid, names[fname.text]);
            expect_punct(";");
        }
        expect_punct("}");
        doc.vertex_names[name] = std::move(names);
        doc.boundary_ref[name] = gname.text;
        doc.extendeds[name] = extended::assemble(g);
    }

    void parse_normalized(Document& doc, const std::string& name) {
        expect_punct("{");
        Token kw = expect_ident("boundary");
        if (kw.text != "boundary") syntax_error(kw, "boundary");
        expect_punct("=");
        Token gname = expect_ident("a graph name");
        auto git = doc.graphs.find(gname.text);
        if (git == doc.graphs.end())
            fail(ErrorCode::UnknownReference, "unknown graph '" + gname.text + "'");
        expect_punct(";");
        extended::NormalizedExtendedGraph d;
        d.boundary = git->second;
        const auto& names = doc.vertex_names[gname.text];
        for (const auto& v : d.boundary.vertices()) d.delta[v.id] = 0;
        if (lex_.peek().kind == Token::Ident && lex_.peek().text == "delta") {
            lex_.take();
            expect_punct(":");
            for (;;) {
                Token v = expect_ident("a vertex name");
                expect_punct("=");
                d.delta[resolve(names, v)] = expect_int("a feather count");
                if (!accept_punct(",")) break;
            }
            accept_punct(";");
        }
        expect_punct("}");
        doc.vertex_names[name] = names;
        doc.boundary_ref[name] = gname.text;
        doc.normalizeds[name] = std::move(d);
    }

    void parse_instance(Document& doc, const std::string& name) {
        expect_punct("{");
        InstanceDecl inst;
        while (lex_.peek().kind == Token::Ident && lex_.peek().text != "params") {
            Token key = lex_.take();
            expect_punct("=");
            if (key.text == "schedule_of") {
                Token target = expect_ident("a normalized item name");
                if (!doc.normalizeds.count(target.text))
                    fail(ErrorCode::UnknownReference,
                         "unknown normalized item '" + target.text + "'");
                inst.schedule_of = target.text;
            } else if (key.text == "genus") {
                inst.genus = expect_int("a genus");
            } else {
                syntax_error(key, "schedule_of/genus/params");
            }
            expect_punct(";");
        }
        if (lex_.peek().kind == Token::Ident && lex_.peek().text == "params") {
            lex_.take();
            expect_punct(":");
            for (;;) {
                Token slot = expect_ident("a slot name");
                expect_punct("=");
                inst.params[slot.text] = parse_rational(expect_number("a rational").text);
                if (!accept_punct(",")) break;
            }
            accept_punct(";");
        }
        expect_punct("}");
        if (inst.schedule_of.empty())
            fail(ErrorCode::UnknownReference, "instance '" + name + "' has no schedule_of");
        doc.instances[name] = std::move(inst);
    }

    Lexer lex_;
};

std::string zigzag_text(const Zigzag& z) {
    std::string s = "[[";
    for (std::size_t i = 0; i < z.weights.size();) {
        std::size_t j = i;
        while (j < z.weights.size() && z.weights[j] == z.weights[i]) ++j;
        if (i) s += ",";
        if (j - i >= 3)
            s += "(" + std::to_string(z.weights[i]) + ")_" + std::to_string(j - i);
        else
            for (std::size_t k = i; k < j; ++k)
                s += (k > i ? "," : "") + std::to_string(z.weights[i]);
        i = j;
    }
    return s + "]]";
}

std::string vertex_token(const WeightedGraph& g, VertexId v) {
    const auto& lbl = g.vertex(v);
    return lbl.name.empty() ? "v" + std::to_string(v) : lbl.name;
}

void print_graph_body(std::string& out, const WeightedGraph& g) {
    for (const auto& v : g.vertices()) {
        out += "  " + vertex_token(g, v.id) + " w=" + std::to_string(v.weight) +
               " role=" + role_name(v.role);
        if (v.genus > 0) out += " genus=" + std::to_string(v.genus);
        out += ";\n";
    }
    if (!g.edges().empty()) {
        out += "  edges: ";
        bool first = true;
        for (const auto& [a, b] : g.edges()) {
            if (!first) out += ", ";
            first = false;
            out += vertex_token(g, a) + "-" + vertex_token(g, b);
        }
        out += "\n";
    }
}

} // namespace

Document parse(const std::string& text) { return Parser(text).run(); }

std::string print(const Document& doc) {
    std::string out;
    for (const auto& [kind, name] : doc.order) {
        switch (kind) {
        case ItemKind::Zigzag:
            out += "zigzag " + name + " = " + zigzag_text(doc.zigzags.at(name)) + "\n";
            break;
        case ItemKind::Graph:
            out += "graph " + name + " {\n";
            print_graph_body(out, doc.graphs.at(name));
            out += "}\n";
            break;
        case ItemKind::Extended: {
            const auto& e = doc.extendeds.at(name);
            out += "extended " + name + " { boundary=" + doc.boundary_ref.at(name) + ";\n";
            // feathers in id order; each attaches to its unique earlier neighbor
            for (const auto& f : e.fibers) {
                for (VertexId m : f.members) {
                    const auto& lbl = e.graph.vertex(m);
                    if (lbl.role != Role::Feather) continue;
                    VertexId carrier = m;
                    for (VertexId nb : e.graph.neighbors(m))
                        if (nb < m) carrier = nb;
                    out += "  fiber(" + vertex_token(e.graph, f.distinguished) +
                           ") += feather " + vertex_token(e.graph, m) +
                           " w=" + std::to_string(lbl.weight) + " on " +
                           vertex_token(e.graph, carrier) + ";\n";
                }
            }
            out += "}\n";
            break;
        }
        case ItemKind::Normalized: {
            const auto& d = doc.normalizeds.at(name);
            out += "normalized " + name + " { boundary=" + doc.boundary_ref.at(name) +
                   ";\n  delta: ";
            bool first = true;
            for (const auto& [v, delta] : d.delta) {
                if (!first) out += ", ";
                first = false;
                out += vertex_token(d.boundary, v) + "=" + std::to_string(delta);
            }
            out += "\n}\n";
            break;
        }
        case ItemKind::Instance: {
            const auto& inst = doc.instances.at(name);
            out += "instance " + name + " { schedule_of=" + inst.schedule_of + "; genus=" +
                   std::to_string(inst.genus) + ";\n";
            if (!inst.params.empty()) {
                out += "  params: ";
                bool first = true;
                for (const auto& [slot, val] : inst.params) {
                    if (!first) out += ", ";
                    first = false;
                    out += slot + "=" + val.str();
                }
                out += "\n";
            }
            out += "}\n";
            break;
        }
        }
    }
    return out;
}

} // namespace dsl
} // namespace dg
