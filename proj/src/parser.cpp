#include "dioc/parser.hpp"

#include <cctype>
#include <sstream>
#include <stdexcept>

namespace dioc {

std::string Diagnostic::display() const {
  std::ostringstream os;
  os << (severity == Severity::Error ? "error" : "warning") << "[" << code
     << "] " << span.line << ":" << span.column << ": " << message;
  return os.str();
}

namespace {

enum class Tok {
  Id,
  Int,
  Str,
  KwIf,
  KwElse,
  KwWhile,
  KwScope,
  KwTrue,
  KwFalse,
  KwNull,
  KwAnd,
  KwOr,
  KwNot,
  At,
  Assign,  // =
  Semi,
  Colon,
  LParen,
  RParen,
  LBrace,
  RBrace,
  Bar,
  Arrow,
  Comma,
  Eq,
  Ne,
  Le,
  Ge,
  Lt,
  Gt,
  Plus,
  Minus,
  Star,
  Slash,
  Bang,
  One,
  Zero,
  End
};

struct Token {
  Tok kind;
  std::string text;
  std::int64_t ival = 0;
  SrcSpan span;
};

struct ParseError {
  SrcSpan span;
  std::string message;
};

class Lexer {
 public:
  explicit Lexer(const std::string& s) : src_(s) {}

  std::vector<Token> run() {
    std::vector<Token> out;
    for (;;) {
      skip_ws();
      Token t = next();
      out.push_back(t);
      if (t.kind == Tok::End) break;
    }
    return out;
  }

 private:
  const std::string& src_;
  size_t pos_ = 0;
  int line_ = 1, col_ = 1;

  char peek(int k = 0) const {
    return pos_ + k < src_.size() ? src_[pos_ + k] : '\0';
  }
  char advance() {
    char c = src_[pos_++];
    if (c == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    return c;
  }
  void skip_ws() {
    for (;;) {
      char c = peek();
      if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
        advance();
      } else if (c == '/' && peek(1) == '/') {
        while (peek() && peek() != '\n') advance();
      } else {
        return;
      }
    }
  }

  Token make(Tok k, SrcSpan sp, std::string text = "") {
    sp.length = static_cast<int>(text.size());
    return Token{k, std::move(text), 0, sp};
  }

  Token next() {
    SrcSpan sp{line_, col_, 1};
    char c = peek();
    if (!c) return make(Tok::End, sp);
    if (std::isdigit(static_cast<unsigned char>(c))) {
      std::string num;
      while (std::isdigit(static_cast<unsigned char>(peek()))) num += advance();
      Token t = make(Tok::Int, sp, num);
      t.ival = std::stoll(num);
      return t;
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::string id;
      while (is_ident_char(peek())) id += advance();
      if (id == "if") return make(Tok::KwIf, sp, id);
      if (id == "else") return make(Tok::KwElse, sp, id);
      if (id == "while") return make(Tok::KwWhile, sp, id);
      if (id == "scope") return make(Tok::KwScope, sp, id);
      if (id == "true") return make(Tok::KwTrue, sp, id);
      if (id == "false") return make(Tok::KwFalse, sp, id);
      if (id == "null") return make(Tok::KwNull, sp, id);
      if (id == "and") return make(Tok::KwAnd, sp, id);
      if (id == "or") return make(Tok::KwOr, sp, id);
      if (id == "not") return make(Tok::KwNot, sp, id);
      return make(Tok::Id, sp, id);
    }
    if (c == '"') {
      advance();
      std::string s;
      while (peek() && peek() != '"') {
        char ch = advance();
        if (ch == '\\' && peek()) ch = advance();
        s += ch;
      }
      if (!peek()) throw ParseError{sp, "unterminated string literal"};
      advance();
      Token t = make(Tok::Str, sp, s);
      t.span.length = static_cast<int>(s.size()) + 2;
      return t;
    }
    advance();
    switch (c) {
      case '@':
        return make(Tok::At, sp, "@");
      case ';':
        return make(Tok::Semi, sp, ";");
      case ':':
        return make(Tok::Colon, sp, ":");
      case '(':
        return make(Tok::LParen, sp, "(");
      case ')':
        return make(Tok::RParen, sp, ")");
      case '{':
        return make(Tok::LBrace, sp, "{");
      case '}':
        return make(Tok::RBrace, sp, "}");
      case '|':
        return make(Tok::Bar, sp, "|");
      case ',':
        return make(Tok::Comma, sp, ",");
      case '+':
        return make(Tok::Plus, sp, "+");
      case '*':
        return make(Tok::Star, sp, "*");
      case '/':
        return make(Tok::Slash, sp, "/");
      case '-':
        if (peek() == '>') {
          advance();
          return make(Tok::Arrow, sp, "->");
        }
        return make(Tok::Minus, sp, "-");
      case '=':
        if (peek() == '=') {
          advance();
          return make(Tok::Eq, sp, "==");
        }
        return make(Tok::Assign, sp, "=");
      case '!':
        if (peek() == '=') {
          advance();
          return make(Tok::Ne, sp, "!=");
        }
        return make(Tok::Bang, sp, "!");
      case '<':
        if (peek() == '=') {
          advance();
          return make(Tok::Le, sp, "<=");
        }
        return make(Tok::Lt, sp, "<");
      case '>':
        if (peek() == '=') {
          advance();
          return make(Tok::Ge, sp, ">=");
        }
        return make(Tok::Gt, sp, ">");
      default:
        throw ParseError{sp, std::string("unexpected character '") + c + "'"};
    }
  }

  static bool is_ident_char(char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
  }
};

class Parser {
 public:
  explicit Parser(std::vector<Token> toks) : toks_(std::move(toks)) {}

  DiocPtr parse_top() {
    if (cur().kind == Tok::End)
      throw ParseError{cur().span, "empty program"};
    DiocPtr p = block_content();
    expect(Tok::End, "end of input");
    return p;
  }

 private:
  std::vector<Token> toks_;
  size_t i_ = 0;

  const Token& cur() const { return toks_[i_]; }
  const Token& peek(int k = 1) const {
    size_t j = i_ + k;
    return j < toks_.size() ? toks_[j] : toks_.back();
  }
  Token eat() { return toks_[i_++]; }
  Token expect(Tok k, const char* what) {
    if (cur().kind != k)
      throw ParseError{cur().span, std::string("expected ") + what +
                                       ", found '" + cur().text + "'"};
    return eat();
  }

  // blockcontent := program ('|' program)*
  DiocPtr block_content() {
    DiocPtr p = program();
    if (cur().kind != Tok::Bar) return p;
    std::vector<DiocPtr> parts{p};
    while (cur().kind == Tok::Bar) {
      eat();
      parts.push_back(program());
    }
    DiocPtr acc = parts.back();
    for (auto it = parts.rbegin() + 1; it != parts.rend(); ++it)
      acc = d_par(*it, acc);
    return acc;
  }

  // program := stmt (';' stmt)*
  DiocPtr program() {
    std::vector<DiocPtr> stmts{stmt()};
    while (cur().kind == Tok::Semi) {
      eat();
      stmts.push_back(stmt());
    }
    DiocPtr acc = stmts.back();
    for (auto it = stmts.rbegin() + 1; it != stmts.rend(); ++it)
      acc = d_seq(*it, acc);
    return acc;
  }

  DiocPtr stmt() {
    SrcSpan sp = cur().span;
    switch (cur().kind) {
      case Tok::Int:
        if (cur().ival == 1) {
          eat();
          return d_one();
        }
        if (cur().ival == 0) {
          eat();
          return d_zero();
        }
        throw ParseError{sp, "expected statement"};
      case Tok::LBrace: {
        eat();
        DiocPtr p = block_content();
        expect(Tok::RBrace, "'}'");
        return p;
      }
      case Tok::KwIf: {
        eat();
        ExprPtr g = expr();
        expect(Tok::At, "'@'");
        Role r{expect(Tok::Id, "role name").text};
        DiocPtr t = block();
        DiocPtr e = d_one();
        if (cur().kind == Tok::KwElse) {
          eat();
          e = block();
        }
        return with_span(d_if(g, r, t, e), sp);
      }
      case Tok::KwWhile: {
        eat();
        ExprPtr g = expr();
        expect(Tok::At, "'@'");
        Role r{expect(Tok::Id, "role name").text};
        DiocPtr b = block();
        return with_span(d_while(g, r, b), sp);
      }
      case Tok::KwScope: {
        eat();
        std::string name;
        if (cur().kind == Tok::Id) name = eat().text;
        expect(Tok::At, "'@'");
        Role r{expect(Tok::Id, "role name").text};
        DiocPtr b = block();
        return with_span(d_scope(r, b, name), sp);
      }
      case Tok::Id: {
        if (peek().kind == Tok::At) {
          std::string var = eat().text;
          eat();  // @
          Role r{expect(Tok::Id, "role name").text};
          expect(Tok::Assign, "'='");
          ExprPtr e = expr();
          return with_span(d_assign(var, r, e), sp);
        }
        if (peek().kind == Tok::Colon) {
          std::string opname = eat().text;
          eat();  // :
          Role sender{expect(Tok::Id, "sender role").text};
          expect(Tok::LParen, "'('");
          ExprPtr e = expr();
          expect(Tok::RParen, "')'");
          expect(Tok::Arrow, "'->'");
          Role receiver{expect(Tok::Id, "receiver role").text};
          expect(Tok::LParen, "'('");
          std::string var = expect(Tok::Id, "variable name").text;
          expect(Tok::RParen, "')'");
          if (opname.rfind("o*_", 0) == 0)
            throw ParseError{sp, "operation names starting with o*_ are "
                                 "reserved"};
          return with_span(
              d_interaction(Operation{opname}, sender, e, receiver, var), sp);
        }
        throw ParseError{sp, "expected '@' or ':' after identifier '" +
                                 cur().text + "'"};
      }
      default:
        throw ParseError{sp,
                         "expected statement, found '" + cur().text + "'"};
    }
  }

  DiocPtr block() {
    expect(Tok::LBrace, "'{'");
    DiocPtr p = block_content();
    expect(Tok::RBrace, "'}'");
    return p;
  }

  static DiocPtr with_span(DiocPtr p, SrcSpan sp) {
    DiocNode n = *p;
    n.span = sp;
    return std::make_shared<DiocNode>(std::move(n));
  }

  // precedence: or < and < cmp < addsub < muldiv < unary
  ExprPtr expr() { return expr_or(); }

  ExprPtr expr_or() {
    ExprPtr l = expr_and();
    while (cur().kind == Tok::KwOr) {
      eat();
      l = Expr::binary("or", l, expr_and());
    }
    return l;
  }
  ExprPtr expr_and() {
    ExprPtr l = expr_cmp();
    while (cur().kind == Tok::KwAnd) {
      eat();
      l = Expr::binary("and", l, expr_cmp());
    }
    return l;
  }
  ExprPtr expr_cmp() {
    ExprPtr l = expr_add();
    for (;;) {
      std::string op;
      switch (cur().kind) {
        case Tok::Eq: op = "=="; break;
        case Tok::Ne: op = "!="; break;
        case Tok::Le: op = "<="; break;
        case Tok::Ge: op = ">="; break;
        case Tok::Lt: op = "<"; break;
        case Tok::Gt: op = ">"; break;
        default: return l;
      }
      eat();
      l = Expr::binary(op, l, expr_add());
    }
  }
  ExprPtr expr_add() {
    ExprPtr l = expr_mul();
    for (;;) {
      if (cur().kind == Tok::Plus) {
        eat();
        l = Expr::binary("+", l, expr_mul());
      } else if (cur().kind == Tok::Minus) {
        eat();
        l = Expr::binary("-", l, expr_mul());
      } else {
        return l;
      }
    }
  }
  ExprPtr expr_mul() {
    ExprPtr l = expr_unary();
    for (;;) {
      if (cur().kind == Tok::Star) {
        eat();
        l = Expr::binary("*", l, expr_unary());
      } else if (cur().kind == Tok::Slash) {
        eat();
        l = Expr::binary("/", l, expr_unary());
      } else {
        return l;
      }
    }
  }
  ExprPtr expr_unary() {
    if (cur().kind == Tok::Bang || cur().kind == Tok::KwNot) {
      eat();
      return Expr::unary("not", expr_unary());
    }
    if (cur().kind == Tok::Minus) {
      eat();
      return Expr::unary("neg", expr_unary());
    }
    return expr_primary();
  }
  ExprPtr expr_primary() {
    SrcSpan sp = cur().span;
    switch (cur().kind) {
      case Tok::Int: {
        Token t = eat();
        return Expr::literal(Value::integer(t.ival));
      }
      case Tok::Str: {
        Token t = eat();
        return Expr::literal(Value::str(t.text));
      }
      case Tok::KwTrue:
        eat();
        return Expr::literal(Value::boolean(true));
      case Tok::KwFalse:
        eat();
        return Expr::literal(Value::boolean(false));
      case Tok::KwNull:
        eat();
        return Expr::literal(Value::null());
      case Tok::LParen: {
        eat();
        ExprPtr e = expr();
        expect(Tok::RParen, "')'");
        return e;
      }
      case Tok::Id: {
        std::string name = eat().text;
        if (cur().kind == Tok::LParen) {
          eat();
          std::vector<ExprPtr> args;
          if (cur().kind != Tok::RParen) {
            args.push_back(expr());
            while (cur().kind == Tok::Comma) {
              eat();
              args.push_back(expr());
            }
          }
          expect(Tok::RParen, "')'");
          return Expr::call(name, std::move(args));
        }
        return Expr::var(name);
      }
      default:
        throw ParseError{sp, "expected expression, found '" + cur().text + "'"};
    }
  }
};

bool contains_zero(const DiocPtr& p) { return !is_initial(p); }

ParseResult do_parse(const std::string& text, bool update) {
  ParseResult res;
  try {
    Lexer lex(text);
    Parser p(lex.run());
    DiocPtr prog = p.parse_top();
    if (update && contains_zero(prog)) {
      res.diagnostics.push_back(
          {Diagnostic::Severity::Error, {1, 1, 0},
           "updates must be initial (0 may not occur)", "PARSE"});
      return res;
    }
    res.program = prog;
  } catch (const ParseError& e) {
    res.diagnostics.push_back(
        {Diagnostic::Severity::Error, e.span, e.message, "PARSE"});
  }
  return res;
}

}  // namespace

ParseResult parse_dioc(const std::string& text) { return do_parse(text, false); }
ParseResult parse_update(const std::string& text) {
  return do_parse(text, true);
}

namespace {

void pp_block(const DiocPtr& p, std::ostream& os, int ind);
std::string guard_text(const ExprPtr& g);

void pp_walk(const DiocPtr& p, std::ostream& os, int ind) {
  std::string pad(ind, ' ');
  std::visit(
      [&](auto& n) {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, DInteraction>) {
          os << pad << n.op.display() << " : " << n.sender.name << "( "
             << expr_display(n.expr) << " ) -> " << n.receiver.name << "( "
             << n.var << " )";
        } else if constexpr (std::is_same_v<T, DAssign>) {
          os << pad << n.var << "@" << n.role.name << " = "
             << expr_display(n.expr);
        } else if constexpr (std::is_same_v<T, DSeq>) {
          pp_walk(n.left, os, ind);
          os << ";\n";
          pp_walk(n.right, os, ind);
        } else if constexpr (std::is_same_v<T, DPar>) {
          os << pad << "{\n";
          pp_walk(n.left, os, ind + 2);
          os << "\n" << pad << "|\n";
          pp_walk(n.right, os, ind + 2);
          os << "\n" << pad << "}";
        } else if constexpr (std::is_same_v<T, DOne>) {
          os << pad << "1";
        } else if constexpr (std::is_same_v<T, DZero>) {
          os << pad << "0";
        } else if constexpr (std::is_same_v<T, DIf>) {
          os << pad << "if " << guard_text(n.guard) << "@" << n.role.name
             << " ";
          pp_block(n.then_branch, os, ind);
          if (!std::holds_alternative<DOne>(n.else_branch->node)) {
            os << " else ";
            pp_block(n.else_branch, os, ind);
          }
        } else if constexpr (std::is_same_v<T, DWhile>) {
          os << pad << "while " << guard_text(n.guard) << "@" << n.role.name
             << " ";
          pp_block(n.body, os, ind);
        } else if constexpr (std::is_same_v<T, DScope>) {
          os << pad << "scope ";
          if (!n.name.empty()) os << n.name << " ";
          os << "@" << n.coordinator.name << " ";
          pp_block(n.body, os, ind);
        }
      },
      p->node);
}

std::string guard_text(const ExprPtr& g) {
  return "( " + expr_display(g) + " )";
}

void pp_block(const DiocPtr& p, std::ostream& os, int ind) {
  os << "{\n";
  pp_walk(p, os, ind + 2);
  os << "\n" << std::string(ind, ' ') << "}";
}

}  // namespace

std::string pretty_dioc(const DiocPtr& p, int indent) {
  std::ostringstream os;
  pp_walk(p, os, indent);
  return os.str();
}

}  // namespace dioc
