// Copyright 2026 The gsn Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// MiniLang: a small indentation-structured language used as the in-process
// front end for program graphs.
//
//   program := stmt*
//   stmt    := assign | if | while | exprstmt
//   assign  := IDENT "=" expr
//   if      := "if" expr ":" block ["else" ":" block]
//   while   := "while" expr ":" block
//   expr    := term (("+"|"-"|"*"|"/"|">"|"<"|"==") term)*
//   term    := IDENT | INT | IDENT "(" [expr ("," expr)*] ")"
//
// A block is either a single statement on the same line after ":" or the
// following lines indented by two more spaces.

#include <cctype>
#include <memory>

#include "gsn/code_graph.h"

namespace gsn::graph {
namespace {

enum class Tok { kIdent, kInt, kOp, kAssign, kLParen, kRParen, kComma, kColon, kEnd };

struct Token {
  Tok kind;
  std::string text;
  int column;  // 1-based
};

struct Line {
  int number;
  int indent;
  std::vector<Token> tokens;
};

std::vector<Token> Lex(std::string_view text, int line_no, int col0) {
  std::vector<Token> out;
  std::size_t i = 0;
  while (i < text.size()) {
    const char c = text[i];
    const int col = col0 + static_cast<int>(i);
    if (c == ' ' || c == '\t') {
      ++i;
    } else if (c == '#') {
      break;
    } else if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t j = i;
      while (j < text.size() &&
             (std::isalnum(static_cast<unsigned char>(text[j])) || text[j] == '_'))
        ++j;
      out.push_back({Tok::kIdent, std::string(text.substr(i, j - i)), col});
      i = j;
    } else if (std::isdigit(static_cast<unsigned char>(c))) {
      std::size_t j = i;
      while (j < text.size() && std::isdigit(static_cast<unsigned char>(text[j])))
        ++j;
      if (j < text.size() &&
          (std::isalpha(static_cast<unsigned char>(text[j])) || text[j] == '_'))
        throw SyntaxError("malformed number", line_no, col);
      out.push_back({Tok::kInt, std::string(text.substr(i, j - i)), col});
      i = j;
    } else if (c == '=' && i + 1 < text.size() && text[i + 1] == '=') {
      out.push_back({Tok::kOp, "==", col});
      i += 2;
    } else if (c == '=') {
      out.push_back({Tok::kAssign, "=", col});
      ++i;
    } else if (c == '+' || c == '-' || c == '*' || c == '/' || c == '>' ||
               c == '<') {
      out.push_back({Tok::kOp, std::string(1, c), col});
      ++i;
    } else if (c == '(') {
      out.push_back({Tok::kLParen, "(", col});
      ++i;
    } else if (c == ')') {
      out.push_back({Tok::kRParen, ")", col});
      ++i;
    } else if (c == ',') {
      out.push_back({Tok::kComma, ",", col});
      ++i;
    } else if (c == ':') {
      out.push_back({Tok::kColon, ":", col});
      ++i;
    } else {
      throw SyntaxError(std::string("unexpected character '") + c + "'",
                        line_no, col);
    }
  }
  return out;
}

// Parse tree before ids are assigned.
struct PNode {
  std::string kind;
  std::string label;
  bool terminal = false;
  std::vector<std::unique_ptr<PNode>> children;
};

using PNodePtr = std::unique_ptr<PNode>;

PNodePtr Leaf(std::string kind, std::string label) {
  auto n = std::make_unique<PNode>();
  n->kind = std::move(kind);
  n->label = std::move(label);
  n->terminal = true;
  return n;
}

PNodePtr Inner(std::string kind) {
  auto n = std::make_unique<PNode>();
  n->kind = std::move(kind);
  return n;
}

std::string OpKindName(const std::string& op) {
  if (op == "+") return "Add";
  if (op == "-") return "Sub";
  if (op == "*") return "Mult";
  if (op == "/") return "Div";
  if (op == ">") return "Gt";
  if (op == "<") return "Lt";
  return "Eq";
}

bool IsKeyword(const std::string& s) {
  return s == "if" || s == "else" || s == "while";
}

class Parser {
 public:
  explicit Parser(std::vector<Line> lines) : lines_(std::move(lines)) {}

  std::vector<PNodePtr> Program() {
    auto stmts = Block(0);
    if (pos_ < lines_.size())
      throw SyntaxError("unexpected indentation", lines_[pos_].number,
                        lines_[pos_].indent + 1);
    return stmts;
  }

 private:
  // Statements at exactly `indent`, stopping at a shallower line.
  std::vector<PNodePtr> Block(int indent) {
    std::vector<PNodePtr> stmts;
    while (pos_ < lines_.size() && lines_[pos_].indent >= indent) {
      const Line& line = lines_[pos_];
      if (line.indent != indent)
        throw SyntaxError("unexpected indentation", line.number,
                          line.indent + 1);
      if (line.tokens.front().kind == Tok::kIdent &&
          line.tokens.front().text == "else")
        throw SyntaxError("'else' without matching 'if'", line.number,
                          line.tokens.front().column);
      ++pos_;
      stmts.push_back(Statement(line, 0, indent));
    }
    return stmts;
  }

  // Parses one statement starting at token `at` of `line`.
  PNodePtr Statement(const Line& line, std::size_t at, int indent) {
    cur_ = &line;
    tok_ = at;
    const Token& first = Peek();
    if (first.kind == Tok::kIdent && first.text == "if") {
      ++tok_;
      auto node = Inner("If");
      node->children.push_back(Expr());
      node->children.push_back(Body(indent));
      if (pos_ < lines_.size() && lines_[pos_].indent == indent &&
          lines_[pos_].tokens.front().kind == Tok::kIdent &&
          lines_[pos_].tokens.front().text == "else") {
        const Line& else_line = lines_[pos_++];
        cur_ = &else_line;
        tok_ = 1;
        node->children.push_back(Body(indent));
      }
      return node;
    }
    if (first.kind == Tok::kIdent && first.text == "while") {
      ++tok_;
      auto node = Inner("While");
      node->children.push_back(Expr());
      node->children.push_back(Body(indent));
      return node;
    }
    PNodePtr node;
    if (first.kind == Tok::kIdent && !IsKeyword(first.text) &&
        tok_ + 1 < cur_->tokens.size() &&
        cur_->tokens[tok_ + 1].kind == Tok::kAssign) {
      node = Inner("Assign");
      node->children.push_back(Leaf("Identifier", first.text));
      tok_ += 2;
      node->children.push_back(Expr());
    } else {
      node = Inner("Expr");
      node->children.push_back(Expr());
    }
    if (!AtEnd()) Fail("unexpected '" + Peek().text + "'");
    return node;
  }

  // After a condition: ":" then an inline statement or an indented block.
  PNodePtr Body(int indent) {
    if (AtEnd() || Peek().kind != Tok::kColon) Fail("expected ':'");
    ++tok_;
    auto block = Inner("Block");
    if (!AtEnd()) {
      const Line* saved = cur_;
      block->children.push_back(Statement(*saved, tok_, indent));
      return block;
    }
    const int line_no = cur_->number;
    if (pos_ >= lines_.size() || lines_[pos_].indent <= indent)
      throw SyntaxError("expected an indented block", line_no,
                        static_cast<int>(cur_->tokens.back().column) + 1);
    if (lines_[pos_].indent != indent + 2)
      throw SyntaxError("blocks are indented by two spaces",
                        lines_[pos_].number, lines_[pos_].indent + 1);
    block->children = Block(indent + 2);
    return block;
  }

  PNodePtr Expr() {
    PNodePtr left = Term();
    while (!AtEnd() && Peek().kind == Tok::kOp) {
      const std::string op = Peek().text;
      ++tok_;
      auto bin = Inner("BinOp");
      bin->children.push_back(std::move(left));
      bin->children.push_back(Inner(OpKindName(op)));
      bin->children.push_back(Term());
      left = std::move(bin);
    }
    return left;
  }

  PNodePtr Term() {
    if (AtEnd()) Fail("expected an expression");
    const Token t = Peek();
    if (t.kind == Tok::kInt) {
      ++tok_;
      return Leaf("IntLit", t.text);
    }
    if (t.kind != Tok::kIdent || IsKeyword(t.text))
      Fail("unexpected '" + t.text + "'");
    ++tok_;
    if (AtEnd() || Peek().kind != Tok::kLParen) return Leaf("Identifier", t.text);
    ++tok_;
    auto call = Inner("Call");
    call->children.push_back(Leaf("Identifier", t.text));
    if (!AtEnd() && Peek().kind == Tok::kRParen) {
      ++tok_;
      return call;
    }
    while (true) {
      call->children.push_back(Expr());
      if (AtEnd()) Fail("expected ')'");
      if (Peek().kind == Tok::kComma) {
        ++tok_;
        continue;
      }
      if (Peek().kind == Tok::kRParen) {
        ++tok_;
        return call;
      }
      Fail("expected ',' or ')'");
    }
  }

  bool AtEnd() const { return tok_ >= cur_->tokens.size(); }
  const Token& Peek() const { return cur_->tokens[tok_]; }

  [[noreturn]] void Fail(const std::string& message) const {
    const int col = AtEnd() ? (cur_->tokens.empty()
                                   ? 1
                                   : cur_->tokens.back().column +
                                         static_cast<int>(
                                             cur_->tokens.back().text.size()))
                            : Peek().column;
    throw SyntaxError(message, cur_->number, col);
  }

  std::vector<Line> lines_;
  std::size_t pos_ = 0;
  const Line* cur_ = nullptr;
  std::size_t tok_ = 0;
};

void Flatten(const PNode& p, int parent, std::vector<AstNode>& out,
             int& next_token) {
  const int id = static_cast<int>(out.size());
  AstNode node;
  node.id = id;
  node.kind = p.kind;
  node.label = p.label;
  node.parent = parent;
  node.is_terminal = p.terminal;
  if (p.terminal) node.token_index = next_token++;
  out.push_back(node);
  for (const auto& child : p.children) {
    out[id].children.push_back(static_cast<int>(out.size()));
    Flatten(*child, id, out, next_token);
  }
}

}  // namespace

Ast ParseMiniLang(std::string_view source) {
  std::vector<Line> lines;
  int line_no = 0;
  std::size_t pos = 0;
  while (pos <= source.size()) {
    std::size_t nl = source.find('\n', pos);
    if (nl == std::string_view::npos) nl = source.size();
    std::string_view raw = source.substr(pos, nl - pos);
    pos = nl + 1;
    ++line_no;
    if (!raw.empty() && raw.back() == '\r') raw.remove_suffix(1);
    int indent = 0;
    while (static_cast<std::size_t>(indent) < raw.size() && raw[indent] == ' ')
      ++indent;
    if (static_cast<std::size_t>(indent) < raw.size() && raw[indent] == '\t')
      throw SyntaxError("tabs are not allowed for indentation", line_no,
                        indent + 1);
    auto tokens = Lex(raw.substr(indent), line_no, indent + 1);
    if (tokens.empty()) continue;
    lines.push_back({line_no, indent, std::move(tokens)});
  }
  if (lines.empty()) throw SyntaxError("empty input", 1, 1);
  if (lines.front().indent != 0)
    throw SyntaxError("unexpected indentation", lines.front().number,
                      lines.front().indent + 1);

  Parser parser(std::move(lines));
  auto stmts = parser.Program();

  PNodePtr root;
  if (stmts.size() == 1) {
    root = std::move(stmts.front());
  } else {
    root = Inner("Module");
    root->children = std::move(stmts);
  }
  std::vector<AstNode> nodes;
  int next_token = 0;
  Flatten(*root, -1, nodes, next_token);
  return Ast(std::move(nodes));
}

}  // namespace gsn::graph
