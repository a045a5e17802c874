#include "amrkit/penman.h"

#include <cctype>
#include <map>
#include <memory>
#include <regex>
#include <set>
#include <variant>

#include "amrkit/error.h"

namespace amrkit {

namespace {

enum class TokenType { kOpen, kClose, kSlash, kRole, kString, kAtom, kEnd };

struct Token {
  TokenType type;
  std::string text;
  std::size_t pos;
};

class Lexer {
 public:
  explicit Lexer(std::string_view text) : text_(text) {}

  Token Next() {
    SkipSpace();
    if (i_ >= text_.size()) return {TokenType::kEnd, "", i_};
    std::size_t start = i_;
    char c = text_[i_];
    if (c == '(') {
      ++i_;
      return {TokenType::kOpen, "(", start};
    }
    if (c == ')') {
      ++i_;
      return {TokenType::kClose, ")", start};
    }
    if (c == '/') {
      ++i_;
      return {TokenType::kSlash, "/", start};
    }
    if (c == '"') {
      ++i_;
      std::string value;
      while (true) {
        if (i_ >= text_.size()) throw SyntaxError("unterminated string", start);
        char ch = text_[i_++];
        if (ch == '\\' && i_ < text_.size()) {
          value.push_back(text_[i_++]);
        } else if (ch == '"') {
          break;
        } else {
          value.push_back(ch);
        }
      }
      SkipAlignmentMarker();
      return {TokenType::kString, value, start};
    }
    std::string atom;
    while (i_ < text_.size() && !IsDelimiter(text_[i_])) atom.push_back(text_[i_++]);
    StripAlignmentMarker(atom);
    if (atom.front() == ':') {
      if (atom.size() == 1) throw SyntaxError("empty role", start);
      return {TokenType::kRole, atom, start};
    }
    return {TokenType::kAtom, atom, start};
  }

  std::size_t position() const { return i_; }

 private:
  static bool IsDelimiter(char c) {
    return std::isspace(static_cast<unsigned char>(c)) || c == '(' || c == ')' ||
           c == '"';
  }

  void SkipSpace() {
    while (i_ < text_.size()) {
      if (std::isspace(static_cast<unsigned char>(text_[i_]))) {
        ++i_;
      } else if (text_[i_] == '#') {
        while (i_ < text_.size() && text_[i_] != '\n') ++i_;
      } else {
        break;
      }
    }
  }

  // ISI-style alignment suffixes such as `~e.3`.
  void SkipAlignmentMarker() {
    if (i_ < text_.size() && text_[i_] == '~') {
      while (i_ < text_.size() && !IsDelimiter(text_[i_])) ++i_;
    }
  }

  static void StripAlignmentMarker(std::string &atom) {
    std::size_t tilde = atom.find('~');
    if (tilde != std::string::npos && tilde > 0) atom.erase(tilde);
  }

  std::string_view text_;
  std::size_t i_ = 0;
};

struct ParsedNode;

struct ParsedAtom {
  std::string text;
  bool quoted;
  std::size_t pos;
};

struct ParsedEdge {
  std::string role;
  std::variant<std::unique_ptr<ParsedNode>, ParsedAtom> value;
};

struct ParsedNode {
  std::string var;
  std::string label;
  std::size_t pos;
  std::vector<ParsedEdge> edges;
};

class Reader {
 public:
  explicit Reader(std::string_view text) : lexer_(text) { Advance(); }

  std::unique_ptr<ParsedNode> ReadTop() {
    if (current_.type != TokenType::kOpen) {
      throw SyntaxError("expected '('", current_.pos);
    }
    auto node = ReadNode();
    if (current_.type != TokenType::kEnd) {
      throw SyntaxError("unexpected content after graph", current_.pos);
    }
    return node;
  }

 private:
  void Advance() { current_ = lexer_.Next(); }

  std::unique_ptr<ParsedNode> ReadNode() {
    auto node = std::make_unique<ParsedNode>();
    node->pos = current_.pos;
    Advance();  // '('
    if (current_.type != TokenType::kAtom) {
      throw SyntaxError("expected variable", current_.pos);
    }
    node->var = current_.text;
    Advance();
    if (current_.type != TokenType::kSlash) {
      throw SyntaxError("expected '/' after variable", current_.pos);
    }
    Advance();
    if (current_.type != TokenType::kAtom && current_.type != TokenType::kString) {
      throw SyntaxError("expected concept label", current_.pos);
    }
    node->label = current_.text;
    Advance();
    while (current_.type == TokenType::kRole) {
      ParsedEdge edge;
      edge.role = current_.text;
      Advance();
      switch (current_.type) {
        case TokenType::kOpen:
          edge.value = ReadNode();
          break;
        case TokenType::kAtom:
        case TokenType::kString:
          edge.value = ParsedAtom{current_.text, current_.type == TokenType::kString,
                                  current_.pos};
          Advance();
          break;
        default:
          throw SyntaxError("expected value after role " + edge.role, current_.pos);
      }
      node->edges.push_back(std::move(edge));
    }
    if (current_.type != TokenType::kClose) {
      if (current_.type == TokenType::kEnd) {
        throw SyntaxError("unbalanced parentheses", current_.pos);
      }
      throw SyntaxError("expected ')' or role", current_.pos);
    }
    Advance();
    return node;
  }

  Lexer lexer_;
  Token current_{TokenType::kEnd, "", 0};
};

bool LooksLikeVariable(const std::string &atom) {
  static const std::regex kVariable("^[a-z][a-z]?[0-9]*$");
  return std::regex_match(atom, kVariable);
}

class Builder {
 public:
  AmrGraph Build(const ParsedNode &top) {
    Define(top);
    NodeId root = Create(top);
    graph_.SetRoot(root);
    return std::move(graph_);
  }

 private:
  void Define(const ParsedNode &node) {
    if (!defined_.insert(node.var).second) {
      throw Error(ErrorCode::kStructure, "variable '" + node.var +
                                             "' defined twice (offset " +
                                             std::to_string(node.pos) + ")");
    }
    for (const ParsedEdge &e : node.edges) {
      if (auto *child = std::get_if<std::unique_ptr<ParsedNode>>(&e.value)) {
        Define(**child);
      }
    }
  }

  NodeId Create(const ParsedNode &node) {
    NodeId id = Lookup(node.var);
    for (const ParsedEdge &e : node.edges) {
      NodeId target;
      if (auto *child = std::get_if<std::unique_ptr<ParsedNode>>(&e.value)) {
        target = Create(**child);
      } else {
        const ParsedAtom &atom = std::get<ParsedAtom>(e.value);
        if (atom.quoted) {
          target = graph_.AddLiteral(atom.text, LiteralKind::kString);
        } else if (defined_.count(atom.text)) {
          target = Lookup(atom.text);
        } else if (LooksLikeVariable(atom.text)) {
          throw Error(ErrorCode::kStructure, "reference to undefined variable '" +
                                                 atom.text + "' (offset " +
                                                 std::to_string(atom.pos) + ")");
        } else {
          target = graph_.AddLiteral(atom.text, LiteralKind::kSymbol);
        }
      }
      graph_.AddRelation(id, target, e.role);
    }
    return id;
  }

  NodeId Lookup(const std::string &var) {
    auto it = ids_.find(var);
    if (it != ids_.end()) return it->second;
    // Defined later in the text; create on first touch and fill its label
    // when the definition is reached.
    const ParsedNode *def = FindDefinition(var);
    NodeId id = graph_.AddConcept(var, def->label);
    ids_.emplace(var, id);
    return id;
  }

  const ParsedNode *FindDefinition(const std::string &var) const {
    const ParsedNode *found = nullptr;
    std::vector<const ParsedNode *> stack{top_};
    while (!stack.empty() && !found) {
      const ParsedNode *n = stack.back();
      stack.pop_back();
      if (n->var == var) found = n;
      for (const ParsedEdge &e : n->edges) {
        if (auto *child = std::get_if<std::unique_ptr<ParsedNode>>(&e.value)) {
          stack.push_back(child->get());
        }
      }
    }
    return found;
  }

 public:
  const ParsedNode *top_ = nullptr;

 private:
  AmrGraph graph_;
  std::set<std::string> defined_;
  std::map<std::string, NodeId> ids_;
};

}  // namespace

AmrGraph ParsePenman(std::string_view text) {
  Reader reader(text);
  std::unique_ptr<ParsedNode> top = reader.ReadTop();
  Builder builder;
  builder.top_ = top.get();
  return builder.Build(*top);
}

namespace {

class TreeWalker {
 public:
  explicit TreeWalker(const AmrGraph &g)
      : g_(g), visited_(g.size(), false), emitted_(g.relations().size(), false) {
    tree_.children.resize(g.size());
  }

  SerialTree Walk() {
    if (g_.empty()) throw Error(ErrorCode::kSerialization, "empty graph");
    NodeId root = g_.root();
    if (g_.concept_at(root).is_literal()) {
      throw Error(ErrorCode::kSerialization, "root is a literal");
    }
    Visit(root);
    // Nodes only reachable against edge direction hang under an inverted
    // role from the first visited endpoint.
    for (bool grew = true; grew;) {
      grew = false;
      for (std::size_t r = 0; r < g_.relations().size(); ++r) {
        const Relation &rel = g_.relations()[r];
        if (emitted_[r] || visited_[rel.source] || !visited_[rel.target]) continue;
        emitted_[r] = true;
        tree_.children[rel.target].push_back({InvertRole(rel.role), rel.source, false});
        Visit(rel.source);
        grew = true;
      }
    }
    for (NodeId id = 0; id < g_.size(); ++id) {
      if (!visited_[id]) {
        throw Error(ErrorCode::kSerialization,
                    "graph is disconnected: '" + g_.concept_at(id).label +
                        "' is unreachable from the root");
      }
    }
    tree_.order.clear();
    Order(root);
    return std::move(tree_);
  }

 private:
  // Authored (outgoing) edges only; a target seen before becomes a reference.
  void Visit(NodeId id) {
    visited_[id] = true;
    if (g_.concept_at(id).is_literal()) return;
    for (std::size_t r : g_.outgoing(id)) {
      if (emitted_[r]) continue;
      emitted_[r] = true;
      const Relation &rel = g_.relations()[r];
      bool literal = g_.concept_at(rel.target).is_literal();
      if (visited_[rel.target] && !literal) {
        tree_.children[id].push_back({rel.role, rel.target, true});
      } else {
        tree_.children[id].push_back({rel.role, rel.target, false});
        Visit(rel.target);
      }
    }
  }

  void Order(NodeId id) {
    tree_.order.push_back(id);
    for (const SerialEdge &e : tree_.children[id]) {
      if (!e.reference) Order(e.node);
    }
  }

  const AmrGraph &g_;
  std::vector<bool> visited_;
  std::vector<bool> emitted_;
  SerialTree tree_;
};

}  // namespace

SerialTree BuildSerialTree(const AmrGraph &g) { return TreeWalker(g).Walk(); }

std::string SerializePenman(const AmrGraph &g, const SerializeOptions &options) {
  SerialTree tree = BuildSerialTree(g);
  std::vector<std::string> names(g.size());
  std::set<std::string> used;
  std::size_t counter = 0;
  for (NodeId id : tree.order) {
    const Concept &c = g.concept_at(id);
    if (c.is_literal()) continue;
    if (!options.normalize_vars && !c.var.empty() && used.insert(c.var).second) {
      names[id] = c.var;
    } else {
      names[id] = "c" + std::to_string(counter++);
    }
  }

  std::string out;
  auto newline = [&](int depth) {
    if (options.single_line) {
      out.push_back(' ');
    } else {
      out.push_back('\n');
      out.append(static_cast<std::size_t>(depth * options.indent), ' ');
    }
  };
  auto emit = [&](auto &self, NodeId id, int depth) -> void {
    const Concept &c = g.concept_at(id);
    if (c.is_literal()) {
      out += PenmanLiteral(c);
      return;
    }
    out += "(" + names[id] + " / " + c.label;
    for (const SerialEdge &e : tree.children[id]) {
      newline(depth + 1);
      out += e.role + " ";
      if (e.reference) {
        out += names[e.node];
      } else {
        self(self, e.node, depth + 1);
      }
    }
    out += ")";
  };
  emit(emit, g.root(), 0);
  return out;
}

std::vector<std::string> NodeAddresses(const AmrGraph &g) {
  SerialTree tree = BuildSerialTree(g);
  std::vector<std::string> address(g.size());
  address[g.root()] = "0";
  for (NodeId id : tree.order) {
    std::size_t k = 0;
    for (const SerialEdge &e : tree.children[id]) {
      if (e.reference) continue;
      address[e.node] = address[id] + "." + std::to_string(k++);
    }
  }
  return address;
}

NodeId NodeByAddress(const AmrGraph &g, const std::string &address) {
  std::vector<std::string> all = NodeAddresses(g);
  for (NodeId id = 0; id < all.size(); ++id) {
    if (all[id] == address) return id;
  }
  throw Error(ErrorCode::kLookup, "no node at address " + address);
}

}  // namespace amrkit
