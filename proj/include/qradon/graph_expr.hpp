#pragma once

#include <cctype>
#include <functional>
#include <memory>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "qradon/errors.hpp"
#include "qradon/graph.hpp"

namespace qradon {

class GraphExpr;
using ExprPtr = std::shared_ptr<const GraphExpr>;

// Expression tree over graphs. Leaves: K(n) complete, B(m,n) complete
// bipartite, X an explicit graph (usually loaded from a file). Internal
// nodes: Join and DisjointUnion with arity >= 1.
class GraphExpr {
 public:
  enum class Kind { K, B, X, Join, Union };

  Kind kind;
  int kn = 0;      // K
  int bm = 0;      // B
  int bn = 0;      // B
  Graph graph;     // X
  std::string path;  // X: source file, empty if constructed in memory
  std::vector<ExprPtr> children;

  static ExprPtr k(int n) {
    if (n < 1) throw InputError("K requires n >= 1");
    auto e = std::make_shared<GraphExpr>();
    e->kind = Kind::K;
    e->kn = n;
    return e;
  }

  static ExprPtr b(int m, int n) {
    if (m < 1 || n < 1) throw InputError("B requires m,n >= 1");
    auto e = std::make_shared<GraphExpr>();
    e->kind = Kind::B;
    e->bm = m;
    e->bn = n;
    return e;
  }

  static ExprPtr x(Graph g, std::string source_path = "") {
    auto e = std::make_shared<GraphExpr>();
    e->kind = Kind::X;
    e->graph = std::move(g);
    e->path = std::move(source_path);
    return e;
  }

  static ExprPtr join(std::vector<ExprPtr> cs) { return internal(Kind::Join, std::move(cs)); }
  static ExprPtr disjoint_union(std::vector<ExprPtr> cs) { return internal(Kind::Union, std::move(cs)); }

 private:
  static ExprPtr internal(Kind kind, std::vector<ExprPtr> cs) {
    if (cs.empty()) throw InputError("J and U require at least one child");
    auto e = std::make_shared<GraphExpr>();
    e->kind = kind;
    e->children = std::move(cs);
    return e;
  }
};

inline int expr_vertex_count(const ExprPtr& e) {
  switch (e->kind) {
    case GraphExpr::Kind::K: return e->kn;
    case GraphExpr::Kind::B: return e->bm + e->bn;
    case GraphExpr::Kind::X: return e->graph.n;
    default: {
      int total = 0;
      for (const auto& c : e->children) total += expr_vertex_count(c);
      return total;
    }
  }
}

inline bool expr_equal(const ExprPtr& a, const ExprPtr& b) {
  if (a->kind != b->kind) return false;
  switch (a->kind) {
    case GraphExpr::Kind::K: return a->kn == b->kn;
    case GraphExpr::Kind::B: return a->bm == b->bm && a->bn == b->bn;
    case GraphExpr::Kind::X: return a->graph == b->graph;
    default:
      if (a->children.size() != b->children.size()) return false;
      for (std::size_t i = 0; i < a->children.size(); ++i)
        if (!expr_equal(a->children[i], b->children[i])) return false;
      return true;
  }
}

inline std::string print_expr(const ExprPtr& e) {
  switch (e->kind) {
    case GraphExpr::Kind::K: return "K" + std::to_string(e->kn);
    case GraphExpr::Kind::B: return "B(" + std::to_string(e->bm) + "," + std::to_string(e->bn) + ")";
    case GraphExpr::Kind::X:
      if (e->path.empty()) throw InputError("explicit graph leaf has no source path to print");
      return "file(" + e->path + ")";
    default: {
      std::string out = e->kind == GraphExpr::Kind::Join ? "J(" : "U(";
      for (std::size_t i = 0; i < e->children.size(); ++i) {
        if (i) out += ",";
        out += print_expr(e->children[i]);
      }
      return out + ")";
    }
  }
}

using FileLoader = std::function<Graph(const std::string&)>;

namespace detail {

class ExprParser {
 public:
  ExprParser(std::string_view text, const FileLoader& loader) : text_(text), loader_(loader) {}

  ExprPtr parse() {
    ExprPtr e = expr();
    skip_ws();
    if (pos_ != text_.size()) throw ParseError("trailing input after expression", pos_);
    return e;
  }

 private:
  ExprPtr expr() {
    skip_ws();
    if (pos_ >= text_.size()) throw ParseError("expected expression", pos_);
    const char c = text_[pos_];
    if (c == 'K') {
      ++pos_;
      return GraphExpr::k(integer());
    }
    if (c == 'B') {
      ++pos_;
      expect('(');
      const int m = integer();
      expect(',');
      const int n = integer();
      expect(')');
      return GraphExpr::b(m, n);
    }
    if (c == 'U' || c == 'J') {
      ++pos_;
      expect('(');
      std::vector<ExprPtr> cs;
      cs.push_back(expr());
      skip_ws();
      while (pos_ < text_.size() && text_[pos_] == ',') {
        ++pos_;
        cs.push_back(expr());
        skip_ws();
      }
      expect(')');
      return c == 'U' ? GraphExpr::disjoint_union(std::move(cs)) : GraphExpr::join(std::move(cs));
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      // t*e sugars to the t-fold disjoint union of e.
      const std::size_t at = pos_;
      const int t = integer();
      expect('*');
      ExprPtr inner = expr();
      if (t < 1) throw ParseError("multiplier must be >= 1", at);
      std::vector<ExprPtr> cs(static_cast<std::size_t>(t), inner);
      return GraphExpr::disjoint_union(std::move(cs));
    }
    if (text_.compare(pos_, 5, "file(") == 0) {
      pos_ += 5;
      const std::size_t start = pos_;
      while (pos_ < text_.size() && text_[pos_] != ')') ++pos_;
      if (pos_ >= text_.size()) throw ParseError("unterminated file( path", start);
      std::string path(text_.substr(start, pos_ - start));
      ++pos_;
      while (!path.empty() && std::isspace(static_cast<unsigned char>(path.front()))) path.erase(path.begin());
      while (!path.empty() && std::isspace(static_cast<unsigned char>(path.back()))) path.pop_back();
      if (path.empty()) throw ParseError("empty file( path", start);
      if (!loader_) throw ParseError("file( leaves are not available here", start);
      return GraphExpr::x(loader_(path), path);
    }
    throw ParseError(std::string("unexpected character '") + c + "'", pos_);
  }

  int integer() {
    skip_ws();
    const std::size_t at = pos_;
    long long value = 0;
    bool any = false;
    while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
      value = value * 10 + (text_[pos_] - '0');
      if (value > 1000000) throw ParseError("integer too large", at);
      ++pos_;
      any = true;
    }
    if (!any) throw ParseError("expected integer", at);
    return static_cast<int>(value);
  }

  void expect(char c) {
    skip_ws();
    if (pos_ >= text_.size() || text_[pos_] != c)
      throw ParseError(std::string("expected '") + c + "'", pos_);
    ++pos_;
  }

  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  std::string_view text_;
  const FileLoader& loader_;
  std::size_t pos_ = 0;
};

}  // namespace detail

// Grammar:
//   expr := "K" INT | "B(" INT "," INT ")" | "U(" expr ("," expr)* ")"
//         | "J(" expr ("," expr)* ")" | INT "*" expr | "file(" path ")"
// Whitespace is insignificant. file( leaves need a loader.
inline ExprPtr parse_expr(std::string_view text, const FileLoader& loader = {}) {
  return detail::ExprParser(text, loader).parse();
}

// Vertex numbering follows left-to-right leaf order, so realized graphs are
// reproducible across runs. Resulting graphs carry generated names.
inline Graph realize(const ExprPtr& e) {
  switch (e->kind) {
    case GraphExpr::Kind::K: return Graph::complete(e->kn);
    case GraphExpr::Kind::B: return Graph::complete_bipartite(e->bm, e->bn);
    case GraphExpr::Kind::X: {
      Graph g = e->graph;
      g.names.clear();
      return g;
    }
    default: {
      Graph out;
      std::vector<std::pair<int, int>> ranges;  // [offset, offset+size) per child
      for (const auto& c : e->children) {
        Graph part = realize(c);
        const int off = out.n;
        ranges.emplace_back(off, off + part.n);
        out.n += part.n;
        for (const auto& [u, v] : part.edges) out.edges.emplace_back(off + u, off + v);
      }
      if (e->kind == GraphExpr::Kind::Join) {
        for (std::size_t i = 0; i < ranges.size(); ++i)
          for (std::size_t j = i + 1; j < ranges.size(); ++j)
            for (int u = ranges[i].first; u < ranges[i].second; ++u)
              for (int v = ranges[j].first; v < ranges[j].second; ++v) out.edges.emplace_back(u, v);
      }
      out.normalize();
      return out;
    }
  }
}

}  // namespace qradon
