#include "nandwalk/formula.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <limits>
#include <numbers>
#include <optional>
#include <sstream>

#include "nandwalk/rng.hpp"

namespace nandwalk {

// ---------------------------------------------------------------------------
// Node helpers

MixedNode MixedNode::variable(std::uint32_t index) {
  MixedNode n;
  n.kind = GateKind::kVar;
  n.var = index;
  return n;
}

MixedNode MixedNode::gate(GateKind kind, std::vector<MixedNode> children) {
  MixedNode n;
  n.kind = kind;
  n.children = std::move(children);
  return n;
}

NandNode NandNode::leaf(std::uint32_t index) {
  NandNode n;
  n.var = index;
  return n;
}

NandNode NandNode::nand(std::vector<NandNode> children) {
  NandNode n;
  n.children = std::move(children);
  return n;
}

bool operator==(const NandNode& a, const NandNode& b) {
  return a.var == b.var && a.children == b.children;
}

namespace {

struct Shape {
  std::size_t size = 0;
  std::size_t depth = 0;
  std::size_t max_fanin = 0;
  std::uint32_t max_var = 0;
};

Shape measure(const NandNode& node) {
  if (node.is_leaf()) {
    if (node.var == 0) throw std::invalid_argument("leaf with variable index 0");
    return {1, 0, 0, node.var};
  }
  Shape s;
  s.max_fanin = node.children.size();
  for (const auto& c : node.children) {
    Shape cs = measure(c);
    s.size += cs.size;
    s.depth = std::max(s.depth, cs.depth + 1);
    s.max_fanin = std::max(s.max_fanin, cs.max_fanin);
    s.max_var = std::max(s.max_var, cs.max_var);
  }
  return s;
}

void write_node(std::ostream& os, const NandNode& node) {
  if (node.is_leaf()) {
    os << 'x' << node.var;
    return;
  }
  os << "NAND(";
  for (std::size_t i = 0; i < node.children.size(); ++i) {
    if (i) os << ',';
    write_node(os, node.children[i]);
  }
  os << ')';
}

}  // namespace

FormulaAst::FormulaAst(NandNode root, std::uint32_t num_vars)
    : root_(std::move(root)) {
  Shape s = measure(root_);
  if (num_vars != 0 && num_vars < s.max_var) {
    throw DimensionError("formula uses x" + std::to_string(s.max_var) +
                         " but only " + std::to_string(num_vars) +
                         " variables declared");
  }
  num_vars_ = num_vars ? num_vars : s.max_var;
  size_ = s.size;
  depth_ = s.depth;
  max_fanin_ = s.max_fanin;
}

std::string FormulaAst::to_string() const {
  std::ostringstream os;
  write_node(os, root_);
  return os.str();
}

bool operator==(const FormulaAst& a, const FormulaAst& b) {
  return a.num_vars_ == b.num_vars_ && a.root_ == b.root_;
}

// ---------------------------------------------------------------------------
// Inputs

InputAssignment::InputAssignment(std::vector<std::uint8_t> bits)
    : bits_(std::move(bits)) {
  for (auto b : bits_) {
    if (b > 1) throw std::invalid_argument("input bits must be 0 or 1");
  }
}

InputAssignment InputAssignment::from_string(std::string_view bits) {
  std::vector<std::uint8_t> v;
  v.reserve(bits.size());
  for (char c : bits) {
    if (c != '0' && c != '1') {
      throw std::invalid_argument("input must be a string of 0/1 characters");
    }
    v.push_back(static_cast<std::uint8_t>(c - '0'));
  }
  return InputAssignment(std::move(v));
}

InputAssignment InputAssignment::from_index(std::uint64_t code,
                                            std::uint32_t num_vars) {
  std::vector<std::uint8_t> v(num_vars);
  for (std::uint32_t i = 0; i < num_vars && i < 64; ++i) {
    v[i] = static_cast<std::uint8_t>((code >> i) & 1u);
  }
  return InputAssignment(std::move(v));
}

InputAssignment InputAssignment::zeros(std::uint32_t num_vars) {
  return InputAssignment(std::vector<std::uint8_t>(num_vars, 0));
}

int InputAssignment::at(std::uint32_t index) const {
  if (index == 0 || index > bits_.size()) {
    throw DimensionError("variable x" + std::to_string(index) +
                         " outside input of length " +
                         std::to_string(bits_.size()));
  }
  return bits_[index - 1];
}

std::string InputAssignment::to_string() const {
  std::string s;
  s.reserve(bits_.size());
  for (auto b : bits_) s.push_back(static_cast<char>('0' + b));
  return s;
}

// ---------------------------------------------------------------------------
// Parser

namespace {

class Parser {
 public:
  explicit Parser(std::string_view text) : text_(text) {}

  MixedNode parse() {
    MixedNode n = expr();
    skip_ws();
    if (pos_ != text_.size()) fail("unexpected trailing input");
    return n;
  }

 private:
  [[noreturn]] void fail(const std::string& what) const {
    throw ParseError(what, pos_);
  }

  void skip_ws() {
    while (pos_ < text_.size() &&
           std::isspace(static_cast<unsigned char>(text_[pos_]))) {
      ++pos_;
    }
  }

  bool peek(char c) {
    skip_ws();
    return pos_ < text_.size() && text_[pos_] == c;
  }

  void expect(char c) {
    if (!peek(c)) fail(std::string("expected '") + c + "'");
    ++pos_;
  }

  MixedNode expr() {
    skip_ws();
    if (pos_ >= text_.size()) fail("unexpected end of input");
    const std::size_t start = pos_;
    std::size_t end = pos_;
    while (end < text_.size() &&
           std::isalnum(static_cast<unsigned char>(text_[end]))) {
      ++end;
    }
    if (end == start) fail("expected a variable or gate name");
    std::string_view word = text_.substr(start, end - start);

    if (word[0] == 'x') return variable(word, start, end);

    GateKind kind;
    if (word == "NAND") {
      kind = GateKind::kNand;
    } else if (word == "AND") {
      kind = GateKind::kAnd;
    } else if (word == "OR") {
      kind = GateKind::kOr;
    } else if (word == "NOT") {
      kind = GateKind::kNot;
    } else {
      fail("unknown token '" + std::string(word) + "'");
    }
    pos_ = end;
    expect('(');
    std::vector<MixedNode> children;
    children.push_back(expr());
    while (peek(',')) {
      ++pos_;
      children.push_back(expr());
    }
    expect(')');
    if (kind == GateKind::kNot && children.size() != 1) {
      pos_ = start;
      fail("NOT takes exactly one argument");
    }
    return MixedNode::gate(kind, std::move(children));
  }

  MixedNode variable(std::string_view word, std::size_t start,
                     std::size_t end) {
    std::string_view digits = word.substr(1);
    if (digits.empty()) {
      pos_ = start;
      fail("variable needs an index");
    }
    for (char c : digits) {
      if (!std::isdigit(static_cast<unsigned char>(c))) {
        pos_ = start;
        fail("malformed variable '" + std::string(word) + "'");
      }
    }
    if (digits[0] == '0') {
      pos_ = start;
      fail("variable index must start with 1-9");
    }
    if (digits.size() > 9) {
      pos_ = start;
      fail("variable index too large");
    }
    std::uint32_t index = 0;
    for (char c : digits) index = index * 10 + static_cast<std::uint32_t>(c - '0');
    pos_ = end;
    return MixedNode::variable(index);
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

}  // namespace

MixedNode parse_mixed(std::string_view text) { return Parser(text).parse(); }

namespace {

NandNode convert(const MixedNode& m) {
  std::vector<NandNode> kids;
  kids.reserve(m.children.size());
  switch (m.kind) {
    case GateKind::kVar:
      return NandNode::leaf(m.var);
    case GateKind::kNand:
    case GateKind::kNot:
      for (const auto& c : m.children) kids.push_back(convert(c));
      return NandNode::nand(std::move(kids));
    case GateKind::kAnd: {
      for (const auto& c : m.children) kids.push_back(convert(c));
      std::vector<NandNode> outer;
      outer.push_back(NandNode::nand(std::move(kids)));
      return NandNode::nand(std::move(outer));
    }
    case GateKind::kOr:
      for (const auto& c : m.children) {
        std::vector<NandNode> one;
        one.push_back(convert(c));
        kids.push_back(NandNode::nand(std::move(one)));
      }
      return NandNode::nand(std::move(kids));
  }
  throw std::logic_error("unreachable gate kind");
}

}  // namespace

FormulaAst to_nand(const MixedNode& mixed) { return FormulaAst(convert(mixed)); }

FormulaAst parse_formula(std::string_view text) {
  return to_nand(parse_mixed(text));
}

int evaluate_mixed(const MixedNode& m, const InputAssignment& x) {
  switch (m.kind) {
    case GateKind::kVar:
      return x.at(m.var);
    case GateKind::kNot:
      return 1 - evaluate_mixed(m.children.at(0), x);
    case GateKind::kNand:
    case GateKind::kAnd: {
      int all = 1;
      for (const auto& c : m.children) all &= evaluate_mixed(c, x);
      return m.kind == GateKind::kAnd ? all : 1 - all;
    }
    case GateKind::kOr: {
      int any = 0;
      for (const auto& c : m.children) any |= evaluate_mixed(c, x);
      return any;
    }
  }
  throw std::logic_error("unreachable gate kind");
}

// ---------------------------------------------------------------------------
// Evaluation

namespace {

int eval_node(const NandNode& n, const InputAssignment& x) {
  if (n.is_leaf()) return x.at(n.var);
  int product = 1;
  for (const auto& c : n.children) product *= eval_node(c, x);
  return 1 - product;
}

int eval_collect(const NandNode& n, const InputAssignment& x,
                 std::vector<int>& out) {
  const std::size_t slot = out.size();
  out.push_back(0);
  int value;
  if (n.is_leaf()) {
    value = x.at(n.var);
  } else {
    int product = 1;
    for (const auto& c : n.children) product *= eval_collect(c, x, out);
    value = 1 - product;
  }
  out[slot] = value;
  return value;
}

}  // namespace

int evaluate_classical(const FormulaAst& ast, const InputAssignment& x) {
  if (x.size() < ast.num_vars()) {
    throw DimensionError("input has " + std::to_string(x.size()) +
                         " bits, formula needs " +
                         std::to_string(ast.num_vars()));
  }
  return eval_node(ast.root(), x);
}

std::vector<int> evaluate_all(const FormulaAst& ast, const InputAssignment& x) {
  if (x.size() < ast.num_vars()) {
    throw DimensionError("input has " + std::to_string(x.size()) +
                         " bits, formula needs " +
                         std::to_string(ast.num_vars()));
  }
  std::vector<int> out;
  out.reserve(2 * ast.size());
  eval_collect(ast.root(), x, out);
  return out;
}

// ---------------------------------------------------------------------------
// Statistics

namespace {

struct PathSums {
  std::size_t size;
  double inv_sum;  // max over paths of sum s^(-2 beta)
  double sum;      // max over paths of sum s
};

PathSums path_sums(const NandNode& n, double exponent,
                   std::vector<std::size_t>* sizes) {
  std::size_t slot = 0;
  if (sizes) {
    slot = sizes->size();
    sizes->push_back(0);
  }
  if (n.is_leaf()) {
    if (sizes) (*sizes)[slot] = 1;
    return {1, 1.0, 1.0};
  }
  PathSums out{0, 0.0, 0.0};
  for (const auto& c : n.children) {
    PathSums cs = path_sums(c, exponent, sizes);
    out.size += cs.size;
    out.inv_sum = std::max(out.inv_sum, cs.inv_sum);
    out.sum = std::max(out.sum, cs.sum);
  }
  const double s = static_cast<double>(out.size);
  out.inv_sum += std::pow(s, -exponent);
  out.sum += s;
  if (sizes) (*sizes)[slot] = out.size;
  return out;
}

}  // namespace

FormulaStats compute_stats(const FormulaAst& ast) {
  FormulaStats st;
  st.subformula_sizes.reserve(2 * ast.size());
  PathSums ps = path_sums(ast.root(), 0.5, &st.subformula_sizes);
  st.leaf_count = ps.size;
  st.depth = ast.depth();
  st.sigma_minus = ps.inv_sum;
  st.sigma_plus = ps.sum;
  st.approx_balanced =
      st.sigma_minus <= 4.0 && st.sigma_plus <= 4.0 * static_cast<double>(ps.size);
  st.perfectly_balanced = is_perfectly_balanced(ast);
  return st;
}

double sigma_minus_beta(const FormulaAst& ast, double beta) {
  return path_sums(ast.root(), 2.0 * beta, nullptr).inv_sum;
}

// ---------------------------------------------------------------------------
// Fan-in expansion

namespace {

NandNode wrap_not(NandNode n) {
  std::vector<NandNode> one;
  one.push_back(std::move(n));
  return NandNode::nand(std::move(one));
}

// AND of a group, as NAND(NAND(group)); a single-element group is itself.
NandNode and_of(std::vector<NandNode> group) {
  if (group.size() == 1) return std::move(group.front());
  return wrap_not(NandNode::nand(std::move(group)));
}

NandNode expand_node(const NandNode& n, std::size_t max_fanin) {
  if (n.is_leaf()) return n;
  std::vector<NandNode> kids;
  kids.reserve(n.children.size());
  for (const auto& c : n.children) kids.push_back(expand_node(c, max_fanin));
  // Pair children left to right into AND blocks until the gate fits.
  while (kids.size() > max_fanin) {
    std::vector<NandNode> next;
    for (std::size_t i = 0; i < kids.size(); i += max_fanin) {
      std::vector<NandNode> group;
      for (std::size_t j = i; j < std::min(i + max_fanin, kids.size()); ++j) {
        group.push_back(std::move(kids[j]));
      }
      next.push_back(and_of(std::move(group)));
    }
    kids = std::move(next);
  }
  return NandNode::nand(std::move(kids));
}

}  // namespace

FormulaAst expand_fanin(const FormulaAst& ast, std::size_t max_fanin) {
  if (max_fanin < 2) throw std::invalid_argument("max_fanin must be >= 2");
  if (ast.max_fanin() <= max_fanin) return ast;
  return FormulaAst(expand_node(ast.root(), max_fanin), ast.num_vars());
}

// ---------------------------------------------------------------------------
// Rebalancing
//
// Splitting at a separator y (a subformula holding between 1/3 and 2/3 of the
// leaves) rewrites phi as the multiplexer (y AND phi[y:=1]) OR (NOT y AND
// phi[y:=0]). Each split costs three levels of depth and shrinks every piece
// to at most 2/3 of the leaves. Splits are only made while a subformula
// exceeds its depth budget, so a generous budget keeps the size near N.

namespace {

// A NAND node or a Boolean constant produced by substitution.
struct Partial {
  std::optional<int> constant;
  NandNode node;

  static Partial of(int c) { return {c, {}}; }
  static Partial of(NandNode n) { return {std::nullopt, std::move(n)}; }
};

// NAND over non-constant children, collapsing NOT(NOT(y)) to y.
NandNode make_nand(std::vector<NandNode> kids) {
  if (kids.size() == 1 && kids.front().children.size() == 1) {
    return std::move(kids.front().children.front());
  }
  return NandNode::nand(std::move(kids));
}

NandNode make_not(NandNode n) {
  std::vector<NandNode> one;
  one.push_back(std::move(n));
  return make_nand(std::move(one));
}

Partial nand_partial(std::vector<Partial> parts) {
  std::vector<NandNode> kids;
  for (auto& p : parts) {
    if (p.constant) {
      if (*p.constant == 0) return Partial::of(1);
      continue;  // NAND(1, rest) = NAND(rest)
    }
    kids.push_back(std::move(p.node));
  }
  if (kids.empty()) return Partial::of(0);
  return Partial::of(make_nand(std::move(kids)));
}

NandNode collapse_not_pairs(const NandNode& n) {
  if (n.is_leaf()) return n;
  std::vector<NandNode> kids;
  kids.reserve(n.children.size());
  for (const auto& c : n.children) kids.push_back(collapse_not_pairs(c));
  return make_nand(std::move(kids));
}

Partial substitute(const NandNode& n, const std::vector<std::size_t>& path,
                   std::size_t at, int value) {
  if (at == path.size()) return Partial::of(value);
  std::vector<Partial> parts;
  parts.reserve(n.children.size());
  for (std::size_t i = 0; i < n.children.size(); ++i) {
    if (i == path[at]) {
      parts.push_back(substitute(n.children[i], path, at + 1, value));
    } else {
      parts.push_back(Partial::of(n.children[i]));
    }
  }
  return nand_partial(std::move(parts));
}

std::size_t node_depth(const NandNode& n) {
  std::size_t d = 0;
  for (const auto& c : n.children) d = std::max(d, node_depth(c) + 1);
  return d;
}

std::size_t node_size(const NandNode& n) {
  if (n.is_leaf()) return 1;
  std::size_t s = 0;
  for (const auto& c : n.children) s += node_size(c);
  return s;
}

// Path (child indices) to a subformula with size in [N/3, 2N/3].
std::vector<std::size_t> find_separator(const NandNode& root) {
  const std::size_t total = node_size(root);
  std::vector<std::size_t> path;
  const NandNode* cur = &root;
  while (!cur->is_leaf() && (path.empty() || 3 * node_size(*cur) > 2 * total)) {
    std::size_t best = 0, best_size = 0;
    for (std::size_t i = 0; i < cur->children.size(); ++i) {
      std::size_t s = node_size(cur->children[i]);
      if (s > best_size) {
        best = i;
        best_size = s;
      }
    }
    path.push_back(best);
    cur = &cur->children[best];
  }
  return path;
}

const NandNode& follow(const NandNode& root, const std::vector<std::size_t>& path) {
  const NandNode* cur = &root;
  for (auto i : path) cur = &cur->children[i];
  return *cur;
}

NandNode restructure(const NandNode& n, long budget);

Partial restructure_partial(Partial p, long budget) {
  if (p.constant) return p;
  return Partial::of(restructure(p.node, budget));
}

// (y AND a) OR (NOT y AND b), with constant arms folded away.
NandNode multiplex(NandNode y, Partial a, Partial b) {
  if (a.constant && b.constant) {
    if (*a.constant == 1 && *b.constant == 0) return y;
    if (*a.constant == 0 && *b.constant == 1) return make_not(std::move(y));
    throw std::logic_error("rebalance produced a constant formula");
  }
  std::vector<NandNode> kids;
  if (a.constant) {
    if (*a.constant == 1) {  // y OR b
      kids.push_back(make_not(std::move(y)));
      kids.push_back(make_not(std::move(b.node)));
      return make_nand(std::move(kids));
    }
    // NOT y AND b
    kids.push_back(make_not(std::move(y)));
    kids.push_back(std::move(b.node));
    return make_not(make_nand(std::move(kids)));
  }
  if (b.constant) {
    if (*b.constant == 1) {  // NOT y OR a
      kids.push_back(std::move(y));
      kids.push_back(make_not(std::move(a.node)));
      return make_nand(std::move(kids));
    }
    // y AND a
    kids.push_back(std::move(y));
    kids.push_back(std::move(a.node));
    return make_not(make_nand(std::move(kids)));
  }
  std::vector<NandNode> left, right;
  left.push_back(y);
  left.push_back(std::move(a.node));
  right.push_back(make_not(std::move(y)));
  right.push_back(std::move(b.node));
  kids.push_back(make_nand(std::move(left)));
  kids.push_back(make_nand(std::move(right)));
  return make_nand(std::move(kids));
}

NandNode restructure(const NandNode& n, long budget) {
  if (static_cast<long>(node_depth(n)) <= budget || node_size(n) < 2) return n;
  const auto path = find_separator(n);
  NandNode y = restructure(follow(n, path), budget - 3);
  Partial a = restructure_partial(substitute(n, path, 0, 1), budget - 2);
  Partial b = restructure_partial(substitute(n, path, 0, 0), budget - 2);
  return multiplex(std::move(y), std::move(a), std::move(b));
}

}  // namespace

// log2 N is clamped at N = 2 so a lone leaf under a NOT still fits.
double rebalance_depth_bound(std::size_t n, int k) {
  return 9.0 * std::numbers::ln2 * k * std::log2(static_cast<double>(std::max<std::size_t>(n, 2)));
}

double rebalance_size_bound(std::size_t n, int k) {
  return std::pow(static_cast<double>(n), 1.0 + 1.0 / std::log2(static_cast<double>(k)));
}

FormulaAst rebalance_to_depth(const FormulaAst& ast, std::size_t budget) {
  NandNode binary = collapse_not_pairs(expand_fanin(ast, 2).root());
  return FormulaAst(restructure(binary, static_cast<long>(budget)), ast.num_vars());
}

FormulaAst rebalance(const FormulaAst& ast, int k) {
  if (k < 2) throw std::invalid_argument("rebalance parameter k must be >= 2");
  const double depth_bound = rebalance_depth_bound(ast.size(), k);
  FormulaAst out =
      rebalance_to_depth(ast, static_cast<std::size_t>(std::floor(depth_bound)));
  if (static_cast<double>(out.depth()) > depth_bound + 1e-9) {
    throw std::logic_error("rebalance: depth " + std::to_string(out.depth()) +
                           " exceeds bound");
  }
  if (static_cast<double>(out.size()) > rebalance_size_bound(ast.size(), k) + 1e-9) {
    throw std::logic_error("rebalance: size " + std::to_string(out.size()) +
                           " exceeds bound");
  }
  if (out.max_fanin() > 2) throw std::logic_error("rebalance: fan-in above two");
  return out;
}

// ---------------------------------------------------------------------------
// Generators

FamilySpec FamilySpec::parse(std::string_view text, std::uint64_t seed) {
  const auto colon = text.find(':');
  if (colon == std::string_view::npos) {
    throw std::invalid_argument("family must look like NAME:PARAM");
  }
  std::string_view name = text.substr(0, colon);
  std::string param(text.substr(colon + 1));
  FamilySpec spec;
  spec.seed = seed;
  if (name == "balanced") {
    spec.family = Family::kBalanced;
  } else if (name == "chain") {
    spec.family = Family::kChain;
  } else if (name == "random") {
    spec.family = Family::kRandom;
  } else {
    throw std::invalid_argument("unknown family '" + std::string(name) + "'");
  }
  std::size_t used = 0;
  unsigned long long v = 0;
  try {
    v = std::stoull(param, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (param.empty() || used != param.size() || param[0] == '-') {
    throw std::invalid_argument("family parameter must be a non-negative integer");
  }
  spec.param = static_cast<std::size_t>(v);
  return spec;
}

std::string FamilySpec::to_string() const {
  switch (family) {
    case Family::kBalanced:
      return "balanced:" + std::to_string(param);
    case Family::kChain:
      return "chain:" + std::to_string(param);
    case Family::kRandom:
      return "random:" + std::to_string(param);
  }
  return "?";
}

namespace {

NandNode balanced_node(std::size_t n, std::uint32_t& next_var) {
  if (n == 0) return NandNode::leaf(next_var++);
  std::vector<NandNode> kids;
  kids.push_back(balanced_node(n - 1, next_var));
  kids.push_back(balanced_node(n - 1, next_var));
  return NandNode::nand(std::move(kids));
}

NandNode random_node(std::size_t n, bool under_not, Rng& rng,
                     std::uint32_t& next_var) {
  // NOT gates appear with probability 1/4, never two in a row.
  if (!under_not && rng.below(4) == 0) {
    std::vector<NandNode> one;
    one.push_back(random_node(n, true, rng, next_var));
    return NandNode::nand(std::move(one));
  }
  if (n == 1) return NandNode::leaf(next_var++);
  const std::size_t left = 1 + static_cast<std::size_t>(rng.below(n - 1));
  std::vector<NandNode> kids;
  kids.push_back(random_node(left, false, rng, next_var));
  kids.push_back(random_node(n - left, false, rng, next_var));
  return NandNode::nand(std::move(kids));
}

}  // namespace

FormulaAst balanced(std::size_t n) {
  if (n >= 31) throw SizeError("balanced depth too large");
  std::uint32_t next = 1;
  return FormulaAst(balanced_node(n, next));
}

FormulaAst chain(std::size_t n_leaves) {
  if (n_leaves == 0) throw std::invalid_argument("chain needs at least one leaf");
  auto index = static_cast<std::uint32_t>(n_leaves);
  NandNode acc = NandNode::leaf(index);
  for (std::uint32_t i = index - 1; i >= 1; --i) {
    std::vector<NandNode> kids;
    kids.push_back(NandNode::leaf(i));
    kids.push_back(std::move(acc));
    acc = NandNode::nand(std::move(kids));
  }
  return FormulaAst(std::move(acc));
}

FormulaAst random_formula(std::size_t n_leaves, std::uint64_t seed) {
  if (n_leaves == 0) throw std::invalid_argument("random formula needs a leaf");
  Rng rng(seed);
  std::uint32_t next = 1;
  return FormulaAst(random_node(n_leaves, false, rng, next));
}

FormulaAst generate(const FamilySpec& spec, std::size_t max_leaves) {
  std::size_t leaves = spec.param;
  if (spec.family == Family::kBalanced) {
    if (spec.param >= 63 || (std::size_t{1} << spec.param) > max_leaves) {
      throw SizeError("balanced:" + std::to_string(spec.param) +
                      " exceeds the configured leaf limit");
    }
    return balanced(spec.param);
  }
  if (leaves == 0) throw std::invalid_argument("family needs N >= 1");
  if (leaves > max_leaves) {
    throw SizeError(spec.to_string() + " exceeds the configured leaf limit");
  }
  if (spec.family == Family::kChain) return chain(leaves);
  return random_formula(leaves, spec.seed);
}

namespace {

bool balanced_at(const NandNode& n, std::size_t depth, std::size_t& leaf_depth,
                 bool& seen) {
  if (n.is_leaf()) {
    if (!seen) {
      seen = true;
      leaf_depth = depth;
    }
    return leaf_depth == depth;
  }
  if (n.children.size() != 2) return false;
  return balanced_at(n.children[0], depth + 1, leaf_depth, seen) &&
         balanced_at(n.children[1], depth + 1, leaf_depth, seen);
}

}  // namespace

bool is_perfectly_balanced(const FormulaAst& ast) {
  std::size_t leaf_depth = 0;
  bool seen = false;
  return balanced_at(ast.root(), 0, leaf_depth, seen);
}

}  // namespace nandwalk
