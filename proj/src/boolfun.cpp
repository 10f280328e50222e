#include "advspan/boolfun.hpp"

#include <algorithm>
#include <bit>
#include <cctype>
#include <charconv>
#include <functional>

#include "advspan/error.hpp"

namespace advspan {

BooleanFunction::BooleanFunction(std::vector<std::uint8_t> table) : table_(std::move(table)) {
  const std::size_t len = table_.size();
  int n = 0;
  while ((std::size_t{1} << n) < len) ++n;
  if (len < 2 || (std::size_t{1} << n) != len || n > kMaxArity) {
    throw Error(Errc::BadSpec, "truth table length " + std::to_string(len) +
                                   " is not 2^n with 1 <= n <= " + std::to_string(kMaxArity));
  }
  n_ = n;
  for (std::uint32_t s = 0; s < len; ++s) {
    if (table_[s] > 1) throw Error(Errc::BadSpec, "truth table entries must be 0 or 1");
    (table_[s] ? f1_ : f0_).push_back(s);
  }
}

std::string BooleanFunction::bitstring() const {
  std::string out;
  out.reserve(table_.size());
  for (auto b : table_) out.push_back(b ? '1' : '0');
  return out;
}

std::uint32_t BooleanFunction::packed() const {
  if (n_ > kMaxFormulaArity) throw Error(Errc::ArityTooLarge, "packed table needs n <= 4");
  std::uint32_t t = 0;
  for (std::uint32_t s = 0; s < size(); ++s)
    if (table_[s]) t |= 1u << s;
  return t;
}

namespace {

BooleanFunction from_predicate(int n, const std::function<bool(std::uint32_t)>& pred) {
  if (n < 1 || n > kMaxArity) {
    throw Error(Errc::BadSpec, "arity " + std::to_string(n) + " outside 1.." + std::to_string(kMaxArity));
  }
  std::vector<std::uint8_t> table(std::size_t{1} << n);
  for (std::uint32_t s = 0; s < table.size(); ++s) table[s] = pred(s) ? 1 : 0;
  return BooleanFunction(std::move(table));
}

}  // namespace

BooleanFunction load_function(std::string_view spec) {
  const auto colon = spec.find(':');
  if (colon != std::string_view::npos) {
    const std::string_view name = spec.substr(0, colon);
    const std::string_view arg = spec.substr(colon + 1);
    int n = 0;
    const auto [ptr, ec] = std::from_chars(arg.data(), arg.data() + arg.size(), n);
    if (ec != std::errc() || ptr != arg.data() + arg.size()) {
      throw Error(Errc::BadSpec, "bad arity in '" + std::string(spec) + "'");
    }
    const auto weight = [](std::uint32_t s) { return std::popcount(s); };
    if (name == "OR") return from_predicate(n, [](std::uint32_t s) { return s != 0; });
    if (name == "AND") {
      return from_predicate(n, [n](std::uint32_t s) { return s == (1u << n) - 1; });
    }
    if (name == "PARITY") {
      return from_predicate(n, [&](std::uint32_t s) { return weight(s) % 2 == 1; });
    }
    if (name == "MAJ") return from_predicate(n, [&](std::uint32_t s) { return 2 * weight(s) > n; });
    throw Error(Errc::BadSpec, "unknown function '" + std::string(name) + "'");
  }
  std::vector<std::uint8_t> table;
  table.reserve(spec.size());
  for (char c : spec) {
    if (c != '0' && c != '1') throw Error(Errc::BadSpec, "bad character in '" + std::string(spec) + "'");
    table.push_back(c == '1' ? 1 : 0);
  }
  return BooleanFunction(std::move(table));
}

std::vector<BooleanFunction> all_functions(int n) {
  if (n < 1 || n > kMaxFormulaArity) throw Error(Errc::ArityTooLarge, "all_functions needs n <= 4");
  const std::uint32_t len = 1u << n;
  const std::uint64_t count = std::uint64_t{1} << len;
  std::vector<BooleanFunction> out;
  out.reserve(count);
  for (std::uint64_t t = 0; t < count; ++t) {
    std::vector<std::uint8_t> table(len);
    for (std::uint32_t s = 0; s < len; ++s) table[s] = (t >> s) & 1u;
    out.emplace_back(std::move(table));
  }
  return out;
}

Eigen::MatrixXd difference_matrix(int n, int i) {
  if (i < 1 || i > n) {
    throw Error(Errc::IndexOutOfRange, "coordinate " + std::to_string(i) + " outside 1.." + std::to_string(n));
  }
  const Eigen::Index len = Eigen::Index{1} << n;
  const std::uint32_t mask = 1u << (n - i);
  Eigen::MatrixXd d(len, len);
  for (Eigen::Index x = 0; x < len; ++x)
    for (Eigen::Index y = 0; y < len; ++y) d(x, y) = ((x ^ y) & mask) ? 1.0 : 0.0;
  return d;
}

Eigen::MatrixXd difference_matrix(const BooleanFunction& f, int i) {
  return difference_matrix(f.arity(), i);
}

// ---------------------------------------------------------------------------
// Formulas

Formula Formula::literal(int var, bool negated) {
  Formula f;
  f.kind = negated ? Kind::NegLiteral : Kind::Literal;
  f.var = var;
  return f;
}

Formula Formula::conj(Formula a, Formula b) {
  Formula f;
  f.kind = Kind::And;
  f.var = 0;
  f.children.push_back(std::move(a));
  f.children.push_back(std::move(b));
  return f;
}

Formula Formula::disj(Formula a, Formula b) {
  Formula f = conj(std::move(a), std::move(b));
  f.kind = Kind::Or;
  return f;
}

int Formula::leaves() const {
  if (children.empty()) return 1;
  return children[0].leaves() + children[1].leaves();
}

int Formula::max_var() const {
  if (children.empty()) return var;
  return std::max(children[0].max_var(), children[1].max_var());
}

bool Formula::evaluate(std::uint32_t s, int n) const {
  switch (kind) {
    case Kind::Literal: return (s >> (n - var)) & 1u;
    case Kind::NegLiteral: return !((s >> (n - var)) & 1u);
    case Kind::And: return children[0].evaluate(s, n) && children[1].evaluate(s, n);
    case Kind::Or: return children[0].evaluate(s, n) || children[1].evaluate(s, n);
  }
  return false;
}

BooleanFunction Formula::truth_table(int n) const {
  if (max_var() > n) throw Error(Errc::FormulaMismatch, "formula uses x" + std::to_string(max_var()));
  std::vector<std::uint8_t> table(std::size_t{1} << n);
  for (std::uint32_t s = 0; s < table.size(); ++s) table[s] = evaluate(s, n) ? 1 : 0;
  return BooleanFunction(std::move(table));
}

std::string Formula::to_string() const {
  switch (kind) {
    case Kind::Literal: return "x" + std::to_string(var);
    case Kind::NegLiteral: return "(NOT x" + std::to_string(var) + ")";
    case Kind::And:
      return "(AND " + children[0].to_string() + " " + children[1].to_string() + ")";
    case Kind::Or:
      return "(OR " + children[0].to_string() + " " + children[1].to_string() + ")";
  }
  return {};
}

namespace {

class FormulaParser {
 public:
  explicit FormulaParser(std::string_view text) : text_(text) {}

  Formula parse_all() {
    Formula f = parse_expr();
    skip_space();
    if (pos_ != text_.size()) fail("trailing input");
    return f;
  }

 private:
  [[noreturn]] void fail(const std::string& what) const {
    throw Error(Errc::BadSpec, "formula: " + what + " at offset " + std::to_string(pos_));
  }

  void skip_space() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  std::string_view word() {
    skip_space();
    const std::size_t start = pos_;
    while (pos_ < text_.size() && std::isalnum(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    if (start == pos_) fail("expected a word");
    return text_.substr(start, pos_ - start);
  }

  void expect(char c) {
    skip_space();
    if (pos_ >= text_.size() || text_[pos_] != c) fail(std::string("expected '") + c + "'");
    ++pos_;
  }

  int variable(std::string_view w) {
    int v = 0;
    if (w.size() < 2 || w[0] != 'x') fail("expected a variable");
    const auto [ptr, ec] = std::from_chars(w.data() + 1, w.data() + w.size(), v);
    if (ec != std::errc() || ptr != w.data() + w.size() || v < 1) fail("bad variable");
    return v;
  }

  Formula parse_expr() {
    skip_space();
    if (pos_ < text_.size() && text_[pos_] == '(') {
      ++pos_;
      const std::string_view op = word();
      Formula out;
      if (op == "NOT") {
        out = Formula::literal(variable(word()), true);
      } else if (op == "AND" || op == "OR") {
        Formula a = parse_expr();
        Formula b = parse_expr();
        out = op == "AND" ? Formula::conj(std::move(a), std::move(b))
                          : Formula::disj(std::move(a), std::move(b));
      } else {
        fail("unknown operator");
      }
      expect(')');
      return out;
    }
    return Formula::literal(variable(word()));
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

// Bottom-up enumeration of minimal formulas keyed by packed truth table.
class FormulaSynthesis {
 public:
  FormulaSynthesis(int n, int max_leaves, std::optional<std::uint32_t> target)
      : len_(1u << n), cost_(std::size_t{1} << len_, 0), back_(cost_.size()) {
    levels_.resize(max_leaves + 1);
    for (int i = 1; i <= n; ++i) {
      std::uint32_t t = 0;
      for (std::uint32_t s = 0; s < len_; ++s)
        if ((s >> (n - i)) & 1u) t |= 1u << s;
      add(t, 1, {Op::Leaf, static_cast<std::uint32_t>(i), 0});
      add(~t & mask(), 1, {Op::NegLeaf, static_cast<std::uint32_t>(i), 0});
    }
    if (target && cost_[*target]) return;
    for (int l = 2; l <= max_leaves; ++l) {
      for (int a = 1; a <= l / 2; ++a) {
        const int b = l - a;
        // add() only appends to levels_[l]; a, b < l stay untouched.
        const auto& la = levels_[a];
        const auto& lb = levels_[b];
        for (std::size_t i = 0; i < la.size(); ++i) {
          for (std::size_t j = (a == b ? i : 0); j < lb.size(); ++j) {
            add(la[i] & lb[j], l, {Op::And, la[i], lb[j]});
            add(la[i] | lb[j], l, {Op::Or, la[i], lb[j]});
          }
        }
      }
      if (target && cost_[*target]) return;
    }
  }

  int cost(std::uint32_t t) const { return cost_[t]; }

  Formula build(std::uint32_t t) const {
    const Back& b = back_[t];
    switch (b.op) {
      case Op::Leaf: return Formula::literal(static_cast<int>(b.a));
      case Op::NegLeaf: return Formula::literal(static_cast<int>(b.a), true);
      case Op::And: return Formula::conj(build(b.a), build(b.b));
      case Op::Or: return Formula::disj(build(b.a), build(b.b));
    }
    return {};
  }

 private:
  enum class Op : std::uint8_t { Leaf, NegLeaf, And, Or };
  struct Back {
    Op op;
    std::uint32_t a, b;
  };

  std::uint32_t mask() const { return len_ == 32 ? ~0u : (1u << len_) - 1; }

  void add(std::uint32_t t, int l, Back b) {
    if (cost_[t]) return;
    cost_[t] = static_cast<std::uint8_t>(l);
    back_[t] = b;
    levels_[l].push_back(t);
  }

  std::uint32_t len_;
  std::vector<std::uint8_t> cost_;
  std::vector<Back> back_;
  std::vector<std::vector<std::uint32_t>> levels_;
};

void check_formula_args(int n, int max_leaves) {
  if (n > kMaxFormulaArity) {
    throw Error(Errc::ArityTooLarge, "formula_size supports n <= " + std::to_string(kMaxFormulaArity));
  }
  if (max_leaves > kMaxFormulaLeaves) {
    throw Error(Errc::ArityTooLarge, "formula_size supports at most " +
                                         std::to_string(kMaxFormulaLeaves) + " leaves");
  }
}

}  // namespace

Formula Formula::parse(std::string_view text) { return FormulaParser(text).parse_all(); }

std::optional<FormulaSize> formula_size(const BooleanFunction& f, int max_leaves) {
  check_formula_args(f.arity(), max_leaves);
  const std::uint32_t target = f.packed();
  FormulaSynthesis synth(f.arity(), max_leaves, target);
  if (!synth.cost(target)) return std::nullopt;
  return FormulaSize{synth.cost(target), synth.build(target)};
}

std::vector<int> formula_size_table(int n, int max_leaves) {
  check_formula_args(n, max_leaves);
  FormulaSynthesis synth(n, max_leaves, std::nullopt);
  std::vector<int> out(std::size_t{1} << (1u << n));
  for (std::uint32_t t = 0; t < out.size(); ++t) out[t] = synth.cost(t);
  return out;
}

// ---------------------------------------------------------------------------
// Karchmer-Wigderson rectangles

namespace {

void kw_split(const Formula& node, int n, std::vector<std::uint32_t> zeros,
              std::vector<std::uint32_t> ones, std::vector<Rectangle>& out) {
  if (node.children.empty()) {
    out.push_back({std::move(zeros), std::move(ones), node.var});
    return;
  }
  const Formula& left = node.children[0];
  const Formula& right = node.children[1];
  if (node.kind == Formula::Kind::And) {
    // Every zero of an AND is a zero of some child.
    std::vector<std::uint32_t> zl, zr;
    for (auto x : zeros) (!left.evaluate(x, n) ? zl : zr).push_back(x);
    kw_split(left, n, std::move(zl), ones, out);
    kw_split(right, n, std::move(zr), std::move(ones), out);
  } else {
    std::vector<std::uint32_t> ol, orr;
    for (auto y : ones) (left.evaluate(y, n) ? ol : orr).push_back(y);
    kw_split(left, n, zeros, std::move(ol), out);
    kw_split(right, n, std::move(zeros), std::move(orr), out);
  }
}

}  // namespace

RectanglePartition kw_partition(const Formula& formula, const BooleanFunction& f) {
  if (formula.max_var() > f.arity() || formula.truth_table(f.arity()) != f) {
    throw Error(Errc::FormulaMismatch, formula.to_string() + " does not compute " + f.bitstring());
  }
  RectanglePartition p;
  kw_split(formula, f.arity(), f.zeros(), f.ones(), p.rectangles);
  return p;
}

bool is_valid_partition(const RectanglePartition& p, const BooleanFunction& f) {
  const std::uint32_t len = f.size();
  std::vector<int> hits(std::size_t{len} * len, 0);
  for (const auto& r : p.rectangles) {
    if (r.color < 1 || r.color > f.arity()) return false;
    for (auto x : r.zeros) {
      if (f(x)) return false;
      for (auto y : r.ones) {
        if (!f(y) || f.bit(x, r.color) == f.bit(y, r.color)) return false;
        ++hits[std::size_t{x} * len + y];
      }
    }
  }
  for (auto x : f.zeros())
    for (auto y : f.ones())
      if (hits[std::size_t{x} * len + y] != 1) return false;
  return true;
}

Eigen::MatrixXd restrict_to_rectangle(const Eigen::MatrixXd& a, const Rectangle& r,
                                      const BooleanFunction& f) {
  const auto& f0 = f.zeros();
  const auto& f1 = f.ones();
  if (a.rows() != static_cast<Eigen::Index>(f0.size()) || a.cols() != static_cast<Eigen::Index>(f1.size())) {
    throw Error(Errc::DimensionMismatch, "matrix must be |F0| x |F1|");
  }
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(a.rows(), a.cols());
  for (auto x : r.zeros) {
    const auto i = std::lower_bound(f0.begin(), f0.end(), x) - f0.begin();
    for (auto y : r.ones) {
      const auto j = std::lower_bound(f1.begin(), f1.end(), y) - f1.begin();
      out(i, j) = a(i, j);
    }
  }
  return out;
}

}  // namespace advspan
