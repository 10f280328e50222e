#pragma once

// Boolean functions on {0,1}^n as truth tables. Input strings are indexed by
// their integer value with x1 as the most significant bit.

#include <Eigen/Dense>

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace advspan {

inline constexpr int kMaxArity = 5;
inline constexpr int kMaxFormulaArity = 4;
inline constexpr int kMaxFormulaLeaves = 12;

class BooleanFunction {
 public:
  BooleanFunction() = default;
  /// `table[s]` is f(s). Throws BadSpec unless the length is 2^n, 1 <= n <= 5.
  explicit BooleanFunction(std::vector<std::uint8_t> table);

  int arity() const { return n_; }
  std::uint32_t size() const { return static_cast<std::uint32_t>(table_.size()); }
  bool operator()(std::uint32_t s) const { return table_[s] != 0; }
  const std::vector<std::uint8_t>& table() const { return table_; }

  /// Coordinate i (1-based) of s.
  int bit(std::uint32_t s, int i) const { return static_cast<int>((s >> (n_ - i)) & 1u); }

  const std::vector<std::uint32_t>& zeros() const { return f0_; }
  const std::vector<std::uint32_t>& ones() const { return f1_; }
  bool is_constant() const { return f0_.empty() || f1_.empty(); }

  /// Truth table as text, f(0) first.
  std::string bitstring() const;
  /// Truth table packed into an integer, bit s = f(s) (arity <= 4 only).
  std::uint32_t packed() const;

  friend bool operator==(const BooleanFunction&, const BooleanFunction&) = default;

 private:
  int n_ = 0;
  std::vector<std::uint8_t> table_;
  std::vector<std::uint32_t> f0_, f1_;
};

/// "OR:n", "AND:n", "PARITY:n", "MAJ:n" (strict majority) or a bitstring
/// of length 2^n.
BooleanFunction load_function(std::string_view spec);

/// Every function of the given arity, in order of packed truth table.
std::vector<BooleanFunction> all_functions(int n);

/// 2^n x 2^n 0/1 matrix with D(x,y) = 1 iff x_i != y_i.
Eigen::MatrixXd difference_matrix(int n, int i);
Eigen::MatrixXd difference_matrix(const BooleanFunction& f, int i);

struct Formula {
  enum class Kind { Literal, NegLiteral, And, Or };

  Kind kind = Kind::Literal;
  int var = 1;                    // literals only, 1-based
  std::vector<Formula> children;  // And / Or: exactly two

  static Formula literal(int var, bool negated = false);
  static Formula conj(Formula a, Formula b);
  static Formula disj(Formula a, Formula b);

  int leaves() const;
  int max_var() const;
  bool evaluate(std::uint32_t s, int n) const;
  BooleanFunction truth_table(int n) const;

  /// Prefix notation, e.g. (OR (AND x1 (NOT x2)) (AND (NOT x1) x2)).
  std::string to_string() const;
  static Formula parse(std::string_view text);
};

struct FormulaSize {
  int leaves;
  Formula formula;
};

/// Exact minimal De Morgan formula size, or nullopt when it exceeds
/// `max_leaves`. Throws ArityTooLarge for n > 4 or max_leaves > 12.
std::optional<FormulaSize> formula_size(const BooleanFunction& f,
                                        int max_leaves = kMaxFormulaLeaves);

/// Minimal leaf counts for all 2^(2^n) functions of arity n (0 marks
/// functions needing more than `max_leaves`), indexed by packed table.
std::vector<int> formula_size_table(int n, int max_leaves);

struct Rectangle {
  std::vector<std::uint32_t> zeros;  // subset of F0
  std::vector<std::uint32_t> ones;   // subset of F1
  int color;                         // coordinate i with x_i != y_i throughout
};

struct RectanglePartition {
  std::vector<Rectangle> rectangles;
};

/// Karchmer-Wigderson rectangles, one per leaf. Throws FormulaMismatch if
/// the formula does not compute f.
RectanglePartition kw_partition(const Formula& formula, const BooleanFunction& f);

/// Disjoint, covering F0 x F1, and monochromatic.
bool is_valid_partition(const RectanglePartition& p, const BooleanFunction& f);

/// Entries of the |F0| x |F1| matrix `a` outside the rectangle set to zero.
Eigen::MatrixXd restrict_to_rectangle(const Eigen::MatrixXd& a, const Rectangle& r,
                                      const BooleanFunction& f);

}  // namespace advspan
