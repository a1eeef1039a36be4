#pragma once

#include <memory>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace maxreal::ltl {

enum class Op {
  True,
  False,
  Atom,
  Not,
  And,
  Or,
  Implies,
  Next,
  Finally,
  Globally,
  Until,
  Release,
};

class Node;
using Formula = std::shared_ptr<const Node>;

/// Immutable LTL syntax tree node. Build through the factory functions
/// below; shared freely across threads.
class Node {
public:
  Op op;
  std::string atom;  // nonempty iff op == Atom
  Formula lhs;       // unary operand or left operand
  Formula rhs;

  Node(Op op, std::string atom, Formula lhs, Formula rhs)
      : op(op), atom(std::move(atom)), lhs(std::move(lhs)), rhs(std::move(rhs)) {}
};

Formula f_true();
Formula f_false();
Formula f_atom(const std::string& name);
Formula f_not(Formula a);
Formula f_and(Formula a, Formula b);
Formula f_or(Formula a, Formula b);
Formula f_implies(Formula a, Formula b);
Formula f_next(Formula a);
Formula f_finally(Formula a);
Formula f_globally(Formula a);
Formula f_until(Formula a, Formula b);
Formula f_release(Formula a, Formula b);

/// Conjunction / disjunction of a list; empty list gives true / false.
Formula f_and_all(const std::vector<Formula>& fs);
Formula f_or_all(const std::vector<Formula>& fs);

bool equal(const Formula& a, const Formula& b);
/// Total structural order, usable as a comparator for std::set/map.
int compare(const Formula& a, const Formula& b);

struct FormulaLess {
  bool operator()(const Formula& a, const Formula& b) const { return compare(a, b) < 0; }
};
using FormulaSet = std::set<Formula, FormulaLess>;

std::string to_string(const Formula& f);

struct ParseError : std::runtime_error {
  int line, column;
  ParseError(const std::string& msg, int line, int column)
      : std::runtime_error(msg), line(line), column(column) {}
};

/// Parses the concrete LTL grammar (see README). Throws ParseError.
Formula parse(const std::string& text);

Formula to_nnf(const Formula& f);
bool is_nnf(const Formula& f);

/// True iff the NNF of f contains neither U nor F.
bool is_syntactically_safe(const Formula& f);

struct NotSafetyShape : std::runtime_error {
  explicit NotSafetyShape(const std::string& msg) : std::runtime_error(msg) {}
};

/// For f = G psi with psi syntactically safe, returns (G psi, FG psi, GF psi).
std::vector<Formula> relax_vector(const Formula& f);

FormulaSet subformulas(const Formula& f);
/// Number of operators in f (atoms and constants count 0).
int size(const Formula& f);

std::set<std::string> atoms(const Formula& f);

enum class WeightScheme { Default, General, PriorityOrdered, PriorityStrict, User };

struct SoftSpec {
  Formula formula;
  std::vector<Formula> relax_chain;  // strongest first; front() == formula
  std::vector<long long> user_weights;  // per level, used by WeightScheme::User

  /// Builds a soft spec with the default (G, FG, GF) chain.
  static SoftSpec with_default_chain(const Formula& g_psi);
};

struct SpecProblem {
  std::vector<std::string> inputs;
  std::vector<std::string> outputs;
  Formula hard;  // conjunction of all hard lines, in file order
  std::vector<SoftSpec> soft;
  WeightScheme scheme = WeightScheme::Default;

  /// Throws std::runtime_error if atom scoping or I/O disjointness fails.
  void validate() const;
};

}  // namespace maxreal::ltl
