#pragma once

#include <iosfwd>
#include <limits>
#include <string>
#include <vector>

#include "aadp/linalg.hpp"

namespace aadp::lp {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

enum class Sense { Min, Max };
enum class RowSense { LE, EQ, GE };
enum class SolveStatus { Optimal, Infeasible, Unbounded, NumericalFailure };

const char* to_string(SolveStatus s);

/// Dense LP: optimize c'x subject to A x {<=,=,>=} b and lower <= x <= upper.
/// Default variable bounds are [0, +inf).
struct DenseLp {
  Sense sense = Sense::Min;
  std::vector<double> objective;
  Matrix a;
  std::vector<RowSense> row_sense;
  std::vector<double> rhs;
  std::vector<double> lower;
  std::vector<double> upper;

  std::size_t num_rows() const { return rhs.size(); }
  std::size_t num_cols() const { return objective.size(); }

  static DenseLp make(Sense sense, std::size_t rows, std::size_t cols);

  /// Throws std::invalid_argument on inconsistent shapes, non-finite data,
  /// or bounds with lower > upper.
  void validate() const;
};

/// Row duals follow the Lagrangian convention for the *stated* sense:
/// in a Min problem duals of >= rows are >= 0 and duals of <= rows are <= 0;
/// in a Max problem the signs flip. Duals of slack rows are 0.
struct LpSolution {
  SolveStatus status = SolveStatus::NumericalFailure;
  std::vector<double> x;
  std::vector<double> duals;
  std::vector<double> reduced_costs;
  double objective = 0.0;
  int iterations = 0;
};

/// Relative residuals of a claimed optimal solution.
struct Residuals {
  double primal = 0.0;          // max row/bound violation / (1 + |rhs|)
  double dual = 0.0;            // max reduced-cost sign violation / (1 + |c|)
  double complementarity = 0.0; // max |dual * row slack| / (1 + |rhs|)
  double gap = 0.0;             // |primal obj - dual obj| / (1 + |primal obj|)
};

/// Two-phase revised simplex with bounded variables. Dantzig pricing with a
/// Bland's-rule fallback after 50 consecutive degenerate pivots. Deterministic
/// for identical input. Never returns a wrong answer: unrecoverable numerical
/// trouble is reported as SolveStatus::NumericalFailure.
LpSolution solve(const DenseLp& lp);

Residuals residuals(const DenseLp& lp, const LpSolution& sol);

/// Writes the LP in CPLEX-style text format (line layout documented in
/// docs/formats.md; output is deterministic for identical input).
void write_lp_format(const DenseLp& lp, std::ostream& os);
std::string to_lp_format(const DenseLp& lp);

}  // namespace aadp::lp
