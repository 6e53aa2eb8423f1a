#pragma once

#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

#include "cetm/matrix.hpp"

namespace cetm::fracprog {

// maximize c.x  subject to  A x <= b, x >= 0.
struct LpProblem {
    std::vector<double> objective;
    Matrix constraint_matrix;  // m x n
    std::vector<double> rhs;   // m
};

enum class LpStatus { Optimal, Infeasible, Unbounded, MaxIterations };

struct LpResult {
    LpStatus status = LpStatus::Infeasible;
    std::vector<double> x;  // optimal vertex when status == Optimal
    double value = 0.0;
    int pivots = 0;
};

// maximize (c.x + alpha) / (d.x + beta)  subject to  A x <= b, x >= 0.
// The denominator must stay positive over the feasible set.
struct LfpProblem {
    std::vector<double> num_c;
    double num_alpha = 0.0;
    std::vector<double> den_d;
    double den_beta = 0.0;
    Matrix constraint_matrix;  // m x n
    std::vector<double> rhs;   // m
};

enum class LfpStatus { Optimal, Infeasible, Unbounded, NonpositiveDenominator, MaxIterations };

const char* to_string(LpStatus s);
const char* to_string(LfpStatus s);

struct LfpSolution {
    LfpStatus status = LfpStatus::Infeasible;
    std::vector<double> x;      // optimizer (a vertex of the feasible set)
    double value = 0.0;
    int iterations = 0;         // number of LP solves performed
    std::vector<double> trace;  // objective ratio after each LP solve; non-decreasing
    std::vector<std::vector<double>> vertex_trace;  // vertex visited at each iteration
};

struct LfpOptions {
    int max_iterations = 1000;       // safety cap on LP solves
    double vertex_tolerance = 1e-9;  // componentwise test for x** == x*
};

struct ZeroDenominatorDirection : std::domain_error {
    ZeroDenominatorDirection()
        : std::domain_error("denominator direction is zero; the problem is a plain LP on c") {}
};

// Primal simplex, two phases, Bland's smallest-index rule in both. Slow but
// cycle-free, and it always lands on a vertex, which the fractional solver
// relies on. Degenerate ties resolve deterministically.
LpResult lp_solve(const LpProblem& p);

// Component of c orthogonal to d: the objective used to pick the starting
// vertex of the fractional iteration. Throws ZeroDenominatorDirection when
// d == 0.
std::vector<double> lfp_gamma(const LfpProblem& p);

// Bitran-Novaes vertex iteration: start from the gamma vertex, then repeat
// LPs with marginal objective c - L(x*) d until the vertex stops moving.
LfpSolution lfp_solve(const LfpProblem& p, const LfpOptions& options = {});

// Debug dump: one row per iteration with objective and vertex coordinates.
void write_trace_csv(const LfpSolution& s, std::ostream& out);
void write_trace_csv(const LfpSolution& s, const std::string& path);

}  // namespace cetm::fracprog
