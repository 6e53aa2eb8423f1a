#include "cetm/fracprog.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <ostream>

namespace cetm::fracprog {

namespace {

constexpr double kPivotTol = 1e-9;
constexpr int kPivotCap = 200000;

void validate_lp(const LpProblem& p) {
    const std::size_t m = p.constraint_matrix.rows();
    const std::size_t n = p.constraint_matrix.cols();
    if (m == 0 || n == 0)
        throw DimensionMismatch("lp_solve: constraint matrix must be at least 1x1");
    if (p.objective.size() != n)
        throw DimensionMismatch("lp_solve: objective length " + std::to_string(p.objective.size()) +
                                " does not match column count " + std::to_string(n));
    if (p.rhs.size() != m)
        throw DimensionMismatch("lp_solve: rhs length " + std::to_string(p.rhs.size()) +
                                " does not match row count " + std::to_string(m));
}

// Dense tableau with explicit slack and artificial columns.
// Column order: n structural, m slacks, then artificials, then rhs.
class Tableau {
public:
    Tableau(const Matrix& a, const std::vector<double>& b)
        : m_(static_cast<int>(a.rows())), n_(static_cast<int>(a.cols())) {
        for (int i = 0; i < m_; ++i)
            if (b[i] < 0.0) ++num_art_;
        width_ = n_ + m_ + num_art_ + 1;
        rows_.assign(static_cast<std::size_t>(m_ + 1) * width_, 0.0);
        basis_.resize(m_);

        int art = 0;
        for (int i = 0; i < m_; ++i) {
            double* r = row(i);
            const double sign = b[i] < 0.0 ? -1.0 : 1.0;
            for (int j = 0; j < n_; ++j) r[j] = sign * a(i, j);
            r[n_ + i] = sign;  // slack
            r[width_ - 1] = sign * b[i];
            if (b[i] < 0.0) {
                r[n_ + m_ + art] = 1.0;
                basis_[i] = n_ + m_ + art;
                ++art;
            } else {
                basis_[i] = n_ + i;
            }
        }
    }

    bool needs_phase1() const { return num_art_ > 0; }
    int pivots() const { return pivots_; }
    bool hit_pivot_cap() const { return hit_cap_; }

    // Maximize -sum(artificials). Returns false when the LP is infeasible.
    bool phase1() {
        double* obj = row(m_);
        std::fill(obj, obj + width_, 0.0);
        for (int j = n_ + m_; j < n_ + m_ + num_art_; ++j) obj[j] = 1.0;
        for (int i = 0; i < m_; ++i)
            if (basis_[i] >= n_ + m_)
                for (int j = 0; j < width_; ++j) obj[j] -= row(i)[j];

        // The phase-1 objective is bounded by 0, so a false return here can
        // only be the pivot cap.
        if (!iterate(/*allow_artificial=*/false)) return false;

        const double infeasibility = -obj[width_ - 1];
        const double tol = 1e-7 * std::max(1.0, rhs_scale());
        if (infeasibility > tol) return false;

        // Drive leftover artificials out of the basis where possible.
        for (int i = 0; i < m_; ++i) {
            if (basis_[i] < n_ + m_) continue;
            const double* r = row(i);
            for (int j = 0; j < n_ + m_; ++j) {
                if (std::fabs(r[j]) > kPivotTol) {
                    pivot(i, j);
                    break;
                }
            }
            // A fully zero row is redundant; the artificial stays basic at 0
            // and can never change because no entering column touches it.
        }
        return true;
    }

    enum class Phase2 { Optimal, Unbounded, PivotCap };

    Phase2 phase2(const std::vector<double>& c) {
        double* obj = row(m_);
        std::fill(obj, obj + width_, 0.0);
        for (int j = 0; j < n_; ++j) obj[j] = -c[j];
        for (int i = 0; i < m_; ++i) {
            const double w = obj[basis_[i]];
            if (w != 0.0) {
                const double* r = row(i);
                for (int j = 0; j < width_; ++j) obj[j] -= w * r[j];
            }
        }
        if (!iterate(/*allow_artificial=*/false))
            return hit_cap_ ? Phase2::PivotCap : Phase2::Unbounded;
        return Phase2::Optimal;
    }

    std::vector<double> solution() const {
        std::vector<double> x(n_, 0.0);
        for (int i = 0; i < m_; ++i)
            if (basis_[i] < n_) x[basis_[i]] = row(i)[width_ - 1];
        return x;
    }

    double objective_value() const { return row(m_)[width_ - 1]; }

private:
    double* row(int i) { return rows_.data() + static_cast<std::size_t>(i) * width_; }
    const double* row(int i) const { return rows_.data() + static_cast<std::size_t>(i) * width_; }

    double rhs_scale() const {
        double s = 0.0;
        for (int i = 0; i < m_; ++i) s = std::max(s, std::fabs(row(i)[width_ - 1]));
        return s;
    }

    // Bland's rule: entering = smallest-index improving column, leaving =
    // smallest basic label among the minimum-ratio rows.
    bool iterate(bool allow_artificial) {
        const int num_cols = allow_artificial ? n_ + m_ + num_art_ : n_ + m_;
        for (;;) {
            const double* obj = row(m_);
            int enter = -1;
            for (int j = 0; j < num_cols; ++j) {
                if (obj[j] < -kPivotTol) {
                    enter = j;
                    break;
                }
            }
            if (enter < 0) return true;

            int leave = -1;
            double best_ratio = std::numeric_limits<double>::infinity();
            for (int i = 0; i < m_; ++i) {
                const double a = row(i)[enter];
                if (a <= kPivotTol) continue;
                const double ratio = row(i)[width_ - 1] / a;
                if (ratio < best_ratio - 1e-12 ||
                    (ratio <= best_ratio + 1e-12 && (leave < 0 || basis_[i] < basis_[leave]))) {
                    best_ratio = ratio;
                    leave = i;
                }
            }
            if (leave < 0) return false;  // unbounded in the entering direction
            pivot(leave, enter);
            if (pivots_ >= kPivotCap) {
                hit_cap_ = true;
                return false;
            }
        }
    }

    void pivot(int r, int s) {
        ++pivots_;
        double* pr = row(r);
        const double inv = 1.0 / pr[s];
        for (int j = 0; j < width_; ++j) pr[j] *= inv;
        pr[s] = 1.0;
        for (int i = 0; i <= m_; ++i) {
            if (i == r) continue;
            double* ri = row(i);
            const double f = ri[s];
            if (f == 0.0) continue;
            for (int j = 0; j < width_; ++j) ri[j] -= f * pr[j];
            ri[s] = 0.0;
        }
        basis_[r] = s;
    }

    int m_, n_;
    int num_art_ = 0;
    int width_ = 0;
    int pivots_ = 0;
    bool hit_cap_ = false;
    std::vector<double> rows_;
    std::vector<int> basis_;
};

double l1_norm(const std::vector<double>& v) {
    double s = 0.0;
    for (double x : v) s += std::fabs(x);
    return s;
}

}  // namespace

const char* to_string(LpStatus s) {
    switch (s) {
        case LpStatus::Optimal: return "optimal";
        case LpStatus::Infeasible: return "infeasible";
        case LpStatus::Unbounded: return "unbounded";
        case LpStatus::MaxIterations: return "max_iterations";
    }
    return "unknown";
}

const char* to_string(LfpStatus s) {
    switch (s) {
        case LfpStatus::Optimal: return "optimal";
        case LfpStatus::Infeasible: return "infeasible";
        case LfpStatus::Unbounded: return "unbounded";
        case LfpStatus::NonpositiveDenominator: return "nonpositive_denominator";
        case LfpStatus::MaxIterations: return "max_iterations";
    }
    return "unknown";
}

LpResult lp_solve(const LpProblem& p) {
    validate_lp(p);
    LpResult result;

    Tableau tab(p.constraint_matrix, p.rhs);
    if (tab.needs_phase1() && !tab.phase1()) {
        result.status = tab.hit_pivot_cap() ? LpStatus::MaxIterations : LpStatus::Infeasible;
        result.pivots = tab.pivots();
        return result;
    }
    switch (tab.phase2(p.objective)) {
        case Tableau::Phase2::Unbounded:
            result.status = LpStatus::Unbounded;
            break;
        case Tableau::Phase2::PivotCap:
            result.status = LpStatus::MaxIterations;
            break;
        case Tableau::Phase2::Optimal:
            result.status = LpStatus::Optimal;
            result.x = tab.solution();
            result.value = tab.objective_value();
            break;
    }
    result.pivots = tab.pivots();
    return result;
}

std::vector<double> lfp_gamma(const LfpProblem& p) {
    if (p.num_c.size() != p.den_d.size())
        throw DimensionMismatch("lfp_gamma: numerator and denominator lengths differ");
    const double dd = dot(p.den_d, p.den_d);
    if (dd == 0.0) throw ZeroDenominatorDirection();
    const double cd = dot(p.num_c, p.den_d);
    std::vector<double> gamma(p.num_c.size());
    for (std::size_t i = 0; i < gamma.size(); ++i)
        gamma[i] = p.num_c[i] - (cd / dd) * p.den_d[i];
    return gamma;
}

LfpSolution lfp_solve(const LfpProblem& p, const LfpOptions& options) {
    const std::size_t n = p.constraint_matrix.cols();
    if (p.num_c.size() != n || p.den_d.size() != n)
        throw DimensionMismatch("lfp_solve: coefficient lengths do not match column count");

    LfpSolution sol;
    const auto denominator = [&](const std::vector<double>& x) {
        return dot(p.den_d, x) + p.den_beta;
    };
    const auto ratio = [&](const std::vector<double>& x) {
        return (dot(p.num_c, x) + p.num_alpha) / denominator(x);
    };
    const auto solve_lp = [&](const std::vector<double>& objective) {
        return lp_solve(LpProblem{objective, p.constraint_matrix, p.rhs});
    };
    const auto fail_from_lp = [&](LpStatus s) {
        switch (s) {
            case LpStatus::Infeasible: sol.status = LfpStatus::Infeasible; break;
            case LpStatus::Unbounded: sol.status = LfpStatus::Unbounded; break;
            default: sol.status = LfpStatus::MaxIterations; break;
        }
        return sol;
    };
    const auto record = [&](const std::vector<double>& x, double value) {
        ++sol.iterations;
        sol.trace.push_back(value);
        sol.vertex_trace.push_back(x);
    };

    const double den_scale = l1_norm(p.den_d) + std::fabs(p.den_beta);

    // Constant denominator: the objective is affine, hand it to the LP.
    if (l1_norm(p.den_d) == 0.0) {
        if (p.den_beta <= 0.0) {
            sol.status = LfpStatus::NonpositiveDenominator;
            return sol;
        }
        LpResult lp = solve_lp(p.num_c);
        if (lp.status != LpStatus::Optimal) return fail_from_lp(lp.status);
        sol.status = LfpStatus::Optimal;
        sol.x = lp.x;
        sol.value = ratio(lp.x);
        record(lp.x, sol.value);
        return sol;
    }

    std::vector<double> x_cur;
    double l_cur = 0.0;
    bool have_vertex = false;

    const std::vector<double> gamma = lfp_gamma(p);
    if (l1_norm(gamma) > 0.0) {
        LpResult lp = solve_lp(gamma);
        if (lp.status != LpStatus::Optimal) return fail_from_lp(lp.status);
        if (denominator(lp.x) <= kPivotTol * std::max(1.0, den_scale)) {
            sol.status = LfpStatus::NonpositiveDenominator;
            return sol;
        }
        x_cur = lp.x;
        l_cur = ratio(x_cur);
        record(x_cur, l_cur);
        have_vertex = true;
    } else {
        // c is parallel to d; seed the marginal objective with the ratio at
        // the origin of the shifted problem.
        l_cur = p.den_beta > 0.0 ? p.num_alpha / p.den_beta : 0.0;
    }

    std::vector<double> marginal(n);
    while (sol.iterations < options.max_iterations) {
        double marginal_inf = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            marginal[i] = p.num_c[i] - l_cur * p.den_d[i];
            marginal_inf = std::max(marginal_inf, std::fabs(marginal[i]));
        }
        const double offset_gap = p.num_alpha - l_cur * p.den_beta;
        const double zero_tol =
            1e-12 * (1.0 + l1_norm(p.num_c) + std::fabs(l_cur) * den_scale);
        if (have_vertex && marginal_inf <= zero_tol && std::fabs(offset_gap) <= zero_tol) {
            // The objective is constant at the current level; the vertex at
            // hand is already optimal.
            sol.status = LfpStatus::Optimal;
            sol.x = x_cur;
            sol.value = l_cur;
            return sol;
        }

        LpResult lp = solve_lp(marginal);
        if (lp.status != LpStatus::Optimal) return fail_from_lp(lp.status);
        if (denominator(lp.x) <= kPivotTol * std::max(1.0, den_scale)) {
            sol.status = LfpStatus::NonpositiveDenominator;
            return sol;
        }
        const double l_next = ratio(lp.x);
        record(lp.x, l_next);

        if (have_vertex) {
            double step = 0.0;
            for (std::size_t i = 0; i < n; ++i)
                step = std::max(step, std::fabs(lp.x[i] - x_cur[i]));
            if (step <= options.vertex_tolerance) {
                sol.status = LfpStatus::Optimal;
                sol.x = lp.x;
                sol.value = l_next;
                return sol;
            }
        }
        x_cur = lp.x;
        l_cur = l_next;
        have_vertex = true;
    }

    sol.status = LfpStatus::MaxIterations;
    sol.x = x_cur;
    sol.value = l_cur;
    return sol;
}

void write_trace_csv(const LfpSolution& s, std::ostream& out) {
    out << "iteration,objective";
    const std::size_t n = s.vertex_trace.empty() ? 0 : s.vertex_trace.front().size();
    for (std::size_t j = 0; j < n; ++j) out << ",x" << j + 1;
    out << "\n";
    char buf[64];
    for (std::size_t i = 0; i < s.trace.size(); ++i) {
        out << i + 1;
        std::snprintf(buf, sizeof(buf), ",%.10g", s.trace[i]);
        out << buf;
        if (i < s.vertex_trace.size())
            for (double v : s.vertex_trace[i]) {
                std::snprintf(buf, sizeof(buf), ",%.10g", v);
                out << buf;
            }
        out << "\n";
    }
}

void write_trace_csv(const LfpSolution& s, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open " + path + " for writing");
    write_trace_csv(s, out);
}

}  // namespace cetm::fracprog
