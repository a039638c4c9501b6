#include "persuasion/lp.hpp"

#include <cmath>
#include <stdexcept>

namespace persuasion {

namespace {
constexpr double kPivotTol = 1e-10;
constexpr double kCostTol = 1e-9;
constexpr double kFeasTol = 1e-7;
constexpr int kDegenerateSwitch = 30;  // consecutive degenerate pivots before Bland
}  // namespace

void LinearProgram::add_eq(std::vector<double> row, double rhs) {
    if (static_cast<int>(row.size()) != num_vars)
        throw std::invalid_argument("lp row size mismatch");
    eq_rows.push_back(std::move(row));
    eq_rhs.push_back(rhs);
}

void LinearProgram::add_ge(std::vector<double> row, double rhs) {
    if (static_cast<int>(row.size()) != num_vars)
        throw std::invalid_argument("lp row size mismatch");
    ge_rows.push_back(std::move(row));
    ge_rhs.push_back(rhs);
}

std::string to_string(LpStatus status) {
    switch (status) {
        case LpStatus::Optimal: return "optimal";
        case LpStatus::Infeasible: return "infeasible";
        case LpStatus::Unbounded: return "unbounded";
    }
    return "?";
}

namespace {

/// Dense tableau state for one solve.
class Simplex {
  public:
    explicit Simplex(const LinearProgram& lp) : lp_(lp) {
        n_struct_ = lp.num_vars;
        const int n_ge = static_cast<int>(lp.ge_rows.size());
        m_ = static_cast<int>(lp.eq_rows.size()) + n_ge;
        n_cols_ = n_struct_ + n_ge;  // structural + surplus
        art_offset_ = n_cols_;
        width_ = n_cols_ + m_ + 1;  // + artificials + rhs
        rhs_col_ = n_cols_ + m_;

        tableau_.assign(static_cast<std::size_t>(m_) * width_, 0.0);
        basis_.assign(m_, 0);
        allowed_.assign(n_cols_ + m_, 1);

        int row = 0;
        for (std::size_t i = 0; i < lp.eq_rows.size(); ++i, ++row)
            fill_row(row, lp.eq_rows[i], lp.eq_rhs[i], -1);
        for (std::size_t i = 0; i < lp.ge_rows.size(); ++i, ++row)
            fill_row(row, lp.ge_rows[i], lp.ge_rhs[i], n_struct_ + static_cast<int>(i));
        for (int i = 0; i < m_; ++i) {
            at(i, art_offset_ + i) = 1.0;
            basis_[i] = art_offset_ + i;
        }
    }

    LpOutcome run() {
        LpOutcome out;
        if (m_ == 0) {  // no constraints: x = 0 unless the objective improves
            for (int j = 0; j < n_struct_; ++j)
                if (lp_.objective[j] > kCostTol) {
                    out.status = LpStatus::Unbounded;
                    return out;
                }
            out.status = LpStatus::Optimal;
            out.x.assign(n_struct_, 0.0);
            out.value = 0.0;
            return out;
        }

        // Phase 1: maximize minus the artificial sum.
        cost_.assign(width_, 0.0);
        for (int i = 0; i < m_; ++i) {
            // reduced costs with artificial basis: c_j + sum_i a_ij for structural j
            for (int j = 0; j < n_cols_; ++j) cost_[j] += at(i, j);
            cost_[rhs_col_] += at(i, rhs_col_);
        }
        if (!iterate(/*phase_one=*/true)) throw std::runtime_error("simplex: iteration limit in phase 1");
        if (cost_[rhs_col_] > kFeasTol) {
            out.status = LpStatus::Infeasible;
            return out;
        }
        drive_out_artificials();
        for (int i = 0; i < m_; ++i) allowed_[art_offset_ + i] = 0;

        // Phase 2: reduced costs of the real objective under the current basis.
        cost_.assign(width_, 0.0);
        for (int j = 0; j < n_struct_; ++j) cost_[j] = lp_.objective[j];
        for (int i = 0; i < m_; ++i) {
            const int b = basis_[i];
            const double cb = (b < n_struct_) ? lp_.objective[b] : 0.0;
            if (cb == 0.0) continue;
            for (int j = 0; j < width_; ++j) cost_[j] -= cb * at(i, j);
        }
        if (!iterate(/*phase_one=*/false)) throw std::runtime_error("simplex: iteration limit in phase 2");
        if (unbounded_) {
            out.status = LpStatus::Unbounded;
            return out;
        }

        out.status = LpStatus::Optimal;
        out.x.assign(n_struct_, 0.0);
        for (int i = 0; i < m_; ++i)
            if (basis_[i] < n_struct_) out.x[basis_[i]] = at(i, rhs_col_);
        out.value = 0.0;
        for (int j = 0; j < n_struct_; ++j) out.value += lp_.objective[j] * out.x[j];
        return out;
    }

  private:
    double& at(int i, int j) { return tableau_[static_cast<std::size_t>(i) * width_ + j]; }
    double at(int i, int j) const {
        return tableau_[static_cast<std::size_t>(i) * width_ + j];
    }

    void fill_row(int row, const std::vector<double>& coeffs, double rhs, int surplus) {
        const double sign = (rhs < 0.0) ? -1.0 : 1.0;
        for (int j = 0; j < n_struct_; ++j) at(row, j) = sign * coeffs[j];
        if (surplus >= 0) at(row, surplus) = -sign;
        at(row, rhs_col_) = sign * rhs;
    }

    int entering_dantzig() const {
        int best = -1;
        double best_cost = kCostTol;
        for (int j = 0; j < n_cols_ + m_; ++j) {
            if (!allowed_[j]) continue;
            if (cost_[j] > best_cost) {
                best_cost = cost_[j];
                best = j;
            }
        }
        return best;
    }

    int entering_bland() const {
        for (int j = 0; j < n_cols_ + m_; ++j)
            if (allowed_[j] && cost_[j] > kCostTol) return j;
        return -1;
    }

    int leaving_row(int col) const {
        int best = -1;
        double best_ratio = 0.0;
        for (int i = 0; i < m_; ++i) {
            const double a = at(i, col);
            if (a <= kPivotTol) continue;
            const double ratio = at(i, rhs_col_) / a;
            if (best < 0 || ratio < best_ratio - kPivotTol ||
                (std::abs(ratio - best_ratio) <= kPivotTol && basis_[i] < basis_[best])) {
                best = i;
                best_ratio = ratio;
            }
        }
        return best;
    }

    void pivot(int row, int col) {
        const double piv = at(row, col);
        const double inv = 1.0 / piv;
        for (int j = 0; j < width_; ++j) at(row, j) *= inv;
        at(row, col) = 1.0;
        for (int i = 0; i < m_; ++i) {
            if (i == row) continue;
            const double factor = at(i, col);
            if (factor == 0.0) continue;
            for (int j = 0; j < width_; ++j) at(i, j) -= factor * at(row, j);
            at(i, col) = 0.0;
        }
        const double cfactor = cost_[col];
        if (cfactor != 0.0) {
            for (int j = 0; j < width_; ++j) cost_[j] -= cfactor * at(row, j);
            cost_[col] = 0.0;
        }
        basis_[row] = col;
    }

    bool iterate(bool phase_one) {
        unbounded_ = false;
        int degenerate_run = 0;
        const long limit = 10000 + 50L * (m_ + n_cols_);
        for (long it = 0; it < limit; ++it) {
            const bool bland = degenerate_run >= kDegenerateSwitch;
            const int col = bland ? entering_bland() : entering_dantzig();
            if (col < 0) return true;  // optimal for this phase
            const int row = leaving_row(col);
            if (row < 0) {
                if (phase_one) throw std::runtime_error("simplex: phase 1 unbounded");
                unbounded_ = true;
                return true;
            }
            const bool degenerate = at(row, rhs_col_) <= kPivotTol;
            degenerate_run = degenerate ? degenerate_run + 1 : 0;
            pivot(row, col);
        }
        return false;
    }

    /// After phase 1, remove zero-level artificials from the basis where a
    /// well-scaled structural pivot exists; rows without one are redundant
    /// and stay inert. The entering value |rhs/pivot| must stay negligible,
    /// otherwise the pivot would push the basis out of the feasible region.
    void drive_out_artificials() {
        for (int i = 0; i < m_; ++i) {
            if (basis_[i] < art_offset_) continue;
            int col = -1;
            double best = kPivotTol;
            for (int j = 0; j < n_cols_; ++j) {
                if (std::abs(at(i, j)) > best) {
                    best = std::abs(at(i, j));
                    col = j;
                }
            }
            if (col >= 0 && std::abs(at(i, rhs_col_)) <= 1e-9 * best) pivot(i, col);
        }
    }

    const LinearProgram& lp_;
    int n_struct_ = 0, m_ = 0, n_cols_ = 0, art_offset_ = 0, width_ = 0, rhs_col_ = 0;
    std::vector<double> tableau_;
    std::vector<double> cost_;
    std::vector<int> basis_;
    std::vector<unsigned char> allowed_;
    bool unbounded_ = false;
};

}  // namespace

LpOutcome lp_solve(const LinearProgram& lp) {
    if (static_cast<int>(lp.objective.size()) != lp.num_vars)
        throw std::invalid_argument("lp objective size mismatch");
    Simplex solver(lp);
    return solver.run();
}

}  // namespace persuasion
