#pragma once

#include <string>
#include <vector>

#include "bpreg/solver.hpp"
#include "bpreg/types.hpp"

namespace bpreg {

/// 17 significant digits, shortest form ("%.17g").
std::string format_double(double v);

/// Panel CSV: header `t,i,y,x_1,...,x_J`; rows in any order on input,
/// sorted by (t, i) on output. Lines starting with '#' are comments.
Panel read_panel_csv(const std::string& path);
void write_panel_csv(const std::string& path, const Panel& panel,
                     const std::vector<std::string>& header_comments = {});

/// Fitted-path CSV: `t,beta_1,...,beta_J,max_foc_residual,converged`.
void write_betas_csv(const std::string& path, const CoefPath& fit);
CoefPath read_betas_csv(const std::string& path);

/// Truth CSV: `t,beta_1,...,beta_J` (no diagnostics).
void write_truth_csv(const std::string& path, const CoefPath& truth,
                     const std::vector<std::string>& header_comments = {});
CoefPath read_truth_csv(const std::string& path);

}  // namespace bpreg
