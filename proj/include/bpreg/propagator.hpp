#pragma once

#include <functional>
#include <vector>

#include "bpreg/types.hpp"

namespace bpreg {

/// One-dimensional positive wave function sampled on a strictly increasing
/// node grid.
struct WaveGrid {
  std::vector<double> x_nodes;
  std::vector<double> psi;
  double s = 0.0;

  WaveGrid(std::vector<double> nodes, std::vector<double> values, double s0 = 0.0);
  static WaveGrid uniform(double x_min, double x_max, int n_nodes,
                          const std::function<double(double)>& psi0, double s0 = 0.0);
};

/// One epsilon-step of the transition evolution: trapezoid quadrature of the
/// localized kernel exp(-(x-xi)^2/(2 eps^2)) * exp(-eps f(xi)) * psi(xi),
/// normalized per node so that the f == 0 step is exactly the identity.
WaveGrid transition_step(const WaveGrid& w, const std::function<double(double)>& f_of_x,
                         double epsilon);

/// Max-norm residual of the reduced evolution equation
/// d(psi)/ds = -f * psi between two consecutive states.
double schrodinger_residual(const WaveGrid& before, const WaveGrid& after,
                            const std::function<double(double)>& f_of_x, double epsilon);

}  // namespace bpreg
