#include "bpreg/propagator.hpp"

#include <cmath>

namespace bpreg {

WaveGrid::WaveGrid(std::vector<double> nodes, std::vector<double> values, double s0)
    : x_nodes(std::move(nodes)), psi(std::move(values)), s(s0) {
  if (x_nodes.size() < 2 || x_nodes.size() != psi.size())
    throw InvalidSpec("WaveGrid: need matching node/value arrays with >= 2 nodes");
  for (size_t i = 0; i < x_nodes.size(); ++i) {
    if (!std::isfinite(x_nodes[i]) || !std::isfinite(psi[i]))
      throw NonFiniteValue("WaveGrid: non-finite node or value");
    if (i > 0 && x_nodes[i] <= x_nodes[i - 1])
      throw InvalidSpec("WaveGrid: nodes must be strictly increasing");
    if (psi[i] <= 0.0) throw NegativePsi("WaveGrid: psi must be positive");
  }
}

WaveGrid WaveGrid::uniform(double x_min, double x_max, int n_nodes,
                           const std::function<double(double)>& psi0, double s0) {
  if (n_nodes < 2 || !(x_max > x_min)) throw InvalidSpec("WaveGrid::uniform: bad range");
  std::vector<double> xs(static_cast<size_t>(n_nodes)), ps(static_cast<size_t>(n_nodes));
  for (int i = 0; i < n_nodes; ++i) {
    const double x = x_min + (x_max - x_min) * i / (n_nodes - 1);
    xs[static_cast<size_t>(i)] = x;
    ps[static_cast<size_t>(i)] = psi0(x);
  }
  return WaveGrid(std::move(xs), std::move(ps), s0);
}

namespace {

// Trapezoid weights for a (possibly non-uniform) node grid.
std::vector<double> trapezoid_weights(const std::vector<double>& xs) {
  const size_t n = xs.size();
  std::vector<double> w(n, 0.0);
  for (size_t i = 0; i + 1 < n; ++i) {
    const double h = xs[i + 1] - xs[i];
    w[i] += 0.5 * h;
    w[i + 1] += 0.5 * h;
  }
  return w;
}

}  // namespace

WaveGrid transition_step(const WaveGrid& w, const std::function<double(double)>& f_of_x,
                         double epsilon) {
  if (!(epsilon > 0.0)) throw InvalidSpec("transition_step: epsilon must be positive");
  const size_t n = w.x_nodes.size();

  std::vector<double> damp(n);
  for (size_t i = 0; i < n; ++i) {
    const double fv = f_of_x(w.x_nodes[i]);
    if (!std::isfinite(fv)) throw UnboundedF("transition_step: f is unbounded on the grid");
    const double e = -epsilon * fv;
    if (e > 700.0) throw UnboundedF("transition_step: exp(-eps*f) overflows");
    damp[i] = std::exp(e);
  }

  const std::vector<double> qw = trapezoid_weights(w.x_nodes);

  // Localization kernel width ~ epsilon; the per-node normalization makes
  // the f == 0 step the identity and lets constant f pass through exactly.
  const double inv_two_var = 1.0 / (2.0 * epsilon * epsilon);
  std::vector<double> out(n);
  for (size_t a = 0; a < n; ++a) {
    double num = 0.0, den = 0.0;
    for (size_t b = 0; b < n; ++b) {
      const double u = w.x_nodes[a] - w.x_nodes[b];
      const double ke = u * u * inv_two_var;
      if (ke > 700.0) continue;
      const double kw = std::exp(-ke) * qw[b] * w.psi[b];
      num += kw * damp[b];
      den += kw;
    }
    if (den <= 0.0)
      throw NegativePsi("transition_step: quadrature lost all mass (grid too coarse)");
    out[a] = w.psi[a] * num / den;
    if (out[a] <= 0.0)
      throw NegativePsi("transition_step: nonpositive psi after step");
  }
  return WaveGrid(w.x_nodes, std::move(out), w.s + epsilon);
}

double schrodinger_residual(const WaveGrid& before, const WaveGrid& after,
                            const std::function<double(double)>& f_of_x, double epsilon) {
  if (before.x_nodes != after.x_nodes)
    throw GridMismatch("schrodinger_residual: node grids differ");
  if (!(epsilon > 0.0)) throw InvalidSpec("schrodinger_residual: epsilon must be positive");
  double worst = 0.0;
  for (size_t i = 0; i < before.x_nodes.size(); ++i) {
    const double d = (after.psi[i] - before.psi[i]) / epsilon +
                     f_of_x(before.x_nodes[i]) * before.psi[i];
    worst = std::max(worst, std::abs(d));
  }
  return worst;
}

}  // namespace bpreg
