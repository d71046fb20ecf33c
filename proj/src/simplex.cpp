#include "phasereg/simplex.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "phasereg/errors.hpp"

namespace phasereg {

SimplexResult nelder_mead(const std::function<double(const Eigen::VectorXd&)>& f,
                          const Eigen::VectorXd& x0, const Eigen::VectorXd& step,
                          const SimplexOptions& options) {
  const int dim = static_cast<int>(x0.size());
  if (dim < 1) throw DomainError("nelder_mead: empty start point");
  if (step.size() != x0.size()) throw DomainError("nelder_mead: step size mismatch");
  const int max_iter = options.max_iter > 0 ? options.max_iter : 500 * dim;

  std::vector<Eigen::VectorXd> xs(dim + 1, x0);
  std::vector<double> fs(dim + 1);
  for (int i = 0; i < dim; ++i) xs[i + 1](i) += step(i);
  for (int i = 0; i <= dim; ++i) fs[i] = f(xs[i]);

  std::vector<int> order(dim + 1);
  std::iota(order.begin(), order.end(), 0);
  const auto sort_order = [&] {
    std::stable_sort(order.begin(), order.end(),
                     [&](int a, int b) { return fs[a] < fs[b]; });
  };

  const auto stopped = [&] {
    const Eigen::VectorXd& best = xs[order[0]];
    double diam = 0.0;
    for (int i = 1; i <= dim; ++i) {
      diam = std::max(diam, (xs[order[i]] - best).cwiseAbs().maxCoeff());
    }
    const double spread = fs[order[dim]] - fs[order[0]];
    return diam <= options.diam_tol * (1.0 + best.cwiseAbs().maxCoeff()) &&
           spread <= options.spread_tol * (1.0 + std::abs(fs[order[0]]));
  };

  SimplexResult result;
  int iter = 0;
  sort_order();
  for (; iter < max_iter; ++iter) {
    if (stopped()) {
      result.converged = true;
      break;
    }
    const int worst = order[dim];
    Eigen::VectorXd centroid = Eigen::VectorXd::Zero(dim);
    for (int i = 0; i < dim; ++i) centroid += xs[order[i]];
    centroid /= dim;

    const Eigen::VectorXd reflected = centroid + (centroid - xs[worst]);
    const double fr = f(reflected);
    if (fr < fs[order[0]]) {
      const Eigen::VectorXd expanded = centroid + 2.0 * (centroid - xs[worst]);
      const double fe = f(expanded);
      if (fe < fr) {
        xs[worst] = expanded;
        fs[worst] = fe;
      } else {
        xs[worst] = reflected;
        fs[worst] = fr;
      }
    } else if (fr < fs[order[dim - 1]]) {
      xs[worst] = reflected;
      fs[worst] = fr;
    } else {
      // Contract toward the better of (worst, reflected); shrink on failure.
      const bool outside = fr < fs[worst];
      const Eigen::VectorXd contracted =
          centroid + 0.5 * ((outside ? reflected : xs[worst]) - centroid);
      const double fc = f(contracted);
      if (fc < std::min(fr, fs[worst])) {
        xs[worst] = contracted;
        fs[worst] = fc;
      } else {
        const Eigen::VectorXd& best = xs[order[0]];
        for (int i = 1; i <= dim; ++i) {
          xs[order[i]] = best + 0.5 * (xs[order[i]] - best);
          fs[order[i]] = f(xs[order[i]]);
        }
      }
    }
    sort_order();
  }

  result.x = xs[order[0]];
  result.fx = fs[order[0]];
  result.iterations = iter;
  return result;
}

}  // namespace phasereg
