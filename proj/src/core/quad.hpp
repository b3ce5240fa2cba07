#pragma once
#include <functional>
#include <vector>

#include "core/common.hpp"

namespace dph::quad {

struct Rule {
  Vec nodes;
  Vec weights;
};

// Gauss-Legendre rule with n nodes on [a, b].
Rule gauss_legendre(int n, double a, double b);

// Composite Simpson with n uniform intervals (midpoint refinement per interval).
double simpson(const std::function<double(double)>& f, double a, double b, int n);

// Prefix integrals of f on a uniform grid: out[i] = int_{x0}^{x0+i*h} f,
// each interval integrated with a 3-point Simpson rule.
std::vector<double> simpson_prefix(const std::function<double(double)>& f, double x0, double h, int intervals);

}  // namespace dph::quad
