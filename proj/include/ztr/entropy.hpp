#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace ztr {

// s log|s| with the continuous extension 0 log 0 = 0.
double xlogx(double s);

// |s log|s| + t log|t| - (s+t) log|s+t||; bounded by 2 log 2 (|s| + |t|).
double entropy_defect(double s, double t);

// H(x) = (sum x_i) log|sum x_i| - sum x_i log|x_i|; positively homogeneous,
// H(uniform on n points) = log n.
double entropy_H(const std::vector<double>& x);

// Element of the Ribe extension: pairs (x, y) with norm
// sum_i (|x_i| + |y_i - x_i log|x_i||).
struct RibeElement {
  std::vector<double> x;
  std::vector<double> y;
};

double ribe_norm(const RibeElement& v);
RibeElement ribe_add(const RibeElement& u, const RibeElement& v);

// Quasi-norm constant of the addition: ||u+v|| <= C (||u|| + ||v||) with
// C = 1 + 2 log 2.
double ribe_quasi_constant();

// Witness that the extension does not split with uniformly bounded
// retraction constants: for a putative splitting bounded by L on basis
// vectors, the uniform vector on n points forces an error >= log n - L.
// Returns the smallest n = ceil(exp(L + eps)) and the achieved defect.
struct NonsplitWitness {
  uint64_t n = 0;
  double defect = 0.0;
};
NonsplitWitness nonsplit_witness(double L, double eps);

}  // namespace ztr
